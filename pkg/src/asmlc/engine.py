"""Counting engine facade: picks the compiled kernel when available,
falls back to the pure-Python one, and converts between the Term trees
and the kernel's tuple representation.

``KERNEL_NAME`` reports which implementation was selected.
"""
from __future__ import annotations

from typing import Optional

from .lambda_f import BOOL, FSignature, match_bool
from .terms import Abs, App, Code, Const, Term, Value, Var

try:  # pragma: no cover - exercised only when the extension is built
    from . import _speedups as _kernel

    KERNEL_NAME = "compiled"
except ImportError:
    from . import _engine_py as _kernel

    KERNEL_NAME = "pure-python"

from . import _engine_py as pure_kernel

VAR, ABS, APP, CONST, CODE = 0, 1, 2, 3, 4

STATUS_NORMAL = 0
STATUS_RAN = 1
STATUS_UNDEFINED = 2


def to_tuple(t: Term):
    if isinstance(t, Var):
        return (VAR, t.name)
    if isinstance(t, Abs):
        return (ABS, t.binder, to_tuple(t.body))
    if isinstance(t, App):
        return (APP, to_tuple(t.fun), to_tuple(t.arg))
    if isinstance(t, Const):
        return (CONST, t.symbol)
    if isinstance(t, Code):
        if t.value.datatype == BOOL:
            raise ValueError("Boolean values must be lambda booleans, not Code nodes")
        return (CODE, t.value.datatype, t.value.payload)
    raise TypeError(f"not a term: {t!r}")


def from_tuple(t) -> Term:
    tag = t[0]
    if tag == VAR:
        return Var(t[1])
    if tag == ABS:
        return Abs(t[1], from_tuple(t[2]))
    if tag == APP:
        return App(from_tuple(t[1]), from_tuple(t[2]))
    if tag == CONST:
        return Const(t[1])
    if tag == CODE:
        return Code(Value(t[1], t[2]))
    raise ValueError(f"bad tag {tag!r}")


def signature_table(sig: FSignature) -> dict:
    """Lower an FSignature to the kernel's dict form."""
    return {
        name: (f.arity, f.arg_datatypes, f.result_datatype, f.fn)
        for name, f in sig.functions.items()
    }


def advance_term(t: Term, sig_table: dict, max_steps: int, kernel=None):
    """Advance ``t`` by up to ``max_steps`` F-first leftmost steps using
    the counting kernel.  Returns (term, beta_count, f_count, status).
    """
    k = kernel if kernel is not None else _kernel
    tup, beta, f, status = k.advance(to_tuple(t), sig_table, max_steps)
    return from_tuple(tup), beta, f, status
