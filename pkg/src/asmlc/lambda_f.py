"""Benign constants over datatypes: signatures, F-redexes, and the
F-first leftmost strategy with double-decorated traces.

A constant applied to exactly arity-many codes of the declared datatypes
is an F-redex and contracts in one step to the code of the semantic
result.  Codes of the Boolean datatype are the lambda booleans
``\\x y.x`` / ``\\x y.y`` so that guard results can drive beta selection;
codes of every other datatype are opaque Code nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .reduction import (
    Addr,
    ReduceResult,
    ReductionError,
    Status,
    Step,
    Trace,
    beta_step,
    leftmost_redex,
    subterm_at,
    replace_at,
)
from .terms import Abs, App, Code, Const, Term, Value, Var, lam, spine

BOOL = "Bool"

TRUE_TERM: Term = lam(["x", "y"], Var("x"))
FALSE_TERM: Term = lam(["x", "y"], Var("y"))


def bool_term(b: bool) -> Term:
    return TRUE_TERM if b else FALSE_TERM


def match_bool(t: Term) -> Optional[bool]:
    """Decode a lambda boolean (up to alpha), or None."""
    if isinstance(t, Abs) and isinstance(t.body, Abs):
        v = t.body.body
        if isinstance(v, Var):
            if v.name == t.body.binder:
                return False
            if v.name == t.binder:
                return True
    return None


def code_term(value: Value) -> Term:
    """The code of a datatype element (lambda boolean for Bool)."""
    if value.datatype == BOOL:
        return bool_term(bool(value.payload))
    return Code(value)


def match_code(t: Term, datatype: str) -> Optional[Value]:
    """Decode the code of an element of ``datatype``, or None."""
    if datatype == BOOL:
        b = match_bool(t)
        return None if b is None else Value(BOOL, b)
    if isinstance(t, Code) and t.value.datatype == datatype:
        return t.value
    return None


class UndefinedApplication(ReductionError):
    """A partial semantic function has no value on these arguments."""

    def __init__(self, symbol: str, args: tuple):
        super().__init__(f"{symbol} undefined on {args!r}")
        self.symbol = symbol
        self.args = args


@dataclass(frozen=True)
class FFunction:
    name: str
    arg_datatypes: tuple[str, ...]
    result_datatype: str
    fn: Callable  # payload args -> payload, or None when undefined

    @property
    def arity(self) -> int:
        return len(self.arg_datatypes)

    def apply(self, args: tuple[Value, ...]) -> Value:
        out = self.fn(*(a.payload for a in args))
        if out is None:
            raise UndefinedApplication(self.name, tuple(a.payload for a in args))
        return Value(self.result_datatype, out)


@dataclass
class FSignature:
    """A family of semantic functions indexed by constant name."""

    functions: dict[str, FFunction] = field(default_factory=dict)

    def add(self, name, arg_datatypes, result_datatype, fn) -> FFunction:
        if name in self.functions:
            raise ValueError(f"duplicate function {name}")
        f = FFunction(name, tuple(arg_datatypes), result_datatype, fn)
        self.functions[name] = f
        return f

    def get(self, name: str) -> Optional[FFunction]:
        return self.functions.get(name)

    def extend(self, other: "FSignature") -> "FSignature":
        merged = dict(self.functions)
        merged.update(other.functions)
        return FSignature(merged)


def standard_bool_signature() -> FSignature:
    sig = FSignature()
    sig.add("not", (BOOL,), BOOL, lambda a: not a)
    sig.add("and", (BOOL, BOOL), BOOL, lambda a, b: a and b)
    sig.add("or", (BOOL, BOOL), BOOL, lambda a, b: a or b)
    return sig


def _f_redex_here(t: Term, sig: FSignature) -> Optional[tuple[FFunction, tuple[Value, ...]]]:
    head, args = spine(t)
    if not isinstance(head, Const):
        return None
    f = sig.get(head.symbol)
    if f is None or len(args) != f.arity:
        return None
    vals = []
    for a, dt in zip(args, f.arg_datatypes):
        v = match_code(a, dt)
        if v is None:
            return None
        vals.append(v)
    return f, tuple(vals)


def f_redexes(t: Term, sig: FSignature) -> list[Addr]:
    """All F-redex addresses, in prefix order.  Distinct F-redexes are
    disjoint subterms."""
    out: list[Addr] = []
    stack: list[tuple[Term, Addr]] = [(t, ())]
    while stack:
        s, at = stack.pop()
        if _f_redex_here(s, sig) is not None:
            out.append(at)
            continue  # arguments are codes: nothing below can be a redex
        if isinstance(s, App):
            stack.append((s.arg, at + ("arg",)))
            stack.append((s.fun, at + ("fun",)))
        elif isinstance(s, Abs):
            stack.append((s.body, at + ("body",)))
    return out


def leftmost_f_redex(t: Term, sig: FSignature) -> Optional[Addr]:
    stack: list[tuple[Term, Addr]] = [(t, ())]
    while stack:
        s, at = stack.pop()
        if _f_redex_here(s, sig) is not None:
            return at
        if isinstance(s, App):
            stack.append((s.arg, at + ("arg",)))
            stack.append((s.fun, at + ("fun",)))
        elif isinstance(s, Abs):
            stack.append((s.body, at + ("body",)))
    return None


def f_step(t: Term, at: Addr, sig: FSignature) -> Term:
    """Contract the F-redex at ``at``; raises UndefinedApplication when
    the semantic function has no value there."""
    redex = subterm_at(t, at)
    hit = _f_redex_here(redex, sig)
    if hit is None:
        raise ReductionError(f"no F-redex at {at!r}")
    f, vals = hit
    return replace_at(t, at, code_term(f.apply(vals)))


def contains_f_redex(t: Term, sig: FSignature) -> bool:
    return leftmost_f_redex(t, sig) is not None


def is_normal_form(t: Term, sig: FSignature) -> bool:
    return leftmost_redex(t) is None and leftmost_f_redex(t, sig) is None


def reduce_leftmost_f(t: Term, sig: FSignature, max_steps: int) -> ReduceResult:
    """F-first leftmost reduction with a full double-decorated trace.

    Contracts the leftmost F-redex if one exists anywhere in the term,
    else the leftmost beta redex.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    steps: list[Step] = []
    for _ in range(max_steps):
        at = leftmost_f_redex(t, sig)
        if at is not None:
            try:
                t = f_step(t, at, sig)
            except UndefinedApplication:
                return ReduceResult(t, Trace(tuple(steps)), Status.UNDEFINED)
            steps.append(Step("f", at, t))
            continue
        at = leftmost_redex(t)
        if at is None:
            return ReduceResult(t, Trace(tuple(steps)), Status.NORMAL)
        t = beta_step(t, at)
        steps.append(Step("beta", at, t))
    status = Status.NORMAL if is_normal_form(t, sig) else Status.BUDGET
    return ReduceResult(t, Trace(tuple(steps)), status)


# ---------------------------------------------------------------------------
# Delta lists: finite-difference state for dynamic functions.


@dataclass(frozen=True)
class DeltaType:
    """One tuple type epsilon = (arg datatypes..., result datatype) with
    its list datatype and the five operation names."""

    name: str
    arg_datatypes: tuple[str, ...]
    result_datatype: str

    @property
    def list_datatype(self) -> str:
        return f"L_{self.name}"

    def op_name(self, op: str) -> str:
        return f"{op}_{self.name}"


@dataclass
class DeltaSignature:
    deltas: dict[str, DeltaType] = field(default_factory=dict)

    def add(self, name, arg_datatypes, result_datatype) -> DeltaType:
        d = DeltaType(name, tuple(arg_datatypes), result_datatype)
        self.deltas[name] = d
        return d


def delta_semantics(op: str, args: tuple):
    """Pure semantics of the five delta-list operations.

    ``seq`` is a tuple of (m+1)-tuples; ``V`` returns None (undefined)
    unless the sequence is functional and the key is present.
    """
    if op == "F":
        (seq,) = args
        keys = [t[:-1] for t in seq]
        return len(keys) == len(set(keys))
    if op == "B":
        seq, key = args
        return any(t[:-1] == key for t in seq)
    if op == "V":
        seq, key = args
        if not delta_semantics("F", (seq,)) or not delta_semantics("B", (seq, key)):
            return None
        for t in seq:
            if t[:-1] == key:
                return t[-1]
    if op == "Add":
        seq, tup = args
        return seq + (tup,)
    if op == "Del":
        seq, tup = args
        return tuple(t for t in seq if t != tup)
    if op not in ("F", "B", "V", "Add", "Del"):
        raise ValueError(f"unknown delta operation {op}")


def install_delta(sig: FSignature, d: DeltaType, totalize_default=None) -> None:
    """Register the five delta constants for ``d`` into ``sig``.

    ``totalize_default``: when given, V returns it instead of being
    undefined (used by the compiler, which guards every lookup).
    """
    L = d.list_datatype
    m = len(d.arg_datatypes)

    def f_fn(seq):
        return delta_semantics("F", (seq,))

    def b_fn(seq, *key):
        return delta_semantics("B", (seq, tuple(key)))

    def v_fn(seq, *key):
        out = delta_semantics("V", (seq, tuple(key)))
        if out is None:
            return totalize_default
        return out

    def add_fn(seq, *tup):
        return delta_semantics("Add", (seq, tuple(tup)))

    def del_fn(seq, *tup):
        return delta_semantics("Del", (seq, tuple(tup)))

    sig.add(d.op_name("F"), (L,), BOOL, f_fn)
    sig.add(d.op_name("B"), (L,) + d.arg_datatypes, BOOL, b_fn)
    sig.add(d.op_name("V"), (L,) + d.arg_datatypes, d.result_datatype, v_fn)
    sig.add(d.op_name("Add"), (L,) + d.arg_datatypes + (d.result_datatype,), L, add_fn)
    sig.add(d.op_name("Del"), (L,) + d.arg_datatypes + (d.result_datatype,), L, del_fn)
