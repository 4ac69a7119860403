"""Good terms: abstraction-free composition trees of constants over
variables and codes, with their semantics and exact F-reduction cost.

Reducing a good term whose variables carry codes performs one F-step
per constant node whose arguments reach codes — and since every node's
arguments do once the leaves are codes, the leftmost cost is exactly
the node count, independent of the substituted values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .lambda_f import FSignature, UndefinedApplication, code_term, match_code
from .reduction import Status
from .terms import Const, Term, Value, Var, app
from . import lambda_f


class GoodTerm:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class GVar(GoodTerm):
    name: str
    datatype: str


@dataclass(frozen=True, slots=True)
class GCode(GoodTerm):
    value: Value


@dataclass(frozen=True, slots=True)
class GApp(GoodTerm):
    symbol: str
    args: tuple[GoodTerm, ...] = ()


def check_good(t: GoodTerm, sig: FSignature) -> str:
    """Check arities and datatype composition; return the datatype."""
    if isinstance(t, GVar):
        return t.datatype
    if isinstance(t, GCode):
        return t.value.datatype
    f = sig.get(t.symbol)
    if f is None:
        raise ValueError(f"unknown constant {t.symbol}")
    if len(t.args) != f.arity:
        raise ValueError(f"{t.symbol} expects {f.arity} arguments")
    for a, dt in zip(t.args, f.arg_datatypes):
        if check_good(a, sig) != dt:
            raise ValueError(f"datatype mismatch under {t.symbol}")
    return f.result_datatype


def to_term(t: GoodTerm) -> Term:
    if isinstance(t, GVar):
        return Var(t.name)
    if isinstance(t, GCode):
        return code_term(t.value)
    return app(Const(t.symbol), *(to_term(a) for a in t.args))


def const_count(t: GoodTerm) -> int:
    """Number of constant nodes: the exact F-cost of full reduction."""
    if isinstance(t, GApp):
        return 1 + sum(const_count(a) for a in t.args)
    return 0


def variables(t: GoodTerm) -> list[GVar]:
    """Variable leaves in left-to-right order, without duplicates."""
    seen: dict[str, GVar] = {}

    def walk(s: GoodTerm):
        if isinstance(s, GVar):
            if s.name not in seen:
                seen[s.name] = s
        elif isinstance(s, GApp):
            for a in s.args:
                walk(a)

    walk(t)
    return list(seen.values())


def semantics(t: GoodTerm, sig: FSignature, valuation: dict[str, Value]) -> Optional[Value]:
    """Evaluate the composition; None when a partial function misses."""
    if isinstance(t, GVar):
        v = valuation[t.name]
        if v.datatype != t.datatype:
            raise ValueError(f"valuation for {t.name} has wrong datatype")
        return v
    if isinstance(t, GCode):
        return t.value
    f = sig.functions[t.symbol]
    vals = []
    for a in t.args:
        v = semantics(a, sig, valuation)
        if v is None:
            return None
        vals.append(v)
    try:
        return f.apply(tuple(vals))
    except UndefinedApplication:
        return None


def substitute_codes(t: GoodTerm, valuation: dict[str, Value]) -> Term:
    """The lambda term t[codes/variables]."""
    if isinstance(t, GVar):
        return code_term(valuation[t.name])
    if isinstance(t, GCode):
        return code_term(t.value)
    return app(Const(t.symbol), *(substitute_codes(a, valuation) for a in t.args))


def reduce_cost(t: GoodTerm, sig: FSignature, valuations: Iterable[dict[str, Value]]) -> int:
    """Measure the F-cost of leftmost reduction of t[codes/variables]
    across valuations where the semantics is defined.

    Asserts: zero beta steps, result equals the semantics, and the same
    F-count on every valuation; returns that count.
    """
    costs = set()
    for val in valuations:
        expected = semantics(t, sig, val)
        if expected is None:
            raise ValueError("reduce_cost requires a defined valuation")
        r = lambda_f.reduce_leftmost_f(substitute_codes(t, val), sig, 10_000)
        if r.status is not Status.NORMAL:
            raise RuntimeError("good-term reduction did not normalize")
        if r.trace.beta_count != 0:
            raise RuntimeError("good-term reduction used a beta step")
        if match_code(r.term, expected.datatype) != expected:
            raise RuntimeError("good-term reduction disagrees with semantics")
        costs.add(r.trace.f_count)
    if len(costs) != 1:
        raise RuntimeError(f"F-cost not value-independent: {sorted(costs)}")
    return costs.pop()


def from_asm_term(t, voc, sorts_to_datatypes=None) -> GoodTerm:
    """Translate a static-only ASM term (dynamic constants allowed, they
    become variables) into a good term.  Sort names double as datatype
    names unless a renaming is given."""
    from .asm import TApp, TVar, Vocabulary  # local to avoid import cycles

    rename = sorts_to_datatypes or {}

    def dt(sort: str) -> str:
        return rename.get(sort, sort)

    def walk(s) -> GoodTerm:
        if isinstance(s, TVar):
            return GVar(s.name, dt(s.sort))
        sym = voc.symbol(s.head)
        if sym.kind == "dynamic":
            if sym.arity != 0:
                raise ValueError(
                    f"dynamic symbol {sym.name} has arity {sym.arity}; "
                    "only dynamic constants translate directly"
                )
            return GVar(s.head, dt(sym.result_sort))
        return GApp(s.head, tuple(walk(a) for a in s.args))

    return walk(t)
