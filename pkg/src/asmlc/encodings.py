"""Canonical lambda encodings: booleans and connectives, tuples and
projections, naturals, branch selectors, and the Scott encoder for
inductive datatypes — each with measured-cost certificates.

Costs are measured under the strict one-redex-per-step convention of
the reduction kernel; ``CostCertificate`` records what a construction
actually costs, and re-measuring must reproduce it exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .reduction import Status, reduce_leftmost
from .terms import Abs, App, Term, Value, Var, alpha_eq, app, free_vars, lam
from .lambda_f import FALSE_TERM, TRUE_TERM, bool_term, match_bool

I_TERM: Term = Abs("u", Var("u"))

# Connectives as closed normal terms acting on lambda booleans.
NEG: Term = Abs("z", app(Var("z"), FALSE_TERM, TRUE_TERM))
AND: Term = lam(["z", "w"], app(Var("z"), Var("w"), FALSE_TERM))
OR: Term = lam(["z", "w"], app(Var("z"), TRUE_TERM, Var("w")))
IMPLIES: Term = lam(["z", "w"], app(Var("z"), Var("w"), TRUE_TERM))
IFF: Term = lam(["z", "w"], app(Var("z"), Var("w"), app(NEG, Var("w"))))


def identity_chain(n: int, t: Term) -> Term:
    """I(I(...(I t))) with n wrappers: n inert leftmost beta steps."""
    for _ in range(n):
        t = App(I_TERM, t)
    return t


def _fresh_binder(base: str, avoid: frozenset[str]) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def tup(*items: Term) -> Term:
    """The tuple term: one binder applied to all components."""
    z = _fresh_binder("z", frozenset().union(*(free_vars(u) for u in items)) if items else frozenset())
    return Abs(z, app(Var(z), *items))


def proj(k: int, i: int) -> Term:
    """Projection selecting the i-th of k arguments (1-based)."""
    if not 1 <= i <= k:
        raise ValueError("need 1 <= i <= k")
    names = [f"x{j}" for j in range(1, k + 1)]
    return lam(names, Var(names[i - 1]))


def nat(n: int) -> Term:
    """Head-flag naturals: zero carries True, successors prepend False."""
    if n < 0:
        raise ValueError("naturals only")
    t = tup(TRUE_TERM, FALSE_TERM)
    for _ in range(n):
        t = tup(FALSE_TERM, t)
    return t


def match_nat(t: Term) -> Optional[int]:
    """Decode a head-flag natural (up to alpha), or None."""
    n = 0
    while True:
        if not (isinstance(t, Abs) and isinstance(t.body, App)):
            return None
        inner = t.body
        if not (isinstance(inner.fun, App) and inner.fun.fun == Var(t.binder)):
            return None
        flag = match_bool(inner.fun.arg)
        if flag is True:
            return n if match_bool(inner.arg) is False else None
        if flag is False:
            n += 1
            t = inner.arg
            continue
        return None


ZERO_TEST: Term = Abs("z", App(Var("z"), TRUE_TERM))
SUCC: Term = lam(["n", "z"], app(Var("z"), FALSE_TERM, Var("n")))
PRED: Term = Abs("z", App(Var("z"), FALSE_TERM))


def case_n(n: int) -> Term:
    """Branch selector: applied to n branch terms then n booleans whose
    first True sits at position i, leftmost reduction returns branch i.

    Cost is 4n beta steps for every firing position: 2n to load the
    arguments, 2 per skipped False, 2 to select, and an identity chain
    of length 2(n-i) inside branch i equalizes the remainder.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    ys = [f"y{j}" for j in range(1, n + 1)]
    zs = [f"z{j}" for j in range(1, n + 1)]
    body = I_TERM  # dummy else-arm of the last test
    for j in range(n, 0, -1):
        body = app(Var(zs[j - 1]), identity_chain(2 * (n - j), Var(ys[j - 1])), body)
    return lam(ys + zs, body)


@dataclass(frozen=True)
class CostCertificate:
    combinator: str
    parameters: tuple
    beta_count: int
    f_count: int


def measure_beta(t: Term, max_steps: int = 100_000) -> tuple[Term, int]:
    """Leftmost-normalize and return (normal form, beta count)."""
    r = reduce_leftmost(t, max_steps)
    if r.status is not Status.NORMAL:
        raise RuntimeError("measurement did not reach normal form")
    return r.term, r.trace.beta_count


def projection_cost(k: int, i: int) -> CostCertificate:
    """Certify the cost of extracting component i from a k-tuple."""
    xs = [Var(f"v{j}") for j in range(1, k + 1)]
    nf, steps = measure_beta(App(tup(*xs), proj(k, i)))
    if nf != xs[i - 1]:
        raise RuntimeError("projection returned the wrong component")
    return CostCertificate("projection", (k, i), steps, 0)


def case_cost(n: int, i: int) -> CostCertificate:
    """Certify the cost of case_n firing at position i."""
    branches = [Var(f"m{j}") for j in range(1, n + 1)]
    flags = [bool_term(j == i) for j in range(1, n + 1)]
    nf, steps = measure_beta(app(case_n(n), *branches, *flags))
    if nf != branches[i - 1]:
        raise RuntimeError("case selector returned the wrong branch")
    return CostCertificate("case", (n, i), steps, 0)


# ---------------------------------------------------------------------------
# Scott encoding of inductive datatypes.


@dataclass(frozen=True)
class Constructor:
    name: str
    arity: int


@dataclass(frozen=True)
class DatatypeDef:
    """A free inductive datatype given by its ordered constructors.

    Values are constructor trees ``(name, (subvalue, ...))``.
    """

    name: str
    constructors: tuple[Constructor, ...]

    def __post_init__(self):
        names = [c.name for c in self.constructors]
        if len(names) != len(set(names)):
            raise ValueError("duplicate constructor names")

    def index(self, cname: str) -> int:
        for i, c in enumerate(self.constructors):
            if c.name == cname:
                return i
        raise ValueError(f"unknown constructor {cname} of {self.name}")


def encode_payload(d: DatatypeDef, payload) -> Term:
    """The Scott code of a constructor tree: a case-abstraction whose
    selected arm is applied to the encoded children."""
    cname, subs = payload
    i = d.index(cname)
    c = d.constructors[i]
    if len(subs) != c.arity:
        raise ValueError(f"{cname} expects {c.arity} arguments, got {len(subs)}")
    alphas = [f"a{j}" for j in range(1, len(d.constructors) + 1)]
    return lam(alphas, app(Var(alphas[i]), *(encode_payload(d, s) for s in subs)))


def decode_payload(d: DatatypeDef, t: Term):
    """Invert encode_payload up to alpha, or return None."""
    alphas = []
    while isinstance(t, Abs) and len(alphas) < len(d.constructors):
        alphas.append(t.binder)
        t = t.body
    if len(alphas) != len(d.constructors):
        return None
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    if not isinstance(t, Var) or t.name not in alphas:
        return None
    i = alphas.index(t.name)
    c = d.constructors[i]
    if len(args) != c.arity:
        return None
    subs = []
    for a in args:
        s = decode_payload(d, a)
        if s is None:
            return None
        subs.append(s)
    return (c.name, tuple(subs))


BOOL_DATATYPE = DatatypeDef("Bool", (Constructor("true", 0), Constructor("false", 0)))
