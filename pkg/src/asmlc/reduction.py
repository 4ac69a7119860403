"""Beta reduction: redex addressing, substitution, leftmost strategy,
bounded exhaustive confluence checking.

Step granularity is strict: one step contracts exactly one redex.
Every driver takes a step budget; divergence is a reported outcome.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

from .terms import Abs, App, Code, Const, Term, Var, canonical, free_vars, term_size

sys.setrecursionlimit(100_000)

# An address is a path of child selectors from the root.
Addr = tuple[str, ...]

_fresh_counter = itertools.count()


class ReductionError(Exception):
    pass


class NotARedex(ReductionError):
    def __init__(self, at: Addr):
        super().__init__(f"no redex at address {at!r}")
        self.at = at


class Status(Enum):
    NORMAL = "normal"
    BUDGET = "budget-exhausted"
    UNDEFINED = "undefined-application"


@dataclass(frozen=True, slots=True)
class Step:
    kind: str  # "beta" | "f"
    address: Addr
    after: Term


@dataclass(frozen=True, slots=True)
class Trace:
    steps: tuple[Step, ...]

    @property
    def beta_count(self) -> int:
        return sum(1 for s in self.steps if s.kind == "beta")

    @property
    def f_count(self) -> int:
        return sum(1 for s in self.steps if s.kind == "f")

    def __len__(self) -> int:
        return len(self.steps)

    def concat(self, other: "Trace") -> "Trace":
        return Trace(self.steps + other.steps)


EMPTY_TRACE = Trace(())


@dataclass(frozen=True, slots=True)
class ReduceResult:
    term: Term
    trace: Trace
    status: Status


def subterm_at(t: Term, at: Addr) -> Term:
    for sel in at:
        if sel == "fun" and isinstance(t, App):
            t = t.fun
        elif sel == "arg" and isinstance(t, App):
            t = t.arg
        elif sel == "body" and isinstance(t, Abs):
            t = t.body
        else:
            raise ReductionError(f"bad address step {sel!r} at {t!r}")
    return t


def replace_at(t: Term, at: Addr, new: Term) -> Term:
    if not at:
        return new
    sel, rest = at[0], at[1:]
    if sel == "fun" and isinstance(t, App):
        return App(replace_at(t.fun, rest, new), t.arg)
    if sel == "arg" and isinstance(t, App):
        return App(t.fun, replace_at(t.arg, rest, new))
    if sel == "body" and isinstance(t, Abs):
        return Abs(t.binder, replace_at(t.body, rest, new))
    raise ReductionError(f"bad address step {sel!r} at {t!r}")


def is_beta_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs)


def fresh_name(base: str) -> str:
    return f"{base.split('$')[0]}${next(_fresh_counter)}"


def substitute(body: Term, var: str, replacement: Term) -> Term:
    """Capture-avoiding substitution body[replacement/var]."""
    repl_free = free_vars(replacement)

    def walk(t: Term) -> Term:
        if isinstance(t, Var):
            return replacement if t.name == var else t
        if isinstance(t, App):
            return App(walk(t.fun), walk(t.arg))
        if isinstance(t, Abs):
            if t.binder == var or var not in free_vars(t.body):
                return t
            if t.binder in repl_free:
                fresh = fresh_name(t.binder)
                renamed = substitute(t.body, t.binder, Var(fresh))
                return Abs(fresh, walk(renamed))
            return Abs(t.binder, walk(t.body))
        return t

    return walk(body)


def beta_redex_addresses(t: Term) -> Iterator[Addr]:
    """Beta-redex addresses in prefix order (fun before arg)."""
    stack: list[tuple[Term, Addr]] = [(t, ())]
    while stack:
        s, at = stack.pop()
        if is_beta_redex(s):
            yield at
        if isinstance(s, App):
            stack.append((s.arg, at + ("arg",)))
            stack.append((s.fun, at + ("fun",)))
        elif isinstance(s, Abs):
            stack.append((s.body, at + ("body",)))


def leftmost_redex(t: Term) -> Optional[Addr]:
    """Address of the leftmost beta redex (prefix order), or None."""
    for at in beta_redex_addresses(t):
        return at
    return None


def is_beta_normal(t: Term) -> bool:
    return leftmost_redex(t) is None


def beta_step(t: Term, at: Addr) -> Term:
    redex = subterm_at(t, at)
    if not is_beta_redex(redex):
        raise NotARedex(at)
    contracted = substitute(redex.fun.body, redex.fun.binder, redex.arg)
    return replace_at(t, at, contracted)


def reduce_leftmost(t: Term, max_steps: int) -> ReduceResult:
    """Iterated leftmost beta reduction, recording every step."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    steps: list[Step] = []
    for _ in range(max_steps):
        at = leftmost_redex(t)
        if at is None:
            return ReduceResult(t, Trace(tuple(steps)), Status.NORMAL)
        t = beta_step(t, at)
        steps.append(Step("beta", at, t))
    status = Status.NORMAL if leftmost_redex(t) is None else Status.BUDGET
    return ReduceResult(t, Trace(tuple(steps)), status)


class ConfluenceInconclusive(ReductionError):
    """Raised when the bounded enumerator hits its blowup guard."""


def check_confluence_bounded(
    t: Term, depth: int, size_cap: int = 2000, state_cap: int = 20000
) -> bool:
    """Enumerate all beta reduction sequences from ``t`` up to ``depth``
    and check that all normal forms reached are alpha-equal.

    Test oracle only; raises ConfluenceInconclusive on blowup.
    """
    frontier = {canonical(t)}
    seen = set(frontier)
    normal_forms: set[Term] = set()
    for _ in range(depth):
        nxt: set[Term] = set()
        for s in frontier:
            addrs = list(beta_redex_addresses(s))
            if not addrs:
                normal_forms.add(s)
                continue
            for at in addrs:
                r = canonical(beta_step(s, at))
                if term_size(r) > size_cap:
                    raise ConfluenceInconclusive("term size cap exceeded")
                if r not in seen:
                    seen.add(r)
                    nxt.add(r)
            if len(seen) > state_cap:
                raise ConfluenceInconclusive("state cap exceeded")
        frontier = nxt
        if not frontier:
            break
    for s in frontier:
        if not list(beta_redex_addresses(s)):
            normal_forms.add(s)
    return len(normal_forms) <= 1
