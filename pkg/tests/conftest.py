"""Shared random generators for terms, programs, and states."""
from __future__ import annotations

import random

import pytest

from asmlc.asm import (
    FailI,
    HaltI,
    If,
    InitRule,
    Machine,
    Par,
    Program,
    Skip,
    State,
    Symbol,
    TApp,
    Update,
    Vocabulary,
)
from asmlc.terms import Abs, App, Term, Var


def random_term(rng: random.Random, size: int, pool=("a", "b", "c")) -> Term:
    """A random lambda term with at most ``size`` nodes; free variables
    are drawn from ``pool``."""
    if size <= 1:
        return Var(rng.choice(pool))
    if rng.random() < 0.45:
        left = rng.randint(1, size - 1)
        return App(random_term(rng, left, pool), random_term(rng, size - left, pool))
    binder = rng.choice(pool)
    return Abs(binder, random_term(rng, size - 1, pool))


def random_closed_term(rng: random.Random, size: int) -> Term:
    """A random closed term: close a random term by abstracting over its
    variable pool."""
    t = random_term(rng, size)
    for v in ("c", "b", "a"):
        t = Abs(v, t)
    return t


# ---------------------------------------------------------------------------
# Random machine programs over a fixed two-counter vocabulary.
# Guard statics (lt, le, eq_Nat) are total on the carrier, so the guard
# normal form and the original program agree in every state.

MAX_NAT = 4


def counter_vocabulary() -> Vocabulary:
    symbols = {
        "zero": Symbol("zero", "static", (), "Nat"),
        "one": Symbol("one", "static", (), "Nat"),
        "two": Symbol("two", "static", (), "Nat"),
        "lt": Symbol("lt", "static", ("Nat", "Nat"), "Bool"),
        "le": Symbol("le", "static", ("Nat", "Nat"), "Bool"),
        "eq_Nat": Symbol("eq_Nat", "static", ("Nat", "Nat"), "Bool"),
        "and": Symbol("and", "static", ("Bool", "Bool"), "Bool"),
        "or": Symbol("or", "static", ("Bool", "Bool"), "Bool"),
        "not": Symbol("not", "static", ("Bool",), "Bool"),
        "p": Symbol("p", "dynamic", (), "Nat", is_output=True),
        "q": Symbol("q", "dynamic", (), "Nat"),
    }
    return Vocabulary(("Bool", "Nat"), symbols)


def counter_state(voc: Vocabulary, p: int, q: int) -> State:
    statics = {
        "zero": lambda: 0,
        "one": lambda: 1,
        "two": lambda: 2,
        "lt": lambda a, b: a < b,
        "le": lambda a, b: a <= b,
        "eq_Nat": lambda a, b: a == b,
        "and": lambda a, b: a and b,
        "or": lambda a, b: a or b,
        "not": lambda a: not a,
    }
    return State(voc, {"Bool": (True, False), "Nat": tuple(range(MAX_NAT + 1))},
                 statics, {"p": {(): p}, "q": {(): q}})


_NAT_TERMS = [TApp("zero"), TApp("one"), TApp("two"), TApp("p"), TApp("q")]


def random_condition(rng: random.Random, depth: int) -> TApp:
    if depth > 0 and rng.random() < 0.4:
        op = rng.choice(["and", "or", "not"])
        if op == "not":
            return TApp("not", (random_condition(rng, depth - 1),))
        return TApp(op, (random_condition(rng, depth - 1),
                         random_condition(rng, depth - 1)))
    op = rng.choice(["lt", "le", "eq_Nat"])
    return TApp(op, (rng.choice(_NAT_TERMS), rng.choice(_NAT_TERMS)))


def random_program(rng: random.Random, depth: int) -> Program:
    """A random program of conditional nesting depth at most ``depth``."""
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        kind = rng.randrange(5)
        if kind == 0:
            return Skip()
        if kind == 1:
            return HaltI()
        if kind == 2:
            return FailI()
        return Update(rng.choice(["p", "q"]), (), rng.choice(_NAT_TERMS))
    if roll < 0.75:
        orelse = random_program(rng, depth - 1) if rng.random() < 0.5 else Skip()
        return If(random_condition(rng, 1), random_program(rng, depth - 1), orelse)
    n = rng.randint(2, 3)
    return Par(tuple(random_program(rng, depth - 1) for _ in range(n)))


@pytest.fixture
def rng():
    return random.Random(20260824)
