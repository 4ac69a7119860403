import random

import pytest

from asmlc.asm import FailI, HaltI, If, Par, Skip, TApp, Update
from asmlc.normalize import (
    check_equivalence,
    guard_term,
    normalize,
    run_signature,
    to_program,
    true_guard_count,
)

from conftest import counter_state, counter_vocabulary, random_program


def test_guards_are_full_conjunctions_and_exclusive():
    prog = If(TApp("lt", (TApp("p"), TApp("q"))),
              Update("p", (), TApp("q")),
              If(TApp("eq_Nat", (TApp("p"), TApp("q"))), HaltI()))
    gp = normalize(prog)
    m = len(gp.conditions)
    assert m == 2
    # every clause constrains every condition (full conjunction)
    for cl in gp.clauses:
        assert len(cl.literals) == m
    # pairwise exclusive: in any state at most one guard is true
    voc = counter_vocabulary()
    for p in range(4):
        for q in range(4):
            assert true_guard_count(counter_state(voc, p, q), gp) <= 1


def test_empty_clauses_dropped():
    gp = normalize(If(TApp("lt", (TApp("p"), TApp("q"))), Skip()))
    assert gp.clauses == ()


def test_normalized_program_equivalent_on_examples():
    voc = counter_vocabulary()
    states = [counter_state(voc, p, q) for p in range(4) for q in range(4)]
    progs = [
        If(TApp("lt", (TApp("p"), TApp("q"))),
           Par((Update("p", (), TApp("q")), Update("q", (), TApp("p"))))),
        Par((If(TApp("le", (TApp("p"), TApp("one"))), FailI()),
             If(TApp("not", (TApp("le", (TApp("p"), TApp("one"))),)),
                Update("p", (), TApp("zero"))))),
        If(TApp("eq_Nat", (TApp("p"), TApp("q"))), HaltI(),
           If(TApp("lt", (TApp("p"), TApp("q"))),
              Update("p", (), TApp("two")),
              Update("q", (), TApp("two")))),
    ]
    for prog in progs:
        gp = normalize(prog)
        assert check_equivalence(prog, to_program(gp), states)


def test_random_programs_equivalent(rng):
    # the acceptance run uses 100 programs; keep the unit test lighter
    voc = counter_vocabulary()
    states = [counter_state(voc, rng.randrange(5), rng.randrange(5))
              for _ in range(12)]
    for _ in range(30):
        prog = random_program(rng, 4)
        gp = normalize(prog)
        assert check_equivalence(prog, to_program(gp), states)


def test_run_signature_distinguishes():
    voc = counter_vocabulary()
    s = counter_state(voc, 1, 2)
    sig1 = run_signature(s, Update("p", (), TApp("q")), 10)
    sig2 = run_signature(s, Update("p", (), TApp("zero")), 10)
    assert sig1 != sig2


def test_guard_term_shape():
    prog = If(TApp("lt", (TApp("p"), TApp("q"))), Update("p", (), TApp("q")))
    gp = normalize(prog)
    (clause,) = gp.clauses
    g = guard_term(clause.literals)
    # a Boolean term over and/not built from the conditions
    assert g.head in ("and", "not", "lt")
