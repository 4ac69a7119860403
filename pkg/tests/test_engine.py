import random

import pytest

from asmlc import engine
from asmlc.engine import (
    STATUS_NORMAL,
    STATUS_RAN,
    STATUS_UNDEFINED,
    advance_term,
    from_tuple,
    pure_kernel,
    signature_table,
    to_tuple,
)
from asmlc.lambda_f import (
    BOOL,
    TRUE_TERM,
    FSignature,
    Value,
    bool_term,
    reduce_leftmost_f,
    standard_bool_signature,
)
from asmlc.reduction import Status
from asmlc.terms import Abs, App, Code, Const, Var, alpha_eq, app

from conftest import random_term

KERNELS = [pure_kernel]
if engine.KERNEL_NAME == "compiled":
    KERNELS.append(engine._kernel)


def test_tuple_roundtrip(rng):
    for _ in range(50):
        t = random_term(rng, 10)
        assert from_tuple(to_tuple(t)) == t
    t = App(Const("f"), Code(Value("Nat", 3)))
    assert from_tuple(to_tuple(t)) == t


def test_bool_codes_rejected_in_tuples():
    with pytest.raises(ValueError):
        to_tuple(Code(Value(BOOL, True)))


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.__name__)
def test_kernel_matches_traced_reducer_on_random_terms(kernel, rng):
    """Both kernels must agree with the slow traced reducer on result
    term (up to alpha), counts, and status."""
    sig = standard_bool_signature()
    table = signature_table(sig)
    atoms = [TRUE_TERM, bool_term(False), Const("not"), Const("and"), Const("or")]
    for i in range(120):
        t = random_term(rng, rng.randint(2, 10))
        if i % 2 == 0:  # splice in semantic material
            t = App(t, rng.choice(atoms))
            t = App(Abs("w", t), rng.choice(atoms))
        budget = rng.randint(0, 30)
        slow = reduce_leftmost_f(t, sig, budget)
        fast_t, beta, f, status = advance_term(t, table, budget, kernel=kernel)
        assert (beta, f) == (slow.trace.beta_count, slow.trace.f_count)
        assert alpha_eq(fast_t, slow.term)
        expected = {Status.NORMAL: STATUS_NORMAL, Status.BUDGET: STATUS_RAN,
                    Status.UNDEFINED: STATUS_UNDEFINED}[slow.status]
        assert status == expected


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.__name__)
def test_kernel_undefined_application(kernel):
    sig = FSignature()
    sig.add("half", ("Nat",), "Nat", lambda n: n // 2 if n % 2 == 0 else None)
    t = App(Const("half"), Code(Value("Nat", 3)))
    _, beta, f, status = advance_term(t, signature_table(sig), 10, kernel=kernel)
    assert status == STATUS_UNDEFINED


def test_both_kernels_agree_on_large_reduction(rng):
    if engine.KERNEL_NAME != "compiled":
        pytest.skip("compiled kernel not built")
    sig = standard_bool_signature()
    table = signature_table(sig)
    for _ in range(30):
        t = random_term(rng, 14)
        r1 = advance_term(t, table, 50, kernel=pure_kernel)
        r2 = advance_term(t, table, 50, kernel=engine._kernel)
        assert alpha_eq(r1[0], r2[0]) and r1[1:] == r2[1:]
