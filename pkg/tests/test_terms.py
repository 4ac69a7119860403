import random

from hypothesis import given, settings
from hypothesis import strategies as st

from asmlc.terms import (
    Abs,
    App,
    Code,
    Const,
    Value,
    Var,
    alpha_eq,
    app,
    canonical,
    free_vars,
    is_closed,
    lam,
    spine,
    subterms,
    term_size,
)

from conftest import random_closed_term, random_term


def test_constructors_and_helpers():
    t = lam(["x", "y"], app(Var("x"), Var("y"), Const("f")))
    assert isinstance(t, Abs) and isinstance(t.body, Abs)
    head, args = spine(t.body.body)
    assert head == Var("x") and args == [Var("y"), Const("f")]
    assert term_size(t) == 7


def test_free_vars_and_closedness():
    t = Abs("x", App(Var("x"), Var("y")))
    assert free_vars(t) == {"y"}
    assert not is_closed(t)
    assert is_closed(Abs("y", t))
    assert is_closed(Const("f"))
    assert is_closed(Code(Value("Nat", 3)))


def test_alpha_equivalence():
    assert alpha_eq(Abs("x", Var("x")), Abs("y", Var("y")))
    assert not alpha_eq(Abs("x", Var("x")), Abs("x", Abs("y", Var("x"))))
    # free variables must match by name
    assert not alpha_eq(Var("x"), Var("y"))
    # binder shadowing
    a = Abs("x", Abs("x", Var("x")))
    b = Abs("y", Abs("z", Var("z")))
    c = Abs("y", Abs("z", Var("y")))
    assert alpha_eq(a, b)
    assert not alpha_eq(a, c)


def test_canonical_is_alpha_invariant():
    rng = random.Random(7)
    for _ in range(50):
        t = random_closed_term(rng, rng.randint(1, 10))
        # rename every binder; canonical forms must collide exactly when
        # alpha-equal
        assert canonical(t) == canonical(_rename(t, {}))


def _rename(t, env, counter=[0]):
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Abs):
        counter[0] += 1
        fresh = f"r{counter[0]}"
        return Abs(fresh, _rename(t.body, {**env, t.binder: fresh}))
    if isinstance(t, App):
        return App(_rename(t.fun, env), _rename(t.arg, env))
    return t


def test_subterms_counts_nodes():
    rng = random.Random(3)
    for _ in range(20):
        t = random_term(rng, 8)
        assert len(list(subterms(t))) == term_size(t)


@given(st.integers(min_value=1, max_value=12), st.integers())
@settings(max_examples=60, deadline=None)
def test_canonical_roundtrip_random(size, seed):
    rng = random.Random(seed)
    t = random_term(rng, size)
    u = random_term(rng, size)
    assert alpha_eq(t, t)
    assert (canonical(t) == canonical(u)) == alpha_eq(t, u)
