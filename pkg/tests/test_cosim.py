import pytest

from asmlc.compiler import compile_machine
from asmlc.cosim import decoration_audit, lockstep, render_audit
from asmlc.machines import (
    clash_machine,
    doubling_machine,
    doubling_state,
    euclid_machine,
    euclid_state,
    fail_machine,
    small_state,
)


@pytest.fixture(scope="module")
def euclid_cm():
    machine = euclid_machine()
    return machine, compile_machine(machine, euclid_state(1, 1))


def test_lockstep_gcd(euclid_cm):
    machine, cm = euclid_cm
    rep = lockstep(machine, cm, euclid_state(36, 24))
    assert rep.passed
    assert all(r.match for r in rep.rounds)
    assert all((r.beta_count, r.f_count) == (cm.K, cm.L) for r in rep.rounds)
    assert rep.rounds[-1].kind == "success"


def test_lockstep_small_grid(euclid_cm):
    machine, cm = euclid_cm
    for a in range(1, 8):
        for b in range(1, 8):
            assert lockstep(machine, cm, euclid_state(a, b)).passed


def test_lockstep_fail_and_clash():
    for mk, kind in ((fail_machine, "fail"), (clash_machine, "clash")):
        machine = mk()
        cm = compile_machine(machine, small_state(machine))
        rep = lockstep(machine, cm, small_state(machine))
        assert rep.passed
        assert len(rep.rounds) == 1
        assert rep.rounds[0].kind == kind


def test_lockstep_delta_machine():
    machine = doubling_machine(stop=4)
    state = doubling_state(stop=4)
    cm = compile_machine(machine, state)
    rep = lockstep(machine, cm, state)
    assert rep.passed
    assert rep.rounds[-1].kind == "success"


def test_lockstep_detects_wrong_constants():
    # a deliberately mis-budgeted run must be flagged, not passed
    machine = euclid_machine()
    cm = compile_machine(machine, euclid_state(1, 1))
    broken = type(cm.combinator)(
        cm.combinator.theta, cm.K + 1, cm.L, cm.combinator.slots,
        cm.combinator.branches, cm.combinator.K_min, cm.combinator.L_min)
    bad = type(cm)(cm.machine, cm.guarded, broken, cm.slots, cm.sig, cm.outputs)
    rep = lockstep(machine, bad, euclid_state(6, 4))
    assert not rep.passed


def test_audit_exact_rows():
    rows = {r.name: r for r in decoration_audit() if r.parameters == ""}
    assert rows["curry-fixpoint"].match
    by_name = [r for r in decoration_audit() if r.name == "projection"]
    assert by_name and all(r.match for r in by_name)
    pads = [r for r in decoration_audit() if r.name == "padding"]
    assert pads and all(r.match for r in pads)


def test_audit_convention_rows_carry_note():
    for r in decoration_audit():
        if not r.match:
            assert r.note  # every mismatch is explained


def test_render_audit_is_deterministic():
    a = render_audit(decoration_audit())
    b = render_audit(decoration_audit())
    assert a == b
    assert a.splitlines()[0].startswith("construction")
