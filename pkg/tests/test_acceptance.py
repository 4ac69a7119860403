"""Acceptance gate: twelve end-to-end criteria, one test each.

Each test prints a single PASS line with its measured quantities; the
stated time budgets are asserted, not just reported.
"""
import math
import random
import time

import pytest

from asmlc.asm import (
    HaltI,
    If,
    InitRule,
    Machine,
    Par,
    State,
    Symbol,
    TApp,
    Update,
    Vocabulary,
    run,
)
from asmlc.combinators import PadSpec, curry_fixpoint, pad
from asmlc.compiler import compile_machine, decode_result, delta_as_map
from asmlc.cosim import decoration_audit, lockstep
from asmlc.encodings import match_nat, projection_cost
from asmlc.engine import STATUS_NORMAL, advance_term, signature_table
from asmlc.good_terms import reduce_cost, semantics, variables
from asmlc.lambda_f import reduce_leftmost_f, standard_bool_signature
from asmlc.machines import (
    clash_machine,
    doubling_machine,
    doubling_state,
    euclid_machine,
    euclid_state,
    fail_machine,
    small_state,
)
from asmlc.normalize import check_equivalence, normalize, to_program
from asmlc.reduction import (
    ConfluenceInconclusive,
    check_confluence_bounded,
    reduce_leftmost,
)
from asmlc.terms import App, Var, alpha_eq

from conftest import (
    counter_state,
    counter_vocabulary,
    random_closed_term,
    random_program,
    random_term,
)


def test_01_interpreter_gcd_grid():
    """gcd machine equals math.gcd on the full 1..50 square in < 5s."""
    machine = euclid_machine()
    t0 = time.perf_counter()
    for a in range(1, 51):
        for b in range(1, 51):
            r = run(machine, euclid_state(a, b), 1000)
            assert r.kind == "implicit-halt"
            assert r.outcome.outputs["a"] == math.gcd(a, b)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(f"\nPASS: 2500 gcd runs match math.gcd in {elapsed:.2f}s (< 5s)")


def test_02_lockstep_gcd_grid():
    """Every machine step is exactly (K, L) reductions of the compiled
    term over the full 1..20 square, in < 60s."""
    machine = euclid_machine()
    cm = compile_machine(machine, euclid_state(1, 1))
    t0 = time.perf_counter()
    for a in range(1, 21):
        for b in range(1, 21):
            rep = lockstep(machine, cm, euclid_state(a, b))
            assert rep.passed, (a, b, rep)
            assert all((r.beta_count, r.f_count) == (cm.K, cm.L)
                       for r in rep.rounds)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"\nPASS: 400 trajectories in lockstep at ({cm.K}, {cm.L}) "
          f"in {elapsed:.2f}s (< 60s)")


def test_03_fail_and_clash_exit_codes():
    """Failing and clashing machines reach their numeric exit codes as
    normal forms within a single block."""
    results = {}
    for mk, want_kind, want_code in ((fail_machine, "fail", 2),
                                     (clash_machine, "clash", 3)):
        machine = mk()
        state = small_state(machine)
        cm = compile_machine(machine, state)
        table = signature_table(cm.sig)
        t, beta, f, status = advance_term(cm.initial_term(state), table,
                                          cm.K + cm.L)
        assert (beta, f) == (cm.K, cm.L)
        assert status == STATUS_NORMAL
        d = decode_result(t, cm)
        assert d.kind == want_kind
        assert match_nat(t) == want_code  # the exit IS the numeral
        results[want_kind] = (cm.K, cm.L)
    print(f"\nPASS: fail -> numeral 2 at {results['fail']}, "
          f"clash -> numeral 3 at {results['clash']}, each in one block")


def test_04_delta_fidelity_lockstep():
    """The tabulating machine stays in lockstep and its difference list
    merges to exactly the machine's final table, in < 60s."""
    t0 = time.perf_counter()
    machine = doubling_machine(stop=4)
    state = doubling_state(stop=4)
    cm = compile_machine(machine, state)
    rep = lockstep(machine, cm, state)
    assert rep.passed

    # explicit fidelity check on the decoded final output
    table = signature_table(cm.sig)
    t = cm.initial_term(state)
    for _ in range(len(rep.rounds)):
        t, *_ = advance_term(t, table, cm.K + cm.L)
    d = decode_result(t, cm)
    assert d.kind == "success"
    delta = delta_as_map(d.outputs["f"])
    merged = dict(machine.initial_state(state).dynamics["f"])
    merged.update(delta)
    asm_final = run(machine, state, 100).outcome.outputs["f"]
    assert merged == asm_final
    assert len(delta) == len(d.outputs["f"].payload)  # functional list
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"\nPASS: difference list merges to the machine table "
          f"({len(delta)} entries) at ({cm.K}, {cm.L}) in {elapsed:.2f}s")


def test_05_padding_exact_and_ordered():
    """pad(K, L) costs exactly L F-steps strictly before K beta steps
    for every K in 3..8, L in 0..4."""
    sig = standard_bool_signature()
    checked = 0
    for K in range(3, 9):
        for L in range(0, 5):
            p = pad(PadSpec(K, L))
            r = reduce_leftmost_f(App(p, Var("x")), sig, 10_000)
            assert r.term == Var("x")
            kinds = [s.kind for s in r.trace.steps]
            assert kinds == ["f"] * L + ["beta"] * K, (K, L, kinds)
            checked += 1
    print(f"\nPASS: {checked} pads exact, F-steps strictly first")


def test_06_fixpoint_single_step():
    """The fixpoint combinator applied to 25 random closed terms reaches
    f(fixpoint) in exactly one leftmost step."""
    rng = random.Random(1106)
    for _ in range(25):
        f = random_closed_term(rng, rng.randint(1, 10))
        theta = curry_fixpoint(f)
        r = reduce_leftmost(theta, 1)
        assert r.trace.beta_count == 1
        assert alpha_eq(r.term, App(f, theta))
    print("\nPASS: 25 random closed fixpoints unfold in exactly 1 step")


def test_07_projection_costs():
    """Extracting any component of a k-tuple costs exactly 1 + k steps
    for k up to 5."""
    for k in range(1, 6):
        for i in range(1, k + 1):
            assert projection_cost(k, i).beta_count == 1 + k
    print("\nPASS: all projections for k <= 5 cost exactly 1 + k")


def test_08_normalizer_run_equivalence():
    """100 random programs (conditional depth <= 4) agree with their
    guarded normal forms on 20 states each: 100%."""
    rng = random.Random(1108)
    voc = counter_vocabulary()
    states = [counter_state(voc, rng.randrange(5), rng.randrange(5))
              for _ in range(20)]
    agreed = 0
    for _ in range(100):
        prog = random_program(rng, 4)
        if check_equivalence(prog, to_program(normalize(prog)), states):
            agreed += 1
    assert agreed == 100
    print(f"\nPASS: {agreed}/100 random programs equivalent to their "
          "guarded normal forms on 20 states")


def test_09_bounded_confluence():
    """200 random terms of size <= 12: all reduction sequences to depth
    6 rejoin (no confluence counterexample)."""
    rng = random.Random(1109)
    conclusive = 0
    for _ in range(200):
        t = random_term(rng, rng.randint(1, 12))
        try:
            assert check_confluence_bounded(t, depth=6)
            conclusive += 1
        except ConfluenceInconclusive:
            pass  # blowup guard hit; still no counterexample
    assert conclusive >= 150
    print(f"\nPASS: no confluence counterexample in 200 terms "
          f"({conclusive} fully conclusive)")


def _corpus_good_terms():
    """Guards and update entries from the two compiled examples,
    paired with >= 3 defined valuations each."""
    out = []
    for machine, state in ((euclid_machine(), euclid_state(9, 6)),
                           (doubling_machine(stop=4), doubling_state(stop=4))):
        cm = compile_machine(machine, state)
        r = run(machine, state, 100)
        s0 = machine.initial_state(state)
        valuations = []
        for st in r.trajectory:
            vals = cm.slot_values_for_state(st, s0)
            valuations.append({i.symbol: v for i, v in zip(cm.slots, vals)})
        terms = []
        for b in cm.combinator.branches:
            terms.append(b.guard)
            if hasattr(b, "updates"):
                terms.extend(b.updates)
        out.append((cm, terms, valuations))
    return out


def test_10_good_term_cost_value_independence():
    """Every compiled guard/update term reduces with the same F-cost on
    at least 3 distinct valuations (cost depends on the term, not the
    state)."""
    total = 0
    for cm, terms, valuations in _corpus_good_terms():
        for g in terms:
            if not variables(g):
                continue  # ground terms were folded to codes
            defined = [v for v in valuations
                       if semantics(g, cm.sig, v) is not None]
            assert len(defined) >= 3
            # reduce_cost raises unless the cost is a single number
            reduce_cost(g, cm.sig, defined[:5])
            total += 1
    assert total > 0
    print(f"\nPASS: {total} corpus terms have valuation-independent "
          "F-cost (>= 3 valuations each)")


def test_11_decoration_audit():
    """Fixpoint and projection counts match exactly; the remaining
    published counts are recorded with an explanatory note where the
    step convention differs."""
    rows = decoration_audit()
    by_name = {}
    for r in rows:
        by_name.setdefault(r.name, []).append(r)
    assert all(r.match for r in by_name["curry-fixpoint"])
    assert all(r.match for r in by_name["projection"])
    assert all(r.match for r in by_name["padding"])
    for name in ("if-then-else", "case", "zero-test-on-0",
                 "zero-test-on-succ", "succ", "pred"):
        assert name in by_name  # recorded
        for r in by_name[name]:
            assert r.match or r.note  # mismatches carry the note
    print(f"\nPASS: audit has {len(rows)} rows; fixpoint/projection/"
          "padding exact, convention rows annotated")


def _counter_family(n: int):
    """A machine with n cyclic counters updated in parallel; exits when
    the first counter returns to zero."""
    names = [f"c{i}" for i in range(1, n + 1)]
    symbols = {
        "zero": Symbol("zero", "static", (), "Nat"),
        "inc": Symbol("inc", "static", ("Nat",), "Nat"),
        "eq_Nat": Symbol("eq_Nat", "static", ("Nat", "Nat"), "Bool"),
        "and": Symbol("and", "static", ("Bool", "Bool"), "Bool"),
        "or": Symbol("or", "static", ("Bool", "Bool"), "Bool"),
        "not": Symbol("not", "static", ("Bool",), "Bool"),
    }
    for i, c in enumerate(names):
        symbols[c] = Symbol(c, "dynamic", (), "Nat", is_output=(i == 0))
    voc = Vocabulary(("Bool", "Nat"), symbols)
    cond = TApp("eq_Nat", (TApp(names[0]), TApp("zero")))
    prog = Par((
        If(TApp("not", (cond,)),
           Par(tuple(Update(c, (), TApp("inc", (TApp(c),))) for c in names))),
        If(cond, HaltI()),
    ))
    init = {c: InitRule((), TApp("one")) for c in names}
    symbols["one"] = Symbol("one", "static", (), "Nat")
    statics = {
        "zero": lambda: 0, "one": lambda: 1,
        "inc": lambda a: (a + 1) % 4,
        "eq_Nat": lambda a, b: a == b,
        "and": lambda a, b: a and b, "or": lambda a, b: a or b,
        "not": lambda a: not a,
    }
    state = State(voc, {"Bool": (True, False), "Nat": (0, 1, 2, 3)},
                  statics, {})
    return Machine(voc, prog, init), state


def test_12_step_budget_growth_curve():
    """The minimal beta budget K_min grows monotonically with machine
    size and stays within a quadratic envelope."""
    curve = []
    for n in range(1, 6):
        machine, state = _counter_family(n)
        cm = compile_machine(machine, state)
        size = n  # dynamic symbols; guards/updates grow linearly with n
        curve.append((size, cm.combinator.K_min))
        # sanity: the family actually runs and stays in lockstep
        assert lockstep(machine, cm, state).passed
    kmins = [k for _, k in curve]
    assert kmins == sorted(kmins)  # monotone nondecreasing
    # quadratic envelope anchored at the smallest instance
    c = kmins[0]
    for size, k in curve:
        assert k <= c * size * size
    print(f"\nPASS: K_min curve {curve} is monotone and within "
          f"{c} * size^2")
