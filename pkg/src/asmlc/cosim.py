"""Lockstep verification: run the machine and its compiled term side by
side, advancing the term by exactly K+L reductions per machine step and
comparing decoded snapshots; plus the decoration audit comparing
published reduction counts against measured ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .asm import Machine, State, eval_ground, run, TApp
from .combinators import PadSpec, curry_fixpoint, pad
from .compiler import CompiledMachine, DecodeError, decode_result, delta_as_map
from .encodings import (
    FALSE_TERM,
    PRED,
    SUCC,
    TRUE_TERM,
    ZERO_TEST,
    case_cost,
    measure_beta,
    nat,
    projection_cost,
    tup,
)
from .engine import advance_term, signature_table
from .lambda_f import FSignature, Value, reduce_leftmost_f
from .reduction import Status, reduce_leftmost
from .terms import Abs, App, Term, Var, alpha_eq, app, lam


@dataclass(frozen=True)
class RoundRecord:
    index: int
    beta_count: int
    f_count: int
    kind: str  # "running" | "success" | "fail" | "clash"
    match: bool
    note: str = ""


@dataclass(frozen=True)
class LockstepReport:
    K: int
    L: int
    rounds: tuple[RoundRecord, ...]
    asm_outcome: str
    term_outcome: str
    verdict: str  # "pass" | "fail" | "inconclusive"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


_EXIT_OF = {"halt": "success", "implicit-halt": "success",
            "fail": "fail", "clash": "clash"}


def _values_match(cm: CompiledMachine, decoded, asm_state: State, initial: State) -> bool:
    """Decoded slot codes describe the machine state: plain slots agree
    exactly; difference-list slots agree as maps over the initial
    tables (grid-free: both sides are finite tables)."""
    for info, got in zip(cm.slots, decoded):
        table = asm_state.dynamics[info.symbol]
        if info.representation == "value":
            if got.datatype != info.datatype or table.get(()) != got.payload:
                return False
        else:
            diff = delta_as_map(got)
            init_table = initial.dynamics[info.symbol]
            merged = dict(init_table)
            merged.update(diff)
            if merged != table:
                return False
            if len(diff) != len(got.payload):
                return False  # duplicate keys: list went non-functional
    return True


def lockstep(machine: Machine, cm: CompiledMachine, state: State,
             max_steps: int = 10_000) -> LockstepReport:
    """One round per machine step; the final round must land on the
    exit normal form within the same (K, L) budget."""
    result = run(machine, state, max_steps)
    initial = result.trajectory[0]
    K, L = cm.K, cm.L
    sig_table = signature_table(cm.sig)
    t = cm.initial_term(state)
    rounds: list[RoundRecord] = []
    ok = True

    expected = [("running", s) for s in result.trajectory[1:]]
    if result.kind == "diverged":
        verdict_hint = "inconclusive"
    else:
        expected.append((_EXIT_OF[result.kind], None))
        verdict_hint = None

    for i, (want_kind, want_state) in enumerate(expected, start=1):
        t, beta, f, _status = advance_term(t, sig_table, K + L)
        exact = (beta, f) == (K, L)
        try:
            d = decode_result(t, cm)
        except DecodeError:
            rounds.append(RoundRecord(i, beta, f, "undecodable", False))
            ok = False
            break
        if want_kind == "running":
            match = exact and d.kind == "running" and _values_match(
                cm, d.values, want_state, initial)
        else:
            match = exact and d.kind == want_kind
            if match and d.kind == "success":
                match = _outputs_match(cm, d.outputs, result.outcome.outputs, initial)
        rounds.append(RoundRecord(i, beta, f, d.kind, match))
        if not match:
            ok = False
            break

    verdict = verdict_hint or ("pass" if ok else "fail")
    term_outcome = rounds[-1].kind if rounds else "none"
    return LockstepReport(K, L, tuple(rounds), result.kind, term_outcome, verdict)


def _outputs_match(cm: CompiledMachine, decoded: dict, asm_outputs: dict,
                   initial: State) -> bool:
    for info in cm.slots:
        if info.symbol not in decoded:
            continue
        got = decoded[info.symbol]
        want = asm_outputs[info.symbol]
        if info.representation == "value":
            if got.payload != want:
                return False
        else:
            merged = dict(initial.dynamics[info.symbol])
            merged.update(delta_as_map(got))
            if merged != want:
                return False
    return True


# ---------------------------------------------------------------------------
# Decoration audit


@dataclass(frozen=True)
class AuditRow:
    name: str
    parameters: str
    claimed: str
    measured: str
    match: bool
    note: str = ""


_CONVENTION_NOTE = ("published count uses a coarser step convention; "
                    "this engine counts one contracted redex per step")


def decoration_audit() -> list[AuditRow]:
    rows: list[AuditRow] = []

    # Curry fixed point: one step to f applied to the fixpoint.
    f = Abs("v", App(Var("v"), Var("v")))
    theta = curry_fixpoint(f)
    r = reduce_leftmost(theta, 1)
    measured = r.trace.beta_count if alpha_eq(r.term, App(f, theta)) else -1
    rows.append(AuditRow("curry-fixpoint", "", "1", str(measured), measured == 1))

    # Tuple projections: 1+k.
    for k in range(1, 6):
        costs = {projection_cost(k, i).beta_count for i in range(1, k + 1)}
        m = costs.pop() if len(costs) == 1 else -1
        rows.append(AuditRow("projection", f"k={k}", str(1 + k), str(m), m == 1 + k))

    # If-Then-Else dispatch on a Boolean.
    t = App(Abs("z", app(Var("z"), Var("m"), Var("n"))), TRUE_TERM)
    nf, steps = measure_beta(t)
    rows.append(AuditRow("if-then-else", "", "2", str(steps),
                         steps == 2, "" if steps == 2 else _CONVENTION_NOTE))

    # Branch selector: published 3n; this selector costs 4n and buys
    # branch independence under one-redex-per-step counting.
    for n in range(1, 7):
        costs = {case_cost(n, i).beta_count for i in range(1, n + 1)}
        m = costs.pop() if len(costs) == 1 else -1
        rows.append(AuditRow("case", f"n={n}", str(3 * n), str(m),
                             m == 3 * n, _CONVENTION_NOTE if m != 3 * n else ""))

    # Naturals.
    for name, term, claimed in (
        ("zero-test-on-0", App(ZERO_TEST, nat(0)), 3),
        ("zero-test-on-succ", App(ZERO_TEST, nat(3)), 3),
        ("succ", App(SUCC, nat(2)), 3),
        ("pred", App(PRED, nat(3)), 3),
    ):
        _, steps = measure_beta(term)
        rows.append(AuditRow(name, "", str(claimed), str(steps),
                             steps == claimed,
                             "" if steps == claimed else _CONVENTION_NOTE))

    # Padding: exact by construction, L F-steps strictly first.
    from .lambda_f import standard_bool_signature

    sig = standard_bool_signature()
    for K, L in ((3, 0), (4, 2), (6, 3)):
        p = pad(PadSpec(K, L))
        r = reduce_leftmost_f(App(p, Var("x")), sig, 1000)
        m = (r.trace.beta_count, r.trace.f_count)
        kinds = [s.kind for s in r.trace.steps]
        ordered = kinds == ["f"] * L + ["beta"] * K
        rows.append(AuditRow("padding", f"K={K},L={L}", f"({K},{L})",
                             str(m), m == (K, L) and ordered and r.term == Var("x")))
    return rows


def render_audit(rows: list[AuditRow]) -> str:
    headers = ("construction", "parameters", "published", "measured", "match", "note")
    table = [headers] + [
        (r.name, r.parameters, r.claimed, r.measured,
         "yes" if r.match else "NO", r.note)
        for r in rows
    ]
    widths = [max(len(row[c]) for row in table) for c in range(len(headers))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
