"""Compile a machine into a fixpoint combinator that simulates every
step with an exact, constant (K, L) reduction budget.

Pipeline: normalize the program into exclusive guarded clauses, lower
the vocabulary into a constant signature (statics totalized, with
definedness predicates for the partial ones, plus Boolean/equality/
selection builtins and delta-list operations for dynamic symbols of
positive arity), translate every guard, update and exit into good
terms, and hand the ordered branch list to the combinator builder.

Guard order mirrors the step semantics: fail (explicit fail, or an
active update evaluating to undefined), then clash, then halt (explicit
or empty active set), then one branch per update clause.  Exits land on
the distinguished normal forms: success is the tuple of the numeral 1
with the outputs, fail is the numeral 2, clash the numeral 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .asm import (
    BOOL_SORT,
    FailI,
    HaltI,
    InitRule,
    Machine,
    State,
    Symbol,
    TApp,
    TVar,
    TypedTerm,
    Update,
    Vocabulary,
    eval_ground,
    initial_dynamics,
    run_from_state,
    _carrier_grid,
)
from .combinators import (
    Branch,
    CompiledCombinator,
    ExitBranch,
    Slot,
    UpdateBranch,
    build_branch_combinator,
    decode_state,
)
from .encodings import match_nat, nat
from .good_terms import GApp, GCode, GoodTerm, GVar, const_count
from .lambda_f import BOOL, DeltaType, FSignature, Value, delta_semantics, install_delta, match_bool
from .normalize import Clause, GuardedProgram, normalize
from .terms import Abs, App, Term, Var, app

SUCCESS_CODE, FAIL_CODE, CLASH_CODE = 1, 2, 3


# ---------------------------------------------------------------------------
# Good-term Boolean algebra with constant folding (keeps ground Boolean
# structure out of theta, so no resident F-redexes appear).

G_TRUE = GCode(Value(BOOL, True))
G_FALSE = GCode(Value(BOOL, False))


def _is_const(g: GoodTerm, v: bool) -> bool:
    return isinstance(g, GCode) and g.value == Value(BOOL, v)


def gand(a: GoodTerm, b: GoodTerm) -> GoodTerm:
    if _is_const(a, True):
        return b
    if _is_const(b, True):
        return a
    if _is_const(a, False) or _is_const(b, False):
        return G_FALSE
    return GApp("and", (a, b))


def gor(a: GoodTerm, b: GoodTerm) -> GoodTerm:
    if _is_const(a, False):
        return b
    if _is_const(b, False):
        return a
    if _is_const(a, True) or _is_const(b, True):
        return G_TRUE
    return GApp("or", (a, b))


def gnot(a: GoodTerm) -> GoodTerm:
    if _is_const(a, True):
        return G_FALSE
    if _is_const(a, False):
        return G_TRUE
    return GApp("not", (a,))


def gconj(parts: Sequence[GoodTerm]) -> GoodTerm:
    out = G_TRUE
    for p in parts:
        out = gand(out, p)
    return out


def gdisj(parts: Sequence[GoodTerm]) -> GoodTerm:
    out = G_FALSE
    for p in parts:
        out = gor(out, p)
    return out


# ---------------------------------------------------------------------------
# Slots


@dataclass(frozen=True)
class SlotInfo:
    symbol: str
    representation: str  # "value" | "delta"
    datatype: str  # sort name, or the delta-list datatype
    sort: str  # result sort of the symbol
    delta: Optional[DeltaType] = None

    def as_slot(self) -> Slot:
        return Slot(self.symbol, self.datatype)


class CompileError(Exception):
    pass


# ---------------------------------------------------------------------------
# Signature lowering


def _static_total_on_grid(state: State, sym: Symbol) -> bool:
    fn = state.statics[sym.name]
    return all(fn(*args) is not None for args in _carrier_grid(state, sym.arg_sorts))


def _default(state: State, sort: str):
    return state.carriers[sort][0]


def lower_signature(voc: Vocabulary, state: State, slots: Sequence[SlotInfo]) -> tuple[FSignature, set[str]]:
    """Constant signature for the compiled term: totalized statics,
    definedness predicates for partial ones, Boolean connectives,
    per-sort equality and selection, and delta operations per
    function-sorted dynamic symbol.  Returns (signature, partials)."""
    sig = FSignature()
    partials: set[str] = set()
    for sym in voc.symbols.values():
        if sym.kind != "static":
            continue
        fn = state.statics[sym.name]
        if _static_total_on_grid(state, sym):
            sig.add(sym.name, sym.arg_sorts, sym.result_sort, fn)
        else:
            partials.add(sym.name)
            dflt = _default(state, sym.result_sort)

            def totalized(*a, _fn=fn, _d=dflt):
                v = _fn(*a)
                return _d if v is None else v

            def defined(*a, _fn=fn):
                return _fn(*a) is not None

            sig.add(sym.name, sym.arg_sorts, sym.result_sort, totalized)
            sig.add("def_" + sym.name, sym.arg_sorts, BOOL, defined)
    for name, fn in (("and", lambda a, b: a and b),
                     ("or", lambda a, b: a or b),
                     ("not", lambda a: not a)):
        if sig.get(name) is None:
            sig.add(name, (BOOL,) * (1 if name == "not" else 2), BOOL, fn)
    for sort in voc.sorts:
        if sig.get(f"eq_{sort}") is None:
            sig.add(f"eq_{sort}", (sort, sort), BOOL, lambda a, b: a == b)
        if sig.get(f"ite_{sort}") is None:
            sig.add(f"ite_{sort}", (BOOL, sort, sort), sort, lambda c, a, b: a if c else b)
    for info in slots:
        if info.delta is not None:
            install_delta(sig, info.delta, totalize_default=_default(state, info.sort))
    return sig, partials


def make_slots(voc: Vocabulary) -> list[SlotInfo]:
    out = []
    for sym in voc.dynamics():
        if sym.arity == 0:
            out.append(SlotInfo(sym.name, "value", sym.result_sort, sym.result_sort))
        else:
            d = DeltaType(sym.name, sym.arg_sorts, sym.result_sort)
            out.append(SlotInfo(sym.name, "delta", d.list_datatype, sym.result_sort, d))
    return out


# ---------------------------------------------------------------------------
# Term translation: TypedTerm -> (value good term, definedness good term)


@dataclass
class Translator:
    voc: Vocabulary
    init: dict[str, InitRule]
    slots: dict[str, SlotInfo]
    partials: set[str]

    def value_and_def(self, t: TypedTerm, env: Optional[dict[str, GoodTerm]] = None):
        if isinstance(t, TVar):
            if env is None or t.name not in env:
                raise CompileError(f"unbound term variable {t.name}")
            return env[t.name], G_TRUE
        sym = self.voc.symbol(t.head)
        vals, defs = [], []
        for a in t.args:
            v, d = self.value_and_def(a, env)
            vals.append(v)
            defs.append(d)
        argdef = gconj(defs)
        if sym.kind == "static":
            value: GoodTerm = GApp(t.head, tuple(vals))
            mydef = (GApp("def_" + t.head, tuple(vals))
                     if t.head in self.partials else G_TRUE)
            return self._fold(value), gand(argdef, self._fold(mydef))
        info = self.slots[sym.name]
        if info.representation == "value":
            return GVar(sym.name, info.datatype), argdef
        # function-sorted dynamic symbol: look up the delta list, fall
        # back to the initialization term
        delta = GVar(sym.name, info.datatype)
        ival, idef = self.init_value_and_def(sym.name, vals)
        present = GApp(info.delta.op_name("B"), (delta, *vals))
        lookup = GApp(info.delta.op_name("V"), (delta, *vals))
        value = GApp(f"ite_{info.sort}", (present, lookup, ival))
        mydef = gand(argdef, gor(present, idef))
        return value, mydef

    def init_value_and_def(self, dyn_name: str, arg_vals: Sequence[GoodTerm]):
        rule = self.init[dyn_name]
        env = {f"x{j+1}": arg_vals[rule.sigma[j] - 1] for j in range(len(rule.sigma))}
        return self.value_and_def(rule.term, env)

    def _fold(self, g: GoodTerm) -> GoodTerm:
        """Fold variable-free subtrees to codes so theta carries no
        resident F-redex; uses the totalized semantics, which is exact
        wherever the definedness guards let the value matter."""
        if isinstance(g, GApp):
            args = tuple(self._fold(a) for a in g.args)
            if all(isinstance(a, GCode) for a in args):
                f = self._sig.functions[g.symbol]
                return GCode(f.apply(tuple(a.value for a in args)))
            return GApp(g.symbol, args)
        return g

    _sig: FSignature = None  # set by the compiler before translation


# ---------------------------------------------------------------------------
# Compilation


@dataclass(frozen=True)
class CompiledMachine:
    machine: Machine
    guarded: GuardedProgram
    combinator: CompiledCombinator
    slots: tuple[SlotInfo, ...]
    sig: FSignature
    outputs: tuple[Symbol, ...]

    @property
    def theta(self) -> Term:
        return self.combinator.theta

    @property
    def K(self) -> int:
        return self.combinator.K

    @property
    def L(self) -> int:
        return self.combinator.L

    def initial_values(self, state: State) -> tuple[Value, ...]:
        """Slot codes for a freshly initialized state: plain values for
        constants (which must be defined), empty difference lists for
        function-sorted symbols."""
        tables = initial_dynamics(self.machine.voc, state, self.machine.init)
        vals = []
        for info in self.slots:
            if info.representation == "value":
                if () not in tables[info.symbol]:
                    raise CompileError(
                        f"dynamic constant {info.symbol} has no defined initial value")
                vals.append(Value(info.datatype, tables[info.symbol][()]))
            else:
                vals.append(Value(info.datatype, ()))
        return tuple(vals)

    def initial_term(self, state: State) -> Term:
        from .lambda_f import code_term

        return app(self.theta, *(code_term(v) for v in self.initial_values(state)))

    def slot_values_for_state(self, state: State, initial: State) -> tuple[Value, ...]:
        """Slot codes describing ``state`` (delta slots: the tuples where
        the table differs from or extends the initial table, in sorted
        order).  Used to seed probe valuations."""
        vals = []
        for info in self.slots:
            table = state.dynamics[info.symbol]
            if info.representation == "value":
                vals.append(Value(info.datatype, table[()]))
            else:
                init_table = initial.dynamics[info.symbol]
                seq = tuple(
                    k + (v,)
                    for k, v in sorted(table.items(), key=repr)
                    if init_table.get(k) != v
                )
                vals.append(Value(info.datatype, seq))
        return tuple(vals)

    def manifest(self) -> dict:
        c = self.combinator
        return {
            "K": c.K,
            "L": c.L,
            "K_total": c.K + c.L,
            "K_min": c.K_min,
            "L_min": c.L_min,
            "slots": [
                {"symbol": s.symbol, "representation": s.representation,
                 "datatype": s.datatype, "sort": s.sort}
                for s in self.slots
            ],
            "outputs": [s.name for s in self.outputs],
            "exit_codes": {"success": SUCCESS_CODE, "fail": FAIL_CODE,
                           "clash": CLASH_CODE},
            "branches": len(c.branches),
            "guard_order": ["fail", "clash", "halt"]
            + [f"clause-{i}" for i in range(len(c.branches) - 3)],
        }


def _clause_guard(tr: Translator, cl: Clause) -> GoodTerm:
    """A_i: every literal defined and matching its expected value."""
    parts = []
    for cond, want in cl.literals:
        v, d = tr.value_and_def(cond)
        parts.append(gand(d, v if want else gnot(v)))
    return gconj(parts)


def _clause_updates(cl: Clause) -> list[Update]:
    return [u for u in cl.instructions if isinstance(u, Update)]


def _update_def(tr: Translator, u: Update) -> GoodTerm:
    parts = []
    for a in u.args:
        parts.append(tr.value_and_def(a)[1])
    parts.append(tr.value_and_def(u.rhs)[1])
    return gconj(parts)


def _clause_clash(tr: Translator, voc: Vocabulary, updates: list[Update]) -> GoodTerm:
    terms = []
    for i in range(len(updates)):
        for j in range(i + 1, len(updates)):
            u, v = updates[i], updates[j]
            if u.symbol != v.symbol:
                continue
            sym = voc.symbol(u.symbol)
            same_args = gconj([
                GApp(f"eq_{s}", (tr.value_and_def(x)[0], tr.value_and_def(y)[0]))
                for x, y, s in zip(u.args, v.args, sym.arg_sorts)
            ])
            diff_val = gnot(GApp(
                f"eq_{sym.result_sort}",
                (tr.value_and_def(u.rhs)[0], tr.value_and_def(v.rhs)[0]),
            ))
            terms.append(gand(same_args, diff_val))
    return gdisj(terms)


def _slot_update(tr: Translator, info: SlotInfo, updates: list[Update]) -> GoodTerm:
    mine = [u for u in updates if u.symbol == info.symbol]
    if not mine:
        return GVar(info.symbol, info.datatype)
    if info.representation == "value":
        return tr.value_and_def(mine[0].rhs)[0]
    # delta slot: remove the currently visible tuple for each updated
    # location (read from the accumulated list, so repeated writes to
    # one location keep the list functional), then append the new one
    acc: GoodTerm = GVar(info.symbol, info.datatype)
    d = info.delta
    for u in mine:
        arg_vals = [tr.value_and_def(a)[0] for a in u.args]
        rhs = tr.value_and_def(u.rhs)[0]
        present = GApp(d.op_name("B"), (acc, *arg_vals))
        lookup = GApp(d.op_name("V"), (acc, *arg_vals))
        ival, _ = tr.init_value_and_def(info.symbol, arg_vals)
        current = GApp(f"ite_{info.sort}", (present, lookup, ival))
        acc = GApp(d.op_name("Add"),
                   (GApp(d.op_name("Del"), (acc, *arg_vals, current)),
                    *arg_vals, rhs))
    return acc


def compile_machine(
    machine: Machine,
    state: State,
    probes: Optional[Sequence[dict[str, Value]]] = None,
    K: Optional[int] = None,
    L: Optional[int] = None,
    require_type0: bool = False,
    probe_steps: int = 4,
) -> CompiledMachine:
    """Compile; ``state`` supplies carriers and static semantics.  The
    resulting theta is input-independent as long as the program body
    does not mention input constants (inputs enter through the initial
    slot codes only)."""
    voc = machine.voc
    slots = make_slots(voc)
    if require_type0:
        bad = [s.symbol for s in slots if s.representation == "delta"]
        if bad:
            raise CompileError(f"not a type-0 machine: {bad} have positive arity")
    if not slots:
        raise CompileError("machine has no dynamic symbols")
    gp = normalize(machine.program)
    sig, partials = lower_signature(voc, state, slots)
    tr = Translator(voc, machine.init, {s.symbol: s for s in slots}, partials)
    tr._sig = sig

    clause_guards = [_clause_guard(tr, cl) for cl in gp.clauses]
    update_clauses = [
        (cl, g) for cl, g in zip(gp.clauses, clause_guards) if _clause_updates(cl)
    ]

    fail_parts = []
    for cl, g in zip(gp.clauses, clause_guards):
        if any(isinstance(i, FailI) for i in cl.instructions):
            fail_parts.append(g)
    for cl, g in zip(gp.clauses, clause_guards):
        ups = _clause_updates(cl)
        if ups:
            all_def = gconj([_update_def(tr, u) for u in ups])
            fail_parts.append(gand(g, gnot(all_def)))
    rho_fail = gdisj(fail_parts)

    rho_clash = gdisj([
        gand(g, _clause_clash(tr, voc, _clause_updates(cl)))
        for cl, g in zip(gp.clauses, clause_guards)
        if len(_clause_updates(cl)) > 1
    ])

    explicit_halt = gdisj([
        g for cl, g in zip(gp.clauses, clause_guards)
        if any(isinstance(i, HaltI) for i in cl.instructions)
    ])
    implicit_halt = gnot(gdisj([g for _, g in update_clauses]))
    rho_halt = gor(explicit_halt, implicit_halt)

    outputs = tuple(voc.outputs())
    success_parts: list = [nat(SUCCESS_CODE)]
    for sym in outputs:
        info = tr.slots[sym.name]
        success_parts.append(GVar(sym.name, info.datatype))

    fold = tr._fold
    branches: list[Branch] = [
        ExitBranch(fold(rho_fail), (nat(FAIL_CODE),)),
        ExitBranch(fold(rho_clash), (nat(CLASH_CODE),)),
        ExitBranch(fold(rho_halt),
                   tuple(fold(p) if isinstance(p, GoodTerm) else p
                         for p in success_parts),
                   tuple_form=True),
    ]
    for cl, g in update_clauses:
        ups = _clause_updates(cl)
        row = tuple(fold(_slot_update(tr, info, ups)) for info in slots)
        branches.append(UpdateBranch(fold(g), row))

    compiled_slots = [s.as_slot() for s in slots]
    if probes is None:
        probes = _default_probes(machine, state, slots, probe_steps)
    cc = build_branch_combinator(branches, compiled_slots, sig, probes, K, L)
    return CompiledMachine(machine, gp, cc, tuple(slots), sig, outputs)


def compile_type0(machine: Machine, state: State, **kw) -> CompiledMachine:
    return compile_machine(machine, state, require_type0=True, **kw)


def compile_general(machine: Machine, state: State, **kw) -> CompiledMachine:
    return compile_machine(machine, state, require_type0=False, **kw)


def _default_probes(machine, state, slots, probe_steps):
    """Probe valuations from a short run of the machine itself."""
    s0 = machine.initial_state(state)
    r = run_from_state(s0, machine.program, probe_steps)
    cm_like = CompiledMachine(machine, None, None, tuple(slots), None, ())
    probes = []
    for st in r.trajectory:
        vals = cm_like.slot_values_for_state(st, s0)
        probes.append({info.symbol: v for info, v in zip(slots, vals)})
    return probes


# ---------------------------------------------------------------------------
# Result decoding


@dataclass(frozen=True)
class DecodedResult:
    kind: str  # "running" | "success" | "fail" | "clash"
    values: Optional[tuple[Value, ...]] = None  # slots when running
    outputs: Optional[dict] = None  # decoded outputs on success


class DecodeError(Exception):
    """The snapshot matches no compiled shape (a compiler/engine bug)."""


def decode_result(t: Term, cm: CompiledMachine) -> DecodedResult:
    vals = decode_state(t, cm.theta, [s.as_slot() for s in cm.slots])
    if vals is not None:
        return DecodedResult("running", values=vals)
    n = match_nat(t)
    if n == FAIL_CODE:
        return DecodedResult("fail")
    if n == CLASH_CODE:
        return DecodedResult("clash")
    out = _match_success(t, cm)
    if out is not None:
        return DecodedResult("success", outputs=out)
    raise DecodeError(f"unrecognized result shape: {t!r}")


def _match_success(t: Term, cm: CompiledMachine) -> Optional[dict]:
    from .lambda_f import match_code

    if not isinstance(t, Abs):
        return None
    body = t.body
    args = []
    while isinstance(body, App):
        args.append(body.arg)
        body = body.fun
    args.reverse()
    if body != Var(t.binder) or len(args) != 1 + len(cm.outputs):
        return None
    if match_nat(args[0]) != SUCCESS_CODE:
        return None
    out = {}
    for a, sym in zip(args[1:], cm.outputs):
        info = next(s for s in cm.slots if s.symbol == sym.name)
        v = match_code(a, info.datatype)
        if v is None:
            return None
        out[sym.name] = v
    return out


def delta_as_map(v: Value) -> dict[tuple, object]:
    """Interpret a difference-list code as a finite map (later entries
    do not occur for the same key while the list stays functional)."""
    out: dict[tuple, object] = {}
    for entry in v.payload:
        out[entry[:-1]] = entry[-1]
    return out
