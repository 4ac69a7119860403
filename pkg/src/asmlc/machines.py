"""Bundled example machines used by the CLI, tests, and benchmarks."""
from __future__ import annotations

from .asm import (
    FailI,
    HaltI,
    If,
    InitRule,
    Machine,
    Par,
    State,
    Symbol,
    TApp,
    TVar,
    Update,
    Vocabulary,
)

NAT = "Nat"


def _nat_statics(extra: dict) -> dict:
    base = {
        "zero": lambda: 0,
        "rem": lambda a, b: a % b if b != 0 else None,
        "lt": lambda a, b: a < b,
        "le": lambda a, b: a <= b,
        "plus": lambda a, b: a + b,
        "succ": lambda a: a + 1,
        "and": lambda a, b: a and b,
        "or": lambda a, b: a or b,
        "not": lambda a: not a,
        "eq_Nat": lambda a, b: a == b,
        "eq_Bool": lambda a, b: a == b,
    }
    base.update(extra)
    return base


_NAT_STATIC_SYMBOLS = {
    "zero": Symbol("zero", "static", (), NAT),
    "rem": Symbol("rem", "static", (NAT, NAT), NAT),
    "lt": Symbol("lt", "static", (NAT, NAT), "Bool"),
    "le": Symbol("le", "static", (NAT, NAT), "Bool"),
    "plus": Symbol("plus", "static", (NAT, NAT), NAT),
    "succ": Symbol("succ", "static", (NAT,), NAT),
    "and": Symbol("and", "static", ("Bool", "Bool"), "Bool"),
    "or": Symbol("or", "static", ("Bool", "Bool"), "Bool"),
    "not": Symbol("not", "static", ("Bool",), "Bool"),
    "eq_Nat": Symbol("eq_Nat", "static", (NAT, NAT), "Bool"),
    "eq_Bool": Symbol("eq_Bool", "static", ("Bool", "Bool"), "Bool"),
}


def _bounded(fn, limit):
    """Clamp a static into the finite carrier: out-of-range is
    undefined (the carrier would not contain the result)."""

    def wrapped(*a):
        v = fn(*a)
        return v if v is None or (isinstance(v, int) and v <= limit) else None

    return wrapped


def nat_state(max_nat: int, inputs: dict[str, int] | None = None,
              extra_symbols: dict[str, Symbol] | None = None,
              extra_statics: dict | None = None) -> tuple[dict, dict]:
    """(symbols, statics) for the standard arithmetic vocabulary over
    the carrier 0..max_nat, with arity-0 input constants bound."""
    symbols = dict(_NAT_STATIC_SYMBOLS)
    statics = _nat_statics(extra_statics or {})
    for name in ("plus", "succ"):
        statics[name] = _bounded(statics[name], max_nat)
    for name, v in (inputs or {}).items():
        symbols[name] = Symbol(name, "static", (), NAT, is_input=True)
        statics[name] = (lambda _v=v: _v)
    symbols.update(extra_symbols or {})
    return symbols, statics


def euclid_machine(max_nat: int = 60) -> Machine:
    """gcd by repeated remainder: while 0 < b, (a, b) := (b, a rem b);
    the answer is read off a when b reaches 0."""
    symbols, _ = nat_state(max_nat, inputs={"a0": 0, "b0": 0})
    symbols["a"] = Symbol("a", "dynamic", (), NAT, is_output=True)
    symbols["b"] = Symbol("b", "dynamic", (), NAT)
    voc = Vocabulary(("Bool", NAT), symbols)
    program = If(
        TApp("lt", (TApp("zero"), TApp("b"))),
        Par((
            Update("a", (), TApp("b")),
            Update("b", (), TApp("rem", (TApp("a"), TApp("b")))),
        )),
    )
    init = {"a": InitRule((), TApp("a0")), "b": InitRule((), TApp("b0"))}
    return Machine(voc, program, init)


def euclid_state(a: int, b: int, max_nat: int = 60) -> State:
    _, statics = nat_state(max_nat, inputs={"a0": a, "b0": b})
    voc = euclid_machine(max_nat).voc
    return State(voc, {"Bool": (True, False), NAT: tuple(range(max_nat + 1))},
                 statics, {})


def fail_machine() -> Machine:
    """Fails explicitly on the first step."""
    symbols, _ = nat_state(4)
    symbols["c"] = Symbol("c", "dynamic", (), NAT, is_output=True)
    voc = Vocabulary(("Bool", NAT), symbols)
    init = {"c": InitRule((), TApp("zero"))}
    return Machine(voc, FailI(), init)


def clash_machine() -> Machine:
    """Two active updates write different values to one location."""
    symbols, _ = nat_state(4)
    symbols["c"] = Symbol("c", "dynamic", (), NAT, is_output=True)
    voc = Vocabulary(("Bool", NAT), symbols)
    program = Par((
        Update("c", (), TApp("succ", (TApp("zero"),))),
        Update("c", (), TApp("succ", (TApp("succ", (TApp("zero"),)),))),
    ))
    init = {"c": InitRule((), TApp("zero"))}
    return Machine(voc, program, init)


def small_state(machine: Machine, max_nat: int = 4) -> State:
    _, statics = nat_state(max_nat)
    return State(machine.voc, {"Bool": (True, False), NAT: tuple(range(max_nat + 1))},
                 statics, {})


def doubling_machine(stop: int = 4, max_nat: int = 8) -> Machine:
    """Tabulates f(i) = i + i for i below ``stop`` through a unary
    dynamic symbol, then halts; exercises the difference-list pathway."""
    symbols, _ = nat_state(max_nat)
    symbols["f"] = Symbol("f", "dynamic", (NAT,), NAT, is_output=True)
    symbols["i"] = Symbol("i", "dynamic", (), NAT)
    symbols["stop"] = Symbol("stop", "static", (), NAT, is_input=True)
    voc = Vocabulary(("Bool", NAT), symbols)
    cond = TApp("eq_Nat", (TApp("i"), TApp("stop")))
    program = Par((
        If(TApp("not", (cond,)),
           Par((
               Update("f", (TApp("i"),), TApp("plus", (TApp("i"), TApp("i")))),
               Update("i", (), TApp("succ", (TApp("i"),))),
           ))),
        If(cond, HaltI()),
    ))
    init = {
        "f": InitRule((1,), TVar("x1", NAT)),
        "i": InitRule((), TApp("zero")),
    }
    return Machine(voc, program, init)


def doubling_state(stop: int = 4, max_nat: int = 8) -> State:
    m = doubling_machine(stop, max_nat)
    _, statics = nat_state(max_nat, extra_statics={"stop": lambda: stop})
    statics["stop"] = lambda: stop
    return State(m.voc, {"Bool": (True, False), NAT: tuple(range(max_nat + 1))},
                 statics, {})
