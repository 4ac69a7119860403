r"""Text format for machines: sorts with finite carriers, static and
dynamic declarations, initialization rules, and the program.

Grammar (EBNF; '#' starts a comment running to end of line):

    machine     = { sortdecl | staticdecl | inputdecl | dynamicdecl
                  | initdecl } programsec ;
    sortdecl    = "sort" IDENT "=" ( NAT ".." NAT
                                   | "{" IDENT { "," IDENT } "}" ) ;
    staticdecl  = "static" IDENT ":" profile "="
                  ( "builtin" IDENT | table ) ;
    inputdecl   = "input" IDENT ":" IDENT ;
    dynamicdecl = "dynamic" IDENT ":" profile [ "output" ] ;
    profile     = [ IDENT { IDENT } ] "->" IDENT ;
    table       = "{" row { "," row } "}" ;
    row         = literal { literal } "->" literal ;
    initdecl    = "init" IDENT [ "(" IDENT { "," IDENT } ")" ] "=" term ;
    programsec  = "program" ":" instr ;
    instr       = "skip" | "halt" | "fail"
                | IDENT [ "(" term { "," term } ")" ] ":=" term
                | "if" term "then" instr [ "else" instr ]
                | "par" "{" { instr } "}" ;
    term        = IDENT [ "(" term { "," term } ")" ] | NAT ;
    literal     = NAT | IDENT ;

Bool, its connectives (and/or/not, true/false) and one equality symbol
per sort (eq_<sort>) are injected automatically.  Enumeration elements
and numeric literals become nullary static constants.  Builtin statics:
zero, succ, plus, rem (undefined at divisor 0), lt, le; every builtin
and table result is clipped to the carrier (out of range = undefined).
Input constants are bound when the state is built; unbound inputs
default to the first carrier element.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .asm import (
    BOOL_SORT,
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
    TVar,
    TypedTerm,
    Update,
    Vocabulary,
    check_program,
    term_sort,
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class SourceError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(map(str, diagnostics)))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SortDecl:
    name: str
    lo: Optional[int] = None
    hi: Optional[int] = None
    elements: tuple[str, ...] = ()

    @property
    def carrier(self) -> tuple:
        if self.elements:
            return self.elements
        return tuple(range(self.lo, self.hi + 1))


@dataclass(frozen=True)
class StaticDecl:
    name: str
    arg_sorts: tuple[str, ...]
    result: str
    impl: tuple  # ("builtin", name) | ("table", rows) | ("input",)
                 # | ("literal", value) | ("element", value)


@dataclass(frozen=True)
class DynamicDecl:
    name: str
    arg_sorts: tuple[str, ...]
    result: str
    output: bool


@dataclass(frozen=True)
class InitDecl:
    name: str
    params: tuple[str, ...]
    term: TypedTerm  # over TVar(param, sort)


_BUILTINS = {
    "zero": lambda: 0,
    "succ": lambda a: a + 1,
    "plus": lambda a, b: a + b,
    "rem": lambda a, b: a % b if b != 0 else None,
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "true": lambda: True,
    "false": lambda: False,
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "not": lambda a: not a,
    "eq": lambda a, b: a == b,
}


@dataclass
class SourceMachine:
    sorts: list[SortDecl]
    statics: list[StaticDecl]
    dynamics: list[DynamicDecl]
    inits: list[InitDecl]
    program: Program

    def vocabulary(self) -> Vocabulary:
        names = [BOOL_SORT] + [s.name for s in self.sorts]
        symbols: dict[str, Symbol] = {}
        for st in self.statics:
            symbols[st.name] = Symbol(st.name, "static", st.arg_sorts, st.result,
                                      is_input=st.impl[0] == "input")
        for name, arity, result in (("true", 0, BOOL_SORT), ("false", 0, BOOL_SORT),
                                    ("not", 1, BOOL_SORT), ("and", 2, BOOL_SORT),
                                    ("or", 2, BOOL_SORT)):
            symbols.setdefault(name, Symbol(name, "static",
                                            (BOOL_SORT,) * arity, result))
        for s in names:
            symbols.setdefault(f"eq_{s}", Symbol(f"eq_{s}", "static", (s, s), BOOL_SORT))
        for d in self.dynamics:
            symbols[d.name] = Symbol(d.name, "dynamic", d.arg_sorts, d.result,
                                     is_output=d.output)
        return Vocabulary(tuple(names), symbols)

    def machine(self) -> Machine:
        voc = self.vocabulary()
        init: dict[str, InitRule] = {}
        for decl in self.inits:
            init[decl.name] = _init_rule(decl)
        for d in self.dynamics:
            if d.name not in init:
                raise SourceError([Diagnostic(0, 0, f"dynamic symbol {d.name} has no init rule")])
        m = Machine(voc, self.program, init)
        check_program(voc, self.program)
        return m

    def state(self, bindings: Optional[dict[str, object]] = None) -> State:
        bindings = bindings or {}
        voc = self.vocabulary()
        carriers: dict[str, tuple] = {BOOL_SORT: (True, False)}
        for s in self.sorts:
            carriers[s.name] = s.carrier
        statics: dict = {}
        for sym in voc.symbols.values():
            if sym.kind != "static":
                continue
            decl = next((d for d in self.statics if d.name == sym.name), None)
            fn = _semantics(sym, decl, bindings, carriers)
            statics[sym.name] = _clip(fn, carriers[sym.result_sort])
        return State(voc, carriers, statics, {})


def _init_rule(decl: InitDecl) -> InitRule:
    order: list[str] = []

    def walk(t: TypedTerm) -> TypedTerm:
        if isinstance(t, TVar):
            if t.name not in order:
                order.append(t.name)
            return TVar(f"x{order.index(t.name) + 1}", t.sort)
        return TApp(t.head, tuple(walk(a) for a in t.args))

    term = walk(decl.term)
    sigma = tuple(decl.params.index(v) + 1 for v in order)
    return InitRule(sigma, term)


def _semantics(sym: Symbol, decl: Optional[StaticDecl], bindings, carriers):
    if decl is None:  # injected connective or equality
        if sym.name.startswith("eq_"):
            return _BUILTINS["eq"]
        return _BUILTINS[sym.name]
    kind = decl.impl[0]
    if kind == "builtin":
        name = decl.impl[1]
        if name not in _BUILTINS:
            raise SourceError([Diagnostic(0, 0, f"unknown builtin {name}")])
        return _BUILTINS[name]
    if kind == "table":
        mapping = {tuple(r[:-1]): r[-1] for r in decl.impl[1]}
        return lambda *a: mapping.get(tuple(a))
    if kind == "input":
        default = carriers[sym.result_sort][0]
        value = bindings.get(sym.name, default)
        return lambda _v=value: _v
    if kind in ("literal", "element"):
        return lambda _v=decl.impl[1]: _v
    raise ValueError(f"bad static implementation {decl.impl!r}")


def _clip(fn, carrier):
    allowed = set(carrier)

    def wrapped(*a):
        v = fn(*a)
        return v if v is None or v in allowed else None

    return wrapped


# ---------------------------------------------------------------------------
# Parser


_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)"
    r"|(?P<dots>\.\.)|(?P<arrow>->)|(?P<assign>:=)"
    r"|(?P<punct>[:=(){},])"
    r"|(?P<nat>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)

_KEYWORDS = {"sort", "static", "input", "dynamic", "init", "program",
             "builtin", "output", "skip", "halt", "fail", "if", "then",
             "else", "par"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(src: str) -> list[_Tok]:
    toks = []
    line, col, pos = 1, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise SourceError([Diagnostic(line, col, f"unexpected character {src[pos]!r}")])
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(text)
        else:
            toks.append(_Tok(kind if kind in ("nat", "ident", "dots", "arrow", "assign")
                             else text, text, line, col))
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _P:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0
        self.diags: list[Diagnostic] = []

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, tok: _Tok, msg: str):
        raise SourceError(self.diags + [Diagnostic(tok.line, tok.col, msg)])

    def expect(self, kind: str, what: str = "") -> _Tok:
        t = self.next()
        if t.kind != kind:
            self.error(t, f"expected {what or kind}, got {t.text!r}")
        return t

    def ident(self, what="identifier") -> str:
        t = self.expect("ident", what)
        return t.text


def parse_source(src: str) -> SourceMachine:
    p = _P(_lex(src))
    sorts: list[SortDecl] = []
    statics: list[StaticDecl] = []
    dynamics: list[DynamicDecl] = []
    inits: list[InitDecl] = []
    program: Optional[Program] = None

    ctx = _Ctx(sorts, statics, dynamics)
    while p.peek().kind != "eof":
        t = p.peek()
        if t.kind != "ident":
            p.error(t, "expected a declaration keyword")
        if t.text == "sort":
            sorts.append(_parse_sort(p, ctx))
        elif t.text == "static":
            statics.append(_parse_static(p, ctx))
        elif t.text == "input":
            p.next()
            name = p.ident("input name")
            p.expect(":")
            sort = p.ident("sort name")
            statics.append(StaticDecl(name, (), sort, ("input",)))
        elif t.text == "dynamic":
            dynamics.append(_parse_dynamic(p))
        elif t.text == "init":
            inits.append(_parse_init(p, ctx))
        elif t.text == "program":
            p.next()
            p.expect(":")
            program = _parse_instr(p, ctx)
            break
        else:
            p.error(t, f"unknown declaration {t.text!r}")
    if program is None:
        p.error(p.peek(), "missing program section")
    tail = p.peek()
    if tail.kind != "eof":
        p.error(tail, "trailing input after program")
    return SourceMachine(sorts, statics, dynamics, inits, program)


@dataclass
class _Ctx:
    sorts: list[SortDecl]
    statics: list[StaticDecl]
    dynamics: list[DynamicDecl]

    def sort_of_symbol(self, name: str) -> Optional[str]:
        for s in self.statics:
            if s.name == name:
                return s.result
        for d in self.dynamics:
            if d.name == name:
                return d.result
        return None

    def numeric_sort(self, p: _P, tok: _Tok) -> str:
        ranges = [s for s in self.sorts if not s.elements]
        if len(ranges) != 1:
            p.error(tok, "numeric literal is ambiguous without exactly one range sort")
        return ranges[0].name

    def literal_constant(self, p: _P, tok: _Tok) -> str:
        sort = self.numeric_sort(p, tok)
        name = tok.text
        if not any(s.name == name for s in self.statics):
            self.statics.append(StaticDecl(name, (), sort, ("literal", int(tok.text))))
        return name


def _parse_sort(p: _P, ctx: _Ctx) -> SortDecl:
    p.next()
    name = p.ident("sort name")
    p.expect("=")
    t = p.next()
    if t.kind == "nat":
        lo = int(t.text)
        p.expect("dots", "'..'")
        hi = int(p.expect("nat", "upper bound").text)
        return SortDecl(name, lo, hi)
    if t.kind == "{":
        elements = [p.ident("element")]
        while p.peek().kind == ",":
            p.next()
            elements.append(p.ident("element"))
        p.expect("}")
        for e in elements:
            ctx.statics.append(StaticDecl(e, (), name, ("element", e)))
        return SortDecl(name, elements=tuple(elements))
    p.error(t, "expected a range or an enumeration")


def _parse_profile(p: _P) -> tuple[tuple[str, ...], str]:
    args = []
    while p.peek().kind == "ident":
        args.append(p.ident())
    p.expect("arrow", "'->'")
    result = p.ident("result sort")
    return tuple(args), result


def _parse_static(p: _P, ctx: _Ctx) -> StaticDecl:
    p.next()
    name = p.ident("static name")
    p.expect(":")
    args, result = _parse_profile(p)
    p.expect("=")
    t = p.next()
    if t.kind == "ident" and t.text == "builtin":
        b = p.ident("builtin name")
        if b not in _BUILTINS:
            p.error(t, f"unknown builtin {b!r}")
        return StaticDecl(name, args, result, ("builtin", b))
    if t.kind == "{":
        rows = []
        while True:
            row = [_parse_literal(p)]
            while p.peek().kind in ("nat", "ident"):
                row.append(_parse_literal(p))
            p.expect("arrow", "'->'")
            row.append(_parse_literal(p))
            rows.append(tuple(row))
            if p.peek().kind != ",":
                break
            p.next()
        p.expect("}")
        return StaticDecl(name, args, result, ("table", tuple(rows)))
    p.error(t, "expected 'builtin' or a table")


def _parse_literal(p: _P):
    t = p.next()
    if t.kind == "nat":
        return int(t.text)
    if t.kind == "ident":
        if t.text == "true":
            return True
        if t.text == "false":
            return False
        return t.text
    p.error(t, "expected a literal")


def _parse_dynamic(p: _P) -> DynamicDecl:
    p.next()
    name = p.ident("dynamic name")
    p.expect(":")
    args, result = _parse_profile(p)
    output = False
    if p.peek().kind == "ident" and p.peek().text == "output":
        p.next()
        output = True
    return DynamicDecl(name, args, result, output)


def _parse_init(p: _P, ctx: _Ctx) -> InitDecl:
    p.next()
    tok = p.peek()
    name = p.ident("dynamic name")
    decl = next((d for d in ctx.dynamics if d.name == name), None)
    if decl is None:
        p.error(tok, f"init for undeclared dynamic symbol {name!r}")
    params: list[str] = []
    if p.peek().kind == "(":
        p.next()
        params.append(p.ident("parameter"))
        while p.peek().kind == ",":
            p.next()
            params.append(p.ident("parameter"))
        p.expect(")")
    if len(params) != len(decl.arg_sorts):
        p.error(tok, f"init of {name} needs {len(decl.arg_sorts)} parameters")
    p.expect("=")
    env = dict(zip(params, decl.arg_sorts))
    term = _parse_term(p, ctx, env, static_only=True)
    return InitDecl(name, tuple(params), term)


def _parse_term(p: _P, ctx: _Ctx, env: Optional[dict[str, str]] = None,
                static_only: bool = False) -> TypedTerm:
    t = p.next()
    if t.kind == "nat":
        return TApp(ctx.literal_constant(p, t))
    if t.kind != "ident":
        p.error(t, "expected a term")
    name = t.text
    if env is not None and name in env:
        return TVar(name, env[name])
    if not _known_symbol(ctx, name):
        p.error(t, f"unknown symbol {name!r}")
    if static_only and any(d.name == name for d in ctx.dynamics):
        p.error(t, f"init term uses dynamic symbol {name!r}; "
                   "only static symbols are allowed")
    args: list[TypedTerm] = []
    if p.peek().kind == "(":
        p.next()
        args.append(_parse_term(p, ctx, env, static_only))
        while p.peek().kind == ",":
            p.next()
            args.append(_parse_term(p, ctx, env, static_only))
        p.expect(")")
    return TApp(name, tuple(args))


def _known_symbol(ctx: _Ctx, name: str) -> bool:
    if any(s.name == name for s in ctx.statics):
        return True
    if any(d.name == name for d in ctx.dynamics):
        return True
    if name in ("true", "false", "and", "or", "not"):
        return True
    sorts = [BOOL_SORT] + [s.name for s in ctx.sorts]
    return name in (f"eq_{s}" for s in sorts)


def _parse_instr(p: _P, ctx: _Ctx) -> Program:
    t = p.peek()
    if t.kind == "ident" and t.text == "skip":
        p.next()
        return Skip()
    if t.kind == "ident" and t.text == "halt":
        p.next()
        return HaltI()
    if t.kind == "ident" and t.text == "fail":
        p.next()
        return FailI()
    if t.kind == "ident" and t.text == "if":
        p.next()
        cond = _parse_term(p, ctx)
        kw = p.expect("ident", "'then'")
        if kw.text != "then":
            p.error(kw, "expected 'then'")
        then = _parse_instr(p, ctx)
        orelse: Program = Skip()
        if p.peek().kind == "ident" and p.peek().text == "else":
            p.next()
            orelse = _parse_instr(p, ctx)
        return If(cond, then, orelse)
    if t.kind == "ident" and t.text == "par":
        p.next()
        p.expect("{")
        blocks = []
        while p.peek().kind != "}":
            blocks.append(_parse_instr(p, ctx))
        p.expect("}")
        return Par(tuple(blocks))
    # an update: name or name(args) := term
    tok = p.peek()
    name = p.ident("instruction")
    if not any(d.name == name for d in ctx.dynamics):
        p.error(tok, f"update target {name!r} is not a dynamic symbol")
    args: list[TypedTerm] = []
    if p.peek().kind == "(":
        p.next()
        args.append(_parse_term(p, ctx))
        while p.peek().kind == ",":
            p.next()
            args.append(_parse_term(p, ctx))
        p.expect(")")
    p.expect("assign", "':='")
    rhs = _parse_term(p, ctx)
    return Update(name, tuple(args), rhs)


# ---------------------------------------------------------------------------
# Printer


def print_source(sm: SourceMachine) -> str:
    lines: list[str] = []
    for s in sm.sorts:
        if s.elements:
            lines.append(f"sort {s.name} = {{{', '.join(s.elements)}}}")
        else:
            lines.append(f"sort {s.name} = {s.lo}..{s.hi}")
    for st in sm.statics:
        if st.impl[0] == "input":
            lines.append(f"input {st.name} : {st.result}")
        elif st.impl[0] == "builtin":
            prof = " ".join(st.arg_sorts) + (" " if st.arg_sorts else "")
            lines.append(f"static {st.name} : {prof}-> {st.result} = builtin {st.impl[1]}")
        elif st.impl[0] == "table":
            rows = ", ".join(
                " ".join(_show_lit(x) for x in r[:-1]) + " -> " + _show_lit(r[-1])
                for r in st.impl[1]
            )
            prof = " ".join(st.arg_sorts) + (" " if st.arg_sorts else "")
            lines.append(f"static {st.name} : {prof}-> {st.result} = {{{rows}}}")
        # literal/element constants are re-created by the parser
    for d in sm.dynamics:
        prof = " ".join(d.arg_sorts) + (" " if d.arg_sorts else "")
        out = " output" if d.output else ""
        lines.append(f"dynamic {d.name} : {prof}-> {d.result}{out}")
    for ini in sm.inits:
        params = f"({', '.join(ini.params)})" if ini.params else ""
        lines.append(f"init {ini.name}{params} = {print_typed_term(ini.term)}")
    lines.append("program:")
    lines.append(print_program(sm.program, indent=1))
    return "\n".join(lines) + "\n"


def _show_lit(x) -> str:
    if x is True:
        return "true"
    if x is False:
        return "false"
    return str(x)


def print_typed_term(t: TypedTerm) -> str:
    if isinstance(t, TVar):
        return t.name
    if not t.args:
        return t.head
    return f"{t.head}({', '.join(print_typed_term(a) for a in t.args)})"


def print_program(prog: Program, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(prog, Skip):
        return pad + "skip"
    if isinstance(prog, HaltI):
        return pad + "halt"
    if isinstance(prog, FailI):
        return pad + "fail"
    if isinstance(prog, Update):
        lhs = prog.symbol
        if prog.args:
            lhs += f"({', '.join(print_typed_term(a) for a in prog.args)})"
        return f"{pad}{lhs} := {print_typed_term(prog.rhs)}"
    if isinstance(prog, If):
        out = f"{pad}if {print_typed_term(prog.cond)} then\n"
        out += print_program(prog.then, indent + 1)
        if not isinstance(prog.orelse, Skip):
            out += f"\n{pad}else\n" + print_program(prog.orelse, indent + 1)
        return out
    if isinstance(prog, Par):
        body = "\n".join(print_program(b, indent + 1) for b in prog.blocks)
        return f"{pad}par {{\n{body}\n{pad}}}"
    raise TypeError(f"not a program: {prog!r}")
