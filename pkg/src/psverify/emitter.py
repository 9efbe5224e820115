"""Theory-style audit document: definitions and lemma statements with status comments, no proofs."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import expr as E
from .core.types import TCon, TFun, TTuple, TVar
from .defgraph import datatype_groups
from .prover.sequent import Proved
from .surface.resolve import render_name

# ASCII operators and their precedence; printing and re-parsing share this table
OPS = {"==>": ("-->", 1), "||": ("|", 2), "&&": ("&", 3), "==": ("=", 4), "!=": ("~=", 4),
       "<": ("<", 5), "<=": ("<=", 5), ">": (">", 5), ">=": (">=", 5),
       "+": ("+", 6), "-": ("-", 6), "*": ("*", 7)}
ATOM = 10
_BY_TEXT = {text: (op, p) for op, (text, p) in OPS.items()}


def _paren(s: str, inner: int, outer: int) -> str:
    return f"({s})" if inner < outer else s


def _tick(i: int) -> str:
    return "'" + (chr(ord("a") + i) if i < 26 else f"t{i}")


class TypeNames:
    """Prefix-tick names for the type variables of one declaration."""

    def __init__(self, typarams=()):
        self.names: dict[str, str] = {}
        for t in typarams:
            self.name(t)

    def name(self, tv: str) -> str:
        if tv not in self.names:
            self.names[tv] = _tick(len(self.names))
        return self.names[tv]

    def show(self, t, nested: bool = False) -> str:
        if isinstance(t, TVar):
            return self.name(t.name)
        if isinstance(t, TCon):
            if t.name in ("Int", "Bool"):
                return t.name.lower()
            if not t.args:
                return render_name(t.name)
            if len(t.args) == 1:
                return f"{self.show(t.args[0], True)} {render_name(t.name)}"
            return f"({', '.join(self.show(a) for a in t.args)}) {render_name(t.name)}"
        if isinstance(t, TTuple):
            s = " * ".join(self.show(a, True) for a in t.items)
            return f"({s})" if nested else s
        if isinstance(t, TFun):
            s = " => ".join([self.show(a, True) for a in t.params] + [self.show(t.result, True)])
            return f"({s})"
        return str(t)


def show_pattern(p) -> str:
    if isinstance(p, E.Wild):
        return "_"
    if isinstance(p, E.PVar):
        return render_name(p.name)
    if isinstance(p, E.PLit):
        return ("True" if p.value else "False") if isinstance(p.value, bool) else _int(p.value)
    if isinstance(p, E.PNotLits):
        return "(_ ~: {" + ", ".join(map(str, sorted(p.values))) + "})"
    if isinstance(p, E.PCon):
        if not p.args:
            return render_name(p.name)
        return "(" + " ".join([render_name(p.name)] + [show_pattern(a) for a in p.args]) + ")"
    if isinstance(p, E.PTup):
        return "(" + ", ".join(show_pattern(a) for a in p.items) + ")"
    raise TypeError(p)


def _int(v: int) -> str:
    return str(v) if v >= 0 else f"({v})"


def _app(head: str, args, prec: int) -> str:
    if not args:
        return head
    return _paren(" ".join([head] + [show_term(a, ATOM) for a in args]), ATOM - 1, prec)


def show_term(e, prec: int = 0) -> str:
    if isinstance(e, E.Var):
        return render_name(e.name)
    if isinstance(e, E.IntLit):
        return _int(e.value)
    if isinstance(e, E.BoolLit):
        return "True" if e.value else "False"
    if isinstance(e, E.Ctor):
        return _app(render_name(e.name), e.args, prec)
    if isinstance(e, E.Call):
        return _app(render_name(e.fun), e.args, prec)
    if isinstance(e, E.FunRef):
        return render_name(e.name)
    if isinstance(e, E.Apply):
        return _paren(" ".join([show_term(e.fn, ATOM)] + [show_term(a, ATOM) for a in e.args]), ATOM - 1, prec)
    if isinstance(e, E.Proj):
        head = {1: "fst", 2: "snd"}.get(e.index, f"proj_{e.index}")
        return _app(head, (e.expr,), prec)
    if isinstance(e, E.Tuple):
        return "(" + ", ".join(show_term(a) for a in e.items) + ")"
    if isinstance(e, E.Lam):
        return f"(%{' '.join(render_name(p) for p in e.params)}. {show_term(e.body)})"
    if isinstance(e, E.ForAll):
        return f"(ALL {' '.join(render_name(n) for n, _ in e.vars)}. {show_term(e.body)})"
    if isinstance(e, E.If):
        return f"(if {show_term(e.cond)} then {show_term(e.then)} else {show_term(e.else_)})"
    if isinstance(e, E.Let):
        return f"(let {render_name(e.name)} = {show_term(e.value, 5)} in {show_term(e.body)})"
    if isinstance(e, E.Match):
        cs = " | ".join(f"{show_pattern(c.pattern)} => {show_term(c.body, 3)}" for c in e.clauses)
        return f"(case {show_term(e.scrut)} of {cs})"
    if isinstance(e, E.Prim):
        if e.op == "!":
            return _paren("~ " + show_term(e.args[0], ATOM), ATOM - 1, prec)
        if e.op == "neg":
            return _paren("- " + show_term(e.args[0], ATOM), ATOM - 1, prec)
        text, p = OPS[e.op]
        a, b = e.args
        lp, rp = (p + 1, p) if e.op == "==>" else (p, p + 1)
        return _paren(f"{show_term(a, lp)} {text} {show_term(b, rp)}", p, prec)
    raise TypeError(f"cannot render {e!r}")


def _anon_unused(lhs: tuple, rhs) -> tuple:
    used = E.free_vars(rhs)

    def go(p):
        if isinstance(p, E.PVar):
            return p if p.name in used else E.Wild()
        if isinstance(p, E.PCon):
            return E.PCon(p.name, tuple(go(a) for a in p.args))
        if isinstance(p, E.PTup):
            return E.PTup(tuple(go(a) for a in p.items))
        return p
    return tuple(go(p) for p in lhs)


def show_equation(eq) -> str:
    lhs = _anon_unused(eq.lhs, eq.rhs)
    head = " ".join([render_name(eq.fun)] + [show_pattern(p) for p in lhs])
    return f"{head} = {show_term(eq.rhs, OPS['=='][1] + 1)}"


def _field_type(tn: TypeNames, t) -> str:
    s = tn.show(t, True)
    return f'"{s}"' if " " in s or not s.isidentifier() and not s.startswith("'") else s


def show_datatype(d) -> str:
    tn = TypeNames(d.typarams)
    params = [tn.name(t) for t in d.typarams]
    head = render_name(d.name)
    if len(params) == 1:
        head = f"{params[0]} {head}"
    elif params:
        head = f"({', '.join(params)}) {head}"
    ctors = []
    for c in d.constructors:
        ctors.append(" ".join([render_name(c.name)] + [_field_type(tn, t) for _, t in c.fields]))
    return f"{head} = {' | '.join(ctors)}"


def vc_statement(vc) -> str:
    parts = [show_term(h, 2) for h in vc.hypotheses] + [show_term(vc.goal, 2)]
    return " ==> ".join(parts)


def _status(result) -> str:
    if isinstance(result, Proved):
        return "(* proved *)"
    if result is None:
        return "(* not attempted *)"
    return f"(* unknown: {result.reason} *)"


def _theory_name(name: str) -> str:
    s = re.sub(r"[^A-Za-z0-9_]", "_", name)
    return s if s[:1].isalpha() else "T" + s


def emit_theory(analysis, name: str = "Program") -> str:
    """Render user datatypes, function equations and VC statements of a solved program."""
    program = analysis.program
    lines = [f"theory {_theory_name(name)}"]
    has_base = any(f.origin == "base" for f in program.functions) or any(d.origin == "base" for d in program.datatypes)
    lines.append("imports Base" if has_base else "imports Main")
    lines.append("begin")
    by = {d.name: d for d in program.datatypes}
    for group in datatype_groups(program.datatypes):
        ds = [by[n] for n in group if by[n].origin == "user"]
        if ds:
            lines.append("")
            lines.append("datatype " + "\nand ".join(show_datatype(d) for d in ds))
    for comp in analysis.order.components:
        funs = [program.funs[n] for n in comp if program.funs[n].origin == "user"]
        if not funs:
            continue
        lines.append("")
        sigs = []
        for f in funs:
            tn = TypeNames(f.typarams)
            sigs.append(f'{render_name(f.name)} :: "{tn.show(f.type)[1:-1]}"')
        lines.append("fun " + "\nand ".join(sigs) + " where")
        eqs = [eq for f in funs for eq in analysis.equations.get(f.name, [])]
        lines.append(" |\n".join(f'  "{show_equation(eq)}"' for eq in eqs))
        cert = analysis.termination.get(funs[0].name)
        if cert is not None and not hasattr(cert, "measure"):
            lines.append("(* termination not certified *)")
    for vc in analysis.vcs:
        lines.append("")
        label = vc.id.replace(".", "_")
        lines.append(f'lemma {label}: "{vc_statement(vc)}"  {_status(analysis.results.get(vc.id))}')
    for m in analysis.mappings:
        if getattr(m, "status", None) == "axiom":
            lines.append("")
            lines.append(f'axiomatization where {render_name(m.user)}_mapping: '
                         f'"{render_name(m.user)} = {render_name(m.library)}"  (* axiom *)')
    lines.append("")
    lines.append("end")
    return "\n".join(lines) + "\n"


# ---- re-parsing printed equations

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|"
                    r"(?P<op>-->|~=|<=|>=|=>|~:|[-+*<>=&|~%(),.{}]))")


class EquationParseError(Exception):
    pass


@dataclass
class _Tok:
    kind: str
    text: str


def _tokens(s: str) -> list:
    out, i = [], 0
    s = s.rstrip()
    while i < len(s):
        m = _TOKEN.match(s, i)
        if not m or m.end() == i:
            raise EquationParseError(f"bad character at {i}: {s[i:i + 10]!r}")
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind)))
        i = m.end()
    return out


def internal_name(rendered: str) -> str:
    base, _, suffix = rendered.rpartition("_")
    if not base or not suffix.isdigit():
        raise EquationParseError(f"not a hygienic name: {rendered}")
    return f"{base}'{suffix}"


class EquationParser:
    """Reads back ``show_equation`` output into an equation's lhs patterns and rhs term."""

    KEYWORDS = {"if", "then", "else", "let", "in", "case", "of", "ALL", "True", "False", "fst", "snd"}

    def __init__(self, text: str, program):
        self.toks = _tokens(text)
        self.i = 0
        self.program = program

    def peek(self, text=None):
        t = self.toks[self.i] if self.i < len(self.toks) else None
        if text is None or t is None:
            return t
        return t if t.text == text else None

    def take(self, text=None) -> _Tok:
        t = self.peek()
        if t is None or (text is not None and t.text != text):
            raise EquationParseError(f"expected {text!r}, got {t.text if t else 'end'!r}")
        self.i += 1
        return t

    def equation(self):
        fun = internal_name(self.take().text)
        pats = []
        while not self.peek("="):
            pats.append(self.pattern_atom())
        self.take("=")
        rhs = self.expr(0)
        if self.peek() is not None:
            raise EquationParseError(f"trailing input at {self.peek().text!r}")
        return fun, tuple(pats), rhs

    # patterns
    def pattern_atom(self):
        t = self.take()
        if t.kind == "num":
            return E.PLit(int(t.text))
        if t.text in ("True", "False"):
            return E.PLit(t.text == "True")
        if t.text == "_":
            return E.Wild()
        if t.kind == "id":
            n = internal_name(t.text)
            if n in self.program.ctors:
                return E.PCon(n, ())
            return E.PVar(n)
        if t.text == "(":
            if self.peek("_") and self.toks[self.i + 1].text == "~:":
                self.take("_")
                self.take("~:")
                self.take("{")
                vals = [self.signed_int()]
                while self.peek(","):
                    self.take(",")
                    vals.append(self.signed_int())
                self.take("}")
                self.take(")")
                return E.PNotLits(frozenset(vals))
            if self.peek("-"):
                v = self.signed_int()
                self.take(")")
                return E.PLit(v)
            first = self.pattern()
            if self.peek(","):
                items = [first]
                while self.peek(","):
                    self.take(",")
                    items.append(self.pattern())
                self.take(")")
                return E.PTup(tuple(items))
            self.take(")")
            return first
        raise EquationParseError(f"unexpected {t.text!r} in pattern")

    def pattern(self):
        t = self.peek()
        if t is not None and t.kind == "id" and t.text != "_":
            n = internal_name(t.text)
            if n in self.program.ctors and self.program.ctors[n].arity:
                self.take()
                args = [self.pattern_atom() for _ in range(self.program.ctors[n].arity)]
                return E.PCon(n, tuple(args))
        return self.pattern_atom()

    def signed_int(self) -> int:
        neg = bool(self.peek("-")) and self.take("-")
        return -int(self.take().text) if neg else int(self.take().text)

    # terms
    def expr(self, min_prec: int):
        left = self.unary()
        while True:
            t = self.peek()
            if t is None or t.text not in _BY_TEXT:
                return left
            op, p = _BY_TEXT[t.text]
            if p < min_prec:
                return left
            self.take()
            right = self.expr(p if op == "==>" else p + 1)
            left = E.Prim(op, (left, right))

    def unary(self):
        if self.peek("~"):
            self.take()
            return E.Prim("!", (self.atom(),))
        if self.peek("-"):
            self.take()
            return E.Prim("neg", (self.atom(),))
        return self.application()

    def _starts_atom(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind == "num" or t.text == "(":
            return True
        return t.kind == "id" and t.text not in ("then", "else", "in", "of")

    def application(self):
        t = self.peek()
        if t is not None and t.kind == "id" and t.text not in self.KEYWORDS:
            self.take()
            n = internal_name(t.text)
            args = []
            while self._starts_atom():
                args.append(self.atom())
            if n in self.program.funs:
                if args or not self.program.funs[n].params:
                    return E.Call(n, tuple(args))
                return E.FunRef(n)
            if n in self.program.ctors:
                return E.Ctor(n, tuple(args))
            return E.Apply(E.Var(n), tuple(args)) if args else E.Var(n)
        if t is not None and t.text in ("fst", "snd") or (t is not None and t.text.startswith("proj_")):
            self.take()
            idx = {"fst": 1, "snd": 2}.get(t.text) or int(t.text[5:])
            return E.Proj(self.atom(), idx)
        head = self.atom()
        args = []
        while self._starts_atom():
            args.append(self.atom())
        return E.Apply(head, tuple(args)) if args else head

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return E.IntLit(int(t.text))
        if t.text in ("True", "False"):
            return E.BoolLit(t.text == "True")
        if t.kind == "id" and t.text not in self.KEYWORDS:
            n = internal_name(t.text)
            if n in self.program.funs:
                return E.FunRef(n)
            if n in self.program.ctors:
                return E.Ctor(n, ())
            return E.Var(n)
        if t.text == "(":
            return self.paren()
        raise EquationParseError(f"unexpected {t.text!r}")

    def paren(self):
        t = self.peek()
        if t.text == "if":
            self.take()
            c = self.expr(0)
            self.take("then")
            a = self.expr(0)
            self.take("else")
            b = self.expr(0)
            self.take(")")
            return E.If(c, a, b)
        if t.text == "let":
            self.take()
            n = internal_name(self.take().text)
            self.take("=")
            v = self.expr(5)
            self.take("in")
            body = self.expr(0)
            self.take(")")
            return E.Let(n, v, body)
        if t.text == "case":
            self.take()
            s = self.expr(0)
            self.take("of")
            clauses = [self.clause()]
            while self.peek("|"):
                self.take("|")
                clauses.append(self.clause())
            self.take(")")
            return E.Match(s, tuple(clauses))
        if t.text in ("%", "ALL"):
            self.take()
            names = []
            while not self.peek("."):
                names.append(internal_name(self.take().text))
            self.take(".")
            body = self.expr(0)
            self.take(")")
            if t.text == "%":
                return E.Lam(tuple(names), body)
            return E.ForAll(tuple((n, None) for n in names), body)
        if t.text == "-" and self.toks[self.i + 1].kind == "num" and self.toks[self.i + 2].text == ")":
            self.take()
            v = -int(self.take().text)
            self.take(")")
            return E.IntLit(v)
        first = self.expr(0)
        if self.peek(","):
            items = [first]
            while self.peek(","):
                self.take(",")
                items.append(self.expr(0))
            self.take(")")
            return E.Tuple(tuple(items))
        self.take(")")
        return first

    def clause(self):
        p = self.pattern()
        self.take("=>")
        return E.Clause(p, self.expr(3))


def parse_equation(text: str, program):
    """``(fun, lhs patterns, rhs)`` from one printed equation."""
    return EquationParser(text, program).equation()


def round_trip(eq, program) -> bool:
    """The printed equation reads back to the same lhs (unused variables as wildcards) and rhs."""
    fun, lhs, rhs = parse_equation(show_equation(eq), program)
    return fun == eq.fun and lhs == _anon_unused(eq.lhs, eq.rhs) and rhs == eq.rhs
