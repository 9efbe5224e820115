"""Recursive-descent parser for the surface language."""
from __future__ import annotations

from ..errors import ParseError, SourceSpan
from . import ast as A
from .lexer import Token, tokenize

_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*",),
]


class Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.toks = tokens
        self.pos = 0
        self.file = file
        last = tokens[-1].span if tokens else SourceSpan(file, 1, 1)
        self.eof = Token("eof", "<eof>", SourceSpan(file, last.line, last.column + last.length), True)
        self._placeholders: list[list[A.Name]] = []
        self._ph_counter = 0

    # ---- token helpers

    def peek(self, k: int = 0) -> Token:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else self.eof

    def at(self, kind: str, text: str | None = None, k: int = 0) -> bool:
        return self.peek(k).is_(kind, text)

    def at_op(self, text: str, k: int = 0) -> bool:
        return self.at("op", text, k)

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if not t.is_(kind, text):
            want = text if text is not None else kind
            raise ParseError(f"unexpected {t.text!r}", t.span, frozenset({want}))
        self.pos += 1
        return t

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def error(self, msg: str, expected=()) -> ParseError:
        return ParseError(msg, self.peek().span, frozenset(expected))

    # ---- program

    def program(self) -> A.SurfaceProgram:
        prog = A.SurfaceProgram([], [], [], file=self.file)
        while not self.at("eof"):
            annots = self.annotations()
            t = self.peek()
            if t.is_("kw", "sealed"):
                if annots:
                    raise ParseError("annotations are only allowed on defs", t.span)
                d = self.sealed_class()
                prog.datatypes.append(d)
            elif t.is_("kw", "case"):
                if annots:
                    raise ParseError("annotations are only allowed on defs", t.span)
                d = self.case_class()
                if d.parent is None:
                    # a lone case class is a one-constructor datatype of the same name
                    sealed = A.SealedClass(d.name, list(d.typarams), d.span)
                    prog.datatypes.append(sealed)
                    prog.decl_order.append(sealed)
                    d.parent = d.parent_orig = d.name
                    d.parent_args = [A.TyName(t, [], sp) for t, sp in d.typarams]
                prog.cases.append(d)
            elif t.is_("kw", "def"):
                d = self.def_(annots)
                prog.functions.append(d)
            else:
                raise self.error(f"unexpected {t.text!r}", {"sealed", "case", "def", "@"})
            prog.decl_order.append(d)
            while self.accept("op", ";"):
                pass
        return prog

    def annotations(self) -> dict:
        out: dict = {}
        while self.at_op("@"):
            self.next()
            name_tok = self.expect("id")
            self.expect("op", "(")
            if name_tok.text == "proof":
                if self.at("id", "method"):
                    self.next()
                    self.expect("op", "=")
                s = self.expect("str")
                out["proof"] = (s.text, s.span)
            elif name_tok.text == "library":
                s = self.expect("str")
                out["library"] = s.text
            else:
                raise ParseError(f"unknown annotation @{name_tok.text}", name_tok.span, frozenset({"proof", "library"}))
            self.expect("op", ")")
        return out

    def typarams(self) -> list[tuple[str, SourceSpan]]:
        out = []
        if self.accept("op", "["):
            while True:
                t = self.expect("id")
                out.append((t.text, t.span))
                if not self.accept("op", ","):
                    break
            self.expect("op", "]")
        return out

    def sealed_class(self) -> A.SealedClass:
        self.expect("kw", "sealed")
        self.expect("kw", "abstract")
        self.expect("kw", "class")
        name = self.expect("id")
        tps = self.typarams()
        return A.SealedClass(name.text, tps, name.span)

    def case_class(self) -> A.CaseClass:
        self.expect("kw", "case")
        if self.accept("kw", "object"):
            name = self.expect("id")
            tps, fields = [], []
        else:
            self.expect("kw", "class")
            name = self.expect("id")
            tps = self.typarams()
            self.expect("op", "(")
            fields = []
            if not self.at_op(")"):
                while True:
                    f = self.expect("id")
                    self.expect("op", ":")
                    fields.append((f.text, self.type_(), f.span))
                    if not self.accept("op", ","):
                        break
            self.expect("op", ")")
        if not self.accept("kw", "extends"):
            return A.CaseClass(name.text, tps, fields, None, [], name.span)
        parent = self.expect("id")
        pargs = []
        if self.accept("op", "["):
            pargs.append(self.type_())
            while self.accept("op", ","):
                pargs.append(self.type_())
            self.expect("op", "]")
        return A.CaseClass(name.text, tps, fields, parent.text, pargs, name.span, parent_orig=parent.text)

    def def_(self, annots: dict) -> A.Def:
        self.expect("kw", "def")
        name = self.expect("id")
        tps = self.typarams()
        self.expect("op", "(")
        params = []
        if not self.at_op(")"):
            while True:
                p = self.expect("id")
                self.expect("op", ":")
                params.append(A.Param(p.text, self.type_(), p.span))
                if not self.accept("op", ","):
                    break
        self.expect("op", ")")
        ret = None
        if self.accept("op", ":"):
            ret = self.type_()
        self.expect("op", "=")
        body = self.expr()
        ensuring = None
        if self.accept("kw", "ensuring"):
            ensuring = self._ensuring_arg()
        d = A.Def(name.text, tps, params, ret, body, span=name.span)
        self._extract_contracts(d)
        d.ensuring = ensuring
        if "proof" in annots:
            d.proof, d.proof_span = annots["proof"]
        d.library = annots.get("library")
        return d

    def _ensuring_arg(self) -> A.Lambda:
        t = self.peek()
        if t.is_("op", "("):
            self.next()
            e = self.with_placeholders(self.expr)
            self.expect("op", ")")
        elif t.is_("op", "{"):
            self.next()
            e = self.with_placeholders(lambda: self.block_contents("}"))
            self.expect("op", "}")
        else:
            raise self.error("expected ensuring argument", {"(", "{"})
        if not isinstance(e, A.Lambda) or len(e.params) != 1:
            raise ParseError("ensuring expects a one-argument predicate", t.span)
        return e

    def _extract_contracts(self, d: A.Def) -> None:
        body = d.body
        if isinstance(body, A.Method) and body.name == "holds" and body.args is None \
                and isinstance(body.recv, A.Block) and body.recv.require is not None:
            # { require(p); e }.holds
            d.holds = True
            body = body.recv
        if isinstance(body, A.Block) and body.require is not None:
            d.require = body.require
            body.require = None
            body = body.result if not body.vals else body
        if isinstance(body, A.Method) and body.name == "holds" and body.args is None:
            d.holds = True
            body = body.recv
        elif isinstance(body, A.Block) and isinstance(body.result, A.Method) and body.result.name == "holds" \
                and body.result.args is None:
            d.holds = True
            body.result = body.result.recv
        d.body = body

    # ---- types

    def type_(self):
        t = self.peek()
        if self.at_op("("):
            self.next()
            items = []
            if not self.at_op(")"):
                items.append(self.type_())
                while self.accept("op", ","):
                    items.append(self.type_())
            self.expect("op", ")")
            if self.accept("op", "=>"):
                return A.TyFun(items, self.type_(), t.span)
            if len(items) == 1:
                return items[0]
            return A.TyTuple(items, t.span)
        name = self.expect("id")
        args = []
        if self.accept("op", "["):
            args.append(self.type_())
            while self.accept("op", ","):
                args.append(self.type_())
            self.expect("op", "]")
        ty = A.TyName(name.text, args, name.span)
        if self.accept("op", "=>"):
            return A.TyFun([ty], self.type_(), t.span)
        return ty

    # ---- expressions

    def with_placeholders(self, fn):
        self._placeholders.append([])
        start = self.peek().span
        try:
            e = fn()
        finally:
            phs = self._placeholders.pop()
        if phs:
            return A.Lambda([(p.name, None) for p in phs], e, start, origs=["_"] * len(phs))
        return e

    def _lambda_ahead(self) -> bool:
        if (self.at("id") or self.at_op("_")) and self.at_op("=>", 1):
            return True
        if self.at_op("("):
            depth, k = 0, 0
            while True:
                t = self.peek(k)
                if t.kind == "eof":
                    return False
                if t.is_("op", "(") or t.is_("op", "["):
                    depth += 1
                elif t.is_("op", ")") or t.is_("op", "]"):
                    depth -= 1
                    if depth == 0:
                        return self.at_op("=>", k + 1)
                k += 1
        return False

    def expr(self):
        if self._lambda_ahead():
            return self.lambda_()
        if self.at("kw", "if"):
            t = self.next()
            self.expect("op", "(")
            c = self.expr()
            self.expect("op", ")")
            a = self.expr()
            self.expect("kw", "else")
            b = self.expr()
            return A.IfE(c, a, b, t.span)
        e = self.binary(0)
        while self.at("kw", "match"):
            t = self.next()
            e = self.match_cases(e, t.span)
        return e

    def lambda_(self):
        start = self.peek().span
        params = []
        if self.accept("op", "("):
            if not self.at_op(")"):
                while True:
                    if self.accept("op", "_"):
                        nm = None
                    else:
                        nm = self.expect("id").text
                    ty = self.type_() if self.accept("op", ":") else None
                    params.append((nm, ty))
                    if not self.accept("op", ","):
                        break
            self.expect("op", ")")
        elif self.accept("op", "_"):
            params.append((None, None))
        else:
            params.append((self.expect("id").text, None))
        self.expect("op", "=>")
        body = self.expr()
        return A.Lambda(params, body, start, origs=[p[0] or "_" for p in params])

    def match_cases(self, scrut, span):
        self.expect("op", "{")
        cases = []
        while self.at("kw", "case"):
            ct = self.next()
            pat = self.pattern()
            if self.at("kw", "if"):
                raise ParseError("pattern guards are not supported", self.peek().span)
            self.expect("op", "=>")
            body = self.block_contents("}", stop_at_case=True)
            cases.append(A.Case(pat, body, ct.span))
        if not cases:
            raise self.error("match requires at least one case", {"case"})
        self.expect("op", "}")
        return A.MatchE(scrut, cases, span)

    def binary(self, level: int):
        if level == len(_BINARY_LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while self.peek().kind == "op" and self.peek().text in ops:
            t = self.next()
            right = self.binary(level + 1)
            left = A.BinOp(t.text, left, right, t.span)
        return left

    def unary(self):
        if self.at_op("!") or self.at_op("-"):
            t = self.next()
            e = self.unary()
            if t.text == "-" and isinstance(e, A.Lit) and isinstance(e.value, int) and not isinstance(e.value, bool):
                return A.Lit(-e.value, t.span)
            return A.UnOp(t.text, e, t.span)
        return self.postfix(self.primary())

    def args(self) -> list:
        self.expect("op", "(")
        out = []
        if not self.at_op(")"):
            while True:
                out.append(self.with_placeholders(self.expr))
                if not self.accept("op", ","):
                    break
        self.expect("op", ")")
        return out

    def postfix(self, e):
        while True:
            t = self.peek()
            if t.is_("op", ".") :
                self.next()
                nt = self.peek()
                if nt.kind == "id" and nt.text.startswith("_") and nt.text[1:].isdigit():
                    self.next()
                    e = A.Proj(e, int(nt.text[1:]), nt.span)
                    continue
                name = self.expect("id")
                if self.at_op("(") and not self.peek().nl_before:
                    e = A.Method(e, name.text, self.args(), name.span)
                else:
                    e = A.Method(e, name.text, None, name.span)
            elif t.is_("op", "(") and not t.nl_before:
                e = A.App(e, self.args(), [], t.span)
            else:
                return e

    def primary(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return A.Lit(t.value, t.span)
        if t.is_("kw", "true") or t.is_("kw", "false"):
            self.next()
            return A.Lit(t.text == "true", t.span)
        if t.is_("id", "BigInt") and self.at_op("(", 1):
            self.next()
            self.expect("op", "(")
            neg = self.accept("op", "-")
            v = self.expect("int")
            self.expect("op", ")")
            return A.Lit(-v.value if neg else v.value, t.span)
        if t.kind == "id":
            self.next()
            if self.at_op("[") and not self.peek().nl_before:
                self.next()
                targs = [self.type_()]
                while self.accept("op", ","):
                    targs.append(self.type_())
                self.expect("op", "]")
                return A.App(A.Name(t.text, t.span), self.args(), targs, t.span)
            return A.Name(t.text, t.span)
        if t.is_("op", "_"):
            self.next()
            if not self._placeholders:
                raise ParseError("placeholder '_' outside of an argument position", t.span)
            self._ph_counter += 1
            n = A.Name(f"_ph{self._ph_counter}", t.span, orig="_")
            self._placeholders[-1].append(n)
            return n
        if t.is_("op", "("):
            self.next()
            items = [self.expr()]
            while self.accept("op", ","):
                items.append(self.expr())
            self.expect("op", ")")
            if len(items) == 1:
                return items[0]
            return A.TupleE(items, t.span)
        if t.is_("op", "{"):
            self.next()
            e = self.block_contents("}")
            self.expect("op", "}")
            return e
        if t.is_("kw", "if") or t.is_("kw", "match"):
            return self.expr()
        raise self.error(f"unexpected {t.text!r}", {"expression"})

    def block_contents(self, closer: str, stop_at_case: bool = False):
        start = self.peek().span
        vals = []
        require = None
        first = True
        while True:
            while self.accept("op", ";"):
                pass
            if self.at("kw", "require"):
                rt = self.next()
                if not first or require is not None:
                    raise ParseError("require must be the first statement of a function body", rt.span)
                self.expect("op", "(")
                require = self.expr()
                self.expect("op", ")")
                first = False
                continue
            if self.at("kw", "val"):
                vt = self.next()
                if self.accept("op", "_"):
                    nm = None
                else:
                    nm = self.expect("id").text
                ty = self.type_() if self.accept("op", ":") else None
                self.expect("op", "=")
                vals.append(A.ValDef(nm, ty, self.expr(), vt.span))
                first = False
                continue
            break
        if self.at_op(closer) or (stop_at_case and self.at("kw", "case")):
            raise self.error("block must end with an expression", {"expression"})
        result = self.expr()
        while self.accept("op", ";"):
            pass
        if not (self.at_op(closer) or (stop_at_case and self.at("kw", "case"))):
            raise self.error(f"unexpected {self.peek().text!r}", {closer} | ({"case"} if stop_at_case else set()))
        if not vals and require is None:
            return result
        return A.Block(vals, result, start, require)

    # ---- patterns

    def pattern(self):
        t = self.peek()
        if self.accept("op", "_"):
            return A.PWild(t.span)
        if t.kind == "int":
            self.next()
            return A.PLit(t.value, t.span)
        if self.at_op("-") and self.at("int", k=1):
            self.next()
            v = self.next()
            return A.PLit(-v.value, t.span)
        if t.is_("kw", "true") or t.is_("kw", "false"):
            self.next()
            return A.PLit(t.text == "true", t.span)
        if t.kind == "id":
            self.next()
            if self.at_op("["):
                # type arguments in patterns are ignored
                depth = 0
                while True:
                    x = self.next()
                    if x.is_("op", "["):
                        depth += 1
                    elif x.is_("op", "]"):
                        depth -= 1
                        if depth == 0:
                            break
                    elif x.kind == "eof":
                        raise self.error("unterminated type arguments", {"]"})
            if self.accept("op", "("):
                args = []
                if not self.at_op(")"):
                    while True:
                        args.append(self.pattern())
                        if not self.accept("op", ","):
                            break
                self.expect("op", ")")
                return A.PCtor(t.text, args, t.span)
            return A.PName(t.text, t.span)
        if self.accept("op", "("):
            items = [self.pattern()]
            while self.accept("op", ","):
                items.append(self.pattern())
            self.expect("op", ")")
            return items[0] if len(items) == 1 else A.PTuple(items, t.span)
        raise self.error(f"unexpected {t.text!r} in pattern", {"pattern"})


def parse_program(source: str, file: str = "<input>") -> A.SurfaceProgram:
    """Parse a whole source file into a :class:`SurfaceProgram`."""
    p = Parser(tokenize(source, file), file)
    return p.program()
