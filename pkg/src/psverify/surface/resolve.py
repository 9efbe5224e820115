"""Hygienic renaming: every binder gets a globally unique ``base'N`` name."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NameError_, HintError
from . import ast as A

BUILTIN_TYPES = {"BigInt": "Int", "Int": "Int", "Boolean": "Bool"}


@dataclass(frozen=True)
class HygienicName:
    base: str
    suffix: int
    kind: str  # datatype, constructor, function, variable, typevar

    def __str__(self) -> str:
        return f"{self.base}'{self.suffix}"

    def render(self) -> str:
        return f"{self.base}_{self.suffix}"


def split_internal(name: str) -> tuple[str, int]:
    base, _, suffix = name.rpartition("'")
    return base, int(suffix)


def render_name(internal: str) -> str:
    """``base'N`` -> ``base_N``; names without a suffix are returned unchanged."""
    if "'" not in internal:
        return internal
    base, suffix = split_internal(internal)
    return f"{base}_{suffix}"


@dataclass
class NameTable:
    types: dict[str, HygienicName] = field(default_factory=dict)
    terms: dict[str, HygienicName] = field(default_factory=dict)
    # function internal name -> original binder text -> binders in document order
    binders: dict[str, dict[str, list[HygienicName]]] = field(default_factory=dict)
    all_names: dict[str, HygienicName] = field(default_factory=dict)
    # globals declared by the bundled base library (user functions may shadow them)
    base_terms: dict[str, HygienicName] = field(default_factory=dict)

    def lookup_binder(self, function: str, orig: str) -> HygienicName:
        """Resolve ``<var orig>`` inside ``function``; ambiguity is an error."""
        found = self.binders.get(function, {}).get(orig, [])
        if not found:
            raise HintError(f"unresolved reference <var {orig}>")
        if len(found) > 1:
            raise HintError(f"ambiguous reference <var {orig}>: {len(found)} binders named {orig!r}")
        return found[0]


class Resolver:
    def __init__(self):
        self.counters: dict[str, int] = {}
        self.table = NameTable()
        self.ctor_origs: set[str] = set()
        self._current: str | None = None
        self._ph_base = "x"
        self._origin = "user"

    def fresh(self, base: str, kind: str) -> HygienicName:
        n = self.counters.get(base, 0)
        self.counters[base] = n + 1
        h = HygienicName(base, n, kind)
        self.table.all_names[str(h)] = h
        return h

    # ---- globals

    def declare_globals(self, prog: A.SurfaceProgram) -> None:
        for d in prog.decl_order:
            if isinstance(d, A.SealedClass):
                if d.name in self.table.types:
                    raise NameError_(f"duplicate definition of type {d.name}", d.span)
                d.orig = d.name
                h = self.fresh(d.name, "datatype")
                self.table.types[d.name] = h
                d.name = str(h)
            elif isinstance(d, (A.CaseClass, A.Def)):
                shadows = (isinstance(d, A.Def) and d.origin == "user" and d.name in self.table.base_terms
                           and self.table.base_terms[d.name].kind == "function")
                if d.name in self.table.terms and not shadows:
                    raise NameError_(f"duplicate definition of {d.name}", d.span)
                d.orig = d.name
                kind = "constructor" if isinstance(d, A.CaseClass) else "function"
                h = self.fresh(d.name, kind)
                self.table.terms[d.name] = h
                if d.origin == "base":
                    self.table.base_terms[d.name] = h
                if kind == "constructor":
                    self.ctor_origs.add(d.orig)
                d.name = str(h)

    # ---- types

    def type_(self, t, tscope: dict[str, str]):
        if t is None:
            return None
        if isinstance(t, A.TyName):
            if t.orig is None:
                t.orig = t.name
            if t.orig in tscope:
                t.name = tscope[t.orig]
                if t.args:
                    raise NameError_(f"type variable {t.orig} cannot take arguments", t.span)
            elif t.orig in BUILTIN_TYPES:
                t.name = BUILTIN_TYPES[t.orig]
            elif t.orig in self.table.types:
                t.name = str(self.table.types[t.orig])
            else:
                raise NameError_(f"unresolved type {t.orig}", t.span)
            for a in t.args:
                self.type_(a, tscope)
        elif isinstance(t, A.TyTuple):
            for a in t.items:
                self.type_(a, tscope)
        elif isinstance(t, A.TyFun):
            for a in t.params:
                self.type_(a, tscope)
            self.type_(t.result, tscope)
        return t

    def typarams(self, tps, owner_binders=None) -> tuple[list[str], dict[str, str]]:
        names, scope = [], {}
        for orig, span in tps:
            if orig in scope:
                raise NameError_(f"duplicate type parameter {orig}", span)
            h = self.fresh(orig, "typevar")
            scope[orig] = str(h)
            names.append(str(h))
        return names, scope

    # ---- binders

    def bind(self, orig: str, scope: dict, span=None) -> str:
        h = self.fresh(orig if orig != "_" else self._ph_base, "variable")
        scope[orig] = str(h)
        if orig != "_" and self._current is not None:
            self.table.binders.setdefault(self._current, {}).setdefault(orig, []).append(h)
        return str(h)

    def lookup_term(self, orig: str, scopes: list[dict], span):
        for sc in reversed(scopes):
            if orig in sc:
                return sc[orig], "variable"
        h = self.table.terms.get(orig)
        if self._origin == "base":
            h = self.table.base_terms.get(orig, h)
        if h is None:
            raise NameError_(f"unresolved name {orig}", span)
        return str(h), h.kind

    # ---- declarations

    def resolve(self, prog: A.SurfaceProgram) -> A.SurfaceProgram:
        self.declare_globals(prog)
        sealed_by_orig = {d.orig: d for d in prog.datatypes}
        for d in prog.decl_order:
            if isinstance(d, A.SealedClass):
                d.typarams = self.typarams(d.typarams)[0]
            elif isinstance(d, A.CaseClass):
                names, scope = self.typarams(d.typarams)
                d.typarams = names
                for _, ft, _ in d.fields:
                    self.type_(ft, scope)
                if d.parent not in sealed_by_orig:
                    raise NameError_(f"case class {d.orig} extends unknown sealed class {d.parent}", d.span)
                d.parent_orig = d.parent
                d.parent = sealed_by_orig[d.parent].name
                for a in d.parent_args:
                    self.type_(a, scope)
            else:
                self.function(d)
        prog.name_table = self.table
        return prog

    def function(self, d: A.Def) -> None:
        self._current = d.name
        self._origin = d.origin
        self.table.binders.setdefault(d.name, {})
        d.typaram_origs = [o for o, _ in d.typarams]
        names, tscope = self.typarams(d.typarams)
        d.typarams = names
        scope: dict[str, str] = {}
        for p in d.params:
            if p.name in scope:
                raise NameError_(f"duplicate parameter {p.name}", p.span)
            p.orig = p.name
            p.name = self.bind(p.name, scope)
            self.type_(p.type, tscope)
        self.type_(d.ret_type, tscope)
        scopes = [scope]
        if d.require is not None:
            d.require = self.expr(d.require, scopes, tscope)
        d.body = self.expr(d.body, scopes, tscope)
        if d.ensuring is not None:
            d.ensuring = self.expr(d.ensuring, scopes, tscope)
        self._current = None

    # ---- expressions

    def expr(self, e, scopes: list[dict], tscope):
        if isinstance(e, A.Name):
            e.orig = e.orig or e.name
            if e.orig == "_":
                for sc in reversed(scopes):
                    if e.name in sc:
                        e.name, e.kind = sc[e.name], "variable"
                        return e
                raise NameError_("unbound placeholder", e.span)
            e.name, e.kind = self.lookup_term(e.orig, scopes, e.span)
            return e
        if isinstance(e, A.Lit):
            return e
        if isinstance(e, A.App):
            e.func = self.expr(e.func, scopes, tscope)
            e.args = [self.expr(a, scopes, tscope) for a in e.args]
            e.targs = [self.type_(t, tscope) for t in e.targs]
            return e
        if isinstance(e, A.Method):
            e.recv = self.expr(e.recv, scopes, tscope)
            if e.args is not None:
                e.args = [self.expr(a, scopes, tscope) for a in e.args]
            e.orig = e.name
            if e.name == "holds":
                raise NameError_(".holds is only allowed on a whole function body", e.span)
            h = self.table.terms.get(e.name)
            if self._origin == "base":
                h = self.table.base_terms.get(e.name, h)
            if h is None or h.kind != "function":
                raise NameError_(f"unresolved method {e.name}", e.span)
            e.name = str(h)
            return e
        if isinstance(e, A.Proj):
            e.expr = self.expr(e.expr, scopes, tscope)
            return e
        if isinstance(e, A.Lambda):
            sc: dict[str, str] = {}
            params = []
            for (nm, ty), orig in zip(e.params, e.origs or [p[0] for p in e.params]):
                if nm is None:
                    h = self.fresh("uu", "variable")
                    params.append((str(h), self.type_(ty, tscope)))
                    continue
                key = nm
                if orig == "_":
                    # placeholder: bound under its private key, not visible to <var _>
                    h = self.fresh(self._ph_base, "variable")
                    sc[key] = str(h)
                    params.append((str(h), self.type_(ty, tscope)))
                    continue
                if key in sc:
                    raise NameError_(f"duplicate lambda parameter {key}", e.span)
                params.append((self.bind(key, sc), self.type_(ty, tscope)))
            e.params = params
            e.body = self.expr(e.body, scopes + [sc], tscope)
            return e
        if isinstance(e, A.TupleE):
            e.items = [self.expr(a, scopes, tscope) for a in e.items]
            return e
        if isinstance(e, A.IfE):
            e.cond = self.expr(e.cond, scopes, tscope)
            e.then = self.expr(e.then, scopes, tscope)
            e.else_ = self.expr(e.else_, scopes, tscope)
            return e
        if isinstance(e, A.Block):
            if e.require is not None:
                raise NameError_("require must be the first statement of a function body", e.span)
            sc: dict[str, str] = {}
            inner = scopes + [sc]
            for v in e.vals:
                v.value = self.expr(v.value, inner, tscope)
                self.type_(v.type, tscope)
                v.orig = v.name
                if v.name is None:
                    v.name = str(self.fresh("uu", "variable"))
                else:
                    # a fresh scope per val keeps shadowing well-defined
                    sc2: dict[str, str] = {}
                    v.name = self.bind(v.name, sc2)
                    inner = inner + [sc2]
            e.result = self.expr(e.result, inner, tscope)
            return e
        if isinstance(e, A.MatchE):
            e.scrut = self.expr(e.scrut, scopes, tscope)
            for c in e.cases:
                sc: dict[str, str] = {}
                c.pattern = self.pattern(c.pattern, sc)
                c.body = self.expr(c.body, scopes + [sc], tscope)
            return e
        if isinstance(e, A.BinOp):
            e.left = self.expr(e.left, scopes, tscope)
            e.right = self.expr(e.right, scopes, tscope)
            return e
        if isinstance(e, A.UnOp):
            e.expr = self.expr(e.expr, scopes, tscope)
            return e
        raise TypeError(f"unexpected node {e!r}")

    def pattern(self, p, sc: dict):
        if isinstance(p, (A.PWild, A.PLit)):
            return p
        if isinstance(p, A.PName):
            p.orig = p.name
            if p.name in self.ctor_origs:
                p.is_ctor = True
                p.name = str(self.table.terms[p.name])
                return p
            if p.name in sc:
                raise NameError_(f"variable {p.name} bound twice in pattern", p.span)
            p.name = self.bind(p.name, sc)
            return p
        if isinstance(p, A.PCtor):
            p.orig = p.name
            h = self.table.terms.get(p.name)
            if h is None or h.kind != "constructor":
                raise NameError_(f"unknown constructor {p.name}", p.span)
            p.name = str(h)
            p.args = [self.pattern(a, sc) for a in p.args]
            return p
        if isinstance(p, A.PTuple):
            p.items = [self.pattern(a, sc) for a in p.items]
            return p
        raise TypeError(f"unexpected pattern {p!r}")


def resolve_names(program: A.SurfaceProgram) -> A.SurfaceProgram:
    """Rename every identifier hygienically (in place) and populate the name table."""
    return Resolver().resolve(program)
