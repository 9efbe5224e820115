"""Type inference and translation from the surface tree to the core IR."""
from __future__ import annotations

from ..errors import TypeError_
from ..graphs import tarjan
from ..surface import ast as A
from ..surface.resolve import render_name
from . import expr as E
from .program import CoreProgram, CtorDef, DataTypeDef, FunDef
from .types import BOOL, INT, TCon, TFun, TMeta, TTuple, TVar, subst_type


def show_type(t) -> str:
    if isinstance(t, TVar):
        return render_name(t.name)
    if isinstance(t, TCon):
        n = render_name(t.name)
        return f"{n}[{', '.join(show_type(a) for a in t.args)}]" if t.args else n
    if isinstance(t, TTuple):
        return "(" + ", ".join(show_type(a) for a in t.items) + ")"
    if isinstance(t, TFun):
        return "(" + ", ".join(show_type(a) for a in t.params) + ") => " + show_type(t.result)
    return str(t)


def _mentions(t, name: str) -> bool:
    if isinstance(t, TCon):
        return t.name == name or any(_mentions(a, name) for a in t.args)
    if isinstance(t, TTuple):
        return any(_mentions(a, name) for a in t.items)
    if isinstance(t, TFun):
        return any(_mentions(a, name) for a in t.params) or _mentions(t.result, name)
    return False


class Elaborator:
    def __init__(self, sp: A.SurfaceProgram):
        self.sp = sp
        self.table = sp.name_table
        self.subst: dict = {}
        self.metas = 0
        self.var_types: dict = {}
        self.sigs: dict = {}
        self.datatypes: dict[str, DataTypeDef] = {}
        self.ctors: dict[str, CtorDef] = {}
        nat = self.table.types.get("Nat")
        self.nat = str(nat) if nat else None
        self.nat_ops = {}
        for op, fn in (("+", "plus"), ("*", "times")):
            h = self.table.base_terms.get(fn) or self.table.terms.get(fn)
            if h is not None and h.kind == "function":
                self.nat_ops[op] = str(h)

    # ---- types

    def fresh(self) -> TMeta:
        self.metas += 1
        return TMeta(self.metas)

    def conv_type(self, t):
        if isinstance(t, A.TyName):
            if t.name in ("Int", "Bool") and t.orig in ("BigInt", "Int", "Boolean"):
                return INT if t.name == "Int" else BOOL
            h = self.table.all_names.get(t.name)
            if h is not None and h.kind == "typevar":
                return TVar(t.name)
            d = self.datatypes.get(t.name)
            if d is None:
                raise TypeError_(f"unknown type {t.orig}", t.span)
            if len(t.args) != len(d.typarams):
                raise TypeError_(
                    f"type {t.orig} expects {len(d.typarams)} type arguments, got {len(t.args)}", t.span)
            return TCon(t.name, tuple(self.conv_type(a) for a in t.args))
        if isinstance(t, A.TyTuple):
            return TTuple(tuple(self.conv_type(a) for a in t.items))
        if isinstance(t, A.TyFun):
            return TFun(tuple(self.conv_type(a) for a in t.params), self.conv_type(t.result))
        raise TypeError(t)

    def zonk(self, t, default=False):
        if isinstance(t, TMeta):
            if t in self.subst:
                r = self.zonk(self.subst[t], default)
                self.subst[t] = r
                return r
            return INT if default else t
        if isinstance(t, TCon):
            return TCon(t.name, tuple(self.zonk(a, default) for a in t.args)) if t.args else t
        if isinstance(t, TTuple):
            return TTuple(tuple(self.zonk(a, default) for a in t.items))
        if isinstance(t, TFun):
            return TFun(tuple(self.zonk(a, default) for a in t.params), self.zonk(t.result, default))
        return t

    def occurs(self, m, t) -> bool:
        t = self.zonk(t)
        if t == m:
            return True
        if isinstance(t, TCon):
            return any(self.occurs(m, a) for a in t.args)
        if isinstance(t, TTuple):
            return any(self.occurs(m, a) for a in t.items)
        if isinstance(t, TFun):
            return any(self.occurs(m, a) for a in t.params) or self.occurs(m, t.result)
        return False

    def unify(self, a, b, span) -> None:
        a, b = self.zonk(a), self.zonk(b)
        if a == b:
            return
        if isinstance(a, TMeta):
            if self.occurs(a, b):
                raise TypeError_(f"infinite type: {show_type(a)} occurs in {show_type(b)}", span)
            self.subst[a] = b
            return
        if isinstance(b, TMeta):
            self.unify(b, a, span)
            return
        mismatch = TypeError_(f"type mismatch: {show_type(a)} vs {show_type(b)}", span)
        if isinstance(a, TCon) and isinstance(b, TCon) and a.name == b.name and len(a.args) == len(b.args):
            for x, y in zip(a.args, b.args):
                self.unify(x, y, span)
            return
        if isinstance(a, TTuple) and isinstance(b, TTuple) and len(a.items) == len(b.items):
            for x, y in zip(a.items, b.items):
                self.unify(x, y, span)
            return
        if isinstance(a, TFun) and isinstance(b, TFun) and len(a.params) == len(b.params):
            for x, y in zip(a.params, b.params):
                self.unify(x, y, span)
            self.unify(a.result, b.result, span)
            return
        raise mismatch

    # ---- declarations

    def datatype_decls(self) -> list[DataTypeDef]:
        out = []
        for d in self.sp.datatypes:
            dt = DataTypeDef(d.name, tuple(d.typarams), [], getattr(d, "origin", "user"), d.span)
            self.datatypes[d.name] = dt
            out.append(dt)
        for c in self.sp.cases:
            dt = self.datatypes[c.parent]
            if len(c.parent_args) != len(dt.typarams):
                raise TypeError_(f"case class {c.orig} must extend {c.parent_orig} with all its type parameters",
                                 c.span)
            mapping = {}
            for i, pa in enumerate(c.parent_args):
                if not (isinstance(pa, A.TyName) and pa.name in c.typarams and not pa.args):
                    raise TypeError_(f"case class {c.orig}: parent type arguments must be its own type parameters",
                                     c.span)
                mapping[pa.name] = TVar(dt.typarams[i])
            missing = set(c.typarams) - set(mapping)
            if missing:
                raise TypeError_(f"case class {c.orig}: type parameter not determined by parent", c.span)
            fields = [(fn, subst_type(self.conv_type(ft), mapping)) for fn, ft, _ in c.fields]
            cd = CtorDef(c.name, dt.name, fields)
            dt.constructors.append(cd)
            self.ctors[c.name] = cd
        for dt in out:
            # base constructors first, declaration order otherwise
            dt.constructors.sort(key=lambda cd: any(_mentions(t, dt.name) for _, t in cd.fields))
            if not dt.constructors:
                raise TypeError_(f"sealed class {render_name(dt.name)} has no case classes", dt.span)
        return out

    def instantiate(self, fname: str):
        typarams, ps, ret = self.sigs[fname]
        m = {tp: self.fresh() for tp in typarams}
        return [subst_type(p, m) for p in ps], subst_type(ret, m), m

    def ctor_type(self, cname: str):
        cd = self.ctors[cname]
        dt = self.datatypes[cd.datatype]
        m = {tp: self.fresh() for tp in dt.typarams}
        return [subst_type(t, m) for _, t in cd.fields], TCon(dt.name, tuple(m[tp] for tp in dt.typarams))

    # ---- references for ordering

    def _refs(self, node, acc: set) -> set:
        if isinstance(node, A.Name) and node.kind == "function":
            acc.add(node.name)
        elif isinstance(node, A.Method):
            acc.add(node.name)
        elif isinstance(node, A.BinOp) and node.op in self.nat_ops:
            acc.add(self.nat_ops[node.op])
        if isinstance(node, list):
            for x in node:
                self._refs(x, acc)
        elif hasattr(node, "__dataclass_fields__") and not isinstance(node, (A.TyName, A.TyFun, A.TyTuple)):
            for f in node.__dataclass_fields__:
                if f in ("span", "type", "ret_type"):
                    continue
                v = getattr(node, f)
                if isinstance(v, (list, tuple)):
                    for x in v:
                        self._refs(x, acc)
                elif hasattr(v, "__dataclass_fields__"):
                    self._refs(v, acc)
        elif isinstance(node, tuple):
            for x in node:
                self._refs(x, acc)
        return acc

    def run(self) -> CoreProgram:
        dts = self.datatype_decls()
        defs = {d.name: d for d in self.sp.functions}
        for d in self.sp.functions:
            ps = [self.conv_type(p.type) for p in d.params]
            ret = self.conv_type(d.ret_type) if d.ret_type is not None else None
            self.sigs[d.name] = (tuple(d.typarams), ps, ret)
            for p, t in zip(d.params, ps):
                self.var_types[p.name] = t
        order = [d.name for d in self.sp.functions]
        refs = {n: sorted(self._refs([defs[n].body, defs[n].require, defs[n].ensuring], set()) & set(defs),
                          key=order.index) for n in order}
        core_funs: dict[str, FunDef] = {}
        for comp in tarjan(order, lambda n: refs[n]):
            for n in comp:
                tp, ps, ret = self.sigs[n]
                if ret is None:
                    self.sigs[n] = (tp, ps, self.fresh())
            for n in comp:
                core_funs[n] = self.function(defs[n])
            for n in comp:
                tp, ps, ret = self.sigs[n]
                ret = self.zonk(ret, default=True)
                self.sigs[n] = (tp, ps, ret)
                core_funs[n].ret = ret
            for n in comp:
                core_funs[n] = self.zonk_fun(core_funs[n])
        var_types = {k: self.zonk(v, default=True) for k, v in self.var_types.items()}
        return CoreProgram(dts, [core_funs[n] for n in order], self.table, var_types, self.sp.file)

    def function(self, d: A.Def) -> FunDef:
        tp, ps, ret = self.sigs[d.name]
        pre = self.check(d.require, BOOL) if d.require is not None else None
        body = self.check(d.body, ret)
        post = None
        if d.ensuring is not None:
            post = self.check(d.ensuring, TFun((ret,), BOOL))
        if d.holds:
            self.unify(ret, BOOL, d.span)
        return FunDef(d.name, tuple(d.typarams), [(p.name, t) for p, t in zip(d.params, ps)], ret, body, pre, post,
                      d.holds, d.proof, d.proof_span, d.library, d.span, getattr(d, "origin", "user"))

    def zonk_fun(self, f: FunDef) -> FunDef:
        f.body = self.zonk_expr(f.body)
        if f.pre is not None:
            f.pre = self.zonk_expr(f.pre)
        if f.post is not None:
            f.post = self.zonk_expr(f.post)
        f.ret = self.zonk(f.ret, default=True)
        return f

    def zonk_expr(self, e):
        kids = E.children(e)
        if kids:
            e = E.with_children(e, tuple(self.zonk_expr(k) for k in kids))
        if isinstance(e, E.Lam):
            return E.Lam(e.params, e.body, tuple(self.zonk(t, True) for t in e.param_types))
        if isinstance(e, E.Match):
            return E.Match(e.scrut, e.clauses, self.zonk(e.scrut_type, True), e.span)
        if isinstance(e, E.Let):
            return E.Let(e.name, e.value, e.body, self.zonk(e.type, True))
        return e

    # ---- expressions

    def check(self, e, expected):
        core, t = self.infer(e, expected)
        self.unify(t, expected, getattr(e, "span", None))
        return core

    def call(self, fname: str, args: list, targs: list, span):
        ps, ret, m = self.instantiate(fname)
        if targs:
            typarams = self.sigs[fname][0]
            if len(targs) != len(typarams):
                raise TypeError_(f"wrong number of type arguments for {render_name(fname)}", span)
            for tp, ta in zip(typarams, targs):
                self.unify(m[tp], self.conv_type(ta), span)
        if len(args) != len(ps):
            raise TypeError_(
                f"arity mismatch: {render_name(fname)} expects {len(ps)} arguments, got {len(args)}", span)
        core_args = tuple(self.check(a, self.zonk(p)) for a, p in zip(args, ps))
        return E.Call(fname, core_args, span), ret

    def ctor_app(self, cname: str, args: list, span):
        fts, ty = self.ctor_type(cname)
        if len(args) != len(fts):
            raise TypeError_(
                f"arity mismatch: constructor {render_name(cname)} expects {len(fts)} arguments, got {len(args)}",
                span)
        return E.Ctor(cname, tuple(self.check(a, self.zonk(t)) for a, t in zip(args, fts))), ty

    def infer(self, e, expected=None):
        if isinstance(e, A.Lit):
            if isinstance(e.value, bool):
                return E.BoolLit(e.value), BOOL
            return E.IntLit(e.value), INT
        if isinstance(e, A.Name):
            if e.kind == "variable":
                return E.Var(e.name, e.span), self.var_types[e.name]
            if e.kind == "function":
                ps, ret, _ = self.instantiate(e.name)
                return E.FunRef(e.name), TFun(tuple(ps), ret)
            if e.kind == "constructor":
                return self.ctor_app(e.name, [], e.span)
            raise TypeError_(f"cannot use {e.orig} as a value", e.span)
        if isinstance(e, A.App):
            f = e.func
            if isinstance(f, A.Name) and f.kind == "function":
                return self.call(f.name, e.args, e.targs, e.span)
            if isinstance(f, A.Name) and f.kind == "constructor":
                return self.ctor_app(f.name, e.args, e.span)
            fn, ft = self.infer(f)
            ft = self.zonk(ft)
            if isinstance(ft, TMeta):
                ps = tuple(self.fresh() for _ in e.args)
                r = self.fresh()
                self.unify(ft, TFun(ps, r), e.span)
                ft = TFun(ps, r)
            if not isinstance(ft, TFun):
                raise TypeError_(f"cannot apply a value of type {show_type(ft)}", e.span)
            if len(ft.params) != len(e.args):
                raise TypeError_("arity mismatch in function application", e.span)
            args = tuple(self.check(a, self.zonk(p)) for a, p in zip(e.args, ft.params))
            return E.Apply(fn, args), ft.result
        if isinstance(e, A.Method):
            return self.call(e.name, [e.recv] + (e.args or []), [], e.span)
        if isinstance(e, A.Proj):
            inner, t = self.infer(e.expr)
            t = self.zonk(t)
            if not isinstance(t, TTuple):
                raise TypeError_(f"projection _{e.index} on non-tuple type {show_type(t)}", e.span)
            if not 1 <= e.index <= len(t.items):
                raise TypeError_(f"projection _{e.index} out of range", e.span)
            return E.Proj(inner, e.index), t.items[e.index - 1]
        if isinstance(e, A.Lambda):
            exp = self.zonk(expected) if expected is not None else None
            pts = []
            for i, (name, ty) in enumerate(e.params):
                if ty is not None:
                    t = self.conv_type(ty)
                elif isinstance(exp, TFun) and len(exp.params) == len(e.params):
                    t = exp.params[i]
                else:
                    t = self.fresh()
                self.var_types[name] = t
                pts.append(t)
            rexp = exp.result if isinstance(exp, TFun) and len(exp.params) == len(e.params) else None
            body, bt = self.infer(e.body, rexp)
            return E.Lam(tuple(n for n, _ in e.params), body, tuple(pts)), TFun(tuple(pts), bt)
        if isinstance(e, A.TupleE):
            items, tys = [], []
            exp = self.zonk(expected) if expected is not None else None
            for i, x in enumerate(e.items):
                sub = exp.items[i] if isinstance(exp, TTuple) and len(exp.items) == len(e.items) else None
                c, t = self.infer(x, sub)
                items.append(c)
                tys.append(t)
            return E.Tuple(tuple(items)), TTuple(tuple(tys))
        if isinstance(e, A.IfE):
            c = self.check(e.cond, BOOL)
            a, t = self.infer(e.then, expected)
            b = self.check(e.else_, t)
            return E.If(c, a, b), t
        if isinstance(e, A.Block):
            return self.block(e.vals, e.result, expected)
        if isinstance(e, A.MatchE):
            scrut, st = self.infer(e.scrut)
            clauses = []
            rt = None
            for c in e.cases:
                pat = self.pattern(c.pattern, st)
                if rt is None:
                    body, rt = self.infer(c.body, expected)
                else:
                    body = self.check(c.body, rt)
                clauses.append(E.Clause(pat, body))
            return E.Match(scrut, tuple(clauses), st, e.span), rt
        if isinstance(e, A.BinOp):
            return self.binop(e)
        if isinstance(e, A.UnOp):
            if e.op == "!":
                return E.Prim("!", (self.check(e.expr, BOOL),)), BOOL
            return E.Prim("neg", (self.check(e.expr, INT),)), INT
        raise TypeError(f"unexpected node {e!r}")

    def block(self, vals, result, expected):
        if not vals:
            return self.infer(result, expected)
        v = vals[0]
        if v.type is not None:
            t = self.conv_type(v.type)
            value = self.check(v.value, t)
        else:
            value, t = self.infer(v.value)
        self.var_types[v.name] = t
        body, bt = self.block(vals[1:], result, expected)
        return E.Let(v.name, value, body, t), bt

    def binop(self, e: A.BinOp):
        op = e.op
        if op in ("+", "-", "*"):
            l, lt = self.infer(e.left)
            r, rt = self.infer(e.right)
            lt, rt = self.zonk(lt), self.zonk(rt)
            nat = TCon(self.nat) if self.nat else None
            if nat is not None and (lt == nat or rt == nat):
                if op not in self.nat_ops:
                    raise TypeError_(f"operator {op} is not defined on Nat", e.span)
                self.unify(lt, nat, e.span)
                self.unify(rt, nat, e.span)
                return E.Call(self.nat_ops[op], (l, r), e.span), nat
            self.unify(lt, INT, e.span)
            self.unify(rt, INT, e.span)
            return E.Prim(op, (l, r)), INT
        if op in ("<", "<=", ">", ">="):
            return E.Prim(op, (self.check(e.left, INT), self.check(e.right, INT))), BOOL
        if op in ("==", "!="):
            l, lt = self.infer(e.left)
            r = self.check(e.right, lt)
            return E.Prim(op, (l, r)), BOOL
        if op in ("&&", "||"):
            return E.Prim(op, (self.check(e.left, BOOL), self.check(e.right, BOOL))), BOOL
        raise TypeError_(f"unknown operator {op}", e.span)

    def pattern(self, p, ty):
        if isinstance(p, A.PWild):
            return E.Wild()
        if isinstance(p, A.PLit):
            self.unify(ty, BOOL if isinstance(p.value, bool) else INT, p.span)
            return E.PLit(p.value)
        if isinstance(p, A.PName):
            if p.is_ctor:
                fts, cty = self.ctor_type(p.name)
                self.unify(ty, cty, p.span)
                return E.PCon(p.name, tuple(E.Wild() for _ in fts))
            self.var_types[p.name] = ty
            return E.PVar(p.name)
        if isinstance(p, A.PCtor):
            fts, cty = self.ctor_type(p.name)
            if len(fts) != len(p.args):
                raise TypeError_(
                    f"arity mismatch: constructor pattern {p.orig} expects {len(fts)} subpatterns, "
                    f"got {len(p.args)}", p.span)
            self.unify(ty, cty, p.span)
            return E.PCon(p.name, tuple(self.pattern(a, t) for a, t in zip(p.args, fts)))
        if isinstance(p, A.PTuple):
            ts = tuple(self.fresh() for _ in p.items)
            self.unify(ty, TTuple(ts), p.span)
            return E.PTup(tuple(self.pattern(a, t) for a, t in zip(p.items, ts)))
        raise TypeError(p)


def elaborate(program: A.SurfaceProgram) -> CoreProgram:
    """Infer types and translate a name-resolved surface program into the core IR."""
    return Elaborator(program).run()
