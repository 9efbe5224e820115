"""Readable Scala-like rendering of core terms, used in dumps and reports."""
from __future__ import annotations

from . import expr as E
from ..surface.resolve import render_name

_PREC = {"==>": 1, "||": 2, "&&": 3, "==": 4, "!=": 4, "<": 5, "<=": 5, ">": 5, ">=": 5,
         "+": 6, "-": 6, "*": 7}


def _paren(s: str, inner: int, outer: int) -> str:
    return f"({s})" if inner < outer else s


def show(e, prec: int = 0) -> str:
    from ..patcomp.patterns import show_pattern
    if isinstance(e, E.Var):
        return render_name(e.name)
    if isinstance(e, E.IntLit):
        return str(e.value) if e.value >= 0 or prec == 0 else f"({e.value})"
    if isinstance(e, E.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, E.Ctor):
        if not e.args:
            return render_name(e.name)
        return f"{render_name(e.name)}({', '.join(show(a) for a in e.args)})"
    if isinstance(e, E.Call):
        return f"{render_name(e.fun)}({', '.join(show(a) for a in e.args)})"
    if isinstance(e, E.FunRef):
        return render_name(e.name)
    if isinstance(e, E.Apply):
        return f"{show(e.fn, 9)}({', '.join(show(a) for a in e.args)})"
    if isinstance(e, E.Lam):
        ps = ", ".join(render_name(p) for p in e.params)
        return _paren(f"({ps}) => {show(e.body)}", 0, prec)
    if isinstance(e, E.Tuple):
        return "(" + ", ".join(show(a) for a in e.items) + ")"
    if isinstance(e, E.Proj):
        return f"{show(e.expr, 9)}._{e.index}"
    if isinstance(e, E.If):
        return _paren(f"if ({show(e.cond)}) {show(e.then)} else {show(e.else_)}", 0, prec)
    if isinstance(e, E.Let):
        return _paren(f"{{ val {render_name(e.name)} = {show(e.value)}; {show(e.body)} }}", 9, prec)
    if isinstance(e, E.Match):
        cs = " ".join(f"case {show_pattern(c.pattern)} => {show(c.body)}" for c in e.clauses)
        return _paren(f"{show(e.scrut, 9)} match {{ {cs} }}", 0, prec)
    if isinstance(e, E.ForAll):
        vs = ", ".join(render_name(n) for n, _ in e.vars)
        return _paren(f"forall ({vs}). {show(e.body)}", 0, prec)
    if isinstance(e, E.Prim):
        if e.op == "!":
            return "!" + show(e.args[0], 9)
        if e.op == "neg":
            return "-" + show(e.args[0], 9)
        p = _PREC[e.op]
        a, b = e.args
        # all binary operators are printed left-associative except implication
        lp, rp = (p + 1, p) if e.op == "==>" else (p, p + 1)
        return _paren(f"{show(a, lp)} {e.op} {show(b, rp)}", p, prec)
    return repr(e)
