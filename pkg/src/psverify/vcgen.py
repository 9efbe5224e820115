"""Verification conditions from contracts and matches, plus proof-hint parsing."""
from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .core import expr as E
from .core.subst import fresh_name, substitute
from .errors import HintError, SourceSpan
from .patcomp.exhaustive import check_exhaustive
from .patcomp.patterns import field_types
from .surface.resolve import render_name

KINDS = ("postcondition", "holds", "exhaustiveness", "precondition_at_call")


@dataclass(frozen=True)
class HintStep:
    method: str  # induct, induct_rule, simp, auto, clarsimp
    arg: str | None = None

    def __str__(self) -> str:
        if self.method == "induct":
            return f"induct {render_name(self.arg)}"
        if self.method == "induct_rule":
            return f"induct rule: {self.arg}"
        return self.method


@dataclass(frozen=True)
class ProofHint:
    steps: tuple
    raw: str


@dataclass
class VC:
    id: str
    kind: str
    fun: str
    hypotheses: tuple
    goal: object
    fixed: tuple  # ((name, Type), ...) universally quantified variables
    origin: SourceSpan | None = None
    hint: ProofHint | None = None
    callee: str | None = None  # precondition VCs only

    @property
    def formula(self):
        return E.implies(self.hypotheses, self.goal)


# ---- method language

_TOKEN = re.compile(r'\s*(?:(?P<str>"[^"]*")|(?P<id>[A-Za-z_][A-Za-z0-9_.\']*)|(?P<punct>[(),:]))')
_VAR_REF = re.compile(r"^<var\s+([A-Za-z_][A-Za-z0-9_]*)>$")


def _hint_tokens(text: str, err):
    out = []
    i = 0
    while i < len(text):
        if text[i:].strip() == "":
            break
        m = _TOKEN.match(text, i)
        if not m:
            err(f"unexpected character {text[i:].lstrip()[:1]!r}", len(text[i:]) - len(text[i:].lstrip()) + i)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        i = m.end()
    return out


def parse_hint(text: str, fun: str, name_table, span: SourceSpan | None = None) -> ProofHint:
    """Parse a method expression such as ``(clarsimp, induct rule: r, auto)``."""

    def err(msg: str, pos: int):
        where = None
        if span is not None:
            quote = 3 if span.length >= len(text) + 6 else 1
            where = SourceSpan(span.file, span.line, span.column + quote + pos)
        raise HintError(f"proof hint: {msg} at offset {pos}", where)

    toks = _hint_tokens(text, err)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("eof", "", len(text))

    def take(kind=None, value=None):
        nonlocal pos
        t = peek()
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value or kind
            err(f"expected {want}, found {t[1] or 'end of input'!r}", t[2])
        pos += 1
        return t

    def method() -> HintStep:
        t = take("id")
        if t[1] in ("simp", "auto", "clarsimp"):
            return HintStep(t[1])
        if t[1] != "induct":
            err(f"unknown method {t[1]!r}", t[2])
        nxt = peek()
        if nxt[0] == "id" and nxt[1] == "rule":
            take()
            take("punct", ":")
            r = take("id")
            return HintStep("induct_rule", r[1])
        if nxt[0] == "str":
            take()
            m = _VAR_REF.match(nxt[1][1:-1].strip())
            if not m:
                err("expected \"<var name>\"", nxt[2])
            orig = m.group(1)
        elif nxt[0] == "id":
            take()
            orig = nxt[1]
        else:
            err("expected induction variable or 'rule:'", nxt[2])
        try:
            h = name_table.lookup_binder(fun, orig)
        except HintError as e:
            raise HintError(str(e), span) from None
        return HintStep("induct", str(h))

    steps = []
    if peek()[1] == "(":
        take()
        steps.append(method())
        while peek()[1] == ",":
            take()
            steps.append(method())
        take("punct", ")")
    else:
        steps.append(method())
    if pos != len(toks):
        err(f"unexpected {peek()[1]!r}", peek()[2])
    return ProofHint(tuple(steps), text)


def attach_hints(vc: VC, annotation: str | None, name_table, span=None) -> VC:
    if not annotation:
        return vc
    return replace(vc, hint=parse_hint(annotation, vc.fun, name_table, span))


# ---- generation

def _pattern_eq(scrut, pattern, env: dict, program, ty, avoid: set):
    """Equality hypothesis ``scrut == pattern`` with wildcards named; records binder types."""

    def name(p, t):
        if isinstance(p, E.Wild):
            n = fresh_name("uu'0", avoid)
            avoid.add(n)
            env[n] = t
            return E.PVar(n)
        if isinstance(p, E.PVar):
            env[p.name] = t
            return p
        if isinstance(p, (E.PCon, E.PTup)):
            subs = p.args if isinstance(p, E.PCon) else p.items
            new = tuple(name(a, ft) for a, ft in zip(subs, field_types(program, p, t)))
            return E.PCon(p.name, new) if isinstance(p, E.PCon) else E.PTup(new)
        return p

    named = name(pattern, ty)
    if isinstance(named, E.PVar):
        return None, named
    return E.Prim("==", (scrut, E.pattern_to_expr(named))), named


class _Collector:
    def __init__(self, fun, program):
        self.fun = fun
        self.program = program
        self.avoid = set(program.var_types) | set(fun.param_names)
        self.calls: list = []  # (call, hyps, env)
        self.matches: list = []  # (match, hyps, env)

    def walk(self, e, hyps: tuple, env: dict):
        if isinstance(e, E.Call):
            for a in e.args:
                self.walk(a, hyps, env)
            self.calls.append((e, hyps, dict(env)))
            return
        if isinstance(e, E.If):
            self.walk(e.cond, hyps, env)
            self.walk(e.then, hyps + (e.cond,), env)
            self.walk(e.else_, hyps + (E.Prim("!", (e.cond,)),), env)
            return
        if isinstance(e, E.Prim) and e.op in ("&&", "==>"):
            self.walk(e.args[0], hyps, env)
            self.walk(e.args[1], hyps + (e.args[0],), env)
            return
        if isinstance(e, E.Prim) and e.op == "||":
            self.walk(e.args[0], hyps, env)
            self.walk(e.args[1], hyps + (E.Prim("!", (e.args[0],)),), env)
            return
        if isinstance(e, E.Let):
            self.walk(e.value, hyps, env)
            env2 = dict(env)
            env2[e.name] = e.type
            self.walk(e.body, hyps + (E.Prim("==", (E.Var(e.name), e.value)),), env2)
            return
        if isinstance(e, E.Lam):
            env2 = dict(env)
            for p, t in zip(e.params, e.param_types):
                env2[p] = t
            self.walk(e.body, hyps, env2)
            return
        if isinstance(e, E.Match):
            self.walk(e.scrut, hyps, env)
            self.matches.append((e, hyps, dict(env)))
            for i, c in enumerate(e.clauses):
                env2 = dict(env)
                eq, named = _pattern_eq(e.scrut, c.pattern, env2, self.program, e.scrut_type, self.avoid)
                body = c.body
                # first-match semantics: earlier clauses did not match
                h = hyps + tuple(E.Prim("!", (coverage_predicate(e.scrut, _anon(prev.pattern)),))
                                 for prev in e.clauses[:i])
                if eq is not None:
                    # wildcard names introduced here must not clash with clause binders
                    h = h + (eq,)
                elif isinstance(named, E.PVar) and isinstance(c.pattern, E.PVar):
                    h = h + (E.Prim("==", (E.Var(named.name), e.scrut)),)
                self.walk(body, h, env2)
            return
        if isinstance(e, E.ForAll):
            env2 = dict(env)
            env2.update(dict(e.vars))
            self.walk(e.body, hyps, env2)
            return
        for k in E.children(e):
            self.walk(k, hyps, env)


def _fixed(fun, program, env: dict, exprs) -> tuple:
    free: list = []
    seen = set()
    for x in exprs:
        for v in _ordered_free(x):
            if v not in seen:
                seen.add(v)
                free.append(v)
    params = dict(fun.params)
    out = [(p, t) for p, t in fun.params if p in seen]
    for v in free:
        if v in params:
            continue
        t = env.get(v) or program.var_types.get(v)
        out.append((v, t))
    return tuple(out)


def _ordered_free(e, bound=frozenset(), acc=None):
    acc = [] if acc is None else acc
    if isinstance(e, E.Var):
        if e.name not in bound and e.name not in acc:
            acc.append(e.name)
        return acc
    kids = E.children(e)
    binds = E.binders_of(e)
    for i, k in enumerate(kids):
        b = bound | binds[i] if i < len(binds) else bound
        _ordered_free(k, b, acc)
    return acc


def coverage_predicate(scrut, pattern):
    """Bool term true iff ``scrut`` matches ``pattern``."""
    if isinstance(pattern, (E.Wild, E.PVar)):
        return E.TRUE
    return E.Match(scrut, (E.Clause(pattern, E.TRUE), E.Clause(E.Wild(), E.FALSE)))


def _anon(p):
    if isinstance(p, E.PVar):
        return E.Wild()
    if isinstance(p, E.PCon):
        return E.PCon(p.name, tuple(_anon(a) for a in p.args))
    if isinstance(p, E.PTup):
        return E.PTup(tuple(_anon(a) for a in p.items))
    return p


def function_vcs(fun, program) -> list[VC]:
    rname = render_name(fun.name)
    out: list[VC] = []
    counters = {k: 0 for k in KINDS}
    pre_h = (fun.pre,) if fun.pre is not None else ()
    param_env = dict(fun.params)

    def add(kind, hyps, goal, env, origin, callee=None):
        idx = counters[kind]
        counters[kind] += 1
        fixed = _fixed(fun, program, env, list(hyps) + [goal])
        out.append(VC(f"{rname}.{kind}.{idx}", kind, fun.name, tuple(hyps), goal, fixed, origin, None, callee))

    call = E.Call(fun.name, tuple(E.Var(p) for p in fun.param_names), fun.span)
    if fun.post is not None:
        goal = substitute(fun.post.body, {fun.post.params[0]: call})
        add("postcondition", pre_h, goal, param_env, fun.span)
    if fun.holds:
        add("holds", pre_h, fun.body, param_env, fun.span)

    col = _Collector(fun, program)
    if fun.pre is not None:
        col.walk(fun.pre, (), dict(param_env))
    col.walk(fun.body, pre_h, dict(param_env))
    if fun.post is not None:
        res = fun.post.params[0]
        env = dict(param_env)
        env[res] = fun.ret
        col.walk(fun.post.body, pre_h + (E.Prim("==", (E.Var(res), call)),), env)

    for m, hyps, env in col.matches:
        cov = check_exhaustive([c.pattern for c in m.clauses], m.scrut_type, program)
        if cov.complete:
            continue
        goal = E.FALSE
        for c in reversed(m.clauses):
            pred = coverage_predicate(m.scrut, _anon(c.pattern))
            goal = pred if goal == E.FALSE else E.Prim("||", (pred, goal))
        add("exhaustiveness", hyps, goal, env, m.span)

    for c, hyps, env in col.calls:
        callee = program.funs.get(c.fun)
        if callee is None or callee.pre is None:
            continue
        goal = substitute(callee.pre, dict(zip(callee.param_names, c.args)))
        add("precondition_at_call", hyps, goal, env, c.span, callee=c.fun)
    return out


def generate_vcs(program, functions=None) -> list[VC]:
    """VCs for every function (or the given subset), in definition order."""
    out = []
    for f in program.functions if functions is None else functions:
        vcs = function_vcs(f, program)
        if f.proof:
            vcs = [attach_hints(v, f.proof, program.name_table, f.proof_span) for v in vcs]
        out += vcs
    return out
