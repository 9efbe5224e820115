"""Linear integer arithmetic by Fourier-Motzkin elimination with checkable certificates.

Every atom is read as a constraint ``p <= 0`` over integer polynomials (strict
comparisons are tightened by one).  A certificate is a list of non-negative
rational multipliers over those constraints whose sum has no variables and a
positive constant.
"""
from __future__ import annotations

from fractions import Fraction

from ..core import expr as E
from .arith import _add, int_typed, poly

MAX_CONSTRAINTS = 4000
MAX_DISEQ = 3


def _le(a, b):
    return _add(poly(a), poly(b), -1)  # a - b <= 0


def _lt(a, b):
    p = _le(a, b)
    return _add(p, {(): 1})  # a - b + 1 <= 0


def atom_constraints(atom, types, program) -> list | None:
    """Constraints implied by a Bool atom; ``None`` if not a linear fact."""
    neg = False
    while isinstance(atom, E.Prim) and atom.op == "!":
        neg = not neg
        atom = atom.args[0]
    if not isinstance(atom, E.Prim) or atom.op not in ("<", "<=", ">", ">=", "==", "!="):
        return None
    a, b = atom.args
    op = atom.op
    if op in ("==", "!=") and not (int_typed(a, types, program) or int_typed(b, types, program)):
        return None
    if neg:
        op = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}[op]
    if op == "<=":
        return [_le(a, b)]
    if op == "<":
        return [_lt(a, b)]
    if op == ">=":
        return [_le(b, a)]
    if op == ">":
        return [_lt(b, a)]
    if op == "==":
        return [_le(a, b), _le(b, a)]
    return None  # disequality is not convex


def negated_goal_alternatives(goal, types, program) -> list | None:
    """Constraint sets whose disjunction is the negation of ``goal``."""
    if goal == E.FALSE:
        return [[]]
    g = goal
    neg = False
    while isinstance(g, E.Prim) and g.op == "!":
        neg = not neg
        g = g.args[0]
    if isinstance(g, E.Prim) and g.op in ("==", "!="):
        a, b = g.args
        if not (int_typed(a, types, program) or int_typed(b, types, program)):
            return None
        is_eq = (g.op == "==") != neg
        if is_eq:
            return [[_lt(a, b)], [_lt(b, a)]]
        return [[_le(a, b), _le(b, a)]]
    cs = atom_constraints(E.Prim("!", (goal,)), types, program)
    return None if cs is None else [cs]


def hypothesis_constraints(hyps, types, program) -> list:
    """[(label, poly)] with labels ("hyp", i, k)."""
    out = []
    for i, h in enumerate(hyps):
        cs = atom_constraints(h, types, program)
        for k, c in enumerate(cs or ()):
            out.append((("hyp", i, k), c))
    return out


def refute(constraints: list) -> dict | None:
    """Fourier-Motzkin over rationals; returns label -> multiplier on success."""
    rows = []
    for label, p in constraints:
        rows.append(({m: Fraction(c) for m, c in p.items()}, {label: Fraction(1)}))
    while True:
        for p, comb in rows:
            c = _const(p)
            if c is not None and c > 0:
                return comb
        variables = sorted({m for p, _ in rows for m in p if m}, key=repr)
        if not variables:
            return None
        best = None
        for v in variables:
            pos = sum(1 for p, _ in rows if p.get(v, 0) > 0)
            neg = sum(1 for p, _ in rows if p.get(v, 0) < 0)
            score = pos * neg - pos - neg
            if best is None or score < best[0]:
                best = (score, v)
        v = best[1]
        keep = [(p, c) for p, c in rows if p.get(v, 0) == 0]
        pos = [(p, c) for p, c in rows if p.get(v, 0) > 0]
        neg = [(p, c) for p, c in rows if p.get(v, 0) < 0]
        for pp, pc in pos:
            for np_, nc in neg:
                a, b = pp[v], -np_[v]
                new = _lin(pp, b, np_, a)
                comb = _lin(pc, b, nc, a)
                keep.append((new, comb))
        if len(keep) > MAX_CONSTRAINTS:
            return None
        rows = keep


def _lin(p, a, q, b):
    out = {}
    for m, c in p.items():
        out[m] = out.get(m, 0) + a * c
    for m, c in q.items():
        out[m] = out.get(m, 0) + b * c
    return {m: c for m, c in out.items() if c != 0}


def _const(p):
    if any(m for m in p):
        return None
    return p.get((), Fraction(0))


def check_certificate(labelled: dict, cert) -> bool:
    """``labelled`` maps labels to polys; ``cert`` is ((label, multiplier), ...)."""
    total: dict = {}
    for label, mult in cert:
        mult = Fraction(mult)
        if mult < 0 or label not in labelled:
            return False
        total = _lin(total, 1, {m: Fraction(c) for m, c in labelled[label].items()}, mult)
    c = _const(total)
    return c is not None and c > 0


def disequalities(hyps, types, program) -> list:
    """(hyp index, a, b) for usable Int disequality hypotheses, at most MAX_DISEQ of them."""
    out = []
    for i, h in enumerate(hyps):
        neg = False
        while isinstance(h, E.Prim) and h.op == "!":
            neg = not neg
            h = h.args[0]
        if isinstance(h, E.Prim) and h.op in ("==", "!=") and (h.op == "!=") != neg:
            a, b = h.args
            if int_typed(a, types, program) or int_typed(b, types, program):
                out.append((i, a, b))
    return out[:MAX_DISEQ]


def alternatives(seq, program, split: bool) -> list | None:
    """Extra labelled constraints per case; the cases jointly cover the negated goal.

    With ``split``, every disequality ``a != b`` among the hypotheses is also split
    into ``a < b`` or ``a > b``.
    """
    types = seq.types()
    alts = negated_goal_alternatives(seq.goal, types, program)
    if alts is None:
        return None
    cases = [{("goal", j): p for j, p in enumerate(alt)} for alt in alts]
    if split:
        for i, a, b in disequalities(seq.hyps, types, program):
            cases = [c | {("neq", i): side} for c in cases for side in (_lt(a, b), _lt(b, a))]
    return cases


def labelled_constraints(seq, case: dict, program) -> dict:
    out = dict(hypothesis_constraints(seq.hyps, seq.types(), program))
    out.update(case)
    return out


def _certify(seq, program, split: bool):
    cases = alternatives(seq, program, split)
    if cases is None:
        return None
    hyps = hypothesis_constraints(seq.hyps, seq.types(), program)
    if not hyps and all(not c for c in cases):
        return None
    certs = []
    for case in cases:
        comb = refute(hyps + list(case.items()))
        if comb is None:
            return None
        certs.append(tuple(sorted(((lab, str(m)) for lab, m in comb.items() if m != 0), key=repr)))
    return tuple(certs)


def find_certificate(seq, program):
    """Tuple of per-case certificates, or None. Disequalities are split only when needed."""
    certs = _certify(seq, program, False)
    if certs is None and disequalities(seq.hyps, seq.types(), program):
        certs = _certify(seq, program, True)
    return certs


def check(seq, certs, program) -> bool:
    """Re-verify certificates; the number of certificates tells whether disequalities were split."""
    for split in (False, True):
        cases = alternatives(seq, program, split)
        if cases is None:
            return False
        if len(cases) != len(certs):
            continue
        return all(check_certificate(labelled_constraints(seq, c, program), cert) for c, cert in zip(cases, certs))
    return False
