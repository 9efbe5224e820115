"""Lexicographic termination certificates over structural and guarded integer measures."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import expr as E
from .core.types import INT, is_datatype
from .surface.resolve import render_name

STRICT, WEAK, UNKNOWN = "strict", "weak", "unknown"
MAX_COLUMNS = 512


@dataclass(frozen=True)
class Column:
    positions: tuple  # ((function, argument index), ...) one per function of the component
    kind: str  # "size" or "int"

    def label(self) -> str:
        return "+".join(f"{render_name(f)}:{i}" for f, i in self.positions)

    def position(self, fun: str) -> int:
        return dict(self.positions)[fun]


@dataclass
class CallRow:
    caller: str
    equation: int
    callee: str
    args: tuple | None  # None for a function reference passed as a value
    lhs: tuple
    guards: tuple = ()
    span: object = None

    def describe(self) -> str:
        from .core.printer import show
        args = "..." if self.args is None else ", ".join(show(a) for a in self.args)
        return f"{render_name(self.caller)} eq {self.equation} -> {render_name(self.callee)}({args})"


@dataclass
class DecreaseMatrix:
    rows: list
    columns: list
    entries: list  # entries[row][column]
    bounds: list = field(default_factory=list)  # per-column integer lower bound (None for size columns)


@dataclass
class TerminationCert:
    component: tuple
    measure: list  # list of Column
    justification: list = field(default_factory=list)  # per row: (strict column index in measure, weak prefix)
    matrix: DecreaseMatrix | None = None

    @property
    def vacuous(self) -> bool:
        return not self.measure and (self.matrix is None or not self.matrix.rows)


@dataclass
class TerminationFailure:
    component: tuple
    residual: list  # CallRow
    matrix: DecreaseMatrix | None = None

    def message(self) -> str:
        return "no lexicographic order discharges: " + "; ".join(r.describe() for r in self.residual)


@dataclass
class NoOrderFound:
    residual: list  # row indices
    picked: list


# ---- call rows

def _guards_negate(c):
    return ("not", c)


def _collect_rows(e, component: set, guards: tuple, out: list, eq, fun):
    if isinstance(e, E.Call) and e.fun in component:
        out.append(CallRow(fun, eq.index, e.fun, e.args, eq.lhs, guards, e.span))
    elif isinstance(e, E.FunRef) and e.name in component:
        out.append(CallRow(fun, eq.index, e.name, None, eq.lhs, guards))
    if isinstance(e, E.If):
        _collect_rows(e.cond, component, guards, out, eq, fun)
        _collect_rows(e.then, component, guards + (e.cond,), out, eq, fun)
        _collect_rows(e.else_, component, guards + (_guards_negate(e.cond),), out, eq, fun)
        return
    for k in E.children(e):
        _collect_rows(k, component, guards, out, eq, fun)


def call_rows(component: list, equations: dict) -> list[CallRow]:
    comp = set(component)
    rows: list[CallRow] = []
    for f in component:
        for eq in equations[f]:
            _collect_rows(eq.rhs, comp, (), rows, eq, f)
    return rows


# ---- entries

def lower_bound(var: str, guards: tuple) -> int | None:
    """Best syntactic lower bound ``var >= c`` implied by a single guard."""
    best = None
    for g in guards:
        neg = isinstance(g, tuple) and g[0] == "not"
        c = g[1] if neg else g
        if not isinstance(c, E.Prim) or c.op not in ("<", "<=", ">", ">="):
            continue
        a, b = c.args
        op = c.op
        if isinstance(b, E.Var) and b.name == var and isinstance(a, E.IntLit):
            a, b = b, a
            op = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}[op]
        if not (isinstance(a, E.Var) and a.name == var and isinstance(b, E.IntLit)):
            continue
        if neg:
            op = {"<": ">=", "<=": ">", ">": "<=", ">=": "<"}[op]
        bound = {">=": b.value, ">": b.value + 1}.get(op)
        if bound is not None and (best is None or bound > best):
            best = bound
    return best


def _proper_subterms(e):
    for k in E.children(e):
        yield k
        yield from _proper_subterms(k)


def size_entry(arg, pat) -> str:
    pe = E.pattern_to_expr(pat) if not isinstance(pat, E.Wild) else None
    if pe is None:
        return UNKNOWN
    if arg == pe:
        return WEAK
    if any(arg == s for s in _proper_subterms(pe)):
        return STRICT
    return UNKNOWN


def int_entry(arg, pat, guards) -> tuple[str, int | None]:
    if not isinstance(pat, E.PVar):
        return UNKNOWN, None
    v = pat.name
    if arg == E.Var(v):
        return WEAK, None
    if (isinstance(arg, E.Prim) and arg.op == "-" and arg.args[0] == E.Var(v)
            and isinstance(arg.args[1], E.IntLit) and arg.args[1].value >= 1):
        b = lower_bound(v, guards)
        if b is not None:
            return STRICT, b
    return UNKNOWN, None


def _candidate_positions(fun):
    out = []
    for i, (_, t) in enumerate(fun.params):
        if is_datatype(t):
            out.append((i, "size"))
        elif t == INT:
            out.append((i, "int"))
    return out


def candidate_columns(funs: list) -> list[Column]:
    cols = []
    for kind in ("size", "int"):
        per_fun = [[i for i, k in _candidate_positions(f) if k == kind] for f in funs]
        if any(not ps for ps in per_fun):
            continue
        for combo in itertools.product(*per_fun):
            cols.append(Column(tuple((f.name, i) for f, i in zip(funs, combo)), kind))
            if len(cols) >= MAX_COLUMNS:
                return cols
    return cols


def decrease_matrix(component: list, equations: dict) -> DecreaseMatrix:
    """``component`` is a list of FunDefs; ``equations`` maps each name to its equations."""
    names = [f.name for f in component]
    rows = call_rows(names, equations)
    cols = candidate_columns(component)
    entries = []
    bounds: list = [None] * len(cols)
    for r in rows:
        line = []
        for ci, c in enumerate(cols):
            if r.args is None:
                line.append(UNKNOWN)
                continue
            pat = r.lhs[c.position(r.caller)]
            arg = r.args[c.position(r.callee)]
            if c.kind == "size":
                line.append(size_entry(arg, pat))
            else:
                ent, b = int_entry(arg, pat, r.guards)
                if b is not None:
                    bounds[ci] = b if bounds[ci] is None else min(bounds[ci], b)
                line.append(ent)
        entries.append(line)
    return DecreaseMatrix(rows, cols, entries, bounds)


def find_lex_order(matrix: DecreaseMatrix) -> list[int] | NoOrderFound:
    """Greedy lexicographic search; returns picked column indices in order."""
    remaining = list(range(len(matrix.rows)))
    picked: list[int] = []
    while remaining:
        for ci in range(len(matrix.columns)):
            if ci in picked:
                continue
            col = [matrix.entries[r][ci] for r in remaining]
            if UNKNOWN not in col and STRICT in col:
                picked.append(ci)
                remaining = [r for r in remaining if matrix.entries[r][ci] != STRICT]
                break
        else:
            return NoOrderFound(remaining, picked)
    return picked


def certify_termination(component: list, equations: dict):
    """TerminationCert, or TerminationFailure with the undischarged call rows."""
    names = tuple(f.name for f in component)
    matrix = decrease_matrix(component, equations)
    if not matrix.rows:
        return TerminationCert(names, [], [], matrix)
    order = find_lex_order(matrix)
    if isinstance(order, NoOrderFound):
        return TerminationFailure(names, [matrix.rows[r] for r in order.residual], matrix)
    just = []
    for r in range(len(matrix.rows)):
        for k, ci in enumerate(order):
            if matrix.entries[r][ci] == STRICT:
                just.append((k, tuple(range(k))))
                break
    return TerminationCert(names, [matrix.columns[ci] for ci in order], just, matrix)


def validate_certificate(matrix: DecreaseMatrix, cert: TerminationCert) -> bool:
    """Re-check lexicographic descent of every row from the matrix alone."""
    idx = []
    for col in cert.measure:
        if col not in matrix.columns:
            return False
        idx.append(matrix.columns.index(col))
    for r in range(len(matrix.rows)):
        for ci in idx:
            e = matrix.entries[r][ci]
            if e == STRICT:
                break
            if e != WEAK:
                return False
        else:
            return False
    return True


def render_termination(cert) -> str:
    lines = [f"component {{{', '.join(render_name(n) for n in cert.component)}}}"]
    m = cert.matrix
    if m is not None and m.rows:
        lines.append("  columns: " + " | ".join(c.label() for c in m.columns))
        for row, ents in zip(m.rows, m.entries):
            lines.append(f"  {row.describe()}: " + " ".join(ents))
    if isinstance(cert, TerminationFailure):
        lines.append("  FAILED: " + cert.message())
    elif cert.vacuous:
        lines.append("  certified (non-recursive)")
    else:
        lines.append("  certified, measure [" + ", ".join(c.label() for c in cert.measure) + "]")
    return "\n".join(lines)
