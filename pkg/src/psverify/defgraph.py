"""Call graph, component processing order and datatype positivity."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import expr as E
from .core.types import TCon, TFun, TTuple, TVar
from .errors import PositivityError
from .graphs import tarjan
from .surface.resolve import render_name


@dataclass
class CallGraph:
    nodes: list[str]
    edges: dict[tuple[str, str], list] = field(default_factory=dict)  # (caller, callee) -> call-site spans

    def successors(self, n: str) -> list[str]:
        return [b for (a, b) in self.edges if a == n]


@dataclass
class ComponentOrder:
    components: list[list[str]]
    recursive: list[bool]

    def index_of(self, name: str) -> int:
        for i, c in enumerate(self.components):
            if name in c:
                return i
        raise KeyError(name)


def _collect_calls(e, acc: list) -> None:
    if isinstance(e, E.Call):
        acc.append((e.fun, e.span))
    elif isinstance(e, E.FunRef):
        acc.append((e.name, None))
    for k in E.children(e):
        _collect_calls(k, acc)


def call_graph(program) -> CallGraph:
    """Edge (f, g) iff g is called or referenced in f's body or contracts (lambdas included)."""
    nodes = [f.name for f in program.functions]
    known = set(nodes)
    g = CallGraph(nodes)
    for f in program.functions:
        calls: list = []
        for part in (f.pre, f.body, f.post):
            if part is not None:
                _collect_calls(part, calls)
        for callee, span in calls:
            if callee in known:
                g.edges.setdefault((f.name, callee), []).append(span)
    return g


def scc_topo(graph: CallGraph) -> ComponentOrder:
    """Components in processing order: every callee's component comes first."""
    order = {n: i for i, n in enumerate(graph.nodes)}
    succ: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for (a, b) in graph.edges:
        succ[a].append(b)
    for n in succ:
        succ[n].sort(key=order.__getitem__)
    comps = [sorted(c, key=order.__getitem__) for c in tarjan(graph.nodes, lambda n: succ[n])]
    recursive = [len(c) > 1 or (c[0], c[0]) in graph.edges for c in comps]
    return ComponentOrder(comps, recursive)


def render_order(order: ComponentOrder) -> str:
    return "\n".join(", ".join(render_name(n) for n in c) for c in order.components)


# ---- positivity

def _datatype_refs(t, acc: set) -> set:
    if isinstance(t, TCon):
        acc.add(t.name)
        for a in t.args:
            _datatype_refs(a, acc)
    elif isinstance(t, TTuple):
        for a in t.items:
            _datatype_refs(a, acc)
    elif isinstance(t, TFun):
        for a in t.params:
            _datatype_refs(a, acc)
        _datatype_refs(t.result, acc)
    return acc


class _Positivity:
    def __init__(self, datatypes):
        self.dts = {d.name: d for d in datatypes}
        self._param_ok: dict[tuple[str, int], bool] = {}

    def param_positive(self, dt: str, i: int) -> bool:
        """Does type parameter ``i`` of ``dt`` occur only strictly positively in its constructors?"""
        key = (dt, i)
        if key in self._param_ok:
            return self._param_ok[key]
        self._param_ok[key] = True  # coinductive assumption for nested cycles
        d = self.dts[dt]
        tv = d.typarams[i]
        ok = all(self.find_negative(t, {tv}) is None for c in d.constructors for _, t in c.fields)
        self._param_ok[key] = ok
        return ok

    def find_negative(self, t, targets: set, under_arrow: bool = False):
        """Return an offending occurrence of any target (datatype or type variable name), or None."""
        if isinstance(t, TVar):
            return render_name(t.name) if under_arrow and t.name in targets else None
        if isinstance(t, TCon):
            if t.name in targets:
                if under_arrow:
                    return render_name(t.name)
            for i, a in enumerate(t.args):
                if under_arrow:
                    bad = self.find_negative(a, targets, True)
                    if bad:
                        return bad
                    continue
                mentions = self._mentions(a, targets)
                if mentions and t.name in self.dts and not self.param_positive(t.name, i):
                    return f"{render_name(next(iter(sorted(mentions))))} nested in {render_name(t.name)}"
                bad = self.find_negative(a, targets, False)
                if bad:
                    return bad
            return None
        if isinstance(t, TTuple):
            for a in t.items:
                bad = self.find_negative(a, targets, under_arrow)
                if bad:
                    return bad
            return None
        if isinstance(t, TFun):
            for a in t.params:
                bad = self.find_negative(a, targets, True)
                if bad:
                    return bad
            return self.find_negative(t.result, targets, under_arrow)
        return None

    def _mentions(self, t, targets) -> set:
        if isinstance(t, TVar):
            return {t.name} & targets
        return _datatype_refs(t, set()) & targets


def datatype_groups(datatypes) -> list[list[str]]:
    names = [d.name for d in datatypes]
    by = {d.name: d for d in datatypes}
    succ = {n: sorted(set().union(*[_datatype_refs(t, set()) for c in by[n].constructors for _, t in c.fields])
                      & set(names), key=names.index) for n in names}
    return [sorted(c, key=names.index) for c in tarjan(names, lambda n: succ[n])]


def check_positivity(datatypes) -> None:
    """Raise PositivityError on the first negative occurrence of a datatype in its own group."""
    pos = _Positivity(datatypes)
    by = {d.name: d for d in datatypes}
    for group in datatype_groups(datatypes):
        targets = set(group)
        for dn in group:
            for c in by[dn].constructors:
                for fname, ft in c.fields:
                    bad = pos.find_negative(ft, targets)
                    if bad:
                        raise PositivityError(render_name(dn), render_name(c.name), fname, bad, by[dn].span)
