"""Human-readable tables, phase dumps and the machine-readable run report."""
from __future__ import annotations

import json

from .. import __version__
from ..core.printer import show
from ..emitter import show_equation, vc_statement
from ..prover.mapping import MappingFailure, MappingTheorem
from ..surface.resolve import render_name
from ..termination import TerminationCert, render_termination
from .pipeline import Analysis, source_hash


def _user_components(an: Analysis) -> list:
    user = {f.name for f in an.user_functions()}
    return [c for c in an.order.components if c[0] in user]


def dump_depgraph(an: Analysis) -> str:
    user = {f.name for f in an.user_functions()}
    comps = _user_components(an)
    lines = ["components (callees first):"]
    for i, c in enumerate(comps):
        rec = an.order.recursive[an.order.index_of(c[0])]
        lines.append(f"  {i}: {', '.join(render_name(n) for n in c)}{'  [recursive]' if rec else ''}")
    from ..defgraph import call_graph
    g = call_graph(an.program)
    edges = sorted((render_name(a), render_name(b)) for a, b in g.edges if a in user)
    lines.append("calls:")
    lines += [f"  {a} -> {b}" for a, b in edges]
    return "\n".join(lines)


def dump_equations(an: Analysis) -> str:
    lines = []
    for c in _user_components(an):
        for n in c:
            eqs = an.equations.get(n, [])
            lines.append(f"{render_name(n)}: {len(eqs)} equation(s)")
            lines += [f"  {show_equation(eq)}" + ("   [order-sensitive]" if eq.order_sensitive else "")
                      for eq in eqs]
    return "\n".join(lines)


def dump_termination(an: Analysis) -> str:
    out = []
    for c in _user_components(an):
        out.append(render_termination(an.termination[c[0]]))
    return "\n".join(out)


def dump_vcs(an: Analysis) -> str:
    lines = []
    for vc in an.vcs:
        lines.append(f"{vc.id} [{vc.kind}]")
        if vc.goal is not None:
            lines.append(f"  {vc_statement(vc)}")
        if vc.hint is not None:
            lines.append(f"  hint: {vc.hint.raw}")
    return "\n".join(lines)


def verdict_table(an: Analysis) -> str:
    rows = [("VC", "kind", "verdict")]
    for vc in an.vcs:
        s = an.verdict.per_vc[vc.id]
        v = s["verdict"] if s["verdict"] == "proved" else f"unknown ({s['reason']})"
        rows.append((vc.id, vc.kind, v))
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    lines = [f"{a:<{w0}}  {b:<{w1}}  {c}" for a, b, c in rows]
    proved = sum(1 for s in an.verdict.per_vc.values() if s["verdict"] == "proved")
    lines.append("")
    lines.append(f"overall: {an.verdict.overall} ({proved}/{len(an.vcs)} proved)")
    for ax in an.verdict.axioms_assumed:
        lines.append(f"assumed axiom: {ax}")
    for m in an.mappings:
        if isinstance(m, MappingFailure):
            lines.append(f"mapping failed: {render_name(m.user)} -> {render_name(m.library)} ({m.reason})")
    return "\n".join(lines)


def phase_summary(an: Analysis) -> dict:
    user = an.user_functions()
    certs = [an.termination[f.name] for f in user]
    summary = {
        "defgraph": {"components": len(_user_components(an)), "functions": len(user)},
        "patcomp": {"equations": sum(len(an.equations.get(f.name, [])) for f in user)},
        "termination": {
            "certified": sum(1 for c in certs if isinstance(c, TerminationCert)),
            "failed": sorted(render_name(f.name) for f, c in zip(user, certs) if not isinstance(c, TerminationCert)),
        },
        "vcgen": {"vcs": len(an.vcs)},
        "prover": {
            "proved": sum(1 for s in an.verdict.per_vc.values() if s["verdict"] == "proved"),
            "unknown": sum(1 for s in an.verdict.per_vc.values() if s["verdict"] != "proved"),
        },
        "mappings": {
            "proved": sum(1 for m in an.mappings if isinstance(m, MappingTheorem) and m.status == "proved"),
            "assumed": sum(1 for m in an.mappings if isinstance(m, MappingTheorem) and m.status == "axiom"),
            "failed": sum(1 for m in an.mappings if isinstance(m, MappingFailure)),
        },
    }
    return summary


def json_report(an: Analysis, source: str, timings: bool = False) -> dict:
    """Run report; byte-stable for identical input and seed unless ``timings`` is set."""
    vcs = []
    for vc in an.vcs:
        s = an.verdict.per_vc[vc.id]
        entry = {"id": vc.id, "kind": vc.kind, "verdict": s["verdict"]}
        if "reason" in s:
            entry["reason"] = s["reason"]
        ms = an.millis.get(vc.id)
        entry["millis"] = round(ms, 3) if timings and ms is not None else None
        vcs.append(entry)
    phases = phase_summary(an)
    if timings:
        for k, v in an.timings.items():
            phases.setdefault(k, {})["millis"] = round(v, 3)
    return {
        "tool_version": __version__,
        "source_hash": source_hash(source),
        "overall": an.verdict.overall,
        "vcs": vcs,
        "axioms": list(an.verdict.axioms_assumed),
        "phases": phases,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def residual_text(result) -> list:
    out = []
    for r in getattr(result, "residual", []) or []:
        if isinstance(r, str):
            out.append(r)
        else:
            out.append(" ==> ".join([show(h) for h in r.hyps] + [show(r.goal)]))
    return out
