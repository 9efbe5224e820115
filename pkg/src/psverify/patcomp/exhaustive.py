from __future__ import annotations

from dataclasses import dataclass, field

from ..core import expr as E
from .patterns import anonymize, intersect, subtract


@dataclass
class MatchCoverage:
    complete: bool
    missing: list = field(default_factory=list)
    redundant: list = field(default_factory=list)


def check_exhaustive(clauses, scrutinee_type, program) -> MatchCoverage:
    """Coverage of a clause list by successive pattern subtraction.

    ``missing`` holds disjoint witness shapes for the uncovered values;
    ``redundant`` holds indices of clauses no value can reach.
    """
    remaining = [E.Wild()]
    redundant = []
    for i, p in enumerate(clauses):
        if not any(intersect(program, r, p, scrutinee_type) is not None for r in remaining):
            redundant.append(i)
            continue
        nxt = []
        for r in remaining:
            nxt += subtract(program, r, p, scrutinee_type)
        remaining = nxt
    missing = [anonymize(r, set()) for r in remaining]
    return MatchCoverage(not missing, missing, redundant)


@dataclass
class MatchSite:
    function: str
    index: int  # document order within the function
    match: E.Match
    coverage: MatchCoverage
    path_conditions: tuple = ()
    binders: tuple = ()  # (name, type) introduced on the path


def iter_matches(e):
    if isinstance(e, E.Match):
        yield e
    for k in E.children(e):
        yield from iter_matches(k)


def function_coverage(fun, program) -> list[MatchSite]:
    sites = []
    parts = [p for p in (fun.pre, fun.body, fun.post) if p is not None]
    k = 0
    for part in parts:
        for m in iter_matches(part):
            cov = check_exhaustive([c.pattern for c in m.clauses], m.scrut_type, program)
            sites.append(MatchSite(fun.name, k, m, cov))
            k += 1
    return sites
