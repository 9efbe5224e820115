"""Loading a program together with the base library and running every phase in component order."""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..core import elaborate
from ..core import expr as E
from ..defgraph import ComponentOrder, call_graph, check_positivity, scc_topo
from ..patcomp import oracle_equivalence, split_equations
from ..prover import Budget, Proved, Unknown, add_function, add_lemma, new_theory, prove
from ..prover.mapping import MappingFailure, MappingTheorem, mapping_goal, register_mapping
from ..prover.sequent import digest
from ..surface import parse_program, resolve_names
from ..surface import ast as A
from ..surface.resolve import render_name, split_internal
from ..termination import TerminationCert, certify_termination
from ..vcgen import VC, generate_vcs

BASE_FILE = "base.psc"
# base lemmas are proved once per process, under a fixed budget independent of user flags
BASE_BUDGET = dict(max_steps=200000, timeout_ms=None)
_BASE_CACHE: dict[str, dict] = {}


def base_source() -> str:
    return (Path(__file__).resolve().parent.parent / "data" / BASE_FILE).read_text()


@dataclass
class Options:
    timeout_ms: int | None = 5000
    max_steps: int = 20000
    fuel: int = 10000
    seed: int = 0
    assume_mappings: bool = False
    oracle_samples: int = 20
    timings: bool = False
    vc_ids: frozenset | None = None
    cancel: object = None  # threading.Event or similar

    def budget(self) -> Budget:
        return Budget(max_steps=self.max_steps, timeout_ms=self.timeout_ms, cancel=self.cancel)


@dataclass
class SolverVerdict:
    """Overall result; by construction there is no ``sat``."""
    overall: str  # "unsat" | "unknown"
    per_vc: dict  # VC id -> {"verdict": "proved" | "unknown", "reason": ...}
    axioms_assumed: list
    timings: dict

    def __post_init__(self):
        if self.overall not in ("unsat", "unknown"):
            raise ValueError(f"invalid overall verdict {self.overall!r}")


@dataclass
class Analysis:
    program: object
    order: ComponentOrder
    equations: dict = field(default_factory=dict)  # function -> [Equation]
    termination: dict = field(default_factory=dict)  # function -> cert or failure
    vcs: list = field(default_factory=list)  # user VCs, in processing order
    results: dict = field(default_factory=dict)  # VC id -> Proved | Unknown
    millis: dict = field(default_factory=dict)
    mappings: list = field(default_factory=list)
    phases: list = field(default_factory=list)  # (phase, subject) events in execution order
    timings: dict = field(default_factory=dict)
    cancelled: bool = False
    verdict: SolverVerdict | None = None
    theory: object = None  # final kernel theory, for replaying traces

    def user_functions(self) -> list:
        return [f for f in self.program.functions if f.origin == "user"]


def _datatype_names(prog: A.SurfaceProgram) -> set:
    return {d.name for d in prog.datatypes} | {c.name for c in prog.cases}


def _mark(prog: A.SurfaceProgram, origin: str) -> None:
    for d in prog.decl_order:
        d.origin = origin


def load_program(source: str, file: str = "<input>", use_base: bool = True):
    """Parse, resolve, elaborate and positivity-check ``source``, merged after the base library.

    The base library is left out when the program declares a datatype or constructor
    of the same name, so self-contained programs keep their own definitions.
    """
    user = parse_program(source, file)
    _mark(user, "user")
    prog = user
    if use_base:
        base = parse_program(base_source(), BASE_FILE)
        _mark(base, "base")
        base_names = _datatype_names(base)
        if not (_datatype_names(user) & base_names):
            prog = A.SurfaceProgram(
                base.datatypes + user.datatypes, base.cases + user.cases, base.functions + user.functions,
                file=file, decl_order=base.decl_order + user.decl_order)
    resolve_names(prog)
    program = elaborate(prog)
    check_positivity(program.datatypes)
    return program


def source_hash(source: str) -> str:
    return hashlib.sha256(source.encode()).hexdigest()


def lemma_name(fun) -> str:
    return split_internal(fun.name)[0]


def _ordered_components(order: ComponentOrder, program) -> list:
    # base components first: the base never calls user code, so this is still a valid order
    origin = {f.name: f.origin for f in program.functions}
    idx = range(len(order.components))
    base = [i for i in idx if origin[order.components[i][0]] == "base"]
    user = [i for i in idx if origin[order.components[i][0]] != "base"]
    return [order.components[i] for i in base + user]


def _summary(result) -> dict:
    if isinstance(result, Proved):
        return {"verdict": "proved"}
    return {"verdict": "unknown", "reason": result.reason}


def solve(program, options: Options | None = None) -> Analysis:
    """Run termination, VC generation and proving over ``program`` in component order."""
    options = options or Options()
    t_start = time.monotonic()
    timings: dict = {}

    def clock(phase, t0):
        timings[phase] = timings.get(phase, 0.0) + (time.monotonic() - t0) * 1000

    t0 = time.monotonic()
    order = scc_topo(call_graph(program))
    clock("defgraph", t0)
    an = Analysis(program, order)
    th = an.theory = new_theory(program)
    base_key = digest([(f.name, f.params, f.body, f.pre, f.proof) for f in program.functions if f.origin == "base"])
    cached = _BASE_CACHE.get(base_key)
    fresh_lemmas: dict = {}

    for comp in _ordered_components(order, program):
        funs = [program.funs[n] for n in comp]
        is_base = funs[0].origin == "base"
        an.phases.append(("component", tuple(comp)))
        t0 = time.monotonic()
        eqs = {f.name: split_equations(f, program) for f in funs}
        an.equations.update(eqs)
        clock("patcomp", t0)
        t0 = time.monotonic()
        cert = certify_termination(funs, eqs)
        clock("termination", t0)
        an.phases.append(("termination", tuple(comp)))
        for f in funs:
            an.termination[f.name] = cert
        terminated = isinstance(cert, TerminationCert)
        if terminated and not is_base and options.oracle_samples > 0:
            t0 = time.monotonic()
            for f in funs:
                v = oracle_equivalence(f, eqs[f.name], program, options.oracle_samples, options.seed,
                                       options.fuel, depth=4)
                if not v.agree:
                    raise AssertionError(f"equation splitting changed the meaning of {render_name(f.name)}: "
                                         f"{v.witness}")
            clock("oracle", t0)
        if terminated:
            for f in funs:
                add_function(th, f, eqs[f.name])
        for f in funs:
            if f.library and not is_base:
                _map(an, th, f, options, terminated)
        t0 = time.monotonic()
        vcs = generate_vcs(program, funs)
        clock("vcgen", t0)
        if is_base:
            _base_lemmas(th, funs, vcs, cached, fresh_lemmas)
            continue
        t0 = time.monotonic()
        for vc in vcs:
            if options.vc_ids is not None and vc.id not in options.vc_ids:
                continue
            an.vcs.append(vc)
            an.phases.append(("prove", vc.id))
            t1 = time.monotonic()
            if an.cancelled:
                res = Unknown("timeout")
            elif not terminated and vc.kind != "exhaustiveness":
                res = Unknown("termination")
            else:
                res = prove(vc, th, options.budget())
                if isinstance(res, Unknown) and res.reason == "cancelled":
                    an.cancelled = True
                    res = Unknown("timeout")
            an.results[vc.id] = res
            an.millis[vc.id] = (time.monotonic() - t1) * 1000
        clock("prover", t0)
    if cached is None:
        _BASE_CACHE[base_key] = fresh_lemmas
    timings["total"] = (time.monotonic() - t_start) * 1000
    an.timings = timings
    an.verdict = verdict_of(an)
    return an


def _map(an: Analysis, th, f, options: Options, terminated: bool) -> None:
    mode = "assume" if options.assume_mappings else "prove"
    vc_id = f"{render_name(f.name)}.mapping.0"
    an.phases.append(("mapping", f.name))
    if mode == "prove" and not terminated:
        m = MappingFailure(f.name, f.library, "termination")
    else:
        m = register_mapping(f, f.library, mode, th, options.budget())
    an.mappings.append(m)
    lib = an.program.lookup_orig(f.library, "base")
    if mode == "prove" and (options.vc_ids is None or vc_id in options.vc_ids):
        goal = mapping_goal(f, an.program.funs[lib]).goal if lib in an.program.funs else E.BoolLit(False)
        vc = VC(vc_id, "mapping", f.name, (), goal, tuple(f.params), f.span)
        an.vcs.append(vc)
        if isinstance(m, MappingTheorem):
            an.results[vc_id] = m.trace
        else:
            an.results[vc_id] = Unknown(m.reason if m.reason in ("termination", "timeout") else "no-progress",
                                        list(m.residual))
        an.millis[vc_id] = None


def _base_lemmas(th, funs, vcs, cached, fresh: dict) -> None:
    for f in funs:
        if not f.holds:
            continue
        name = lemma_name(f)
        if cached is not None:
            if name in cached:
                add_lemma(th, name, f, "proved")
            continue
        mine = [v for v in vcs if v.fun == f.name]
        if all(isinstance(prove(v, th, Budget(**BASE_BUDGET)), Proved) for v in mine):
            if add_lemma(th, name, f, "proved"):
                fresh[name] = True


def verdict_of(an: Analysis) -> SolverVerdict:
    per_vc = {vc.id: _summary(an.results[vc.id]) for vc in an.vcs}
    overall = "unsat" if all(s["verdict"] == "proved" for s in per_vc.values()) else "unknown"
    axioms = [m.id for m in an.mappings if isinstance(m, MappingTheorem) and m.status == "axiom"]
    return SolverVerdict(overall, per_vc, axioms, {k: round(v, 3) for k, v in an.timings.items()})
