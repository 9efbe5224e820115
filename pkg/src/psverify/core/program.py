from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SourceSpan
from .types import TCon, TFun, TVar, subst_type


@dataclass
class CtorDef:
    name: str
    datatype: str
    fields: list  # list of (field name, Type)

    @property
    def arity(self) -> int:
        return len(self.fields)


@dataclass
class DataTypeDef:
    name: str
    typarams: tuple
    constructors: list  # list of CtorDef
    origin: str = "user"
    span: SourceSpan | None = None

    def applied(self) -> TCon:
        return TCon(self.name, tuple(TVar(t) for t in self.typarams))


@dataclass
class FunDef:
    name: str
    typarams: tuple
    params: list  # list of (name, Type)
    ret: object
    body: object
    pre: object = None
    post: object = None  # Lam with one parameter
    holds: bool = False
    proof: str | None = None
    proof_span: SourceSpan | None = None
    library: str | None = None
    span: SourceSpan | None = None
    origin: str = "user"

    @property
    def param_names(self) -> list[str]:
        return [p for p, _ in self.params]

    @property
    def type(self) -> TFun:
        return TFun(tuple(t for _, t in self.params), self.ret)


@dataclass
class CoreProgram:
    datatypes: list
    functions: list
    name_table: object = None
    var_types: dict = field(default_factory=dict)
    file: str = "<input>"

    def __post_init__(self):
        self.reindex()

    def reindex(self) -> None:
        self.dt = {d.name: d for d in self.datatypes}
        self.ctors = {c.name: c for d in self.datatypes for c in d.constructors}
        self.funs = {f.name: f for f in self.functions}

    def ctor_field_types(self, ctor: str, ty: TCon) -> list:
        """Field types of ``ctor`` when its datatype is instantiated at ``ty``."""
        c = self.ctors[ctor]
        d = self.dt[c.datatype]
        mapping = dict(zip(d.typarams, ty.args)) if isinstance(ty, TCon) else {}
        return [subst_type(t, mapping) for _, t in c.fields]

    def lookup_orig(self, orig: str, kind: str = "function") -> str | None:
        """Internal name of a global by its source text, if present."""
        if self.name_table is None:
            return None
        if kind == "datatype":
            h = self.name_table.types.get(orig)
        elif kind == "base":
            h = self.name_table.base_terms.get(orig)
        else:
            h = self.name_table.terms.get(orig)
        return str(h) if h is not None else None
