"""Surface syntax tree produced by the parser.

Identifier nodes carry the source text in ``name``; after name resolution
``name`` holds the internal hygienic rendering (``base'N``) and ``orig``
keeps the source text.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SourceSpan


# ---- types

@dataclass
class TyName:
    name: str
    args: list = field(default_factory=list)
    span: SourceSpan | None = None
    orig: str | None = None


@dataclass
class TyTuple:
    items: list
    span: SourceSpan | None = None


@dataclass
class TyFun:
    params: list
    result: object
    span: SourceSpan | None = None


# ---- patterns

@dataclass
class PWild:
    span: SourceSpan | None = None


@dataclass
class PName:
    """Bare identifier: a variable binder or a nullary-looking constructor."""
    name: str
    span: SourceSpan | None = None
    orig: str | None = None
    is_ctor: bool = False


@dataclass
class PCtor:
    name: str
    args: list
    span: SourceSpan | None = None
    orig: str | None = None


@dataclass
class PTuple:
    items: list
    span: SourceSpan | None = None


@dataclass
class PLit:
    value: int | bool
    span: SourceSpan | None = None


# ---- expressions

@dataclass
class Name:
    name: str
    span: SourceSpan | None = None
    orig: str | None = None
    kind: str | None = None  # set by resolution: variable, function, constructor


@dataclass
class Lit:
    value: int | bool
    span: SourceSpan | None = None


@dataclass
class App:
    func: object
    args: list
    targs: list = field(default_factory=list)
    span: SourceSpan | None = None


@dataclass
class Method:
    recv: object
    name: str
    args: list | None
    span: SourceSpan | None = None
    orig: str | None = None


@dataclass
class Proj:
    expr: object
    index: int
    span: SourceSpan | None = None


@dataclass
class Lambda:
    params: list  # list of (name, type-or-None); name None means '_'
    body: object
    span: SourceSpan | None = None
    origs: list | None = None


@dataclass
class TupleE:
    items: list
    span: SourceSpan | None = None


@dataclass
class IfE:
    cond: object
    then: object
    else_: object
    span: SourceSpan | None = None


@dataclass
class ValDef:
    name: str | None
    type: object
    value: object
    span: SourceSpan | None = None
    orig: str | None = None


@dataclass
class Block:
    vals: list
    result: object
    span: SourceSpan | None = None
    require: object = None


@dataclass
class Case:
    pattern: object
    body: object
    span: SourceSpan | None = None


@dataclass
class MatchE:
    scrut: object
    cases: list
    span: SourceSpan | None = None


@dataclass
class BinOp:
    op: str
    left: object
    right: object
    span: SourceSpan | None = None


@dataclass
class UnOp:
    op: str
    expr: object
    span: SourceSpan | None = None


# ---- declarations

@dataclass
class SealedClass:
    name: str
    typarams: list
    span: SourceSpan | None = None
    orig: str | None = None
    origin: str = "user"


@dataclass
class CaseClass:
    name: str
    typarams: list
    fields: list  # list of (name, type)
    parent: str
    parent_args: list
    span: SourceSpan | None = None
    orig: str | None = None
    parent_orig: str | None = None
    origin: str = "user"


@dataclass
class Param:
    name: str
    type: object
    span: SourceSpan | None = None
    orig: str | None = None


@dataclass
class Def:
    name: str
    typarams: list
    params: list
    ret_type: object
    body: object
    require: object = None
    ensuring: object = None  # Lambda with one parameter
    holds: bool = False
    proof: str | None = None
    proof_span: SourceSpan | None = None
    library: str | None = None
    span: SourceSpan | None = None
    orig: str | None = None
    origin: str = "user"
    typaram_origs: list | None = None


@dataclass
class SurfaceProgram:
    datatypes: list  # SealedClass
    cases: list  # CaseClass
    functions: list  # Def
    name_table: object = None
    file: str = "<input>"
    decl_order: list = field(default_factory=list)
