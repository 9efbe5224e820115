from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TCon:
    """Datatype application, or the builtins ``Int`` and ``Bool`` (no args)."""
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}[{', '.join(map(str, self.args))}]"


@dataclass(frozen=True)
class TTuple:
    items: tuple

    def __str__(self):
        return "(" + ", ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class TFun:
    params: tuple
    result: object

    def __str__(self):
        ps = ", ".join(map(str, self.params))
        return f"({ps}) => {self.result}"


@dataclass(frozen=True)
class TMeta:
    """Unification variable; only exists during elaboration."""
    id: int

    def __str__(self):
        return f"?{self.id}"


INT = TCon("Int")
BOOL = TCon("Bool")
BUILTIN = frozenset({"Int", "Bool"})


def is_datatype(t) -> bool:
    return isinstance(t, TCon) and t.name not in BUILTIN


def subst_type(t, mapping: dict):
    if isinstance(t, TVar):
        return mapping.get(t.name, t)
    if isinstance(t, TMeta):
        return mapping.get(t, t)
    if isinstance(t, TCon):
        return TCon(t.name, tuple(subst_type(a, mapping) for a in t.args)) if t.args else t
    if isinstance(t, TTuple):
        return TTuple(tuple(subst_type(a, mapping) for a in t.items))
    if isinstance(t, TFun):
        return TFun(tuple(subst_type(a, mapping) for a in t.params), subst_type(t.result, mapping))
    raise TypeError(t)


def type_vars(t, acc=None) -> set:
    acc = set() if acc is None else acc
    if isinstance(t, TVar):
        acc.add(t.name)
    elif isinstance(t, TCon):
        for a in t.args:
            type_vars(a, acc)
    elif isinstance(t, TTuple):
        for a in t.items:
            type_vars(a, acc)
    elif isinstance(t, TFun):
        for a in t.params:
            type_vars(a, acc)
        type_vars(t.result, acc)
    return acc
