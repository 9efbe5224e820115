"""Seeded generators of invalid programs: broken syntax, ill-typed code and false contracts."""
from __future__ import annotations

import random

from psverify.core.evaluate import evaluate
from psverify.deepstack import deep_call
from psverify.errors import InputError
from psverify.session.pipeline import load_program

INT_OPS = ["+", "-", "*"]
CMP_OPS = ["==", "<=", "<", ">=", ">", "!="]
LIST_FUNS = ["size(l)", "size(reverse(l))", "sum(l)", "sum(reverse(l))", "size(append(l, l))", "head0(l)"]
LIST_PRELUDE = """
def size(l: List[BigInt]): BigInt = l match {
  case Nil() => BigInt(0)
  case Cons(_, t) => 1 + size(t)
}
def sum(l: List[BigInt]): BigInt = l match {
  case Nil() => BigInt(0)
  case Cons(h, t) => h + sum(t)
}
def head0(l: List[BigInt]): BigInt = l match {
  case Nil() => BigInt(0)
  case Cons(h, _) => h
}
"""


def _int_expr(rng: random.Random, atoms: list, depth: int) -> str:
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(atoms + [str(rng.randint(-3, 3))])
    op = rng.choice(INT_OPS)
    return f"({_int_expr(rng, atoms, depth - 1)} {op} {_int_expr(rng, atoms, depth - 1)})"


def false_arith_lemma(rng: random.Random, name: str) -> str:
    lhs, rhs = _int_expr(rng, ["x", "y"], 2), _int_expr(rng, ["x", "y"], 2)
    return f"def {name}(x: BigInt, y: BigInt): Boolean = ({lhs} {rng.choice(CMP_OPS)} {rhs}).holds\n"


def false_list_lemma(rng: random.Random, name: str) -> str:
    lhs = rng.choice(LIST_FUNS)
    rhs = _int_expr(rng, [rng.choice(LIST_FUNS), "x"], 1)
    return LIST_PRELUDE + f"def {name}(l: List[BigInt], x: BigInt): Boolean = ({lhs} {rng.choice(CMP_OPS)} {rhs}).holds\n"


def false_postcondition(rng: random.Random, name: str) -> str:
    bound = rng.randint(-2, 4)
    return (LIST_PRELUDE + f"def {name}(l: List[BigInt]): BigInt = (l match {{\n"
            f"  case Nil() => BigInt({rng.randint(-2, 2)})\n"
            f"  case Cons(h, t) => h + {name}(t)\n"
            f"}}) ensuring (_ {rng.choice(['>=', '<=', '>'])} {bound})\n")


def _ints(rng, n):
    return [rng.randint(-4, 4) for _ in range(n)]


def counterexample(source: str, name: str, rng: random.Random, tries: int = 300) -> bool:
    """True iff the evaluator refutes the contract of ``name`` on some random input."""
    from psverify.core.evaluate import CtorVal
    prog = deep_call(load_program, source, "<fuzz>")
    f = prog.funs[prog.lookup_orig(name)]
    nil, cons = prog.lookup_orig("Nil", "base") or prog.lookup_orig("Nil"), prog.lookup_orig("Cons")

    def lst(xs):
        v = CtorVal(nil)
        for x in reversed(xs):
            v = CtorVal(cons, (x, v))
        return v

    for _ in range(tries):
        args = []
        for p, t in f.params:
            args.append(lst(_ints(rng, rng.randint(0, 4))) if str(t).startswith("List") else rng.randint(-4, 4))
        out = evaluate(prog, f.name, args)
        if f.holds and out is False:
            return True
        if f.post is not None:
            from psverify.core.evaluate import eval_expr
            if eval_expr(prog, f.post.body, {f.post.params[0]: out}) is False:
                return True
    return False


def broken_syntax(rng: random.Random, sources: list) -> str:
    src = rng.choice(sources)
    cut = rng.randrange(1, len(src))
    kind = rng.randrange(4)
    if kind == 0:
        return src[:cut]
    if kind == 1:
        return src[:cut] + rng.choice("$#@`?;\\") + src[cut:]
    if kind == 2:
        j = min(len(src), cut + rng.randint(1, 12))
        return src[:cut] + src[j:]
    return src[:cut] + rng.choice([" match ", " => ", " def ", " case ", "(", "}", "{"]) + src[cut:]


def ill_typed(rng: random.Random) -> str:
    return rng.choice([
        "def f(x: BigInt): Boolean = x + 1",
        "def f(x: BigInt): BigInt = if (x) 1 else 2",
        "def f(l: List[BigInt]): BigInt = l match { case Nil() => true  case Cons(h, _) => h }",
        "def f(x: BigInt): BigInt = g(x)",
        "def f[A](x: A): BigInt = x",
        "def f(x: BigInt): BigInt = x ensuring (_ + 1)",
        "sealed abstract class T\ncase class K(f: T => Boolean) extends T",
        f"def f(x: BigInt): BigInt = {rng.randint(0, 9)} + true",
    ])


def invalid_programs(n: int, seed: int, sources: list) -> list[tuple[str, str]]:
    """``n`` programs tagged "input" (must be rejected) or "false" (has a refuted contract)."""
    rng = random.Random(seed)
    out: list[tuple[str, str]] = []
    while len(out) < n:
        k = len(out) % 5
        if k in (0, 1):
            src = broken_syntax(rng, sources) if k == 0 else ill_typed(rng)
            try:
                deep_call(load_program, src, "<fuzz>")
            except InputError:
                out.append(("input", src))
            continue
        gen = [false_arith_lemma, false_list_lemma, false_postcondition][k - 2]
        src = gen(rng, "claim")
        try:
            refuted = counterexample(src, "claim", rng)
        except InputError:
            continue
        if refuted:
            out.append(("false", src))
    return out
