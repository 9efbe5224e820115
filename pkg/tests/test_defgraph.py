from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from psverify.defgraph import CallGraph, call_graph, check_positivity, scc_topo
from psverify.errors import PositivityError

from conftest import CORPUS, FIXTURES, fun, load, load_file


def test_callees_come_first_and_mutual_recursion_is_grouped():
    prog = load_file(FIXTURES / "term.psc")
    order = scc_topo(call_graph(prog))
    even, odd = fun(prog, "even").name, fun(prog, "odd").name
    i = order.index_of(even)
    assert order.index_of(odd) == i and order.recursive[i]
    assert sorted(order.components[i]) == sorted([even, odd])


def test_calls_inside_lambdas_and_contracts_are_edges():
    prog = load("def pos(x: BigInt): Boolean = x > 0\n"
                "def allPos(l: List[BigInt]): List[Boolean] = map(l, (x: BigInt) => pos(x))\n"
                "def g(x: BigInt): BigInt = { require(pos(x)); x }")
    g = call_graph(prog)
    p = fun(prog, "pos").name
    assert (fun(prog, "allPos").name, p) in g.edges
    assert (fun(prog, "g").name, p) in g.edges


def reach(succ, a):
    seen, todo = set(), [a]
    while todo:
        n = todo.pop()
        for m in succ.get(n, ()):
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return seen


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))))
def test_scc_topo_on_random_graphs(case):
    n, edges = case
    nodes = [f"f{i}" for i in range(n)]
    g = CallGraph(nodes, {(f"f{a}", f"f{b}"): [] for a, b in edges})
    order = scc_topo(g)
    assert sorted(x for c in order.components for x in c) == sorted(nodes)
    succ = {}
    for a, b in g.edges:
        succ.setdefault(a, []).append(b)
    for a, b in g.edges:
        ia, ib = order.index_of(a), order.index_of(b)
        assert ib <= ia
        if ia == ib:
            assert a in reach(succ, b)
        else:
            assert a not in reach(succ, b)


def test_negative_occurrence_names_the_field():
    with pytest.raises(PositivityError) as info:
        load((FIXTURES / "positivity.psc").read_text())
    assert info.value.field == "f"


def test_positive_function_fields_are_accepted():
    load("sealed abstract class Tree\ncase class Node(kids: BigInt => Tree) extends Tree\ncase class Leaf() extends Tree")


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_datatypes_are_positive(path):
    check_positivity(load_file(path).datatypes)
