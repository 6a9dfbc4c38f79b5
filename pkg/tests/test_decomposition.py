from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings

from drdomination.decomposition import (JOIN, LEAF, PRIME, UNION, ParseNode, ParseTree, contract, is_module,
                                        is_prime_graph, itp_number, modular_decomposition, neighborhood_diversity,
                                        structural_params, type_partition, validate_parse_tree)
from drdomination.generators import (NAMED_QUOTIENTS, complete, complete_bipartite, connected_gnp, cycle, path,
                                     random_cograph, substituted)
from drdomination.graph import Graph, graph_power, to_mask

from strategies import graphs, radii


def all_modules(g: Graph) -> list[frozenset]:
    """Every vertex subset that is a module (exhaustive, tiny graphs only)."""
    full = set(range(g.n))
    out = []
    for k in range(1, g.n + 1):
        for sub in combinations(range(g.n), k):
            if is_module(g, set(sub), full):
                out.append(frozenset(sub))
    return out


def strong_modules(g: Graph) -> set[frozenset]:
    mods = all_modules(g)
    return {m for m in mods if all(m <= o or o <= m or not (m & o) for o in mods)}


# --- examples --------------------------------------------------------------

def test_k2_is_join():
    tree = modular_decomposition(complete(2))
    assert tree.root.kind == JOIN
    assert [c.kind for c in tree.root.children] == [LEAF, LEAF]
    assert tree.width == 2


def test_p4_is_prime():
    tree = modular_decomposition(path(4))
    assert tree.root.kind == PRIME
    assert tree.root.quotient == path(4)
    assert tree.width == 4
    # no nontrivial module at all
    assert [m for m in all_modules(path(4)) if 1 < len(m) < 4] == []


def test_k55_join_of_unions():
    g = complete_bipartite(5, 5)
    tree = modular_decomposition(g)
    assert tree.root.kind == JOIN
    assert [c.kind for c in tree.root.children] == [UNION, UNION]
    assert [c.vertices for c in tree.root.children] == [(0, 1, 2, 3, 4), (5, 6, 7, 8, 9)]
    assert tree.width == 2


def test_single_vertex():
    tree = modular_decomposition(Graph(1, (0,)))
    assert tree.root.kind == LEAF and tree.width == 2


def test_empty_graph_rejected():
    with pytest.raises(ValueError):
        modular_decomposition(Graph(0, ()))


# --- validation ------------------------------------------------------------

def test_validate_k55_union_root():
    g = complete_bipartite(5, 5)
    tree = modular_decomposition(g)
    tree.root.kind = UNION
    problems = validate_parse_tree(g, tree)
    assert any("kind mismatch" in p for p in problems)


def test_validate_p4_bad_grouping():
    g = path(4)
    bad = ParseNode(UNION, 0b0011, [ParseNode(LEAF, 1, vertex=0), ParseNode(LEAF, 2, vertex=1)])
    root = ParseNode(PRIME, 0b1111, [bad, ParseNode(LEAF, 4, vertex=2), ParseNode(LEAF, 8, vertex=3)],
                     quotient=path(3))
    problems = validate_parse_tree(g, ParseTree(root, 4))
    assert any("[0, 1] is not a module" in p for p in problems)


def test_validate_missing_leaf():
    g = path(3)
    root = ParseNode(UNION, 0b011, [ParseNode(LEAF, 1, vertex=0), ParseNode(LEAF, 2, vertex=1)])
    assert "leaves do not partition the vertex set" in validate_parse_tree(g, ParseTree(root, 3))


def test_validate_canonicity():
    g = Graph(3, (0, 0, 0))
    inner = ParseNode(UNION, 0b011, [ParseNode(LEAF, 1, vertex=0), ParseNode(LEAF, 2, vertex=1)])
    root = ParseNode(UNION, 0b111, [inner, ParseNode(LEAF, 4, vertex=2)])
    assert any("union child of a union" in p for p in validate_parse_tree(g, ParseTree(root, 3)))


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=10))
def test_tree_is_valid(g):
    assert validate_parse_tree(g, modular_decomposition(g)) == []


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7))
def test_tree_nodes_are_the_strong_modules(g):
    nodes = {frozenset(node.vertices) for node in modular_decomposition(g).nodes()}
    assert nodes == strong_modules(g)


def test_larger_random_graphs_valid():
    rng = random.Random(8)
    for _ in range(20):
        g = connected_gnp(rng.randint(15, 40), rng.uniform(0.1, 0.9), rng, max_tries=100_000)
        assert validate_parse_tree(g, modular_decomposition(g)) == []
    for name, make in NAMED_QUOTIENTS.items():
        g = substituted(make(), [rng.randint(1, 6) for _ in range(make().n)], rng)
        tree = modular_decomposition(g)
        assert validate_parse_tree(g, tree) == []
        assert tree.width <= max(make().n, 2)


def test_json_round_trip():
    g = substituted(cycle(5), [2, 1, 3, 1, 2], random.Random(4))
    tree = modular_decomposition(g)
    back = ParseTree.from_json(tree.to_json(), g.n)
    assert back.root.to_dict() == tree.root.to_dict()
    assert validate_parse_tree(g, back) == []
    assert back.width == tree.width


def test_json_schema_keys():
    d = modular_decomposition(path(4)).root.to_dict()
    assert d["kind"] == "prime"
    assert d["quotient_edges"] == [[0, 1], [1, 2], [2, 3]]
    assert d["children"][0] == {"kind": "leaf", "vertex": 0, "children": []}


def test_primality_check():
    assert is_prime_graph(path(4))
    assert is_prime_graph(cycle(5))
    assert not is_prime_graph(complete(3))
    rng = random.Random(2)
    # above the exhaustive cap the closure-based check must agree on a known non-prime graph
    g = substituted(path(4), [4, 4, 4, 3], rng)
    assert not is_prime_graph(g)


# --- type partition and itp -----------------------------------------------

def test_type_partition_examples():
    k5 = type_partition(complete(5))
    assert [(c.kind, c.vertices) for c in k5] == [("clique", (0, 1, 2, 3, 4))]
    k55 = type_partition(complete_bipartite(5, 5))
    assert [(c.kind, c.vertices) for c in k55] == [("independent", (0, 1, 2, 3, 4)),
                                                   ("independent", (5, 6, 7, 8, 9))]
    assert neighborhood_diversity(path(4)) == 4
    assert all(c.kind == "independent" for c in type_partition(path(4)))


def test_itp_examples():
    res = itp_number(complete_bipartite(5, 5))
    assert res.itp == 1
    assert [h.n for h in res.trace] == [10, 2, 1]
    p4 = itp_number(path(4))
    assert p4.itp == 4 and p4.trace == [path(4)]
    assert itp_number(Graph(1, (0,))).itp == 1


def test_contract():
    h = contract(complete_bipartite(2, 3), [(0, 1), (2, 3, 4)])
    assert h == complete(2)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10))
def test_type_classes_are_twin_modules(g):
    classes = type_partition(g)
    assert sorted(v for c in classes for v in c.vertices) == list(range(g.n))
    for c in classes:
        assert is_module(g, set(c.vertices), set(range(g.n)))
        for u, v in combinations(c.vertices, 2):
            assert g.has_edge(u, v) == (c.kind == "clique")


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10))
def test_itp_modules_partition_and_le_nd(g):
    res = itp_number(g)
    assert sorted(v for m in res.modules for v in m) == list(range(g.n))
    assert res.itp <= neighborhood_diversity(g)
    assert len(type_partition(res.quotient)) == res.itp


def test_itp_of_cographs_is_one():
    rng = random.Random(6)
    for _ in range(30):
        assert itp_number(random_cograph(rng.randint(1, 25), rng)).itp == 1


# --- structural parameters -------------------------------------------------

def test_params_examples():
    assert structural_params(complete_bipartite(5, 5)).as_dict() == {"mw": 2, "nd": 2, "itp": 1}
    assert structural_params(path(4)).as_dict() == {"mw": 4, "nd": 4, "itp": 4}
    assert structural_params(Graph(1, (0,))).as_dict() == {"mw": 2, "nd": 1, "itp": 1}


@settings(max_examples=100, deadline=None)
@given(graphs(min_n=2, max_n=10))
def test_params_chain(g):
    p = structural_params(g)
    assert p.mw <= max(p.itp, 2) and p.itp <= p.nd <= g.n


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10, connected=True), radii)
def test_power_does_not_increase_parameters(g, r):
    gp = graph_power(g, r)
    assert modular_decomposition(gp).width <= modular_decomposition(g).width
    assert neighborhood_diversity(gp) <= neighborhood_diversity(g)
    assert itp_number(gp).itp <= itp_number(g).itp
    everything = set(range(g.n))
    for c in type_partition(g):
        assert is_module(gp, set(c.vertices), everything)


def test_large_substituted_params_fast():
    import time
    g = substituted(path(4), [500] * 4, random.Random(1))
    start = time.perf_counter()
    p = structural_params(g)
    assert p.mw == 4 and p.itp == 4
    assert time.perf_counter() - start < 10
    assert to_mask(range(g.n)) == g.full_mask
