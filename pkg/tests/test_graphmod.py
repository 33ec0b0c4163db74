import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibrae.errors import DomainError
from fibrae.graphmod import (EvolutivePresentation, FinGraph, GraphMorphism,
                             InfinityReport, TwoSidedPresentation,
                             coreflect_finite, cycle_graph, cycle_spectrum,
                             evolutive_graph, functional_graphs_isomorphic,
                             graph_components, graph_product,
                             integers_presentation, is_evolutive,
                             is_graph_fibration, is_graph_opfibration,
                             loop_graph, make_graph, presentations_isomorphic,
                             reflect_bij, reflect_eset,
                             reflect_graph_over_acyclic, reflect_idem,
                             reflect_periodic, two_sided_isomorphic,
                             validate_graph_morphism)

import oracles


def chain_pres():
    return EvolutivePresentation(("c",), {}, {}, ("c",))


def loop_pres():
    return EvolutivePresentation(("z",), {"z": "z"}, {}, ())


ITEM1 = make_graph(("a", "b"), {"e": ("a", "b")})
ITEM2 = make_graph(("a", "b", "c"),
                   {"e1": ("a", "b"), "e2": ("a", "c"),
                    "lb": ("b", "b"), "lc": ("c", "c")})
ITEM3 = make_graph(("a", "b", "c"),
                   {"f": ("a", "c"), "g": ("a", "b"), "h": ("b", "c")})
ITEM4 = make_graph(("a", "b", "c"), {"e1": ("b", "a"), "e2": ("b", "c")})
P1 = make_graph(("x", "y"), {"l": ("x", "x"), "e": ("x", "y")})
P2 = make_graph(("x", "y"), {"l": ("x", "x"), "e": ("x", "y"),
                             "m": ("y", "y")})
P3 = make_graph(("x",), {"l": ("x", "x"), "m": ("x", "x")})


def test_graph_components_examples():
    assert len(graph_components(loop_graph())) == 1
    assert len(graph_components(make_graph(("a", "b"), {}))) == 2
    chain3 = make_graph(("a", "b", "c"), {"e": ("a", "b"), "f": ("b", "c")})
    assert len(graph_components(chain3)) == 1


def test_product_with_loop_is_identity():
    rng = random.Random(0)
    for _ in range(10):
        nodes = [f"n{i}" for i in range(rng.randint(1, 4))]
        edges = {f"e{j}": (rng.choice(nodes), rng.choice(nodes))
                 for j in range(rng.randint(0, 5))}
        G = make_graph(nodes, edges)
        P = graph_product(G, loop_graph())
        assert len(P.nodes) == len(G.nodes)
        assert len(P.edges) == len(G.edges)


def test_cycle_product_law_small():
    assert cycle_spectrum(graph_product(cycle_graph(2), cycle_graph(3))) == {6: 1}
    assert cycle_spectrum(graph_product(cycle_graph(2), cycle_graph(4))) == {4: 2}


def test_cycle_product_law_full():
    for k in range(1, 9):
        for n in range(1, 9):
            spec = cycle_spectrum(graph_product(cycle_graph(k), cycle_graph(n)))
            g = math.gcd(k, n)
            assert spec == {k * n // g: g}


def test_graph_fibration_checks():
    G = loop_graph()
    m = GraphMorphism(G, G, {"*": "*"}, {"l": "l"})
    assert is_graph_opfibration(m) and is_graph_fibration(m)
    # an evolutive set over the loop is an opfibration
    E = evolutive_graph(("p", "q"), {"p": "q", "q": "q"})
    m2 = GraphMorphism(E, G, {v: "*" for v in E.nodes},
                       {e: "l" for e in E.edges})
    assert validate_graph_morphism(m2) == []
    assert is_graph_opfibration(m2)
    assert not is_graph_fibration(m2)  # p has no incoming edge
    # a node with no out-edge breaks the opfibration property
    m3 = GraphMorphism(ITEM1, G, {"a": "*", "b": "*"}, {"e": "l"})
    assert not is_graph_opfibration(m3)


def test_reflect_eset_gallery():
    assert presentations_isomorphic(reflect_eset(ITEM1), chain_pres())
    expected2 = EvolutivePresentation(
        ("s", "t"), {"s": "t", "t": "t"}, {}, ())
    assert presentations_isomorphic(reflect_eset(ITEM2), expected2)
    assert presentations_isomorphic(reflect_eset(ITEM3), expected2)
    assert presentations_isomorphic(reflect_eset(ITEM4), chain_pres())
    for P in (P1, P2, P3):
        assert presentations_isomorphic(reflect_eset(P), loop_pres())


def test_reflect_eset_generator_images_cover_input():
    pres = reflect_eset(ITEM2)
    assert set(pres.generator_image) == set(ITEM2.nodes)
    assert set(pres.generator_image.values()) <= set(pres.elements)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_reflect_eset_stable_under_deeper_windows(seed):
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(rng.randint(1, 4))]
    edges = {f"e{j}": (rng.choice(nodes), rng.choice(nodes))
             for j in range(rng.randint(0, 5))}
    P = make_graph(nodes, edges)
    base = reflect_eset(P)
    deeper = reflect_eset(P, depth_cap=2 ** 14,
                          initial_depth=2 * (len(nodes) + len(edges)) + 5)
    assert presentations_isomorphic(base, deeper)


def test_reflect_idem_component_count():
    # connected P: one more component than nodes that are never codomains
    assert len(reflect_idem(ITEM1).nodes) == 2
    assert len(reflect_idem(loop_graph()).nodes) == 1
    assert cycle_spectrum(reflect_idem(loop_graph())) == {1: 1}
    chain3 = make_graph(("a", "b", "c"), {"e": ("a", "b"), "f": ("b", "c")})
    assert len(reflect_idem(chain3).nodes) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_reflect_idem_counts_on_connected_randoms(seed):
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(rng.randint(1, 4))]
    edges = {f"e{j}": (rng.choice(nodes), rng.choice(nodes))
             for j in range(rng.randint(0, 5))}
    P = make_graph(nodes, edges)
    if len(graph_components(P)) != 1:
        return
    non_codomains = [v for v in P.nodes
                     if all(t != v for (_, t) in P.edges.values())]
    R = reflect_idem(P)
    assert is_evolutive(R)
    assert len(R.nodes) == len(non_codomains) + 1
    succ = {v: R.tgt(R.out_edges[v][0]) for v in R.nodes}
    assert all(succ[succ[v]] == succ[v] for v in R.nodes)


def test_reflect_periodic_law():
    for k in range(1, 9):
        for n in range(1, 9):
            R = reflect_periodic(cycle_graph(k), n)
            assert cycle_spectrum(R) == {math.gcd(k, n): 1}


def test_reflect_periodic_sum_of_cycles():
    # disjoint cycles reflect cycle by cycle
    P = make_graph(
        tuple(f"a{i}" for i in range(2)) + tuple(f"b{i}" for i in range(4)),
        {"ea0": ("a0", "a1"), "ea1": ("a1", "a0"),
         "eb0": ("b0", "b1"), "eb1": ("b1", "b2"),
         "eb2": ("b2", "b3"), "eb3": ("b3", "b0")})
    R = reflect_periodic(P, 6)
    assert cycle_spectrum(R) == {2: 2}


def test_reflect_periodic_loop():
    for n in (1, 2, 5):
        assert cycle_spectrum(reflect_periodic(loop_graph(), n)) == {1: 1}


def test_reflect_bij_gallery():
    Z = integers_presentation()
    r1 = reflect_bij(ITEM1)
    assert isinstance(r1, TwoSidedPresentation)
    assert two_sided_isomorphic(r1, Z)
    r2 = reflect_bij(ITEM2)
    assert isinstance(r2, FinGraph)
    assert cycle_spectrum(r2) == {1: 1}
    r4 = reflect_bij(ITEM4)
    assert two_sided_isomorphic(r4, Z)
    into_two_cycle = make_graph(
        ("a", "b", "c"), {"e": ("a", "b"), "f": ("b", "c"), "g": ("c", "b")})
    r5 = reflect_bij(into_two_cycle)
    assert isinstance(r5, FinGraph)
    assert cycle_spectrum(r5) == {2: 1}
    r6 = reflect_bij(cycle_graph(3))
    assert cycle_spectrum(r6) == {3: 1}


def test_coreflect_gallery():
    void = coreflect_finite(ITEM1, "eset")
    assert isinstance(void, FinGraph) and void.nodes == ()
    four = coreflect_finite(ITEM2, "eset")
    assert isinstance(four, FinGraph) and len(four.nodes) == 4
    assert is_evolutive(four)
    # shape: two loops, each with one extra node mapping in
    assert cycle_spectrum_trees(four) == {(1, 2): 2}
    rep = coreflect_finite(P3, "eset")
    assert isinstance(rep, InfinityReport)
    assert rep.live_out_degree == 2
    rep2 = coreflect_finite(P2, "eset")
    assert isinstance(rep2, InfinityReport)
    one_loop = coreflect_finite(P1, "eset")
    assert isinstance(one_loop, FinGraph) and len(one_loop.nodes) == 1


def cycle_spectrum_trees(G):
    """(cycle length, nodes hanging on it) multiset, for shape checks."""
    from fibrae.graphmod import functional_canonical_form
    spec = {}
    for cyc in functional_canonical_form(G):
        total = len(cyc)
        extra = sum(_tree_size(t) - 1 for t in cyc)
        key = (len(cyc), extra + len(cyc))
        spec[key] = spec.get(key, 0) + 1
    return spec


def _tree_size(t):
    return 1 + sum(_tree_size(k) for k in t[1])


def test_coreflect_idem_examples():
    # morphisms pick an edge into a loop node
    R = coreflect_finite(ITEM2, "idem")
    assert is_evolutive(R)
    # edges into loop nodes: e1 -> lb, e2 -> lc, lb -> lb, lc -> lc
    assert len(R.nodes) == 4
    succ = {v: R.tgt(R.out_edges[v][0]) for v in R.nodes}
    assert all(succ[succ[v]] == succ[v] for v in R.nodes)


def test_coreflect_periodic_counts_closed_walks():
    Z2 = cycle_graph(2)
    R = coreflect_finite(Z2, "periodic:2")
    assert len(R.nodes) == 2
    R3 = coreflect_finite(Z2, "periodic:3")
    assert len(R3.nodes) == 0
    R6 = coreflect_finite(cycle_graph(3), "periodic:6")
    assert len(R6.nodes) == 3


def test_coreflect_unknown_target():
    with pytest.raises(DomainError):
        coreflect_finite(P1, "nonsense")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_adjunction_counts_idem(seed):
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(rng.randint(1, 3))]
    edges = {f"e{j}": (rng.choice(nodes), rng.choice(nodes))
             for j in range(rng.randint(0, 4))}
    P = make_graph(nodes, edges)
    # random idempotent target
    pts = [f"t{i}" for i in range(rng.randint(1, 3))]
    fixed = rng.sample(pts, rng.randint(1, len(pts)))
    succ = {p: p if p in fixed else rng.choice(fixed) for p in pts}
    T = evolutive_graph(pts, succ)
    R = reflect_idem(P)
    assert oracles.count_graph_morphisms(R, T) == \
        oracles.count_graph_morphisms(P, T)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_adjunction_counts_periodic(seed):
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(rng.randint(1, 3))]
    edges = {f"e{j}": (rng.choice(nodes), rng.choice(nodes))
             for j in range(rng.randint(0, 4))}
    P = make_graph(nodes, edges)
    n = rng.randint(1, 4)
    # random n-periodic target: disjoint cycles of length dividing n
    lengths = [d for d in range(1, n + 1) if n % d == 0]
    T_parts = []
    node_count = 0
    for _ in range(rng.randint(1, 2)):
        d = rng.choice(lengths)
        T_parts.append([(f"c{node_count + i}",
                         f"c{node_count + (i + 1) % d}") for i in range(d)])
        node_count += d
    pts = [p for part in T_parts for (p, _) in part]
    succ = {p: q for part in T_parts for (p, q) in part}
    T = evolutive_graph(pts, succ)
    R = reflect_periodic(P, n)
    assert oracles.count_graph_morphisms(R, T) == \
        oracles.count_graph_morphisms(P, T)


def test_reflect_idem_output_is_orthogonal_to_shape():
    # unique diagonal fill-in: morphisms from the idempotent shape biject
    # with nodes via evaluation at the marked node
    rng = random.Random(13)
    for _ in range(20):
        nodes = [f"n{i}" for i in range(rng.randint(1, 3))]
        edges = {f"e{j}": (rng.choice(nodes), rng.choice(nodes))
                 for j in range(rng.randint(0, 4))}
        R = reflect_idem(make_graph(nodes, edges))
        succ = {v: R.tgt(R.out_edges[v][0]) for v in R.nodes}
        # morphisms from E = (g -> w, loop at w): pairs (u, v: loop at tgt u)
        morphisms = []
        for u, (a, b) in R.edges.items():
            for v in R.out_edges[b]:
                if R.tgt(v) == b:
                    morphisms.append((u, v))
        sources = [R.src(u) for (u, v) in morphisms]
        assert sorted(sources) == sorted(R.nodes)


def test_reflect_over_acyclic_base():
    X = make_graph(("x", "y"), {"f": ("x", "y")})
    P = make_graph(("p", "q", "r"), {"u": ("p", "q"), "v": ("p", "r")})
    m = GraphMorphism(P, X, {"p": "x", "q": "y", "r": "y"},
                      {"u": "f", "v": "f"})
    fibers, actions = reflect_graph_over_acyclic(m)
    # over x: one component (p alone with the empty path);
    # over y: q, r, and p pushed along f, with p glued to both
    assert len(fibers["x"]) == 1
    assert len(fibers["y"]) == 1
    assert set(actions["f"]) == set(fibers["x"])


def test_reflect_over_cyclic_base_rejected():
    G = loop_graph()
    m = GraphMorphism(G, G, {"*": "*"}, {"l": "l"})
    with pytest.raises(DomainError):
        reflect_graph_over_acyclic(m)
