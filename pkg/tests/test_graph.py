import json

import pytest

from nakajima.cartan import cartan_type, simple_root
from nakajima.graph import (
    GraphError, check_graph_invariants, crystal_isomorphic, export_dot, export_json, generate,
    graph_from_edges, parse_dot, stembridge_check,
)
from nakajima.monomial import CArray, InfinityMonomialCrystal, Monomial, MonomialCrystal, y_lambda
from nakajima.mutation import Mutation, mutate_carray, mutate_monomial

import oracles

FINITE = [
    ("A2", (1, 0)), ("A2", (1, 1)), ("A2", (2, 1)), ("A3", (0, 1, 0)), ("A3", (1, 1, 0)),
    ("A4", (0, 1, 0, 0)), ("B2", (1, 1)), ("B3", (1, 0, 0)), ("B3", (0, 0, 1)), ("C2", (1, 0)),
    ("C3", (0, 1, 0)), ("D4", (0, 1, 0, 0)), ("D4", (1, 0, 0, 1)), ("G2", (1, 0)), ("G2", (0, 1)),
    ("F4", (0, 0, 0, 1)), ("F4", (1, 0, 0, 0)), ("E6", (1, 0, 0, 0, 0, 0)),
]

SIMPLY_LACED = [
    ("A2", (1, 1)), ("A2", (2, 1)), ("A3", (1, 1, 0)), ("A3", (1, 0, 1)), ("A4", (0, 1, 1, 0)),
    ("D4", (0, 1, 0, 0)), ("D4", (1, 0, 1, 0)), ("D5", (0, 0, 0, 1, 0)), ("E6", (1, 0, 0, 0, 0, 0)),
]


def closure(name, lam, c=None):
    C = cartan_type(name)
    M = MonomialCrystal(C, c)
    return C, M, generate(M, [y_lambda(C, lam)], unbounded=True)


@pytest.mark.parametrize("name,lam", FINITE)
def test_sizes_match_weyl_dimension(name, lam):
    C, M, G = closure(name, lam)
    assert not G.truncated
    assert len(G) == oracles.weyl_dimension(C.entries, lam)
    assert check_graph_invariants(G, M, lambda i: simple_root(C, i)) == []


def test_spec_examples():
    C, _, G = closure("A2", (1, 0))
    assert len(G) == 3
    one = generate(InfinityMonomialCrystal(C), [Monomial.one()], depth=0)
    assert one.nodes == [Monomial.one()] and one.edges == []
    assert one.truncated


@pytest.mark.parametrize("name,lam", [("A3", (1, 0, 0)), ("G2", (0, 1)), ("C3~", (1, 0, 0, 0))])
def test_closed_under_e_and_f(name, lam):
    C = cartan_type(name)
    M = MonomialCrystal(C)
    G = generate(M, [y_lambda(C, lam)], depth=4 if name.endswith("~") else None,
                 unbounded=not name.endswith("~"))
    fm, em = G.f_map(), G.e_map()
    for x in G.nodes:
        for i in C.labels:
            y = M.f(x, i)
            if y in G:
                assert fm[(x, i)] == y
            z = M.e(x, i)
            assert em.get((x, i)) == z
            assert G.string_lengths(x, i)[0] == M.epsilon(x, i)
            if not G.truncated:
                assert G.string_lengths(x, i)[1] == M.phi(x, i)


def test_ef_generation_from_a_middle_element():
    C = cartan_type("A2")
    M = MonomialCrystal(C)
    G = generate(M, [y_lambda(C, (1, 1))], unbounded=True)
    mid = G.nodes[4]
    H = generate(M, [mid], unbounded=True, ops="ef")
    assert set(H.nodes) == set(G.nodes)
    assert H.edge_set() == G.edge_set()


def test_generation_is_deterministic():
    C = cartan_type("C3~")
    M = MonomialCrystal(C)
    a = export_dot(generate(M, [Monomial.Y(0, 0)], depth=5))
    b = export_dot(generate(MonomialCrystal(C), [Monomial.Y(0, 0)], depth=5))
    assert a == b


def test_depth_is_required_unless_unbounded():
    C = cartan_type("A2")
    with pytest.raises(GraphError):
        generate(MonomialCrystal(C), [Monomial.Y(1, 0)])


def test_truncation_and_cap():
    C = cartan_type("C3~")
    M = MonomialCrystal(C)
    G = generate(M, [Monomial.Y(0, 0)], depth=3)
    assert G.truncated and not G.cap_exceeded and max(G.depth_of.values()) == 3
    H = generate(M, [Monomial.Y(0, 0)], unbounded=True, cap=50)
    assert len(H) == 50 and H.truncated and H.cap_exceeded
    # a finite crystal that fits is not truncated even with a depth bound
    A = cartan_type("A2")
    K = generate(MonomialCrystal(A), [y_lambda(A, (1, 0))], depth=10)
    assert not K.truncated


def test_dot_round_trip():
    C, _, G = closure("A3", (1, 1, 0))
    labels, edges = parse_dot(export_dot(G))
    assert len(labels) == len(G)
    assert edges == {(str(x), str(i), str(y)) for x, i, y in G.edge_set()}
    single = graph_from_edges((1,), [Monomial.one()], {Monomial.one(): (0,)}, [])
    text = export_dot(single)
    assert parse_dot(text) == ({"n0": "1"}, set())


def test_dot_round_trip_with_latex_labels():
    C, _, G = closure("G2", (1, 0))
    labels, edges = parse_dot(export_dot(G, fmt=lambda x: x.to_latex()))
    assert sorted(labels.values()) == sorted(x.to_latex() for x in G.nodes)
    assert len(edges) == len(G.edges)


def test_json_export():
    C, _, G = closure("A2", (1, 0))
    data = json.loads(export_json(G))
    assert [n["monomial"] for n in data["nodes"]] == [str(x) for x in G.nodes]
    assert data["edges"] == [[s, i, t] for s, i, t in G.edges]
    assert data["truncated"] is False


# -- isomorphism -------------------------------------------------------------------

def test_isomorphic_to_itself():
    _, _, G = closure("B3", (0, 0, 1))
    iso = crystal_isomorphic(G, G)
    assert iso is not None and all(iso[x] == x for x in G.nodes)


@pytest.mark.parametrize("name,lam,m", [("A2", (1, 0), (0, 1)), ("A3", (1, 1, 0), (2, -1, 0)),
                                        ("C2", (1, 1), (0, 3)), ("G2", (0, 1), (1, 0))])
def test_mutated_array_gives_isomorphic_crystal(name, lam, m):
    C = cartan_type(name)
    mut = Mutation.from_seq(C, m)
    c2 = mutate_carray(CArray.standard(C), mut)
    _, _, G1 = closure(name, lam)
    M2 = MonomialCrystal(C, c2)
    G2 = generate(M2, [mutate_monomial(y_lambda(C, lam), mut)], unbounded=True)
    iso = crystal_isomorphic(G1, G2)
    assert iso is not None
    assert all(iso[x] == mutate_monomial(x, mut) for x in G1.nodes)


def test_wrong_labels_are_not_isomorphic():
    C, _, G = closure("A2", (1, 0))
    nodes = list(G.nodes)
    path = graph_from_edges(C.labels, nodes, G.weights,
                            [(nodes[0], 2, nodes[1]), (nodes[1], 1, nodes[2])])
    assert crystal_isomorphic(G, path) is None


def test_different_weights_are_not_isomorphic():
    C, _, G = closure("A3", (1, 0, 0))
    _, _, H = closure("A3", (0, 0, 1))
    assert crystal_isomorphic(G, H) is None
    swap = {1: 3, 2: 2, 3: 1}
    iso = crystal_isomorphic(G, H, label_map=swap, weight_map=lambda w: tuple(reversed(w)))
    assert iso is not None


def test_isomorphism_needs_label_map_for_different_index_sets():
    _, _, G = closure("A2", (1, 0))
    _, _, H = closure("A3", (1, 0, 0))
    with pytest.raises(GraphError):
        crystal_isomorphic(G, H)


def test_disconnected_graphs():
    C = cartan_type("A2")
    M = MonomialCrystal(C)
    seeds = [y_lambda(C, (1, 0)), Monomial.Y(1, 5)]
    G = generate(M, seeds, unbounded=True)
    H = generate(M, list(reversed(seeds)), unbounded=True)
    assert len(G) == 6
    assert crystal_isomorphic(G, H) is not None


# -- Stembridge axioms -----------------------------------------------------------

@pytest.mark.parametrize("name,lam", SIMPLY_LACED)
def test_stembridge_axioms_hold(name, lam):
    C, _, G = closure(name, lam)
    report = stembridge_check(G, C)
    assert report.ok, report.failures[:3]
    assert report.checked > 0


def test_stembridge_detects_a_broken_graph():
    C, _, G = closure("A2", (1, 1))
    edges = sorted(G.edge_set(), key=str)
    broken = graph_from_edges(C.labels, G.nodes, G.weights, edges[1:])
    assert not stembridge_check(broken, C).ok


def test_stembridge_rejects_truncated_and_non_simply_laced():
    C = cartan_type("A2")
    G = generate(MonomialCrystal(C), [y_lambda(C, (1, 1))], depth=1)
    with pytest.raises(GraphError):
        stembridge_check(G, C)
    B, _, H = closure("B2", (1, 0))
    with pytest.raises(GraphError):
        stembridge_check(H, B)


def test_invariant_checker_flags_bad_edges():
    C, M, G = closure("A2", (1, 0))
    x, y, z = G.nodes
    bad = graph_from_edges(C.labels, G.nodes, G.weights, [(x, 2, y), (x, 1, z)])
    problems = check_graph_invariants(bad, M, lambda i: simple_root(C, i))
    assert any("weight drop" in p for p in problems)
