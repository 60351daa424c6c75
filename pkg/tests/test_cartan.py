import pytest

from nakajima.cartan import (
    CartanError, CartanMatrix, FoldingSpec, aligned_constraints, cartan_type, format_weight,
    identity_folding, pairing, parse_weight, phi_tilde, phi_tilde_inverse, positive_roots,
    positive_roots_type_A, simple_root, solve_gamma, symmetrizer, validate_cartan,
    validate_folding,
)
from nakajima.virtual import FOLDINGS, folding

import oracles

ALL_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "D5", "E6", "E7", "F4", "G2",
             "A2~", "C3~", "D5~"]


def test_validate_cartan_examples():
    assert validate_cartan(CartanMatrix(((2, -1), (-1, 2)))) == []
    assert validate_cartan(CartanMatrix(((2, -2), (-1, 2)))) == []
    problems = validate_cartan(CartanMatrix(((2, -1), (0, 2))))
    assert problems and "zero-pattern" in problems[0]


def test_validate_cartan_rejects_bad_input():
    with pytest.raises(CartanError):
        CartanMatrix(((2, -1, 0), (-1, 2)))
    assert validate_cartan(CartanMatrix(((3, -1), (-1, 2))))
    assert validate_cartan(CartanMatrix(((2, 1), (1, 2))))
    # cycle with inconsistent ratios is not symmetrizable
    bad = CartanMatrix(((2, -1, -1), (-2, 2, -1), (-1, -1, 2)))
    assert symmetrizer(bad) is None
    assert any("symmetrizable" in p for p in validate_cartan(bad))


@pytest.mark.parametrize("name", ALL_TYPES)
def test_named_types_are_valid(name):
    C = cartan_type(name)
    assert validate_cartan(C) == []
    d = symmetrizer(C)
    for a in range(C.n):
        for b in range(C.n):
            assert d[a] * C.entries[a][b] == d[b] * C.entries[b][a]


def test_type_conventions():
    assert cartan_type("C2").entries == ((2, -2), (-1, 2))
    assert cartan_type("B2").entries == ((2, -1), (-2, 2))
    assert cartan_type("F4").entries[2] == (0, -2, 2, -1)
    assert cartan_type("C3~").labels == (0, 1, 2, 3)
    C = cartan_type("C3~")
    assert (C[0, 1], C[1, 0], C[2, 3], C[3, 2]) == (-1, -2, -2, -1)
    E6 = cartan_type("E6")
    assert sorted(E6.neighbors(4)) == [2, 3, 5]
    D5 = cartan_type("D5~")
    assert sorted(D5.neighbors(2)) == [0, 1, 3]
    assert sorted(D5.neighbors(3)) == [2, 4, 5]
    with pytest.raises(CartanError):
        cartan_type("H3")


def test_simple_root_and_pairing():
    A2, C2, A3 = cartan_type("A2"), cartan_type("C2"), cartan_type("A3")
    assert simple_root(A2, 1) == (2, -1)
    assert simple_root(C2, 1) == (2, -1)
    assert simple_root(C2, 2) == (-2, 2)
    assert simple_root(A3, 2) == (-1, 2, -1)
    L1 = A2.fundamental_weight(1)
    assert pairing(L1, A2, 1) == 1 and pairing(L1, A2, 2) == 0
    assert pairing(simple_root(C2, 1), C2, 2) == -1
    with pytest.raises(CartanError):
        simple_root(A2, 3)
    with pytest.raises(CartanError):
        pairing(L1, A2, 0)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_simple_root_invariant(name):
    C = cartan_type(name)
    for i in C.labels:
        a = simple_root(C, i)
        assert pairing(a, C, i) == 2
        for j in C.labels:
            assert pairing(a, C, j) == C[j, i]


def test_positive_roots_type_A():
    assert positive_roots_type_A(1) == [(1, 1)]
    assert len(positive_roots_type_A(3)) == 6
    assert len(positive_roots_type_A(4)) == 10
    for n in range(1, 7):
        roots = positive_roots_type_A(n)
        assert len(set(roots)) == n * (n + 1) // 2
    with pytest.raises(CartanError):
        positive_roots_type_A(0)


@pytest.mark.parametrize("name,count", [("A3", 6), ("B3", 9), ("C2", 4), ("D4", 12),
                                        ("E6", 36), ("F4", 24), ("G2", 6)])
def test_positive_root_counts(name, count):
    C = cartan_type(name)
    assert len(positive_roots(C)) == count
    assert sorted(positive_roots(C)) == oracles.positive_roots(C.entries)


def test_weight_text_roundtrip():
    C = cartan_type("A3")
    assert parse_weight("L1+2*L3", C) == (1, 0, 2)
    assert parse_weight("0", C) == (0, 0, 0)
    assert parse_weight("2*L1-3*L2", C) == (2, -3, 0)
    for w in [(1, 0, 2), (-1, -1, 0), (0, 0, 0), (3, -2, 1)]:
        assert parse_weight(format_weight(w, C), C) == w
    with pytest.raises(CartanError):
        parse_weight("L1 L2", C)
    with pytest.raises(CartanError):
        parse_weight("L7", C)


def test_json_roundtrip():
    C = cartan_type("F4")
    assert CartanMatrix.from_json(C.to_json()).entries == C.entries
    spec = folding("C2-A3").spec
    back = FoldingSpec.from_json(spec.to_json(), spec.source, spec.target)
    assert back.fibers == spec.fibers and back.gamma == spec.gamma


def test_c2_a3_symbolic_constraint():
    spec = FoldingSpec(cartan_type("C2"), cartan_type("A3"), {1: (1, 3), 2: (2,)})
    report = validate_folding(spec, symbolic=True)
    assert report.ok
    assert [str(c) for c in report.constraints] == ["2*g1 = g2"]
    assert solve_gamma(spec) == {1: 1, 2: 2}
    assert not validate_folding(spec.with_gamma({1: 1, 2: 1}))
    assert validate_folding(spec.with_gamma({1: 1, 2: 2}))


def test_f4_e6_folding_validates():
    F4, E6 = cartan_type("F4"), cartan_type("E6")
    spec = FoldingSpec(F4, E6, {1: (1, 6), 2: (3, 5), 3: (4,), 4: (2,)}, {i: 1 for i in F4.labels})
    assert validate_folding(spec).ok
    # The same fibers in reversed source labelling, against the reversed F4 matrix.
    F4r = CartanMatrix(((2, -1, 0, 0), (-1, 2, -2, 0), (0, -1, 2, -1), (0, 0, -1, 2)), name="F4r")
    spec_r = FoldingSpec(F4r, E6, {1: (2,), 2: (4,), 3: (3, 5), 4: (1, 6)}, {i: 1 for i in F4r.labels})
    assert validate_folding(spec_r).ok


def test_folding_errors():
    A3 = cartan_type("A3")
    C2 = cartan_type("C2")
    assert not validate_folding(FoldingSpec(C2, A3, {1: (1,), 2: (2,)}, {1: 1, 2: 2}))
    rep = validate_folding(FoldingSpec(C2, A3, {1: (1, 2), 2: (3,)}, {1: 1, 2: 1}))
    assert any("adjacent" in p for p in rep.problems)
    rep = validate_folding(FoldingSpec(C2, A3, {1: (1, 2, 3), 2: ()}, {1: 1, 2: 1}))
    assert any("surjective" in p for p in rep.problems)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_identity_folding(name):
    C = cartan_type(name)
    assert validate_folding(identity_folding(C)).ok


def test_phi_tilde_examples():
    spec = folding("C2-A3").spec
    assert phi_tilde(spec, (1, 0)) == (1, 0, 1)
    assert phi_tilde(spec, (0, 0)) == (0, 0, 0)
    A3 = spec.target
    a1 = simple_root(spec.source, 1)
    assert phi_tilde(spec, a1) == tuple(x + y for x, y in zip(simple_root(A3, 1), simple_root(A3, 3)))
    assert phi_tilde_inverse(spec, (1, 0, 1)) == (1, 0)
    assert phi_tilde_inverse(spec, (1, 0, 0)) is None
    assert phi_tilde_inverse(spec, (0, 1, 0)) is None  # gamma_2 = 2 does not divide 1
    with pytest.raises(CartanError):
        phi_tilde(spec, (1, 0, 0))


@pytest.mark.parametrize("name", list(FOLDINGS))
def test_phi_tilde_of_simple_roots(name):
    spec = folding(name).spec
    for i in spec.source.labels:
        lhs = phi_tilde(spec, simple_root(spec.source, i))
        rhs = [0] * spec.target.n
        for ip in spec.fibers[i]:
            for p, x in enumerate(simple_root(spec.target, ip)):
                rhs[p] += spec.gamma[i] * x
        assert lhs == tuple(rhs)


def test_aligned_constraints_for_registry():
    for name in FOLDINGS:
        spec = folding(name).spec
        assert validate_folding(spec).ok, name
        for con in aligned_constraints(spec):
            assert sum(c * spec.gamma[i] for i, c in con.coeffs) == 0
