"""Cartan matrices, weights, roots and diagram foldings.

Nodes are addressed by their labels (``1..n`` for finite types, ``0..n`` for
affine types).  Entries are stored in a dense 0-based tuple-of-tuples and the
label -> position lookup is kept on the matrix.

Convention: ``C[i][j] = <h_i, alpha_j>``, so the simple root ``alpha_i`` has
fundamental-weight coordinates given by column ``i`` of ``C``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

Weight = tuple  # integer coordinates in the fundamental-weight basis, by position


class CartanError(ValueError):
    """Raised for an invalid Cartan matrix, folding or weight."""


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple
    labels: tuple = None
    name: str = ""
    _pos: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise CartanError("Cartan matrix must be square")
        labels = tuple(range(1, n + 1)) if self.labels is None else tuple(self.labels)
        if len(labels) != n or len(set(labels)) != n:
            raise CartanError("labels must be distinct and match the matrix size")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_pos", {lab: p for p, lab in enumerate(labels)})

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def index_set(self) -> tuple:
        return self.labels

    def pos(self, i) -> int:
        try:
            return self._pos[i]
        except KeyError:
            raise CartanError(f"node {i!r} not in index set {self.labels}") from None

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[self.pos(i)][self.pos(j)]

    def adjacent(self, i, j) -> bool:
        return i != j and self[i, j] != 0

    def neighbors(self, i) -> list:
        return [j for j in self.labels if self.adjacent(i, j)]

    def zero_weight(self) -> Weight:
        return (0,) * self.n

    def fundamental_weight(self, i) -> Weight:
        w = [0] * self.n
        w[self.pos(i)] = 1
        return tuple(w)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [list(r) for r in self.entries], "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: Mapping) -> "CartanMatrix":
        entries = data["entries"]
        if "n" in data and data["n"] != len(entries):
            raise CartanError("'n' does not match the number of rows")
        return cls(tuple(map(tuple, entries)), data.get("labels"), data.get("name", ""))


def validate_cartan(C: CartanMatrix) -> list[str]:
    """Return a list of diagnostics; an empty list means ``C`` is valid."""
    problems = []
    labels = C.labels
    for a in labels:
        if C[a, a] != 2:
            problems.append(f"diagonal: C[{a},{a}] = {C[a, a]} != 2")
    for a in labels:
        for b in labels:
            if a == b:
                continue
            if C[a, b] > 0:
                problems.append(f"positive off-diagonal entry C[{a},{b}] = {C[a, b]}")
            if (C[a, b] == 0) != (C[b, a] == 0):
                problems.append(f"zero-pattern asymmetry at ({a},{b})")
    if not problems and symmetrizer(C) is None:
        problems.append("not symmetrizable")
    return problems


def check_cartan(C: CartanMatrix) -> CartanMatrix:
    problems = validate_cartan(C)
    if problems:
        raise CartanError("; ".join(problems))
    return C


def symmetrizer(C: CartanMatrix) -> tuple | None:
    """Positive integers ``d`` (by position) with ``d_i C_ij = d_j C_ji``, or None.

    Ratios are propagated along a spanning tree of each connected component,
    then every edge is re-checked.
    """
    n = C.n
    E = C.entries
    d: list = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            a = stack.pop()
            for b in range(n):
                if b == a or E[a][b] == 0 or d[b] is not None:
                    continue
                if E[b][a] == 0:
                    return None
                d[b] = d[a] * E[a][b] / E[b][a]
                if d[b] <= 0:
                    return None
                stack.append(b)
    for a in range(n):
        for b in range(n):
            if d[a] * E[a][b] != d[b] * E[b][a]:
                return None
    scale = lcm(*(x.denominator for x in d))
    ints = [int(x * scale) for x in d]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def simple_root(C: CartanMatrix, i) -> Weight:
    p = C.pos(i)
    return tuple(C.entries[r][p] for r in range(C.n))


def pairing(lam: Weight, C: CartanMatrix, i) -> int:
    """``<h_i, lam>``, i.e. the coordinate of ``lam`` at node ``i``."""
    if len(lam) != C.n:
        raise CartanError("weight dimension does not match the Cartan matrix")
    return lam[C.pos(i)]


def add_weights(*ws: Weight) -> Weight:
    return tuple(sum(c) for c in zip(*ws))


def scale_weight(k: int, w: Weight) -> Weight:
    return tuple(k * x for x in w)


def root_to_weight(C: CartanMatrix, coeffs: Sequence[int]) -> Weight:
    """Convert simple-root coordinates (by position) to weight coordinates."""
    return tuple(sum(C.entries[r][p] * coeffs[p] for p in range(C.n)) for r in range(C.n))


def reflect_root(C: CartanMatrix, i, beta: Sequence[int]) -> tuple:
    """Simple reflection ``s_i`` acting on a root in simple-root coordinates."""
    p = C.pos(i)
    h = sum(C.entries[p][q] * beta[q] for q in range(C.n))
    out = list(beta)
    out[p] -= h
    return tuple(out)


def positive_roots(C: CartanMatrix, limit: int = 10_000) -> list[tuple]:
    """Positive roots of a finite-type matrix, in simple-root coordinates.

    Generated as the closure of the simple roots under simple reflections,
    keeping only positive vectors.  Sorted by height then lexicographically.
    """
    n = C.n
    simple = [tuple(1 if q == p else 0 for q in range(n)) for p in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in C.labels:
                gamma = reflect_root(C, i, beta)
                if all(x >= 0 for x in gamma) and gamma not in seen:
                    seen.add(gamma)
                    nxt.append(gamma)
                    if len(seen) > limit:
                        raise CartanError("root system appears infinite (not finite type)")
        frontier = nxt
    return sorted(seen, key=lambda b: (sum(b), b))


def positive_roots_type_A(n: int) -> list[tuple[int, int]]:
    """Intervals ``(j, k)`` with ``1 <= j <= k <= n``, lexicographic."""
    if n < 1:
        raise CartanError("rank must be at least 1")
    return [(j, k) for j in range(1, n + 1) for k in range(j, n + 1)]


# -- named types --------------------------------------------------------------

def _from_edges(n, labels, edges, name):
    """Build a Cartan matrix from ``(i, j, C_ij, C_ji)`` edge records."""
    pos = {lab: p for p, lab in enumerate(labels)}
    m = [[2 if a == b else 0 for b in range(n)] for a in range(n)]
    for i, j, cij, cji in edges:
        m[pos[i]][pos[j]] = cij
        m[pos[j]][pos[i]] = cji
    return CartanMatrix(tuple(map(tuple, m)), labels, name)


def _finite(kind: str, n: int) -> CartanMatrix:
    name = f"{kind}{n}"
    labels = tuple(range(1, n + 1))
    chain = [(i, i + 1, -1, -1) for i in range(1, n)]
    if kind == "A" and n >= 1:
        return _from_edges(n, labels, chain, name)
    if kind == "B" and n >= 2:
        return _from_edges(n, labels, chain[:-1] + [(n - 1, n, -1, -2)], name)
    if kind == "C" and n >= 2:
        return _from_edges(n, labels, chain[:-1] + [(n - 1, n, -2, -1)], name)
    if kind == "D" and n >= 4:
        edges = [(i, i + 1, -1, -1) for i in range(1, n - 1)] + [(n - 2, n, -1, -1)]
        return _from_edges(n, labels, edges, name)
    if kind == "E" and n in (6, 7, 8):
        edges = [(1, 3, -1, -1), (2, 4, -1, -1)] + [(i, i + 1, -1, -1) for i in range(3, n)]
        return _from_edges(n, labels, edges, name)
    if kind == "F" and n == 4:
        return _from_edges(4, labels, [(1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)], name)
    if kind == "G" and n == 2:
        return _from_edges(2, labels, [(1, 2, -3, -1)], name)
    raise CartanError(f"unknown finite type {name}")


def _affine(kind: str, n: int) -> CartanMatrix:
    name = f"{kind}{n}~"
    labels = tuple(range(0, n + 1))
    if kind == "A" and n >= 2:
        edges = [(i, i + 1, -1, -1) for i in range(n)] + [(0, n, -1, -1)]
        return _from_edges(n + 1, labels, edges, name)
    if kind == "C" and n >= 2:
        edges = [(0, 1, -1, -2)] + [(i, i + 1, -1, -1) for i in range(1, n - 1)]
        edges.append((n - 1, n, -2, -1))
        return _from_edges(n + 1, labels, edges, name)
    if kind == "D" and n >= 4:
        edges = [(0, 2, -1, -1)] + [(i, i + 1, -1, -1) for i in range(1, n - 1)]
        edges.append((n - 2, n, -1, -1))
        return _from_edges(n + 1, labels, edges, name)
    raise CartanError(f"unknown affine type {name}")


_TYPE_RE = re.compile(r"^([A-G])(\d+)(~|\^\(1\))?$")


def cartan_type(name: str) -> CartanMatrix:
    """Resolve names like ``"A3"``, ``"F4"``, ``"C3~"`` or ``"D5^(1)"``."""
    m = _TYPE_RE.match(name.strip())
    if not m:
        raise CartanError(f"unrecognized Cartan type {name!r}")
    kind, n, affine = m.group(1), int(m.group(2)), m.group(3)
    return _affine(kind, n) if affine else _finite(kind, n)


_WEIGHT_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?L\s*(\d+)\s*")


def parse_weight(text: str, C: CartanMatrix) -> Weight:
    """Parse ``"L1+2*L3"`` (``"0"`` for the zero weight)."""
    text = text.strip()
    w = [0] * C.n
    if text in ("", "0"):
        return tuple(w)
    pos = 0
    while pos < len(text):
        m = _WEIGHT_TERM.match(text, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)):
            raise CartanError(f"bad weight expression {text!r}")
        coeff = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            coeff = -coeff
        w[C.pos(int(m.group(3)))] += coeff
        pos = m.end()
    return tuple(w)


def format_weight(w: Weight, C: CartanMatrix) -> str:
    terms = []
    for lab, x in zip(C.labels, w):
        if x == 0:
            continue
        coeff = {1: "", -1: "-"}.get(x, f"{x}*")
        terms.append(f"{coeff}L{lab}")
    return "+".join(terms).replace("+-", "-") if terms else "0"


# -- foldings -----------------------------------------------------------------

@dataclass(frozen=True)
class FoldingSpec:
    """A surjection ``phi`` from target nodes onto source nodes, plus scaling factors.

    ``fibers`` maps every source node ``i`` to the sorted tuple ``phi^{-1}(i)``.
    ``gamma`` maps source nodes to positive integers; it may be None while the
    factors are still unknown (see ``aligned_constraints``).
    """

    source: CartanMatrix
    target: CartanMatrix
    fibers: Mapping
    gamma: Mapping | None = None
    name: str = ""

    def __post_init__(self):
        fibers = {i: tuple(sorted(self.fibers.get(i, ()))) for i in self.source.labels}
        extra = set(self.fibers) - set(self.source.labels)
        if extra:
            raise CartanError(f"fibers given for unknown source nodes {sorted(extra)}")
        object.__setattr__(self, "fibers", fibers)
        if self.gamma is not None:
            object.__setattr__(self, "gamma", {i: int(self.gamma[i]) for i in self.source.labels})

    @classmethod
    def from_phi(cls, source, target, phi: Mapping, gamma=None, name="") -> "FoldingSpec":
        """Build from a target -> source map."""
        fibers: dict = {i: [] for i in source.labels}
        for jp, j in phi.items():
            if j not in fibers:
                raise CartanError(f"phi({jp}) = {j} is not a source node")
            fibers[j].append(jp)
        return cls(source, target, fibers, gamma, name)

    def phi(self, jp):
        for i, fib in self.fibers.items():
            if jp in fib:
                return i
        raise CartanError(f"target node {jp!r} is not in the domain of phi")

    @property
    def phi_map(self) -> dict:
        return {jp: i for i, fib in self.fibers.items() for jp in fib}

    def with_gamma(self, gamma) -> "FoldingSpec":
        return FoldingSpec(self.source, self.target, self.fibers, gamma, self.name)

    def to_json(self) -> dict:
        out = {"phi": {str(jp): i for jp, i in sorted(self.phi_map.items())}}
        if self.gamma is not None:
            out["gamma"] = {str(i): g for i, g in self.gamma.items()}
        return out

    @classmethod
    def from_json(cls, data: Mapping, source: CartanMatrix, target: CartanMatrix) -> "FoldingSpec":
        phi = {int(k): int(v) for k, v in data["phi"].items()}
        gamma = data.get("gamma")
        if gamma is not None:
            gamma = {int(k): int(v) for k, v in gamma.items()}
        return cls.from_phi(source, target, phi, gamma)


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeffs[i] * gamma_i) == 0``; ``origin`` is the ``(i, j')`` it came from."""

    coeffs: tuple  # ((source node, coefficient), ...) with nonzero coefficients
    origin: tuple

    def __str__(self):
        lhs = [(i, c) for i, c in self.coeffs if c > 0]
        rhs = [(i, -c) for i, c in self.coeffs if c < 0]

        def side(terms):
            if not terms:
                return "0"
            return " + ".join(f"g{i}" if c == 1 else f"{c}*g{i}" for i, c in terms)

        return f"{side(lhs)} = {side(rhs)}"


def _normalize(coeffs: dict) -> tuple:
    items = sorted((i, c) for i, c in coeffs.items() if c != 0)
    if not items:
        return ()
    g = gcd(*(c for _, c in items))
    if items[0][1] < 0:
        g = -g
    return tuple((i, c // g) for i, c in items)


def aligned_constraints(spec: FoldingSpec) -> list[LinearConstraint]:
    """The distinct linear equations on ``gamma`` imposed by the aligned condition.

    For every source node ``i`` and target node ``j'`` with ``j = phi(j')``:
    ``gamma_j C_ji - gamma_i * sum_{i' in phi^{-1}(i)} Chat_{j'i'} = 0``.
    """
    C, Ch = spec.source, spec.target
    seen = {}
    for i in C.labels:
        for jp in Ch.labels:
            j = spec.phi(jp)
            coeffs = {i: 0, j: 0}
            coeffs[j] += C[j, i]
            coeffs[i] -= sum(Ch[jp, ip] for ip in spec.fibers[i])
            key = _normalize(coeffs)
            if key and key not in seen:
                seen[key] = LinearConstraint(key, (i, jp))
    return list(seen.values())


@dataclass
class FoldingReport:
    ok: bool
    problems: list = field(default_factory=list)
    constraints: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_folding(spec: FoldingSpec, symbolic: bool = False) -> FoldingReport:
    """Check surjectivity, fiber orthogonality and the aligned condition.

    With ``symbolic=True`` (or when ``spec.gamma`` is None) the aligned
    condition is not evaluated; instead the report lists the induced linear
    constraints on ``gamma``.
    """
    C, Ch = spec.source, spec.target
    problems = []
    covered = [jp for fib in spec.fibers.values() for jp in fib]
    for jp in covered:
        Ch.pos(jp)
    if len(covered) != len(set(covered)):
        problems.append("fibers overlap")
    missing = set(Ch.labels) - set(covered)
    if missing:
        problems.append(f"phi is not total: target nodes {sorted(missing)} unmapped")
    for i, fib in spec.fibers.items():
        if not fib:
            problems.append(f"phi is not surjective: fiber of {i} is empty")
        for a in fib:
            for b in fib:
                if a != b and Ch[a, b] != 0:
                    problems.append(f"fiber of {i} contains adjacent nodes {a}, {b}")
    constraints = aligned_constraints(spec) if not problems else []
    if symbolic or spec.gamma is None:
        return FoldingReport(not problems, problems, constraints)
    for i, g in spec.gamma.items():
        if g <= 0:
            problems.append(f"gamma_{i} = {g} is not positive")
    if not problems:
        for i in C.labels:
            for jp in Ch.labels:
                j = spec.phi(jp)
                lhs = spec.gamma[j] * C[j, i]
                rhs = spec.gamma[i] * sum(Ch[jp, ip] for ip in spec.fibers[i])
                if lhs != rhs:
                    problems.append(f"aligned condition fails at (i={i}, j'={jp}): {lhs} != {rhs}")
    return FoldingReport(not problems, problems, constraints)


def solve_gamma(spec: FoldingSpec) -> dict:
    """Minimal positive integer scaling factors satisfying the aligned condition."""
    import sympy

    labels = spec.source.labels
    cons = aligned_constraints(spec)
    if not cons:
        return {i: 1 for i in labels}
    rows = []
    for con in cons:
        d = dict(con.coeffs)
        rows.append([d.get(i, 0) for i in labels])
    null = sympy.Matrix(rows).nullspace()
    if len(null) != 1:
        raise CartanError(f"aligned condition leaves {len(null)} free parameters")
    vec = null[0]
    den = lcm(*(sympy.fraction(x)[1] for x in vec))
    ints = [int(x * den) for x in vec]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        raise CartanError("aligned condition has no positive solution")
    g = gcd(*ints)
    return {i: x // g for i, x in zip(labels, ints)}


def phi_tilde(spec: FoldingSpec, lam: Weight) -> Weight:
    """Image of ``lam`` under ``Lambda_i -> gamma_i * sum_{i' in fiber} Lambda_i'``."""
    C, Ch = spec.source, spec.target
    if len(lam) != C.n:
        raise CartanError("weight dimension does not match the source type")
    out = [0] * Ch.n
    for i in C.labels:
        x = lam[C.pos(i)]
        for ip in spec.fibers[i]:
            out[Ch.pos(ip)] += spec.gamma[i] * x
    return tuple(out)


def phi_tilde_inverse(spec: FoldingSpec, what: Weight) -> Weight | None:
    """Preimage under ``phi_tilde``, or None when ``what`` is outside the image."""
    C, Ch = spec.source, spec.target
    out = []
    for i in C.labels:
        vals = {what[Ch.pos(ip)] for ip in spec.fibers[i]}
        if len(vals) != 1:
            return None
        v = vals.pop()
        if v % spec.gamma[i]:
            return None
        out.append(v // spec.gamma[i])
    return tuple(out)


def identity_folding(C: CartanMatrix) -> FoldingSpec:
    return FoldingSpec(C, C, {i: (i,) for i in C.labels}, {i: 1 for i in C.labels}, f"{C.name}-{C.name}")
