"""Mutations of c-arrays and monomials.

A mutation is an integer vector ``m`` on the index set.  It changes the array
by ``c'_ij = c_ij + m_i - m_j`` and induces the crystal isomorphism
``Y(i,k) -> Y(i,k+m_i)`` from ``M_c`` to ``M_c'``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .cartan import CartanError, CartanMatrix, FoldingSpec
from .monomial import CArray, Monomial, Style


class MutationError(ValueError):
    pass


class Mutation(dict):
    """Mapping node -> shift; missing nodes shift by 0."""

    @classmethod
    def from_seq(cls, C: CartanMatrix, values: Sequence[int]) -> "Mutation":
        if len(values) != C.n:
            raise MutationError(f"mutation needs {C.n} entries, got {len(values)}")
        return cls(zip(C.labels, (int(v) for v in values)))

    def __missing__(self, key):
        return 0

    def __add__(self, other: Mapping) -> "Mutation":
        keys = set(self) | set(other)
        return Mutation({k: self.get(k, 0) + other.get(k, 0) for k in keys})

    def __neg__(self) -> "Mutation":
        return Mutation({k: -v for k, v in self.items()})

    def as_list(self, C: CartanMatrix) -> list[int]:
        return [self[i] for i in C.labels]


def mutate_carray(c: CArray, m: Mapping) -> CArray:
    if c.style is not Style.KASHIWARA:
        raise MutationError("mutations apply to Kashiwara-style arrays only")
    out = {}
    for (i, j), v in c.values:
        out[(i, j)] = v + m.get(i, 0) - m.get(j, 0)
    for (i, j), v in out.items():
        assert v + out[(j, i)] == 1, "mutation broke c_ij + c_ji = 1"
    return CArray.from_dict(out)


def mutate_monomial(M: Monomial, m: Mapping) -> Monomial:
    return M.shift_nodes(m)


def lift_mutation(m: Mapping, spec: FoldingSpec) -> Mutation:
    """``mhat_{j'} = m_i`` for every ``j'`` in the fiber of ``i``."""
    return Mutation({jp: m.get(i, 0) for i, fib in spec.fibers.items() for jp in fib})


def path_order(C: CartanMatrix) -> list:
    """The nodes of a path-shaped Dynkin diagram from one endpoint to the other."""
    if C.n == 1:
        return list(C.labels)
    deg = {i: len(C.neighbors(i)) for i in C.labels}
    ends = [i for i in C.labels if deg[i] == 1]
    n_edges = sum(deg.values()) // 2
    if len(ends) != 2 or any(d > 2 for d in deg.values()) or n_edges != C.n - 1:
        raise MutationError("Dynkin diagram is not a path")
    order = [min(ends, key=C.pos)]
    while len(order) < C.n:
        nxt = [j for j in C.neighbors(order[-1]) if j not in order]
        order.append(nxt[0])
    return order


def orientation(c: CArray, C: CartanMatrix) -> dict:
    """Edge orientation of ``c``: ``{(a, b): True}`` for an arrow ``a -> b``.

    An adjacent pair with ``c_ab = 0`` and ``c_ba = 1`` is the arrow ``a -> b``;
    pairs with entries outside ``{0, 1}`` have no orientation.
    """
    out = {}
    for a in C.labels:
        for b in C.neighbors(a):
            if c[a, b] == 0 and c[b, a] == 1:
                out[(a, b)] = True
    return out


def reorient_path(c: CArray, C: CartanMatrix, target: Sequence[tuple]) -> tuple[Mutation, CArray]:
    """Mutate ``c`` so the edges of a path diagram point as in ``target``.

    ``target`` lists one arrow ``(a, b)`` per edge.  Each edge that points the
    wrong way is flipped by shifting every node on the far side of it (away
    from the first endpoint) by +-1; flips are applied in order of increasing
    distance from that endpoint, and the shifts add up.  On the result every
    adjacent pair has entries in ``{0, 1}`` matching ``target``.
    """
    order = path_order(C)
    pos = {v: t for t, v in enumerate(order)}
    want = {}
    for a, b in target:
        if not C.adjacent(a, b):
            raise MutationError(f"({a}, {b}) is not an edge")
        want[frozenset((a, b))] = (a, b)
    edges = [frozenset((order[t], order[t + 1])) for t in range(len(order) - 1)]
    missing = [tuple(sorted(e)) for e in edges if e not in want]
    if missing:
        raise MutationError(f"target orientation misses edges {missing}")
    m = Mutation({i: 0 for i in C.labels})
    cur = c
    for t, e in enumerate(edges):
        u, w = order[t], order[t + 1]
        a, b = want[e]
        # want c'_ab = 0 (arrow a -> b); the shift on the far side fixes c'_{u w}
        need = 0 if (a, b) == (u, w) else 1
        delta = cur[u, w] - need
        if delta:
            step = Mutation({v: (delta if pos[v] > t else 0) for v in C.labels})
            m = m + step
            cur = mutate_carray(cur, step)
    assert mutate_carray(c, m) == cur
    for e in edges:
        a, b = want[e]
        assert cur[a, b] == 0 and cur[b, a] == 1
    return m, cur


def format_matrix(rows: Sequence[Sequence[int]]) -> str:
    """Bracketed rows with right-aligned columns of a common width, e.g. ``[ 0  1  0 -1]``."""
    width = max((len(str(x)) for r in rows for x in r), default=1)
    return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in rows)


def parse_matrix(text: str) -> list[list[int]]:
    """Read rows of integers (``[0, 1]`` / ``[ 0  1]`` / ``0 1`` lines, or a JSON list)."""
    import json

    text = text.strip()
    if text.startswith("[["):
        return [[int(x) for x in r] for r in json.loads(text)]
    rows = []
    for line in text.splitlines():
        line = line.strip().strip("[]").replace(",", " ")
        if line:
            rows.append([int(x) for x in line.split()])
    if any(len(r) != len(rows) for r in rows):
        raise CartanError("matrix must be square")
    return rows
