"""Kostant partitions in type A_n and their link with modified Nakajima monomials.

A Kostant partition is a nonnegative combination of positive roots
``alpha_{j,k} = alpha_j + ... + alpha_k``.  The crystal operators use the
bracketing rule attached to the dual BZL word ``(n, n-1, n, ..., 1, 2, ..., n)``.
Roots are keyed by the interval ``(j, k)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cartan import (
    CartanMatrix, FoldingSpec, cartan_type, positive_roots, reflect_root,
    root_to_weight,
)
from .monomial import CArray, InfinityMonomialCrystal, Monomial

OPEN, CLOSE = "(", ")"


class KostantError(ValueError):
    """Raised for malformed partitions or monomials outside M(infinity)."""


def _root_order(key):
    # print order follows the dual BZL convex order: j descending, then k descending
    j, k = key
    return (-j, -k)


@dataclass(frozen=True)
class KostantPartition:
    n: int
    mult: tuple  # ((j, k), c) with c > 0, in print order

    def __init__(self, n: int, mult: Mapping | Iterable = ()):
        if n < 1:
            raise KostantError("rank must be at least 1")
        items = mult.items() if isinstance(mult, Mapping) else mult
        acc: dict = {}
        for (j, k), c in items:
            j, k, c = int(j), int(k), int(c)
            if not 1 <= j <= k <= n:
                raise KostantError(f"alpha[{j},{k}] is not a positive root of A{n}")
            if c < 0:
                raise KostantError(f"negative multiplicity {c} for alpha[{j},{k}]")
            acc[(j, k)] = acc.get((j, k), 0) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mult", tuple(sorted(((r, c) for r, c in acc.items() if c),
                                                      key=lambda rc: _root_order(rc[0]))))

    def __getitem__(self, root) -> int:
        return dict(self.mult).get(tuple(root), 0)

    def as_dict(self) -> dict:
        return dict(self.mult)

    def add(self, root, c: int = 1) -> "KostantPartition":
        d = self.as_dict()
        d[root] = d.get(root, 0) + c
        if d[root] < 0:
            raise KostantError(f"multiplicity of alpha{list(root)} would become negative")
        return KostantPartition(self.n, d)

    def size(self) -> int:
        return sum(c for _, c in self.mult)

    def __str__(self):
        return format_partition(self)

    def __repr__(self):
        return f"KostantPartition({self.n}, {format_partition(self)!r})"

    def to_json(self) -> dict:
        return {"n": self.n, "mult": [[j, k, c] for (j, k), c in self.mult]}

    @classmethod
    def from_json(cls, data: Mapping) -> "KostantPartition":
        return cls(int(data["n"]), {(j, k): c for j, k, c in data["mult"]})


def _root_name(j, k) -> str:
    return f"a[{j}]" if j == k else f"a[{j},{k}]"


def format_partition(a: KostantPartition) -> str:
    """Text form such as ``2*(a[3]) + 3*(a[2,3])``; the zero partition is ``0``."""
    if not a.mult:
        return "0"
    return " + ".join(f"({_root_name(j, k)})" if c == 1 else f"{c}*({_root_name(j, k)})"
                      for (j, k), c in a.mult)


_TERM = re.compile(r"\s*(?:(\d+)\s*\*?\s*)?\(\s*a\[\s*(\d+)\s*(?:,\s*(\d+)\s*)?\]\s*\)\s*")


def parse_partition(text: str, n: int) -> KostantPartition:
    text = text.strip()
    if text in ("", "0"):
        return KostantPartition(n)
    acc: dict = {}
    for term in text.split("+"):
        m = _TERM.fullmatch(term)
        if not m:
            raise KostantError(f"cannot parse term {term.strip()!r} of {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        j = int(m.group(2))
        k = int(m.group(3)) if m.group(3) else j
        acc[(j, k)] = acc.get((j, k), 0) + c
    return KostantPartition(n, acc)


# -- bracketing rule ----------------------------------------------------------

@dataclass(frozen=True)
class Bracket:
    kind: str  # OPEN or CLOSE
    root: tuple


def bracket_seq(a: KostantPartition, i: int) -> list[Bracket]:
    """``S_i``: for ``k = n..i+1`` the blocks ``)^{c(i,k)} (^{c(i+1,k)}``, then ``)^{c(i,i)}``."""
    n = a.n
    if not 1 <= i <= n:
        raise KostantError(f"index {i} out of range for A{n}")
    out = []
    for k in range(n, i, -1):
        out += [Bracket(CLOSE, (i, k))] * a[(i, k)]
        out += [Bracket(OPEN, (i + 1, k))] * a[(i + 1, k)]
    out += [Bracket(CLOSE, (i, i))] * a[(i, i)]
    return out


def render(seq: Sequence[Bracket]) -> str:
    return " ".join(b.kind for b in seq)


def cancel(seq: Sequence[Bracket]) -> tuple[list[Bracket], list[Bracket]]:
    """Cancel ``()`` pairs; returns the uncanceled ``)`` then ``(`` tokens, left to right."""
    closes: list = []
    opens: list = []
    for b in seq:
        if b.kind == OPEN:
            opens.append(b)
        elif opens:
            opens.pop()
        else:
            closes.append(b)
    return closes, opens


class KostantCrystal:
    """``Kp(infinity)`` of type A_n under the dual BZL bracketing rule."""

    def __init__(self, n: int):
        if n < 1:
            raise KostantError("rank must be at least 1")
        self.n = n
        self.cartan = cartan_type(f"A{n}")

    @property
    def index_set(self) -> tuple:
        return tuple(range(1, self.n + 1))

    def zero(self) -> KostantPartition:
        return KostantPartition(self.n)

    def _check(self, a: KostantPartition):
        if a.n != self.n:
            raise KostantError(f"partition of rank {a.n} used in A{self.n}")

    def f(self, a: KostantPartition, i: int) -> KostantPartition:
        self._check(a)
        _, opens = cancel(bracket_seq(a, i))
        if not opens:
            return a.add((i, i))
        g = opens[0].root
        return a.add(g, -1).add((i, g[1]))

    def e(self, a: KostantPartition, i: int) -> KostantPartition | None:
        self._check(a)
        closes, _ = cancel(bracket_seq(a, i))
        if not closes:
            return None
        beta = closes[-1].root
        out = a.add(beta, -1)
        if beta[1] > i:
            out = out.add((i + 1, beta[1]))
        return out

    def weight(self, a: KostantPartition) -> tuple:
        self._check(a)
        coeffs = [0] * self.n
        for (j, k), c in a.mult:
            for p in range(j, k + 1):
                coeffs[p - 1] -= c
        return root_to_weight(self.cartan, coeffs)

    def epsilon(self, a: KostantPartition, i: int) -> int:
        return len(cancel(bracket_seq(a, i))[0])

    def phi(self, a: KostantPartition, i: int) -> int:
        return self.epsilon(a, i) + self.weight(a)[i - 1]

    def stats(self, a: KostantPartition, i: int) -> tuple:
        return self.weight(a), self.epsilon(a, i), self.phi(a, i)


# -- Nakajima monomials -------------------------------------------------------

def kostant_c(n: int) -> CArray:
    """The fixed array ``c_ij = 1`` if ``i < j`` and ``0`` if ``i > j``."""
    return CArray.standard(cartan_type(f"A{n}"))


def monomial_crystal(n: int) -> InfinityMonomialCrystal:
    return InfinityMonomialCrystal(cartan_type(f"A{n}"), kostant_c(n))


def kostant_to_monomial(a: KostantPartition, crystal: InfinityMonomialCrystal | None = None) -> Monomial:
    """``prod_{j<=k} (prod_{p=j}^{k} A_{p,k-p}^{-1})^{l_{j,k}}``."""
    M = crystal or monomial_crystal(a.n)
    out = Monomial.one()
    for (j, k), c in a.mult:
        for p in range(j, k + 1):
            out = out * M.A(p, k - p) ** (-c)
    return out


def a_exponents(M: Monomial, n: int, crystal: InfinityMonomialCrystal | None = None) -> dict:
    """The exponents ``a[i, q]`` with ``M = prod A_{i,q}^{-a[i,q]}`` (``0 <= q <= n-i``).

    Back-substitution in the order (q, i): ``A_{i,q}^{-1}`` is the only factor
    touching ``Y(i,q)`` among those not yet fixed.
    """
    C = crystal or monomial_crystal(n)
    if C.c != kostant_c(n) or C.cartan != cartan_type(f"A{n}"):
        raise KostantError("Kostant partitions need type A_n with c_ij = 1 for i < j and 0 for i > j; "
                           "mutate the monomial to this array first")
    residual = M
    a = {}
    for q in range(n):
        for i in range(1, n - q + 1):
            x = -residual[(i, q)]
            a[(i, q)] = x
            if x:
                residual = residual * C.A(i, q) ** x
    if not residual.is_one():
        raise KostantError(f"{M} is not a product of the A-monomials of M(infinity)")
    return a


def chain_condition(a: Mapping, n: int) -> bool:
    """``0 <= a[1,i-1] <= a[2,i-2] <= ... <= a[i,0]`` for every ``1 <= i <= n``."""
    for i in range(1, n + 1):
        prev = 0
        for p in range(1, i + 1):
            cur = a.get((p, i - p), 0)
            if cur < prev:
                return False
            prev = cur
    return True


def ell_from_a(a: Mapping, n: int) -> dict:
    """``l[i, i+q] = a[i,q] - a[i-1,q+1]``."""
    return {(i, i + q): a.get((i, q), 0) - a.get((i - 1, q + 1), 0)
            for i in range(1, n + 1) for q in range(0, n - i + 1)}


def monomial_to_kostant(M: Monomial, n: int, crystal: InfinityMonomialCrystal | None = None) -> KostantPartition:
    a = a_exponents(M, n, crystal)
    if not chain_condition(a, n):
        raise KostantError(f"{M} violates the chain condition; not in M(infinity)")
    ell = ell_from_a(a, n)
    return KostantPartition(n, {r: c for r, c in ell.items() if c})


# -- Lusztig data -------------------------------------------------------------

def dual_bzl_word(n: int) -> tuple:
    """``(n, n-1, n, n-2, n-1, n, ..., 1, 2, ..., n)``."""
    return tuple(p for start in range(n, 0, -1) for p in range(start, n + 1))


def beta_sequence(C: CartanMatrix, word: Sequence) -> list[tuple]:
    """``beta_t = s_{i_1} ... s_{i_{t-1}}(alpha_{i_t})`` in simple-root coordinates.

    Raises if the word is not a reduced expression for the longest element.
    """
    n = C.n
    out = []
    for t, it in enumerate(word):
        beta = tuple(1 if p == C.pos(it) else 0 for p in range(n))
        for s in reversed(word[:t]):
            beta = reflect_root(C, s, beta)
        out.append(beta)
    N = len(positive_roots(C))
    if any(min(b) < 0 for b in out):
        raise KostantError(f"word {tuple(word)} is not reduced")
    if len(set(out)) != len(out):
        raise KostantError(f"word {tuple(word)} is not reduced")
    if len(out) != N:
        raise KostantError(f"word {tuple(word)} has length {len(out)}; the longest element has length {N}")
    return out


def _interval(beta) -> tuple:
    support = [p + 1 for p, x in enumerate(beta) if x]
    j, k = support[0], support[-1]
    if support != list(range(j, k + 1)) or any(x != 1 for x in beta if x):
        raise KostantError(f"{beta} is not a type A root")
    return j, k


def root_order(n: int, word: Sequence | None = None) -> list[tuple]:
    word = dual_bzl_word(n) if word is None else word
    return [_interval(b) for b in beta_sequence(cartan_type(f"A{n}"), word)]


def lusztig_data(a: KostantPartition, word: Sequence | None = None) -> tuple:
    """Multiplicities of ``a`` read in the convex order induced by ``word``."""
    return tuple(a[r] for r in root_order(a.n, word))


def from_lusztig_data(L: Sequence[int], n: int, word: Sequence | None = None) -> KostantPartition:
    order = root_order(n, word)
    if len(L) != len(order):
        raise KostantError(f"expected {len(order)} entries, got {len(L)}")
    if any(x < 0 for x in L):
        raise KostantError("Lusztig data must be nonnegative")
    return KostantPartition(n, dict(zip(order, L)))


def virtual_word(word: Sequence, spec: FoldingSpec) -> tuple:
    """Replace each letter ``i`` by its fiber, in ascending order."""
    return tuple(ip for i in word for ip in spec.fibers[i])


def virtualize_lusztig_data(L: Sequence[int], word: Sequence, spec: FoldingSpec) -> tuple[tuple, tuple]:
    """``(ihat, v(L))``: each entry ``L_t`` is repeated over the fiber of ``i_t`` and scaled by gamma."""
    if len(L) != len(word):
        raise KostantError("Lusztig data and word have different lengths")
    beta_sequence(spec.source, word)
    ihat = virtual_word(word, spec)
    beta_sequence(spec.target, ihat)
    out = tuple(spec.gamma[i] * x for i, x in zip(word, L) for _ in spec.fibers[i])
    return ihat, out
