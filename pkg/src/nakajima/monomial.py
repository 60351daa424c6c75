"""Nakajima monomials and their crystal structures.

A monomial is a product of commuting variables ``Y(i,k)`` with integer
exponents.  ``MonomialCrystal`` equips monomials with Kashiwara's crystal
structure for a chosen c-array (or Nakajima's, with the ``A'`` monomials);
``InfinityMonomialCrystal`` is the modified structure realizing B(infinity).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .cartan import CartanError, CartanMatrix, Weight


class MonomialError(ValueError):
    pass


class Monomial:
    """Immutable sparse Laurent monomial in the variables ``Y(i,k)``.

    Stored as a tuple of ``((i, k), e)`` pairs sorted by ``(i, k)`` with no
    zero exponents, so equality and hashing are structural.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, exps: Mapping | Iterable = ()):
        if isinstance(exps, Mapping):
            pairs = exps.items()
        else:
            pairs = (((i, k), e) for i, k, e in exps)
        acc: dict = {}
        for key, e in pairs:
            if e:
                acc[key] = acc.get(key, 0) + int(e)
        self._items = tuple(sorted((key, e) for key, e in acc.items() if e))
        self._hash = hash(self._items)

    @classmethod
    def _raw(cls, items: tuple) -> "Monomial":
        m = cls.__new__(cls)
        m._items = items
        m._hash = hash(items)
        return m

    @classmethod
    def one(cls) -> "Monomial":
        return cls._raw(())

    @classmethod
    def Y(cls, i, k, e: int = 1) -> "Monomial":
        return cls({(i, k): e})

    # -- container protocol

    def items(self) -> tuple:
        return self._items

    def __getitem__(self, key) -> int:
        for kk, e in self._items:
            if kk == key:
                return e
        return 0

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Monomial"):
        return self._items < other._items

    def is_one(self) -> bool:
        return not self._items

    def nodes(self) -> set:
        return {i for (i, _), _ in self._items}

    def row(self, i) -> list[tuple[int, int]]:
        """Sorted ``(k, y_i(k))`` pairs for node ``i``."""
        return [(k, e) for (a, k), e in self._items if a == i]

    def min_shift(self) -> int | None:
        return min((k for (_, k), _ in self._items), default=None)

    # -- arithmetic

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other._items:
            return self
        if not self._items:
            return other
        acc = dict(self._items)
        for key, e in other._items:
            acc[key] = acc.get(key, 0) + e
        return Monomial(acc)

    def __pow__(self, n: int) -> "Monomial":
        if n == 0:
            return Monomial.one()
        return Monomial._raw(tuple((key, e * n) for key, e in self._items))

    def inverse(self) -> "Monomial":
        return self ** -1

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def shift(self, s: int) -> "Monomial":
        """The shift map ``Y(i,k) -> Y(i,k+s)``."""
        if s == 0:
            return self
        return Monomial._raw(tuple(((i, k + s), e) for (i, k), e in self._items))

    def shift_nodes(self, m: Mapping) -> "Monomial":
        """Node-dependent shift ``Y(i,k) -> Y(i, k + m[i])``."""
        return Monomial({(i, k + m.get(i, 0)): e for (i, k), e in self._items})

    # -- formatting

    def __str__(self):
        if not self._items:
            return "1"
        parts = []
        for (i, k), e in self._items:
            parts.append(f"Y({i},{k})" if e == 1 else f"Y({i},{k})^{e}")
        return " * ".join(parts)

    def __repr__(self):
        return f"Monomial({str(self)!r})"

    def to_latex(self) -> str:
        if not self._items:
            return r"\boldsymbol{1}"
        parts = []
        for (i, k), e in self._items:
            parts.append(f"Y_{{{i},{k}}}" if e == 1 else f"Y_{{{i},{k}}}^{{{e}}}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"exps": [[i, k, e] for (i, k), e in self._items]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Monomial":
        acc = {}
        for i, k, e in data["exps"]:
            if e == 0:
                raise MonomialError(f"zero exponent for Y({i},{k})")
            if (i, k) in acc:
                raise MonomialError(f"duplicate key Y({i},{k})")
            acc[(i, k)] = e
        return cls(acc)

    @classmethod
    def parse(cls, text: str) -> "Monomial":
        return parse_monomial(text)


_FACTOR = re.compile(
    r"""\s*Y\s*(?:\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)|_\{\s*(-?\d+)\s*,\s*(-?\d+)\s*\})
        (?:\s*\^\s*(?:\{\s*(-?\d+)\s*\}|\(\s*(-?\d+)\s*\)|(-?\d+)))?\s*""",
    re.VERBOSE,
)


def parse_monomial(text: str) -> Monomial:
    """Parse ``"Y(1,0)^2 * Y(2,1)^-1"``; LaTeX-style ``Y_{1,0}^{2}`` is accepted too.

    ``"1"`` is the identity.  Zero exponents and repeated variables are rejected.
    """
    text = text.strip()
    if text in ("1", r"\boldsymbol{1}", ""):
        return Monomial.one()
    acc: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        if not first:
            m_sep = re.compile(r"\s*\*?\s*").match(text, pos)
            pos = m_sep.end()
        m = _FACTOR.match(text, pos)
        if not m:
            raise MonomialError(f"cannot parse monomial {text!r} at position {pos}")
        i = int(m.group(1) if m.group(1) is not None else m.group(3))
        k = int(m.group(2) if m.group(2) is not None else m.group(4))
        raw = next((g for g in m.group(5, 6, 7) if g is not None), "1")
        e = int(raw)
        if e == 0:
            raise MonomialError(f"zero exponent for Y({i},{k})")
        if (i, k) in acc:
            raise MonomialError(f"duplicate variable Y({i},{k})")
        acc[(i, k)] = e
        pos = m.end()
        first = False
    return Monomial(acc)


class Style(enum.Enum):
    KASHIWARA = "kashiwara"
    NAKAJIMA = "nakajima"


@dataclass(frozen=True)
class CArray:
    """Off-diagonal integers ``c[i, j]`` (i != j) fixing where neighbours enter ``A_{i,k}``."""

    values: tuple  # sorted (((i, j), c_ij), ...)
    style: Style = Style.KASHIWARA

    def __getitem__(self, ij) -> int:
        return self._lookup[ij]

    @property
    def _lookup(self) -> dict:
        d = self.__dict__.get("_cache")
        if d is None:
            d = dict(self.values)
            object.__setattr__(self, "_cache", d)
        return d

    def as_dict(self) -> dict:
        return dict(self._lookup)

    @classmethod
    def from_dict(cls, values: Mapping, style: Style = Style.KASHIWARA) -> "CArray":
        return cls(tuple(sorted((tuple(k), int(v)) for k, v in values.items())), style)

    @classmethod
    def standard(cls, C: CartanMatrix) -> "CArray":
        """``c_ij = 1`` when ``i`` precedes ``j`` in the index order, else 0."""
        labels = C.labels
        return cls.from_dict({(a, b): int(pa < pb) for pa, a in enumerate(labels)
                              for pb, b in enumerate(labels) if a != b})

    @classmethod
    def nakajima(cls, C: CartanMatrix) -> "CArray":
        return cls.from_dict({(a, b): 1 for a in C.labels for b in C.labels if a != b},
                             Style.NAKAJIMA)

    @classmethod
    def from_matrix(cls, C: CartanMatrix, rows, style: Style = Style.KASHIWARA) -> "CArray":
        """Read a square matrix indexed by position; the diagonal is ignored."""
        if len(rows) != C.n or any(len(r) != C.n for r in rows):
            raise CartanError("c-array matrix must match the Cartan matrix size")
        labels = C.labels
        return cls.from_dict({(a, b): rows[pa][pb] for pa, a in enumerate(labels)
                              for pb, b in enumerate(labels) if a != b}, style)

    def to_matrix(self, C: CartanMatrix) -> list[list[int]]:
        return [[0 if a == b else self[a, b] for b in C.labels] for a in C.labels]

    def violations(self, C: CartanMatrix, for_infinity: bool = False) -> list[str]:
        out = []
        for a in C.labels:
            for b in C.labels:
                if a == b:
                    continue
                if (a, b) not in self._lookup:
                    out.append(f"missing c[{a},{b}]")
                    continue
                if self.style is Style.KASHIWARA:
                    if self[a, b] + self[b, a] != 1:
                        out.append(f"c[{a},{b}] + c[{b},{a}] != 1")
                    if for_infinity and self[a, b] < 0:
                        out.append(f"c[{a},{b}] = {self[a, b]} is negative")
                elif self[a, b] != 1:
                    out.append(f"Nakajima style needs c[{a},{b}] = 1")
        if self.style is Style.NAKAJIMA and has_odd_cycle(C):
            out.append("Nakajima style needs a Dynkin diagram without odd cycles")
        return out


def bipartite_parity(C: CartanMatrix) -> dict | None:
    """A 2-colouring ``{node: 0 or 1}`` of the Dynkin diagram (first node of each component gets 0).

    None when the diagram has an odd cycle.
    """
    color: dict = {}
    for start in C.labels:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            a = stack.pop()
            for b in C.neighbors(a):
                if b not in color:
                    color[b] = 1 - color[a]
                    stack.append(b)
                elif color[b] == color[a]:
                    return None
    return color


def has_odd_cycle(C: CartanMatrix) -> bool:
    return bipartite_parity(C) is None


class MonomialCrystal:
    """The crystal ``M_c`` of (unmodified) Nakajima monomials.

    Operators return ``None`` for Kashiwara's 0.
    """

    modified = False

    def __init__(self, cartan: CartanMatrix, c: CArray | None = None,
                 style: Style | None = None, check: bool = True):
        if c is None:
            c = CArray.nakajima(cartan) if style is Style.NAKAJIMA else CArray.standard(cartan)
        if style is not None and c.style is not style:
            raise MonomialError("c-array style does not match the requested style")
        self.cartan = cartan
        self.c = c
        self.style = c.style
        if check:
            bad = c.violations(cartan, for_infinity=self.modified)
            if bad:
                raise MonomialError("invalid c-array: " + "; ".join(bad))
        self._a_cache: dict = {}

    @property
    def index_set(self) -> tuple:
        return self.cartan.labels

    def __repr__(self):
        kind = "M(inf)" if self.modified else "M"
        return f"<{kind}_c of type {self.cartan.name or self.cartan.n}, {self.style.value}>"

    # -- A monomials

    def A(self, i, k: int) -> Monomial:
        key = (i, k)
        a = self._a_cache.get(key)
        if a is None:
            a = self._a_cache[key] = self._build_a(i, k)
        return a

    def _build_a(self, i, k):
        C = self.cartan
        C.pos(i)
        exps = {}
        if self.style is Style.KASHIWARA:
            exps[(i, k)] = 1
            exps[(i, k + 1)] = exps.get((i, k + 1), 0) + 1
            for j in C.labels:
                if j != i and C[j, i] != 0:
                    key = (j, k + self.c[j, i])
                    exps[key] = exps.get(key, 0) + C[j, i]
        else:
            exps[(i, k)] = 1
            exps[(i, k + 2)] = 1
            for j in C.labels:
                if j != i and C[j, i] != 0:
                    exps[(j, k + 1)] = C[j, i]
        return Monomial(exps)

    # -- statistics

    def weight(self, M: Monomial) -> Weight:
        C = self.cartan
        w = [0] * C.n
        for (i, _), e in M.items():
            w[C.pos(i)] += e
        return tuple(w)

    def _row(self, M: Monomial, i) -> list:
        self.cartan.pos(i)
        row = M.row(i)
        if self.style is Style.NAKAJIMA and len({k % 2 for k, _ in row}) > 1:
            # A' moves Y(i,k) two steps at a time; k_e = max argmax - 1 relies on
            # row i sitting on one parity class
            raise MonomialError(f"row {i} of {M} mixes parities; use nakajima_y_lambda seeds")
        return row

    def _scan(self, M: Monomial, i):
        """Return ``(phi, k_f, k_e)``; ``k_f``/``k_e`` are None when f/e give 0.

        The prefix sum ``P(k) = sum_{j<=k} y_i(j)`` is piecewise constant, so
        scanning the support of row ``i`` is exact.
        """
        row = self._row(M, i)
        best, first_pt, last_seg = 0, None, 0
        total = 0
        for r, (k, e) in enumerate(row, start=1):
            total += e
            if total > best:
                best, first_pt, last_seg = total, k, r
            elif total == best:
                last_seg = r
        k_f = first_pt if best > 0 else None
        if last_seg == len(row):
            k_e = None
        else:
            k_e = row[last_seg][0] - 1
            if self.style is Style.NAKAJIMA:
                k_e -= 1
        return best, k_f, k_e

    def phi(self, M: Monomial, i) -> int:
        return self._scan(M, i)[0]

    def epsilon(self, M: Monomial, i) -> int:
        eps = self.phi(M, i) - self.weight(M)[self.cartan.pos(i)]
        assert eps == self.epsilon_remark(M, i), "epsilon formulas disagree"
        return eps

    def epsilon_remark(self, M: Monomial, i) -> int:
        """``max_k -sum_{j>k} y_i(j)``, computed from the suffix sums directly."""
        best = 0
        suffix = 0
        for _, e in reversed(M.row(i)):
            suffix += e
            best = max(best, -suffix)
        return best

    # -- operators

    def f(self, M: Monomial, i) -> Monomial | None:
        _, k_f, _ = self._scan(M, i)
        if k_f is None:
            return None
        return M * self.A(i, k_f).inverse()

    def e(self, M: Monomial, i) -> Monomial | None:
        _, _, k_e = self._scan(M, i)
        if k_e is None:
            return None
        return M * self.A(i, k_e)

    def k_f(self, M: Monomial, i):
        return self._scan(M, i)[1]

    def k_e(self, M: Monomial, i):
        return self._scan(M, i)[2]

    def y_lambda(self, lam: Weight) -> Monomial:
        return y_lambda(self.cartan, lam)

    def is_highest_weight(self, M: Monomial) -> bool:
        return all(self.e(M, i) is None for i in self.index_set)


class InfinityMonomialCrystal(MonomialCrystal):
    """Modified Nakajima monomials, the closure of ``1`` realizing B(infinity).

    Prefix sums are only taken at ``k >= 0`` (the monomials never carry a
    negative shift), which makes ``phi`` possibly negative and ``epsilon``
    nonnegative, as in B(infinity).
    """

    modified = True

    def __init__(self, cartan: CartanMatrix, c: CArray | None = None,
                 style: Style | None = None, check: bool = True):
        if style is Style.NAKAJIMA or (c is not None and c.style is Style.NAKAJIMA):
            # f at k = 0 on every node puts neighbouring rows on both parities
            raise MonomialError("the modified crystal is only defined for Kashiwara-style c-arrays")
        super().__init__(cartan, c, style, check)

    def highest_weight(self) -> Monomial:
        return Monomial.one()

    def _scan(self, M: Monomial, i):
        lo = M.min_shift()
        if lo is not None and lo < 0:
            raise MonomialError(f"{M} has a negative shift; not a modified monomial")
        row = self._row(M, i)
        # P(0) is the running value at k = 0, even when y_i(0) = 0
        total = 0
        r = 0
        if row and row[0][0] == 0:
            total = row[0][1]
            r = 1
        best, first_pt, last_seg = total, 0, r
        for idx in range(r, len(row)):
            k, e = row[idx]
            total += e
            if total > best:
                best, first_pt, last_seg = total, k, idx + 1
            elif total == best:
                last_seg = idx + 1
        if last_seg == len(row):
            k_e = None
        else:
            k_e = row[last_seg][0] - 1
            if self.style is Style.NAKAJIMA:
                k_e -= 1
        return best, first_pt, k_e

    def epsilon_remark(self, M: Monomial, i) -> int:
        best = 0
        suffix = 0
        row = M.row(i)
        for k, e in reversed(row):
            if k == 0:
                break
            suffix += e
            best = max(best, -suffix)
        return best

    def f_modified(self, M: Monomial, i) -> Monomial:
        return self.f(M, i)


def y_lambda(C: CartanMatrix, lam: Weight) -> Monomial:
    """``prod_i Y(i,0)^{<h_i, lam>}`` for a dominant weight ``lam``."""
    if len(lam) != C.n:
        raise CartanError("weight dimension does not match the Cartan matrix")
    if any(x < 0 for x in lam):
        raise CartanError(f"weight {lam} is not dominant")
    return Monomial({(i, 0): x for i, x in zip(C.labels, lam) if x})


def nakajima_y_lambda(C: CartanMatrix, lam: Weight) -> Monomial:
    """``prod_i Y(i, p(i))^{<h_i, lam>}`` with ``p`` the bipartite parity, for the ``A'`` convention."""
    parity = bipartite_parity(C)
    if parity is None:
        raise MonomialError("Nakajima's convention needs a diagram without odd cycles")
    return y_lambda(C, lam).shift_nodes(parity)


def hw_correspondence(M: Monomial, C: CartanMatrix, lam: Weight) -> Monomial:
    """``Y_lambda * M``: the monomial matching ``M (x) r_lambda`` in B(inf) (x) R_lambda."""
    return y_lambda(C, lam) * M


def shift(M: Monomial, s: int) -> Monomial:
    return M.shift(s)
