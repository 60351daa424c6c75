"""Virtualization of monomial crystals along a diagram folding.

Given a folding ``phi: Ihat -> I`` with scaling factors ``gamma`` and
compatible c-arrays, the map

    v(Y(i,k)) = prod_{i' in phi^{-1}(i)} Yhat(i',k)^{gamma_i}

sends ``M_c`` into ``M_chat`` of the target type, intertwining ``f_i`` with
the virtual operator ``prod_{i'} fhat_{i'}^{gamma_i}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .cartan import (
    CartanError, CartanMatrix, FoldingSpec, cartan_type, identity_folding, phi_tilde,
    phi_tilde_inverse, solve_gamma, validate_folding,
)
from .graph import DEFAULT_CAP, generate
from .monomial import CArray, Monomial, MonomialCrystal, Style


class NotInVirtualCrystal(ValueError):
    """The target element is not in the virtual crystal (divisibility or fiber mismatch)."""


# -- compatibility ------------------------------------------------------------

def check_compatible(c: CArray, c_hat: CArray, spec: FoldingSpec) -> list[tuple]:
    """Violations ``(i', j', i, j)`` of ``chat[i',j'] = c[i,j]`` over adjacent pairs."""
    C, Ch = spec.source, spec.target
    phi = spec.phi_map
    out = []
    for ip in Ch.labels:
        for jp in Ch.labels:
            if ip == jp or not Ch.adjacent(ip, jp):
                continue
            i, j = phi[ip], phi[jp]
            if i == j or not C.adjacent(i, j):
                continue
            if c_hat[ip, jp] != c[i, j]:
                out.append((ip, jp, i, j))
    return out


def compatible_c_hat(spec: FoldingSpec, c: CArray) -> CArray:
    """A target c-array compatible with ``c``: copied on adjacent pairs, ``i' < j'`` elsewhere."""
    C, Ch = spec.source, spec.target
    phi = spec.phi_map
    vals = {}
    for pa, ip in enumerate(Ch.labels):
        for pb, jp in enumerate(Ch.labels):
            if ip == jp:
                continue
            i, j = phi[ip], phi[jp]
            if Ch.adjacent(ip, jp) and i != j and C.adjacent(i, j):
                vals[(ip, jp)] = c[i, j]
            else:
                vals[(ip, jp)] = int(pa < pb)
    return CArray.from_dict(vals)


# -- context ------------------------------------------------------------------

@dataclass(frozen=True)
class VirtualContext:
    spec: FoldingSpec
    c: CArray
    c_hat: CArray
    name: str = ""
    source_crystal: MonomialCrystal = field(init=False, repr=False, compare=False)
    target_crystal: MonomialCrystal = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.spec.gamma is None:
            raise CartanError("folding has no scaling factors; see solve_gamma")
        if self.c.style is not self.c_hat.style:
            raise CartanError("source and target c-arrays use different styles")
        object.__setattr__(self, "source_crystal", MonomialCrystal(self.spec.source, self.c))
        object.__setattr__(self, "target_crystal", MonomialCrystal(self.spec.target, self.c_hat))

    @property
    def style(self) -> Style:
        return self.c.style

    def problems(self) -> list[str]:
        out = list(validate_folding(self.spec).problems)
        # Nakajima's A' convention makes compatibility automatic
        if self.style is Style.KASHIWARA:
            out += [f"chat[{ip},{jp}] != c[{i},{j}]"
                    for ip, jp, i, j in check_compatible(self.c, self.c_hat, self.spec)]
        return out

    def check(self) -> "VirtualContext":
        bad = self.problems()
        if bad:
            raise CartanError("invalid virtualization context: " + "; ".join(bad))
        return self

    def nakajima(self) -> "VirtualContext":
        """The same folding with Nakajima's ``A'`` convention on both sides."""
        return VirtualContext(self.spec, CArray.nakajima(self.spec.source),
                              CArray.nakajima(self.spec.target), self.name + " (A')")


def v_map(M: Monomial, ctx: VirtualContext) -> Monomial:
    spec = ctx.spec
    exps = {}
    for (i, k), e in M.items():
        for ip in spec.fibers[i]:
            exps[(ip, k)] = spec.gamma[i] * e
    return Monomial(exps)


def v_inverse(Mhat: Monomial, ctx: VirtualContext) -> Monomial | None:
    """Preimage under ``v``, or None when ``Mhat`` is not in its image."""
    spec = ctx.spec
    exps = {}
    for i, fib in spec.fibers.items():
        rows = [dict(Mhat.row(ip)) for ip in fib]
        if any(r != rows[0] for r in rows[1:]):
            return None
        for k, e in rows[0].items():
            if e % spec.gamma[i]:
                return None
            exps[(i, k)] = e // spec.gamma[i]
    out = Monomial(exps)
    return out if v_map(out, ctx) == Mhat else None


@dataclass
class LemmaReport:
    ok: bool
    lhs: Monomial
    rhs: Monomial

    def __bool__(self):
        return self.ok


def check_lemma_A(ctx: VirtualContext, i, k: int) -> LemmaReport:
    """Compare ``v(A_{i,k})`` with ``prod_{i'} Ahat_{i',k}^{gamma_i}``."""
    lhs = v_map(ctx.source_crystal.A(i, k), ctx)
    rhs = Monomial.one()
    for ip in ctx.spec.fibers[i]:
        rhs = rhs * ctx.target_crystal.A(ip, k) ** ctx.spec.gamma[i]
    return LemmaReport(lhs == rhs, lhs, rhs)


# -- virtual operators --------------------------------------------------------

def _apply(op: Callable, Mhat: Monomial, i, ctx: VirtualContext, order=None):
    fib = ctx.spec.fibers[i] if order is None else order
    x = Mhat
    for ip in fib:
        for _ in range(ctx.spec.gamma[i]):
            x = op(x, ip)
            if x is None:
                return None
    return x


def virtual_f(Mhat: Monomial, i, ctx: VirtualContext, order=None) -> Monomial | None:
    return _apply(ctx.target_crystal.f, Mhat, i, ctx, order)


def virtual_e(Mhat: Monomial, i, ctx: VirtualContext, order=None) -> Monomial | None:
    return _apply(ctx.target_crystal.e, Mhat, i, ctx, order)


def _fiber_quotient(values: dict, g: int, what: str, i) -> int:
    vals = set(values.values())
    if len(vals) != 1:
        raise NotInVirtualCrystal(f"{what}_{i} differs across the fiber: {values}")
    v = vals.pop()
    if v % g:
        raise NotInVirtualCrystal(f"{what}_{i} = {v} is not divisible by gamma_{i} = {g}")
    return v // g


def virtual_weight(Mhat: Monomial, ctx: VirtualContext) -> tuple:
    w = phi_tilde_inverse(ctx.spec, ctx.target_crystal.weight(Mhat))
    if w is None:
        raise NotInVirtualCrystal(f"weight of {Mhat} is outside the image of phi~")
    return w


def virtual_stats(Mhat: Monomial, i, ctx: VirtualContext) -> tuple[int, int, tuple]:
    """``(eps^v_i, phi^v_i, wt^v)`` of a target monomial in the virtual crystal."""
    T = ctx.target_crystal
    g = ctx.spec.gamma[i]
    fib = ctx.spec.fibers[i]
    eps = _fiber_quotient({ip: T.epsilon(Mhat, ip) for ip in fib}, g, "epsilon", i)
    phi = _fiber_quotient({ip: T.phi(Mhat, ip) for ip in fib}, g, "phi", i)
    return eps, phi, virtual_weight(Mhat, ctx)


class VirtualCrystal:
    """The virtual crystal structure on target monomials, indexed by source nodes."""

    def __init__(self, ctx: VirtualContext):
        self.ctx = ctx

    @property
    def index_set(self) -> tuple:
        return self.ctx.spec.source.labels

    def f(self, x, i):
        return virtual_f(x, i, self.ctx)

    def e(self, x, i):
        return virtual_e(x, i, self.ctx)

    def weight(self, x):
        return virtual_weight(x, self.ctx)

    def epsilon(self, x, i):
        return virtual_stats(x, i, self.ctx)[0]

    def phi(self, x, i):
        return virtual_stats(x, i, self.ctx)[1]


# -- end-to-end check ---------------------------------------------------------

@dataclass
class VirtualizationReport:
    ok: bool
    nodes: int
    checks: int
    truncated: bool
    counterexample: str | None = None
    graph: object = None
    images: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        s = f"{status}: {self.nodes} nodes, {self.checks} checks"
        if self.truncated:
            s += " (depth-bounded)"
        if self.counterexample:
            s += f"; first counterexample: {self.counterexample}"
        return s


def verify_virtualization(seed: Monomial, ctx: VirtualContext, depth: int | None = None,
                          cap: int = DEFAULT_CAP) -> VirtualizationReport:
    """Generate the source crystal from ``seed`` and check that ``v`` intertwines everything.

    With ``depth=None`` the full (finite) crystal is generated.  Counterexamples
    are reported for the first failing node in BFS order.
    """
    S = ctx.source_crystal
    G = generate(S, [seed], depth=depth, cap=cap, unbounded=depth is None)
    checks = 0
    images = {}
    for M in G.nodes:
        vM = v_map(M, ctx)
        images[M] = vM
        problems = []
        checks += 1
        if phi_tilde(ctx.spec, S.weight(M)) != ctx.target_crystal.weight(vM):
            problems.append("weight")
        for i in S.index_set:
            checks += 1
            fM, eM = S.f(M, i), S.e(M, i)
            want_f = None if fM is None else v_map(fM, ctx)
            want_e = None if eM is None else v_map(eM, ctx)
            if virtual_f(vM, i, ctx) != want_f:
                problems.append(f"f_{i}")
            if virtual_e(vM, i, ctx) != want_e:
                problems.append(f"e_{i}")
            try:
                eps, phi, _ = virtual_stats(vM, i, ctx)
                if (eps, phi) != (S.epsilon(M, i), S.phi(M, i)):
                    problems.append(f"eps/phi_{i}")
            except NotInVirtualCrystal as exc:
                problems.append(str(exc))
        if problems:
            return VirtualizationReport(False, len(G), checks, G.truncated,
                                        f"{M}: {', '.join(problems)}", G, images)
    return VirtualizationReport(True, len(G), checks, G.truncated, None, G, images)


# -- registry -----------------------------------------------------------------

def _c_from_rows(C: CartanMatrix, rows) -> CArray:
    return CArray.from_matrix(C, rows)


def _c2_a3():
    C2, A3 = cartan_type("C2"), cartan_type("A3")
    spec = FoldingSpec(C2, A3, {1: (1, 3), 2: (2,)}, name="C2-A3")
    spec = spec.with_gamma(solve_gamma(spec))
    c = _c_from_rows(C2, [[0, 0], [1, 0]])
    c_hat = _c_from_rows(A3, [[0, 0, 0], [1, 0, 1], [1, 0, 0]])
    return VirtualContext(spec, c, c_hat, "C2-A3")


def _b2_a3():
    B2, A3 = cartan_type("B2"), cartan_type("A3")
    spec = FoldingSpec(B2, A3, {1: (1, 3), 2: (2,)}, name="B2-A3")
    spec = spec.with_gamma(solve_gamma(spec))
    c = CArray.standard(B2)
    return VirtualContext(spec, c, compatible_c_hat(spec, c), "B2-A3")


def _f4_e6():
    F4, E6 = cartan_type("F4"), cartan_type("E6")
    spec = FoldingSpec(F4, E6, {1: (1, 6), 2: (3, 5), 3: (4,), 4: (2,)}, name="F4-E6")
    spec = spec.with_gamma(solve_gamma(spec))
    c_hat = _c_from_rows(E6, [[0, 1, 1, 1, 1, 1], [0, 0, 1, 0, 1, 1], [0, 0, 0, 1, 1, 1],
                              [0, 1, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]])
    return VirtualContext(spec, CArray.standard(F4), c_hat, "F4-E6")


def _g2_d4():
    G2, D4 = cartan_type("G2"), cartan_type("D4")
    spec = FoldingSpec(G2, D4, {1: (2,), 2: (1, 3, 4)}, name="G2-D4")
    spec = spec.with_gamma(solve_gamma(spec))
    c = CArray.standard(G2)
    return VirtualContext(spec, c, compatible_c_hat(spec, c), "G2-D4")


def _c3a_d5a():
    C, D = cartan_type("C3~"), cartan_type("D5~")
    spec = FoldingSpec(C, D, {0: (0, 1), 1: (2,), 2: (3,), 3: (4, 5)}, name="C3~-D5~")
    spec = spec.with_gamma(solve_gamma(spec))
    return VirtualContext(spec, CArray.standard(C), CArray.standard(D), "C3~-D5~")


FOLDINGS: dict[str, Callable[[], VirtualContext]] = {
    "C2-A3": _c2_a3,
    "B2-A3": _b2_a3,
    "F4-E6": _f4_e6,
    "G2-D4": _g2_d4,
    "C3~-D5~": _c3a_d5a,
}


def folding(name: str) -> VirtualContext:
    """Look up a shipped folding; ``"identity:A3"`` gives the trivial folding of a type."""
    if name.startswith("identity:"):
        C = cartan_type(name.split(":", 1)[1])
        c = CArray.standard(C)
        return VirtualContext(identity_folding(C), c, c, name)
    try:
        return FOLDINGS[name]()
    except KeyError:
        raise CartanError(f"unknown folding {name!r}; known: {', '.join(FOLDINGS)}") from None
