"""Independent reference computations used by the tests.

Nothing here calls into the library's crystal code: roots, dimensions,
prefix-sum statistics and factorizations are recomputed from the defining
formulas with plain dictionaries, Fractions, permutations or sympy.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod


# -- Weyl dimension formula ---------------------------------------------------

def _reflect(C, p, beta):
    h = sum(C[p][q] * beta[q] for q in range(len(C)))
    out = list(beta)
    out[p] -= h
    return tuple(out)


def positive_roots(C):
    n = len(C)
    seen = {tuple(int(q == p) for q in range(n)) for p in range(n)}
    todo = list(seen)
    while todo:
        beta = todo.pop()
        for p in range(n):
            g = _reflect(C, p, beta)
            if min(g) >= 0 and g not in seen:
                seen.add(g)
                todo.append(g)
    return sorted(seen)


def symmetrizer(C):
    """Diagonal ``d`` with ``d_i C_ij = d_j C_ji``, by fixed-point relaxation (connected C)."""
    n = len(C)
    d = [None] * n
    d[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for a in range(n):
            for b in range(n):
                if d[a] is not None and d[b] is None and C[a][b] != 0:
                    d[b] = d[a] * C[a][b] / C[b][a]
                    changed = True
    return d


def weyl_dimension(C, lam):
    """``prod_{beta>0} (lam + rho, beta) / (rho, beta)`` with the symmetrized form.

    ``(Lambda_i, alpha_j) = delta_ij d_j``, so ``(lam, beta) = sum_j lam_j beta_j d_j``.
    """
    d = symmetrizer(C)
    num = []
    den = []
    for beta in positive_roots(C):
        num.append(sum((lam[j] + 1) * beta[j] * d[j] for j in range(len(C))))
        den.append(sum(beta[j] * d[j] for j in range(len(C))))
    val = Fraction(prod(num), prod(den))
    assert val.denominator == 1
    return int(val)


# -- monomial statistics from the definitions ---------------------------------

def a_monomial(C, labels, c, i, k, nakajima=False):
    """``A_{i,k}`` as a dict, straight from the displayed formula."""
    pos = {lab: p for p, lab in enumerate(labels)}
    out = {}

    def bump(key, e):
        out[key] = out.get(key, 0) + e
        if out[key] == 0:
            del out[key]

    if nakajima:
        bump((i, k), 1)
        bump((i, k + 2), 1)
        for j in labels:
            if j != i and C[pos[j]][pos[i]]:
                bump((j, k + 1), C[pos[j]][pos[i]])
    else:
        bump((i, k), 1)
        bump((i, k + 1), 1)
        for j in labels:
            if j != i and C[pos[j]][pos[i]]:
                bump((j, k + c[(j, i)]), C[pos[j]][pos[i]])
    return out


def mul(x, y, power=1):
    out = dict(x)
    for key, e in y.items():
        out[key] = out.get(key, 0) + power * e
        if out[key] == 0:
            del out[key]
    return out


def _prefix(exps, i, ks):
    return [sum(e for (a, j), e in exps.items() if a == i and j <= k) for k in ks]


def _window(exps, margin=3):
    ks = [k for (_, k) in exps] or [0]
    return list(range(min(ks) - margin, max(ks) + margin + 1))


def stats(exps, i, modified=False):
    """``(phi, eps, k_f, k_e)`` by evaluating prefix sums on an explicit window of k.

    Outside the support the prefix sum is constant, so a window with margins
    on both sides sees every value; ``k_e`` at the right edge means "attained
    forever", i.e. ``e`` is 0.
    """
    ks = _window(exps)
    if modified:
        ks = [k for k in ks if k >= 0] or [0]
        ks = list(range(0, max(ks) + 4))
    P = _prefix(exps, i, ks)
    if modified:
        phi = max(P)
    else:
        phi = max(P + [0])
    wt = sum(e for (a, _), e in exps.items() if a == i)
    eps = phi - wt
    hits = [k for k, p in zip(ks, P) if p == phi]
    if modified:
        k_f = hits[0]
    else:
        k_f = hits[0] if phi > 0 else None
    k_e = None if hits[-1] == ks[-1] else hits[-1]
    return phi, eps, k_f, k_e


def eps_remark(exps, i, modified=False):
    ks = _window(exps)
    if modified:
        ks = list(range(0, max(max(ks), 0) + 4))
    return max(-sum(e for (a, j), e in exps.items() if a == i and j > k) for k in ks)


def f_op(C, labels, c, exps, i, modified=False):
    _, _, k_f, _ = stats(exps, i, modified)
    if k_f is None:
        return None
    return mul(exps, a_monomial(C, labels, c, i, k_f), -1)


def e_op(C, labels, c, exps, i, modified=False):
    _, _, _, k_e = stats(exps, i, modified)
    if k_e is None:
        return None
    return mul(exps, a_monomial(C, labels, c, i, k_e))


# -- type A factorization -----------------------------------------------------

def a_exponents_by_solve(exps, n):
    """Solve ``M = prod A_{i,q}^{-a_{i,q}}`` (0 <= q <= n-i) as a linear system with sympy."""
    import sympy

    labels = list(range(1, n + 1))
    C = [[2 if a == b else (-1 if abs(a - b) == 1 else 0) for b in labels] for a in labels]
    c = {(a, b): int(a < b) for a in labels for b in labels if a != b}
    unknowns = [(i, q) for i in labels for q in range(0, n - i + 1)]
    cols = [a_monomial(C, labels, c, i, q) for i, q in unknowns]
    keys = sorted(set(exps) | {key for col in cols for key in col})
    A = sympy.Matrix([[-col.get(key, 0) for col in cols] for key in keys])
    b = sympy.Matrix([exps.get(key, 0) for key in keys])
    sol, params = A.gauss_jordan_solve(b)
    assert params.shape[0] == 0, "factorization is not unique"
    return {u: int(v) for u, v in zip(unknowns, sol)}


# -- beta sequences by permutations -------------------------------------------

def beta_sequence_perm(n, word):
    """Roots ``e_a - e_b`` as intervals ``(a, b-1)``, acting by transpositions on positions."""
    out = []
    for t, it in enumerate(word):
        a, b = it, it + 1
        for s in reversed(word[:t]):
            swap = {s: s + 1, s + 1: s}
            a, b = swap.get(a, a), swap.get(b, b)
        if a > b:
            return None
        out.append((a, b - 1))
    return out
