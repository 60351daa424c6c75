"""Breadth-first crystal generation, DOT/JSON export and crystal isomorphism.

Any object exposing ``index_set``, ``f(x, i)``, ``e(x, i)`` and ``weight(x)``
can be used as a crystal here: monomial crystals, the Kostant partition
crystal and virtual crystals all qualify.
"""

from __future__ import annotations

import json
import os
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

DEFAULT_CAP = int(os.environ.get("NAKAJIMA_NODE_CAP", 1_000_000))


class GraphError(ValueError):
    pass


@dataclass
class CrystalGraph:
    index_set: tuple
    nodes: list = field(default_factory=list)
    weights: dict = field(default_factory=dict)
    depth_of: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)  # (src index, label, dst index), f-direction
    seeds: tuple = ()
    truncated: bool = False
    depth: int | None = None
    cap_exceeded: bool = False

    def __post_init__(self):
        self._index = {x: n for n, x in enumerate(self.nodes)}

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, x):
        return x in self._index

    def index(self, x) -> int:
        return self._index[x]

    def _add(self, x, wt, d):
        self._index[x] = len(self.nodes)
        self.nodes.append(x)
        self.weights[x] = wt
        self.depth_of[x] = d

    def f_map(self) -> dict:
        """``{(src, i): dst}`` over node objects."""
        return {(self.nodes[s], i): self.nodes[t] for s, i, t in self.edges}

    def e_map(self) -> dict:
        return {(self.nodes[t], i): self.nodes[s] for s, i, t in self.edges}

    def edge_set(self) -> set:
        return {(self.nodes[s], i, self.nodes[t]) for s, i, t in self.edges}

    def levels(self) -> dict:
        out: dict = {}
        for x in self.nodes:
            out.setdefault(self.depth_of[x], []).append(x)
        return out

    def string_lengths(self, x, i) -> tuple[int, int]:
        """``(epsilon_i, phi_i)`` read off the i-string through ``x`` in the graph."""
        fm, em = self._maps()
        eps = 0
        y = x
        while (y, i) in em:
            y = em[(y, i)]
            eps += 1
        phi = 0
        y = x
        while (y, i) in fm:
            y = fm[(y, i)]
            phi += 1
        return eps, phi

    def _maps(self):
        cache = self.__dict__.get("_map_cache")
        if cache is None or cache[0] != len(self.edges):
            cache = (len(self.edges), self.f_map(), self.e_map())
            self.__dict__["_map_cache"] = cache
        return cache[1], cache[2]

    def to_json(self, fmt: Callable = str, fmt_weight: Callable = list) -> dict:
        return {
            "nodes": [{"id": n, "monomial": fmt(x), "weight": fmt_weight(self.weights[x])}
                      for n, x in enumerate(self.nodes)],
            "edges": [[s, i, t] for s, i, t in self.edges],
            "truncated": self.truncated,
        }


def generate(crystal, seeds, depth: int | None = None, cap: int = DEFAULT_CAP,
             ops: str = "f", unbounded: bool = False) -> CrystalGraph:
    """BFS closure of ``seeds`` under ``f_i`` (``ops="f"``) or ``e_i, f_i`` (``ops="ef"``).

    ``depth`` bounds the number of operator applications from the seeds.  An
    unbounded run must be requested explicitly with ``unbounded=True``; the
    node cap still applies, and hitting it marks the graph truncated with
    ``cap_exceeded`` set.
    """
    if depth is None and not unbounded:
        raise GraphError("pass a depth bound, or unbounded=True for a finite crystal")
    if ops not in ("f", "ef"):
        raise GraphError(f"unknown operator set {ops!r}")
    if not isinstance(seeds, (list, tuple)):
        seeds = [seeds]
    I = tuple(crystal.index_set)
    G = CrystalGraph(I, seeds=tuple(seeds), depth=depth)
    queue = deque()
    for s in seeds:
        if s not in G:
            G._add(s, crystal.weight(s), 0)
            queue.append(s)
    edges = set()
    while queue:
        x = queue.popleft()
        d = G.depth_of[x]
        moves = [(i, crystal.f(x, i), True) for i in I]
        if ops == "ef":
            moves += [(i, crystal.e(x, i), False) for i in I]
        for i, y, forward in moves:
            if y is None:
                continue
            if y not in G:
                if depth is not None and d >= depth:
                    G.truncated = True
                    continue
                if len(G.nodes) >= cap:
                    G.truncated = True
                    G.cap_exceeded = True
                    continue
                G._add(y, crystal.weight(y), d + 1)
                queue.append(y)
            edge = (G.index(x), i, G.index(y)) if forward else (G.index(y), i, G.index(x))
            edges.add(edge)
    order = {i: n for n, i in enumerate(I)}
    G.edges = sorted(edges, key=lambda e: (e[0], order[e[1]], e[2]))
    return G


# -- export -------------------------------------------------------------------

def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(G: CrystalGraph, fmt: Callable = str, name: str = "crystal") -> str:
    lines = [f"digraph {name} {{"]
    for n, x in enumerate(G.nodes):
        lines.append(f'  n{n} [label="{_dot_escape(fmt(x))}"];')
    for s, i, t in G.edges:
        lines.append(f'  n{s} -> n{t} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r'^\s*(n\d+)\s*\[label="((?:[^"\\]|\\.)*)"\];\s*$')
_DOT_EDGE = re.compile(r'^\s*(n\d+)\s*->\s*(n\d+)\s*\[label="([^"]*)"\];\s*$')


def parse_dot(text: str) -> tuple[dict, set]:
    """Read back DOT written by ``export_dot``: ``({id: label}, {(src, i, dst)})``."""
    labels, edges = {}, set()
    for line in text.splitlines():
        m = _DOT_NODE.match(line)
        if m:
            labels[m.group(1)] = m.group(2).replace('\\"', '"').replace("\\\\", "\\")
            continue
        m = _DOT_EDGE.match(line)
        if m:
            edges.add((labels[m.group(1)], m.group(3), labels[m.group(2)]))
    return labels, edges


def export_json(G: CrystalGraph, fmt: Callable = str, fmt_weight: Callable = list) -> str:
    return json.dumps(G.to_json(fmt, fmt_weight), indent=1)


# -- isomorphism --------------------------------------------------------------

def _components(G: CrystalGraph) -> list[list[int]]:
    adj: dict = {n: set() for n in range(len(G.nodes))}
    for s, _, t in G.edges:
        adj[s].add(t)
        adj[t].add(s)
    seen, comps = set(), []
    for start in range(len(G.nodes)):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


def crystal_isomorphic(G1: CrystalGraph, G2: CrystalGraph, label_map: dict | None = None,
                       weight_map: Callable | None = None) -> dict | None:
    """A label- and weight-preserving bijection ``G1.nodes -> G2.nodes``, or None.

    ``label_map`` sends labels of ``G1`` to labels of ``G2`` (required when the
    index sets differ); ``weight_map`` sends ``G1`` weights into ``G2``'s
    weight coordinates (identity by default).  Each connected component of
    ``G1`` is anchored at its first node and matched against candidates with
    the same weight and string profile; the rest of the component is forced.
    """
    if label_map is None:
        if tuple(G1.index_set) != tuple(G2.index_set):
            raise GraphError("index sets differ; supply label_map")
        label_map = {i: i for i in G1.index_set}
    if len(G1) != len(G2) or len(G1.edges) != len(G2.edges):
        return None
    I1 = tuple(G1.index_set)
    f1 = {(s, i): t for s, i, t in G1.edges}
    e1 = {(t, i): s for s, i, t in G1.edges}
    f2 = {(s, i): t for s, i, t in G2.edges}
    e2 = {(t, i): s for s, i, t in G2.edges}

    def profile2(n):
        x = G2.nodes[n]
        strings = tuple(sorted((i, G2.string_lengths(x, i)) for i in G2.index_set))
        return G2.weights[x], strings

    def profile1(n):
        x = G1.nodes[n]
        wt = G1.weights[x] if weight_map is None else weight_map(G1.weights[x])
        strings = tuple(sorted((label_map[i], G1.string_lengths(x, i)) for i in I1))
        return wt, strings

    prof2_of = {n: profile2(n) for n in range(len(G2.nodes))}
    by_profile: dict = {}
    for n, key in prof2_of.items():
        by_profile.setdefault(key, []).append(n)

    def extend(anchor, cand, used):
        mapping = {anchor: cand}
        taken = {cand}
        stack = [anchor]
        while stack:
            a = stack.pop()
            b = mapping[a]
            for i in I1:
                j = label_map[i]
                for m1, m2 in ((f1, f2), (e1, e2)):
                    a2 = m1.get((a, i))
                    b2 = m2.get((b, j))
                    if (a2 is None) != (b2 is None):
                        return None
                    if a2 is None:
                        continue
                    if a2 in mapping:
                        if mapping[a2] != b2:
                            return None
                    else:
                        if b2 in used or b2 in taken:
                            return None
                        mapping[a2] = b2
                        taken.add(b2)
                        stack.append(a2)
        if any(profile1(a) != prof2_of[b] for a, b in mapping.items()):
            return None
        return mapping

    comps = _components(G1)

    def search(ci, used, acc):
        if ci == len(comps):
            return acc
        anchor = comps[ci][0]
        for cand in by_profile.get(profile1(anchor), []):
            if cand in used:
                continue
            mapping = extend(anchor, cand, used)
            if mapping is None or len(mapping) != len(comps[ci]):
                continue
            res = search(ci + 1, used | set(mapping.values()), {**acc, **mapping})
            if res is not None:
                return res
        return None

    found = search(0, frozenset(), {})
    if found is None:
        return None
    return {G1.nodes[a]: G2.nodes[b] for a, b in found.items()}


# -- Stembridge axioms --------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def stembridge_check(G: CrystalGraph, cartan, max_failures: int = 20) -> AxiomReport:
    """Check Stembridge's local axioms on a complete simply-laced crystal graph.

    String lengths are read from the graph itself, so the check does not rely
    on the operator formulas that produced it.
    """
    if G.truncated:
        raise GraphError("Stembridge axioms need a complete (non-truncated) graph")
    for i in cartan.labels:
        for j in cartan.labels:
            if i != j and cartan[i, j] not in (0, -1):
                raise GraphError("Stembridge axioms apply to simply-laced types only")
    fm, em = G._maps()
    I = tuple(G.index_set)
    eps = {(x, i): G.string_lengths(x, i)[0] for x in G.nodes for i in I}
    phi = {(x, i): G.string_lengths(x, i)[1] for x in G.nodes for i in I}
    failures = []
    checked = 0

    def fail(msg):
        failures.append(msg)

    def e(x, i):
        return em.get((x, i)) if x is not None else None

    def f(x, i):
        return fm.get((x, i)) if x is not None else None

    def e_word(x, word):
        for i in word:
            x = e(x, i)
        return x

    def f_word(x, word):
        for i in word:
            x = f(x, i)
        return x

    for x in G.nodes:
        for i in I:
            for j in I:
                if i == j:
                    continue
                cij = cartan[i, j]
                checked += 1
                y = e(x, i)
                if y is not None:
                    # Stembridge's delta is -epsilon
                    d_eps = eps[(x, j)] - eps[(y, j)]
                    d_phi = phi[(y, j)] - phi[(x, j)]
                    if d_eps not in (0, -1) or d_phi not in (0, -1) or d_eps + d_phi != cij:
                        fail(f"P2/P3 at {x} (i={i}, j={j}): {d_eps}, {d_phi}")
                z = f(x, i)
                if z is not None:
                    n_eps = eps[(z, j)] - eps[(x, j)]
                    n_phi = phi[(x, j)] - phi[(z, j)]
                    if n_eps not in (0, -1) or n_phi not in (0, -1) or n_eps + n_phi != cij:
                        fail(f"P2'/P3' at {x} (i={i}, j={j}): {n_eps}, {n_phi}")
                if e(x, i) is not None and e(x, j) is not None:
                    d_ij = eps[(x, j)] - eps[(e(x, i), j)]
                    d_ji = eps[(x, i)] - eps[(e(x, j), i)]
                    if d_ij == 0:
                        y1 = e_word(x, (i, j))
                        y2 = e_word(x, (j, i))
                        if y1 is None or y1 != y2:
                            fail(f"P5 at {x} (i={i}, j={j})")
                        elif phi[(y1, i)] - phi[(f(y1, j), i)] != 0:
                            fail(f"P5 nabla at {x} (i={i}, j={j})")
                    elif d_ij == -1 and d_ji == -1:
                        y1 = e_word(x, (i, j, j, i))
                        y2 = e_word(x, (j, i, i, j))
                        if y1 is None or y1 != y2:
                            fail(f"P6 at {x} (i={i}, j={j})")
                        elif (phi[(y1, j)] - phi[(f(y1, i), j)] != -1
                              or phi[(y1, i)] - phi[(f(y1, j), i)] != -1):
                            fail(f"P6 nabla at {x} (i={i}, j={j})")
                if f(x, i) is not None and f(x, j) is not None:
                    n_ij = phi[(x, j)] - phi[(f(x, i), j)]
                    n_ji = phi[(x, i)] - phi[(f(x, j), i)]
                    if n_ij == 0:
                        y1 = f_word(x, (i, j))
                        y2 = f_word(x, (j, i))
                        if y1 is None or y1 != y2:
                            fail(f"P5' at {x} (i={i}, j={j})")
                        elif eps[(y1, i)] - eps[(e(y1, j), i)] != 0:
                            fail(f"P5' nabla at {x} (i={i}, j={j})")
                    elif n_ij == -1 and n_ji == -1:
                        y1 = f_word(x, (i, j, j, i))
                        y2 = f_word(x, (j, i, i, j))
                        if y1 is None or y1 != y2:
                            fail(f"P6' at {x} (i={i}, j={j})")
                        elif (eps[(y1, j)] - eps[(e(y1, i), j)] != -1
                              or eps[(y1, i)] - eps[(e(y1, j), i)] != -1):
                            fail(f"P6' nabla at {x} (i={i}, j={j})")
                if len(failures) >= max_failures:
                    return AxiomReport(False, checked, failures)
    return AxiomReport(not failures, checked, failures)


def check_graph_invariants(G: CrystalGraph, crystal, simple_root: Callable) -> list[str]:
    """Degree bounds and the weight drop ``wt(f_i x) = wt(x) - alpha_i`` on every edge."""
    problems = []
    out_deg: dict = {}
    in_deg: dict = {}
    for s, i, t in G.edges:
        out_deg[(s, i)] = out_deg.get((s, i), 0) + 1
        in_deg[(t, i)] = in_deg.get((t, i), 0) + 1
        ws, wt = G.weights[G.nodes[s]], G.weights[G.nodes[t]]
        alpha = simple_root(i)
        if tuple(a - b for a, b in zip(ws, alpha)) != tuple(wt):
            problems.append(f"weight drop fails on edge {G.nodes[s]} -{i}-> {G.nodes[t]}")
    problems += [f"out-degree {d} at node {s} label {i}" for (s, i), d in out_deg.items() if d > 1]
    problems += [f"in-degree {d} at node {t} label {i}" for (t, i), d in in_deg.items() if d > 1]
    return problems


def graph_from_edges(index_set: Iterable, nodes: list, weights: dict, edges: Iterable) -> CrystalGraph:
    """Assemble a graph from explicit data (node objects, ``(x, i, y)`` edges)."""
    G = CrystalGraph(tuple(index_set))
    for x in nodes:
        G._add(x, weights[x], 0)
    G.edges = sorted((G.index(x), i, G.index(y)) for x, i, y in edges)
    return G
