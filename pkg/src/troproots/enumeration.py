"""Stable graphs of genus ``g`` with ``n`` legs and the ranked poset they form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graphs import (Graph, Isomorphism, Specialization, canonical_form,
                     contract, single_vertex_graph)


def _check_range(g: int, n: int):
    if g < 0 or n < 0:
        raise ValueError("genus and number of legs must be nonnegative")
    if 2 * g - 2 + n <= 0:
        raise ValueError(f"no stable graphs with g={g}, n={n} (need 2g-2+n > 0)")


def uncontractions(G: Graph):
    """Graphs with one more edge that contract onto ``G`` along that edge.

    Both moves keep every vertex stable: a weight-``w`` vertex may trade one
    unit of weight for a loop, or split into two vertices joined by a new
    edge, sharing out its weight, half-edges and legs.
    """
    for v in range(G.num_vertices):
        if G.weights[v] >= 1:
            weights = list(G.weights)
            weights[v] -= 1
            yield Graph(weights, list(G.edges) + [(v, v)], G.legs, check=False)

    for v in range(G.num_vertices):
        here = G.half_edges_at(v)
        my_legs = [i for i, u in enumerate(G.legs) if u == v]
        u = G.num_vertices
        w = G.weights[v]
        for side in itertools.product((0, 1), repeat=len(here)):
            for leg_side in itertools.product((0, 1), repeat=len(my_legs)):
                val_u = sum(side) + 1
                val_v = len(here) - sum(side) + 1
                legs_u = sum(leg_side)
                legs_v = len(my_legs) - legs_u
                for wu in range(w + 1):
                    wv = w - wu
                    if 2 * wv - 2 + val_v + legs_v <= 0 or 2 * wu - 2 + val_u + legs_u <= 0:
                        continue
                    edges = [list(e) for e in G.edges]
                    for h, s in zip(here, side):
                        if s:
                            edges[h >> 1][h & 1] = u
                    edges.append([v, u])
                    legs = list(G.legs)
                    for i, s in zip(my_legs, leg_side):
                        if s:
                            legs[i] = u
                    weights = list(G.weights) + [wu]
                    weights[v] = wv
                    yield Graph(weights, edges, legs, check=False)


def enumerate_stable_graphs(g: int, n: int) -> list[Graph]:
    """One canonical representative per isomorphism class of stable genus-``g``
    graphs with ``n`` legs, ordered by (number of edges, canonical key)."""
    _check_range(g, n)
    start_key, start = canonical_form(single_vertex_graph(g, n))
    layer = {start_key: start.target}
    found = [(0, start_key, start.target)]
    rank = 0
    while layer:
        rank += 1
        nxt = {}
        for G in layer.values():
            for H in uncontractions(G):
                key, iso = canonical_form(H)
                if key not in nxt:
                    nxt[key] = iso.target
        found += [(rank, k, nxt[k]) for k in sorted(nxt)]
        layer = nxt
    return [G for _, _, G in found]


@dataclass(frozen=True)
class Cover:
    upper: int
    lower: int
    edge: int
    specialization: Specialization = field(compare=False)


class GraphPoset:
    """The poset of stable graphs ordered by specialization, ranked by |E|."""

    def __init__(self, genus: int, legs: int, elements: list[Graph]):
        self.genus = genus
        self.legs = legs
        self.elements = elements
        self.index = {canonical_form(G)[0]: i for i, G in enumerate(elements)}
        # (upper, edge) -> (lower, specialization onto the canonical lower graph)
        self.contractions: dict[tuple[int, int], tuple[int, Specialization]] = {}
        self.covers: list[Cover] = []
        seen = set()
        for i, G in enumerate(elements):
            for e in range(G.num_edges):
                s = contract(G, [e])
                j, iso = self.locate(s.target)
                spec = s.then(iso)
                self.contractions[(i, e)] = (j, spec)
                if (i, j) not in seen:
                    seen.add((i, j))
                    self.covers.append(Cover(i, j, e, spec))

    def locate(self, graph: Graph) -> tuple[int, Isomorphism]:
        """Index of the element isomorphic to ``graph`` and an isomorphism onto it."""
        key, iso = canonical_form(graph)
        try:
            return self.index[key], iso
        except KeyError:
            raise ValueError(f"{graph!r} is not an element of G_{self.genus},{self.legs}") from None

    def __len__(self):
        return len(self.elements)

    @property
    def ranks(self) -> list[int]:
        return [G.num_edges for G in self.elements]

    @property
    def dimension(self) -> int:
        return max(self.ranks)

    def lower_covers(self, i: int) -> list[int]:
        return [c.lower for c in self.covers if c.upper == i]

    def upper_covers(self, i: int) -> list[int]:
        return [c.upper for c in self.covers if c.lower == i]

    def minimal_elements(self) -> list[int]:
        return [i for i in range(len(self)) if not self.lower_covers(i)]

    def maximal_elements(self) -> list[int]:
        return [i for i in range(len(self)) if not self.upper_covers(i)]

    def maximal_chain_lengths(self) -> set[int]:
        return maximal_chain_lengths(len(self), [(c.upper, c.lower) for c in self.covers])

    def is_ranked(self) -> bool:
        return len(self.maximal_chain_lengths()) == 1

    def is_connected(self) -> bool:
        return is_connected(len(self), [(c.upper, c.lower) for c in self.covers])

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "legs": self.legs,
            "elements": [G.to_dict() for G in self.elements],
            "covers": sorted([c.upper, c.lower] for c in self.covers),
            "ranks": self.ranks,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GraphPoset":
        """Rebuild from ``to_dict`` output; covers are recomputed."""
        return cls(data["genus"], data["legs"], [Graph.from_dict(x) for x in data["elements"]])

    def to_dot(self) -> str:
        return hasse_dot([f"G{i}: |E|={G.num_edges}, w={list(G.weights)}" for i, G in enumerate(self.elements)],
                         self.ranks, [(c.upper, c.lower) for c in self.covers], name="GraphPoset")


def build_graph_poset(g: int, n: int) -> GraphPoset:
    return GraphPoset(g, n, enumerate_stable_graphs(g, n))


# ---------------------------------------------------------------------------
# generic helpers for posets given by their cover relation


def maximal_chain_lengths(size: int, covers: list[tuple[int, int]]) -> set[int]:
    down: dict[int, list[int]] = {i: [] for i in range(size)}
    has_upper = set()
    for u, l in covers:
        down[u].append(l)
        has_upper.add(l)
    memo: dict[int, frozenset[int]] = {}

    def lengths(i):
        if i not in memo:
            if not down[i]:
                memo[i] = frozenset({0})
            else:
                memo[i] = frozenset(1 + x for j in down[i] for x in lengths(j))
        return memo[i]

    for i in sorted(range(size), key=lambda i: len(down[i])):
        lengths(i)
    out = set()
    for i in range(size):
        if i not in has_upper:
            out |= lengths(i)
    return out


def is_connected(size: int, covers: list[tuple[int, int]]) -> bool:
    if size == 0:
        return True
    adj = {i: set() for i in range(size)}
    for u, l in covers:
        adj[u].add(l)
        adj[l].add(u)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == size


def hasse_dot(labels: list[str], ranks: list[int], covers: list[tuple[int, int]], name: str = "Poset") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for r in sorted(set(ranks)):
        members = " ".join(f"n{i};" for i, x in enumerate(ranks) if x == r)
        lines.append(f"  {{ rank=same; {members} }}")
    for i, lab in enumerate(labels):
        lines.append(f'  n{i} [label="{lab}"];')
    for u, l in sorted(set(covers)):
        lines.append(f"  n{l} -> n{u};")
    lines.append("}")
    return "\n".join(lines)
