"""Half-edge multigraphs with vertex weights and labeled legs.

Vertices are ``0..V-1`` and edges ``0..E-1``. Edge ``e`` owns the two
half-edges ``2e`` and ``2e+1``; half-edge ``2e`` is attached to
``edges[e][0]`` and ``2e+1`` to ``edges[e][1]``. A half-edge doubles as an
oriented edge: ``h`` runs from ``source(h)`` (its own vertex) to
``target(h)`` (the vertex of ``h ^ 1``), so ``2e`` is the default
orientation of ``e``. Legs are labeled ``1..n``; ``legs[i]`` is the vertex
carrying leg ``i+1``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


def edge_of(h: int) -> int:
    return h >> 1


def opposite(h: int) -> int:
    return h ^ 1


class Graph:
    __slots__ = ("weights", "edges", "legs", "_hash")

    def __init__(self, weights: Sequence[int], edges: Iterable[Sequence[int]] = (),
                 legs: Sequence[int] = (), *, check: bool = True):
        self.weights = tuple(int(w) for w in weights)
        self.edges = tuple((int(a), int(b)) for a, b in edges)
        self.legs = tuple(int(v) for v in legs)
        self._hash = None
        if check:
            self._validate()

    def _validate(self):
        nv = len(self.weights)
        if nv == 0:
            raise ValueError("a graph needs at least one vertex")
        if any(w < 0 for w in self.weights):
            raise ValueError("vertex weights must be nonnegative")
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise ValueError(f"edge ({a}, {b}) has an endpoint outside 0..{nv - 1}")
        if any(not 0 <= v < nv for v in self.legs):
            raise ValueError("leg attached to a nonexistent vertex")
        if not self.is_connected():
            raise ValueError("graph must be connected")

    # -- identity -------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Graph) and self.weights == other.weights
                and self.edges == other.edges and self.legs == other.legs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.weights, self.edges, self.legs))
        return self._hash

    def __repr__(self):
        return f"Graph(weights={list(self.weights)}, edges={[list(e) for e in self.edges]}, legs={list(self.legs)})"

    # -- incidence ------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.weights)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_legs(self) -> int:
        return len(self.legs)

    @property
    def num_half_edges(self) -> int:
        return 2 * len(self.edges)

    def source(self, h: int) -> int:
        return self.edges[h >> 1][h & 1]

    def target(self, h: int) -> int:
        return self.edges[h >> 1][1 - (h & 1)]

    def is_loop(self, e: int) -> bool:
        a, b = self.edges[e]
        return a == b

    def half_edges_at(self, v: int) -> list[int]:
        return [h for h in range(self.num_half_edges) if self.source(h) == v]

    def valence(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def legs_at(self, v: int) -> tuple[int, ...]:
        return tuple(i + 1 for i, u in enumerate(self.legs) if u == v)

    def loops_at(self, v: int) -> int:
        return sum(a == b == v for a, b in self.edges)

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            if b == v:
                out.append(a)
        return out

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.num_vertices

    # -- numerical invariants -------------------------------------------
    @property
    def b1(self) -> int:
        return self.num_edges - self.num_vertices + 1

    @property
    def genus(self) -> int:
        return self.b1 + sum(self.weights)

    def stability_excess(self, v: int) -> int:
        return 2 * self.weights[v] - 2 + self.valence(v) + len(self.legs_at(v))

    def is_stable(self) -> bool:
        return all(self.stability_excess(v) > 0 for v in range(self.num_vertices))

    def is_three_regular(self) -> bool:
        return all(w == 0 for w in self.weights) and all(
            self.valence(v) + len(self.legs_at(v)) == 3 for v in range(self.num_vertices))

    # -- spanning trees -------------------------------------------------
    def spanning_tree(self) -> tuple[frozenset[int], list[int | None]]:
        """BFS tree from vertex 0: (tree edges, parent half-edge of each vertex).

        ``parent[v]`` is the half-edge of the tree edge pointing *into* ``v``
        (``target(parent[v]) == v``); ``None`` at the root.
        """
        parent: list[int | None] = [None] * self.num_vertices
        seen = [False] * self.num_vertices
        seen[0] = True
        order = [0]
        tree = set()
        for v in order:
            for h in range(self.num_half_edges):
                if self.source(h) == v:
                    u = self.target(h)
                    if not seen[u]:
                        seen[u] = True
                        parent[u] = h
                        tree.add(h >> 1)
                        order.append(u)
        return frozenset(tree), parent

    def bfs_order(self) -> list[int]:
        _, parent = self.spanning_tree()
        order = [0]
        children = {v: [] for v in range(self.num_vertices)}
        for v, h in enumerate(parent):
            if h is not None:
                children[self.source(h)].append(v)
        for v in order:
            order.extend(children[v])
        return order

    # -- operations -----------------------------------------------------
    def contract(self, edges: Iterable[int]) -> "Specialization":
        return contract(self, edges)

    def subdivide(self, edge: int, parts: int):
        return subdivide(self, edge, parts)

    def relabeled(self, vertex_map: Sequence[int], half_edge_map: Sequence[int]) -> "Graph":
        """The graph obtained by renaming vertices and half-edges.

        ``half_edge_map`` must send the pair ``{2e, 2e+1}`` onto a pair
        ``{2e', 2e'+1}``.
        """
        ne = self.num_edges
        new_edges = [None] * ne
        for e in range(ne):
            h0, h1 = half_edge_map[2 * e], half_edge_map[2 * e + 1]
            if h0 ^ 1 != h1:
                raise ValueError("half-edge map does not commute with the involution")
            ends = [None, None]
            ends[h0 & 1] = vertex_map[self.edges[e][0]]
            ends[h1 & 1] = vertex_map[self.edges[e][1]]
            new_edges[h0 >> 1] = tuple(ends)
        weights = [0] * self.num_vertices
        for v, w in enumerate(self.weights):
            weights[vertex_map[v]] = w
        legs = [vertex_map[v] for v in self.legs]
        return Graph(weights, new_edges, legs)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "weight": w} for v, w in enumerate(self.weights)],
            "edges": [{"id": e, "ends": [a, b]} for e, (a, b) in enumerate(self.edges)],
            "legs": [{"label": i + 1, "vertex": v} for i, v in enumerate(self.legs)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        vid = {v["id"]: i for i, v in enumerate(data["vertices"])}
        weights = [int(v.get("weight", 0)) for v in data["vertices"]]
        edges = [(vid[e["ends"][0]], vid[e["ends"][1]]) for e in data.get("edges", [])]
        legs_by_label = {int(l["label"]): vid[l["vertex"]] for l in data.get("legs", [])}
        if sorted(legs_by_label) != list(range(1, len(legs_by_label) + 1)):
            raise ValueError("leg labels must be exactly 1..n")
        return cls(weights, edges, [legs_by_label[i] for i in range(1, len(legs_by_label) + 1)])

    def to_dot(self, name: str = "G", edge_labels: Sequence[str] | None = None) -> str:
        lines = [f"graph {name} {{"]
        for v, w in enumerate(self.weights):
            lines.append(f'  v{v} [label="v{v}\\nw={w}"];')
        for e, (a, b) in enumerate(self.edges):
            lab = edge_labels[e] if edge_labels else f"e{e}"
            lines.append(f'  v{a} -- v{b} [label="{lab}"];')
        for i, v in enumerate(self.legs):
            lines.append(f'  leg{i + 1} [shape=plaintext, label="{i + 1}"];')
            lines.append(f"  v{v} -- leg{i + 1} [style=dashed];")
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class Isomorphism:
    """A vertex bijection and a half-edge bijection compatible with the
    involution, the attachment map, weights and leg labels."""

    source: Graph
    target: Graph
    vertex_map: tuple[int, ...]
    half_edge_map: tuple[int, ...]

    def edge_map(self) -> tuple[int, ...]:
        return tuple(self.half_edge_map[2 * e] >> 1 for e in range(self.source.num_edges))

    def flips(self) -> tuple[bool, ...]:
        """Whether edge ``e``'s default orientation is reversed by the map."""
        return tuple(bool(self.half_edge_map[2 * e] & 1) for e in range(self.source.num_edges))

    def compose(self, first: "Isomorphism") -> "Isomorphism":
        """``self o first``: apply ``first`` then ``self``."""
        return Isomorphism(
            first.source, self.target,
            tuple(self.vertex_map[v] for v in first.vertex_map),
            tuple(self.half_edge_map[h] for h in first.half_edge_map),
        )

    def inverse(self) -> "Isomorphism":
        vm = [0] * len(self.vertex_map)
        for v, w in enumerate(self.vertex_map):
            vm[w] = v
        hm = [0] * len(self.half_edge_map)
        for h, k in enumerate(self.half_edge_map):
            hm[k] = h
        return Isomorphism(self.target, self.source, tuple(vm), tuple(hm))

    def is_valid(self) -> bool:
        s, t = self.source, self.target
        if s.num_vertices != t.num_vertices or s.num_edges != t.num_edges:
            return False
        if sorted(self.vertex_map) != list(range(s.num_vertices)):
            return False
        if sorted(self.half_edge_map) != list(range(s.num_half_edges)):
            return False
        for h in range(s.num_half_edges):
            if self.half_edge_map[h ^ 1] != self.half_edge_map[h] ^ 1:
                return False
            if self.vertex_map[s.source(h)] != t.source(self.half_edge_map[h]):
                return False
        if any(s.weights[v] != t.weights[self.vertex_map[v]] for v in range(s.num_vertices)):
            return False
        return all(self.vertex_map[v] == w for v, w in zip(s.legs, t.legs))

    @classmethod
    def identity(cls, g: Graph) -> "Isomorphism":
        return cls(g, g, tuple(range(g.num_vertices)), tuple(range(g.num_half_edges)))


GraphAutomorphism = Isomorphism


@dataclass(frozen=True)
class Specialization:
    """Contraction of ``contracted`` edges of ``source`` onto ``target``.

    ``half_edge_map`` sends every half-edge of a surviving edge to the
    corresponding half-edge of ``target``.
    """

    source: Graph
    target: Graph
    contracted: frozenset[int]
    vertex_map: tuple[int, ...]
    half_edge_map: dict = field(hash=False, compare=False)

    def edge_map(self) -> dict[int, int]:
        return {h >> 1: k >> 1 for h, k in self.half_edge_map.items() if not h & 1}

    def face_map(self) -> dict[int, int]:
        """Target edge -> source edge (the inclusion ``E(target) -> E(source)``)."""
        return {k: e for e, k in self.edge_map().items()}

    def then(self, iso: Isomorphism) -> "Specialization":
        if iso.source != self.target:
            raise ValueError("isomorphism does not start at the specialization target")
        return Specialization(
            self.source, iso.target, self.contracted,
            tuple(iso.vertex_map[v] for v in self.vertex_map),
            {h: iso.half_edge_map[k] for h, k in self.half_edge_map.items()},
        )

    def is_identity(self) -> bool:
        return (not self.contracted and self.source == self.target
                and self.vertex_map == tuple(range(self.source.num_vertices))
                and all(h == k for h, k in self.half_edge_map.items()))


def contract(g: Graph, edges: Iterable[int]) -> Specialization:
    edges = frozenset(edges)
    bad = [e for e in edges if not 0 <= e < g.num_edges]
    if bad:
        raise ValueError(f"unknown edge ids {sorted(bad)}")
    parent = list(range(g.num_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in sorted(edges):
        a, b = find(g.edges[e][0]), find(g.edges[e][1])
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(v) for v in range(g.num_vertices)})
    index = {root: i for i, root in enumerate(roots)}
    vmap = tuple(index[find(v)] for v in range(g.num_vertices))
    weights = [0] * len(roots)
    sizes = [0] * len(roots)
    for v, w in enumerate(g.weights):
        weights[vmap[v]] += w
        sizes[vmap[v]] += 1
    inner = [0] * len(roots)
    for e in edges:
        inner[vmap[g.edges[e][0]]] += 1
    for c in range(len(roots)):
        weights[c] += inner[c] - (sizes[c] - 1)
    new_edges = []
    hmap = {}
    for e, (a, b) in enumerate(g.edges):
        if e in edges:
            continue
        k = len(new_edges)
        new_edges.append((vmap[a], vmap[b]))
        hmap[2 * e] = 2 * k
        hmap[2 * e + 1] = 2 * k + 1
    target = Graph(weights, new_edges, [vmap[v] for v in g.legs], check=False)
    return Specialization(g, target, edges, vmap, hmap)


def subdivide(g: Graph, edge: int, parts: int) -> tuple[Graph, list[int]]:
    """Insert ``parts - 1`` weight-zero vertices inside ``edge``.

    Returns the new graph and the chain of half-edges lying over the
    half-edge ``2*edge``, ordered from its source to its target. The first
    segment keeps the id ``edge``; later ones are appended.
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if not 0 <= edge < g.num_edges:
        raise ValueError(f"unknown edge id {edge}")
    if parts == 1:
        return g, [2 * edge]
    a, b = g.edges[edge]
    nv, ne = g.num_vertices, g.num_edges
    new = list(range(nv, nv + parts - 1))
    edges = list(g.edges)
    edges[edge] = (a, new[0])
    chain = [2 * edge]
    stops = new + [b]
    for i in range(parts - 1):
        chain.append(2 * len(edges))
        edges.append((stops[i], stops[i + 1]))
    return Graph(list(g.weights) + [0] * (parts - 1), edges, g.legs, check=False), chain


# ---------------------------------------------------------------------------
# canonical forms and automorphisms


def _vertex_invariant(g: Graph, v: int):
    return (g.legs_at(v), g.weights[v], g.valence(v), g.loops_at(v))


def _class_orderings(g: Graph):
    """All vertex relabelings (old -> new) respecting sorted invariants."""
    invs = [_vertex_invariant(g, v) for v in range(g.num_vertices)]
    classes = []
    for inv in sorted(set(invs)):
        classes.append([v for v in range(g.num_vertices) if invs[v] == inv])
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [v for block in choice for v in block]
        pos = [0] * g.num_vertices
        for i, v in enumerate(order):
            pos[v] = i
        yield tuple(pos), [invs[v] for v in order]


def _edge_code(g: Graph, pos) -> tuple:
    return tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in g.edges))


@functools.lru_cache(maxsize=None)
def canonical_form(g: Graph) -> tuple[tuple, Isomorphism]:
    """A key equal for isomorphic graphs (legs fixed labelwise) and an
    isomorphism from ``g`` onto the canonical representative."""
    best = None
    for pos, invs in _class_orderings(g):
        code = _edge_code(g, pos)
        if best is None or code < best[0]:
            best = (code, pos, invs)
    code, pos, invs = best
    key = (tuple((inv[1], inv[0]) for inv in invs), code)
    canon = canonical_graph(key)
    slots: dict[tuple, list[int]] = {}
    for e, pair in enumerate(canon.edges):
        slots.setdefault(pair, []).append(e)
    hmap = [0] * g.num_half_edges
    for e, (a, b) in enumerate(g.edges):
        pa, pb = pos[a], pos[b]
        k = slots[tuple(sorted((pa, pb)))].pop(0)
        if pa <= pb:
            hmap[2 * e], hmap[2 * e + 1] = 2 * k, 2 * k + 1
        else:
            hmap[2 * e], hmap[2 * e + 1] = 2 * k + 1, 2 * k
    return key, Isomorphism(g, canon, pos, tuple(hmap))


@functools.lru_cache(maxsize=None)
def canonical_graph(key: tuple) -> Graph:
    vertex_part, code = key
    weights = [w for w, _ in vertex_part]
    nlegs = sum(len(legs) for _, legs in vertex_part)
    legs = [0] * nlegs
    for v, (_, labels) in enumerate(vertex_part):
        for lab in labels:
            legs[lab - 1] = v
    return Graph(weights, code, legs, check=False)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return canonical_form(g)[0] == canonical_form(h)[0]


@functools.lru_cache(maxsize=None)
def automorphism_group(g: Graph) -> tuple[Isomorphism, ...]:
    """Every automorphism as a vertex/half-edge permutation pair, loop flips
    and swaps of parallel edges included. The identity comes first."""
    base = _edge_code(g, tuple(range(g.num_vertices)))
    groups: dict[tuple, list[int]] = {}
    for e, (a, b) in enumerate(g.edges):
        groups.setdefault(tuple(sorted((a, b))), []).append(e)
    out = []
    for pos, _ in _class_orderings(g):
        if _edge_code(g, pos) != base:
            continue
        per_group = []
        for pair, members in sorted(groups.items()):
            image = groups[tuple(sorted((pos[pair[0]], pos[pair[1]])))]
            loop = pair[0] == pair[1]
            options = []
            for perm in itertools.permutations(image):
                for flips in itertools.product((0, 1), repeat=len(members) if loop else 0):
                    m = {}
                    for i, (e, k) in enumerate(zip(members, perm)):
                        if loop:
                            f = flips[i]
                        else:
                            f = int(g.edges[k][0] != pos[g.edges[e][0]])
                        m[2 * e] = 2 * k + f
                        m[2 * e + 1] = 2 * k + 1 - f
                    options.append(m)
            per_group.append(options)
        for combo in itertools.product(*per_group):
            hmap = [0] * g.num_half_edges
            for m in combo:
                for h, k in m.items():
                    hmap[h] = k
            out.append(Isomorphism(g, g, pos, tuple(hmap)))
    ident = Isomorphism.identity(g)
    out.sort(key=lambda a: (a != ident, a.vertex_map, a.half_edge_map))
    return tuple(out)


def automorphism_group_order(g: Graph) -> int:
    return len(automorphism_group(g))


def isomorphisms(g: Graph, h: Graph) -> list[Isomorphism]:
    """All isomorphisms ``g -> h`` (empty when not isomorphic)."""
    kg, ig = canonical_form(g)
    kh, ih = canonical_form(h)
    if kg != kh:
        return []
    back = ih.inverse()
    return [back.compose(a.compose(ig)) for a in automorphism_group(ig.target)]


def single_vertex_graph(genus: int, n: int) -> Graph:
    return Graph([genus], (), [0] * n)


def theta_graph() -> Graph:
    return Graph([0, 0], [(0, 1)] * 3)


def dumbbell_graph() -> Graph:
    return Graph([0, 0], [(0, 0), (0, 1), (1, 1)])

