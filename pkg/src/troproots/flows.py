"""Flows on graphs with coefficients in an abelian group, and their divisors.

A flow stores one value per edge, namely its value on the default
orientation ``2e``; the opposite half-edge implicitly carries the negative.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .abelian import CoefficientGroup, GroupElement, Homomorphism, Z, sum_elements
from .exceptions import ConsistencyError, NoSolutionError
from .graphs import Graph, Isomorphism, Specialization, contract


class Flow:
    __slots__ = ("graph", "group", "values", "_key")

    def __init__(self, graph: Graph, values: Sequence[GroupElement], group: CoefficientGroup | None = None):
        values = tuple(values)
        if len(values) != graph.num_edges:
            raise ValueError(f"expected {graph.num_edges} edge values, got {len(values)}")
        if group is None:
            if not values:
                raise ValueError("group is required for a flow on a graph without edges")
            group = values[0].group
        if any(v.group != group for v in values):
            raise ValueError("flow values must all lie in the same group")
        self.graph = graph
        self.group = group
        self.values = values
        self._key = None

    @classmethod
    def zero(cls, graph: Graph, group: CoefficientGroup = Z) -> "Flow":
        return cls(graph, [group.zero()] * graph.num_edges, group)

    @classmethod
    def from_ints(cls, graph: Graph, ints: Iterable[int], group: CoefficientGroup = Z) -> "Flow":
        return cls(graph, [group.from_int(int(k)) for k in ints], group)

    def value(self, h: int) -> GroupElement:
        v = self.values[h >> 1]
        return -v if h & 1 else v

    def ints(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(v.key() for v in self.values)
        return self._key

    def is_zero(self) -> bool:
        return not any(self.values)

    def _same(self, other: "Flow"):
        if self.graph != other.graph or self.group != other.group:
            raise ValueError("flows live on different graphs or groups")

    def __add__(self, other: "Flow") -> "Flow":
        self._same(other)
        return Flow(self.graph, [a + b for a, b in zip(self.values, other.values)], self.group)

    def __sub__(self, other: "Flow") -> "Flow":
        self._same(other)
        return Flow(self.graph, [a - b for a, b in zip(self.values, other.values)], self.group)

    def __neg__(self) -> "Flow":
        return Flow(self.graph, [-a for a in self.values], self.group)

    def __mul__(self, k: int) -> "Flow":
        return Flow(self.graph, [a * k for a in self.values], self.group)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Flow) and self.graph == other.graph
                and self.group == other.group and self.values == other.values)

    def __hash__(self):
        return hash((self.graph, self.key()))

    def __repr__(self):
        return f"Flow({[str(v) for v in self.values]} over {self.group})"

    def map(self, f: Homomorphism) -> "Flow":
        """Compose with a coefficient homomorphism."""
        return Flow(self.graph, [f(v) for v in self.values], f.target)

    def tensor(self, a: GroupElement) -> "Flow":
        """``self (x) a`` for an integer flow ``self``."""
        return Flow(self.graph, [a * int(v) for v in self.values], a.group)

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_dict(),
            "orientation": [{"edge": e, "source_halfedge": 2 * e} for e in range(self.graph.num_edges)],
            "values": [{"edge": e, **v.to_dict()} for e, v in enumerate(self.values)],
        }

    @classmethod
    def from_dict(cls, graph: Graph, data: dict, group: CoefficientGroup | None = None) -> "Flow":
        group = group or CoefficientGroup.from_dict(data["group"])
        flipped = {o["edge"]: bool(o["source_halfedge"] & 1) for o in data.get("orientation", [])}
        values = [group.zero()] * graph.num_edges
        for item in data["values"]:
            e = item["edge"]
            v = group.element_from_dict(item.get("value", item))
            values[e] = -v if flipped.get(e) else v
        return cls(graph, values, group)


class GraphDivisor:
    __slots__ = ("graph", "group", "values")

    def __init__(self, graph: Graph, values: Sequence[GroupElement], group: CoefficientGroup | None = None):
        values = tuple(values)
        if len(values) != graph.num_vertices:
            raise ValueError(f"expected {graph.num_vertices} vertex values, got {len(values)}")
        self.graph = graph
        self.group = group or values[0].group
        if any(v.group != self.group for v in values):
            raise ValueError("divisor values must all lie in the same group")
        self.values = values

    @classmethod
    def zero(cls, graph: Graph, group: CoefficientGroup = Z) -> "GraphDivisor":
        return cls(graph, [group.zero()] * graph.num_vertices, group)

    @classmethod
    def from_ints(cls, graph: Graph, ints: Iterable[int], group: CoefficientGroup = Z) -> "GraphDivisor":
        return cls(graph, [group.from_int(int(k)) for k in ints], group)

    def degree(self) -> GroupElement:
        return sum_elements(self.group, self.values)

    def ints(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)

    def __getitem__(self, v: int) -> GroupElement:
        return self.values[v]

    def __add__(self, other):
        return GraphDivisor(self.graph, [a + b for a, b in zip(self.values, other.values)], self.group)

    def __sub__(self, other):
        return GraphDivisor(self.graph, [a - b for a, b in zip(self.values, other.values)], self.group)

    def __neg__(self):
        return GraphDivisor(self.graph, [-a for a in self.values], self.group)

    def __mul__(self, k: int):
        return GraphDivisor(self.graph, [a * k for a in self.values], self.group)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, GraphDivisor) and self.graph == other.graph
                and self.group == other.group and self.values == other.values)

    def __hash__(self):
        return hash((self.graph, self.values))

    def __repr__(self):
        return f"GraphDivisor({[str(v) for v in self.values]} over {self.group})"

    def map(self, f: Homomorphism) -> "GraphDivisor":
        return GraphDivisor(self.graph, [f(v) for v in self.values], f.target)

    def pushforward(self, s: Specialization) -> "GraphDivisor":
        out = [self.group.zero()] * s.target.num_vertices
        for v, x in enumerate(self.values):
            out[s.vertex_map[v]] = out[s.vertex_map[v]] + x
        return GraphDivisor(s.target, out, self.group)

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(),
                "values": [{"vertex": v, **x.to_dict()} for v, x in enumerate(self.values)]}


class RamificationSequence:
    """The tuple ``(a_1, ..., a_n, b)``; ``b`` multiplies the canonical divisor."""

    def __init__(self, entries: Sequence[GroupElement], ell: GroupElement):
        self.entries = tuple(entries)
        self.ell = ell
        self.group = ell.group
        if any(a.group != self.group for a in self.entries):
            raise ValueError("ramification entries must share one group")

    @classmethod
    def from_ints(cls, values: Sequence[int], group: CoefficientGroup = Z) -> "RamificationSequence":
        """``values = [a_1, ..., a_n, b]`` (the last entry is ``b``)."""
        values = list(values)
        if not values:
            raise ValueError("a ramification sequence needs at least the entry b")
        return cls([group.from_int(a) for a in values[:-1]], group.from_int(values[-1]))

    @classmethod
    def zero(cls, n: int, group: CoefficientGroup = Z) -> "RamificationSequence":
        return cls([group.zero()] * n, group.zero())

    @property
    def n(self) -> int:
        return len(self.entries)

    def degree(self, genus: int) -> GroupElement:
        return sum_elements(self.group, self.entries) + self.ell * (2 * genus - 2)

    def map(self, f: Homomorphism) -> "RamificationSequence":
        return RamificationSequence([f(a) for a in self.entries], f(self.ell))

    def scaled(self, d: int) -> "RamificationSequence":
        return RamificationSequence([a * d for a in self.entries], self.ell * d)

    def ints(self) -> list[int]:
        return [int(a) for a in self.entries] + [int(self.ell)]

    def __eq__(self, other):
        return isinstance(other, RamificationSequence) and self.entries == other.entries and self.ell == other.ell

    def __repr__(self):
        return f"RamificationSequence({[str(a) for a in self.entries]}, b={self.ell})"

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(), "entries": [a.to_dict() for a in self.entries],
                "b": self.ell.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "RamificationSequence":
        group = CoefficientGroup.from_dict(data["group"])
        return cls([group.element_from_dict(a) for a in data["entries"]], group.element_from_dict(data["b"]))


# ---------------------------------------------------------------------------
# operations


def div_of_flow(f: Flow) -> GraphDivisor:
    """``div(f)(v) = sum of f(h) over half-edges h pointing into v``."""
    G = f.graph
    out = [f.group.zero()] * G.num_vertices
    for e, (a, b) in enumerate(G.edges):
        x = f.values[e]
        out[b] = out[b] + x
        out[a] = out[a] - x
    return GraphDivisor(G, out, f.group)


def flow_from_divisor(graph: Graph, D: GraphDivisor) -> Flow:
    """A flow supported on a spanning tree whose divisor is ``D``.

    On a tree edge, the value is the degree of ``D`` on the side of the tree
    containing the edge's target.
    """
    if D.degree():
        raise NoSolutionError(f"divisor has degree {D.degree()} != 0")
    tree, parent = graph.spanning_tree()
    # subtree sums, children before parents
    order = [0]
    children = {v: [] for v in range(graph.num_vertices)}
    for v, h in enumerate(parent):
        if h is not None:
            children[graph.source(h)].append(v)
    for v in order:
        order.extend(children[v])
    sub = list(D.values)
    for v in reversed(order):
        h = parent[v]
        if h is not None:
            u = graph.source(h)
            sub[u] = sub[u] + sub[v]
    values = [D.group.zero()] * graph.num_edges
    for v, h in enumerate(parent):
        if h is not None:
            # h points into v, so the component of T - e containing target(h) is v's subtree
            values[h >> 1] = sub[v] if not h & 1 else -sub[v]
    phi = Flow(graph, values, D.group)
    if div_of_flow(phi) != D:
        raise ConsistencyError("spanning-tree flow does not have the requested divisor",
                               {"divisor": D.to_dict(), "flow": phi.to_dict()})
    return phi


def h1_generators(graph: Graph, group: CoefficientGroup = Z) -> list[Flow]:
    """Fundamental-cycle flows, one per edge outside a BFS spanning tree.

    The values are +-1 around each cycle, taken in ``group`` when it is
    cyclic and in Z otherwise. The integer versions form a Z-basis of the
    integer Kirchhoff flows, so tensoring with any group ``A`` gives every
    ``A``-valued Kirchhoff flow uniquely.
    """
    if group != Z and group.is_cyclic:
        return [Flow(graph, [group.from_int(int(v)) for v in z.values], group) for z in h1_generators(graph)]
    tree, parent = graph.spanning_tree()
    depth = [0] * graph.num_vertices
    order = graph.bfs_order()
    for v in order:
        if parent[v] is not None:
            depth[v] = depth[graph.source(parent[v])] + 1
    gens = []
    for e in range(graph.num_edges):
        if e in tree:
            continue
        vals = [0] * graph.num_edges
        vals[e] += 1
        # close the cycle: walk from target(2e) back to source(2e) through the tree
        u, w = graph.target(2 * e), graph.source(2 * e)
        up_from_u = []  # half-edges traversed going from u upward
        down_to_w = []
        while u != w:
            if depth[u] >= depth[w]:
                h = parent[u]
                up_from_u.append(h ^ 1)
                u = graph.source(h)
            else:
                h = parent[w]
                down_to_w.append(h)
                w = graph.source(h)
        for h in up_from_u + down_to_w[::-1]:
            vals[h >> 1] += -1 if h & 1 else 1
        gens.append(Flow.from_ints(graph, vals))
    return gens


def kirchhoff_flows(graph: Graph, group: CoefficientGroup) -> list[Flow]:
    """All of ``H_1(graph, group)`` for a finite group, in a fixed order."""
    if not group.is_finite:
        raise ValueError(f"{group} is infinite")
    gens = h1_generators(graph)
    elems = list(group.elements())
    out = []
    for coeffs in itertools.product(elems, repeat=len(gens)):
        f = Flow.zero(graph, group)
        for z, c in zip(gens, coeffs):
            f = f + z.tensor(c)
        out.append(f)
    return out


def enumerate_flow_fiber(graph: Graph, D: GraphDivisor) -> list[Flow]:
    """All flows with divisor ``D`` (finite coefficients)."""
    if D.degree():
        return []
    base = flow_from_divisor(graph, D)
    return [base + k for k in kirchhoff_flows(graph, D.group)]


def pushforward_flow(s: Specialization, f: Flow) -> Flow:
    if f.graph != s.source:
        raise ValueError("flow does not live on the specialization source")
    values = [f.group.zero()] * s.target.num_edges
    for h, k in s.half_edge_map.items():
        if not k & 1:
            values[k >> 1] = f.value(h)
    return Flow(s.target, values, f.group)


def lift_flow(s: Specialization, f_target: Flow, D: GraphDivisor) -> Flow:
    """A flow on ``s.source`` with divisor ``D`` pushing forward to ``f_target``.

    Contracted edges are restored one at a time (highest id first); a
    restored loop gets value 0, any other edge the value forced by the
    divisor at its source.
    """
    G = s.source
    if D.graph != G:
        raise ValueError("divisor does not live on the specialization source")
    if div_of_flow(f_target) != D.pushforward(s):
        raise ValueError("divisor of the target flow differs from the pushed-forward divisor")
    group = f_target.group
    values: list[GroupElement | None] = [None] * G.num_edges
    for h, k in s.half_edge_map.items():
        if not h & 1:
            values[h >> 1] = f_target.value(k)
    order = sorted(s.contracted)
    for i in range(len(order) - 1, -1, -1):
        e0 = order[i]
        vmap = contract(G, order[:i]).vertex_map
        a, b = G.edges[e0]
        if vmap[a] == vmap[b]:
            values[e0] = group.zero()
            continue
        comp = vmap[a]
        total = -sum_elements(group, (D.values[v] for v in range(G.num_vertices) if vmap[v] == comp))
        for e, (x, y) in enumerate(G.edges):
            if e == e0 or e in order[:i]:
                continue
            # half-edge 2e points into y, 2e+1 into x
            if vmap[y] == comp:
                total = total + values[e]
            if vmap[x] == comp:
                total = total - values[e]
        values[e0] = total
    phi = Flow(G, values, group)
    if div_of_flow(phi) != D or pushforward_flow(s, phi) != f_target:
        raise ConsistencyError("lifted flow violates its postconditions",
                               {"flow": phi.to_dict(), "target": f_target.to_dict()})
    return phi


def ramification_divisor(R: RamificationSequence, graph: Graph) -> GraphDivisor:
    """``D(v) = (2w(v) + val(v) - 2) b + sum of a_j over legs j at v``."""
    if graph.num_legs != R.n:
        raise ValueError(f"graph has {graph.num_legs} legs but R has {R.n} entries")
    out = []
    for v in range(graph.num_vertices):
        x = R.ell * (2 * graph.weights[v] + graph.valence(v) - 2)
        for j in graph.legs_at(v):
            x = x + R.entries[j - 1]
        out.append(x)
    return GraphDivisor(graph, out, R.group)


def act_on_flow(aut: Isomorphism, f: Flow) -> Flow:
    """Transport ``f`` along an isomorphism (automorphisms included):
    ``(aut . f)(aut(h)) = f(h)``."""
    if f.graph != aut.source:
        raise ValueError("flow does not live on the isomorphism source")
    values = [None] * aut.target.num_edges
    for e in range(aut.source.num_edges):
        k = aut.half_edge_map[2 * e]
        values[k >> 1] = -f.values[e] if k & 1 else f.values[e]
    return Flow(aut.target, values, f.group)


def act_on_divisor(aut: Isomorphism, D: GraphDivisor) -> GraphDivisor:
    values = [None] * aut.target.num_vertices
    for v, x in enumerate(D.values):
        values[aut.vertex_map[v]] = x
    return GraphDivisor(aut.target, values, D.group)
