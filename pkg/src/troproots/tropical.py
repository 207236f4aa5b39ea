"""Tropical curves with exact rational edge lengths, integer divisors on
them, rational functions, and a principality test that returns a witness.

A rational function is stored as an integer flow ``s`` on a refinement of
the curve's model, read as slopes: along the refined edge ``e`` its potential
rises by ``s(e) * length(e)`` from source to target. Its divisor is
``div(s)``, and it is well defined exactly when the length-weighted sum of
slopes around every cycle vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .abelian import Z
from .exceptions import ConsistencyError
from .flows import Flow, GraphDivisor, RamificationSequence, div_of_flow, h1_generators, ramification_divisor
from .graphs import Graph, subdivide
from .lattice import solve_integer


def _fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("lengths and offsets must be exact (int, Fraction or 'p/q' string)")
    return Fraction(x)


class TropicalCurve:
    """A metric graph: a model graph plus a positive rational length per edge.

    Stability of the model is not required, so unstable test curves such as
    a single bridge are allowed.
    """

    __slots__ = ("graph", "lengths")

    def __init__(self, graph: Graph, lengths: Sequence):
        lengths = tuple(_fraction(x) for x in lengths)
        if len(lengths) != graph.num_edges:
            raise ValueError(f"expected {graph.num_edges} lengths, got {len(lengths)}")
        if any(x <= 0 for x in lengths):
            raise ValueError("edge lengths must be strictly positive")
        self.graph = graph
        self.lengths = lengths

    def __eq__(self, other):
        return isinstance(other, TropicalCurve) and self.graph == other.graph and self.lengths == other.lengths

    def __hash__(self):
        return hash((self.graph, self.lengths))

    def __repr__(self):
        return f"TropicalCurve({self.graph!r}, lengths={[str(x) for x in self.lengths]})"

    @property
    def genus(self) -> int:
        return self.graph.genus

    @property
    def b1(self) -> int:
        return self.graph.b1

    def vertex(self, v: int) -> "CurvePoint":
        if not 0 <= v < self.graph.num_vertices:
            raise ValueError(f"no vertex {v}")
        return CurvePoint(vertex=v)

    def point(self, edge: int, offset, from_target: bool = False) -> "CurvePoint":
        """The point at distance ``offset`` along ``edge`` from its first end
        (or from its second end when ``from_target``)."""
        if not 0 <= edge < self.graph.num_edges:
            raise ValueError(f"no edge {edge}")
        ell = self.lengths[edge]
        t = _fraction(offset)
        if from_target:
            t = ell - t
        if not 0 <= t <= ell:
            raise ValueError(f"offset {offset} outside the edge of length {ell}")
        a, b = self.graph.edges[edge]
        if t == 0:
            return CurvePoint(vertex=a)
        if t == ell:
            return CurvePoint(vertex=b)
        return CurvePoint(edge=edge, offset=t)

    def point_on_half_edge(self, h: int, offset) -> "CurvePoint":
        """The point at distance ``offset`` from the source of half-edge ``h``."""
        return self.point(h >> 1, offset, from_target=bool(h & 1))

    def scaled(self, factor) -> "TropicalCurve":
        factor = _fraction(factor)
        return TropicalCurve(self.graph, [x * factor for x in self.lengths])

    def to_dict(self) -> dict:
        data = self.graph.to_dict()
        data["lengths"] = [{"edge": e, "num": x.numerator, "den": x.denominator} for e, x in enumerate(self.lengths)]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TropicalCurve":
        graph = Graph.from_dict(data)
        eid = {e["id"]: i for i, e in enumerate(data.get("edges", []))}
        lengths = [None] * graph.num_edges
        for item in data["lengths"]:
            lengths[eid.get(item["edge"], item["edge"])] = Fraction(item["num"], item.get("den", 1))
        if any(x is None for x in lengths):
            raise ValueError("every edge needs a length")
        return cls(graph, lengths)


@dataclass(frozen=True)
class CurvePoint:
    """A model vertex, or an interior point ``(edge, offset)`` measured from
    the edge's first end (``0 < offset < length``)."""

    vertex: int | None = None
    edge: int | None = None
    offset: Fraction | None = None

    def __post_init__(self):
        if (self.vertex is None) == (self.edge is None):
            raise ValueError("a point is either a vertex or an interior edge point")

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        return (0, self.vertex, 0) if self.is_vertex else (1, self.edge, self.offset)

    def to_dict(self) -> dict:
        if self.is_vertex:
            return {"vertex": self.vertex}
        return {"edge": self.edge, "num": self.offset.numerator, "den": self.offset.denominator}

    @classmethod
    def from_dict(cls, curve: TropicalCurve, data: dict) -> "CurvePoint":
        if "vertex" in data:
            return curve.vertex(int(data["vertex"]))
        return curve.point(int(data["edge"]), Fraction(data["num"], data.get("den", 1)))

    def __str__(self):
        return f"v{self.vertex}" if self.is_vertex else f"e{self.edge}@{self.offset}"


class TropicalDivisor:
    """An integer divisor on a tropical curve, stored by its nonzero coefficients."""

    __slots__ = ("curve", "coeffs")

    def __init__(self, curve: TropicalCurve, coeffs: Mapping[CurvePoint, int] | Iterable[tuple[CurvePoint, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[CurvePoint, int] = {}
        for p, c in items:
            if not p.is_vertex:
                if not 0 < p.offset < curve.lengths[p.edge]:
                    raise ValueError(f"{p} is not an interior point of its edge")
            elif not 0 <= p.vertex < curve.graph.num_vertices:
                raise ValueError(f"{p} is not a vertex of the curve")
            acc[p] = acc.get(p, 0) + int(c)
        self.curve = curve
        self.coeffs = {p: c for p, c in sorted(acc.items(), key=lambda pc: pc[0].sort_key()) if c}

    @classmethod
    def from_vertex_values(cls, curve: TropicalCurve, values: Sequence[int]) -> "TropicalDivisor":
        return cls(curve, [(CurvePoint(vertex=v), c) for v, c in enumerate(values)])

    def __getitem__(self, p: CurvePoint) -> int:
        return self.coeffs.get(p, 0)

    @property
    def support(self) -> list[CurvePoint]:
        return list(self.coeffs)

    def degree(self) -> int:
        return sum(self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "TropicalDivisor"):
        if self.curve != other.curve:
            raise ValueError("divisors live on different curves")

    def __add__(self, other: "TropicalDivisor") -> "TropicalDivisor":
        self._check(other)
        return TropicalDivisor(self.curve, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self) -> "TropicalDivisor":
        return TropicalDivisor(self.curve, {p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other: "TropicalDivisor") -> "TropicalDivisor":
        return self + (-other)

    def __mul__(self, k: int) -> "TropicalDivisor":
        return TropicalDivisor(self.curve, {p: k * c for p, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TropicalDivisor) and self.curve == other.curve and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.curve, tuple(self.coeffs.items())))

    def __repr__(self):
        body = " + ".join(f"{c}*{p}" for p, c in self.coeffs.items()) or "0"
        return f"TropicalDivisor({body})"

    def to_dict(self) -> list:
        return [{"point": p.to_dict(), "coeff": c} for p, c in self.coeffs.items()]

    @classmethod
    def from_dict(cls, curve: TropicalCurve, data: list) -> "TropicalDivisor":
        return cls(curve, [(CurvePoint.from_dict(curve, item["point"]), int(item["coeff"])) for item in data])


# ---------------------------------------------------------------------------
# refined models


class Model:
    """A refinement of a curve's model in which chosen points are vertices.

    ``chains[e]`` lists the refined half-edges lying over half-edge ``2e`` of
    the curve, in order from its source to its target. Original vertices keep
    their ids.
    """

    def __init__(self, curve: TropicalCurve, graph: Graph, lengths: Sequence[Fraction],
                 chains: Sequence[Sequence[int]], vertex_points: Sequence[CurvePoint]):
        self.curve = curve
        self.graph = graph
        self.lengths = tuple(lengths)
        self.chains = tuple(tuple(c) for c in chains)
        self.vertex_points = tuple(vertex_points)
        self._vertex_of = {p: v for v, p in enumerate(self.vertex_points)}

    def vertex_of(self, p: CurvePoint) -> int:
        try:
            return self._vertex_of[p]
        except KeyError:
            raise ValueError(f"{p} is not a vertex of this model") from None

    def divisor_values(self, D: TropicalDivisor) -> list[int]:
        values = [0] * self.graph.num_vertices
        for p, c in D.coeffs.items():
            values[self.vertex_of(p)] += c
        return values

    def graph_divisor(self, D: TropicalDivisor) -> GraphDivisor:
        return GraphDivisor.from_ints(self.graph, self.divisor_values(D))

    def to_divisor(self, values: Sequence[int]) -> TropicalDivisor:
        return TropicalDivisor(self.curve, [(p, c) for p, c in zip(self.vertex_points, values)])

    def as_curve(self) -> TropicalCurve:
        return TropicalCurve(self.graph, self.lengths)

    def edge_over(self, refined_edge: int) -> int:
        for e, chain in enumerate(self.chains):
            if any(h >> 1 == refined_edge for h in chain):
                return e
        raise ValueError(f"no refined edge {refined_edge}")

    def curve_point(self, p: CurvePoint) -> CurvePoint:
        """The point of the original curve under a point of ``as_curve()``."""
        if p.is_vertex:
            return self.vertex_points[p.vertex]
        e = self.edge_over(p.edge)
        start = Fraction(0)
        for h in self.chains[e]:
            if h >> 1 == p.edge:
                t = p.offset if not h & 1 else self.lengths[p.edge] - p.offset
                return self.curve.point(e, start + t)
            start += self.lengths[h >> 1]
        raise AssertionError("unreachable")

    def push_divisor(self, D: TropicalDivisor) -> TropicalDivisor:
        """Transport a divisor on ``as_curve()`` to the original curve."""
        return TropicalDivisor(self.curve, [(self.curve_point(p), c) for p, c in D.coeffs.items()])

    def pull_divisor(self, D: TropicalDivisor) -> TropicalDivisor:
        """Express a divisor supported on model vertices on ``as_curve()``."""
        return TropicalDivisor.from_vertex_values(self.as_curve(), self.divisor_values(D))

    def refine_flow(self, flow: Flow) -> Flow:
        """Give every refined edge the value of the edge it lies over."""
        values = [None] * self.graph.num_edges
        for e, chain in enumerate(self.chains):
            for h in chain:
                values[h >> 1] = -flow.values[e] if h & 1 else flow.values[e]
        return Flow(self.graph, values, flow.group)


def common_model(curve: TropicalCurve, points: Iterable[CurvePoint]) -> Model:
    """The coarsest refinement of ``curve``'s model containing ``points`` as vertices."""
    cuts: dict[int, set[Fraction]] = {}
    for p in points:
        if not p.is_vertex:
            if not 0 < p.offset < curve.lengths[p.edge]:
                raise ValueError(f"{p} does not lie on the curve")
            cuts.setdefault(p.edge, set()).add(p.offset)
        elif not 0 <= p.vertex < curve.graph.num_vertices:
            raise ValueError(f"{p} does not lie on the curve")
    graph = curve.graph
    lengths = list(curve.lengths)
    vertex_points = [CurvePoint(vertex=v) for v in range(graph.num_vertices)]
    chains = [[2 * e] for e in range(graph.num_edges)]
    for e in sorted(cuts):
        offsets = sorted(cuts[e])
        graph, chain = subdivide(graph, e, len(offsets) + 1)
        stops = [Fraction(0)] + offsets + [curve.lengths[e]]
        pieces = [b - a for a, b in zip(stops, stops[1:])]
        lengths[e] = pieces[0]
        lengths += pieces[1:]
        vertex_points += [CurvePoint(edge=e, offset=t) for t in offsets]
        chains[e] = chain
    return Model(curve, graph, lengths, chains, vertex_points)


class UnitModel(NamedTuple):
    """A unit-length subdivision of a refined model rescaled by ``scale``.

    Vertex ids of ``model.graph`` are kept; ``chains[e]`` lists the unit
    half-edges over half-edge ``2e`` of the refined model.
    """

    graph: Graph
    divisor: list[int]
    scale: int
    model: Model
    chains: list[list[int]]


def unit_laplacian_model(curve: TropicalCurve, D: TropicalDivisor) -> UnitModel:
    model = common_model(curve, D.support)
    scale = math.lcm(*(x.denominator for x in model.lengths)) if model.lengths else 1
    graph = model.graph
    chains = []
    for e, x in enumerate(model.lengths):
        graph, chain = subdivide(graph, e, int(x * scale))
        chains.append(chain)
    divisor = model.divisor_values(D) + [0] * (graph.num_vertices - model.graph.num_vertices)
    return UnitModel(graph, divisor, scale, model, chains)


def laplacian(graph: Graph) -> list[list[int]]:
    """``L = deg - adj`` (loops ignored), so ``div`` of the slope flow of a
    vertex potential ``h`` on a unit graph is ``L h``."""
    n = graph.num_vertices
    L = [[0] * n for _ in range(n)]
    for a, b in graph.edges:
        if a != b:
            L[a][a] += 1
            L[b][b] += 1
            L[a][b] -= 1
            L[b][a] -= 1
    return L


# ---------------------------------------------------------------------------
# rational functions


class RationalFn:
    """Integer slopes on a refined model satisfying the cycle condition."""

    def __init__(self, model: Model, slopes: Flow, check: bool = True):
        if slopes.graph != model.graph or slopes.group != Z:
            raise ValueError("slopes must be an integer flow on the model graph")
        self.model = model
        self.slopes = slopes
        if check and not self.satisfies_cycle_condition():
            raise ValueError("slopes violate the cycle condition")

    def cycle_sums(self) -> list[Fraction]:
        ell = self.model.lengths
        s = self.slopes.ints()
        return [sum((Fraction(z) * s[e] * ell[e] for e, z in enumerate(cyc.ints()) if z), Fraction(0))
                for cyc in h1_generators(self.model.graph)]

    def satisfies_cycle_condition(self) -> bool:
        return not any(self.cycle_sums())

    def potential(self) -> list[Fraction]:
        """Values at model vertices, normalized to 0 at vertex 0."""
        G = self.model.graph
        _, parent = G.spanning_tree()
        values: list[Fraction | None] = [None] * G.num_vertices
        values[0] = Fraction(0)
        for v in G.bfs_order()[1:]:
            h = parent[v]
            values[v] = values[G.source(h)] + int(self.slopes.value(h)) * self.model.lengths[h >> 1]
        return values

    def divisor(self) -> TropicalDivisor:
        return self.model.to_divisor(div_of_flow(self.slopes).ints())

    def is_constant(self) -> bool:
        return self.slopes.is_zero()

    def slopes_over(self, edge: int) -> list[int]:
        """Slopes of the refined edges over ``edge`` in its default orientation."""
        return [int(self.slopes.value(h)) for h in self.model.chains[edge]]

    def to_dict(self) -> dict:
        return {
            "model": self.model.as_curve().to_dict(),
            "slopes": list(self.slopes.ints()),
            "potential": [str(x) for x in self.potential()],
        }


class Principality(NamedTuple):
    principal: bool
    witness: RationalFn | None
    certificate: dict | None


def _verified(D: TropicalDivisor, fn: RationalFn) -> Principality:
    if not fn.satisfies_cycle_condition() or fn.divisor() != D:
        raise ConsistencyError("principality witness failed verification",
                               {"divisor": D.to_dict(), "witness": fn.to_dict()})
    if D.is_zero() and not fn.is_constant():
        raise ConsistencyError("rational function with zero divisor is not constant", fn.to_dict())
    return Principality(True, fn, None)


def _lattice_solve(D: TropicalDivisor) -> Principality:
    """Unknowns: scaled vertex potentials ``h`` and edge slopes ``s`` with
    ``h(target) - h(source) = scale*length*s`` on each edge and ``div(s) = D``."""
    model = common_model(D.curve, D.support)
    G = model.graph
    nv, ne = G.num_vertices, G.num_edges
    scale = math.lcm(*(x.denominator for x in model.lengths)) if ne else 1
    rows, rhs = [], []
    for e, (a, b) in enumerate(G.edges):
        row = [0] * (nv + ne)
        row[b] += 1
        row[a] -= 1
        row[nv + e] = -int(model.lengths[e] * scale)
        rows.append(row)
        rhs.append(0)
    for v in range(nv):
        row = [0] * (nv + ne)
        for e, (a, b) in enumerate(G.edges):
            row[nv + e] += (b == v) - (a == v)
        rows.append(row)
        rhs.append(0)
    dv = model.divisor_values(D)
    for v in range(nv):
        rhs[ne + v] = dv[v]
    pin = [0] * (nv + ne)
    pin[0] = 1
    rows.append(pin)
    rhs.append(0)
    sol = solve_integer(rows, rhs)
    if sol.solution is None:
        return Principality(False, None, {"reason": "lattice", "obstruction": sol.obstruction,
                                          "modulus": sol.modulus, "scale": scale})
    slopes = Flow.from_ints(G, sol.solution[nv:])
    return _verified(D, RationalFn(model, slopes, check=False))


def _unit_solve(D: TropicalDivisor) -> Principality:
    unit = unit_laplacian_model(D.curve, D)
    sol = solve_integer(laplacian(unit.graph), unit.divisor)
    if sol.solution is None:
        return Principality(False, None, {"reason": "laplacian", "obstruction": sol.obstruction,
                                          "modulus": sol.modulus, "scale": unit.scale})
    h = sol.solution
    G = unit.graph
    slopes = []
    for chain in unit.chains:
        first = chain[0]
        slopes.append(h[G.target(first)] - h[G.source(first)])
    return _verified(D, RationalFn(unit.model, Flow.from_ints(unit.model.graph, slopes), check=False))


def is_principal(D: TropicalDivisor, method: str = "lattice") -> Principality:
    """Decide whether ``D`` is the divisor of a rational function.

    Any witness bends only at ``Supp(D)``, so it is linear on each edge of
    the model refined at the support. ``method="lattice"`` solves for integer
    slopes and scaled potentials on that model; ``method="laplacian"``
    subdivides into unit segments and solves ``L h = D``. Both are exact.
    """
    d = D.degree()
    if d:
        return Principality(False, None, {"reason": "degree", "degree": d})
    if method == "lattice":
        return _lattice_solve(D)
    if method == "laplacian":
        return _unit_solve(D)
    raise ValueError(f"unknown method {method!r}")


def equivalent(D1: TropicalDivisor, D2: TropicalDivisor, method: str = "lattice") -> Principality:
    if D1.curve != D2.curve:
        raise ValueError("divisors live on different curves")
    return is_principal(D1 - D2, method)


# ---------------------------------------------------------------------------
# generators of principal divisors


def principal_segment_divisor(curve: TropicalCurve, half_edge: int, a: int, r: int) -> TropicalDivisor:
    """``-(r-1)a*source + r*a*q - a*target`` with ``q`` at distance
    ``length/r`` from the source of ``half_edge``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    G = curve.graph
    q = curve.point_on_half_edge(half_edge, curve.lengths[half_edge >> 1] / r)
    return TropicalDivisor(curve, [(curve.vertex(G.source(half_edge)), -(r - 1) * a),
                                   (q, r * a), (curve.vertex(G.target(half_edge)), -a)])


def four_point_divisor(curve: TropicalCurve, edge: int, offsets: Sequence, a: int) -> TropicalDivisor:
    """``-a p1 + a p2 + a p3 - a p4`` for interior points ``p1 < p2 < p3 < p4``
    of ``edge`` with ``p2 - p1 = p4 - p3``."""
    t = [_fraction(x) for x in offsets]
    if len(t) != 4 or not 0 < t[0] < t[1] < t[2] < t[3] < curve.lengths[edge]:
        raise ValueError("need four increasing interior offsets")
    if t[1] - t[0] != t[3] - t[2]:
        raise ValueError("the two gaps must have equal length")
    pts = [curve.point(edge, x) for x in t]
    return TropicalDivisor(curve, list(zip(pts, (-a, a, a, -a))))


def ramification_divisor_on_curve(R: RamificationSequence, curve: TropicalCurve) -> TropicalDivisor:
    """``b K + sum a_j p_j``, supported on vertices of the curve's model."""
    return TropicalDivisor.from_vertex_values(curve, ramification_divisor(R, curve.graph).ints())
