"""Generalized cone complexes of tropical curves and of tropical r-th roots.

A cell is an element of an index poset (stable graphs, or pairs of a graph
and a flow modulo ``r``); its cone is the orthant on the graph's edges. A
point is stored in the unique cell containing it in its interior, with
coordinates in the lexicographically smallest order allowed by the cell's
automorphisms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .abelian import (CoefficientGroup, Homomorphism, Z, Zmod, divide_by, gcd_shifted,
                      induced_quotient_hom, is_mult_injective, quotient_mod_r)
from .enumeration import GraphPoset, build_graph_poset, hasse_dot
from .exceptions import ConsistencyError
from .flow_poset import FlowPoset, build_flow_poset, flow_stabilizer
from .flows import Flow, RamificationSequence, act_on_flow, pushforward_flow
from .graphs import Graph, Isomorphism, automorphism_group, contract
from .roots import RootInstance, delta_divisor, phi_flow
from .tropical import TropicalCurve, TropicalDivisor


@dataclass(frozen=True)
class Cell:
    graph_index: int
    graph: Graph
    flow: Flow | None
    automorphisms: tuple[Isomorphism, ...]

    @property
    def dimension(self) -> int:
        return self.graph.num_edges


@dataclass(frozen=True)
class Face:
    """The face of ``upper`` obtained by collapsing ``edge``; ``edge_map``
    sends each edge of ``lower`` to the matching edge of ``upper``."""

    upper: int
    lower: int
    edge: int
    edge_map: tuple[int, ...]


def _transport(coords: Sequence[Fraction], iso: Isomorphism) -> tuple[Fraction, ...]:
    out = [None] * len(coords)
    for e, k in enumerate(iso.edge_map()):
        out[k] = coords[e]
    return tuple(out)


class ConeComplex:
    """Cones indexed by a graph poset (``flows is None``) or a flow poset."""

    def __init__(self, graphs: GraphPoset, flows: FlowPoset | None = None, r: int | None = None,
                 group: CoefficientGroup | None = None, ramification: RamificationSequence | None = None):
        self.graphs = graphs
        self.flows = flows
        self.r = r
        self.group = group
        self.ramification = ramification
        self.quotient = quotient_mod_r(group, r)[1] if flows is not None else None
        self.cells: list[Cell] = []
        if flows is None:
            for gi, G in enumerate(graphs.elements):
                self.cells.append(Cell(gi, G, None, automorphism_group(G)))
        else:
            for el in flows.elements:
                self.cells.append(Cell(el.graph_index, el.graph, el.flow, tuple(flow_stabilizer(el.graph, el.flow))))
        self.faces: list[Face] = []
        seen = set()
        for i, cell in enumerate(self.cells):
            for e in range(cell.dimension):
                j, spec = self._collapse(i, [e])
                if (i, j) in seen:
                    continue
                seen.add((i, j))
                face = spec.face_map()
                self.faces.append(Face(i, j, e, tuple(face[k] for k in range(self.cells[j].dimension))))
        self._moduli = None

    @property
    def genus(self) -> int:
        return self.graphs.genus

    @property
    def legs(self) -> int:
        return self.graphs.legs

    @property
    def is_root_complex(self) -> bool:
        return self.flows is not None

    def __len__(self):
        return len(self.cells)

    def _collapse(self, i: int, edges):
        """Contract ``edges`` of cell ``i``: (target cell, specialization onto
        its stored graph carrying the flow onto its stored flow)."""
        cell = self.cells[i]
        s = contract(cell.graph, edges)
        gj, iso = self.graphs.locate(s.target)
        s = s.then(iso)
        if self.flows is None:
            return gj, s
        j, aut = self.flows.locate(gj, pushforward_flow(s, cell.flow))
        return j, s.then(aut)

    def locate(self, graph: Graph, flow: Flow | None = None) -> tuple[int, Isomorphism]:
        """Cell of ``(graph, flow)`` and an isomorphism of ``graph`` onto the
        cell's graph carrying ``flow`` onto the cell's flow."""
        gi, iso = self.graphs.locate(graph)
        if self.flows is None:
            return gi, iso
        if flow is None:
            raise ValueError("a flow is required to locate a cell of a root complex")
        j, aut = self.flows.locate(gi, act_on_flow(iso, flow))
        return j, aut.compose(iso)

    def point(self, cell: int, coords: Sequence) -> "ComplexPoint":
        """The point with coordinates ``coords`` (nonnegative) in cone ``cell``."""
        coords = tuple(Fraction(x) for x in coords)
        if len(coords) != self.cells[cell].dimension:
            raise ValueError(f"cell {cell} has dimension {self.cells[cell].dimension}")
        if any(x < 0 for x in coords):
            raise ValueError("cone coordinates must be nonnegative")
        zeros = [e for e, x in enumerate(coords) if x == 0]
        if zeros:
            j, s = self._collapse(cell, zeros)
            face = s.face_map()
            return self.point(j, [coords[face[k]] for k in range(self.cells[j].dimension)])
        best = min(_transport(coords, aut) for aut in self.cells[cell].automorphisms)
        return ComplexPoint(self, cell, best)

    def random_interior_point(self, cell: int, rng: random.Random) -> "ComplexPoint":
        return self.point(cell, [Fraction(rng.randint(1, 60), rng.randint(1, 12)) for _ in range(self.cells[cell].dimension)])

    # -- forgetful map --------------------------------------------------
    def scaling(self, cell: int) -> tuple[int, ...]:
        """Per-edge factors ``r / gcd(r, phi(e) + rA)`` (all 1 for moduli)."""
        c = self.cells[cell]
        if c.flow is None:
            return (1,) * c.dimension
        out = []
        for v in c.flow.values:
            g = gcd_shifted(self.r, self.quotient.lift(v))
            out.append(self.r // g)
        return tuple(out)

    @property
    def moduli(self) -> "ConeComplex":
        if self._moduli is None:
            self._moduli = ConeComplex(self.graphs)
        return self._moduli

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        index = self.flows.to_dict() if self.flows is not None else self.graphs.to_dict()
        data = {
            "kind": "roots" if self.flows is not None else "moduli",
            "index": index,
            "cones": [{"cell": i, "graph_index": c.graph_index, "dimension": c.dimension,
                       "automorphisms": len(c.automorphisms)} for i, c in enumerate(self.cells)],
            "faces": [{"upper": f.upper, "lower": f.lower, "edge": f.edge, "edge_map": list(f.edge_map)}
                      for f in self.faces],
        }
        if self.flows is not None:
            data["r"] = self.r
            data["group"] = self.group.to_dict()
        return data

    def to_dot(self) -> str:
        labels = []
        for i, c in enumerate(self.cells):
            flow = "" if c.flow is None else " [" + " ".join(str(v) for v in c.flow.values) + "]"
            labels.append(f"C{i}: G{c.graph_index}{flow}, dim {c.dimension}")
        return hasse_dot(labels, [c.dimension for c in self.cells], [(f.upper, f.lower) for f in self.faces],
                         name="ConeComplex")


@dataclass(frozen=True)
class ComplexPoint:
    complex: ConeComplex
    cell: int
    coords: tuple[Fraction, ...]

    def __eq__(self, other):
        return (isinstance(other, ComplexPoint) and self.complex is other.complex
                and self.cell == other.cell and self.coords == other.coords)

    def __hash__(self):
        return hash((self.cell, self.coords))

    def __repr__(self):
        return f"ComplexPoint(cell={self.cell}, coords={[str(x) for x in self.coords]})"

    def to_dict(self) -> dict:
        return {"cell": self.cell, "coords": [[x.numerator, x.denominator] for x in self.coords]}


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of the compactified complex: a coordinate of ``None`` stands
    for an edge of infinite length. Only serialization is supported."""

    cell: int
    coords: tuple[Fraction | None, ...]

    def to_dict(self) -> dict:
        return {"cell": self.cell,
                "coords": ["inf" if x is None else [x.numerator, x.denominator] for x in self.coords]}

    @classmethod
    def from_dict(cls, data: dict) -> "ExtendedPoint":
        return cls(int(data["cell"]),
                   tuple(None if x == "inf" else Fraction(x[0], x[1]) for x in data["coords"]))


# ---------------------------------------------------------------------------
# constructors


def build_moduli_complex(g: int, n: int) -> ConeComplex:
    return ConeComplex(build_graph_poset(g, n))


def build_root_complex(g: int, n: int, r: int, R: RamificationSequence | None = None,
                       group: CoefficientGroup = Z, graphs: GraphPoset | None = None) -> ConeComplex:
    """Cones over pairs ``(G, phi)`` with ``phi`` a flow modulo ``rA`` whose
    divisor is the universal divisor of ``R`` reduced modulo ``r``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    R = R if R is not None else RamificationSequence.zero(n, group)
    if R.group != group:
        raise ValueError(f"ramification lives in {R.group}, not {group}")
    if divide_by(r, R.degree(g)) is None:
        raise ValueError(f"deg R = {R.degree(g)} is not divisible by r={r}")
    quotient, q = quotient_mod_r(group, r)
    graphs = graphs or build_graph_poset(g, n)
    flows = build_flow_poset(g, n, quotient, R.map(q), graphs=graphs)
    return ConeComplex(graphs, flows, r, group, R)


# ---------------------------------------------------------------------------
# forgetful map and the pair classification


def forgetful_point(cc: ConeComplex, p: ComplexPoint) -> ComplexPoint:
    """Image in the moduli complex: coordinate ``x_e`` becomes ``r/gcd(r, phi(e)) x_e``."""
    if p.complex is not cc:
        raise ValueError("point belongs to another complex")
    if not cc.is_root_complex:
        return p
    cell = cc.cells[p.cell]
    y = [s * x for s, x in zip(cc.scaling(p.cell), p.coords)]
    return cc.moduli.point(cell.graph_index, y)


def _require_integer_roots(cc: ConeComplex):
    if not cc.is_root_complex or cc.group != Z:
        raise ValueError("pairs (curve, root) are only modeled for integer coefficients")


def point_to_pair(cc: ConeComplex, p: ComplexPoint) -> tuple[TropicalCurve, TropicalDivisor]:
    """The curve with lengths ``r/gcd(r, phi(e)) x_e`` and the root attached to the cell's flow."""
    _require_integer_roots(cc)
    cell = cc.cells[p.cell]
    lengths = [s * x for s, x in zip(cc.scaling(p.cell), p.coords)]
    curve = TropicalCurve(cell.graph, lengths)
    inst = RootInstance.from_ramification(curve, cc.ramification, cc.r)
    return curve, delta_divisor(inst, cell.flow)


def classify_pair(cc: ConeComplex, curve: TropicalCurve, root: TropicalDivisor) -> ComplexPoint:
    """The point of the root complex representing ``(curve, [root])``."""
    _require_integer_roots(cc)
    if not curve.graph.is_stable():
        raise ValueError("the curve's model must be its stable model")
    inst = RootInstance.from_ramification(curve, cc.ramification, cc.r)
    phi = phi_flow(inst, root)
    j, iso = cc.locate(curve.graph, phi)
    x = [curve.lengths[e] * gcd_shifted(cc.r, Z.from_int(int(phi.values[e]))) / cc.r
         for e in range(curve.graph.num_edges)]
    return cc.point(j, _transport(x, iso))


def forgetful_fiber(cc: ConeComplex, curve: TropicalCurve) -> set[ComplexPoint]:
    """All points of the root complex lying over the class of ``curve``."""
    from .roots import enumerate_roots

    inst = RootInstance.from_ramification(curve, cc.ramification, cc.r)
    return {classify_pair(cc, curve, rc.divisor) for rc in enumerate_roots(inst)}


# ---------------------------------------------------------------------------
# structure maps between root complexes


class StructureMap:
    """A map of root complexes over the same graph poset: flows are pushed
    through ``flow_map`` and coordinate ``x_e`` is multiplied by an integer
    depending only on the flow value of ``e``."""

    def __init__(self, source: ConeComplex, target: ConeComplex, flow_map: Homomorphism,
                 multiplier: Callable[[object], Fraction]):
        self.source = source
        self.target = target
        self.flow_map = flow_map
        self.multiplier = multiplier
        self.cell_images: list[tuple[int, Isomorphism]] = []
        self.multipliers: list[tuple[int, ...]] = []
        for cell in source.cells:
            mult = []
            for v in cell.flow.values:
                m = Fraction(multiplier(v))
                if m.denominator != 1 or m <= 0:
                    raise ConsistencyError("coordinate multiplier is not a positive integer",
                                           {"value": str(v), "multiplier": str(m)})
                mult.append(int(m))
            self.multipliers.append(tuple(mult))
            self.cell_images.append(target.flows.locate(cell.graph_index, cell.flow.map(flow_map)))

    def cell_map(self) -> list[int]:
        return [j for j, _ in self.cell_images]

    def __call__(self, p: ComplexPoint) -> ComplexPoint:
        if p.complex is not self.source:
            raise ValueError("point belongs to another complex")
        j, aut = self.cell_images[p.cell]
        y = [m * x for m, x in zip(self.multipliers[p.cell], p.coords)]
        return self.target.point(j, _transport(y, aut))

    def is_injective_on_cells(self) -> bool:
        images = self.cell_map()
        return len(set(images)) == len(images)

    def is_surjective_on_cells(self) -> bool:
        return set(self.cell_map()) == set(range(len(self.target)))

    def commutes_with_forgetful(self, p: ComplexPoint) -> bool:
        lhs = forgetful_point(self.target, self(p))
        rhs = forgetful_point(self.source, p)
        return lhs.cell == rhs.cell and lhs.coords == rhs.coords


def inclusion_map(g: int, n: int, r_prime: int, d: int, R_prime: RamificationSequence | None = None,
                  graphs: GraphPoset | None = None) -> StructureMap:
    """From r'-roots of ``R'`` to r-roots of ``d R'`` (``r = d r'``): the flow
    class of ``phi`` goes to that of ``d phi`` and coordinates are kept."""
    if r_prime < 2 or d < 1:
        raise ValueError("need r' >= 2 and d >= 1")
    graphs = graphs or build_graph_poset(g, n)
    R_prime = R_prime if R_prime is not None else RamificationSequence.zero(n)
    source = build_root_complex(g, n, r_prime, R_prime, graphs=graphs)
    target = build_root_complex(g, n, d * r_prime, R_prime.scaled(d), graphs=graphs)
    hom = Homomorphism.multiplication(Zmod(r_prime), Zmod(d * r_prime), d)
    return StructureMap(source, target, hom, lambda v: 1)


def power_map(g: int, n: int, r: int, r_prime: int, R: RamificationSequence | None = None,
              graphs: GraphPoset | None = None) -> StructureMap:
    """From r-roots to r'-roots of the same divisor (``r' | r``), sending a
    root ``D'`` to ``(r/r') D'``; flows are reduced modulo ``r'``."""
    if r_prime < 2 or r % r_prime:
        raise ValueError(f"r'={r_prime} must be at least 2 and divide r={r}")
    graphs = graphs or build_graph_poset(g, n)
    source = build_root_complex(g, n, r, R, graphs=graphs)
    target = build_root_complex(g, n, r_prime, R, graphs=graphs)
    hom = Homomorphism(Zmod(r), Zmod(r_prime), [Zmod(r_prime).from_int(1)])

    def multiplier(v):
        k = int(v)
        return Fraction(r * gcd_shifted(r_prime, Z.from_int(k)), r_prime * gcd_shifted(r, Z.from_int(k)))

    return StructureMap(source, target, hom, multiplier)


def coefficient_change_map(f: Homomorphism, g: int, n: int, r: int, R: RamificationSequence | None = None,
                           graphs: GraphPoset | None = None) -> StructureMap:
    """From r-roots with coefficients in ``A`` to those in ``B`` along ``f: A -> B``."""
    for grp in (f.source, f.target):
        if not is_mult_injective(grp, r):
            raise ValueError(f"multiplication by {r} is not injective on {grp}")
    graphs = graphs or build_graph_poset(g, n)
    R = R if R is not None else RamificationSequence.zero(n, f.source)
    source = build_root_complex(g, n, r, R, f.source, graphs=graphs)
    target = build_root_complex(g, n, r, R.map(f), f.target, graphs=graphs)
    fbar = induced_quotient_hom(f, r)

    def multiplier(v):
        a = source.quotient.lift(v)
        return Fraction(gcd_shifted(r, f(a)), gcd_shifted(r, a))

    return StructureMap(source, target, fbar, multiplier)
