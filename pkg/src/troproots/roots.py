"""r-th roots of a divisor class on a tropical curve and their
correspondence with flows modulo r.

``delta_divisor`` turns a Z/r-flow whose divisor is the reduction of the
base divisor into a root; ``phi_flow`` reads the flow back off a root.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .abelian import Zmod
from .exceptions import ConsistencyError
from .flows import Flow, GraphDivisor, RamificationSequence, div_of_flow, enumerate_flow_fiber
from .tropical import (Model, TropicalCurve, TropicalDivisor, common_model, equivalent, is_principal,
                       principal_segment_divisor, ramification_divisor_on_curve)


class RootInstance:
    """A curve, a base divisor supported on its model vertices and an
    integer ``r >= 2`` dividing the degree."""

    def __init__(self, curve: TropicalCurve, base_divisor: TropicalDivisor, r: int):
        if r < 2:
            raise ValueError("r must be at least 2")
        if base_divisor.curve != curve:
            raise ValueError("base divisor lives on a different curve")
        if any(not p.is_vertex for p in base_divisor.support):
            raise ValueError("base divisor must be supported on model vertices")
        if base_divisor.degree() % r:
            raise ValueError(f"degree {base_divisor.degree()} is not divisible by r={r}")
        self.curve = curve
        self.base_divisor = base_divisor
        self.r = r
        self.group = Zmod(r)

    @classmethod
    def from_ramification(cls, curve: TropicalCurve, R: RamificationSequence, r: int) -> "RootInstance":
        return cls(curve, ramification_divisor_on_curve(R, curve), r)

    @property
    def graph(self):
        return self.curve.graph

    def vertex_values(self) -> list[int]:
        return [self.base_divisor[self.curve.vertex(v)] for v in range(self.graph.num_vertices)]

    def reduced_divisor(self) -> GraphDivisor:
        """The base divisor modulo ``r``, as a Z/r-divisor on the model."""
        return GraphDivisor.from_ints(self.graph, self.vertex_values(), self.group)

    def fiber(self) -> list[Flow]:
        return enumerate_flow_fiber(self.graph, self.reduced_divisor())

    def expected_count(self) -> int:
        return self.r ** self.curve.b1

    def to_dict(self) -> dict:
        return {"curve": self.curve.to_dict(), "base_divisor": self.base_divisor.to_dict(), "r": self.r}


@dataclass(frozen=True)
class RootClass:
    flow: Flow
    divisor: TropicalDivisor = field(compare=False)

    def to_dict(self) -> dict:
        return {"flow": [int(v) for v in self.flow.values], "divisor": self.divisor.to_dict()}


def _delta_on_model(curve: TropicalCurve, vertex_values: Sequence[int], r: int, phi_bar: Flow,
                    orientation: Sequence[int] | None, lift: Mapping[int, int] | None) -> TropicalDivisor:
    G = curve.graph
    orientation = list(orientation) if orientation is not None else [2 * e for e in range(G.num_edges)]
    if sorted(h >> 1 for h in orientation) != list(range(G.num_edges)):
        raise ValueError("orientation must pick one half-edge per edge")
    lift = dict(lift or {})
    numer = list(vertex_values)
    points = []
    for h in orientation:
        e = h >> 1
        x = int(phi_bar.value(h)) % r
        if e in lift:
            if (lift[e] - x) % r:
                raise ValueError(f"lift {lift[e]} of edge {e} is not congruent to {x} mod {r}")
            x = lift[e]
        numer[G.source(h)] -= (r - 1) * x
        numer[G.target(h)] -= x
        if x:
            points.append((curve.point_on_half_edge(h, curve.lengths[e] / r), x))
    if any(c % r for c in numer):
        raise ConsistencyError("vertex numerators not divisible by r",
                               {"numerators": numer, "flow": phi_bar.to_dict()})
    return TropicalDivisor(curve, [(curve.vertex(v), c // r) for v, c in enumerate(numer)] + points)


def delta_divisor(inst: RootInstance, phi_bar: Flow, model: Model | None = None,
                  orientation: Sequence[int] | None = None, lift: Mapping[int, int] | None = None) -> TropicalDivisor:
    """The divisor attached to a flow modulo ``r``.

    Each edge, in the chosen orientation (default ``2e``), gets the integer
    lift of its value (default in ``[0, r)``) placed at distance
    ``length/r`` from its source; vertices get the base divisor corrected by
    the incident lifts and divided by ``r``. With ``model`` the construction
    runs on that refinement (``orientation`` and ``lift`` then refer to the
    refined edges) and the result is transported back to ``inst.curve``.
    """
    if phi_bar.group != inst.group:
        raise ValueError(f"flow must take values in {inst.group}")
    if model is None:
        if phi_bar.graph != inst.graph:
            raise ValueError("flow does not live on the curve's model")
        if div_of_flow(phi_bar) != inst.reduced_divisor():
            raise ValueError("divisor of the flow is not the base divisor modulo r")
        return _delta_on_model(inst.curve, inst.vertex_values(), inst.r, phi_bar, orientation, lift)
    if model.curve != inst.curve:
        raise ValueError("model refines a different curve")
    refined = model.refine_flow(phi_bar) if phi_bar.graph == inst.graph else phi_bar
    fine = model.as_curve()
    values = model.divisor_values(inst.base_divisor)
    if div_of_flow(refined) != GraphDivisor.from_ints(model.graph, values, inst.group):
        raise ValueError("divisor of the flow is not the base divisor modulo r")
    return model.push_divisor(_delta_on_model(fine, values, inst.r, refined, orientation, lift))


def phi_flow(inst: RootInstance, root: TropicalDivisor) -> Flow:
    """The flow modulo ``r`` read off the slopes of a rational function with
    divisor ``base - r*root``."""
    result = is_principal(inst.base_divisor - root * inst.r)
    if not result.principal:
        raise ValueError("r times the given divisor is not equivalent to the base divisor")
    fn = result.witness
    values = []
    for e in range(inst.graph.num_edges):
        slopes = fn.slopes_over(e)
        residues = {s % inst.r for s in slopes}
        if len(residues) != 1:
            raise ConsistencyError("refined slopes over one edge disagree modulo r",
                                   {"edge": e, "slopes": slopes, "root": root.to_dict()})
        values.append(inst.group.from_int(residues.pop()))
    phi = Flow(inst.graph, values, inst.group)
    if div_of_flow(phi) != inst.reduced_divisor():
        raise ConsistencyError("recovered flow has the wrong divisor", {"flow": phi.to_dict()})
    return phi


def enumerate_roots(inst: RootInstance, verify: bool = False) -> list[RootClass]:
    """One root per flow in the fiber over the reduced base divisor."""
    roots = [RootClass(phi, delta_divisor(inst, phi)) for phi in inst.fiber()]
    if verify:
        for a, b in itertools.combinations(roots, 2):
            if equivalent(a.divisor, b.divisor).principal:
                raise ConsistencyError("two flows give equivalent roots",
                                       {"first": a.to_dict(), "second": b.to_dict()})
    return roots


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class BijectionReport:
    instance: RootInstance
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "r": self.instance.r, "b1": self.instance.curve.b1,
                "checks": [c.to_dict() for c in self.checks]}


def _random_interior_offset(rng: random.Random, length: Fraction) -> Fraction:
    while True:
        t = Fraction(rng.randint(1, 29), 30) * length
        if 0 < t < length:
            return t


def verify_root_bijection(inst: RootInstance, seed: int = 0, pairwise: bool = True) -> BijectionReport:
    """Check the flow/root correspondence exhaustively on one instance."""
    rng = random.Random(seed)
    G = inst.graph
    r = inst.r
    fiber = inst.fiber()
    roots = [(phi, delta_divisor(inst, phi)) for phi in fiber]
    checks = []

    def run(name, items, test):
        result = CheckResult(name, True)
        for item in items:
            result.checked += 1
            bad = test(item)
            if bad is not None:
                result.passed = False
                result.counterexample = bad
                break
        checks.append(result)

    count = len(fiber)
    checks.append(CheckResult("fiber_count", count == inst.expected_count(), 1,
                              None if count == inst.expected_count()
                              else {"found": count, "expected": inst.expected_count()}))

    def scaled_root(item):
        phi, D = item
        if not equivalent(D * r, inst.base_divisor).principal:
            return {"flow": phi.to_dict(), "root": D.to_dict()}

    run("r_times_root_equivalent", roots, scaled_root)

    def phi_of_delta(item):
        phi, D = item
        back = phi_flow(inst, D)
        if back != phi:
            return {"flow": phi.to_dict(), "recovered": back.to_dict()}

    run("phi_after_delta", roots, phi_of_delta)

    def delta_of_phi(item):
        phi, D = item
        # move to another representative of the class before reading it back
        if G.num_edges:
            h = rng.randrange(2 * G.num_edges)
            D = D + principal_segment_divisor(inst.curve, h, rng.randint(1, 3), rng.randint(2, 4))
        again = delta_divisor(inst, phi_flow(inst, D))
        if not equivalent(again, D).principal:
            return {"root": D.to_dict(), "image": again.to_dict()}

    run("delta_after_phi", roots, delta_of_phi)

    if pairwise:
        def distinct(pair):
            (p1, d1), (p2, d2) = pair
            if equivalent(d1, d2).principal:
                return {"first": p1.to_dict(), "second": p2.to_dict()}

        run("pairwise_inequivalent", itertools.combinations(roots, 2), distinct)

    def orientation_free(item):
        phi, D = item
        for e in range(G.num_edges):
            orient = [2 * k for k in range(G.num_edges)]
            orient[e] ^= 1
            other = delta_divisor(inst, phi, orientation=orient)
            if not equivalent(other, D).principal:
                return {"flow": phi.to_dict(), "flipped_edge": e}

    run("orientation_independent", roots, orientation_free)

    def lift_free(item):
        phi, D = item
        for e in range(G.num_edges):
            shift = rng.choice((-1, 1)) * r
            other = delta_divisor(inst, phi, lift={e: int(phi.values[e]) % r + shift})
            if not equivalent(other, D).principal:
                return {"flow": phi.to_dict(), "edge": e, "shift": shift}

    run("lift_independent", roots, lift_free)

    def refinement_free(item):
        phi, D = item
        if not G.num_edges:
            return None
        e = rng.randrange(G.num_edges)
        p = inst.curve.point(e, _random_interior_offset(rng, inst.curve.lengths[e]))
        other = delta_divisor(inst, phi, model=common_model(inst.curve, [p]))
        if not equivalent(other, D).principal:
            return {"flow": phi.to_dict(), "point": p.to_dict()}

    run("refinement_independent", roots, refinement_free)
    return BijectionReport(inst, checks)


def is_root(inst: RootInstance, D: TropicalDivisor) -> bool:
    return is_principal(inst.base_divisor - D * inst.r).principal
