"""Self-check suites that exercise the structural statements on small instances.

Every suite returns a JSON-ready report ``{"suite", "passed", "checks"}``;
a failing check carries a counterexample payload.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .abelian import (CoefficientGroup, GroupElement, Homomorphism, Z, Zmod, gcd_shifted,
                      is_mult_injective, torsion_root)
from .cone_complex import (build_root_complex, classify_pair, coefficient_change_map, forgetful_point,
                           inclusion_map, point_to_pair, power_map)
from .enumeration import build_graph_poset
from .flow_poset import build_flow_poset
from .flows import RamificationSequence, act_on_flow, kirchhoff_flows
from .graphs import automorphism_group
from .roots import RootInstance, verify_root_bijection
from .tropical import TropicalCurve

SUITES = ("graphs", "poset", "roots", "complex", "maps", "gcd")


def _check(name: str, passed: bool, counterexample=None, **details) -> dict:
    out = {"name": name, "passed": bool(passed), **details}
    if not passed and counterexample is not None:
        out["counterexample"] = counterexample
    return out


def _report(suite: str, checks: list[dict]) -> dict:
    return {"suite": suite, "passed": all(c["passed"] for c in checks), "checks": checks}


def random_lengths(rng: random.Random, count: int) -> list[Fraction]:
    return [Fraction(rng.randint(1, 20), rng.randint(1, 6)) for _ in range(count)]


def burnside_count(graph, group: CoefficientGroup) -> int:
    """Orbits of ``Aut(graph)`` on ``H_1(graph, group)`` by counting fixed points."""
    auts = automorphism_group(graph)
    cycles = kirchhoff_flows(graph, group)
    fixed = sum(1 for aut in auts for phi in cycles if act_on_flow(aut, phi) == phi)
    if fixed % len(auts):
        raise AssertionError("Burnside sum is not divisible by the group order")
    return fixed // len(auts)


def verify_graphs(g: int, n: int) -> dict:
    P = build_graph_poset(g, n)
    dim = 3 * g - 3 + n
    maxima = P.maximal_elements()
    return _report("graphs", [
        _check("unique_minimal", len(P.minimal_elements()) == 1, count=len(P)),
        _check("maximal_three_regular", all(P.elements[i].is_three_regular() for i in maxima),
               [P.elements[i].to_dict() for i in maxima if not P.elements[i].is_three_regular()]),
        _check("ranked_of_dimension", P.maximal_chain_lengths() == {dim},
               {"chain_lengths": sorted(P.maximal_chain_lengths()), "expected": dim}),
        _check("connected", P.is_connected()),
    ])


def verify_poset(g: int, n: int, group: CoefficientGroup, R: RamificationSequence | None = None) -> dict:
    P = build_flow_poset(g, n, group, R)
    checks = [_check(name, ok) for name, ok in P.structure_report().items()]
    zero_ramification = all(a.is_zero() for a in P.ramification.entries) and P.ramification.ell.is_zero()
    for gi, G in enumerate(P.graphs.elements):
        fiber = [el for el in P.elements if el.graph_index == gi]
        if zero_ramification:
            expected = burnside_count(G, group)
            checks.append(_check(f"fiber_law[G{gi}]", len(fiber) == expected,
                                 {"graph": G.to_dict(), "found": len(fiber), "expected": expected}))
        else:
            checks.append(_check(f"fiber_nonempty[G{gi}]", bool(fiber), {"graph": G.to_dict()}))
    return _report("poset", checks)


def verify_roots(g: int, n: int, r: int, R: RamificationSequence | None = None, seed: int = 0,
                 samples: int = 1, max_edges: int | None = None) -> dict:
    rng = random.Random(seed)
    R = R if R is not None else RamificationSequence.zero(n)
    if int(R.degree(g)) % r:
        raise ValueError(f"deg R = {int(R.degree(g))} is not divisible by r={r}")
    checks = []
    for gi, G in enumerate(build_graph_poset(g, n).elements):
        if max_edges is not None and G.num_edges > max_edges:
            continue
        for k in range(samples):
            curve = TropicalCurve(G, random_lengths(rng, G.num_edges))
            inst = RootInstance.from_ramification(curve, R, r)
            rep = verify_root_bijection(inst, seed=rng.randrange(2**31))
            failed = [c.to_dict() for c in rep.checks if not c.passed]
            checks.append(_check(f"bijection[G{gi}#{k}]", rep.passed,
                                 {"curve": curve.to_dict(), "failed": failed}, roots=inst.expected_count()))
    return _report("roots", checks)


def verify_complex(g: int, n: int, r: int, R: RamificationSequence | None = None, seed: int = 0) -> dict:
    rng = random.Random(seed)
    cc = build_root_complex(g, n, r, R)
    checks = []
    for i, cell in enumerate(cc.cells):
        p = cc.random_interior_point(i, rng)
        y = forgetful_point(cc, p)
        expected = cc.moduli.point(cell.graph_index, [
            x * (r // gcd_shifted(r, Z.from_int(int(v)))) for x, v in zip(p.coords, cell.flow.values)])
        checks.append(_check(f"forgetful_scaling[C{i}]", y == expected,
                             {"point": p.to_dict(), "image": y.to_dict(), "expected": expected.to_dict()}))
        curve, root = point_to_pair(cc, p)
        back = classify_pair(cc, curve, root)
        checks.append(_check(f"classify_roundtrip[C{i}]", back == p,
                             {"point": p.to_dict(), "recovered": back.to_dict()}))
    for face in cc.faces:
        q = cc.random_interior_point(face.lower, rng)
        coords = [Fraction(0)] * cc.cells[face.upper].dimension
        for k, e in enumerate(face.edge_map):
            coords[e] = q.coords[k]
        lifted = cc.point(face.upper, coords)
        same = lifted == q and forgetful_point(cc, lifted) == forgetful_point(cc, q)
        checks.append(_check(f"face[{face.upper}->{face.lower}]", same, {"point": q.to_dict()}))
    return _report("complex", checks)


def verify_maps(g: int, n: int, r: int, r_prime: int, seed: int = 0, points: int = 20) -> dict:
    """Inclusion and power maps between r- and r'-root complexes, plus two
    coefficient changes, on ``points`` sampled points each."""
    if r % r_prime:
        raise ValueError(f"r'={r_prime} must divide r={r}")
    rng = random.Random(seed)
    graphs = build_graph_poset(g, n)
    checks = []

    def sample(m, count):
        cells = [i for i, c in enumerate(m.source.cells) if c.dimension]
        return [m.source.random_interior_point(rng.choice(cells), rng) for _ in range(count)] if cells else []

    inc = inclusion_map(g, n, r_prime, r // r_prime, graphs=graphs)
    pts = sample(inc, points)
    images = [inc(p) for p in pts]
    checks.append(_check("inclusion_injective_on_cells", inc.is_injective_on_cells()))
    checks.append(_check("inclusion_injective_on_points",
                         len({(q.cell, q.coords) for q in images}) == len({(p.cell, p.coords) for p in pts})))
    checks.append(_check("inclusion_keeps_coordinates",
                         all(sorted(q.coords) == sorted(p.coords) for p, q in zip(pts, images))))
    checks.append(_check("inclusion_forgetful", all(inc.commutes_with_forgetful(p) for p in pts)))

    pw = power_map(g, n, r, r_prime, graphs=graphs)
    pts = sample(pw, points)
    checks.append(_check("power_surjective_on_cells", pw.is_surjective_on_cells()))
    checks.append(_check("power_forgetful", all(pw.commutes_with_forgetful(p) for p in pts)))

    Zx3 = CoefficientGroup.parse("Z x Z/3")
    for name, f in (("inclusion_Z_to_ZxZ3", Homomorphism(Z, Zx3, [Zx3.element([1], [0])])),
                    ("projection_ZxZ3_to_Z", Homomorphism(Zx3, Z, [Z.from_int(1), Z.zero()]))):
        if not (is_mult_injective(f.source, r) and is_mult_injective(f.target, r)):
            continue
        cm = coefficient_change_map(f, g, n, r, graphs=graphs)
        pts = sample(cm, points)
        # f injective (surjective) forces the induced map to be injective (surjective)
        checks.append(_check(f"{name}_injectivity", cm.is_injective_on_cells() or not f.is_injective(),
                             f_injective=f.is_injective(), map_injective=cm.is_injective_on_cells()))
        checks.append(_check(f"{name}_surjectivity", cm.is_surjective_on_cells() or not f.is_surjective(),
                             f_surjective=f.is_surjective(), map_surjective=cm.is_surjective_on_cells()))
        checks.append(_check(f"{name}_forgetful", all(cm.commutes_with_forgetful(p) for p in pts)))
    return _report("maps", checks)


def random_group(rng: random.Random) -> CoefficientGroup:
    return rng.choice([Z, Zmod(rng.randint(2, 12)), CoefficientGroup(1, (rng.randint(2, 9),))])


def random_element(rng: random.Random, group: CoefficientGroup) -> GroupElement:
    return group.element([rng.randint(-30, 30) for _ in range(group.free_rank)],
                         [rng.randrange(m) for m in group.torsion])


def verify_gcd(seed: int = 0, count: int = 200) -> dict:
    """``gcd(db, da + dbA) = d gcd(b, a + bA)`` when ``d`` is injective on
    ``A``, and torsion elements are divisible by ``r`` when ``r`` is."""
    rng = random.Random(seed)
    checks = []
    identity_ok = True
    bad = None
    torsion_cases = 0
    torsion_ok = True
    for _ in range(count):
        A = random_group(rng)
        a = random_element(rng, A)
        b = rng.choice([-1, 1]) * rng.randint(1, 12)
        d = rng.randint(1, 6)
        while not is_mult_injective(A, d):
            d = rng.randint(1, 6)
        lhs = gcd_shifted(d * b, a * d)
        rhs = d * gcd_shifted(b, a)
        if lhs != rhs and identity_ok:
            identity_ok = False
            bad = {"group": str(A), "a": str(a), "b": b, "d": d, "lhs": lhs, "rhs": rhs}
        if A.torsion:
            t = A.element([0] * A.free_rank, [rng.randrange(m) for m in A.torsion])
            r = rng.randint(1, 12)
            if is_mult_injective(A, r):
                torsion_cases += 1
                try:
                    x = torsion_root(r, t)
                    torsion_ok &= x * r == t
                except (ValueError, AssertionError):
                    torsion_ok = False
    checks.append(_check("gcd_scaling_identity", identity_ok, bad, instances=count))
    checks.append(_check("torsion_divisibility", torsion_ok, instances=torsion_cases))
    return _report("gcd", checks)


def run_suites(names: Iterable[str], g: int, n: int, r: int, group: CoefficientGroup,
               R: RamificationSequence | None, seed: int) -> dict:
    reports = []
    for name in names:
        if name == "graphs":
            reports.append(verify_graphs(g, n))
        elif name == "poset":
            Rbar = None
            if R is not None:
                Rbar = RamificationSequence([group.from_int(int(a)) for a in R.entries], group.from_int(int(R.ell)))
            reports.append(verify_poset(g, n, group, Rbar))
        elif name == "roots":
            reports.append(verify_roots(g, n, r, R, seed))
        elif name == "complex":
            reports.append(verify_complex(g, n, r, R, seed))
        elif name == "maps":
            r_prime = next((k for k in range(2, r) if r % k == 0), r)
            reports.append(verify_maps(g, n, r, r_prime, seed))
        elif name == "gcd":
            reports.append(verify_gcd(seed))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return {"passed": all(rep["passed"] for rep in reports), "seed": seed, "reports": reports}
