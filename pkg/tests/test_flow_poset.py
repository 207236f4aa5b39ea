import json

import pytest

from helpers import poset
from oracles import orbit_count
from troproots import (CoefficientGroup, Flow, Graph, Homomorphism, RamificationSequence, Zmod, act_on_flow,
                       automorphism_group, build_flow_poset,
                       canonical_flow, coefficient_change_poset, div_of_flow, poset_fiber_over_graph,
                       ramification_divisor)
from troproots.flow_poset import FlowPoset, flow_stabilizer
from troproots.graphs import dumbbell_graph, theta_graph

LOOP_LEG = Graph([0], [(0, 0)], [0])


def test_theta_fiber_over_z2():
    P = build_flow_poset(2, 0, Zmod(2))
    fiber = poset_fiber_over_graph(P, theta_graph())
    # H_1 = {000, 110, 101, 011}: the zero flow and one orbit of three
    assert len(fiber) == 2 == orbit_count(theta_graph(), 2)[0]
    assert {sum(f.flow.ints()) for f in fiber} == {0, 2}


def test_loop_fiber_over_z3():
    P = build_flow_poset(1, 1, Zmod(3))
    assert len(poset_fiber_over_graph(P, LOOP_LEG)) == 2


def test_dumbbell_fiber_over_z2():
    P = build_flow_poset(2, 0, Zmod(2))
    assert len(poset_fiber_over_graph(P, dumbbell_graph())) == 3 == orbit_count(dumbbell_graph(), 2)[0]


def test_tree_fiber_is_single():
    P = build_flow_poset(0, 4, Zmod(3))
    for G in P.graphs.elements:
        assert len(poset_fiber_over_graph(P, G)) == 1


@pytest.mark.parametrize("g, n", [(1, 1), (2, 0), (1, 2), (2, 1)])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_unique_bottom_and_structure(g, n, m):
    P = build_flow_poset(g, n, Zmod(m), graphs=poset(g, n))
    (bottom,) = P.minimal_elements()
    assert P.elements[bottom].rank == 0 and P.elements[bottom].flow.graph.num_edges == 0
    assert all(P.structure_report().values())
    for el in P.elements:
        assert div_of_flow(el.flow) == ramification_divisor(P.ramification, el.graph)
        assert canonical_flow(el.graph, el.flow)[0] == el.flow


@pytest.mark.parametrize("g, n", [(1, 1), (2, 0), (2, 1)])
def test_fibers_match_burnside(g, n):
    for m in (2, 3):
        P = build_flow_poset(g, n, Zmod(m), graphs=poset(g, n))
        for G in P.graphs.elements:
            exhaustive, burnside = orbit_count(G, m)
            assert len(P.fiber(G)) == exhaustive == burnside


def test_nonzero_ramification():
    R = RamificationSequence.from_ints([1, 1, 0], Zmod(2))
    P = build_flow_poset(1, 2, Zmod(2), R, graphs=poset(1, 2))
    assert all(P.structure_report().values())
    for el in P.elements:
        assert div_of_flow(el.flow) == ramification_divisor(R, el.graph)


def test_errors():
    with pytest.raises(ValueError):
        build_flow_poset(1, 1, CoefficientGroup.parse("Z"))
    with pytest.raises(ValueError):
        build_flow_poset(1, 1, Zmod(3), RamificationSequence.from_ints([1, 0], Zmod(3)))
    with pytest.raises(ValueError):
        build_flow_poset(1, 1, Zmod(3), RamificationSequence.from_ints([0, 0], Zmod(2)))


def test_canonical_flow_is_orbit_minimum():
    T = theta_graph()
    A = Zmod(3)
    f = Flow.from_ints(T, [1, 2, 0], A)
    rep, aut = canonical_flow(T, f)
    assert act_on_flow(aut, f) == rep
    orbit = {act_on_flow(a, f).key() for a in automorphism_group(T)}
    assert rep.key() == min(orbit)
    stab = flow_stabilizer(T, rep)
    assert len(stab) * len(orbit) == len(automorphism_group(T))
    assert all(act_on_flow(a, rep) == rep for a in stab)


def test_coefficient_change_reduction_is_surjective():
    P4 = build_flow_poset(1, 1, Zmod(4))
    P2 = build_flow_poset(1, 1, Zmod(2))
    f = Homomorphism(Zmod(4), Zmod(2), [Zmod(2).from_int(1)])
    m = coefficient_change_poset(f, P4, P2)
    assert m.is_surjective() and m.preserves_rank() and m.preserves_covers() and m.commutes_with_forgetful()


def test_coefficient_change_doubling_is_injective():
    P2 = build_flow_poset(2, 0, Zmod(2))
    f = Homomorphism.multiplication(Zmod(2), Zmod(4), 2)
    m = coefficient_change_poset(f, P2)
    assert m.is_injective() and not m.is_surjective()
    assert m.preserves_rank() and m.preserves_covers()


def test_coefficient_change_identity():
    P = build_flow_poset(2, 0, Zmod(3))
    m = coefficient_change_poset(Homomorphism.identity(Zmod(3)), P, P)
    assert m.images == list(range(len(P)))


@pytest.mark.parametrize("src, dst, d", [(2, 6, 3), (3, 6, 2), (6, 2, 1), (6, 3, 1), (4, 2, 1)])
def test_coefficient_change_follows_f(src, dst, d):
    A, B = Zmod(src), Zmod(dst)
    f = Homomorphism(A, B, [B.from_int(d)])
    m = coefficient_change_poset(f, build_flow_poset(2, 0, A, graphs=poset(2, 0)))
    if f.is_injective():
        assert m.is_injective()
    if f.is_surjective():
        assert m.is_surjective()
    assert m.preserves_rank() and m.preserves_covers()


def test_poset_json_roundtrip_and_dot():
    P = build_flow_poset(2, 1, Zmod(3))
    data = json.loads(json.dumps(P.to_dict()))
    assert FlowPoset.from_dict(data).to_dict() == P.to_dict()
    dot = P.to_dot()
    assert dot.count("->") == len(P.covers)
