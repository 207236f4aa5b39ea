"""The poset of pairs (stable graph, flow with the universal divisor)."""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import CoefficientGroup, Homomorphism
from .enumeration import GraphPoset, build_graph_poset, hasse_dot, is_connected, maximal_chain_lengths
from .exceptions import ConsistencyError
from .flows import (Flow, RamificationSequence, act_on_flow, div_of_flow,
                    enumerate_flow_fiber, pushforward_flow, ramification_divisor)
from .graphs import Graph, Isomorphism, automorphism_group


def canonical_flow(graph: Graph, flow: Flow) -> tuple[Flow, Isomorphism]:
    """The lexicographically smallest flow in the ``Aut(graph)``-orbit of
    ``flow``, together with an automorphism carrying ``flow`` onto it."""
    best = None
    for aut in automorphism_group(graph):
        image = act_on_flow(aut, flow)
        if best is None or image.key() < best[0].key():
            best = (image, aut)
    return best


def flow_stabilizer(graph: Graph, flow: Flow) -> list[Isomorphism]:
    """``Aut(graph, flow)``."""
    return [aut for aut in automorphism_group(graph) if act_on_flow(aut, flow) == flow]


@dataclass(frozen=True)
class FlowPosetElement:
    graph_index: int
    graph: Graph
    flow: Flow

    @property
    def rank(self) -> int:
        return self.graph.num_edges

    def key(self) -> tuple:
        return (self.graph_index, self.flow.key())

    def to_dict(self) -> dict:
        return {"graph_index": self.graph_index, "graph": self.graph.to_dict(), "flow": self.flow.to_dict()}


class FlowPoset:
    """Pairs ``(G, phi)`` with ``div(phi) = D_{R,G}`` up to isomorphism,
    ordered by specialization and ranked by the number of edges."""

    def __init__(self, graphs: GraphPoset, group: CoefficientGroup, ramification: RamificationSequence,
                 elements: list[FlowPosetElement]):
        self.graphs = graphs
        self.group = group
        self.ramification = ramification
        self.elements = elements
        self.index = {el.key(): i for i, el in enumerate(elements)}
        self.covers: list[tuple[int, int]] = []
        seen = set()
        for i, el in enumerate(elements):
            for e in range(el.graph.num_edges):
                j = self.contract_element(i, e)
                if (i, j) not in seen:
                    seen.add((i, j))
                    self.covers.append((i, j))

    @property
    def genus(self) -> int:
        return self.graphs.genus

    @property
    def legs(self) -> int:
        return self.graphs.legs

    def __len__(self):
        return len(self.elements)

    def contract_element(self, i: int, e: int) -> int:
        el = self.elements[i]
        gj, spec = self.graphs.contractions[(el.graph_index, e)]
        pushed = pushforward_flow(spec, el.flow)
        if div_of_flow(pushed) != ramification_divisor(self.ramification, spec.target):
            raise ConsistencyError("contracted flow lost the universal divisor",
                                   {"element": el.to_dict(), "edge": e})
        return self.locate(gj, pushed)[0]

    def locate(self, graph_index: int, flow: Flow) -> tuple[int, Isomorphism]:
        """Element index of ``(graphs[graph_index], flow)`` and the automorphism
        taking ``flow`` to the stored representative."""
        rep, aut = canonical_flow(self.graphs.elements[graph_index], flow)
        try:
            return self.index[(graph_index, rep.key())], aut
        except KeyError:
            raise ValueError("flow does not define an element of this poset") from None

    def locate_pair(self, graph: Graph, flow: Flow) -> int:
        gi, iso = self.graphs.locate(graph)
        return self.locate(gi, act_on_flow(iso, flow))[0]

    @property
    def ranks(self) -> list[int]:
        return [el.rank for el in self.elements]

    @property
    def dimension(self) -> int:
        return max(self.ranks)

    def lower_covers(self, i: int) -> list[int]:
        return [l for u, l in self.covers if u == i]

    def upper_covers(self, i: int) -> list[int]:
        return [u for u, l in self.covers if l == i]

    def minimal_elements(self) -> list[int]:
        has_lower = {u for u, _ in self.covers}
        return [i for i in range(len(self)) if i not in has_lower]

    def maximal_elements(self) -> list[int]:
        has_upper = {l for _, l in self.covers}
        return [i for i in range(len(self)) if i not in has_upper]

    def maximal_chain_lengths(self) -> set[int]:
        return maximal_chain_lengths(len(self), self.covers)

    def is_ranked(self) -> bool:
        return len(self.maximal_chain_lengths()) == 1

    def is_connected(self) -> bool:
        return is_connected(len(self), self.covers)

    def forgetful_map(self) -> list[int]:
        """Element index -> index of its graph in the graph poset."""
        return [el.graph_index for el in self.elements]

    def forgetful_is_surjective_map_of_ranked_posets(self) -> bool:
        images = self.forgetful_map()
        if set(images) != set(range(len(self.graphs))):
            return False
        graph_covers = {(c.upper, c.lower) for c in self.graphs.covers}
        if any((images[u], images[l]) not in graph_covers for u, l in self.covers):
            return False
        return all(self.graphs.elements[g].num_edges == el.rank for g, el in zip(images, self.elements))

    def fiber(self, graph: Graph) -> list[FlowPosetElement]:
        gi, _ = self.graphs.locate(graph)
        return [el for el in self.elements if el.graph_index == gi]

    def structure_report(self) -> dict:
        """The four structural properties of the poset, each as a boolean."""
        maxima = self.maximal_elements()
        return {
            "unique_minimal": len(self.minimal_elements()) == 1,
            "maximal_three_regular": all(self.elements[i].graph.is_three_regular() for i in maxima),
            "ranked_of_dimension": self.maximal_chain_lengths() == {3 * self.genus - 3 + self.legs},
            "connected": self.is_connected(),
            "forgetful_surjective": self.forgetful_is_surjective_map_of_ranked_posets(),
        }

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "legs": self.legs,
            "group": self.group.to_dict(),
            "ramification": self.ramification.to_dict(),
            "elements": [el.to_dict() for el in self.elements],
            "covers": sorted([u, l] for u, l in self.covers),
            "ranks": self.ranks,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FlowPoset":
        """Rebuild from ``to_dict`` output. Every graph carries at least one
        flow, so the graph poset is recovered from the elements."""
        graphs = {}
        for el in data["elements"]:
            graphs.setdefault(el["graph_index"], Graph.from_dict(el["graph"]))
        if sorted(graphs) != list(range(len(graphs))):
            raise ValueError("graph indices are not contiguous")
        graph_poset = GraphPoset(data["genus"], data["legs"], [graphs[i] for i in range(len(graphs))])
        group = CoefficientGroup.from_dict(data["group"])
        elements = [FlowPosetElement(el["graph_index"], graphs[el["graph_index"]],
                                     Flow.from_dict(graphs[el["graph_index"]], el["flow"], group))
                    for el in data["elements"]]
        return cls(graph_poset, group, RamificationSequence.from_dict(data["ramification"]), elements)

    def to_dot(self) -> str:
        labels = [f"G{el.graph_index}: [{' '.join(str(v) for v in el.flow.values)}]" for el in self.elements]
        return hasse_dot(labels, self.ranks, self.covers, name="FlowPoset")


def poset_fiber_over_graph(p: FlowPoset, graph: Graph) -> list[FlowPosetElement]:
    return p.fiber(graph)


def build_flow_poset(g: int, n: int, group: CoefficientGroup, R: RamificationSequence | None = None,
                     graphs: GraphPoset | None = None) -> FlowPoset:
    if not group.is_finite:
        raise ValueError(f"flow posets are only built for finite groups, got {group}")
    R = R if R is not None else RamificationSequence.zero(n, group)
    if R.group != group:
        raise ValueError(f"ramification lives in {R.group}, not {group}")
    if R.n != n:
        raise ValueError(f"ramification has {R.n} leg entries, expected {n}")
    if R.degree(g):
        raise ValueError(f"ramification sequence has degree {R.degree(g)} != 0")
    graphs = graphs or build_graph_poset(g, n)
    elements = []
    for gi, G in enumerate(graphs.elements):
        D = ramification_divisor(R, G)
        reps = {}
        for phi in enumerate_flow_fiber(G, D):
            rep, _ = canonical_flow(G, phi)
            reps.setdefault(rep.key(), rep)
        elements += [FlowPosetElement(gi, G, reps[k]) for k in sorted(reps)]
    return FlowPoset(graphs, group, R, elements)


class PosetMap:
    """An element-wise map between two flow posets over the same graph poset."""

    def __init__(self, source: FlowPoset, target: FlowPoset, images: list[int]):
        self.source = source
        self.target = target
        self.images = images

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return set(self.images) == set(range(len(self.target)))

    def preserves_rank(self) -> bool:
        return all(self.source.elements[i].rank == self.target.elements[j].rank for i, j in enumerate(self.images))

    def preserves_covers(self) -> bool:
        covers = set(self.target.covers)
        return all((self.images[u], self.images[l]) in covers for u, l in self.source.covers)

    def commutes_with_forgetful(self) -> bool:
        return all(self.source.elements[i].graph_index == self.target.elements[j].graph_index
                   for i, j in enumerate(self.images))


def coefficient_change_poset(f: Homomorphism, p: FlowPoset, target: FlowPoset | None = None) -> PosetMap:
    """``(G, phi) -> (G, f o phi)`` from ``F(A, R)`` to ``F(B, f(R))``."""
    if f.source != p.group:
        raise ValueError(f"homomorphism starts at {f.source}, poset is over {p.group}")
    if target is None:
        target = build_flow_poset(p.genus, p.legs, f.target, p.ramification.map(f), graphs=p.graphs)
    images = [target.locate(el.graph_index, el.flow.map(f))[0] for el in p.elements]
    return PosetMap(p, target, images)
