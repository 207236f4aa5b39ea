"""Brute-force reference implementations used to cross-check the library.

Nothing here imports library algorithms: graphs are plain tuples
``(weights, edges, legs)`` with ``edges`` a sorted tuple of sorted vertex
pairs, and flows are tuples of residues indexed by edge (the value on the
half-edge running from ``edges[e][0]`` to ``edges[e][1]``).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

# ---------------------------------------------------------------------------
# graphs


def _connected(nv, edges):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == v and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return len(seen) == nv


def _stable(weights, edges, legs):
    for v, w in enumerate(weights):
        val = sum((a == v) + (b == v) for a, b in edges)
        if 2 * w - 2 + val + legs.count(v) <= 0:
            return False
    return True


def _relabel(graph, perm):
    weights, edges, legs = graph
    nw = [0] * len(weights)
    for v, w in enumerate(weights):
        nw[perm[v]] = w
    ne = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
    return tuple(nw), ne, tuple(perm[v] for v in legs)


def oracle_isomorphic(g1, g2) -> bool:
    if len(g1[0]) != len(g2[0]) or len(g1[1]) != len(g2[1]):
        return False
    target = (tuple(g2[0]), tuple(sorted(tuple(sorted(e)) for e in g2[1])), tuple(g2[2]))
    return any(_relabel(g1, p) == target for p in itertools.permutations(range(len(g1[0]))))


def _normal_key(graph):
    """Lexicographically least relabeling; an isomorphism invariant by brute force."""
    return min(_relabel(graph, p) for p in itertools.permutations(range(len(graph[0]))))


def brute_force_stable_graphs(g: int, n: int) -> list[tuple]:
    """Every stable genus-g graph with n legs, one per isomorphism class,
    found by listing all multigraphs with at most ``3g-3+n`` edges."""
    found = {}
    max_edges = 3 * g - 3 + n
    max_vertices = max(1, 2 * g - 2 + n)
    for nv in range(1, max_vertices + 1):
        pairs = [(a, b) for a in range(nv) for b in range(a, nv)]
        for ne in range(max_edges + 1):
            b1 = ne - nv + 1
            if b1 < 0 or b1 > g:
                continue
            for edges in itertools.combinations_with_replacement(pairs, ne):
                if not _connected(nv, edges):
                    continue
                for weights in itertools.product(range(g - b1 + 1), repeat=nv):
                    if sum(weights) != g - b1:
                        continue
                    for legs in itertools.product(range(nv), repeat=n):
                        G = (weights, tuple(edges), legs)
                        if _stable(*G):
                            found.setdefault(_normal_key(G), G)
    return list(found.values())


def to_tuple(graph) -> tuple:
    """Library graph -> oracle tuple."""
    return (tuple(graph.weights), tuple(sorted(tuple(sorted(e)) for e in graph.edges)), tuple(graph.legs))


def brute_force_automorphisms(graph) -> set[tuple]:
    """All half-edge permutations (as tuples) commuting with the pairing and
    the attachment, preserving weights and fixing legs labelwise."""
    weights, edges, legs = graph.weights, graph.edges, graph.legs
    nh = 2 * len(edges)
    attach = [edges[h // 2][h % 2] for h in range(nh)]
    result = set()
    for vperm in itertools.permutations(range(len(weights))):
        if any(weights[vperm[v]] != weights[v] for v in range(len(weights))):
            continue
        if any(vperm[v] != v for v in legs):
            continue
        at = [[h for h in range(nh) if attach[h] == v] for v in range(len(weights))]
        if any(len(at[v]) != len(at[vperm[v]]) for v in range(len(weights))):
            continue
        choices = [itertools.permutations(at[vperm[v]]) for v in range(len(weights))]
        for images in itertools.product(*[list(c) for c in choices]):
            hmap = [None] * nh
            for v, img in enumerate(images):
                for h, k in zip(at[v], img):
                    hmap[h] = k
            if all(hmap[h ^ 1] == hmap[h] ^ 1 for h in range(nh)):
                result.add(tuple(hmap))
    return result


# ---------------------------------------------------------------------------
# flows over Z/m


def divisor_of(graph, values, m):
    div = [0] * len(graph.weights)
    for (a, b), x in zip(graph.edges, values):
        div[b] = (div[b] + x) % m
        div[a] = (div[a] - x) % m
    return tuple(div)


def all_flows_with_divisor(graph, divisor, m) -> list[tuple]:
    target = tuple(x % m for x in divisor)
    return [vals for vals in itertools.product(range(m), repeat=len(graph.edges))
            if divisor_of(graph, vals, m) == target]


def act(hmap, values, m):
    """Move a flow along a half-edge permutation: the image flow takes value
    ``f(h)`` on ``hmap[h]``."""
    out = [0] * len(values)
    for e, x in enumerate(values):
        k = hmap[2 * e]
        out[k // 2] = x % m if k % 2 == 0 else (-x) % m
    return tuple(out)


def orbit_count(graph, m) -> tuple[int, int]:
    """(orbits found by exhaustive closure, Burnside average) of the
    automorphism group on the Kirchhoff flows modulo m."""
    auts = brute_force_automorphisms(graph)
    cycles = all_flows_with_divisor(graph, [0] * len(graph.weights), m)
    seen = set()
    orbits = 0
    for phi in cycles:
        if phi in seen:
            continue
        orbits += 1
        seen.update(act(a, phi, m) for a in auts)
    fixed = sum(1 for a in auts for phi in cycles if act(a, phi, m) == phi)
    assert fixed % len(auts) == 0
    return orbits, fixed // len(auts)


# ---------------------------------------------------------------------------
# abelian groups


def brute_gcd_shifted(b: int, free: list[int], torsion: list[tuple[int, int]]) -> int:
    """``max j | |b|`` with ``a + bA`` inside ``jA``; ``torsion`` lists
    (residue, modulus) pairs. Free components are tested on a window of
    multiples, which is exact because membership is periodic in x."""
    best = 1
    for j in range(1, abs(b) + 1):
        if abs(b) % j:
            continue
        ok = all((a + b * x) % j == 0 for a in free for x in range(j + 1))
        for a, m in torsion:
            multiples = {(j * y) % m for y in range(m)}
            ok &= all((a + b * x) % m in multiples for x in range(m))
        if ok:
            best = j
    return best


# ---------------------------------------------------------------------------
# principality on metric graphs


def unit_graph(curve, divisor):
    """Subdivide the curve's model into unit segments after scaling by the
    common denominator of lengths and point offsets. Returns
    ``(number of vertices, edge list, integer divisor)``."""
    lengths = list(curve.lengths)
    offsets = [p.offset for p in divisor.support if not p.is_vertex]
    scale = math.lcm(*(Fraction(x).denominator for x in lengths + offsets)) if lengths else 1
    nv = len(curve.graph.weights)
    edges = []
    position = {}
    for e, (a, b) in enumerate(curve.graph.edges):
        steps = int(lengths[e] * scale)
        chain = [a]
        for k in range(1, steps):
            position[(e, k)] = nv
            chain.append(nv)
            nv += 1
        chain.append(b)
        edges.extend(zip(chain, chain[1:]))
    D = [0] * nv
    for p, c in divisor.coeffs.items():
        if p.is_vertex:
            D[p.vertex] += c
        else:
            D[position[(p.edge, int(p.offset * scale))]] += c
    return nv, edges, D


def _neighbors(nv, edges):
    adj = [[] for _ in range(nv)]
    for a, b in edges:
        if a != b:
            adj[a].append(b)
            adj[b].append(a)
    return adj


def _fire(D, adj, S):
    for v in S:
        for u in adj[v]:
            if u not in S:
                D[v] -= 1
                D[u] += 1


def q_reduce(nv, edges, D, q=0):
    """The q-reduced divisor equivalent to ``D`` (burning algorithm)."""
    D = list(D)
    adj = _neighbors(nv, edges)
    dist = {q: 0}
    frontier = [q]
    while frontier:
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    top = max(dist.values())
    # clear debts level by level from the outside in
    for k in range(top - 1, -1, -1):
        inner = {v for v in range(nv) if dist[v] <= k}
        while any(D[v] < 0 for v in range(nv) if dist[v] == k + 1):
            _fire(D, adj, inner)
    while True:
        burnt = {q}
        changed = True
        while changed:
            changed = False
            for v in range(nv):
                if v in burnt:
                    continue
                if sum(1 for u in adj[v] if u in burnt) > D[v]:
                    burnt.add(v)
                    changed = True
        if len(burnt) == nv:
            return D
        _fire(D, adj, set(range(nv)) - burnt)


def dhar_principal(curve, divisor) -> bool:
    nv, edges, D = unit_graph(curve, divisor)
    return sum(D) == 0 and all(x == 0 for x in q_reduce(nv, edges, D))


def laplacian_principal(curve, divisor) -> bool:
    """Solve the reduced Laplacian system over the rationals and test
    integrality of the potential."""
    nv, edges, D = unit_graph(curve, divisor)
    if sum(D):
        return False
    if nv == 1:
        return True
    adj = _neighbors(nv, edges)
    n = nv - 1
    M = [[Fraction(0)] * n + [Fraction(D[i + 1])] for i in range(n)]
    for i in range(n):
        M[i][i] = Fraction(len(adj[i + 1]))
        for u in adj[i + 1]:
            if u:
                M[i][u - 1] -= 1
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return all((M[i][n] / M[i][i]).denominator == 1 for i in range(n))
