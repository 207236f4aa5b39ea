"""Shared fixtures for the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from troproots import Isomorphism, build_graph_poset

# (g, n) pairs whose stable graphs make up the "small graph" test set
SMALL_TYPES = [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)]


@lru_cache(maxsize=None)
def poset(g: int, n: int):
    return build_graph_poset(g, n)


@lru_cache(maxsize=None)
def small_graphs(max_edges: int = 4) -> tuple:
    return tuple(G for g, n in SMALL_TYPES for G in poset(g, n).elements if G.num_edges <= max_edges)


def random_relabeling(G, rng: random.Random):
    """A randomly renamed copy of ``G`` and the isomorphism onto it."""
    vperm = list(range(G.num_vertices))
    rng.shuffle(vperm)
    eperm = list(range(G.num_edges))
    rng.shuffle(eperm)
    hmap = [0] * G.num_half_edges
    for e, k in enumerate(eperm):
        flip = rng.random() < 0.5
        hmap[2 * e] = 2 * k + flip
        hmap[2 * e + 1] = 2 * k + (not flip)
    H = G.relabeled(vperm, hmap)
    return H, Isomorphism(G, H, tuple(vperm), tuple(hmap))


def random_lengths(rng: random.Random, count: int, max_num: int = 12, max_den: int = 4) -> list[Fraction]:
    return [Fraction(rng.randint(1, max_num), rng.randint(1, max_den)) for _ in range(count)]
