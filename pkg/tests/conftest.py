"""Shared fixtures and independent oracles.

The oracles here are written straight from the definitions with plain
set arithmetic and check every vertex pair. They deliberately share no
code with the package's bitmask implementations so that agreement
between the two is meaningful evidence.
"""

from __future__ import annotations

import random
from collections import defaultdict

import pytest

from detcode import CodeKind, Graph, build_graph, min_code, random_gnp

# ---------------------------------------------------------------------------
# naive reference implementations


def adjacency(g: Graph) -> dict:
    adj = defaultdict(set)
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def naive_verify(g: Graph, detectors, kind: CodeKind) -> bool:
    s = set(detectors)
    adj = adjacency(g)
    closed = {v: adj[v] | {v} for v in range(g.n)}
    if kind is CodeKind.DETIC:
        if any(len(closed[v] & s) < 2 for v in range(g.n)):
            return False
        for u in range(g.n):
            for v in range(u + 1, g.n):
                only_u = (closed[u] - closed[v]) & s
                only_v = (closed[v] - closed[u]) & s
                if len(only_u) < 2 and len(only_v) < 2:
                    return False
        return True
    if kind is CodeKind.IC:
        if any(not (closed[v] & s) for v in range(g.n)):
            return False
        return all(closed[u] & s != closed[v] & s
                   for u in range(g.n) for v in range(u + 1, g.n))
    if kind is CodeKind.LD:
        if any(not (closed[v] & s) for v in range(g.n)):
            return False
        outside = [v for v in range(g.n) if v not in s]
        return all(adj[u] & s != adj[v] & s
                   for i, u in enumerate(outside) for v in outside[i + 1:])
    if kind is CodeKind.OLD:
        if any(not (adj[v] & s) for v in range(g.n)):
            return False
        return all(adj[u] & s != adj[v] & s
                   for u in range(g.n) for v in range(u + 1, g.n))
    raise AssertionError(kind)


def naive_minimum(g: Graph, kind: CodeKind):
    """Smallest valid detector set by ascending subset scan, or None."""
    from itertools import combinations
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            if naive_verify(g, combo, kind):
                return k, set(combo)
    return None


def naive_detic_exists(g: Graph) -> bool:
    adj = adjacency(g)
    if any(not adj[v] for v in range(g.n)):
        return False
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if v not in adj[u] and adj[u] == adj[v]:
                return False
    for u, v in g.edges:
        t = len(adj[u] & adj[v])
        if len(adj[u]) < t + 3 and len(adj[v]) < t + 3:
            return False
    return True


# ---------------------------------------------------------------------------
# corpora


def random_graphs(seed: int, count: int, n_max: int, n_min: int = 1) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(n_min, n_max)
        out.append(random_gnp(n, rng.uniform(0.1, 0.9), rng))
    return out


def all_labeled_graphs(n: int):
    """Every labeled simple graph on n vertices."""
    from itertools import combinations
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield build_graph(n, [pairs[i] for i in range(len(pairs)) if (bits >> i) & 1])


# ---------------------------------------------------------------------------
# expensive shared artifacts


@pytest.fixture(scope="session")
def cubic_catalogue():
    """Connected cubic graphs up to isomorphism for n = 4..10."""
    from detcode import enumerate_cubic
    return {n: list(enumerate_cubic(n)) for n in (4, 6, 8, 10)}


@pytest.fixture(scope="session")
def cubic_optima(cubic_catalogue):
    """(graph, SolveResult) for every feasible cubic graph with n in {8, 10}."""
    from detcode import detic_exists
    solved = {}
    for n in (8, 10):
        rows = []
        for g in cubic_catalogue[n]:
            if detic_exists(g):
                rows.append((g, min_code(g, CodeKind.DETIC)))
        solved[n] = rows
    return solved
