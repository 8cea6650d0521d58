"""Shared fixtures and graph generators for the test suite."""

from __future__ import annotations

from collections import deque

import pytest

from taxovec.graph import TaxonomyGraph

from oracles import prufer_tree


def ids_for(n: int) -> list[str]:
    return [f"n{i:03d}" for i in range(n)]


def rooted_tree_edges(n: int, seed: int) -> list[tuple[int, int]]:
    """Random labeled tree oriented child->parent away from node 0."""
    undirected = prufer_tree(n, seed)
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in undirected:
        adj[a].append(b)
        adj[b].append(a)
    parent = {0: None}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return [(c, p) for c, p in parent.items() if p is not None]


def random_tree_graph(n: int, seed: int) -> TaxonomyGraph:
    ids = ids_for(n)
    edges = [(ids[c], ids[p]) for c, p in rooted_tree_edges(n, seed)]
    return TaxonomyGraph(ids, edges)


def random_dag_edges(n: int, seed: int, extra: int = 0) -> list[tuple[int, int]]:
    """Tree plus `extra` forward edges toward strictly smaller indices."""
    import numpy as np

    rng = np.random.default_rng(seed)
    edges = [(i, int(rng.integers(0, i))) for i in range(1, n)]
    present = set(edges)
    added = 0
    while added < extra:
        c = int(rng.integers(1, n))
        p = int(rng.integers(0, c))
        if (c, p) not in present:
            present.add((c, p))
            edges.append((c, p))
            added += 1
    return edges


def random_dag_graph(n: int, seed: int, extra: int = 0) -> TaxonomyGraph:
    ids = ids_for(n)
    edges = [(ids[c], ids[p]) for c, p in random_dag_edges(n, seed, extra)]
    return TaxonomyGraph(ids, edges)


@pytest.fixture
def chain3() -> TaxonomyGraph:
    """a <- b <- c (c and b are children; a is the root)."""
    return TaxonomyGraph(["a", "b", "c"], [("b", "a"), ("c", "b")])


@pytest.fixture
def star3() -> TaxonomyGraph:
    """Root r with children x and y."""
    return TaxonomyGraph(["r", "x", "y"], [("x", "r"), ("y", "r")])
