"""Taxonomy graph loading and traversal primitives.

Nodes are string ids mapped to dense integer indices in file order.
Directed edges point child -> parent (specialization -> generalization);
the undirected adjacency is the union of both directions and is what
path lengths are measured on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EdgeListError, StructuralError, UnknownNodeError


class TaxonomyGraph:
    """Immutable directed acyclic hypernym graph over string node ids."""

    def __init__(self, ids: Sequence[str], edges: Iterable[tuple[str, str]]):
        self.ids: tuple[str, ...] = tuple(ids)
        self.index: dict[str, int] = {node: i for i, node in enumerate(self.ids)}
        if len(self.index) != len(self.ids):
            raise StructuralError("duplicate node ids in graph construction")

        n = len(self.ids)
        parents: list[list[int]] = [[] for _ in range(n)]
        children: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for child, parent in edges:
            c, p = self.idx(child), self.idx(parent)
            if c == p:
                raise StructuralError(f"self-loop on node {child!r}")
            if (c, p) in seen:
                continue
            seen.add((c, p))
            parents[c].append(p)
            children[p].append(c)

        self.parents: list[list[int]] = parents
        self.children: list[list[int]] = children
        self.neighbors: list[list[int]] = [
            sorted(set(parents[i]) | set(children[i])) for i in range(n)
        ]
        self._check_acyclic()

    @property
    def n(self) -> int:
        return len(self.ids)

    def idx(self, node: str) -> int:
        try:
            return self.index[node]
        except KeyError:
            raise UnknownNodeError(f"unknown node id {node!r}") from None

    def has(self, node: str) -> bool:
        return node in self.index

    def roots(self) -> list[int]:
        """Indices of nodes without parents (isolated nodes included)."""
        return [i for i in range(self.n) if not self.parents[i]]

    def ancestors(self, i: int) -> set[int]:
        """Reflexive ancestor set of a dense index, following parent edges."""
        result = {i}
        stack = [i]
        while stack:
            for p in self.parents[stack.pop()]:
                if p not in result:
                    result.add(p)
                    stack.append(p)
        return result

    def _check_acyclic(self) -> None:
        # iterative DFS over child->parent edges; a gray target closes a cycle
        WHITE, GRAY, BLACK = 0, 1, 2
        color = [WHITE] * self.n
        for start in range(self.n):
            if color[start] != WHITE:
                continue
            stack: list[tuple[int, int]] = [(start, 0)]
            color[start] = GRAY
            while stack:
                node, k = stack[-1]
                if k < len(self.parents[node]):
                    stack[-1] = (node, k + 1)
                    nxt = self.parents[node][k]
                    if color[nxt] == GRAY:
                        raise StructuralError(
                            f"cycle through edge {self.ids[node]!r} -> {self.ids[nxt]!r}"
                        )
                    if color[nxt] == WHITE:
                        color[nxt] = GRAY
                        stack.append((nxt, 0))
                else:
                    color[node] = BLACK
                    stack.pop()


@dataclass(frozen=True)
class DepthIndex:
    """Node depths counted in nodes along the shortest path to a root.

    depth(root) = 1; max_depth is the maximum depth over all nodes.
    """

    depths: tuple[int, ...]
    max_depth: int

    def depth(self, i: int) -> int:
        return self.depths[i]


def load_edge_list(path: str | Path, virtual_root: str | None = None) -> TaxonomyGraph:
    """Load a graph from a UTF-8 edge list.

    One `child<TAB>parent` pair per line; `#` starts a comment line; a
    single-token line inserts an isolated node. When `virtual_root` is
    given, a node with that id is appended and every parentless node is
    attached to it as a child.
    """
    p = Path(path)
    ids: list[str] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []

    def add(node: str) -> None:
        if node not in seen:
            seen.add(node)
            ids.append(node)

    with p.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = [f.strip() for f in line.split("\t")]
            if len(fields) == 1:
                add(fields[0])
            elif len(fields) == 2:
                child, parent = fields
                if not child or not parent:
                    raise EdgeListError(f"{p}:{lineno}: empty node id")
                if child == parent:
                    raise StructuralError(f"{p}:{lineno}: self-loop on {child!r}")
                add(child)
                add(parent)
                edges.append((child, parent))
            else:
                raise EdgeListError(
                    f"{p}:{lineno}: expected 1 or 2 tab-separated fields, got {len(fields)}"
                )

    if virtual_root is not None:
        if virtual_root in seen:
            raise StructuralError(f"virtual root id {virtual_root!r} already in graph")
        has_parent = {c for c, _ in edges}
        attach = [node for node in ids if node not in has_parent]
        ids.append(virtual_root)
        edges.extend((node, virtual_root) for node in attach)

    return TaxonomyGraph(ids, edges)


def bfs_distances(adjacency: list[list[int]], src: int) -> list[int]:
    """Unweighted distances from `src` over an adjacency list; -1 = unreachable."""
    dist = [-1] * len(adjacency)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adjacency[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def shortest_path_length(g: TaxonomyGraph, u: str, v: str) -> int | None:
    """Edges on the shortest undirected path between two nodes, None if disconnected."""
    ui, vi = g.idx(u), g.idx(v)
    if ui == vi:
        return 0
    dist = [-1] * g.n
    dist[ui] = 0
    queue = deque([ui])
    while queue:
        a = queue.popleft()
        da = dist[a] + 1
        for w in g.neighbors[a]:
            if dist[w] < 0:
                if w == vi:
                    return da
                dist[w] = da
                queue.append(w)
    return None


def compute_depths(g: TaxonomyGraph) -> DepthIndex:
    """Depth of every node: 1 + edges on the shortest parent path to a root."""
    depths = [0] * g.n
    queue = deque()
    for r in g.roots():
        depths[r] = 1
        queue.append(r)
    while queue:
        u = queue.popleft()
        d = depths[u] + 1
        for c in g.children[u]:
            if depths[c] == 0:
                depths[c] = d
                queue.append(c)
    # acyclicity guarantees every node reaches a root through parents
    assert all(depths), "depth computation missed a node"
    return DepthIndex(tuple(depths), max(depths))


def lowest_common_subsumer(
    g: TaxonomyGraph, depths: DepthIndex, u: str, v: str
) -> str | None:
    """Deepest common ancestor of two nodes, None when they share none.

    Ancestorhood is reflexive. Depth ties go to the smaller dense index,
    which makes the result deterministic for a fixed load order.
    """
    common = g.ancestors(g.idx(u)) & g.ancestors(g.idx(v))
    if not common:
        return None
    best = max(common, key=lambda a: (depths.depths[a], -a))
    return g.ids[best]


def second_order_neighborhood(g: TaxonomyGraph, v: str) -> set[str]:
    """All nodes at undirected distance 1 or 2 from `v`, excluding `v`."""
    vi = g.idx(v)
    out: set[int] = set()
    for a in g.neighbors[vi]:
        out.add(a)
        out.update(g.neighbors[a])
    out.discard(vi)
    return {g.ids[i] for i in out}
