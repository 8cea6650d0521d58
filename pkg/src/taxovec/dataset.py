"""Training dataset construction.

Builds (node, node, similarity) triples from a taxonomy graph: enumerate
candidate pairs (all connected pairs, or only second-order neighborhoods
in fast mode), drop pairs under a raw threshold, keep each node's top-k
most similar partners, unity-normalize the survivors, and shuffle with a
seeded PRNG.

Enumeration streams one source node at a time against bounded per-node
heaps, so memory stays O(nodes * top_k) regardless of how many candidate
pairs exist. Sources are processed sequentially here; because survivors
are canonically sorted before the seeded shuffle, a parallel enumeration
over source nodes would produce the identical file.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .errors import (
    ConfigError,
    DataError,
    DegenerateRangeError,
    EmptyDatasetError,
)
from .graph import DepthIndex, TaxonomyGraph
from .metrics import (
    InformationContentTable,
    jcn_index,
    lch_from_path,
    shp_from_path,
    validate_measure,
    wup_index,
)

DEFAULT_THRESHOLDS = {"shp": 0.1, "jcn": 0.1, "wup": 0.3, "lch": 1.5}

MODES = ("full", "fast")


class TrainingPair(NamedTuple):
    u: str
    v: str
    s: float


@dataclass(frozen=True)
class DatasetConfig:
    """Knobs for dataset construction.

    A None threshold resolves to the per-measure default: 0.1 for shp and
    jcn, 0.3 for wup, 1.5 for lch.
    """

    measure: str
    threshold: float | None = None
    top_k: int = 50
    mode: str = "full"
    seed: int = 0

    def __post_init__(self) -> None:
        validate_measure(self.measure)
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected full or fast")
        if self.top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {self.top_k}")

    @property
    def raw_threshold(self) -> float:
        if self.threshold is not None:
            return self.threshold
        return DEFAULT_THRESHOLDS[self.measure.lower()]


@dataclass
class DatasetBuild:
    """Finished dataset plus the statistics the run manifest reports."""

    pairs: list[TrainingPair]
    config: DatasetConfig
    candidate_count: int
    threshold_kept: int
    norm_min: float
    norm_max: float

    def header(self) -> dict[str, str]:
        return {
            "measure": self.config.measure.lower(),
            "threshold": repr(self.config.raw_threshold),
            "top_k": str(self.config.top_k),
            "mode": self.config.mode,
            "seed": str(self.config.seed),
            "norm_min": repr(self.norm_min),
            "norm_max": repr(self.norm_max),
        }


def unity_normalize(values: list[float]) -> list[float]:
    """Map values to [0,1] by (x - min)/(max - min).

    Infinite sentinels are excluded from the min/max statistics and end
    up clipped to 1.0. Fewer than two distinct finite values leave the
    map undefined.
    """
    finite = [x for x in values if math.isfinite(x)]
    if len(finite) < 2:
        raise DegenerateRangeError(
            f"normalization needs at least 2 finite values, got {len(finite)}"
        )
    lo, hi = min(finite), max(finite)
    if hi - lo < 1e-12:
        raise DegenerateRangeError(f"all finite values equal ({lo!r}); range degenerate")
    span = hi - lo
    return [max(0.0, min(1.0, (x - lo) / span)) for x in values]


def _pair_stream_full(
    g: TaxonomyGraph,
    measure: str,
    depths: DepthIndex | None,
    ic_table: InformationContentTable | None,
    ancestors: list[set[int]] | None,
) -> Iterator[tuple[int, int, float]]:
    """All connected unordered pairs (u < v) with raw similarity, one BFS per source."""
    for src in range(g.n):
        dist = [-1] * g.n
        dist[src] = 0
        queue = deque([src])
        while queue:
            a = queue.popleft()
            da = dist[a] + 1
            for w in g.neighbors[a]:
                if dist[w] < 0:
                    dist[w] = da
                    queue.append(w)
        yield from _score_targets(g, measure, depths, ic_table, ancestors, src, dist)


def _pair_stream_fast(
    g: TaxonomyGraph,
    measure: str,
    depths: DepthIndex | None,
    ic_table: InformationContentTable | None,
    ancestors: list[set[int]] | None,
) -> Iterator[tuple[int, int, float]]:
    """Unordered pairs (u < v) at undirected distance 1 or 2 only."""
    for src in range(g.n):
        dist = [-1] * g.n
        dist[src] = 0
        for a in g.neighbors[src]:
            if dist[a] < 0:
                dist[a] = 1
        for a in g.neighbors[src]:
            for w in g.neighbors[a]:
                if dist[w] < 0:
                    dist[w] = 2
        yield from _score_targets(g, measure, depths, ic_table, ancestors, src, dist)


def _score_targets(
    g: TaxonomyGraph,
    measure: str,
    depths: DepthIndex | None,
    ic_table: InformationContentTable | None,
    ancestors: list[set[int]] | None,
    src: int,
    dist: list[int],
) -> Iterator[tuple[int, int, float]]:
    src_anc = ancestors[src] if ancestors is not None else None
    for tgt in range(src + 1, g.n):
        d = dist[tgt]
        if d < 0:
            continue
        if measure == "shp":
            sim = shp_from_path(d)
        elif measure == "lch":
            sim = lch_from_path(d, depths.max_depth)
        elif measure == "wup":
            sim = wup_index(g, depths, src, tgt, src_anc, ancestors[tgt])
        else:
            sim = jcn_index(g, depths, ic_table, src, tgt, src_anc, ancestors[tgt])
        yield src, tgt, sim


def _build(
    g: TaxonomyGraph,
    cfg: DatasetConfig,
    depths: DepthIndex | None,
    ic_table: InformationContentTable | None,
) -> DatasetBuild:
    measure = cfg.measure.lower()
    if measure != "shp" and depths is None:
        raise ConfigError(f"measure {measure!r} requires node depths")
    if measure == "jcn" and ic_table is None:
        raise ConfigError("measure 'jcn' requires an information content table")

    ancestors = None
    if measure in ("wup", "jcn"):
        ancestors = [g.ancestors(i) for i in range(g.n)]

    stream = _pair_stream_fast if cfg.mode == "fast" else _pair_stream_full
    threshold = cfg.raw_threshold

    # per-node min-heaps of the k best (sim, -partner) keys seen so far
    heaps: list[list[tuple[float, int]]] = [[] for _ in range(g.n)]
    k = cfg.top_k
    candidates = 0
    kept = 0
    for u, v, sim in stream(g, measure, depths, ic_table, ancestors):
        candidates += 1
        if sim < threshold:
            continue
        kept += 1
        for node, partner in ((u, v), (v, u)):
            key = (sim, -partner)
            heap = heaps[node]
            if len(heap) < k:
                heapq.heappush(heap, key)
            elif key > heap[0]:
                heapq.heapreplace(heap, key)

    survivors: dict[tuple[int, int], float] = {}
    for node, heap in enumerate(heaps):
        for sim, neg_partner in heap:
            partner = -neg_partner
            key = (node, partner) if node < partner else (partner, node)
            survivors[key] = sim
    if not survivors:
        raise EmptyDatasetError(
            f"no pairs survive threshold {threshold!r} for measure {measure!r}"
        )

    ordered = sorted(survivors)
    raw = [survivors[p] for p in ordered]
    finite = [x for x in raw if math.isfinite(x)]
    normalized = unity_normalize(raw)
    lo, hi = min(finite), max(finite)

    pairs = [
        TrainingPair(g.ids[a], g.ids[b], s)
        for (a, b), s in zip(ordered, normalized)
    ]
    perm = np.random.default_rng(cfg.seed).permutation(len(pairs))
    pairs = [pairs[i] for i in perm]
    return DatasetBuild(
        pairs=pairs,
        config=cfg,
        candidate_count=candidates,
        threshold_kept=kept,
        norm_min=lo,
        norm_max=hi,
    )


def build_full(
    g: TaxonomyGraph,
    cfg: DatasetConfig,
    depths: DepthIndex | None = None,
    ic_table: InformationContentTable | None = None,
) -> DatasetBuild:
    """Dataset over all connected pairs. See the module docstring for the pipeline."""
    return _build(g, replace(cfg, mode="full"), depths, ic_table)


def build_fast(
    g: TaxonomyGraph,
    cfg: DatasetConfig,
    depths: DepthIndex | None = None,
    ic_table: InformationContentTable | None = None,
) -> DatasetBuild:
    """Dataset restricted to second-order neighborhoods (distance 1 or 2)."""
    return _build(g, replace(cfg, mode="fast"), depths, ic_table)


def write_pairs(path: str | Path, build: DatasetBuild) -> None:
    """Write a `# key=value` header followed by `u<TAB>v<TAB>s` rows."""
    p = Path(path)
    with p.open("w", encoding="utf-8") as fh:
        for key, value in build.header().items():
            fh.write(f"# {key}={value}\n")
        for u, v, s in build.pairs:
            fh.write(f"{u}\t{v}\t{s!r}\n")


def read_pairs(path: str | Path) -> tuple[list[TrainingPair], dict[str, str]]:
    """Read a training-pairs file; returns (pairs, header key=value dict)."""
    p = Path(path)
    pairs: list[TrainingPair] = []
    meta: dict[str, str] = {}
    with p.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise DataError(f"{p}:{lineno}: expected `u<TAB>v<TAB>s`")
            u, v, s_str = fields
            try:
                s = float(s_str)
            except ValueError:
                raise DataError(f"{p}:{lineno}: bad similarity {s_str!r}") from None
            if not 0.0 <= s <= 1.0:
                raise DataError(f"{p}:{lineno}: similarity {s!r} outside [0,1]")
            pairs.append(TrainingPair(u, v, s))
    return pairs, meta
