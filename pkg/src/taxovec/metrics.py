"""Graph similarity measures over a taxonomy.

Four measures share a common shape: two node ids in, one float out.
Disconnected pairs (no undirected path, or no common subsumer where one
is required) score 0.0. JCN between nodes whose propagated counts make
the distance collapse to zero returns math.inf; normalization downstream
clips such pairs to the top of the similarity range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DataError
from .graph import DepthIndex, TaxonomyGraph, shortest_path_length

MEASURES = ("shp", "lch", "wup", "jcn")

_EPS = 1e-12


@dataclass(frozen=True)
class InformationContentTable:
    """Propagated corpus counts and their total, indexed by dense node index."""

    counts: tuple[float, ...]
    total: float

    def ic(self, i: int) -> float:
        """Information content -log(count/total); math.inf for a zero count."""
        c = self.counts[i]
        if c <= 0.0:
            return math.inf
        return -math.log(c / self.total)


def load_raw_counts(path: str | Path, g: TaxonomyGraph) -> list[float]:
    """Read `node<TAB>count` lines into a dense raw-count vector.

    `#` starts a comment line; nodes absent from the file get 0; repeated
    nodes accumulate. Unknown ids and negative counts are data errors.
    """
    p = Path(path)
    raw = [0.0] * g.n
    with p.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise DataError(f"{p}:{lineno}: expected `node<TAB>count`")
            node, count_s = fields
            try:
                count = float(count_s)
            except ValueError:
                raise DataError(f"{p}:{lineno}: bad count {count_s!r}") from None
            if count < 0:
                raise DataError(f"{p}:{lineno}: negative count for {node!r}")
            raw[g.idx(node)] += count
    return raw


def propagate_counts(g: TaxonomyGraph, raw: list[float]) -> InformationContentTable:
    """Fold raw counts upward: count(v) = sum of raw over v and its descendants.

    Each observed node contributes once to every ancestor even when the
    DAG offers several upward routes. The total is the mass that reached
    the roots; an all-zero table is rejected because every IC would be
    undefined.
    """
    if len(raw) != g.n:
        raise DataError(f"raw count vector has {len(raw)} entries, graph has {g.n}")
    counts = [0.0] * g.n
    for u, mass in enumerate(raw):
        if mass <= 0.0:
            continue
        for a in g.ancestors(u):
            counts[a] += mass
    total = sum(counts[r] for r in g.roots())
    if total <= 0.0:
        raise DataError("all corpus counts are zero; information content undefined")
    return InformationContentTable(tuple(counts), total)


def shp_from_path(pathlen: int | None) -> float:
    """Inverted path length 1/(1+L); 0.0 when there is no path."""
    if pathlen is None:
        return 0.0
    return 1.0 / (1.0 + pathlen)


def lch_from_path(pathlen: int | None, max_depth: int) -> float:
    """Leacock-Chodorow -log((L+1)/(2D)) on node-counted paths; 0.0 when disconnected."""
    if pathlen is None:
        return 0.0
    return -math.log((pathlen + 1) / (2.0 * max_depth))


def lcs_index(
    g: TaxonomyGraph,
    depths: DepthIndex,
    ui: int,
    vi: int,
    u_anc: set[int] | None = None,
    v_anc: set[int] | None = None,
) -> int | None:
    """Dense index of the deepest common ancestor, or None.

    Callers that score one node against many pass a precomputed ancestor
    set to avoid rebuilding it per pair. Ties on depth break toward the
    smaller index.
    """
    common = (u_anc or g.ancestors(ui)) & (v_anc or g.ancestors(vi))
    if not common:
        return None
    return max(common, key=lambda a: (depths.depths[a], -a))


def wup_index(
    g: TaxonomyGraph,
    depths: DepthIndex,
    ui: int,
    vi: int,
    u_anc: set[int] | None = None,
    v_anc: set[int] | None = None,
) -> float:
    """Wu-Palmer 2*depth(lcs) / (depth(u)+depth(v)); 0.0 without a common subsumer."""
    lcs = lcs_index(g, depths, ui, vi, u_anc, v_anc)
    if lcs is None:
        return 0.0
    return 2.0 * depths.depths[lcs] / (depths.depths[ui] + depths.depths[vi])


def jcn_index(
    g: TaxonomyGraph,
    depths: DepthIndex,
    table: InformationContentTable,
    ui: int,
    vi: int,
    u_anc: set[int] | None = None,
    v_anc: set[int] | None = None,
) -> float:
    """Jiang-Conrath 1 / (ic(u) + ic(v) - 2*ic(lcs)).

    Unobserved endpoints (infinite IC) score 0.0; a distance that
    collapses below 1e-12 scores math.inf.
    """
    ic_u = table.ic(ui)
    ic_v = table.ic(vi)
    if math.isinf(ic_u) or math.isinf(ic_v):
        return 0.0
    lcs = lcs_index(g, depths, ui, vi, u_anc, v_anc)
    if lcs is None:
        return 0.0
    denom = ic_u + ic_v - 2.0 * table.ic(lcs)
    if denom < _EPS:
        return math.inf
    return 1.0 / denom


def validate_measure(measure: str) -> str:
    m = measure.lower()
    if m not in MEASURES:
        raise ConfigError(
            f"unknown measure {measure!r}; expected one of {', '.join(MEASURES)}"
        )
    return m


def pair_similarity(
    measure: str,
    g: TaxonomyGraph,
    u: str,
    v: str,
    depths: DepthIndex | None = None,
    ic_table: InformationContentTable | None = None,
) -> float:
    """Score one pair of node ids under the named measure.

    `lch` and `wup` need a DepthIndex, `jcn` needs both a DepthIndex and
    an InformationContentTable; missing requirements are config errors.
    """
    m = validate_measure(measure)
    if m in ("lch", "wup", "jcn") and depths is None:
        raise ConfigError(f"measure {m!r} requires node depths")
    if m == "jcn" and ic_table is None:
        raise ConfigError("measure 'jcn' requires an information content table")
    if m == "shp":
        return shp_from_path(shortest_path_length(g, u, v))
    if m == "lch":
        return lch_from_path(shortest_path_length(g, u, v), depths.max_depth)
    ui, vi = g.idx(u), g.idx(v)
    if m == "wup":
        return wup_index(g, depths, ui, vi)
    return jcn_index(g, depths, ic_table, ui, vi)
