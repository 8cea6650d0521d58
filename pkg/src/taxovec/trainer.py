"""Embedding training.

One matrix holds a row per graph node. Each training batch mixes positive
pairs (gold similarity s in (0,1]) with uniformly sampled negatives (s=0),
and every entry drags one random neighbor of each endpoint into a graph
regularizer that rewards adjacent rows for pointing the same way:

    L = (1/|B|) * sum[(vi.vj - s)^2 - alpha*(vi.vn + vj.vm)] + l1 * sum|theta|

with the L1 sum taken over rows the batch touches. Optimization is Adam
with lazy sparse moments: untouched rows keep their state, touched rows
use the global step for bias correction. Parameters are stored in
float32 by default; all arithmetic runs in float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from .dataset import TrainingPair
from .errors import ConfigError, DataError, NumericError, UnknownNodeError
from .graph import TaxonomyGraph

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

INIT_SCALE = 0.05


class EmbeddingMatrix:
    """Node id to dense vector map backed by one (N, d) array."""

    def __init__(self, ids: Sequence[str], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != len(ids):
            raise ConfigError(
                f"matrix shape {matrix.shape} does not match {len(ids)} node ids"
            )
        self.ids: tuple[str, ...] = tuple(ids)
        self.index: dict[str, int] = {node: i for i, node in enumerate(self.ids)}
        if len(self.index) != len(self.ids):
            raise DataError("duplicate node ids in embedding matrix")
        self.matrix = matrix

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    def idx(self, node: str) -> int:
        try:
            return self.index[node]
        except KeyError:
            raise UnknownNodeError(f"node {node!r} has no embedding") from None

    def row(self, node: str) -> np.ndarray:
        return self.matrix[self.idx(node)]


def score(m: EmbeddingMatrix, u: str, v: str, mode: str = "dot") -> float:
    """Dot product or cosine of two node rows, computed in float64."""
    a = m.row(u).astype(np.float64)
    b = m.row(v).astype(np.float64)
    if mode == "dot":
        return float(a @ b)
    if mode == "cosine":
        na = math.sqrt(float(a @ a))
        nb = math.sqrt(float(b @ b))
        if na < 1e-300 or nb < 1e-300:
            return 0.0
        return float(a @ b) / (na * nb)
    raise ConfigError(f"unknown score mode {mode!r}; expected dot or cosine")


def save_embeddings(m: EmbeddingMatrix, path: str | Path) -> None:
    """Write the text format: `N d` header, then `node_id v1 ... vd` per row."""
    p = Path(path)
    with p.open("w", encoding="utf-8") as fh:
        fh.write(f"{m.n} {m.d}\n")
        for node, row in zip(m.ids, m.matrix):
            if any(ch.isspace() for ch in node):
                raise DataError(f"node id {node!r} contains whitespace; not writable")
            values = " ".join(repr(float(x)) for x in row)
            fh.write(f"{node} {values}\n")


def load_embeddings(path: str | Path, dtype: str = "float32") -> EmbeddingMatrix:
    p = Path(path)
    with p.open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataError(f"{p}:1: expected header `N d`")
        try:
            n, d = int(header[0]), int(header[1])
        except ValueError:
            raise DataError(f"{p}:1: bad header {' '.join(header)!r}") from None
        ids: list[str] = []
        matrix = np.empty((n, d), dtype=dtype)
        for k in range(n):
            fields = fh.readline().split()
            if len(fields) != d + 1:
                raise DataError(f"{p}:{k + 2}: expected node id and {d} values")
            ids.append(fields[0])
            try:
                matrix[k] = [float(x) for x in fields[1:]]
            except ValueError:
                raise DataError(f"{p}:{k + 2}: non-numeric vector entry") from None
    if not np.all(np.isfinite(matrix)):
        raise DataError(f"{p}: non-finite embedding entries")
    return EmbeddingMatrix(ids, matrix)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters; defaults follow the tuned values in the module docstring."""

    d: int
    alpha: float = 0.01
    negatives: int = 3
    batch_size: int = 100
    epochs: int = 15
    learning_rate: float = 0.001
    l1: float = 1e-5
    seed: int = 0
    early_stop_patience: int = 2
    dev_set: list[TrainingPair] | None = None
    neg_total: bool = False  # split `negatives` across both sides instead of n per side
    dtype: str = "float32"

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.d}")
        if self.alpha < 0:
            raise ConfigError(f"alpha must be >= 0, got {self.alpha}")
        if self.negatives < 0:
            raise ConfigError(f"negatives must be >= 0, got {self.negatives}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.l1 < 0:
            raise ConfigError(f"l1 must be >= 0, got {self.l1}")
        if self.early_stop_patience < 1:
            raise ConfigError(
                f"early_stop_patience must be >= 1, got {self.early_stop_patience}"
            )

    def negatives_per_side(self) -> tuple[int, int]:
        if self.neg_total:
            return (self.negatives + 1) // 2, self.negatives // 2
        return self.negatives, self.negatives


@dataclass
class Batch:
    """Parallel arrays, one slot per entry; neighbor index -1 means isolated."""

    i: np.ndarray
    j: np.ndarray
    s: np.ndarray
    ni: np.ndarray
    nj: np.ndarray
    is_negative: np.ndarray

    def __len__(self) -> int:
        return len(self.i)


@dataclass
class EpochStats:
    epoch: int
    mean_loss: float
    median_loss: float
    dev_spearman: float | None = None


def _touched_rows(batch: Batch) -> np.ndarray:
    parts = [batch.i, batch.j, batch.ni[batch.ni >= 0], batch.nj[batch.nj >= 0]]
    return np.unique(np.concatenate(parts))


def _loss_and_grads(
    V: np.ndarray, batch: Batch, alpha: float, l1: float, want_grads: bool
) -> tuple[float, np.ndarray, np.ndarray | None, np.ndarray]:
    """Shared core for batch_loss and batch_gradients.

    Returns (loss, touched_rows, grads_per_touched_row_or_None, per_entry_terms).
    All math in float64 regardless of storage dtype.
    """
    vi = V[batch.i].astype(np.float64, copy=False)
    vj = V[batch.j].astype(np.float64, copy=False)
    dots = np.einsum("ed,ed->e", vi, vj)
    err = dots - batch.s

    has_ni = batch.ni >= 0
    has_nj = batch.nj >= 0
    vn = V[np.where(has_ni, batch.ni, 0)].astype(np.float64, copy=False)
    vm = V[np.where(has_nj, batch.nj, 0)].astype(np.float64, copy=False)
    reg_i = np.where(has_ni, np.einsum("ed,ed->e", vi, vn), 0.0)
    reg_j = np.where(has_nj, np.einsum("ed,ed->e", vj, vm), 0.0)

    with np.errstate(over="ignore"):  # non-finite loss is detected by the caller
        terms = err**2 - alpha * (reg_i + reg_j)
    size = len(batch)
    loss = float(terms.sum() / size)

    touched = _touched_rows(batch)
    if l1 > 0.0:
        loss += l1 * float(np.abs(V[touched].astype(np.float64, copy=False)).sum())
    if not want_grads:
        return loss, touched, None, terms

    with np.errstate(over="ignore", invalid="ignore"):  # diverged rows surface
        gi = 2.0 * err[:, None] * vj                    # as a non-finite loss
        gj = 2.0 * err[:, None] * vi
        if alpha != 0.0:
            gi -= alpha * vn * has_ni[:, None]
            gj -= alpha * vm * has_nj[:, None]

    rows = [batch.i, batch.j]
    contribs = [gi, gj]
    if alpha != 0.0:
        rows.append(batch.ni[has_ni])
        contribs.append(-alpha * vi[has_ni])
        rows.append(batch.nj[has_nj])
        contribs.append(-alpha * vj[has_nj])

    all_rows = np.concatenate(rows)
    all_contribs = np.concatenate(contribs) / size
    pos = np.searchsorted(touched, all_rows)
    grads = np.zeros((len(touched), V.shape[1]), dtype=np.float64)
    np.add.at(grads, pos, all_contribs)
    if l1 > 0.0:
        grads += l1 * np.sign(V[touched].astype(np.float64, copy=False))
    return loss, touched, grads, terms


def batch_loss(m: EmbeddingMatrix, batch: Batch, alpha: float, l1: float = 0.0) -> float:
    """Mean entry loss plus the L1 penalty over rows the batch touches."""
    loss, _, _, _ = _loss_and_grads(m.matrix, batch, alpha, l1, want_grads=False)
    return loss


def batch_gradients(
    m: EmbeddingMatrix, batch: Batch, alpha: float, l1: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of batch_loss w.r.t. each touched row.

    Returns (touched_row_indices, gradient_rows), rows sorted ascending.
    """
    _, touched, grads, _ = _loss_and_grads(m.matrix, batch, alpha, l1, want_grads=True)
    return touched, grads


def _sample_neighbors(
    offsets: np.ndarray, flat: np.ndarray, nodes: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """One uniform neighbor per node via CSR adjacency; -1 for isolated nodes."""
    deg = offsets[nodes + 1] - offsets[nodes]
    draws = rng.random(len(nodes))
    if flat.size == 0:
        return np.full(len(nodes), -1, dtype=np.int64)
    picks = offsets[nodes] + np.minimum((draws * deg).astype(np.int64), np.maximum(deg - 1, 0))
    picks = np.minimum(picks, flat.size - 1)  # isolated nodes read a dummy slot
    return np.where(deg > 0, flat[picks], -1)


def _csr_neighbors(g: TaxonomyGraph) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.zeros(g.n + 1, dtype=np.int64)
    for i, adj in enumerate(g.neighbors):
        offsets[i + 1] = offsets[i] + len(adj)
    flat = np.fromiter(
        (w for adj in g.neighbors for w in adj), dtype=np.int64, count=int(offsets[-1])
    )
    return offsets, flat


def make_batches(
    pairs: list[TrainingPair],
    g: TaxonomyGraph,
    cfg: TrainConfig,
    epoch_seed,
) -> Iterator[Batch]:
    """Shuffled positives, each followed by its negatives, chunked into batches.

    Entry order per positive: the positive itself, then the first-endpoint
    negatives, then the second-endpoint negatives. Negative partners are
    uniform over all nodes with no filtering, so an occasional negative can
    collide with a truly similar pair. The RNG draw order is fixed
    (permutation, i-side negatives, j-side negatives, i neighbors,
    j neighbors), which makes the stream a pure function of the seed.
    """
    if not pairs:
        raise ConfigError("cannot make batches from an empty pair list")
    rng = np.random.default_rng(epoch_seed)
    P = len(pairs)
    I = np.fromiter((g.idx(p.u) for p in pairs), dtype=np.int64, count=P)
    J = np.fromiter((g.idx(p.v) for p in pairs), dtype=np.int64, count=P)
    S = np.fromiter((p.s for p in pairs), dtype=np.float64, count=P)

    perm = rng.permutation(P)
    I, J, S = I[perm], J[perm], S[perm]

    n_i, n_j = cfg.negatives_per_side()
    K = rng.integers(0, g.n, size=(P, n_i), dtype=np.int64)
    L = rng.integers(0, g.n, size=(P, n_j), dtype=np.int64)

    block = 1 + n_i + n_j
    E = P * block
    ei = np.empty(E, dtype=np.int64)
    ej = np.empty(E, dtype=np.int64)
    es = np.zeros(E, dtype=np.float64)
    neg = np.ones(E, dtype=bool)

    ei[0::block] = I
    ej[0::block] = J
    es[0::block] = S
    neg[0::block] = False
    for t in range(n_i):
        ei[1 + t :: block] = I
        ej[1 + t :: block] = K[:, t]
    for t in range(n_j):
        ei[1 + n_i + t :: block] = J
        ej[1 + n_i + t :: block] = L[:, t]

    offsets, flat = _csr_neighbors(g)
    ni = _sample_neighbors(offsets, flat, ei, rng)
    nj = _sample_neighbors(offsets, flat, ej, rng)

    for start in range(0, E, cfg.batch_size):
        end = min(start + cfg.batch_size, E)
        yield Batch(
            i=ei[start:end],
            j=ej[start:end],
            s=es[start:end],
            ni=ni[start:end],
            nj=nj[start:end],
            is_negative=neg[start:end],
        )


def _dev_spearman(m: EmbeddingMatrix, dev: list[TrainingPair]) -> float:
    from .evaluation import spearman  # deferred: evaluation imports this module

    preds = [score(m, p.u, p.v, "dot") for p in dev]
    golds = [p.s for p in dev]
    return spearman(preds, golds)


def train(
    pairs: list[TrainingPair],
    g: TaxonomyGraph,
    cfg: TrainConfig,
    on_epoch: Callable[[EpochStats], None] | None = None,
) -> EmbeddingMatrix:
    """Fit the embedding matrix with Adam.

    Rows start uniform(-0.05, 0.05) from cfg.seed; each epoch reshuffles and
    resamples batches from a (seed, epoch) stream. With a dev_set, epochs
    whose dev Spearman stops improving for `early_stop_patience` epochs end
    training and the best-epoch snapshot is returned; without one, all
    epochs run. A non-finite batch loss aborts with the epoch, batch, and
    first offending pair.
    """
    if not pairs:
        raise ConfigError("training needs at least one pair")
    nodes_seen = {p.u for p in pairs} | {p.v for p in pairs}
    if len(nodes_seen) < 2:
        raise ConfigError("training pairs must cover at least 2 distinct nodes")
    for p in pairs:
        g.idx(p.u)
        g.idx(p.v)

    rng = np.random.default_rng(cfg.seed)
    V = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(g.n, cfg.d)).astype(cfg.dtype)
    m = EmbeddingMatrix(g.ids, V)

    adam_m = np.zeros((g.n, cfg.d), dtype=np.float64)
    adam_v = np.zeros((g.n, cfg.d), dtype=np.float64)
    step = 0

    best_dev = -math.inf
    best_snapshot: np.ndarray | None = None
    stale = 0

    for epoch in range(cfg.epochs):
        losses: list[float] = []
        for bi, batch in enumerate(make_batches(pairs, g, cfg, [cfg.seed, epoch])):
            loss, touched, grads, terms = _loss_and_grads(
                V, batch, cfg.alpha, cfg.l1, want_grads=True
            )
            if not math.isfinite(loss):
                bad = int(np.flatnonzero(~np.isfinite(terms))[0]) if len(terms) else 0
                u, v = m.ids[int(batch.i[bad])], m.ids[int(batch.j[bad])]
                raise NumericError(
                    f"non-finite loss {loss!r} at epoch {epoch}, batch {bi}, "
                    f"pair ({u!r}, {v!r}, s={float(batch.s[bad])!r})"
                )
            losses.append(loss)

            step += 1
            mm = adam_m[touched]
            vv = adam_v[touched]
            mm *= ADAM_BETA1
            mm += (1 - ADAM_BETA1) * grads
            vv *= ADAM_BETA2
            vv += (1 - ADAM_BETA2) * grads**2
            adam_m[touched] = mm
            adam_v[touched] = vv
            m_hat = mm / (1 - ADAM_BETA1**step)
            v_hat = vv / (1 - ADAM_BETA2**step)
            update = cfg.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
            with np.errstate(over="ignore"):  # float32 overflow -> NumericError next batch
                V[touched] = (V[touched].astype(np.float64) - update).astype(cfg.dtype)

        dev_rho = None
        if cfg.dev_set:
            dev_rho = _dev_spearman(m, cfg.dev_set)
        if on_epoch is not None:
            on_epoch(
                EpochStats(
                    epoch=epoch,
                    mean_loss=float(np.mean(losses)),
                    median_loss=float(np.median(losses)),
                    dev_spearman=dev_rho,
                )
            )
        if dev_rho is not None:
            if dev_rho > best_dev:
                best_dev = dev_rho
                best_snapshot = V.copy()
                stale = 0
            else:
                stale += 1
                if stale >= cfg.early_stop_patience:
                    break

    if best_snapshot is not None:
        m.matrix = best_snapshot
    return m
