"""Graph-centrality word sense disambiguation.

Every candidate sense of every token in a sentence becomes a node; edges
connect candidates of different tokens whenever a scorer rates the pair
strictly above a threshold. Each token then takes its candidate with the
highest weighted degree (sum of incident edge weights); ties, including
the no-edges case, fall back to the first listed candidate, which is the
most frequent sense when lists are frequency-ordered.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, NamedTuple

import numpy as np

from .errors import ConfigError, DataError, TaxovecError
from .evaluation import MeasureScorer, ModelScorer


class Token(NamedTuple):
    index: int
    lemma: str
    candidates: tuple[str, ...]
    gold: str | None


@dataclass(frozen=True)
class SentenceInstance:
    instance_id: str
    tokens: tuple[Token, ...]


@dataclass
class WsdConfig:
    """Scoring threshold and the pair scorer that weighs candidate edges.

    The 0.95 default assumes scores on a [0,1] scale (an embedding model,
    or a graph measure rescaled with dataset normalization constants); a
    raw-scale measure scorer may use any threshold.
    """

    scorer: MeasureScorer | ModelScorer
    threshold: float = 0.95

    def __post_init__(self) -> None:
        normalized = isinstance(self.scorer, MeasureScorer) and self.scorer.norm_range
        if normalized and not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(
                f"threshold {self.threshold!r} outside [0,1] for a normalized scorer"
            )


GraphNode = tuple[int, str]  # (token index, candidate id); same id may recur per token


@dataclass
class SentenceGraph:
    degree: dict[GraphNode, float]
    edges: list[tuple[GraphNode, GraphNode, float]]
    skipped_pairs: int = 0


def build_sentence_graph(inst: SentenceInstance, cfg: WsdConfig) -> SentenceGraph:
    """Weighted graph over candidate senses; edges only across tokens.

    A pair the scorer cannot handle (unknown node, no embedding) is
    skipped and counted rather than failing the sentence.
    """
    graph = SentenceGraph(degree={}, edges=[])
    slots = [tok for tok in inst.tokens if tok.candidates]
    for tok in slots:
        for cand in tok.candidates:
            graph.degree.setdefault((tok.index, cand), 0.0)
    for a in range(len(slots)):
        for b in range(a + 1, len(slots)):
            ta, tb = slots[a], slots[b]
            for ca in ta.candidates:
                for cb in tb.candidates:
                    try:
                        w = cfg.scorer.score(ca, cb)
                    except TaxovecError:
                        graph.skipped_pairs += 1
                        continue
                    if w > cfg.threshold:
                        na, nb = (ta.index, ca), (tb.index, cb)
                        graph.edges.append((na, nb, w))
                        graph.degree[na] += w
                        graph.degree[nb] += w
    return graph


def select_senses(graph: SentenceGraph, inst: SentenceInstance) -> dict[int, str]:
    """Chosen candidate per token index, by maximal weighted degree.

    Only a strictly higher degree displaces an earlier candidate, so ties
    (and isolated columns) resolve to the first listed sense. Tokens
    without candidates are absent from the result.
    """
    choices: dict[int, str] = {}
    for tok in inst.tokens:
        if not tok.candidates:
            continue
        best = tok.candidates[0]
        best_deg = graph.degree.get((tok.index, best), 0.0)
        for cand in tok.candidates[1:]:
            deg = graph.degree.get((tok.index, cand), 0.0)
            if deg > best_deg:
                best, best_deg = cand, deg
        choices[tok.index] = best
    return choices


def disambiguate(
    instances: list[SentenceInstance], cfg: WsdConfig
) -> tuple[list[dict[int, str]], int]:
    """Predictions per instance plus the count of scorer-skipped pairs."""
    predictions: list[dict[int, str]] = []
    skipped = 0
    for inst in instances:
        graph = build_sentence_graph(inst, cfg)
        skipped += graph.skipped_pairs
        predictions.append(select_senses(graph, inst))
    return predictions, skipped


def random_sense_baseline(
    instances: list[SentenceInstance], seed: int
) -> list[dict[int, str]]:
    """Uniform random candidate per token, reproducible from the seed."""
    rng = np.random.default_rng(seed)
    out: list[dict[int, str]] = []
    for inst in instances:
        choice: dict[int, str] = {}
        for tok in inst.tokens:
            if tok.candidates:
                choice[tok.index] = tok.candidates[int(rng.integers(len(tok.candidates)))]
        out.append(choice)
    return out


def first_sense_baseline(instances: list[SentenceInstance]) -> list[dict[int, str]]:
    """First listed candidate per token (most frequent sense when so ordered)."""
    return [
        {tok.index: tok.candidates[0] for tok in inst.tokens if tok.candidates}
        for inst in instances
    ]


@dataclass
class WsdScore:
    precision: float
    recall: float
    f1: float
    attempted: int
    correct: int
    total_gold: int


def micro_f1(
    predictions: list[Mapping[int, str]], golds: list[Mapping[int, str]]
) -> WsdScore:
    """Micro-averaged precision/recall/F1 over gold-tagged tokens.

    precision = correct/attempted, recall = correct/gold-tagged; only
    gold-tagged tokens count as attempted. A system that answers every
    gold-tagged token gets precision = recall = F1 = accuracy. With zero
    attempts all three are 0 and a warning is issued.
    """
    if len(predictions) != len(golds):
        raise DataError(
            f"prediction/gold length mismatch: {len(predictions)} vs {len(golds)}"
        )
    attempted = correct = total_gold = 0
    for pred, gold in zip(predictions, golds):
        for tok_idx, gold_sense in gold.items():
            total_gold += 1
            if tok_idx in pred:
                attempted += 1
                if pred[tok_idx] == gold_sense:
                    correct += 1
    if attempted == 0:
        warnings.warn("no predictions on gold-tagged tokens; scores are 0")
        return WsdScore(0.0, 0.0, 0.0, 0, 0, total_gold)
    precision = correct / attempted
    recall = correct / total_gold if total_gold else 0.0
    f1 = 0.0
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    return WsdScore(precision, recall, f1, attempted, correct, total_gold)


def gold_maps(instances: list[SentenceInstance]) -> list[dict[int, str]]:
    """Token index to gold sense, per instance, skipping untagged tokens."""
    return [
        {tok.index: tok.gold for tok in inst.tokens if tok.gold is not None}
        for inst in instances
    ]


def load_instances(path: str | Path) -> list[SentenceInstance]:
    """Read the token-per-line instance format.

    Lines are `sentence_id<TAB>token_index<TAB>lemma<TAB>candidates<TAB>gold`
    with comma-separated candidates; `-` marks no candidates or no gold.
    A blank line ends the current sentence.
    """
    p = Path(path)
    instances: list[SentenceInstance] = []
    current: list[Token] = []
    current_id: str | None = None

    def flush() -> None:
        nonlocal current, current_id
        if current:
            instances.append(SentenceInstance(current_id, tuple(current)))
        current = []
        current_id = None

    with p.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                flush()
                continue
            if line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise DataError(f"{p}:{lineno}: expected 5 tab-separated fields")
            sent_id, tok_idx_s, lemma, cand_s, gold_s = fields
            try:
                tok_idx = int(tok_idx_s)
            except ValueError:
                raise DataError(f"{p}:{lineno}: bad token index {tok_idx_s!r}") from None
            if current_id is None:
                current_id = sent_id
            elif sent_id != current_id:
                raise DataError(
                    f"{p}:{lineno}: sentence id changed without a blank line "
                    f"({current_id!r} -> {sent_id!r})"
                )
            if any(tok.index == tok_idx for tok in current):
                raise DataError(f"{p}:{lineno}: duplicate token index {tok_idx}")
            candidates = ()
            if cand_s != "-":
                candidates = tuple(c.strip() for c in cand_s.split(",") if c.strip())
            gold = None if gold_s == "-" else gold_s
            current.append(Token(tok_idx, lemma, candidates, gold))
    flush()
    return instances


def write_predictions(
    path: str | Path,
    instances: list[SentenceInstance],
    predictions: list[Mapping[int, str]],
) -> None:
    """Mirror the instance format with the chosen sense in the last column."""
    if len(instances) != len(predictions):
        raise DataError(
            f"instance/prediction length mismatch: {len(instances)} vs {len(predictions)}"
        )
    p = Path(path)
    with p.open("w", encoding="utf-8") as fh:
        for k, (inst, pred) in enumerate(zip(instances, predictions)):
            if k:
                fh.write("\n")
            for tok in inst.tokens:
                cand_s = ",".join(tok.candidates) if tok.candidates else "-"
                chosen = pred.get(tok.index, "-")
                fh.write(
                    f"{inst.instance_id}\t{tok.index}\t{tok.lemma}\t{cand_s}\t{chosen}\n"
                )
