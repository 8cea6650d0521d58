"""Dense node embeddings that approximate taxonomy graph similarity measures.

Pipeline: load a taxonomy (`graph`), score node pairs with a similarity
measure (`metrics`), build a pruned normalized training set (`dataset`),
fit an embedding matrix against it (`trainer`), then evaluate by rank
correlation (`evaluation`), word sense disambiguation (`wsd`), or
one-vs-all query speed (`bench`). The `taxovec` CLI exposes each stage.
"""

from .bench import BenchReport, BenchResult, one_vs_all_dot, one_vs_all_graph, run_benchmark
from .dataset import (
    DatasetBuild,
    DatasetConfig,
    TrainingPair,
    build_fast,
    build_full,
    read_pairs,
    unity_normalize,
    write_pairs,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateRangeError,
    EdgeListError,
    EmptyDatasetError,
    NumericError,
    StructuralError,
    TaxovecError,
    UnknownNodeError,
)
from .evaluation import (
    EvalReport,
    LemmaPairRecord,
    MeasureScorer,
    ModelScorer,
    dynamic_selection,
    evaluate,
    spearman,
    static_selection,
)
from .graph import (
    DepthIndex,
    TaxonomyGraph,
    compute_depths,
    load_edge_list,
    lowest_common_subsumer,
    second_order_neighborhood,
    shortest_path_length,
)
from .manifest import artifact_version, read_manifest, write_manifest
from .metrics import (
    MEASURES,
    InformationContentTable,
    load_raw_counts,
    pair_similarity,
    propagate_counts,
)
from .trainer import (
    Batch,
    EmbeddingMatrix,
    TrainConfig,
    batch_gradients,
    batch_loss,
    load_embeddings,
    make_batches,
    save_embeddings,
    score,
    train,
)
from .wsd import (
    SentenceInstance,
    WsdConfig,
    build_sentence_graph,
    disambiguate,
    micro_f1,
    random_sense_baseline,
    select_senses,
)

__version__ = artifact_version()

__all__ = [
    "BenchReport",
    "BenchResult",
    "Batch",
    "ConfigError",
    "DataError",
    "DatasetBuild",
    "DatasetConfig",
    "DegenerateRangeError",
    "DepthIndex",
    "EdgeListError",
    "EmbeddingMatrix",
    "EmptyDatasetError",
    "EvalReport",
    "InformationContentTable",
    "LemmaPairRecord",
    "MEASURES",
    "MeasureScorer",
    "ModelScorer",
    "NumericError",
    "SentenceInstance",
    "StructuralError",
    "TaxonomyGraph",
    "TaxovecError",
    "TrainConfig",
    "TrainingPair",
    "UnknownNodeError",
    "WsdConfig",
    "artifact_version",
    "batch_gradients",
    "batch_loss",
    "build_fast",
    "build_full",
    "build_sentence_graph",
    "compute_depths",
    "disambiguate",
    "dynamic_selection",
    "evaluate",
    "load_edge_list",
    "load_embeddings",
    "load_raw_counts",
    "lowest_common_subsumer",
    "make_batches",
    "micro_f1",
    "one_vs_all_dot",
    "one_vs_all_graph",
    "pair_similarity",
    "propagate_counts",
    "random_sense_baseline",
    "read_manifest",
    "read_pairs",
    "run_benchmark",
    "save_embeddings",
    "score",
    "second_order_neighborhood",
    "select_senses",
    "shortest_path_length",
    "spearman",
    "static_selection",
    "train",
    "unity_normalize",
    "write_manifest",
    "write_pairs",
]
