"""Geometric significance attributes of synonym sets over word embeddings.

Given a pretrained word2vec-format model and a collection of synsets, this
package computes, for every word of a synset, its rank (how consistently
the word pulls the remaining words together across all two-block splits),
its centrality (the accumulated similarity improvement), and whether it
belongs to the synset interior (it strictly improves every split).  Synsets
with an empty interior are candidates for dictionary cleanup; two models
can be compared side by side.
"""

from .embeddings import (
    EmbeddingModel,
    WordVector,
    cosine,
    load_binary_model,
    load_text_model,
    normalized_mean,
    save_binary_model,
    save_text_model,
    set_similarity,
)
from .errors import (
    DegenerateGeometryError,
    ModelFormatError,
    ResolutionError,
    SynsetGeomError,
    SynsetParseError,
    SynsetSizeError,
)
from .geometry import (
    DEFAULT_EPS,
    DEFAULT_MAX_SYNSET_SIZE,
    Partition,
    PartitionOutcome,
    ResolvedSynset,
    SynsetReport,
    WordAttributes,
    analyze_synset,
    enumerate_partitions,
    interior_membership,
    partition_outcome,
    partition_outcomes,
    rank_and_centrality,
    sgn_eps,
)
from .ingestion import (
    OovPolicy,
    RawSynset,
    ResolutionOutcome,
    parse_synsets,
    resolve,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPS",
    "DEFAULT_MAX_SYNSET_SIZE",
    "DegenerateGeometryError",
    "EmbeddingModel",
    "ModelFormatError",
    "OovPolicy",
    "Partition",
    "PartitionOutcome",
    "RawSynset",
    "ResolutionError",
    "ResolutionOutcome",
    "ResolvedSynset",
    "SynsetGeomError",
    "SynsetParseError",
    "SynsetReport",
    "SynsetSizeError",
    "WordAttributes",
    "WordVector",
    "analyze_synset",
    "cosine",
    "enumerate_partitions",
    "interior_membership",
    "load_binary_model",
    "load_text_model",
    "normalized_mean",
    "parse_synsets",
    "partition_outcome",
    "partition_outcomes",
    "rank_and_centrality",
    "resolve",
    "save_binary_model",
    "save_text_model",
    "set_similarity",
    "sgn_eps",
]
