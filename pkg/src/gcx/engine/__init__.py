"""Query evaluation over SLT grammars without decompression."""

from .behavior import BehaviorTable, build_behavior, count, relabel, relabeled_name
from .chunks import ChunkTable, build_chunks, chunk_lengths, materialize, walk
from .offsets import EMPTY, Concat, OffsetBuilder, OffsetList, Shift, Single, flatten
from .output import (
    dag_subtrees_slp,
    iter_subtree_tokens,
    iter_term_tokens,
    iter_tokens,
    locate,
    serialize,
    slt_to_slp,
    subtrees_slp,
)

__all__ = [
    "BehaviorTable", "build_behavior", "count", "relabel", "relabeled_name",
    "ChunkTable", "build_chunks", "chunk_lengths", "materialize", "walk",
    "EMPTY", "Concat", "OffsetBuilder", "OffsetList", "Shift", "Single", "flatten",
    "dag_subtrees_slp", "iter_subtree_tokens", "iter_term_tokens", "iter_tokens",
    "locate", "serialize", "slt_to_slp", "subtrees_slp",
]
