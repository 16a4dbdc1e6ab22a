"""Difficulty-aware BERTScore and metric meta-evaluation (C++ core)."""

from ._damteval import (
    DAScores,
    DamtevalError,
    DifficultyMap,
    MatchScores,
    SegmentEmbedding,
    compute_difficulty,
    corpus_bleu,
    cosine_similarity,
    da_scores,
    greedy_match,
    kendall,
    pearson,
    rank_report,
    read_emb1,
    score_corpus,
    similarity_matrix,
    spearman,
    system_score,
    top_k_select,
    top_k_sweep,
    write_emb1,
)

__all__ = [
    "DAScores",
    "DamtevalError",
    "DifficultyMap",
    "MatchScores",
    "SegmentEmbedding",
    "compute_difficulty",
    "corpus_bleu",
    "cosine_similarity",
    "da_scores",
    "error_code",
    "greedy_match",
    "kendall",
    "pearson",
    "rank_report",
    "read_emb1",
    "score_corpus",
    "similarity_matrix",
    "spearman",
    "system_score",
    "top_k_select",
    "top_k_sweep",
    "write_emb1",
]


def error_code(err: DamtevalError) -> str:
    """The error class name carried by a DamtevalError, e.g. "FormatError"."""
    return err.args[0]
