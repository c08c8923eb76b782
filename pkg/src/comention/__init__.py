"""Author name co-mention analysis over full-text corpora."""

__version__ = "0.1.0"

from comention.corpus import Corpus, Document, load_corpus, tokenize
from comention.errors import ComentionError, ConfigError, DataError, NumericalError
from comention.factors import (
    correlation_matrix,
    eigen_spectrum,
    extract_loadings,
    factor_report,
    fill_diagonal_mean,
    select_k,
)
from comention.lexicon import (
    build_lexicon,
    count_corpus_frequency,
    expand_variants,
    load_candidates,
)
from comention.matrix import build_matrix, comention_count
from comention.mentions import build_profiles, filter_min_mentions, scan_document
from comention.rotation import oblimin_criterion, oblimin_rotate

__all__ = [
    "ComentionError",
    "ConfigError",
    "Corpus",
    "DataError",
    "Document",
    "NumericalError",
    "build_lexicon",
    "build_matrix",
    "build_profiles",
    "comention_count",
    "correlation_matrix",
    "count_corpus_frequency",
    "eigen_spectrum",
    "expand_variants",
    "extract_loadings",
    "factor_report",
    "fill_diagonal_mean",
    "filter_min_mentions",
    "load_candidates",
    "load_corpus",
    "oblimin_criterion",
    "oblimin_rotate",
    "scan_document",
    "select_k",
    "tokenize",
]
