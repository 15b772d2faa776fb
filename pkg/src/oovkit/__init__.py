"""Weighted FST toolkit for out-of-vocabulary word recovery.

Subpackages: :mod:`oovkit.fst` (transducers), :mod:`oovkit.rules` (rewrite
rule compiler), :mod:`oovkit.ngram` (backoff n-gram models),
:mod:`oovkit.pipeline` (lexicon / G2P / recovery), :mod:`oovkit.sampling`
(LM corpus balancing), :mod:`oovkit.cli` (command line).
"""

from oovkit.fst import (
    EPSILON,
    Arc,
    Path,
    SymbolTable,
    TableMismatch,
    Tropical,
    UnknownSymbol,
    Wfst,
    WfstBuilder,
    closure,
    compose,
    concat,
    connect,
    invert,
    linear_acceptor,
    project,
    remove_epsilon,
    shortest_paths,
    union,
)

__version__ = "0.1.0"

__all__ = [
    "EPSILON",
    "Arc",
    "Path",
    "SymbolTable",
    "TableMismatch",
    "Tropical",
    "UnknownSymbol",
    "Wfst",
    "WfstBuilder",
    "closure",
    "compose",
    "concat",
    "connect",
    "invert",
    "linear_acceptor",
    "project",
    "remove_epsilon",
    "shortest_paths",
    "union",
    "__version__",
]
