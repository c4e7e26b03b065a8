"""Left-corner dependency parsing: oracle traces, depth analysis, DMV induction
and beam-search perceptron parsers."""

from ._lcdep import (
    DepTree,
    DmvModel,
    SupervisedModel,
    append_root,
    coverage,
    depth_histogram,
    oracle_trace,
    parse_conll,
    train_dmv,
    train_supervised,
    uas,
    write_conll,
)

__all__ = [
    "DepTree",
    "DmvModel",
    "SupervisedModel",
    "append_root",
    "coverage",
    "depth_histogram",
    "oracle_trace",
    "parse_conll",
    "train_dmv",
    "train_supervised",
    "uas",
    "write_conll",
]
