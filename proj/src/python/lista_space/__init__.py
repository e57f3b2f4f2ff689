"""Python access to the lista_space core: data, solvers, genomes, training."""

import json

from . import _core
from ._core import (
    Dataset,
    Dictionary,
    ListaError,
    fista,
    ista,
    lasso_objective,
    make_dataset,
    sample_dictionary,
    sample_lowrank_dictionary,
    soft_threshold,
    spectral_sq_norm,
)

__all__ = [
    "Dataset",
    "Dictionary",
    "ListaError",
    "cli",
    "count_extra",
    "design_space_size",
    "fista",
    "genome_hash",
    "genome_preset",
    "ista",
    "lasso_objective",
    "make_dataset",
    "sample_dictionary",
    "sample_lowrank_dictionary",
    "soft_threshold",
    "spectral_sq_norm",
    "train",
    "validate_genome",
]


def _text(genome):
    return genome if isinstance(genome, str) else json.dumps(genome)


def genome_preset(name, k):
    """Preset genome ("lista", "lfista" or "dense") as a dict."""
    return json.loads(_core.genome_preset(name, k))


def validate_genome(genome):
    return _core.validate_genome(_text(genome))


def count_extra(genome):
    return _core.count_extra(_text(genome))


def genome_hash(genome):
    return _core.genome_hash(_text(genome))


def design_space_size(k, neurons=False, pruning=False):
    return _core.design_space_size(k, neurons, pruning)


def train(genome, dictionary, train_ds, val_ds, config=None):
    """Trains a genome; returns the report as a dict."""
    report = _core.train(_text(genome), dictionary, train_ds, val_ds, json.dumps(config or {}))
    return json.loads(report)


def cli(*args):
    """Runs the command-line tool in-process; returns its exit code."""
    return _core.cli([str(a) for a in args])
