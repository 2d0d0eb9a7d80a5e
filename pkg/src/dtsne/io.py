"""Headerless tab-separated tables for datasets, labels and embeddings."""

from __future__ import annotations

import math
import os

import numpy as np

from .core import Dataset, DtsneError, Embedding, validate_dataset


class ParseError(DtsneError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column


class RaggedRowsError(DtsneError):
    pass


def _read_lines(path):
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(f"{path}: file contains no rows")
    return lines


def read_tsv(path) -> np.ndarray:
    """Parse a headerless tab-separated file of finite reals into an ``n x c`` array.

    A single trailing newline is tolerated; any other blank line is an error.
    """
    rows = []
    n_cols = None
    for lineno, line in enumerate(_read_lines(path), start=1):
        if line.endswith("\r"):
            line = line[:-1]
        if line == "":
            raise ParseError(f"{path}: blank line", lineno)
        fields = line.split("\t")
        row = []
        for col, tok in enumerate(fields, start=1):
            try:
                v = float(tok)
            except ValueError:
                raise ParseError(f"{path}: cannot parse {tok!r} as a real", lineno, col) from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: non-finite value {tok!r}", lineno, col)
            row.append(v)
        if n_cols is None:
            n_cols = len(row)
        elif len(row) != n_cols:
            raise RaggedRowsError(f"{path}: line {lineno} has {len(row)} fields, expected {n_cols}")
        rows.append(row)
    return np.array(rows, dtype=np.float64)


def format_real(v) -> str:
    """Shortest decimal that round-trips to the same double, without a trailing ``.0``."""
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def write_tsv(table, path):
    table = np.asarray(table, dtype=np.float64)
    if table.ndim == 1:
        table = table[:, None]
    text = "".join("\t".join(format_real(v) for v in row) + "\n" for row in table)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_labels(path) -> np.ndarray:
    labels = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        tok = line.strip()
        try:
            labels.append(int(tok))
        except ValueError:
            raise ParseError(f"{path}: cannot parse {tok!r} as an integer label", lineno, 1) from None
    return np.array(labels, dtype=np.int64)


def write_labels(labels, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("".join(f"{int(v)}\n" for v in labels))


def dataset_from_tsv(path, label_path=None, name=None) -> Dataset:
    points = read_tsv(path)
    labels = read_labels(label_path) if label_path is not None else None
    if name is None:
        name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    return validate_dataset(Dataset(points, labels, name))


def embedding_to_tsv(embedding: Embedding, path):
    write_tsv(embedding.coords, path)
