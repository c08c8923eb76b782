"""Weighted author co-mention matrix.

The co-mention count of two authors is the size of the intersection of
their mention multisets, i.e. the sum over documents of the smaller of
the two per-document mention counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from comention.errors import DataError
from comention.mentions import MentionProfile, ProfileSet


@dataclass(frozen=True)
class ComentionMatrix:
    """Symmetric integer matrix whose diagonal is masked as missing."""

    labels: tuple[str, ...]
    cells: np.ma.MaskedArray

    def __post_init__(self):
        n = len(self.labels)
        if list(self.labels) != sorted(set(self.labels)):
            raise DataError("matrix labels must be unique and sorted")
        cells = np.ma.masked_array(np.asarray(self.cells, dtype=np.int64), mask=np.eye(n, dtype=bool))
        if cells.shape != (n, n):
            raise DataError(f"matrix shape {cells.shape} does not match {n} labels")
        if not np.array_equal(cells.filled(0), cells.filled(0).T):
            raise DataError("co-mention matrix is not symmetric")
        cells.data[np.diag_indices(n)] = 0
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __getitem__(self, ij: tuple[int, int]) -> int | None:
        i, j = ij
        return None if i == j else int(self.cells.data[i, j])


def comention_count(a: MentionProfile, b: MentionProfile) -> int:
    if a.lemma == b.lemma:
        raise ValueError(f"co-mention of {a.lemma!r} with itself is undefined")
    small, large = (a, b) if len(a.counts) <= len(b.counts) else (b, a)
    return sum(min(n, large.counts.get(doc, 0)) for doc, n in small.counts.items())


def count_matrix(profiles: ProfileSet) -> tuple[list[str], list[str], np.ndarray]:
    """Dense author x document mention counts, rows in lemma order."""
    lemmas = profiles.lemmas
    docs = sorted({d for p in profiles for d in p.counts})
    col = {d: j for j, d in enumerate(docs)}
    counts = np.zeros((len(lemmas), len(docs)), dtype=np.int64)
    for i, p in enumerate(profiles):
        for d, n in p.counts.items():
            counts[i, col[d]] = n
    return lemmas, docs, counts


def build_matrix(profiles: ProfileSet) -> ComentionMatrix:
    if len(profiles) < 2:
        raise DataError(f"need at least 2 profiles to build a matrix, got {len(profiles)}")
    lemmas, _, counts = count_matrix(profiles)
    n = len(lemmas)
    cells = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        cells[i, i + 1 :] = np.minimum(counts[i], counts[i + 1 :]).sum(axis=1)
    cells = cells + cells.T
    return ComentionMatrix(tuple(lemmas), cells)


def write_matrix_csv(m: ComentionMatrix, path: str | Path, header: str | None = None) -> None:
    """Write labels in the first row and column; the diagonal is an empty field."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(header + "\n")
        fh.write("," + ",".join(m.labels) + "\n")
        for i, label in enumerate(m.labels):
            row = ["" if i == j else str(int(m.cells.data[i, j])) for j in range(m.n)]
            fh.write(label + "," + ",".join(row) + "\n")


def read_matrix_csv(path: str | Path) -> ComentionMatrix:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing matrix file {path}")
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n").split(",") for line in fh if not line.startswith("#")]
    if not rows or rows[0][0] != "":
        raise DataError(f"{path.name}: bad matrix header row")
    labels = rows[0][1:]
    n = len(labels)
    if len(rows) != n + 1:
        raise DataError(f"{path.name}: expected {n} data rows, got {len(rows) - 1}")
    cells = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1 or row[0] != labels[i]:
            raise DataError(f"{path.name}: malformed row {i + 2}")
        for j, field in enumerate(row[1:]):
            if i == j:
                if field != "":
                    raise DataError(f"{path.name}: diagonal of {labels[i]!r} must be empty")
                continue
            try:
                cells[i, j] = int(field)
            except ValueError:
                raise DataError(f"{path.name}: bad cell {field!r} in row {labels[i]!r}") from None
    return ComentionMatrix(tuple(labels), cells)
