"""Exploratory factor analysis of a co-mention matrix.

Pipeline: fill the missing diagonal with column means, correlate columns,
take the eigen spectrum, choose the number of factors, extract principal
component loadings, rotate (see :mod:`comention.rotation`) and summarize
factor membership.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from comention.errors import DataError, NumericalError
from comention.matrix import ComentionMatrix
from comention.mentions import ProfileSet
from comention.rotation import FactorSolution


@dataclass(frozen=True)
class DataMatrix:
    labels: tuple[str, ...]
    values: np.ndarray


@dataclass(frozen=True)
class EigenSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class FactorRow:
    factor: int  # 1-based
    members: tuple[str, ...]
    max_loading: float

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class FactorReport:
    rows: tuple[FactorRow, ...]
    unassigned: tuple[str, ...]
    assignment: dict[str, int]  # lemma -> 1-based factor
    threshold: float = 0.3


def fill_diagonal_mean(m: ComentionMatrix) -> DataMatrix:
    """Replace each missing diagonal cell by its column's off-diagonal mean."""
    n = m.n
    if n < 2:
        raise DataError("need at least a 2x2 matrix")
    values = m.cells.filled(0).astype(float)
    np.fill_diagonal(values, values.sum(axis=0) / (n - 1))
    return DataMatrix(m.labels, values)


def correlation_matrix(d: DataMatrix) -> DataMatrix:
    """Pearson correlations between the columns of ``d``."""
    X = np.asarray(d.values, dtype=float)
    constant = np.ptp(X, axis=0) == 0
    if constant.any():
        bad = [d.labels[i] for i in np.flatnonzero(constant)]
        raise DataError(f"zero variance column(s), cannot correlate: {', '.join(bad)}")
    Xc = X - X.mean(axis=0)
    Xc = Xc / np.linalg.norm(Xc, axis=0)
    R = Xc.T @ Xc
    R = np.clip(0.5 * (R + R.T), -1.0, 1.0)
    np.fill_diagonal(R, 1.0)
    return DataMatrix(d.labels, R)


def eigen_spectrum(r: DataMatrix | np.ndarray) -> EigenSpectrum:
    """Full eigendecomposition, eigenvalues descending.

    Each eigenvector is signed so that its largest-magnitude component is
    positive (first such component on ties).
    """
    R = np.asarray(r.values if isinstance(r, DataMatrix) else r, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise DataError(f"expected a square matrix, got shape {R.shape}")
    if not np.allclose(R, R.T, rtol=0, atol=1e-12):
        raise DataError("matrix is not symmetric")
    try:
        w, V = np.linalg.eigh(0.5 * (R + R.T))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-solver did not converge: {exc}") from None
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return EigenSpectrum(w, V * signs)


def select_k(spectrum: EigenSpectrum, mode: str = "kaiser", k: int | None = None) -> int:
    """Number of factors to extract.

    ``mode="explicit"`` validates and returns ``k``; ``mode="kaiser"``
    counts eigenvalues strictly greater than 1. Kaiser may return 0, which
    :func:`extract_loadings` rejects.
    """
    if mode == "explicit":
        if k is None or not 1 <= k <= spectrum.n:
            raise DataError(f"k must be between 1 and {spectrum.n}, got {k}")
        return int(k)
    if mode == "kaiser":
        return int(np.sum(spectrum.eigenvalues > 1.0))
    raise ValueError(f"unknown factor selection mode {mode!r}")


def extract_loadings(spectrum: EigenSpectrum, k: int) -> np.ndarray:
    """Principal component loadings: eigenvectors scaled by sqrt(eigenvalue)."""
    if not 1 <= k <= spectrum.n:
        raise DataError(f"k must be between 1 and {spectrum.n}, got {k}")
    w = spectrum.eigenvalues[:k]
    floor = 1e-12 * max(1.0, float(spectrum.eigenvalues[0]))
    if np.any(w <= floor):
        bad = int(np.flatnonzero(w <= floor)[0]) + 1
        raise DataError(f"eigenvalue {bad} is not positive ({w[bad - 1]:.3g}); choose k < {bad}")
    L = spectrum.eigenvectors[:, :k] * np.sqrt(w)
    idx = np.argmax(np.abs(L), axis=0)
    signs = np.sign(L[idx, np.arange(k)])
    signs[signs == 0] = 1.0
    return L * signs


def factor_report(
    sol: FactorSolution,
    profiles: ProfileSet | None = None,
    threshold: float = 0.3,
) -> FactorReport:
    """Assign each author to the factor of its largest absolute loading.

    Authors whose largest absolute loading is below ``threshold`` are left
    unassigned; ties go to the lower factor index. A factor's max loading
    is the largest absolute loading of any author on it.
    """
    if profiles is not None:
        missing = set(sol.labels) - set(profiles.lemmas)
        if missing:
            raise DataError(f"solution labels without a mention profile: {sorted(missing)}")
    P = np.abs(sol.pattern)
    best = np.argmax(P, axis=1)  # first maximum, i.e. lower index on ties
    members: list[list[tuple[float, str]]] = [[] for _ in range(sol.k)]
    unassigned = []
    assignment = {}
    for i, label in enumerate(sol.labels):
        value = P[i, best[i]]
        if value >= threshold:
            members[best[i]].append((value, label))
            assignment[label] = int(best[i]) + 1
        else:
            unassigned.append(label)
    rows = tuple(
        FactorRow(
            factor=c + 1,
            members=tuple(label for _, label in sorted(members[c], key=lambda t: (-t[0], t[1]))),
            max_loading=float(P[:, c].max()),
        )
        for c in range(sol.k)
    )
    return FactorReport(rows, tuple(unassigned), assignment, threshold)


# --- file formats -----------------------------------------------------------


def _open(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def write_eigenvalues(spectrum: EigenSpectrum, path, header: str | None = None) -> None:
    with _open(path) as fh:
        if header:
            fh.write(header + "\n")
        fh.write("rank\teigenvalue\n")
        for rank, value in enumerate(spectrum.eigenvalues, start=1):
            fh.write(f"{rank}\t{value:.10f}\n")


def write_loadings_csv(labels: Sequence[str], L: np.ndarray, path, header: str | None = None,
                       prefix: str = "F") -> None:
    """Rows are labels, columns F1..Fk, 6 decimal places."""
    L = np.asarray(L)
    with _open(path) as fh:
        if header:
            fh.write(header + "\n")
        fh.write("," + ",".join(f"{prefix}{c + 1}" for c in range(L.shape[1])) + "\n")
        for label, row in zip(labels, L):
            # "+ 0.0" turns -0.000000 into 0.000000
            fh.write(label + "," + ",".join(f"{round(v, 6) + 0.0:.6f}" for v in row) + "\n")


def read_loadings_csv(path) -> tuple[tuple[str, ...], np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing loadings file {path}")
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n").split(",") for line in fh if not line.startswith("#")]
    if not rows or rows[0][0] != "":
        raise DataError(f"{path.name}: bad header row")
    k = len(rows[0]) - 1
    labels, values = [], []
    for row in rows[1:]:
        if len(row) != k + 1:
            raise DataError(f"{path.name}: malformed row for {row[0]!r}")
        labels.append(row[0])
        try:
            values.append([float(v) for v in row[1:]])
        except ValueError:
            raise DataError(f"{path.name}: non-numeric loading in row {row[0]!r}") from None
    return tuple(labels), np.array(values, dtype=float).reshape(len(labels), k)


def write_rotation_log(sol: FactorSolution, path, header: str | None = None) -> None:
    with _open(path) as fh:
        if header:
            fh.write(header + "\n")
        fh.write(f"# iterations={sol.iterations} converged={str(sol.converged).lower()} "
                 f"criterion={sol.criterion:.10g}\n")
        fh.write("iteration\tcriterion\tgradient_norm\tstep_size\n")
        for step in sol.log:
            fh.write(f"{step.iteration}\t{step.criterion:.10g}\t{step.gradient_norm:.6g}\t{step.step_size:.6g}\n")


def write_report(report: FactorReport, path, header: str | None = None) -> None:
    """Tab-separated ``factor, max_loading, size, members`` (members comma-joined)."""
    with _open(path) as fh:
        if header:
            fh.write(header + "\n")
        fh.write("factor\tmax_loading\tsize\tmembers\n")
        for row in report.rows:
            fh.write(f"F{row.factor}\t{row.max_loading:.2f}\t{row.size}\t{','.join(row.members)}\n")
        fh.write(f"unassigned\t\t{len(report.unassigned)}\t{','.join(report.unassigned)}\n")
