"""Direct Oblimin rotation by gradient projection.

The criterion for a pattern matrix ``L`` (n x k) is

    f(L) = sum_{p<q} [ sum_i L_ip^2 L_iq^2 - (gamma/n) (sum_i L_ip^2)(sum_i L_iq^2) ]

which for ``gamma = 0`` is quartimin. An oblique transform ``T`` with unit
length columns maps the unrotated loadings ``A`` to ``L = A inv(T)'`` and
the factor correlations are ``T'T``.

The iteration follows Jennrich (2002), "A simple general method for oblique
rotation": a projected gradient step on the manifold of unit-column
matrices with a backtracking (Armijo) step size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from comention.errors import NumericalError

_MAX_HALVINGS = 11
_COND_LIMIT = 1e12


class RotationStep(NamedTuple):
    iteration: int
    criterion: float
    gradient_norm: float
    step_size: float


@dataclass(frozen=True)
class FactorSolution:
    labels: tuple[str, ...]
    unrotated: np.ndarray
    pattern: np.ndarray
    phi: np.ndarray
    iterations: int
    converged: bool
    criterion: float
    transform: np.ndarray = field(repr=False)
    log: tuple[RotationStep, ...] = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.pattern.shape[1]

    def structure(self) -> np.ndarray:
        """Structure matrix: correlations between variables and factors."""
        return self.pattern @ self.phi


def oblimin_criterion(L: np.ndarray, gamma: float = 0.0, gradient: bool = False):
    """Oblimin criterion value and, optionally, its gradient with respect to ``L``."""
    L = np.asarray(L, dtype=float)
    n, k = L.shape
    L2 = L * L
    off = np.ones((k, k)) - np.eye(k)
    X = L2 @ off
    if gamma != 0:
        X = X - (gamma / n) * np.sum(L2, axis=0, keepdims=True) @ off
    f = 0.5 * float(np.sum(L2 * X))
    if not gradient:
        return f
    return f, 2.0 * L * X


def _inverse(T: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(T)) or np.linalg.cond(T) > _COND_LIMIT:
        raise NumericalError("rotation transform became singular")
    return np.linalg.inv(T)


def _evaluate(A, T, gamma):
    Ti = _inverse(T)
    L = A @ Ti.T
    f, dL = oblimin_criterion(L, gamma, gradient=True)
    G = -(L.T @ dL @ Ti).T
    return f, G


def _project(T, G):
    return G - T * np.sum(T * G, axis=0, keepdims=True)


def _normalize_signs(L: np.ndarray) -> np.ndarray:
    """+1/-1 per column so each column's largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(L), axis=0)
    signs = np.sign(L[idx, np.arange(L.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def oblimin_rotate(
    unrotated: np.ndarray,
    gamma: float = 0.0,
    max_iter: int = 250,
    tol: float = 1e-6,
    labels: Sequence[str] | None = None,
    initial: np.ndarray | None = None,
) -> FactorSolution:
    """Rotate ``unrotated`` loadings obliquely to minimize the Oblimin criterion.

    Parameters
    ----------
    unrotated : (n, k) array
        Unrotated loadings.
    gamma : float
        Oblimin family parameter; 0 is quartimin.
    max_iter : int
        Maximum number of gradient projection steps. Hitting the cap is not
        an error; the solution comes back with ``converged=False``.
    tol : float
        Convergence threshold on the Frobenius norm of the projected gradient.
    initial : (k, k) array, optional
        Starting transform; its columns are rescaled to unit length.
        Defaults to the identity.

    Returns
    -------
    FactorSolution
        Pattern columns are sign-normalized so that each column's
        largest-magnitude loading is positive.
    """
    A = np.array(unrotated, dtype=float)
    if A.ndim != 2 or A.shape[1] < 1:
        raise ValueError("unrotated loadings must be an (n, k) array with k >= 1")
    n, k = A.shape
    labels = tuple(labels) if labels is not None else tuple(f"V{i + 1}" for i in range(n))
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} rows")

    if k == 1:
        return FactorSolution(
            labels, A, A.copy(), np.ones((1, 1)), 0, True, 0.0, np.ones((1, 1)),
            (RotationStep(0, 0.0, 0.0, 0.0),),
        )

    T = np.eye(k) if initial is None else np.array(initial, dtype=float)
    T = T / np.linalg.norm(T, axis=0)
    f, G = _evaluate(A, T, gamma)
    Gp = _project(T, G)
    s = float(np.linalg.norm(Gp))
    alpha = 1.0
    log = [RotationStep(0, f, s, 0.0)]

    iterations = 0
    for it in range(1, max_iter + 1):
        if s < tol:
            break
        alpha *= 2.0
        for _ in range(_MAX_HALVINGS):
            X = T - alpha * Gp
            Tt = X / np.linalg.norm(X, axis=0)
            ft, Gt = _evaluate(A, Tt, gamma)
            if ft < f - 0.5 * s * s * alpha:
                break
            alpha /= 2.0
        else:
            # no sufficient decrease at any step size: numerically stationary
            break
        T, f, G = Tt, ft, Gt
        Gp = _project(T, G)
        s = float(np.linalg.norm(Gp))
        iterations = it
        log.append(RotationStep(it, f, s, alpha))

    pattern = A @ _inverse(T).T
    signs = _normalize_signs(pattern)
    pattern = pattern * signs
    T = T * signs
    phi = T.T @ T
    phi = 0.5 * (phi + phi.T)
    np.fill_diagonal(phi, 1.0)
    return FactorSolution(
        labels=labels,
        unrotated=A,
        pattern=pattern,
        phi=phi,
        iterations=iterations,
        converged=s < tol,
        criterion=oblimin_criterion(pattern, gamma),
        transform=T,
        log=tuple(log),
    )
