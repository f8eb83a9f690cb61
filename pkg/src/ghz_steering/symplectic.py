"""Covariance-matrix algebra for Gaussian states of N bosonic modes.

Quadrature convention: x = a + a*, p = (a - a*)/i, so the vacuum state has
unit variance in both quadratures (shot-noise units).  All matrices use the
interleaved ordering (x1, p1, x2, p2, ...).  A state is physical when every
symplectic eigenvalue of its covariance matrix is >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Uncertainty-relation slack: physical means min symplectic eigenvalue >= 1 - PHYSICALITY_TOL.
PHYSICALITY_TOL = 1e-9

# Condition-number guard on the steering-party block of a Schur complement.
# No configuration in scope comes anywhere near this; exceeding it means the
# inversion would be numerically meaningless, so fail loudly instead.
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetrized second moments of the quadratures of an N-mode Gaussian state.

    The wrapped array is symmetrized on ingest and frozen read-only.  No
    physicality requirement is imposed here; use :func:`is_physical`.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("covariance matrix must be square")
        if m.shape[0] == 0 or m.shape[0] % 2:
            raise ValueError("covariance matrix dimension must be 2N for N >= 1 modes")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix entries must be finite")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class Partition:
    """Directed bipartition: measurements on `steering` modes condition `steered` modes."""

    steering: tuple[int, ...]
    steered: tuple[int, ...]

    def __post_init__(self) -> None:
        steering = tuple(int(k) for k in self.steering)
        steered = tuple(int(k) for k in self.steered)
        if not steering or not steered:
            raise ValueError("both parties of a partition must contain at least one mode")
        if len(set(steering)) != len(steering) or len(set(steered)) != len(steered):
            raise ValueError("duplicate mode index within a party")
        if set(steering) & set(steered):
            raise ValueError("steering and steered parties must be disjoint")
        if min(steering + steered) < 0:
            raise ValueError("mode indices must be non-negative")
        object.__setattr__(self, "steering", steering)
        object.__setattr__(self, "steered", steered)


def _as_array(cm: CovarianceMatrix | np.ndarray) -> np.ndarray:
    if isinstance(cm, CovarianceMatrix):
        return cm.matrix
    m = np.asarray(cm, dtype=float)
    return 0.5 * (m + m.T)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Canonical symplectic form, the direct sum of [[0, 1], [-1, 0]] per mode."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def quadrature_indices(modes: tuple[int, ...] | list[int]) -> list[int]:
    """Row/column indices of the (x, p) pair of each listed mode."""
    return [q for m in modes for q in (2 * m, 2 * m + 1)]


def symplectic_eigenvalues(cm: CovarianceMatrix | np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a positive-definite covariance matrix, ascending.

    Closed forms are used for one mode (sqrt of the determinant) and two modes
    (roots of nu^4 - Delta nu^2 + det = 0 with Delta = det A + det B + 2 det C);
    larger systems fall back to the eigenvalues of Omega @ sigma, whose spectrum
    is +-i nu pairs.

    Raises
    ------
    ValueError
        If the input is not positive definite ("not a state").
    """
    m = _as_array(cm)
    n = m.shape[0] // 2
    if np.linalg.eigvalsh(m).min() <= 0:
        raise ValueError("not a state: covariance matrix is not positive definite")

    if n == 1:
        return np.array([np.sqrt(np.linalg.det(m))])
    if n == 2:
        a = np.linalg.det(m[0:2, 0:2])
        b = np.linalg.det(m[2:4, 2:4])
        c = np.linalg.det(m[0:2, 2:4])
        delta = a + b + 2.0 * c
        disc = max(delta * delta - 4.0 * np.linalg.det(m), 0.0)
        root = np.sqrt(disc)
        nu_sq = np.array([(delta - root) / 2.0, (delta + root) / 2.0])
        return np.sqrt(np.clip(nu_sq, 0.0, None))

    evals = np.linalg.eigvals(symplectic_form(n) @ m)
    moduli = np.sort(np.abs(evals))
    # each nu appears twice (+-i nu); average adjacent pairs to cancel solver noise
    return 0.5 * (moduli[0::2] + moduli[1::2])


def is_physical(cm: CovarianceMatrix | np.ndarray, tol: float = PHYSICALITY_TOL) -> bool:
    """True when cm satisfies the uncertainty relation: min symplectic eigenvalue >= 1 - tol."""
    m = _as_array(cm)
    if m.shape[0] % 2 or m.shape[0] == 0:
        return False
    if np.linalg.eigvalsh(m).min() <= 0:
        return False
    return bool(symplectic_eigenvalues(m).min() >= 1.0 - tol)


def reduce_modes(cm: CovarianceMatrix, modes: tuple[int, ...] | list[int]) -> CovarianceMatrix:
    """Reduced state over the listed modes (partial trace of the others).

    The listed order is preserved, so this also serves as a mode permutation.
    """
    modes = tuple(int(k) for k in modes)
    if not modes:
        raise ValueError("must keep at least one mode")
    if len(set(modes)) != len(modes):
        raise ValueError("duplicate mode index")
    if min(modes) < 0 or max(modes) >= cm.n_modes:
        raise ValueError(f"mode index out of range for a {cm.n_modes}-mode state")
    idx = quadrature_indices(modes)
    return CovarianceMatrix(cm.matrix[np.ix_(idx, idx)])


def schur_complement(cm: CovarianceMatrix, partition: Partition) -> np.ndarray:
    """Covariance of the steered party conditioned on the steering party.

    Returns B - C^T A^{-1} C where A is the steering-party block, B the
    steered-party block, and C the cross block, in the interleaved ordering of
    the partition's own mode lists.
    """
    needed = max(partition.steering + partition.steered)
    if needed >= cm.n_modes:
        raise ValueError(f"partition uses mode {needed} but state has {cm.n_modes} modes")
    ia = quadrature_indices(partition.steering)
    ib = quadrature_indices(partition.steered)
    m = cm.matrix
    blk_a = m[np.ix_(ia, ia)]
    blk_b = m[np.ix_(ib, ib)]
    cross = m[np.ix_(ia, ib)]
    if np.linalg.cond(blk_a) > CONDITION_LIMIT:
        raise ValueError("steering party block not invertible")
    out = blk_b - cross.T @ np.linalg.solve(blk_a, cross)
    return 0.5 * (out + out.T)


def purity(cm: CovarianceMatrix | np.ndarray) -> float:
    """Purity of the Gaussian state, 1/sqrt(det sigma); equals 1 for pure states."""
    det = np.linalg.det(_as_array(cm))
    if det <= 0:
        raise ValueError("not a state: covariance matrix is not positive definite")
    return float(1.0 / np.sqrt(det))
