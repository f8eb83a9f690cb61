"""Simulated covariance-matrix reconstruction from quadrature records.

Mirrors the measurement protocol: 18 variance measurements (6 single
quadratures, 6 minus-combinations, 6 plus-combinations across the three
modes) assembled into a 6x6 covariance matrix through the variance-sum
identities, with within-mode x-p covariances taken as 0.  Multi-trial
statistics give the mean and error bar of every steering value.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .network import QuadCombo, correlation_variance
from .steering import DIRECTIONS, SteeringReport, steering_report
from .symplectic import CovarianceMatrix, symplectic_eigenvalues

MODE_NAMES = "ABC"

# Mode pairs in canonical order; every combination block below iterates these.
_PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2))

# A reconstructed trial is kept when its minimum symplectic eigenvalue is at
# least this floor.  The floor sits well below 1 on purpose: a pure state
# reconstructed from finite samples lands just below the nu = 1 boundary
# (deviation ~ a few times 1/sqrt(n)), which is ordinary statistical noise,
# not a broken reconstruction.  Only far-out garbage is rejected; no
# projection or repair is ever applied.
REJECT_NU_FLOOR = 0.95


def _build_labels() -> tuple[tuple[str, ...], dict[str, QuadCombo]]:
    labels: list[str] = []
    combos: dict[str, QuadCombo] = {}

    def add(label: str, terms) -> None:
        labels.append(label)
        combos[label] = QuadCombo(terms=tuple(terms))

    for mode in range(3):
        for quad in ("x", "p"):
            add(f"{quad}{MODE_NAMES[mode]}", [(mode, quad, 1)])
    for quad in ("x", "p"):
        for i, j in _PAIRS:
            add(f"{quad}{MODE_NAMES[i]}-{quad}{MODE_NAMES[j]}", [(i, quad, 1), (j, quad, -1)])
    for i, j in _PAIRS:
        add(f"x{MODE_NAMES[i]}+p{MODE_NAMES[j]}", [(i, "x", 1), (j, "p", 1)])
    for i, j in _PAIRS:
        add(f"p{MODE_NAMES[i]}+x{MODE_NAMES[j]}", [(i, "p", 1), (j, "x", 1)])
    return tuple(labels), combos


#: The 18 measured variances, in protocol order: singles, minus combos, plus combos.
MEASUREMENT_LABELS, LABEL_COMBOS = _build_labels()

# Indicator matrix: row k is the quadrature coefficient vector of measurement k.
_COMBO_MATRIX = np.array([LABEL_COMBOS[lab].indicator(3) for lab in MEASUREMENT_LABELS])


@dataclass(frozen=True)
class MeasurementSet:
    """The 18 variances of one reconstruction run, keyed by combination label."""

    variances: dict[str, float]

    def __post_init__(self) -> None:
        if tuple(self.variances.keys()) != MEASUREMENT_LABELS:
            raise ValueError("need exactly the 18 canonical measurement labels, in order")
        vals = np.array(list(self.variances.values()))
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("variances must be finite and non-negative")

    def as_array(self) -> np.ndarray:
        return np.array(list(self.variances.values()))


def sample_quadratures(
    cm: CovarianceMatrix,
    n_samples: int,
    seed: int | np.random.SeedSequence,
) -> np.ndarray:
    """Draw mean-zero Gaussian quadrature records with covariance cm.

    Returns an (n_samples, 2N) array.  Sampling goes through the symmetric
    matrix square root of cm (eigendecomposition), so the same seed always
    reproduces the same table.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    w, vecs = np.linalg.eigh(cm.matrix)
    if w.min() < -1e-9 * max(1.0, abs(w.max())):
        raise ValueError("covariance matrix is not positive semidefinite")
    root = (vecs * np.sqrt(np.clip(w, 0.0, None))) @ vecs.T
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n_samples, cm.matrix.shape[0])) @ root


def write_samples_csv(samples: np.ndarray, destination) -> None:
    """Write a sample table as CSV: header of quadrature labels, one row per sample.

    destination is a filesystem path or a text file object.
    """
    samples = np.asarray(samples)
    n_modes = samples.shape[1] // 2
    names = [MODE_NAMES[k] if n_modes <= len(MODE_NAMES) else str(k + 1) for k in range(n_modes)]
    header = [f"{quad}{name}" for name in names for quad in ("x", "p")]

    def dump(fh) -> None:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in samples:
            writer.writerow([repr(float(v)) for v in row])

    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "w", newline="") as fh:
            dump(fh)
    else:
        dump(destination)


def measure_set(samples: np.ndarray) -> MeasurementSet:
    """Unbiased sample variances (divisor n-1) of the 18 combinations."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 6:
        raise ValueError("expected an (n_samples, 6) table for a three-mode state")
    if samples.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    combos = samples @ _COMBO_MATRIX.T
    variances = combos.var(axis=0, ddof=1)
    return MeasurementSet(variances=dict(zip(MEASUREMENT_LABELS, variances.tolist())))


def population_measurements(cm: CovarianceMatrix) -> MeasurementSet:
    """Noise-free measurement set: population variances straight from the matrix."""
    if cm.n_modes != 3:
        raise ValueError("expected a three-mode state")
    variances = {lab: correlation_variance(cm, LABEL_COMBOS[lab]) for lab in MEASUREMENT_LABELS}
    return MeasurementSet(variances=variances)


def covariance_from_measurements(ms: MeasurementSet) -> CovarianceMatrix:
    """Assemble the 6x6 covariance matrix from the 18 variances.

    Diagonal from the singles; cross-mode x-x and p-p covariances from the
    minus identity Cov = -1/2 [Var(u - v) - Var(u) - Var(v)]; cross-mode x-p
    covariances from the plus identity Cov = +1/2 [Var(u + v) - Var(u) -
    Var(v)], each plus combination filling exactly the slot it measures.
    Within-mode x-p covariances are not measured and are set to 0.
    """
    var = ms.variances
    out = np.zeros((6, 6))
    for mode in range(3):
        out[2 * mode, 2 * mode] = var[f"x{MODE_NAMES[mode]}"]
        out[2 * mode + 1, 2 * mode + 1] = var[f"p{MODE_NAMES[mode]}"]

    def single(quad: str, mode: int) -> float:
        return var[f"{quad}{MODE_NAMES[mode]}"]

    for quad, offset in (("x", 0), ("p", 1)):
        for i, j in _PAIRS:
            combo = var[f"{quad}{MODE_NAMES[i]}-{quad}{MODE_NAMES[j]}"]
            cov = -0.5 * (combo - single(quad, i) - single(quad, j))
            out[2 * i + offset, 2 * j + offset] = out[2 * j + offset, 2 * i + offset] = cov
    for i, j in _PAIRS:
        combo = var[f"x{MODE_NAMES[i]}+p{MODE_NAMES[j]}"]
        cov = 0.5 * (combo - single("x", i) - single("p", j))
        out[2 * i, 2 * j + 1] = out[2 * j + 1, 2 * i] = cov
    for i, j in _PAIRS:
        combo = var[f"p{MODE_NAMES[i]}+x{MODE_NAMES[j]}"]
        cov = 0.5 * (combo - single("p", i) - single("x", j))
        out[2 * i + 1, 2 * j] = out[2 * j, 2 * i + 1] = cov
    return CovarianceMatrix(out)


@dataclass(frozen=True)
class TrialStatistics:
    """Aggregated reconstruction trials.

    matrices and min_symplectic_eigenvalues cover every trial in order;
    accepted lists the indices that passed the physicality floor, and reports
    aligns with accepted.  mean and std (sample, ddof=1) run over accepted
    trials only, keyed by steering direction.
    """

    n_samples: int
    n_trials: int
    seed: int
    matrices: tuple[CovarianceMatrix, ...]
    min_symplectic_eigenvalues: tuple[float, ...]
    accepted: tuple[int, ...]
    reports: tuple[SteeringReport, ...]
    mean: dict[str, float]
    std: dict[str, float]

    @property
    def rejected(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_trials) if i not in self.accepted)


def _min_symplectic(matrix: np.ndarray) -> float:
    if np.linalg.eigvalsh(matrix).min() <= 0:
        return 0.0  # not even positive definite; definitely below any floor
    return float(symplectic_eigenvalues(matrix).min())


def reconstruct_trials(
    cm_true: CovarianceMatrix,
    n_samples: int = 100_000,
    n_trials: int = 3,
    seed: int = 0,
) -> TrialStatistics:
    """Repeat sample -> measure -> reconstruct -> steering, then aggregate.

    Each trial uses a child seed spawned deterministically from (seed, trial
    index).  Trials whose reconstructed matrix falls below the physicality
    floor (min symplectic eigenvalue < REJECT_NU_FLOOR) are recorded and
    excluded from the statistics; nothing is repaired or projected.

    Raises
    ------
    RuntimeError
        If fewer than 2 trials survive (a standard deviation needs at least
        two accepted trials).
    """
    if n_trials < 2:
        raise ValueError("need at least 2 trials for a standard deviation")
    children = np.random.SeedSequence(seed).spawn(n_trials)

    matrices: list[CovarianceMatrix] = []
    nu_mins: list[float] = []
    accepted: list[int] = []
    reports: list[SteeringReport] = []
    for index, child in enumerate(children):
        samples = sample_quadratures(cm_true, n_samples, child)
        reconstructed = covariance_from_measurements(measure_set(samples))
        matrices.append(reconstructed)
        nu_min = _min_symplectic(reconstructed.matrix)
        nu_mins.append(nu_min)
        if nu_min < REJECT_NU_FLOOR:
            continue
        accepted.append(index)
        reports.append(steering_report(reconstructed))

    if len(accepted) < 2:
        detail = ", ".join(f"trial {i}: nu_min={nu:.4f}" for i, nu in enumerate(nu_mins))
        raise RuntimeError(
            f"only {len(accepted)} of {n_trials} trials reconstructed a physical "
            f"matrix (floor {REJECT_NU_FLOOR}); {detail}"
        )

    values = np.array([[rep.g[d] for d in DIRECTIONS] for rep in reports])
    mean = dict(zip(DIRECTIONS, values.mean(axis=0).tolist()))
    std = dict(zip(DIRECTIONS, values.std(axis=0, ddof=1).tolist()))
    return TrialStatistics(
        n_samples=n_samples,
        n_trials=n_trials,
        seed=seed,
        matrices=tuple(matrices),
        min_symplectic_eigenvalues=tuple(nu_mins),
        accepted=tuple(accepted),
        reports=tuple(reports),
        mean=mean,
        std=std,
    )
