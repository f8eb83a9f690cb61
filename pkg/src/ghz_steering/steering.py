"""Gaussian EPR steering: directed quantifiers, monogamy residuals, loss sweeps.

The quantifier for a directed bipartition is computed from the symplectic
spectrum of the steered party's conditional covariance (Schur complement):
G = max(0, -sum of ln(nu) over conditional symplectic eigenvalues nu < 1).
G > 0 certifies steering under Gaussian measurements; the direction matters.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .network import GhzConfig, build_state
from .symplectic import CovarianceMatrix, Partition, schur_complement, symplectic_eigenvalues

# Conditional symplectic eigenvalues this close to 1 count as exactly 1; keeps
# states sitting on the steering boundary from flickering into false positives.
BOUNDARY_CLAMP = 1e-10

# G above this threshold counts as steerable (used by threshold searches).
STEERING_EPS = 1e-8

MODE_NAMES = "ABC"

# Canonical order of the 12 directed bipartitions of (A, B, C).  "A" always
# denotes the mode that went through the lossy channel.
DIRECTIONS: tuple[str, ...] = (
    "A->B", "B->A", "A->C", "C->A", "B->C", "C->B",
    "A->BC", "BC->A", "B->AC", "AC->B", "C->AB", "AB->C",
)

# The six monogamy residuals: for each mode k, the collective-minus-pairwise
# combination with k steering (out) and k steered (in).
RESIDUAL_KEYS: tuple[str, ...] = ("A_out", "A_in", "B_out", "B_in", "C_out", "C_in")


def parse_direction(label: str) -> Partition:
    """Partition for a label like "A->B" or "BC->A" (modes A, B, C = 0, 1, 2)."""
    parts = label.split("->")
    if len(parts) != 2:
        raise ValueError(f"direction label must look like 'A->BC', got {label!r}")
    try:
        steering = tuple(MODE_NAMES.index(ch) for ch in parts[0])
        steered = tuple(MODE_NAMES.index(ch) for ch in parts[1])
    except ValueError:
        raise ValueError(f"unknown mode name in direction label {label!r}") from None
    return Partition(steering=steering, steered=steered)


def gaussian_steering(cm: CovarianceMatrix, partition: Partition) -> float:
    """Steering quantifier of the steering party over the steered party.

    Non-negative by construction; exactly 0 when no conditional symplectic
    eigenvalue drops below 1 (after the boundary clamp).
    """
    conditional = schur_complement(cm, partition)
    nus = symplectic_eigenvalues(conditional)
    nus = np.where(np.abs(nus - 1.0) <= BOUNDARY_CLAMP, 1.0, nus)
    below = nus[nus < 1.0]
    if below.size == 0:
        return 0.0
    return float(max(0.0, -np.sum(np.log(below))))


@dataclass(frozen=True)
class SteeringReport:
    """All 12 directed steering values of a three-mode state.

    eta records the channel efficiency the state was built with, when known.
    """

    g: dict[str, float]
    eta: float | None = None

    def __post_init__(self) -> None:
        if tuple(self.g.keys()) != DIRECTIONS:
            raise ValueError("report must contain exactly the 12 canonical directions, in order")


@dataclass(frozen=True)
class MonogamyReport:
    """The six residuals of the pairwise-vs-collective steering inequalities."""

    residuals: dict[str, float]

    def __post_init__(self) -> None:
        if tuple(self.residuals.keys()) != RESIDUAL_KEYS:
            raise ValueError("residuals must contain exactly the six canonical keys, in order")


def steering_report(cm: CovarianceMatrix, eta: float | None = None) -> SteeringReport:
    """Evaluate the quantifier for every directed bipartition of a 3-mode state."""
    if cm.n_modes != 3:
        raise ValueError("steering report is defined for three-mode states")
    g = {label: gaussian_steering(cm, parse_direction(label)) for label in DIRECTIONS}
    return SteeringReport(g=g, eta=eta)


def residuals_from_report(report: SteeringReport) -> MonogamyReport:
    """Monogamy residuals from an existing report; all must be >= 0 for GHZ states."""
    g = report.g
    res = {
        "A_out": g["A->BC"] - g["A->B"] - g["A->C"],
        "A_in": g["BC->A"] - g["B->A"] - g["C->A"],
        "B_out": g["B->AC"] - g["B->A"] - g["B->C"],
        "B_in": g["AC->B"] - g["A->B"] - g["C->B"],
        "C_out": g["C->AB"] - g["C->A"] - g["C->B"],
        "C_in": g["AB->C"] - g["A->C"] - g["B->C"],
    }
    return MonogamyReport(residuals=res)


def monogamy_residuals(cm: CovarianceMatrix) -> MonogamyReport:
    """Monogamy residuals of a three-mode state."""
    return residuals_from_report(steering_report(cm))


@dataclass(frozen=True)
class SweepPoint:
    """One efficiency point of a loss sweep."""

    eta: float
    report: SteeringReport
    residuals: MonogamyReport


def sweep_eta(config: GhzConfig, etas: list[float] | tuple[float, ...] | np.ndarray) -> list[SweepPoint]:
    """Steering report and monogamy residuals for each channel efficiency.

    The eta field of config is overridden point by point; everything else
    (squeezing, network, extra losses) is held fixed.
    """
    points = []
    for eta in etas:
        state = build_state(replace(config, eta=float(eta)))
        report = steering_report(state, eta=float(eta))
        points.append(SweepPoint(eta=float(eta), report=report, residuals=residuals_from_report(report)))
    return points


def find_threshold(config: GhzConfig, direction: str, tol: float = 1e-4) -> float:
    """Efficiency at which a direction switches between unsteerable and steerable.

    Bisects G(eta) - STEERING_EPS on the bracket [1e-6, 1].  Assumes G is
    monotone in eta across the bracket for the given direction (checked on a
    grid by the test suite, not enforced here).

    Raises
    ------
    ValueError
        If both bracket ends are on the same side ("no threshold in range"),
        e.g. directions steerable at any nonzero efficiency.
    """
    partition = parse_direction(direction)

    def excess(eta: float) -> float:
        state = build_state(replace(config, eta=eta))
        return gaussian_steering(state, partition) - STEERING_EPS

    lo, hi = 1e-6, 1.0
    f_lo, f_hi = excess(lo), excess(hi)
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(f"no threshold in range for direction {direction!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (excess(mid) > 0) == (f_hi > 0):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def one_to_one_labels() -> tuple[str, ...]:
    """The six single-mode-to-single-mode direction labels."""
    return DIRECTIONS[:6]


def one_to_two_labels() -> tuple[str, ...]:
    """The six collective direction labels (single mode vs the remaining pair)."""
    return DIRECTIONS[6:]


def reverse_direction(label: str) -> str:
    """Swap steering and steered parties of a direction label."""
    left, right = label.split("->")
    return f"{right}->{left}"


def complementary_pairs() -> tuple[tuple[str, str], ...]:
    """The three (one-vs-two, two-vs-one) label pairs over the same split."""
    return (("A->BC", "BC->A"), ("B->AC", "AC->B"), ("C->AB", "AB->C"))
