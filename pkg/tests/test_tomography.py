"""Measurement protocol: sampling, the 18 variances, reconstruction, trials."""

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghz_steering import (
    MEASUREMENT_LABELS,
    REJECT_NU_FLOOR,
    CovarianceMatrix,
    GhzConfig,
    MeasurementSet,
    QuadCombo,
    SymplecticMatrix,
    apply_symplectic,
    build_state,
    correlation_variance,
    covariance_from_measurements,
    measure_set,
    population_measurements,
    reconstruct_trials,
    sample_quadratures,
    write_samples_csv,
)

R = 0.339


def test_measurement_labels_are_a_frozen_contract():
    assert MEASUREMENT_LABELS == (
        "xA", "pA", "xB", "pB", "xC", "pC",
        "xA-xB", "xA-xC", "xB-xC", "pA-pB", "pA-pC", "pB-pC",
        "xA+pB", "xA+pC", "xB+pC", "pA+xB", "pA+xC", "pB+xC",
    )


class TestMeasurementSet:
    def test_as_array_follows_label_order(self):
        ms = population_measurements(build_state(GhzConfig()))
        arr = ms.as_array()
        assert arr.tolist() == [ms.variances[lab] for lab in MEASUREMENT_LABELS]

    def test_rejects_wrong_keys(self):
        good = population_measurements(build_state(GhzConfig())).variances
        reordered = dict(reversed(list(good.items())))
        with pytest.raises(ValueError):
            MeasurementSet(variances=reordered)

    def test_rejects_missing_key(self):
        good = dict(population_measurements(build_state(GhzConfig())).variances)
        good.pop("pB+xC")
        with pytest.raises(ValueError):
            MeasurementSet(variances=good)

    def test_rejects_negative_variance(self):
        good = dict(population_measurements(build_state(GhzConfig())).variances)
        good["xA"] = -1.0
        with pytest.raises(ValueError):
            MeasurementSet(variances=good)


class TestSampleQuadratures:
    def test_shape(self):
        samples = sample_quadratures(build_state(GhzConfig()), 50, seed=1)
        assert samples.shape == (50, 6)

    def test_same_seed_same_table(self):
        cm = build_state(GhzConfig(eta=0.8))
        one = sample_quadratures(cm, 200, seed=9)
        two = sample_quadratures(cm, 200, seed=9)
        assert np.array_equal(one, two)

    def test_different_seeds_differ(self):
        cm = build_state(GhzConfig())
        assert not np.array_equal(
            sample_quadratures(cm, 200, seed=9), sample_quadratures(cm, 200, seed=10))

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            sample_quadratures(build_state(GhzConfig()), 1, seed=0)

    def test_rejects_indefinite_matrix(self):
        bad = CovarianceMatrix(np.diag([1.0, -1.0, 1.0, 1.0, 1.0, 1.0]))
        with pytest.raises(ValueError):
            sample_quadratures(bad, 10, seed=0)

    def test_vacuum_statistics(self):
        samples = sample_quadratures(CovarianceMatrix(np.eye(6)), 1_000_000, seed=3)
        variances = samples.var(axis=0, ddof=1)
        assert np.allclose(variances, 1.0, atol=0.01)

    def test_sampled_correlation_variance(self):
        cm = build_state(GhzConfig())
        samples = sample_quadratures(cm, 100_000, seed=11)
        diff = samples[:, 0] - samples[:, 2]
        assert diff.var(ddof=1) == pytest.approx(2 * math.exp(-2 * R), abs=0.02)


class TestWriteSamplesCsv:
    def test_file_round_trip(self, tmp_path):
        samples = sample_quadratures(build_state(GhzConfig()), 25, seed=5)
        path = tmp_path / "samples.csv"
        write_samples_csv(samples, path)
        text = path.read_text().splitlines()
        assert text[0] == "xA,pA,xB,pB,xC,pC"
        assert len(text) == 26
        back = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(back, samples)

    def test_file_object(self):
        buf = io.StringIO()
        write_samples_csv(np.zeros((3, 6)), buf)
        assert buf.getvalue().splitlines()[0] == "xA,pA,xB,pB,xC,pC"


class TestMeasureSet:
    def test_unbiased_divisor(self):
        # columns 0 and 2 hold [0, 1, 2]: var = 1 with ddof=1, and their
        # difference is constant so the minus combo must vanish
        samples = np.zeros((3, 6))
        samples[:, 0] = [0.0, 1.0, 2.0]
        samples[:, 2] = [0.0, 1.0, 2.0]
        ms = measure_set(samples)
        assert ms.variances["xA"] == pytest.approx(1.0)
        assert ms.variances["xA-xB"] == pytest.approx(0.0)

    def test_rejects_wrong_width(self):
        with pytest.raises(ValueError):
            measure_set(np.zeros((10, 4)))

    def test_rejects_single_row(self):
        with pytest.raises(ValueError):
            measure_set(np.zeros((1, 6)))


class TestPopulationMeasurements:
    def test_matches_correlation_variance(self):
        cm = build_state(GhzConfig(eta=0.6))
        ms = population_measurements(cm)
        assert ms.variances["xA-xB"] == correlation_variance(
            cm, QuadCombo(((0, "x", 1), (1, "x", -1))))

    def test_lossless_pair_value(self):
        ms = population_measurements(build_state(GhzConfig()))
        assert ms.variances["xA-xB"] == pytest.approx(2 * math.exp(-2 * R), abs=1e-10)

    def test_three_modes_required(self):
        with pytest.raises(ValueError):
            population_measurements(CovarianceMatrix(np.eye(4)))


class TestCovarianceFromMeasurements:
    def test_vacuum(self):
        out = covariance_from_measurements(population_measurements(CovarianceMatrix(np.eye(6))))
        assert np.allclose(out.matrix, np.eye(6), atol=1e-12)

    @given(
        st.floats(min_value=0.0, max_value=1.2),
        st.floats(min_value=0.0, max_value=1.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_population_round_trip_is_exact(self, r, eta):
        cm = build_state(GhzConfig(r1=r, r2=r, r3=r, eta=eta))
        out = covariance_from_measurements(population_measurements(cm))
        assert np.max(np.abs(out.matrix - cm.matrix)) <= 1e-12

    def test_plus_and_minus_identities_agree(self):
        # Cov(xA, xB) extracted from Var(xA - xB) must equal the value
        # extracted from Var(xA + xB), which is not part of the protocol
        cm = build_state(GhzConfig(eta=0.7))
        ms = population_measurements(cm).variances
        plus = correlation_variance(cm, QuadCombo(((0, "x", 1), (1, "x", 1))))
        from_minus = -0.5 * (ms["xA-xB"] - ms["xA"] - ms["xB"])
        from_plus = 0.5 * (plus - ms["xA"] - ms["xB"])
        assert from_minus == pytest.approx(from_plus, abs=1e-12)

    def test_within_mode_cross_terms_are_not_measured(self):
        # rotate mode A in phase space so the true state has an xA-pA
        # covariance; the protocol cannot see it, everything else survives
        theta = 0.3
        rot = np.eye(6)
        rot[0:2, 0:2] = [[math.cos(theta), math.sin(theta)],
                         [-math.sin(theta), math.cos(theta)]]
        rotated = apply_symplectic(build_state(GhzConfig()), SymplecticMatrix(rot))
        out = covariance_from_measurements(population_measurements(rotated))
        assert abs(rotated.matrix[0, 1]) > 0.1
        assert out.matrix[0, 1] == 0.0
        mask = np.ones((6, 6), dtype=bool)
        mask[0, 1] = mask[1, 0] = False
        assert np.max(np.abs((out.matrix - rotated.matrix)[mask])) <= 1e-12


class TestReconstructTrials:
    def test_deterministic(self):
        cm = build_state(GhzConfig())
        one = reconstruct_trials(cm, n_samples=20_000, n_trials=3, seed=7)
        two = reconstruct_trials(cm, n_samples=20_000, n_trials=3, seed=7)
        assert one.mean == two.mean and one.std == two.std
        for m1, m2 in zip(one.matrices, two.matrices):
            assert np.array_equal(m1.matrix, m2.matrix)

    def test_no_repair_of_reconstructed_matrices(self):
        # trial matrices must be exactly what the pipeline produced for the
        # spawned child seed; no projection back to physicality
        cm = build_state(GhzConfig())
        stats = reconstruct_trials(cm, n_samples=20_000, n_trials=3, seed=7)
        child = np.random.SeedSequence(7).spawn(3)[1]
        direct = covariance_from_measurements(
            measure_set(sample_quadratures(cm, 20_000, child)))
        assert np.array_equal(stats.matrices[1].matrix, direct.matrix)

    def test_bookkeeping_fields(self):
        cm = build_state(GhzConfig())
        stats = reconstruct_trials(cm, n_samples=20_000, n_trials=4, seed=1)
        assert stats.n_samples == 20_000 and stats.n_trials == 4 and stats.seed == 1
        assert len(stats.matrices) == 4
        assert len(stats.min_symplectic_eigenvalues) == 4
        assert len(stats.reports) == len(stats.accepted)
        assert set(stats.accepted) | set(stats.rejected) == {0, 1, 2, 3}

    def test_small_sample_trials_can_be_rejected(self):
        stats = reconstruct_trials(build_state(GhzConfig()), n_samples=1000, n_trials=3, seed=0)
        assert stats.accepted == (0, 1)
        assert stats.rejected == (2,)
        assert stats.min_symplectic_eigenvalues[2] < REJECT_NU_FLOOR

    def test_raises_when_too_few_trials_survive(self):
        with pytest.raises(RuntimeError, match="nu_min"):
            reconstruct_trials(build_state(GhzConfig()), n_samples=1000, n_trials=3, seed=4)

    def test_needs_two_trials(self):
        with pytest.raises(ValueError):
            reconstruct_trials(build_state(GhzConfig()), n_samples=1000, n_trials=1, seed=0)

    def test_statistics_cover_accepted_trials(self):
        cm = build_state(GhzConfig())
        stats = reconstruct_trials(cm, n_samples=20_000, n_trials=3, seed=2)
        values = [rep.g["BC->A"] for rep in stats.reports]
        assert stats.mean["BC->A"] == pytest.approx(np.mean(values))
        assert stats.std["BC->A"] == pytest.approx(np.std(values, ddof=1))
        assert all(v >= 0 for v in stats.std.values())


def test_reconstruction_error_shrinks_with_sample_size():
    cm = build_state(GhzConfig())
    errors = {}
    for n in (1000, 10_000, 100_000):
        dists = []
        for seed in range(10):
            samples = sample_quadratures(cm, n, seed=seed)
            rec = covariance_from_measurements(measure_set(samples))
            dists.append(np.linalg.norm(rec.matrix - cm.matrix))
        errors[n] = np.mean(dists)
    assert errors[1000] > errors[10_000] > errors[100_000]
