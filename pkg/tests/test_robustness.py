import numpy as np
import pytest

from hypflow import densemat, inertia, matching, robustness, spectral
from hypflow.errors import (DimensionMismatch, InvalidClass, NotHyperbolic,
                            ShiftTooSmall)
from hypflow.inertia import ConjugacyClass

from oracles import byers_distance, grid_distance_oracle, svd_sigma_min


class TestHyperbolize:
    def test_rotation_all_on_axis(self):
        r = robustness.hyperbolize(np.array([[0.0, 1.0], [-1.0, 0.0]]),
                                   tau=1e-9, eps_cap=0.5)
        assert r.epsilon == 0.5
        assert r.delta == np.inf
        v = inertia.classify(r.shifted, 1e-9)
        assert v.kind == inertia.HYPERBOLIC
        assert (v.inertia.s, v.inertia.u) == (0, 2)

    def test_half_gap(self):
        r = robustness.hyperbolize(np.diag([0.0, -3.0]), eps_cap=10.0)
        assert r.delta == pytest.approx(3.0)
        assert r.epsilon == pytest.approx(1.5)
        vals = sorted(spectral.eigenvalues(r.shifted).values.real)
        assert vals == pytest.approx([-1.5, 1.5])
        inr = inertia.classify(r.shifted).inertia
        assert (inr.s, inr.u) == (1, 1)

    def test_inertia_preserved_for_hyperbolic_input(self):
        r = robustness.hyperbolize(np.diag([-1.0, 2.0]), eps_cap=10.0)
        assert r.delta == pytest.approx(1.0)
        assert r.epsilon == pytest.approx(0.5)
        inr = inertia.classify(r.shifted).inertia
        assert (inr.s, inr.u) == (1, 1)

    def test_eps_cap_must_be_positive(self):
        with pytest.raises(ValueError):
            robustness.hyperbolize(np.eye(2), eps_cap=0.0)

    def test_shift_too_small(self):
        with pytest.raises(ShiftTooSmall):
            robustness.hyperbolize(np.zeros((2, 2)), tau=1e-3, eps_cap=1e-6)

    def test_density_construction_sweep(self):
        result = robustness.density_suite(seed=7, trials=120)
        assert result.failed == 0


class TestMargin:
    def test_normal_matrix_equals_min_real_part(self):
        m = robustness.margin(np.diag([-1.0, 2.0]), tol=1e-6)
        assert m.upper == pytest.approx(1.0, abs=1e-6)
        assert m.lower == pytest.approx(m.upper - 1e-6)
        assert m.omega_star == pytest.approx(0.0, abs=1e-3)

    def test_non_hyperbolic_returns_zeros(self):
        m = robustness.margin(np.array([[0.0, 1.0], [-1.0, 0.0]]), tol=1e-6)
        assert (m.lower, m.upper, m.omega_star, m.iterations) == (0, 0, 0, 0)

    def test_shear_margin_far_below_eigenvalue_gap(self):
        # strong shear: eigenvalue real parts are -1 but a tiny perturbation
        # already creates an imaginary-axis eigenvalue
        j = np.array([[-1.0, 100.0], [0.0, -1.0]])
        m = robustness.margin(j, tol=1e-6)
        brute = grid_distance_oracle(j, densemat.op_norm2(j))
        assert m.upper < 0.02
        assert m.upper == pytest.approx(brute, abs=1e-5)
        # rank-one certificate: subtracting sigma_min * u v^H makes it singular
        u_, s_, vt_ = np.linalg.svd(j)
        e = -s_[-1] * np.outer(u_[:, -1], vt_[-1, :])
        assert abs(densemat.det(j + e)) < 1e-12
        assert densemat.op_norm2(e) == pytest.approx(m.upper, abs=1e-5)

    def test_upper_is_reproducible_at_omega_star(self, rng):
        for _ in range(5):
            a = robustness.generate(ConjugacyClass(2, 2, 4), 10.0,
                                    int(rng.integers(0, 2 ** 31)))
            m = robustness.margin(a, tol=1e-6)
            g = spectral.sigma_min(a - 1j * m.omega_star * np.eye(4))
            assert abs(g - m.upper) <= 1e-10

    def test_agrees_with_bisection_oracle(self, rng):
        for _ in range(10):
            d = int(rng.integers(2, 6))
            s = int(rng.integers(0, d + 1))
            a = robustness.generate(ConjugacyClass(s, d - s, d),
                                    conditioning=float(rng.uniform(1, 20)),
                                    seed=int(rng.integers(0, 2 ** 31)))
            m = robustness.margin(a, tol=1e-6)
            ref = byers_distance(a, tol=1e-8)
            assert abs(m.upper - ref) <= 2e-6

    def test_invalid_tol(self):
        with pytest.raises(ValueError):
            robustness.margin(np.diag([-1.0, 2.0]), tol=0.0)


class TestPerturbCampaign:
    def test_no_flips_below_margin(self):
        report = robustness.perturb_campaign(np.diag([-1.0, 2.0]),
                                             samples=200, radius=0.5, seed=42)
        assert report.flips == 0
        assert report.samples == 200
        assert report.flip_witnesses == []

    def test_explicit_flip_witness_exists_within_radius(self):
        # diag(0.02, 0) has norm 0.02 <= 0.1 and flips the stable count
        h = np.diag([-0.01, 2.0])
        base = inertia.classify(h).inertia
        flipped = inertia.classify(h + np.diag([0.02, 0.0])).inertia
        assert (base.s, base.u) == (1, 1)
        assert (flipped.s, flipped.u) == (0, 2)

    def test_flips_detected_beyond_margin(self):
        report = robustness.perturb_campaign(np.diag([-0.01, 2.0]),
                                             samples=100, radius=0.1, seed=3)
        assert report.flips > 0
        assert len(report.flip_witnesses) == min(report.flips, 10)
        idx, witness = report.flip_witnesses[0]
        inr = inertia.inertia_of(
            spectral.eigenvalues(np.diag([-0.01, 2.0]) + witness),
            report.base_inertia.tau)
        assert (inr.s, inr.u, inr.c) != (1, 1, 0)

    def test_deterministic_given_seed(self):
        a = robustness.perturb_campaign(np.diag([-0.05, 1.0]),
                                        samples=60, radius=0.2, seed=11)
        b = robustness.perturb_campaign(np.diag([-0.05, 1.0]),
                                        samples=60, radius=0.2, seed=11)
        assert a.flips == b.flips
        for (i1, e1), (i2, e2) in zip(a.flip_witnesses, b.flip_witnesses):
            assert i1 == i2
            np.testing.assert_array_equal(e1, e2)

    def test_sample_count_validated(self):
        with pytest.raises(ValueError):
            robustness.perturb_campaign(np.diag([-1.0, 2.0]),
                                        samples=0, radius=0.1, seed=1)

    def test_non_hyperbolic_rejected(self):
        with pytest.raises(NotHyperbolic):
            robustness.perturb_campaign(np.array([[0.0, 1.0], [-1.0, 0.0]]),
                                        samples=5, radius=0.1, seed=1)


class TestContinuity:
    def test_diagonal_shift_sequence(self):
        h = np.diag([-1.0, 2.0])
        seq = [h + (1.0 / n) * np.eye(2) for n in range(1, 21)]
        report = robustness.continuity_check(h, seq)
        for n, dist in enumerate(report.max_mismatch, start=1):
            assert dist == pytest.approx(1.0 / n, abs=1e-12)
        assert report.monotone_tail

    def test_constant_sequence(self):
        h = np.diag([-1.0, 2.0])
        report = robustness.continuity_check(h, [h, h, h])
        assert report.max_mismatch == pytest.approx([0.0, 0.0, 0.0], abs=1e-14)
        assert report.monotone_tail

    def test_random_direction_decay(self, rng):
        h = rng.standard_normal((4, 4))
        g = rng.standard_normal((4, 4))
        seq = [h + g / n for n in range(1, 31)]
        report = robustness.continuity_check(h, seq)
        assert report.max_mismatch[-1] < report.max_mismatch[0]
        assert report.max_mismatch[-1] < 0.2
        assert report.monotone_tail
        assert all(sorted(p) == list(range(4)) for p in report.pairings)

    def test_eigenvalues_bounded_by_norms(self, rng):
        h = rng.standard_normal((4, 4))
        g = rng.standard_normal((4, 4))
        seq = [h + g / n for n in range(1, 15)]
        max_mod = max(np.max(np.abs(spectral.eigenvalues(a).values)) for a in seq)
        max_norm = max(densemat.op_norm2(a) for a in seq)
        assert max_mod <= max_norm + 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            robustness.continuity_check(np.eye(2), [np.eye(3)])

    def test_empty_sequence(self):
        with pytest.raises(ValueError):
            robustness.continuity_check(np.eye(2), [])


class TestVieta:
    def test_diagonal(self):
        assert robustness.vieta_check(np.diag([-1.0, 2.0, 5.0])) <= 1e-10

    def test_identity(self):
        assert robustness.vieta_check(np.eye(5)) <= 1e-12

    def test_random_ensemble(self):
        result = robustness.vieta_suite(seed=5, trials=200)
        assert result.failed == 0
        assert result.worst <= 1e-8


class TestGenerate:
    def test_requested_class_produced(self):
        for (s, u, d, cond) in ((2, 0, 2, 1.0), (1, 1, 2, 1.0), (3, 2, 5, 100.0),
                                (0, 4, 4, 10.0), (1, 0, 1, 1.0)):
            a = robustness.generate(ConjugacyClass(s, u, d), cond, seed=7)
            v = inertia.classify(a)
            assert v.kind == inertia.HYPERBOLIC
            assert (v.inertia.s, v.inertia.u) == (s, u)

    def test_margin_positive_for_generated(self):
        a = robustness.generate(ConjugacyClass(3, 2, 5), 100.0, seed=1)
        m = robustness.margin(a, tol=1e-4)
        assert m.lower > 0.0

    def test_deterministic(self):
        a = robustness.generate(ConjugacyClass(2, 1, 3), 5.0, seed=9)
        b = robustness.generate(ConjugacyClass(2, 1, 3), 5.0, seed=9)
        np.testing.assert_array_equal(a, b)

    def test_invalid_class(self):
        with pytest.raises(InvalidClass):
            robustness.generate(ConjugacyClass(2, 2, 3), 1.0, seed=0)

    def test_conditioning_validated(self):
        with pytest.raises(ValueError):
            robustness.generate(ConjugacyClass(1, 1, 2), 0.5, seed=0)


class TestOpennessProperty:
    def test_no_flips_below_margin_small_run(self):
        result = robustness.openness_suite(seed=2, trials=60)
        assert result.failed == 0

    def test_campaign_respects_margin_bound(self, rng):
        # radius below the certified lower bound can never flip
        for _ in range(5):
            d = int(rng.integers(2, 5))
            s = int(rng.integers(0, d + 1))
            h = robustness.generate(ConjugacyClass(s, d - s, d),
                                    conditioning=5.0,
                                    seed=int(rng.integers(0, 2 ** 31)))
            m = robustness.margin(h, tol=1e-3)
            if m.lower <= 0:
                continue
            report = robustness.perturb_campaign(h, samples=40,
                                                 radius=0.9 * m.lower,
                                                 seed=int(rng.integers(0, 2 ** 31)))
            assert report.flips == 0
