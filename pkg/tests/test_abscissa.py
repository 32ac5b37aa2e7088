import cmath
import math

import numpy as np
import pytest

from dampspec.abscissa import (
    AbscissaReport,
    check_hypotheses,
    compute_spectrum,
    estimate_N1,
    estimate_r,
    modified_abscissa,
    run_algorithm,
    signed_indices,
)
from dampspec.damping import (
    build_profile,
    family_interval,
    family_square2d,
    overlap,
    profile_from_boxes,
)
from dampspec.eig import Spectrum, order_spectrum
from dampspec.operators import enumerate_modes, get_model

PI = math.pi

WAVE = get_model("wave1d")
BEAM = get_model("beam1d")
SCHR = get_model("schrodinger1d")
WAVE2D = get_model("wave2d")

CONSTANT_ONE = family_interval(0.5, 1.0)
CONSTANT_HALF = profile_from_boxes(1, [(((0.0, 1.0),), 0.5)])
ZERO = profile_from_boxes(1, [(((0.0, 1.0),), 0.0)])
# amplitude 10 on (0.1, 0.5): strong one-sided damping with a wide bad band
STRONG = profile_from_boxes(1, [(((0.1, 0.5),), 10.0)])


def constant_damping_oracle(model, a0, N):
    """Expected ordered spectrum for a(x) = a0: per-mode quadratic roots
    eta^2 + c*a0*eta + mu = 0 (second order) or eta = -i*mu - a0 (first)."""
    mus = [model.mu(m) for m in enumerate_modes(model, N)]
    values = []
    for mu in mus:
        if model.order == "second":
            h = 0.5 * model.damping_factor * a0
            root = cmath.sqrt(complex(h * h - mu))
            values.extend([-h + root, -h - root])
        else:
            values.append(complex(-a0, -mu))
    values.sort(key=lambda z: (z.imag, -abs(z), z.real))
    return np.array(values)


class TestSignedIndices:
    def test_two_sided(self):
        np.testing.assert_array_equal(signed_indices(8, 2), [-4, -3, -2, -1, 1, 2, 3, 4])

    def test_one_sided_counts_down(self):
        np.testing.assert_array_equal(signed_indices(3, 1), [3, 2, 1])

    def test_rejects_odd_two_sided(self):
        with pytest.raises(ValueError):
            signed_indices(5, 2)
        with pytest.raises(ValueError):
            signed_indices(4, 3)


class TestComputeSpectrum:
    @pytest.mark.parametrize("model", [WAVE, BEAM])
    def test_constant_damping_matches_quadratic_roots(self, model):
        computed = compute_spectrum(model, CONSTANT_ONE, 40)
        expected = constant_damping_oracle(model, 1.0, 40)
        np.testing.assert_allclose(computed.values, expected, atol=1e-8)

    def test_schrodinger_constant_damping(self):
        computed = compute_spectrum(SCHR, CONSTANT_ONE, 40)
        expected = constant_damping_oracle(SCHR, 1.0, 40)
        np.testing.assert_allclose(computed.values, expected, atol=1e-10)

    def test_wave2d_constant_damping(self):
        prof = profile_from_boxes(2, [(((0.0, 1.0), (0.0, 1.0)), 1.0)])
        computed = compute_spectrum(WAVE2D, prof, 20)
        expected = constant_damping_oracle(WAVE2D, 1.0, 20)
        np.testing.assert_allclose(computed.values, expected, atol=1e-8)

    def test_undamped_spectrum_is_imaginary_ladder(self):
        computed = compute_spectrum(WAVE, ZERO, 10)
        expected = 1j * PI * np.concatenate([np.arange(-10, 0), np.arange(1, 11)])
        np.testing.assert_allclose(computed.values, expected, atol=1e-10)

    def test_ordering_applied(self):
        spec = compute_spectrum(WAVE, CONSTANT_ONE, 5)
        assert spec.ordering_applied
        assert np.all(np.diff(spec.values.imag) >= 0)


class TestHypotheses:
    def test_constant_half_margins(self):
        rep = check_hypotheses(WAVE, CONSTANT_HALF, 30)
        assert rep.b_norm_bound == pytest.approx(1.0)
        assert rep.h1_simple is True
        assert rep.h2_margin == pytest.approx(PI - 2.0, rel=1e-12)
        assert rep.h3_margin == pytest.approx(PI - 1.0, rel=1e-12)
        assert rep.warnings == ()

    def test_strong_profile_violates_gap(self):
        rep = check_hypotheses(WAVE, STRONG, 30)
        assert rep.b_norm_bound == pytest.approx(20.0)
        assert rep.h2_margin < 0
        assert rep.h3_margin < 0
        assert len(rep.warnings) == 2

    def test_wave2d_multiplicity_flagged(self):
        rep = check_hypotheses(WAVE2D, family_square2d(0.5), 12)
        assert rep.h1_simple is False
        assert any("multiplicities" in w for w in rep.warnings)

    def test_beam_gaps_grow(self):
        rep = check_hypotheses(BEAM, CONSTANT_HALF, 20)
        # sqrt(mu) = k^2 pi^2 so gaps grow linearly and ratios shrink
        np.testing.assert_allclose(rep.delta, PI**2 * np.diff(np.arange(1, 21) ** 2))
        assert np.all(np.diff(rep.delta) > 0)
        assert np.all(rep.delta_ratio < 1.0)

    def test_h5_tail_decreases_in_r1(self):
        rep = check_hypotheses(WAVE, STRONG, 40, p_list=(5, 10), r1_list=(1, 2, 5))
        by_p = {}
        for p, r1, value in rep.h5_table:
            by_p.setdefault(p, []).append((r1, value))
        for entries in by_p.values():
            values = [v for _, v in sorted(entries)]
            assert all(a >= b for a, b in zip(values, values[1:]))

    def test_h5_matches_direct_sum(self):
        """Recompute one tail entry with scalar overlap calls."""
        p, r1, terms = 3, 2, 80
        rep = check_hypotheses(WAVE, STRONG, 20, p_list=(p,), r1_list=(r1,), tail_terms=terms)
        ((rp, rr1, value),) = rep.h5_table
        assert (rp, rr1) == (p, r1)
        factor = 0.5 * WAVE.damping_factor**2
        expected = max(
            factor
            * sum(overlap(WAVE, STRONG, i, j) ** 2 for j in range(p + r1, p + r1 + terms + 1))
            for i in range(1, p + 1)
        )
        assert value == pytest.approx(expected, rel=1e-12)

    def test_h5_vanishes_for_constant_damping(self):
        rep = check_hypotheses(WAVE, CONSTANT_ONE, 20, p_list=(5,), r1_list=(1,))
        assert rep.h5_table[0][2] < 1e-20

    def test_requires_room_for_tails(self):
        with pytest.raises(ValueError):
            check_hypotheses(WAVE, CONSTANT_ONE, 10, p_list=(8,), r1_list=(5,))


class TestEstimateR:
    def test_constant_damping_needs_no_trim(self):
        assert estimate_r(WAVE, CONSTANT_ONE, 25, 0.1) == 0

    def test_undamped_needs_no_trim(self):
        assert estimate_r(WAVE, ZERO, 25, 0.1) == 0

    def test_strong_profile_frozen_value(self):
        # verified against a resolution-400 reference: all matched distances
        # with |index| <= 44 stay below 0.1, index 45 moves by more
        assert estimate_r(WAVE, STRONG, 50, 0.1) == 6

    def test_monotone_in_eps(self):
        rs = [estimate_r(WAVE, STRONG, 30, eps) for eps in (0.02, 0.1, 0.5)]
        assert rs == sorted(rs, reverse=True)

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_r(WAVE, CONSTANT_ONE, 3, 0.1)
        with pytest.raises(ValueError):
            estimate_r(WAVE, CONSTANT_ONE, 10, -0.1)
        with pytest.raises(ValueError):
            estimate_r(WAVE, CONSTANT_ONE, 10, float("nan"))


class TestEstimateN1:
    def test_constant_damping_flat_tail(self):
        est = estimate_N1(WAVE, CONSTANT_ONE, 32, 1e-6)
        assert est.detected is True
        assert est.N1 == 1
        assert est.alpha_hat == pytest.approx(-1.0, abs=1e-8)

    def test_undamped(self):
        est = estimate_N1(WAVE, ZERO, 32, 1e-6)
        assert est.detected is True
        assert est.alpha_hat == pytest.approx(0.0, abs=1e-10)

    def test_strong_profile_onset(self):
        est = estimate_N1(WAVE, STRONG, 100, 0.1, r=6)
        assert est.detected is True
        assert -4.5 < est.alpha_hat < -3.5
        assert 1 < est.N1 < 94

    def test_r_shrinks_band(self):
        full = estimate_N1(WAVE, STRONG, 64, 0.1, r=0)
        trimmed = estimate_N1(WAVE, STRONG, 64, 0.1, r=10)
        assert trimmed.N1 <= 64 - 10
        assert full.N1 <= 64

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_N1(WAVE, CONSTANT_ONE, 8, 0.1)
        with pytest.raises(ValueError):
            estimate_N1(WAVE, CONSTANT_ONE, 32, 0.1, r=32)


class TestModifiedAbscissa:
    def ordered(self, values):
        return order_spectrum(Spectrum(np.asarray(values, dtype=complex), sides=2))

    def test_full_band(self):
        spec = self.ordered([-1 - 2j, -2 - 1j, -2 + 1j, -1 + 2j])
        mu, k = modified_abscissa(spec, 0)
        assert mu == -1.0
        assert k == 2  # tie between -2 and +2 resolved toward the positive side

    def test_trimmed_band_drops_edge(self):
        spec = self.ordered([-1 - 2j, -2 - 1j, -2 + 1j, -1 + 2j])
        mu, k = modified_abscissa(spec, 1)
        assert mu == -2.0
        assert k == 1

    def test_decreasing_in_r(self):
        spec = compute_spectrum(WAVE, STRONG, 40)
        mus = [modified_abscissa(spec, r)[0] for r in range(0, 30)]
        assert all(b <= a + 1e-15 for a, b in zip(mus, mus[1:]))

    def test_one_sided(self):
        # position 0 carries the highest index: trimming drops -0.2 - 4j first
        vals = np.array([-0.2 - 4j, -0.5 - 1j])
        spec = order_spectrum(Spectrum(vals, sides=1))
        mu, k = modified_abscissa(spec, 0)
        assert mu == -0.2
        assert k == 2
        mu, k = modified_abscissa(spec, 1)
        assert mu == -0.5
        assert k == 1

    def test_validation(self):
        spec = self.ordered([-1 - 1j, -1 + 1j])
        with pytest.raises(ValueError):
            modified_abscissa(spec, 1)
        with pytest.raises(ValueError):
            modified_abscissa(spec, -1)
        raw = Spectrum(np.array([-1 - 1j, -1 + 1j]), sides=2)
        with pytest.raises(ValueError):
            modified_abscissa(raw, 0)


class TestRunAlgorithm:
    def test_constant_wave(self):
        report = run_algorithm(WAVE, CONSTANT_ONE, 0.1, N0=8)
        assert report.r == 0
        assert report.detected is True
        assert report.budget_exhausted is False
        assert report.mu_r == pytest.approx(-1.0, abs=1e-6)
        assert report.N_final == 16

    def test_constant_beam(self):
        report = run_algorithm(BEAM, CONSTANT_ONE, 0.1, N0=8)
        assert report.mu_r == pytest.approx(-1.0, abs=1e-6)

    def test_interval_family_matches_raw_boxes(self):
        # interval(0.5, 1.0) builds the same constant-one profile
        via_family = run_algorithm(WAVE, family_interval(0.5, 1.0), 0.1, N0=8)
        via_boxes = run_algorithm(
            WAVE, build_profile({"boxes": [{"region": [0.0, 1.0], "amplitude": 1.0}]}), 0.1, N0=8
        )
        assert via_family.mu_r == via_boxes.mu_r
        assert via_family.argmax_index == via_boxes.argmax_index

    def test_strong_profile(self):
        report = run_algorithm(WAVE, STRONG, 0.1, N0=50)
        assert report.r == 6
        assert -4.5 < report.alpha_hat < -3.5
        assert report.detected is True
        assert report.N_final >= 100
        assert report.N_final > report.N1 + report.r
        assert report.mu_r == pytest.approx(-0.7315, abs=5e-3)

    def test_budget_exhaustion_is_honest(self):
        # the strong profile needs N ~ 100 to show its asymptote; a budget of
        # 32 must end in a partial report, not a fabricated detection
        report = run_algorithm(WAVE, STRONG, 0.1, N0=8, max_resolution=32)
        assert report.budget_exhausted is True
        assert report.detected is False
        assert report.N_final == 32
        assert any("budget" in w for w in report.warnings)

    def test_wave2d_detects_despite_degeneracy(self):
        report = run_algorithm(WAVE2D, family_square2d(0.5), 0.001, N0=8, max_resolution=64)
        assert report.detected is True
        assert report.budget_exhausted is False
        assert any("multiplicities" in w for w in report.warnings)

    def test_validation(self):
        with pytest.raises(ValueError):
            run_algorithm(WAVE, CONSTANT_ONE, 0.1, N0=8, max_resolution=12)
        with pytest.raises(ValueError):
            run_algorithm(WAVE, CONSTANT_ONE, -1.0)

    def test_report_dict_shape(self):
        report = run_algorithm(WAVE, CONSTANT_ONE, 0.1, N0=8)
        assert isinstance(report, AbscissaReport)
        d = report.to_dict()
        assert list(d) == [
            "model", "profile", "eps", "N0", "r", "N1", "alpha_hat", "N_final",
            "mu_r", "argmax_index", "detected", "budget_exhausted",
            "profile_total_mass", "profile_sup_norm", "warnings", "spectrum",
        ]
        assert d["model"] == "wave1d"
        assert d["profile"] == {"family": "interval", "x0": 0.5, "alpha": 1.0}
        assert len(d["spectrum"]) == 2 * d["N_final"]
        ks = [row["k"] for row in d["spectrum"]]
        assert ks == list(range(-d["N_final"], 0)) + list(range(1, d["N_final"] + 1))
