"""Dephasing profiles, Gaussian comparison, envelopes, and Bloch output."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import centralspin as cs
from conftest import mirrored_times


def synthetic_profile(times, values, err=None, dim=2, alpha=1.0):
    """A hand-built profile (d/alpha = 2 by default: Gaussian-type decay)."""
    if err is None:
        err = np.zeros_like(values)
    return cs.RamseyProfile(
        r=1.0, times=np.asarray(times, float), values=np.asarray(values, float),
        err=np.asarray(err, float), s2=cs.CertifiedValue(1.0, 0.0),
        s4=cs.CertifiedValue(1.0, 0.0), dim=dim, alpha=alpha)


# -------------------------------------------------------------- two-site oracle

def toy_pair():
    ps = cs.PointSet(1, np.array([[1.0], [-1.0]]), 1.0e9,
                     meta={"r_pack_structural": 1.0})
    radii = cs.DeloneRadii(r_pack=1.0, r_cover=1.0, probe_resolution=0.0)
    return ps, radii


def test_two_site_profile_is_cos_squared():
    ps, radii = toy_pair()
    times = np.linspace(0.0, 6.0, 601)
    prof = cs.evaluate_profile(ps, radii, 2.0, 1.0, times, tol=0.1)
    # S2 = 2, both couplings 1: C(t) = cos(t/sqrt(2))^2 up to the tiny
    # unsampled-tail shift in the measured S2
    want = np.cos(times / math.sqrt(2.0)) ** 2
    assert np.abs(prof.values - want).max() < 1e-8
    assert prof.err.max() < 1e-8
    closed_form_sup = np.abs(want - np.exp(-times ** 2 / 2.0)).max()
    assert abs(cs.gaussian_sup_distance(prof) - closed_form_sup) < 1e-8


def test_profile_starts_at_one_with_zero_error():
    ps, radii = toy_pair()
    prof = cs.evaluate_profile(ps, radii, 2.0, 1.0, np.array([0.0]), tol=0.1)
    assert prof.values[0] == 1.0
    assert prof.err[0] == 0.0


def test_profile_is_even_in_time():
    ps, radii = toy_pair()
    times = mirrored_times(4.0, 201)
    prof = cs.evaluate_profile(ps, radii, 2.0, 1.0, times, tol=0.1)
    assert np.array_equal(prof.values, prof.values[::-1])
    assert np.array_equal(prof.err, prof.err[::-1])


# ------------------------------------------------------------- brute crossover

def test_profile_matches_direct_cosine_product():
    ps = cs.gen_lattice(1, 50.0)
    radii = cs.measure_radii(ps)
    times = np.linspace(0.0, 5.0, 101)
    prof = cs.evaluate_profile(ps, radii, 2.0, 5.0, times, tol=1.0)
    norms = ps.radii[ps.radii >= 5.0]
    s2 = prof.s2.value
    args = np.outer(times, norms ** -2.0 / math.sqrt(s2))
    direct = np.cos(args).prod(axis=1)
    assert np.abs(prof.values - direct).max() < 1e-12


# ------------------------------------------------------------- normalization

def test_normalization_powers_match_tail_sums(line_large):
    ps, radii = line_large
    s2 = cs.normalization(ps, radii, 1.0, 10.0, 2)
    direct = cs.delone_tail_sum(ps, radii, 2.0, 10.0)
    assert s2.value == direct.value and s2.err == direct.err
    s4 = cs.normalization(ps, radii, 1.0, 10.0, 4)
    assert s4.value == cs.delone_tail_sum(ps, radii, 4.0, 10.0).value
    with pytest.raises(ValueError):
        cs.normalization(ps, radii, 1.0, 10.0, 3)


def test_normalization_requires_convergent_exponent(grid_sets):
    ps, radii = grid_sets[0][(2, "lattice")]
    with pytest.raises(ValueError):
        cs.normalization(ps, radii, 0.9, 10.0, 2)  # 2*alpha < d


# ------------------------------------------------------------ scale covariance

def test_coupling_scale_cancels_bitwise():
    rr = np.linspace(3.0, 40.0, 500)
    base = cs.CouplingPowerLaw(1.5)
    scaled = cs.CouplingPowerLaw(1.5, scale=7.25)
    assert np.array_equal(scaled.normalized_array(rr, 2.375),
                          base.normalized_array(rr, 2.375))
    assert np.array_equal(np.asarray(scaled(rr)), 7.25 * np.asarray(base(rr)))


def test_coupling_validation():
    with pytest.raises(ValueError):
        cs.CouplingPowerLaw(0.0)
    with pytest.raises(ValueError):
        cs.CouplingPowerLaw(1.0, scale=0.0)
    with pytest.raises(ValueError):
        cs.CouplingPowerLaw(1.0).check_dim(3)  # 2*alpha = 2 < 3


# -------------------------------------------------------------------- refusal

def test_profile_refuses_uncertifiable_tolerance():
    ps = cs.gen_lattice(1, 500.0)
    radii = cs.measure_radii(ps)
    times = np.linspace(0.0, 8.0, 81)
    with pytest.raises(ValueError, match="region_radius >="):
        cs.evaluate_profile(ps, radii, 1.0, 10.0, times, tol=1e-3)


# ------------------------------------------------------------- compact bound

def test_compact_bound_holds_on_certified_profile(line_large):
    ps, radii = line_large
    times = np.arange(0.0, 6.0 + 0.005, 0.01)
    prof = cs.evaluate_profile(ps, radii, 1.0, 10.0, times, tol=0.05)
    diag = cs.compact_bound_check(prof)
    assert diag.envelope_ok
    assert diag.sup_dist == cs.gaussian_sup_distance(prof)
    # rhs is the pure fourth-moment term at the worst certified corner;
    # the truncation error joins on the comparison side
    worst = prof.s4.hi / prof.s2.lo ** 2
    assert np.allclose(diag.bound_rhs, times ** 4 / 12.0 * worst,
                       rtol=1e-13, atol=0)
    lhs = np.abs(prof.values - prof.gaussian)
    assert (lhs <= diag.bound_rhs + prof.err).all()


# ----------------------------------------------------------- envelope calibrate

def test_exact_gaussian_calibrates_to_nine_tenths():
    times = np.linspace(0.0, 10.0, 2001)
    prof = synthetic_profile(times, np.exp(-times ** 2))
    k = cs.calibrate_envelope(prof, T=2.0)
    assert abs(k - 0.9) < 1e-12
    assert cs.decay_envelope_check(prof, k, T=2.0)
    assert not cs.decay_envelope_check(prof, 1.1, T=2.0)


def test_envelope_tolerates_exact_zeros():
    times = np.linspace(0.0, 10.0, 2001)
    vals = np.where(times < 5.0, np.exp(-times ** 2), 0.0)
    prof = synthetic_profile(times, vals)
    k = cs.calibrate_envelope(prof, T=2.0)
    assert math.isfinite(k) and k > 0.0
    assert cs.decay_envelope_check(prof, k, T=2.0)


def test_calibration_refuses_insufficient_or_undecayed_grids():
    times = np.linspace(0.0, 3.0, 50)
    prof = synthetic_profile(times, np.exp(-times ** 2))
    with pytest.raises(ValueError):
        cs.calibrate_envelope(prof, T=2.0)  # < 100 points beyond T
    times = np.linspace(0.0, 10.0, 2001)
    prof = synthetic_profile(times, np.full_like(times, 1.0))
    with pytest.raises(ValueError, match="not yet decaying"):
        cs.calibrate_envelope(prof, T=2.0)


# -------------------------------------------------------------- uniform scan

def test_uniform_scan_reports_descending_sups(line_large):
    ps, radii = line_large
    times = np.arange(0.0, 8.0 + 0.02, 0.04)
    rep = cs.uniform_convergence_scan(ps, radii, 1.0, (10.0, 30.0), times,
                                      tol=0.05)
    assert len(rep) == 2
    assert rep.non_increasing
    assert rep.final_below is None
    (r1, s1), (r2, s2) = rep
    assert (r1, r2) == (10.0, 30.0)
    assert s2 <= s1


# ---------------------------------------------------------------- gaussian fit

def test_gaussian_fit_recovers_the_width():
    times = np.linspace(0.0, 6.0, 601)
    assert abs(cs.fit_gaussian(synthetic_profile(times, np.exp(-times ** 2 / 2.0))) - 1.0) < 1e-9
    assert abs(cs.fit_gaussian(synthetic_profile(times, np.exp(-times ** 2 / 8.0))) - 2.0) < 1e-9


def test_gaussian_fit_needs_points_near_the_origin():
    times = np.linspace(4.0, 8.0, 401)
    prof = synthetic_profile(times, np.exp(-times ** 2 / 2.0))
    with pytest.raises(ValueError):
        cs.fit_gaussian(prof)


# -------------------------------------------------------------------- bloch

def test_bloch_rows_scale_the_transverse_components():
    times = np.linspace(0.0, 3.0, 31)
    vals = np.exp(-times ** 2)
    prof = synthetic_profile(times, vals)
    out = cs.bloch_evolution(prof, (0.48, -0.64, 0.6))
    assert out.shape == (31, 3)
    assert np.array_equal(out[:, 0], vals * 0.48)
    assert np.array_equal(out[:, 1], vals * -0.64)
    assert np.array_equal(out[:, 2], np.full(31, 0.6))
    with pytest.raises(ValueError):
        cs.bloch_evolution(prof, (1.0, 1.0, 0.0))  # |v0| > 1


# ---------------------------------------------------------------- properties

@given(alpha=st.floats(0.8, 3.0), r=st.floats(5.0, 20.0))
def test_profile_values_bounded_and_error_monotone(alpha, r):
    ps = cs.gen_lattice(1, 2000.0)
    radii = cs.measure_radii(ps)
    times = np.linspace(0.0, 6.0, 61)
    prof = cs.evaluate_profile(ps, radii, alpha, r, times, tol=2.0)
    assert np.abs(prof.values).max() <= 1.0 + 1e-12
    assert (prof.err >= 0.0).all()
    assert (np.diff(prof.err) >= -1e-15).all()
