"""Ramsey dephasing profile of a central spin with certified truncation error.

Purpose
-------
For an inverse-power coupling A(rho) = rho^(-alpha) on a Delone bath, the
free-induction (Ramsey) envelope after rescaling time by the normalization
sqrt(S2), S2 = sum_{rho >= r} A(rho)^2, is the cosine product

    C_r(t) = prod_{rho >= r} cos(A(rho) t / sqrt(S2)).

A run only sees the points inside the window |p| <= R_max, so each value is
reported together with a truncation certificate: writing s for the dropped
part of the normalized square sum, every dropped argument is < 1 (enforced)
and -log cos x <= x^2 there, hence

    |value(t) - C_r(t)| <= e^(t^2 s) - 1 =: err(t),

clamped to [0, 2] (two is the trivial bound for numbers in [-1, 1]).  The
certified S2 interval supplies s.  The three structural results checked
here are compact convergence to the Gaussian with the explicit
(t^4/12) S4/S2^2 rate, the stretched-exponential decay envelope
exp(-k t^(d/alpha)), and uniform convergence of the sup-distance to the
Gaussian as the inner cutoff r grows.

Conventions
-----------
Values are exact products over the stored points (no series approximation);
products with more than 10^4 factors switch to log-magnitude + sign
accumulation to avoid underflow, direct multiplication below (the crossover
is covered by an equality test).  Evaluation is data-parallel over time
chunks with ordered combination, so results are independent of the worker
count (CENTRALSPIN_THREADS, default: up to 8).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import CertifiedValue, delone_tail_sum, integral_tail
from .pointsets import DeloneRadii, PointSet

__all__ = [
    "CouplingPowerLaw",
    "RamseyProfile",
    "GaussianDiag",
    "UniformScanReport",
    "normalization",
    "evaluate_profile",
    "gaussian_sup_distance",
    "compact_bound_check",
    "decay_envelope_check",
    "calibrate_envelope",
    "uniform_convergence_scan",
    "fit_gaussian",
    "bloch_evolution",
]

_DIRECT_PRODUCT_MAX = 10 ** 4


def _workers() -> int:
    env = os.environ.get("CENTRALSPIN_THREADS")
    if env is not None:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class CouplingPowerLaw:
    """Coupling A(rho) = scale * rho^(-alpha); requires 2*alpha > dim in use.

    The scale never reaches the normalized couplings: A(rho)/sqrt(S2) is
    computed from the unscaled power alone, so rescaling all couplings by a
    constant leaves every normalized argument bit-for-bit unchanged.
    """

    alpha: float
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError("alpha must be positive and finite")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")

    def __call__(self, rho: np.ndarray | float) -> np.ndarray | float:
        return self.scale * np.asarray(rho, dtype=np.float64) ** (-self.alpha)

    def normalized_array(self, radii: np.ndarray, s2_value: float) -> np.ndarray:
        """Normalized couplings A(rho)/sqrt(S2) with the scale cancelled exactly."""
        return radii ** (-self.alpha) / math.sqrt(s2_value)

    def check_dim(self, d: int) -> None:
        if not 2.0 * self.alpha > d:
            raise ValueError("normalization diverges unless 2*alpha > dim")


@dataclass(frozen=True)
class RamseyProfile:
    """Evaluated dephasing profile with per-value truncation certificates."""

    r: float
    times: np.ndarray
    values: np.ndarray
    err: np.ndarray
    s2: CertifiedValue
    s4: CertifiedValue
    dim: int
    alpha: float

    def __post_init__(self) -> None:
        for name in ("times", "values", "err"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.times.ndim == 1
                and self.times.shape == self.values.shape == self.err.shape):
            raise ValueError("times/values/err must be 1-D arrays of equal length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly ascending")
        if np.any(np.abs(self.values) > 1.0):
            raise ValueError("|C(t)| <= 1 violated")
        if np.any(self.err < 0.0):
            raise ValueError("err must be nonnegative")

    @property
    def gaussian(self) -> np.ndarray:
        """Reference curve exp(-t^2/2) on the profile's grid."""
        return np.exp(-0.5 * self.times ** 2)


@dataclass(frozen=True)
class GaussianDiag:
    """Pointwise compact-bound diagnostic against exp(-t^2/2)."""

    sup_dist: float
    bound_rhs: np.ndarray = field(repr=False)
    envelope_ok: bool

    def __post_init__(self) -> None:
        if self.sup_dist < 0.0:
            raise ValueError("sup_dist must be >= 0")


@dataclass(frozen=True)
class UniformScanReport:
    """sup-distances along an ascending ladder of inner cutoffs.

    Iterates as a sequence of (r, sup_dist) pairs; ``non_increasing`` allows
    slack 2*tol between consecutive entries, ``final_below`` compares the
    last entry against the caller's threshold (None when none was given).
    """

    entries: tuple[tuple[float, float], ...]
    non_increasing: bool
    final_below: bool | None

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def normalization(ps: PointSet, radii: DeloneRadii, alpha: float, r: float,
                  power: int) -> CertifiedValue:
    """Certified S_power = sum_{rho >= r} A(rho)^power, power in {2, 4}."""
    if power not in (2, 4):
        raise ValueError("power must be 2 or 4")
    return delone_tail_sum(ps, radii, power * alpha, r)


def _required_r_max(ps: PointSet, alpha: float, target_tail: float) -> float:
    """Window radius making the S2 tail certificate <= target_tail."""
    d = ps.dim
    rp = float(ps.meta.get("r_pack_structural", 0.5))
    # invert tail(R) = 3^d d / rp^d * T(2a, d, R - rp) = target
    t_int = target_tail * rp ** d / ((3.0 ** d) * d)
    return rp + ((2.0 * alpha - d) * t_int) ** (1.0 / (d - 2.0 * alpha))


def _profile_value(u_args: np.ndarray, counts: np.ndarray, n_factors: int,
                   force: str | None = None) -> float:
    """Product of cos(u_args[i])^counts[i] over unique arguments.

    Direct multiplication up to 10^4 total factors, log-magnitude + sign
    beyond (underflow-safe); ``force`` pins a path for the crossover test.
    """
    path = force or ("direct" if n_factors <= _DIRECT_PRODUCT_MAX else "log")
    c = np.cos(u_args)
    if path == "direct":
        return float(np.prod(c ** counts))
    neg = int((counts[c < 0.0]).sum()) & 1
    mag = np.abs(c)
    if np.any(mag == 0.0):
        return 0.0
    logmag = float(counts @ np.log(mag))
    val = math.exp(logmag)
    return -val if neg else val


def evaluate_profile(ps: PointSet, radii: DeloneRadii, alpha: float, r: float,
                     times: np.ndarray, tol: float) -> RamseyProfile:
    """Evaluate C_r on a time grid with certified truncation error.

    value(t) is the exact cosine product over the stored points with
    r <= |p| <= region_radius, with arguments rho^(-alpha) * t / sqrt(S2)
    using the certified S2's central value.  err(t) = expm1(t^2 * s) with s
    the certified bound on the dropped part of the normalized square sum,
    clamped to [0, 2]; the bound is valid because every dropped argument is
    < 1 at max |t| (enforced).  Raises if the certificate at max |t|
    exceeds ``tol``, reporting the window radius that would achieve it.
    """
    coupling = CouplingPowerLaw(alpha)
    coupling.check_dim(ps.dim)
    if not tol > 0.0:
        raise ValueError("tol must be > 0")
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1 or times.size == 0 or not np.all(np.isfinite(times)):
        raise ValueError("times must be a nonempty finite 1-D grid")
    if not (0.0 <= r <= ps.region_radius):
        raise ValueError("need 0 <= r <= region_radius")
    s2 = normalization(ps, radii, alpha, r, 2)
    s4 = normalization(ps, radii, alpha, r, 4)
    lam = 1.0 / math.sqrt(s2.value)
    t_max = float(np.max(np.abs(times)))

    # certificate validity: the largest dropped argument must stay below 1
    if t_max * lam * ps.region_radius ** (-alpha) >= 1.0:
        need = (t_max * lam) ** (1.0 / alpha)
        raise ValueError(
            f"dropped cosine arguments reach 1 at t={t_max:g}; "
            f"need region_radius > {need:.6g}")
    s_tail = 2.0 * s2.err / s2.value  # bound on the dropped normalized square sum
    err_at_max = min(2.0, math.expm1(t_max * t_max * s_tail))
    if err_at_max > tol:
        tail_target = math.log1p(tol) * s2.value / (t_max * t_max)
        need = _required_r_max(ps, alpha, tail_target)
        raise ValueError(
            f"truncation certificate {err_at_max:.3g} exceeds tol={tol:g} "
            f"at t={t_max:g}; need region_radius >= {need:.6g}")

    rr = ps.radii
    sel = rr[rr >= r]
    u_radii, counts = np.unique(sel, return_counts=True)
    n_factors = int(sel.size)
    u_pow = u_radii ** (-alpha) * lam if u_radii.size else u_radii

    def eval_block(block: np.ndarray) -> np.ndarray:
        out = np.empty(block.size, dtype=np.float64)
        for i, t in enumerate(block):
            if n_factors == 0:
                out[i] = 1.0
            else:
                out[i] = _profile_value(u_pow * t, counts, n_factors)
        return out

    workers = _workers()
    if workers > 1 and times.size >= 4 * workers:
        blocks = np.array_split(times, 4 * workers)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            values = np.concatenate(list(ex.map(eval_block, blocks)))
    else:
        values = eval_block(times)

    err = np.minimum(2.0, np.expm1(times ** 2 * s_tail))
    return RamseyProfile(r=float(r), times=times, values=values, err=err,
                         s2=s2, s4=s4, dim=ps.dim, alpha=float(alpha))


def gaussian_sup_distance(profile: RamseyProfile) -> float:
    """Grid sup of |C(t) - exp(-t^2/2)| (a lower bound for the true sup)."""
    return float(np.max(np.abs(profile.values - profile.gaussian)))


def compact_bound_check(profile: RamseyProfile) -> GaussianDiag:
    """Check |C(t) - exp(-t^2/2)| <= (t^4/12) S4/S2^2 + err(t) pointwise.

    The right-hand side uses the worst certified corner (s4.value + s4.err)
    / (s2.value - s2.err)^2, so a pass means the Gaussian-comparison bound
    is consistent with every value the certificates allow.
    """
    t = profile.times
    lhs = np.abs(profile.values - profile.gaussian)
    ratio = (profile.s4.value + profile.s4.err) / (profile.s2.value - profile.s2.err) ** 2
    rhs = t ** 4 / 12.0 * ratio
    ok = bool(np.all(lhs <= rhs + profile.err))
    return GaussianDiag(sup_dist=float(np.max(lhs)), bound_rhs=rhs, envelope_ok=ok)


def decay_envelope_check(profile: RamseyProfile, k: float, T: float) -> bool:
    """True iff |C(t)| <= exp(-k t^(d/alpha)) + err(t) for every grid t >= T."""
    if not (k > 0.0 and T > 0.0):
        raise ValueError("need k > 0 and T > 0")
    sel = profile.times >= T
    if not sel.any():
        raise ValueError("grid does not extend beyond T")
    t = profile.times[sel]
    bound = np.exp(-k * t ** (profile.dim / profile.alpha)) + profile.err[sel]
    return bool(np.all(np.abs(profile.values[sel]) <= bound))


def calibrate_envelope(profile: RamseyProfile, T: float) -> float:
    """Envelope rate k = 0.9 * min_{grid t >= T} -log(|C(t)| + err(t)) / t^(d/alpha).

    Near-zero values push the numerator to +inf and drop out of the min;
    the calibration fails only where the envelope has not started to decay,
    i.e. some |value| + err >= 1 beyond T.
    """
    sel = profile.times >= T
    if int(sel.sum()) < 100:
        raise ValueError("need at least 100 grid points beyond T")
    t = profile.times[sel]
    mag = np.abs(profile.values[sel]) + profile.err[sel]
    if np.any(mag >= 1.0):
        raise ValueError(f"envelope not yet decaying at T={T:g}: "
                         f"|value| + err reaches {float(mag.max()):.6g}")
    with np.errstate(divide="ignore"):
        rate = -np.log(mag) / t ** (profile.dim / profile.alpha)
    return 0.9 * float(rate.min())


def uniform_convergence_scan(ps: PointSet, radii: DeloneRadii, alpha: float,
                             r_list, times: np.ndarray, tol: float,
                             *, threshold: float | None = None) -> UniformScanReport:
    """sup-distance to the Gaussian along an ascending ladder of cutoffs."""
    r_list = [float(r) for r in r_list]
    if any(b <= a for a, b in zip(r_list, r_list[1:])):
        raise ValueError("r_list must be strictly ascending")
    entries = []
    for r in r_list:
        prof = evaluate_profile(ps, radii, alpha, r, times, tol)
        entries.append((r, gaussian_sup_distance(prof)))
    sups = [s for _, s in entries]
    non_inc = all(b <= a + 2.0 * tol for a, b in zip(sups, sups[1:]))
    final_below = None if threshold is None else bool(sups[-1] <= threshold)
    return UniformScanReport(entries=tuple(entries), non_increasing=non_inc,
                             final_below=final_below)


def fit_gaussian(profile: RamseyProfile) -> float:
    """Least-squares sigma for exp(-t^2/(2 sigma^2)) through the profile.

    Fits beta = 1/(2 sigma^2) by Newton iteration on the scalar normal
    equation, restricted to grid points with value > 0.05 (the shoulder of
    the curve, where the model is informative).
    """
    t_all, v_all = profile.times, profile.values
    if int((np.abs(t_all) <= 3.0).sum()) < 5:
        raise ValueError("need at least 5 grid points with |t| <= 3")
    sel = v_all > 0.05
    if not sel.any():
        raise ValueError("no values above 0.05 to fit")
    t2 = t_all[sel] ** 2
    v = v_all[sel]
    w = t2 ** 2
    beta = float((t2 * -np.log(v)).sum() / w.sum()) if w.sum() > 0 else 0.5
    beta = max(beta, 1e-12)
    for _ in range(100):
        g = np.exp(-beta * t2)
        resid = v - g
        grad = float((resid * t2 * g).sum())             # dF/dbeta / 2
        hess = float((t2 ** 2 * g * (g - resid)).sum())  # d2F/dbeta2 / 2
        if hess <= 0.0:
            break
        beta_new = beta - grad / hess
        if beta_new <= 0.0:
            beta_new = beta / 2.0
        if abs(beta_new - beta) <= 1e-15 * max(1.0, beta):
            beta = beta_new
            break
        beta = beta_new
    if not beta > 0.0:
        raise ValueError("fit did not converge to a positive width")
    return 1.0 / math.sqrt(2.0 * beta)


def bloch_evolution(profile: RamseyProfile, v0) -> np.ndarray:
    """Transverse dephasing of a Bloch vector: rows (C v0_x, C v0_y, v0_z)."""
    v0 = np.asarray(v0, dtype=np.float64)
    if v0.shape != (3,):
        raise ValueError("v0 must be a 3-vector")
    if np.linalg.norm(v0) > 1.0 + 1e-12:
        raise ValueError("|v0| must be <= 1")
    out = np.empty((profile.times.size, 3), dtype=np.float64)
    out[:, 0] = profile.values * v0[0]
    out[:, 1] = profile.values * v0[1]
    out[:, 2] = v0[2]
    return out
