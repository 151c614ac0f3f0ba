"""Certified tail sums of inverse-power couplings over Delone point sets.

Purpose
-------
Everything downstream (normalization, profile certificates, envelope
calibration) rests on sums of the form

    S(r) = sum_{p : |p| >= r} |p|^(-alpha)      (alpha > d),

taken over a point set that is a (r_pack, r_cover)-Delone set of the ball
of radius R_max.  A finite computer can only add the points it has, so
every such sum is returned as a ``CertifiedValue``: the exact finite sum
over the stored points together with a rigorous bound on the discarded
tail beyond R_max.

Conventions
-----------
The two-sided volume-counting estimate used throughout is, for closed
annuli a <= |p| <= b with a >= r_pack,

    d / (3^d r_cover^d) * I(a + r_cover, b - r_cover)
        <= sum_{a <= |p| <= b} |p|^(-alpha)
        <= 3^d d / r_pack^d * I(a - r_pack, b + r_pack),

where I(u, v) = integral_u^v t^(d-1-alpha) dt; as b -> infinity this
yields the tail sandwich (valid once r >= 3 r_cover)

    d / (3^d r_cover^d) * T(alpha, d, r + r_cover)
        <= S(r) <=
    3^d d / r_pack^d * T(alpha, d, r - r_pack),

with T(alpha, d, r) = r^(d-alpha)/(alpha-d) the exact tail integral.
Upper bounds must use a *lower* estimate of r_pack and lower bounds an
*upper* estimate of r_cover, so the helpers below consistently take the
structural packing radius recorded by the generators (or a caller
override) for upper bounds and ``r_cover + probe_resolution`` for lower
bounds.

All finite sums use compensated (exact pairwise) accumulation via
``math.fsum`` over chunks, so the arithmetic error of the reported value
is a few ulps and is dominated by the certified tail term everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pointsets import DeloneRadii, PointSet

__all__ = [
    "CertifiedValue",
    "SandwichResult",
    "SeqIntegralReport",
    "integral_tail",
    "delone_tail_sum",
    "sandwich_check",
    "seq_sum_integral_check",
    "asymptotic_ratio",
]

_FSUM_CHUNK = 4096


@dataclass(frozen=True)
class CertifiedValue:
    """A number known to lie in [value - err, value + err], err >= 0."""

    value: float
    err: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError("certified value must be finite")
        if not (self.err >= 0.0 and math.isfinite(self.err)):
            raise ValueError("certified error must be finite and >= 0")

    @property
    def lo(self) -> float:
        return self.value - self.err

    @property
    def hi(self) -> float:
        return self.value + self.err

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class SandwichResult:
    """Two-sided volume-counting bracket around a measured tail sum."""

    r: float
    lower: float
    upper: float
    finite_sum: float
    tail_err: float
    holds: bool


@dataclass(frozen=True)
class SeqIntegralReport:
    """Midpoint-rule comparison of sum_{n >= M} f(n) with its integral."""

    M: int
    seq_sum: CertifiedValue
    integral: float
    correction_bound: float
    holds: bool


def integral_tail(alpha: float, d: int, r: float) -> float:
    """Exact tail integral T(alpha, d, r) = r^(d-alpha) / (alpha - d).

    This is integral_r^infinity t^(d-1) * t^(-alpha) dt, the d-dimensional
    radial volume integral of the coupling law; it is finite iff alpha > d.
    """
    if alpha <= d:
        raise ValueError("tail integral diverges unless alpha > d")
    if r <= 0.0:
        raise ValueError("need r > 0")
    return r ** (d - alpha) / (alpha - d)


def _fsum_chunked(x: np.ndarray) -> float:
    """Compensated sum of a 1-D array (exactly rounded per chunk)."""
    if x.size <= _FSUM_CHUNK:
        return math.fsum(x.tolist())
    parts = [math.fsum(x[i:i + _FSUM_CHUNK].tolist())
             for i in range(0, x.size, _FSUM_CHUNK)]
    return math.fsum(parts)


def _effective_r_pack(ps: PointSet, radii: DeloneRadii,
                      r_pack: float | None) -> float:
    """Packing radius safe for upper bounds (never an overestimate).

    The measured r_pack is exact for the stored points, but upper bounds
    extrapolate beyond R_max where only the generator's structural
    guarantee applies; use the smaller of the two, or a caller override
    for hand-built sets whose meta carries no guarantee.
    """
    if r_pack is not None:
        if not (0.0 < r_pack <= radii.r_pack):
            raise ValueError("r_pack override must be in (0, measured r_pack]")
        return r_pack
    structural = ps.meta.get("r_pack_structural")
    if structural is None:
        raise ValueError(
            "point set meta carries no structural packing radius; "
            "pass r_pack= explicitly")
    return min(float(structural), radii.r_pack)


def delone_tail_sum(ps: PointSet, radii: DeloneRadii, alpha: float, r: float,
                    *, r_pack: float | None = None) -> CertifiedValue:
    """Certified S(r) = sum over |p| >= r of |p|^(-alpha).

    The stored points cover |p| <= R_max exactly; the discarded tail
    beyond R_max is bounded by the packing-side volume estimate

        0 <= tail <= 3^d d / r_pack^d * T(alpha, d, R_max - r_pack),

    which is valid because any point of the (unseen) extension lies at
    distance >= 2 r_pack from every other, exactly as inside the window.
    Requires alpha > d and 0 <= r <= R_max.
    """
    d = ps.dim
    if alpha <= d:
        raise ValueError("tail sum diverges unless alpha > d")
    if not (0.0 <= r <= ps.region_radius):
        raise ValueError("need 0 <= r <= region_radius")
    rp = _effective_r_pack(ps, radii, r_pack)
    rr = ps.radii
    sel = rr[rr >= r]
    if sel.size:
        terms = np.sort(sel)[::-1] ** (-alpha)  # ascending magnitudes
        finite = _fsum_chunked(terms)
    else:
        finite = 0.0
    tail_cut = ps.region_radius - rp
    if tail_cut <= 0.0:
        raise ValueError("region too small for the packing radius")
    tail = (3.0 ** d) * d / rp ** d * integral_tail(alpha, d, tail_cut)
    # centre the interval on finite + tail/2 so err is half the bracket
    return CertifiedValue(value=finite + 0.5 * tail, err=0.5 * tail)


def sandwich_check(ps: PointSet, radii: DeloneRadii, alpha: float, r: float,
                   *, r_pack: float | None = None) -> SandwichResult:
    """Check the two-sided tail sandwich at radius r (requires r >= 3 r_cover).

    lower = d/(3^d rc^d) * T(alpha, d, r + rc) with rc = r_cover upper
    estimate, upper = 3^d d/rp^d * T(alpha, d, r - rp) with rp the
    structural packing radius; both must bracket the certified sum
    (including its own tail uncertainty).
    """
    d = ps.dim
    rp = _effective_r_pack(ps, radii, r_pack)
    rc = radii.r_cover_upper
    if r < 3.0 * rc:
        raise ValueError("sandwich requires r >= 3 * r_cover")
    s = delone_tail_sum(ps, radii, alpha, r, r_pack=r_pack)
    lower = d / ((3.0 ** d) * rc ** d) * integral_tail(alpha, d, r + rc)
    upper = (3.0 ** d) * d / rp ** d * integral_tail(alpha, d, r - rp)
    holds = (lower <= s.hi) and (s.lo <= upper)
    return SandwichResult(r=float(r), lower=lower, upper=upper,
                          finite_sum=s.value, tail_err=s.err, holds=holds)


def seq_sum_integral_check(alpha: float, M: int) -> SeqIntegralReport:
    """Compare sum_{n >= M} n^(-alpha) with its midpoint integral.

    The midpoint rule on unit cells gives

        sum_{n >= M} n^(-alpha) = integral_{M - 1/2}^infinity t^(-alpha) dt - E,

    where the convexity of f(t) = t^(-alpha) forces 0 <= E and the
    standard cell-wise expansion bounds the total correction by

        E <= (1/24) * integral_{M - 3/2}^infinity f''(t) dt
           = alpha * (M - 3/2)^(-alpha - 1) / 24,

    the f'' integral being evaluated by the same midpoint argument one
    level up.  The sequence side is summed exactly to a cutoff N >= 2M and
    its remainder certified by the *same* identity applied at N + 1, so
    the residual uncertainty is a factor ~2^(alpha+1) below the claimed
    correction bound at every alpha > 1.  ``holds`` records certified
    containment: integral - correction_bound <= seq <= integral.
    """
    if alpha <= 1.0:
        raise ValueError("sum diverges unless alpha > 1")
    if M < 2:
        raise ValueError("need M >= 2 so the correction bound is usable")
    integral = (M - 0.5) ** (1.0 - alpha) / (alpha - 1.0)
    corr = alpha * (M - 1.5) ** (-alpha - 1.0) / 24.0
    N = max(2 * M, 1000)
    n = np.arange(M, N + 1, dtype=np.float64)
    head = _fsum_chunked(np.sort(n ** (-alpha)))
    # remainder over n >= N+1 certified recursively: it lies in
    # [tail_integral - corr(N+1), tail_integral]
    rem_int = (N + 0.5) ** (1.0 - alpha) / (alpha - 1.0)
    rem_corr = alpha * (N - 0.5) ** (-alpha - 1.0) / 24.0
    seq = CertifiedValue(value=head + rem_int - 0.5 * rem_corr,
                         err=0.5 * rem_corr)
    holds = (integral - corr <= seq.lo) and (seq.hi <= integral)
    return SeqIntegralReport(M=int(M), seq_sum=seq, integral=integral,
                             correction_bound=corr, holds=holds)


def asymptotic_ratio(ps: PointSet, radii: DeloneRadii, alpha: float, r: float,
                     *, r_pack: float | None = None) -> tuple[float, CertifiedValue]:
    """Scaled tail r^(alpha-d) * S(r) with its certified two-sided window.

    The sandwich transported through the scaling gives the r-dependent
    bracket

        d/(3^d rc^d (alpha-d)) * (1 + rc/r)^(d-alpha)
            <= r^(alpha-d) S(r) <=
        3^d d/(rp^d (alpha-d)) * (1 - rp/r)^(d-alpha),

    which pinches (per set) as r grows; the first return value is the
    measured ratio, the second the certified window as a CertifiedValue
    centred on the bracket.
    """
    d = ps.dim
    rp = _effective_r_pack(ps, radii, r_pack)
    rc = radii.r_cover_upper
    if r < 3.0 * rc:
        raise ValueError("asymptotic window requires r >= 3 * r_cover")
    s = delone_tail_sum(ps, radii, alpha, r, r_pack=r_pack)
    scale = r ** (alpha - d)
    ratio = scale * s.value
    lo = d / ((3.0 ** d) * rc ** d * (alpha - d)) * (1.0 + rc / r) ** (d - alpha)
    hi = (3.0 ** d) * d / (rp ** d * (alpha - d)) * (1.0 - rp / r) ** (d - alpha)
    window = CertifiedValue(value=0.5 * (lo + hi), err=0.5 * (hi - lo))
    return ratio, window
