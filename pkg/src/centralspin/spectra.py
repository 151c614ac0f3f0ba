"""Exponential-coupling counterexamples: cosine products and Cantor spectra.

Purpose
-------
When the couplings decay geometrically, A_k = b^(-k) for an integer base
b >= 2, the dephasing profile collapses to the infinite product

    C(t) = prod_{k >= 1} cos(t / b^k),

which does NOT vanish at infinity for b >= 3: reindexing the product gives
the recursion C(b t) = cos(t) C(t), so C(b^i pi) = +/- C(pi) forever.  For
b = 2 the product telescopes to sinc(t) = sin(t)/t (which does decay), and
for b = 3 the value l = C(pi) is the persistent oscillation amplitude.  The
same machinery houses the Cantor function C, the measure-transport map

    D(x) = sum_n theta_n(2x - 1)/3^n + 1/2,

which pushes Lebesgue measure on [0,1] to the Cantor distribution
(C(D(x)) = x almost everywhere), and the Monte-Carlo check that e^(it/2)
prod cos(t/3^k) is the characteristic function of D(uniform).

Conventions
-----------
Products are truncated at depth K with the geometric log-tail bound
sum_{k > K} (t/b^k)^2 = t^2 / (b^(2K) (b^2 - 1)), valid once every dropped
argument is below 1 (-log cos x <= x^2 there); the certificate is
err = |value| * (e^tail - 1), clamped to [0, 2].  Digit manipulations for
the Cantor function and D-map run in exact rational arithmetic
(fractions.Fraction), so the only float rounding is in the final cast;
Monte-Carlo sampling uses the counter generator keyed on (seed, index) and
draws with an odd 53-bit mantissa, so no sample is ever a dyadic rational
of level <= 52 and theta digits are exact bit extractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rng import counter_hash
from .bounds import CertifiedValue

__all__ = [
    "L_ORACLE",
    "CosProduct",
    "TernaryPoint",
    "CharFunctionReport",
    "cos_product",
    "recursion_check",
    "persistent_oscillation",
    "cantor_function",
    "d_map",
    "d_map_exact",
    "char_function_check",
]

# C(pi) for base 3, computed once offline with 30-digit arithmetic at
# depth 60 (mpmath); the literature value is 0.46 to two digits.
L_ORACLE = 0.46627457895504917055732477549818


@dataclass(frozen=True)
class CosProduct:
    """Truncated product prod_{k=1..K} cos(t / base^k) with certified tail.

    Exactly one of ``depth`` (fixed K) or ``tol`` (minimal K whose log-tail
    bound stays below tol at evaluation time) must be given.
    """

    base: int
    depth: int | None = None
    tol: float | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.base, int) and self.base >= 2):
            raise ValueError("base must be an integer >= 2")
        if (self.depth is None) == (self.tol is None):
            raise ValueError("give exactly one of depth or tol")
        if self.depth is not None and self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.tol is not None and not self.tol > 0.0:
            raise ValueError("tol must be > 0")

    def _depth_for(self, t: float) -> int:
        b = self.base
        # dropped arguments must be < 1: |t|/b^(K+1) < 1
        k_min = 1
        at = abs(t)
        if at >= 1.0:
            k_min = max(1, int(math.ceil(math.log(at) / math.log(b))))
        if self.depth is not None:
            k = max(self.depth, k_min)
        else:
            k = k_min
            while self._log_tail(t, k) > self.tol:
                k += 1
        return k

    def _log_tail(self, t: float, k: int) -> float:
        b = float(self.base)
        return t * t / (b ** (2 * k) * (b * b - 1.0))

    def evaluate(self, t: float) -> CertifiedValue:
        """Certified C(t); the interval always contains the infinite product."""
        t = float(t)
        k = self._depth_for(t)
        args = t / np.float64(self.base) ** np.arange(1, k + 1)
        value = float(np.cos(args).prod())
        tail = self._log_tail(t, k)
        err = min(2.0, abs(value) * math.expm1(tail))
        return CertifiedValue(value=value, err=err)


def cos_product(base: int, t: float, tol: float) -> CertifiedValue:
    """C(t) = prod cos(t / base^k) truncated when the log-tail bound <= tol."""
    return CosProduct(base, tol=tol).evaluate(t)


def recursion_check(base: int, t: float, tol: float = 1e-12) -> bool:
    """Check the reindexing identity C(base * t) = cos(t) * C(t).

    Both sides are evaluated with certified error; the identity must hold
    within the combined certificates plus tol of float slack.
    """
    lhs = cos_product(base, base * t, tol)
    rhs = cos_product(base, t, tol)
    ct = math.cos(t)
    return abs(lhs.value - ct * rhs.value) <= lhs.err + abs(ct) * rhs.err + tol


def persistent_oscillation(base: int, i_max: int, tol: float = 1e-12
                           ) -> list[tuple[int, float]]:
    """Values C(base^i pi) for i = 0..i_max via exact sign bookkeeping.

    Peeling one factor gives C(base * t) = cos(t) * C(t), and base^j pi is
    an integer multiple of pi, so each step multiplies by cos(base^j pi) =
    (-1)^(base^j) exactly.  For odd bases every step flips the sign:
    C(base^i pi) = (-1)^i C(pi).  For even bases only the first step does
    (cos(pi) = -1; afterwards base^j is even), so the value is -C(pi) for
    all i >= 1.  Either way |C| never decays.  Every returned value is
    cross-checked against a direct truncated-product evaluation within the
    certified errors plus a float slack proportional to base^i pi (the
    argument's own rounding moves the nearby cosines).
    """
    if base < 3:
        raise ValueError("base must be >= 3 (base 2 hits cos(pi/2) = 0)")
    if not (0 <= i_max <= 12):
        raise ValueError("need 0 <= i_max <= 12")
    c_pi = cos_product(base, math.pi, tol)
    out: list[tuple[int, float]] = []
    for i in range(i_max + 1):
        if base % 2 == 1:
            sign = -1.0 if i % 2 == 1 else 1.0
        else:
            sign = -1.0 if i >= 1 else 1.0
        val = sign * c_pi.value
        t_i = float(base ** i) * math.pi
        direct = cos_product(base, t_i, tol)
        slack = t_i * 1e-15 + tol
        if abs(direct.value - val) > direct.err + c_pi.err + slack:
            raise AssertionError(
                f"oscillation value at i={i} disagrees with direct "
                f"evaluation: {val!r} vs {direct.value!r}")
        out.append((i, val))
    return out


@dataclass(frozen=True)
class TernaryPoint:
    """A point of [0,1] with its first ``depth`` exact ternary digits."""

    y: Fraction
    digits: tuple[int, ...]
    depth: int

    @classmethod
    def from_value(cls, y: float | Fraction, depth: int) -> "TernaryPoint":
        yf = Fraction(y)
        if not 0 <= yf <= 1:
            raise ValueError("y must lie in [0, 1]")
        digits = []
        frac = yf
        for _ in range(depth):
            frac *= 3
            dig = int(frac)  # floor for nonnegative frac
            if dig == 3:     # only at y = 1 (0.222... repeating)
                dig = 2
                frac = Fraction(3)
            digits.append(dig)
            frac -= dig
        return cls(y=yf, digits=tuple(digits), depth=depth)

    def reconstruct(self) -> Fraction:
        """Partial value of the digit expansion (within 3^-depth of y)."""
        acc = Fraction(0)
        for dig in reversed(self.digits):
            acc = (acc + dig) / 3
        return acc


def cantor_function(y: float | Fraction, depth: int = 60) -> float:
    """Cantor function via ternary digits, exact to 2^-depth.

    Scan the exact ternary expansion of y: digit 2 emits binary digit 1,
    digit 0 emits 0, and the first digit 1 emits 1 and stops (y sits in a
    middle-third gap, where the function is constant).
    """
    if not 1 <= depth <= 60:
        raise ValueError("need 1 <= depth <= 60")
    pt = TernaryPoint.from_value(y, depth)
    acc = Fraction(0)
    bits: list[int] = []
    for dig in pt.digits:
        if dig == 1:
            bits.append(1)
            break
        bits.append(dig // 2)
    for bit in reversed(bits):
        acc = (acc + bit) / 2
    return float(acc)


def _check_not_dyadic(x: Fraction, depth: int) -> None:
    den = x.denominator
    if den & (den - 1) == 0 and den <= (1 << depth):
        raise ValueError(
            f"x = {x} is a dyadic rational of level <= {depth}; the digit "
            "map is ambiguous there (a measure-zero set)")


def d_map_exact(x: float | Fraction, depth: int) -> Fraction:
    """Exact-rational D(x) = sum_{n<=depth} theta_n(2x-1)/3^n + 1/2.

    theta_n(2x - 1) is +1 when the n-th binary digit of x is 1 and -1
    otherwise, so D's resolved ternary digits are 2*digit_n(x): D maps into
    the Cantor set.  Rejects dyadic x of level <= depth, where the sign
    convention would silently pick a branch.
    """
    xf = Fraction(x)
    if not 0 <= xf <= 1:
        raise ValueError("x must lie in [0, 1]")
    if not 1 <= depth <= 200:
        raise ValueError("need 1 <= depth <= 200")
    _check_not_dyadic(xf, depth)
    num, den = xf.numerator, xf.denominator
    acc = Fraction(0)
    for n in range(depth, 0, -1):
        bit = (num << n) // den & 1
        acc = (acc + (2 * bit - 1)) / 3
    return acc + Fraction(1, 2)


def d_map(x: float, depth: int) -> float:
    """Float D(x) (error <= 3^-depth / 2 from truncation, plus one rounding)."""
    return float(d_map_exact(x, depth))


@dataclass(frozen=True)
class CharFunctionReport:
    """Empirical characteristic function of D(uniform) vs its closed form."""

    t: np.ndarray
    empirical: np.ndarray
    reference: np.ndarray
    tolerance: np.ndarray
    holds: np.ndarray

    @property
    def all_ok(self) -> bool:
        return bool(np.all(self.holds))


def char_function_check(n_samples: int, t_list, seed: int,
                        depth: int = 50) -> CharFunctionReport:
    """Monte-Carlo check that E[e^(itX)], X = D(U), equals e^(it/2) C_3(t).

    Samples u_j keyed on (seed, j) carry odd 53-bit mantissas, so every
    theta digit is an exact bit of the mantissa and no sample is dyadic.
    Each |t| <= 50 is compared within 4/sqrt(n) plus the reference's own
    certified truncation error.
    """
    if n_samples < 10 ** 4:
        raise ValueError("need n_samples >= 10^4 for the 4/sqrt(n) tolerance")
    t_arr = np.asarray(t_list, dtype=np.float64).ravel()
    if np.any(np.abs(t_arr) > 50.0):
        raise ValueError("|t| must be <= 50")
    if not 1 <= depth <= 52:
        raise ValueError("need 1 <= depth <= 52 (bit-exact digits)")
    idx = np.arange(n_samples, dtype=np.int64)
    mant = (counter_hash(seed, idx) >> np.uint64(11)) | np.uint64(1)
    # X = D(u) by Horner over the exact binary digits of the mantissa
    x_val = np.zeros(n_samples, dtype=np.float64)
    for n in range(depth, 0, -1):
        bit = (mant >> np.uint64(53 - n)) & np.uint64(1)
        sgn = 2.0 * bit.astype(np.float64) - 1.0
        x_val = (x_val + sgn) / 3.0
    x_val += 0.5
    emp = np.empty(t_arr.size, dtype=np.complex128)
    ref = np.empty(t_arr.size, dtype=np.complex128)
    tol_arr = np.empty(t_arr.size, dtype=np.float64)
    mc_tol = 4.0 / math.sqrt(n_samples)
    for i, t in enumerate(t_arr):
        emp[i] = np.exp(1j * t * x_val).mean()
        c = cos_product(3, float(t), 1e-14)
        ref[i] = np.exp(0.5j * t) * c.value
        tol_arr[i] = mc_tol + c.err
    holds = np.abs(emp - ref) <= tol_arr
    return CharFunctionReport(t=t_arr, empirical=emp, reference=ref,
                              tolerance=tol_arr, holds=holds)
