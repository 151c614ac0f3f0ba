"""Exact dyadic sign basis: evaluation, inner products, Fourier data.

Purpose
-------
The functions theta_n on [-1, 1] are defined by theta_1 = sign and the
doubling action theta_{n+1}(x) = theta_n(2x - sigma(x)), sigma = sign, and
for a finite index set alpha, theta_alpha = prod_{n in alpha} theta_n
(theta_empty = 1).  With the normalized inner product
<f, g> = (1/2) integral_{-1}^{1} f g dx this family is orthonormal, and
sum_k theta_k / 2^k converges to x in L^2: its level-N partial sum is the
midpoint staircase with exact error 2^(-N)/sqrt(3).

Everything here is computed exactly.  theta_n(x) is the n-th binary digit
of (x + 1)/2, extracted in integer arithmetic from the exact rational value
of x (floats are binary rationals, so this is lossless); every integrand is
piecewise constant on dyadic cells (possibly times e^(-i pi m x), which
integrates in closed form per cell), so there is no quadrature error
anywhere, only final-rounding ulps.

Conventions
-----------
sign(0) := +1 throughout, which matches taking the terminating binary
expansion of dyadic rationals (and the all-ones expansion at x = 1).  Cell
j of level N is [-1 + 2j/2^N, -1 + 2(j+1)/2^N); on it theta_n is the sign
2*bit - 1 of bit N-n (counting from the least significant bit) of j.  Cell
arrays materialize only up to level 22; inner products above that level
iterate cells implicitly through these bit patterns in exact integer
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "ThetaIndex",
    "PiecewiseDyadic",
    "theta_eval",
    "theta_alpha_eval",
    "to_piecewise",
    "inner_product",
    "fourier_coeff",
    "t_fourier_action_check",
    "partial_sum_x",
    "l2_distance_to_x",
    "l2_cauchy_check",
]

_MATERIALIZE_MAX_LEVEL = 22


@dataclass(frozen=True)
class ThetaIndex:
    """Finite ascending set of positive integers; empty denotes theta = 1."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(self.indices)
        if any(not isinstance(n, int) or n < 1 for n in idx):
            raise ValueError("indices must be positive integers")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must be strictly ascending")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices) -> "ThetaIndex":
        if isinstance(indices, ThetaIndex):
            return indices
        return cls(tuple(sorted(set(int(n) for n in indices))))

    @property
    def level(self) -> int:
        return self.indices[-1] if self.indices else 0

    def symmetric_difference(self, other: "ThetaIndex") -> "ThetaIndex":
        return ThetaIndex.of(set(self.indices) ^ set(other.indices))


@dataclass(frozen=True)
class PiecewiseDyadic:
    """Constant on each of the 2^level dyadic cells of [-1, 1]."""

    level: int
    cell_values: np.ndarray

    def __post_init__(self) -> None:
        if not 0 <= self.level <= _MATERIALIZE_MAX_LEVEL:
            raise ValueError(
                f"level must be in [0, {_MATERIALIZE_MAX_LEVEL}] to materialize")
        vals = np.asarray(self.cell_values, dtype=np.float64)
        if vals.shape != (1 << self.level,):
            raise ValueError("cell_values must have exactly 2^level entries")
        vals.setflags(write=False)
        object.__setattr__(self, "cell_values", vals)

    def evaluate(self, x: float) -> float:
        if not -1.0 <= x <= 1.0:
            raise ValueError("x must lie in [-1, 1]")
        j = min(int((x + 1.0) * 0.5 * (1 << self.level)), (1 << self.level) - 1)
        return float(self.cell_values[j])


def _digit(y: Fraction, n: int) -> int:
    """n-th binary digit of y in [0, 1], terminating expansion; all-ones at 1."""
    if y == 1:
        return 1
    return (y.numerator << n) // y.denominator & 1


def theta_eval(n: int, x: float | Fraction) -> int:
    """theta_n(x) in {-1, +1} via the n-th binary digit of (x + 1)/2.

    Equivalent to unrolling the doubling recursion from the sign function
    (property-tested against it); dyadic points follow sign(0) = +1.
    """
    if not (isinstance(n, int) and n >= 1):
        raise ValueError("n must be a positive integer")
    xf = Fraction(x)
    if not -1 <= xf <= 1:
        raise ValueError("x must lie in [-1, 1]")
    return 2 * _digit((xf + 1) / 2, n) - 1


def theta_alpha_eval(alpha, x: float | Fraction) -> int:
    """Product of theta_n over n in alpha; the empty index gives 1."""
    idx = ThetaIndex.of(alpha)
    out = 1
    for n in idx.indices:
        out *= theta_eval(n, x)
    return out


def _cell_signs(indices: tuple[int, ...], level: int) -> np.ndarray:
    """Vector of theta_alpha cell values (+-1 int8) at the given level."""
    j = np.arange(1 << level, dtype=np.int64)
    out = np.ones(1 << level, dtype=np.int8)
    for n in indices:
        bit = (j >> (level - n)) & 1
        out *= (2 * bit - 1).astype(np.int8)
    return out


def to_piecewise(alpha) -> PiecewiseDyadic:
    """Exact cell representation of theta_alpha at level max(alpha).

    The cell value is theta_alpha at the cell midpoint, computed from the
    bits of the cell index (the midpoint's digits ARE those bits, followed
    by a 1 that no index in alpha reaches).
    """
    idx = ThetaIndex.of(alpha)
    level = idx.level
    if level > _MATERIALIZE_MAX_LEVEL:
        raise ValueError(f"index {level} too large to materialize "
                         f"(cap {_MATERIALIZE_MAX_LEVEL})")
    return PiecewiseDyadic(level=level,
                           cell_values=_cell_signs(idx.indices, level))


def inner_product(alpha, beta) -> float:
    """<theta_alpha, theta_beta> = (1/2^N) sum over level-N cells, exactly.

    theta_alpha * theta_beta = theta_{alpha XOR beta}, whose cell signs
    depend only on the |gamma| bits picked by the symmetric difference.  Up
    to level 20 the cells are enumerated outright and summed in integer
    arithmetic; above that the sum is grouped by those bit patterns: each
    of the 2^|gamma| patterns occurs in exactly 2^(N-|gamma|) cells, so the
    total is an exact integer either way.  The result is exactly 1.0 for
    alpha == beta and exactly 0.0 otherwise.
    """
    a, b = ThetaIndex.of(alpha), ThetaIndex.of(beta)
    gamma = a.symmetric_difference(b)
    level = max(a.level, b.level, 1)
    if level <= 20:
        signs = _cell_signs(gamma.indices, level)
        total = int(signs.astype(np.int64).sum())
        return float(Fraction(total, 1 << level))
    g = len(gamma.indices)
    if g <= 20:
        pattern_sum = 0
        for pat in range(1 << g):
            prod = 1
            for i in range(g):
                prod *= 2 * ((pat >> i) & 1) - 1
            pattern_sum += prod
    else:
        # the pattern sum factorizes over bits as prod of ((+1) + (-1)) = 0
        pattern_sum = 0
    total = pattern_sum * (1 << (level - g))
    return float(Fraction(total, 1 << level))


def _fsum_parts(x: np.ndarray) -> float:
    if x.size <= 4096:
        return math.fsum(x.tolist())
    return math.fsum(math.fsum(x[i:i + 4096].tolist())
                     for i in range(0, x.size, 4096))


def fourier_coeff(k: int, m: int) -> complex:
    """(theta_k)_m = (1/2) integral_{-1}^1 theta_k(x) e^(-i pi m x) dx, exactly.

    Per level-k cell the exponential integrates in closed form; the phases
    at the cell endpoints -1 + j 2^(1-k) are reduced modulo 2 pi in integer
    arithmetic ((m j) mod 2^k), so no large-argument trigonometry occurs.
    The support lies on m = 2^k n + 2^(k-1) with magnitude (1/pi)/|n + 1/2|.
    """
    if not (isinstance(k, int) and 1 <= k <= 20):
        raise ValueError("need integer 1 <= k <= 20")
    if not (isinstance(m, int) and abs(m) <= 10 ** 6):
        raise ValueError("need integer |m| <= 10^6")
    n_cells = 1 << k
    h = 2.0 ** (1 - k)
    j = np.arange(n_cells + 1, dtype=np.int64)
    signs = (2 * (j[:-1] & 1) - 1).astype(np.float64)
    if m == 0:
        return complex(_fsum_parts(signs) * h / 2.0)
    q = (m * j) % n_cells  # endpoint phase: (-1)^m * exp(-i pi h q)
    endpoint = np.exp(-1j * math.pi * h * q)
    terms = signs * (endpoint[:-1] - endpoint[1:])
    total = complex(_fsum_parts(terms.real), _fsum_parts(terms.imag))
    sign_m = -1.0 if m % 2 else 1.0
    return total * sign_m * (-1j) / (2.0 * math.pi * m)


def t_fourier_action_check(k: int, n_range: int, coeffs=None,
                           tol: float = 1e-12) -> bool:
    """Check the doubling action on Fourier data: theta_k maps to theta_{k+1}.

    The action sends f_n to (Tf)_{2n} = (-1)^n f_n and (Tf)_{2n+1} = 0;
    both target families are compared against fourier_coeff(k+1, .) for
    |n| <= n_range.  ``coeffs`` may supply precomputed source coefficients
    as a dict {n: (theta_k)_n}; they are computed when omitted.
    """
    if not (isinstance(k, int) and 1 <= k <= 19):
        raise ValueError("need integer 1 <= k <= 19")
    for n in range(-n_range, n_range + 1):
        src = coeffs[n] if coeffs is not None else fourier_coeff(k, n)
        even = fourier_coeff(k + 1, 2 * n)
        expected = (-1.0 if n % 2 else 1.0) * src
        if abs(even - expected) > tol:
            return False
        odd = fourier_coeff(k + 1, 2 * n + 1)
        if abs(odd) > tol:
            return False
    return True


def partial_sum_x(N: int) -> PiecewiseDyadic:
    """S_N = sum_{k<=N} theta_k / 2^k, the level-N midpoint staircase.

    Summing the bit signs telescopes to the cell midpoint,
    S_N(cell j) = (2j + 1)/2^N - 1, exact in floating point for N <= 52.
    """
    if not (isinstance(N, int) and 0 <= N <= _MATERIALIZE_MAX_LEVEL):
        raise ValueError(f"need 0 <= N <= {_MATERIALIZE_MAX_LEVEL}")
    j = np.arange(1 << N, dtype=np.float64)
    return PiecewiseDyadic(level=N, cell_values=(2.0 * j + 1.0) / (1 << N) - 1.0)


def l2_distance_to_x(pw: PiecewiseDyadic) -> float:
    """||pw - x||_2 under (1/2)dx, by exact per-cell quadratic integration.

    On a cell with midpoint m_j and width h the integral of (v_j - x)^2 is
    h (v_j - m_j)^2 + h^3/12, so the distance needs no quadrature grid.
    """
    n_cells = 1 << pw.level
    h = 2.0 / n_cells
    j = np.arange(n_cells, dtype=np.float64)
    mid = -1.0 + (2.0 * j + 1.0) / n_cells
    sq = h * (pw.cell_values - mid) ** 2 + h ** 3 / 12.0
    return math.sqrt(_fsum_parts(sq) / 2.0)


def l2_cauchy_check(A, N: int, M: int, tol: float = 1e-12) -> float:
    """||phi_M - phi_N||_2 for phi_K = sum_{k<=K} A_k theta_k, two ways.

    Orthonormality gives the closed form sqrt(sum_{N<k<=M} A_k^2); the same
    number is recomputed as an honest piecewise integral (dense cells up to
    level 20, exact implicit cross terms above) and the two must agree
    within ``tol``.  A is the coupling prefix A_1..A_M (index k at A[k-1]);
    N == M returns 0.  Raises AssertionError on disagreement.
    """
    if not (0 <= N <= M <= 30):
        raise ValueError("need 0 <= N <= M <= 30")
    if M == N:
        return 0.0
    a = [float(A[k - 1]) for k in range(N + 1, M + 1)]
    if len(a) != M - N:
        raise ValueError("coupling prefix shorter than M")
    closed = math.sqrt(math.fsum(x * x for x in a))
    if M <= 20:
        j = np.arange(1 << M, dtype=np.int64)
        diff = np.zeros(1 << M, dtype=np.float64)
        for k in range(N + 1, M + 1):
            bit = (j >> (M - k)) & 1
            diff += a[k - N - 1] * (2 * bit - 1)
        integral = math.sqrt(_fsum_parts(diff ** 2) / (1 << M))
    else:
        # expand the square; cross terms are exact implicit inner products
        acc = math.fsum(x * x for x in a)
        cross = math.fsum(
            2.0 * a[i] * a[jx] * inner_product({N + 1 + i}, {N + 1 + jx})
            for i in range(len(a)) for jx in range(i + 1, len(a)))
        integral = math.sqrt(acc + cross)
    if abs(closed - integral) > tol:
        raise AssertionError(
            f"closed form {closed!r} and piecewise integral {integral!r} "
            f"disagree beyond {tol:g}")
    return closed
