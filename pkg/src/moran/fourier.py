"""Fourier transform of measure windows and exact zero-set membership.

Exact zeros are decided symbolically by the stratum test (level k
contributes the zero stratum (B_k / (a_k N_k)) * (Z \\ N_k Z)); numeric
transform values are floats with explicit error bounds, never the other
way round.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import HorizonError, PrecisionError
from .system import (CONVERGENT, DigitLevel, MoranSystem, PeriodicTail,
                     check_convergence, periodic_tail_series)

# conservative per-factor rounding allowance for the Dirichlet-kernel float
FACTOR_EPS = 2.0 ** -48

# rational upper bound on pi, for exact truncation-cutoff comparisons
PI_UPPER = Fraction(355, 113)


@dataclass(frozen=True)
class MeasureWindow:
    """The partial convolution over levels first..last (last=None: infinity)."""

    system: MoranSystem
    first: int = 1
    last: Optional[int] = None

    def __post_init__(self):
        if self.first < 1:
            raise ValueError(f"first must be >= 1, got {self.first}")
        if self.last is None:
            if not isinstance(self.system.tail, PeriodicTail):
                raise HorizonError(
                    "infinite windows require a periodic tail")
            if check_convergence(self.system).verdict != CONVERGENT:
                raise ValueError("infinite window over a divergent system")
        else:
            if self.last < self.first:
                raise ValueError("window requires first <= last")
            self.system.level(self.last)  # raises HorizonError if unreachable

    @property
    def is_finite(self) -> bool:
        return self.last is not None


@dataclass(frozen=True)
class ZeroStratumHit:
    """Witness lambda = (B_k / (a_k N_k)) * multiplier, multiplier not in N_k Z."""

    level: int
    multiplier: int


@dataclass(frozen=True)
class TransformValue:
    value: complex
    error_bound: float
    exact_zero: bool


def sin_pi(x: Fraction) -> float:
    """sin(pi * x) with exact argument reduction into [0, 1/2].

    math.sin(math.pi * float(x)) loses relative accuracy catastrophically
    near integer x (the rounded product pi*x misses the true zero); exact
    mirror reduction keeps the relative error at a few ulps everywhere.
    """
    x = x % 2
    sign = 1.0
    if x >= 1:
        sign, x = -1.0, x - 1
    if 2 * x > 1:
        x = 1 - x
    return sign * math.sin(math.pi * float(x))


def factor_transform(level: DigitLevel, B: int, xi: Fraction) -> TransformValue:
    """Transform of one convolution factor delta_{(a/B)*{0..N-1}} at xi.

    Dirichlet-kernel form (1/N) sum_j exp(-2 pi i j a xi / B); the argument
    is reduced mod 1 exactly before any float enters.
    """
    n = level.count
    t = Fraction(level.scale) * xi / B
    z = n * t
    if z.denominator == 1 and z.numerator % n != 0:
        return TransformValue(complex(0.0), 0.0, True)
    tau = t - (t.numerator // t.denominator)  # exact t mod 1
    if tau == 0:
        return TransformValue(complex(1.0), 0.0, False)
    mag = sin_pi(n * tau) / (n * sin_pi(tau))
    value = cmath.exp(-1j * math.pi * (n - 1) * float(tau)) * mag
    return TransformValue(value, FACTOR_EPS, False)


def zero_stratum(window: MeasureWindow, lam: Fraction) -> Optional[ZeroStratumHit]:
    """Smallest level k in the window whose zero stratum contains lam."""
    if lam == 0:
        raise ValueError("0 is never in a zero set (mu_hat(0) = 1)")
    system = window.system
    p = system.prefix_length
    if window.last is None:
        # cutoff: once B_k / (a_k N_k) > |lam| for every later level
        max_an = max(l.scale * l.count for l in system.tail.levels)
        bound = abs(lam) * max_an
    b = system.level_product(window.first - 1)
    k = window.first
    while True:
        if window.last is not None and k > window.last:
            return None
        lev = system.level(k)
        b *= lev.base
        if window.last is None and k > p and b > bound:
            return None
        t = lam * lev.scale * lev.count / b
        if t.denominator == 1 and t.numerator % lev.count != 0:
            return ZeroStratumHit(k, t.numerator)
        k += 1


def _truncation_cutoff(window: MeasureWindow, xi: Fraction, eps: float) -> int:
    """Smallest n with an exact tail bound sum_{k>n} pi (N_k-1) a_k |xi| / B_k < eps.

    Uses the factor Lipschitz bound |factor(t) - 1| <= pi (N-1) |t|.
    """
    weight = lambda lev: (lev.count - 1) * lev.scale
    eps_q = Fraction(eps)  # exact binary value of the float
    n = window.first - 1
    while PI_UPPER * abs(xi) * periodic_tail_series(window.system, n, weight) >= eps_q:
        n += 1
    return n


def evaluate_transform(window: MeasureWindow, xi: Fraction,
                       eps: float = 1e-9) -> TransformValue:
    """mu_hat of the window at xi, with a certified error bound.

    Finite windows multiply exact-argument factor transforms; infinite
    windows truncate once the exact tail bound drops below eps.
    """
    system = window.system
    if window.last is not None:
        value = complex(1.0)
        count = 0
        b = system.level_product(window.first - 1)
        for k in range(window.first, window.last + 1):
            lev = system.level(k)
            b *= lev.base
            factor = factor_transform(lev, b, xi)
            if factor.exact_zero:
                return TransformValue(complex(0.0), 0.0, True)
            value *= factor.value
            count += 1
        return TransformValue(value, count * FACTOR_EPS, False)

    if xi == 0:
        return TransformValue(complex(1.0), 0.0, False)
    if zero_stratum(window, xi) is not None:
        return TransformValue(complex(0.0), 0.0, True)
    if eps <= 0:
        raise ValueError("eps must be positive")
    cutoff = _truncation_cutoff(window, xi, eps)
    count = cutoff - window.first + 1
    if eps < count * FACTOR_EPS:
        raise PrecisionError(
            f"eps={eps} below the rounding floor {count * FACTOR_EPS} "
            f"({count} factors)")
    if cutoff < window.first:
        return TransformValue(complex(1.0), eps, False)
    inner = evaluate_transform(MeasureWindow(system, window.first, cutoff), xi)
    return TransformValue(inner.value, eps + inner.error_bound, False)
