"""Moran systems: integer bases paired with scaled consecutive digit sets.

A system is a finite prefix of levels plus an optional tail rule (periodic
block or formula-driven counts).  Level n carries a base b_n >= 2, a count
N_n >= 1 and a scale a_n >= 1, and represents the digit set
a_n * {0, ..., N_n - 1} at that base.  All series with closed forms are
computed as exact rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from .errors import HorizonError, ParseError

CONVERGENT = "Convergent"
DIVERGENT = "Divergent"
UNKNOWN = "Unknown"

# certificate tags for convergence reports
GEOMETRIC_RATIO = "geometric-ratio"
RATIO_TEST = "ratio-test"
NONVANISHING_TERMS = "nonvanishing-terms"
BOUNDED_BY_COROLLARY = "bounded-by-corollary"
FINITE_PREFIX = "finite-prefix"


def parse_rational(value) -> Fraction:
    """Parse an exact rational from an int, a float, or a 'p/q' string."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # decimal intent, not the binary float bit pattern
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    """Canonical 'p/q' rendering; integers print without a denominator."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class DigitLevel:
    """One convolution factor: digit set scale * {0, ..., count-1} at base."""

    base: int
    count: int
    scale: int = 1

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.scale < 1:
            raise ValueError(f"scale must be >= 1, got {self.scale}")


@dataclass(frozen=True)
class PeriodicTail:
    levels: tuple[DigitLevel, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("periodic tail needs at least one level")


@dataclass(frozen=True)
class FormulaTail:
    """Constant base with counts N_n = max(2, round(c * rho**n))."""

    base: int
    c: Fraction
    rho: Fraction

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"tail base must be >= 2, got {self.base}")
        if self.c <= 0:
            raise ValueError("formula tail requires c > 0")
        if self.rho < 1:
            raise ValueError("formula tail requires rho >= 1")

    def count_at(self, n: int) -> int:
        return max(2, round(self.c * self.rho**n))


Tail = Union[PeriodicTail, FormulaTail, None]


@dataclass(frozen=True)
class MoranSystem:
    """A finitely described sequence of digit levels."""

    prefix: tuple[DigitLevel, ...]
    tail: Tail = None

    def __post_init__(self):
        if not self.prefix and self.tail is None:
            raise ValueError("empty prefix with no tail")
        # finite systems may be fully trivial (all counts 1): canonical
        # tiling complements of N_j = b_j systems degenerate to Diracs
        if self.tail is not None and not self._has_nontrivial_level():
            raise ValueError("at least one level must have count >= 2")

    def _has_nontrivial_level(self) -> bool:
        if any(lev.count >= 2 for lev in self.prefix):
            return True
        if isinstance(self.tail, PeriodicTail):
            return any(lev.count >= 2 for lev in self.tail.levels)
        return isinstance(self.tail, FormulaTail)  # counts clamped to >= 2

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)

    @property
    def horizon(self) -> Optional[int]:
        """Largest addressable level, or None when unbounded."""
        return len(self.prefix) if self.tail is None else None

    def level(self, n: int) -> DigitLevel:
        if n < 1:
            raise ValueError(f"level index must be >= 1, got {n}")
        p = len(self.prefix)
        if n <= p:
            return self.prefix[n - 1]
        if self.tail is None:
            raise HorizonError(f"level {n} beyond finite horizon {p}")
        if isinstance(self.tail, PeriodicTail):
            block = self.tail.levels
            return block[(n - p - 1) % len(block)]
        return DigitLevel(self.tail.base, self.tail.count_at(n), 1)

    def levels(self, first: int, last: int) -> Iterator[DigitLevel]:
        for n in range(first, last + 1):
            yield self.level(n)

    def level_product(self, n: int) -> int:
        """B_n = b_1 * ... * b_n, exactly (B_0 = 1)."""
        b = 1
        for k in range(1, n + 1):
            b *= self.level(k).base
        return b


@dataclass(frozen=True)
class ConvergenceReport:
    verdict: str
    total: Optional[Fraction]  # exact sum when closed form, else upper bound
    certificate: str
    note: Optional[str] = None


@dataclass(frozen=True)
class SupportInfo:
    diameter: Fraction
    left: Fraction
    resolution: Fraction


def _prefix_series(system: MoranSystem, upto: int,
                   numer: Callable[[DigitLevel], int]) -> Fraction:
    total = Fraction(0)
    b = 1
    for k in range(1, upto + 1):
        lev = system.level(k)
        b *= lev.base
        total += Fraction(numer(lev), b)
    return total


def periodic_tail_series(system: MoranSystem, after: int,
                         numer: Callable[[DigitLevel], int]) -> Fraction:
    """Exact sum over k > after of numer(level_k) / B_k for periodic tails.

    Valid for any after >= 0; the stretch up to the prefix end is summed
    explicitly and the periodic remainder is a geometric block sum.
    """
    if not isinstance(system.tail, PeriodicTail):
        raise HorizonError("closed-form tail series requires a periodic tail")
    p = len(system.prefix)
    start = max(after, p)
    total = Fraction(0)
    b = system.level_product(after)
    for k in range(after + 1, start + 1):
        lev = system.level(k)
        b *= lev.base
        total += Fraction(numer(lev), b)
    # one full period starting at `start`; later blocks shrink by 1/P
    block = Fraction(0)
    b = system.level_product(start)
    period = 1
    for j, _ in enumerate(system.tail.levels):
        lev = system.level(start + 1 + j)
        b *= lev.base
        period *= lev.base
        block += Fraction(numer(lev), b)
    return total + block * Fraction(period, period - 1)


def check_convergence(system: MoranSystem) -> ConvergenceReport:
    """Decide weak convergence via the series sum_n N_n / B_n."""
    tail = system.tail
    if tail is None:
        total = _prefix_series(system, len(system.prefix), lambda l: l.count)
        return ConvergenceReport(
            CONVERGENT, total, FINITE_PREFIX,
            note="finite prefix only; the infinite model is unspecified")
    if isinstance(tail, PeriodicTail):
        total = periodic_tail_series(system, 0, lambda l: l.count)
        return ConvergenceReport(CONVERGENT, total, GEOMETRIC_RATIO)
    # formula tail: N_n = max(2, round(c * rho**n)), constant base b
    p = len(system.prefix)
    if tail.rho >= tail.base:
        return ConvergenceReport(
            DIVERGENT, None, NONVANISHING_TERMS,
            note="terms N_n/B_n are bounded below for rho >= b")
    # ratio test: upper bound via N_n <= 2 + c*rho**n
    prefix_sum = _prefix_series(system, p, lambda l: l.count)
    bp = system.level_product(p)
    b, c, rho = tail.base, tail.c, tail.rho
    bound = (prefix_sum
             + Fraction(2, bp * (b - 1))
             + (c * rho**p / bp) * (rho / (b - rho)))
    return ConvergenceReport(CONVERGENT, bound, RATIO_TEST,
                             note="total is an upper bound, not a closed form")


def support_info(system: MoranSystem, n: Optional[int]) -> SupportInfo:
    """Support diameter of the window 1..n (n=None means infinity)."""
    weight = lambda lev: (lev.count - 1) * lev.scale
    if n is None:
        if not isinstance(system.tail, PeriodicTail):
            raise HorizonError("infinite support requires a periodic tail")
        diameter = periodic_tail_series(system, 0, weight)
        return SupportInfo(diameter, Fraction(0), Fraction(0))
    diameter = _prefix_series(system, n, weight)
    resolution = Fraction(system.level(n).scale, system.level_product(n))
    return SupportInfo(diameter, Fraction(0), resolution)


# ---------------------------------------------------------------------------
# JSON (de)serialization


def _parse_levels(obj, where: str) -> tuple[DigitLevel, ...]:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    for key in ("b", "N"):
        if key not in obj:
            raise ParseError(f"{where}: missing array {key!r}")
    bases, counts = obj["b"], obj["N"]
    scales = obj.get("scale", [1] * len(bases))
    if not (isinstance(bases, list) and isinstance(counts, list)
            and isinstance(scales, list)):
        raise ParseError(f"{where}: b, N, scale must be arrays")
    if not len(bases) == len(counts) == len(scales):
        raise ParseError(f"{where}: b, N, scale lengths differ")
    levels = []
    for b, n, a in zip(bases, counts, scales):
        if not all(isinstance(v, int) and not isinstance(v, bool)
                   for v in (b, n, a)):
            raise ParseError(f"{where}: levels must be integers")
        try:
            levels.append(DigitLevel(b, n, a))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
    return tuple(levels)


def parse_system(text: str) -> MoranSystem:
    """Parse the canonical JSON system document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "prefix" not in doc:
        raise ParseError("document must be an object with a 'prefix' key")
    prefix = _parse_levels(doc["prefix"], "prefix")
    if "tail" not in doc:
        raise ParseError("document must carry a 'tail' object")
    tail_doc = doc["tail"]
    if not isinstance(tail_doc, dict) or "kind" not in tail_doc:
        raise ParseError("tail must be an object with a 'kind' key")
    kind = tail_doc["kind"]
    tail: Tail
    if kind == "none":
        tail = None
    elif kind == "periodic":
        tail = PeriodicTail(_parse_levels(tail_doc, "tail"))
    elif kind == "formula":
        for key in ("b", "c", "rho"):
            if key not in tail_doc:
                raise ParseError(f"formula tail: missing {key!r}")
        b = tail_doc["b"]
        if not isinstance(b, int) or isinstance(b, bool):
            raise ParseError("formula tail: b must be an integer")
        try:
            tail = FormulaTail(b, parse_rational(tail_doc["c"]),
                               parse_rational(tail_doc["rho"]))
        except ValueError as exc:
            raise ParseError(f"formula tail: {exc}") from exc
    else:
        raise ParseError(f"unknown tail kind {kind!r}")
    try:
        return MoranSystem(prefix, tail)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _levels_doc(levels: tuple[DigitLevel, ...]) -> dict:
    doc = {"b": [l.base for l in levels], "N": [l.count for l in levels]}
    if any(l.scale != 1 for l in levels):
        doc["scale"] = [l.scale for l in levels]
    return doc


def _rational_doc(x: Fraction):
    return x.numerator if x.denominator == 1 else format_rational(x)


def serialize_system(system: MoranSystem) -> str:
    """Canonical single-line JSON; parse_system(serialize_system(s)) == s."""
    doc = {"prefix": _levels_doc(system.prefix)}
    if system.tail is None:
        doc["tail"] = {"kind": "none"}
    elif isinstance(system.tail, PeriodicTail):
        doc["tail"] = {"kind": "periodic", **_levels_doc(system.tail.levels)}
    else:
        doc["tail"] = {"kind": "formula", "b": system.tail.base,
                       "c": _rational_doc(system.tail.c),
                       "rho": _rational_doc(system.tail.rho)}
    return json.dumps(doc, separators=(",", ":"))
