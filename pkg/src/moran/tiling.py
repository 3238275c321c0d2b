"""Iterated digit sets and integer-tile decisions.

The tile verdict is three-valued: a verified (period, complement) pair, a
cyclotomic non-tile certificate (the necessary condition that the product
of Phi_{p^a}(1) over prime-power cyclotomic divisors of the mask
polynomial equals the set size), or an honest Unknown up to the searched
period bound.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import InvariantError, NotSpectralError
from .system import DigitLevel, MoranSystem

TILE = "Tile"
NOT_TILE = "NotTile"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IteratedDigitSet:
    """D_n = D_n + b_n D_{n-1} + ... + b_2...b_n D_1 as a sorted multiset."""

    level: int
    elements: tuple[int, ...]
    direct_sum: bool
    span: int  # max element + 1

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.elements)))


def iterated_digits(system: MoranSystem, n: int) -> IteratedDigitSet:
    b_n = system.level_product(n)
    sums = Counter({0: 1})
    for k in range(1, n + 1):
        lev = system.level(k)
        step = lev.scale * (b_n // system.level_product(k))
        new: Counter = Counter()
        for v, mult in sums.items():
            for d in range(lev.count):
                new[v + d * step] += mult
        sums = new
    elements = tuple(sorted(sums.elements()))
    direct = all(m == 1 for m in sums.values())
    return IteratedDigitSet(n, elements, direct, elements[-1] + 1)


@dataclass(frozen=True)
class ComplementCertificate:
    length: int  # L = N_1 * b_2 ... b_n; D_n (+) C_n = {0, ..., L-1}
    verified: bool


def canonical_complement(system: MoranSystem, n: int
                         ) -> tuple[MoranSystem, ComplementCertificate]:
    """Complement system with levels C_1 = {0}, C_j = N_j * {0..r_j - 1}.

    Requires unit scales and N_j | b_j for 2 <= j <= n; the direct-sum
    identity D_n (+) C_n = {0, ..., L-1} is verified before returning.
    """
    for j in range(1, n + 1):
        if system.level(j).scale != 1:
            raise ValueError("canonical complement requires unit scales")
    for j in range(2, n + 1):
        lev = system.level(j)
        if lev.base % lev.count != 0:
            raise NotSpectralError(j)
    first = system.level(1)
    levels = [DigitLevel(first.base, 1, 1)]
    length = first.count
    for j in range(2, n + 1):
        lev = system.level(j)
        levels.append(DigitLevel(lev.base, lev.base // lev.count, lev.count))
        length *= lev.base
    complement = MoranSystem(tuple(levels))
    digits = iterated_digits(system, n)
    cdigits = iterated_digits(complement, n)
    counts: Counter = Counter()
    for d in digits.elements:
        for c in cdigits.elements:
            counts[d + c] += 1
    if (len(counts) != length or set(counts) != set(range(length))
            or any(m != 1 for m in counts.values())):
        raise InvariantError("complement certificate failed: the sum is not "
                             f"{{0, ..., {length - 1}}}")
    return complement, ComplementCertificate(length, True)


# ---------------------------------------------------------------------------
# cyclotomic machinery (exact integer polynomials, low-to-high coefficients)


def _poly_divide_exact(num: Sequence[int],
                       den: Sequence[int]) -> Optional[list[int]]:
    """Quotient of num / den over Z if the division is exact, else None."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    quotient = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        if num[i] == 0:
            continue
        if num[i] % lead != 0:
            return None
        q = num[i] // lead
        quotient[i - dn] = q
        for j, c in enumerate(den):
            num[i - dn + j] -= q * c
    return None if any(num[:dn]) else quotient


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial (quotient recurrence)."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divide_exact(poly, cyclotomic(d))
    return tuple(poly)


def _prime_power_divisors(mask: Sequence[int], max_exp: int) -> list[int]:
    """Prime powers p^a with Phi_{p^a} | mask, scanned by degree bound.

    Any divisor of the mask polynomial has degree <= max exponent, so
    phi(p^a) <= max_exp bounds the scan.
    """
    found = []
    p = 2
    while p - 1 <= max_exp:
        if all(p % q for q in range(2, int(math.isqrt(p)) + 1)):
            power = p
            while (power // p) * (p - 1) <= max_exp:
                if _poly_divide_exact(mask, cyclotomic(power)) is not None:
                    found.append(power)
                power *= p
        p += 1
    return found


@dataclass(frozen=True)
class TileVerdict:
    kind: str
    period: Optional[int] = None
    complement: Optional[tuple[int, ...]] = None
    certificate: Optional[str] = None  # NotTile: "T1" or "window"
    mask_value: Optional[int] = None  # D(1) = #D
    phi_product: Optional[int] = None
    window: Optional[int] = None
    searched_up_to: Optional[int] = None


def _search_complement(digits: tuple[int, ...], m: int) -> Optional[list[int]]:
    """Backtracking complement search in Z_m, least-uncovered-first fill."""
    digit_set = set(digits)
    masks = [0] * m
    for t in range(m):
        masks[t] = sum(1 << ((d + t) % m) for d in digits)
    full = (1 << m) - 1

    def fill(cover: int, chosen: list[int]) -> Optional[list[int]]:
        if cover == full:
            return chosen
        hole = (~cover & full)
        s = (hole & -hole).bit_length() - 1  # least uncovered residue
        for t in sorted({(s - d) % m for d in digit_set}):
            mask = masks[t]
            if mask & cover:
                continue
            result = fill(cover | mask, chosen + [t])
            if result is not None:
                return result
        return None

    return fill(0, [])


def _window_refutation(dset: tuple[int, ...], width: int,
                       node_budget: int = 200_000) -> bool:
    """True if no packing of translates of dset can cover [0, width).

    Any tiling of some Z_m extends periodically to a tiling of Z; after
    shifting so the translate through the origin sits at 0, the tiling
    restricts to a non-overlapping family of translates covering every
    position in [0, width).  Failure of this relaxed covering search
    (overlaps and coverage below 0 are ignored) is therefore a sound
    proof that dset is not an integer tile.  Returns False when a
    covering exists or the node budget runs out (inconclusive).
    """
    dmask = sum(1 << d for d in dset)
    full = (1 << width) - 1
    budget = [node_budget]

    def cover(bits: int):  # True / False / None (budget exhausted)
        if bits & full == full:
            return True
        budget[0] -= 1
        if budget[0] < 0:
            return None
        inv = ~bits
        u = (inv & -inv).bit_length() - 1  # least uncovered position
        inconclusive = False
        for d in dset:
            t = u - d
            translate = dmask << t if t >= 0 else dmask >> -t
            if translate & bits:
                continue
            result = cover(bits | translate)
            if result:
                return True
            if result is None:
                inconclusive = True
        return None if inconclusive else False

    return cover(dmask) is False


def is_integer_tile(digits: Sequence[int], m_max: int = 256) -> TileVerdict:
    """Decide whether a finite set of nonnegative integers tiles some Z_m.

    NotTile verdicts carry the cyclotomic certificate; Tile verdicts are
    re-verified (each residue covered exactly once) before returning.
    """
    dset = sorted(set(digits))
    if not dset or dset[0] != 0 or any(d < 0 for d in dset):
        raise ValueError("digit set must contain 0 and be nonnegative")
    size = len(dset)
    if size == 1:
        return TileVerdict(TILE, period=1, complement=(0,),
                           mask_value=1, phi_product=1)
    top = dset[-1]
    mask = [0] * (top + 1)
    for d in dset:
        mask[d] = 1
    phi_product = 1
    for power in _prime_power_divisors(mask, top):
        # Phi_{p^a}(1) = p
        phi_product *= min(p for p in range(2, power + 1) if power % p == 0)
    if phi_product != size:
        return TileVerdict(NOT_TILE, certificate="T1",
                           mask_value=size, phi_product=phi_product)
    width = 2 * (top + 1)
    if _window_refutation(tuple(dset), width):
        return TileVerdict(NOT_TILE, certificate="window", window=width)
    for m in range(size, m_max + 1, size):
        reduced = tuple(sorted({d % m for d in dset}))
        if len(reduced) != size:
            continue
        complement = _search_complement(reduced, m)
        if complement is None:
            continue
        counts = Counter((d + t) % m for d in reduced for t in complement)
        if set(counts) != set(range(m)) or any(c != 1 for c in counts.values()):
            raise InvariantError("tile verdict failed re-verification")
        return TileVerdict(TILE, period=m, complement=tuple(sorted(complement)),
                           mask_value=size, phi_product=phi_product)
    return TileVerdict(UNKNOWN, searched_up_to=m_max)


@dataclass(frozen=True)
class RescaledTiling:
    scaled: tuple[int, ...]  # (r * A) mod m
    complement: tuple[int, ...]
    period: int


def _verify_tiling(a: Sequence[int], b: Sequence[int], m: int) -> bool:
    counts = Counter((x + y) % m for x in a for y in b)
    return (len(a) * len(b) == m and set(counts) == set(range(m))
            and all(c == 1 for c in counts.values()))


def tijdeman_rescale(a: Sequence[int], b: Sequence[int], m: int,
                     r: int) -> RescaledTiling:
    """Rescale the tile A by r coprime to #A; rA (+) B = Z_m is re-verified.

    The rescaled partition is guaranteed by Tijdeman's theorem, so a
    verification failure is reported as an invariant breach.
    """
    a = tuple(sorted(set(x % m for x in a)))
    b = tuple(sorted(set(x % m for x in b)))
    if 0 not in a or 0 not in b:
        raise ValueError("both sets must contain 0")
    if math.gcd(r, len(a)) != 1:
        raise ValueError(f"r={r} shares a factor with #A={len(a)}")
    if not _verify_tiling(a, b, m):
        raise ValueError("input is not a tiling of Z_m")
    scaled = tuple(sorted({(r * x) % m for x in a}))
    if len(scaled) != len(a) or not _verify_tiling(scaled, b, m):
        raise InvariantError("rescaled tiling failed verification")
    return RescaledTiling(scaled, b, m)
