"""Three-way equivalence at truncation level: spectrality verdict,
canonical spectrum and complement, exact uniform-convolution identity,
and the Kolmogorov gap to Lebesgue on [0, N_1/b_1]."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .spectra import (SPECTRAL, CandidateSet, SpectralVerdict,
                      canonical_spectrum, truncation_spectral_verdict)
from .system import MoranSystem
from .tiling import ComplementCertificate, canonical_complement, iterated_digits


def convolve_uniform_check(d_elements: Sequence[int], c_elements: Sequence[int],
                           length: int) -> bool:
    """Exact counting: every s in {0, ..., L-1} has exactly one writing
    s = d + c, and nothing falls outside."""
    counts: Counter = Counter()
    for d in d_elements:
        for c in c_elements:
            counts[d + c] += 1
    return (set(counts) == set(range(length))
            and all(m == 1 for m in counts.values()))


@dataclass(frozen=True)
class FugledeReport:
    level: int
    verdict: SpectralVerdict
    interval: tuple[Fraction, Fraction]  # [0, N_1/b_1]
    spectrum: Optional[CandidateSet] = None
    complement: Optional[MoranSystem] = None
    certificate: Optional[ComplementCertificate] = None
    convolution_uniform: Optional[bool] = None
    kolmogorov_distance: Optional[Fraction] = None  # exact bound 1/L


def fuglede_report(system: MoranSystem, n: int) -> FugledeReport:
    """Run the full truncation-level equivalence at level n (unit scales).

    When spectral: canonical spectrum, certified complement, the exact
    convolution identity D_n (+) C_n = {0, ..., L-1}, and the Kolmogorov
    gap 1/L between the discrete uniform on {0..L-1}/B_n and Lebesgue on
    [0, N_1/b_1].
    """
    for j in range(1, n + 1):
        if system.level(j).scale != 1:
            raise ValueError("fuglede report requires unit scales")
    first = system.level(1)
    interval = (Fraction(0), Fraction(first.count, first.base))
    verdict = truncation_spectral_verdict(system, n)
    if verdict.kind != SPECTRAL:
        return FugledeReport(n, verdict, interval)
    spectrum = canonical_spectrum(system, n)
    complement, cert = canonical_complement(system, n)
    digits = iterated_digits(system, n)
    cdigits = iterated_digits(complement, n)
    uniform = convolve_uniform_check(digits.elements, cdigits.elements,
                                     cert.length)
    return FugledeReport(n, verdict, interval, spectrum, complement, cert,
                         uniform, Fraction(1, cert.length))
