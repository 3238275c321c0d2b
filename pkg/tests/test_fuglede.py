import itertools
import json
from fractions import Fraction as F

import pytest

from moran.fourier import MeasureWindow
from moran.fuglede import convolve_uniform_check, fuglede_report
from moran.spectra import spectrum_search
from moran.system import parse_system
from moran.tiling import iterated_digits


def _sys(b, n):
    return parse_system(json.dumps(
        {"prefix": {"b": list(b), "N": list(n)}, "tail": {"kind": "none"}}))


def test_convolve_examples():
    assert convolve_uniform_check((0, 1, 4, 5), (0, 2), 8)
    assert not convolve_uniform_check((0, 1, 3, 4), (0, 2), 8)  # s=3 twice
    assert convolve_uniform_check((0,), (0,), 1)
    assert not convolve_uniform_check((0, 1), (0, 1), 4)        # misses 3


def test_report_quarter():
    rep = fuglede_report(_sys((4, 4), (2, 2)), 2)
    assert str(rep.verdict) == "Spectral"
    assert rep.interval == (F(0), F(1, 2))
    assert rep.certificate.length == 8
    assert rep.kolmogorov_distance == F(1, 8)
    assert rep.convolution_uniform
    assert rep.spectrum.elements == (F(0), F(2), F(8), F(10))


def test_report_not_spectral():
    rep = fuglede_report(_sys((2, 3), (2, 2)), 2)
    assert str(rep.verdict) == "NotSpectral(2)"
    assert rep.spectrum is None and rep.complement is None
    assert rep.convolution_uniform is None


def test_report_mixed():
    rep = fuglede_report(_sys((4, 6), (3, 2)), 2)
    assert str(rep.verdict) == "Spectral"
    assert rep.interval == (F(0), F(3, 4))
    assert rep.certificate.length == 18
    assert rep.kolmogorov_distance == F(1, 18)


def test_kolmogorov_gap_matches_cdf_oracle():
    # sup gap between the step CDF of uniform {0..L-1}/B_n and
    # the linear CDF of Lebesgue on [0, N_1/b_1], computed at jump points
    sys_ = _sys((4, 4), (2, 2))
    rep = fuglede_report(sys_, 2)
    big = sys_.level_product(2)
    length = rep.certificate.length
    slope = 1 / rep.interval[1]  # CDF slope of Lebesgue on the interval
    worst = F(0)
    for j in range(length):
        x = F(j, big)
        lower = abs(F(j, length) - x * slope)       # just before the jump
        upper = abs(F(j + 1, length) - x * slope)   # just after
        worst = max(worst, lower, upper)
    assert worst == rep.kolmogorov_distance == F(1, 8)


def test_distance_strictly_decreasing_in_level():
    sys_ = _sys((4, 4, 4, 4), (2, 2, 2, 2))
    dists = [fuglede_report(sys_, n).kolmogorov_distance for n in (1, 2, 3, 4)]
    assert all(a > b for a, b in zip(dists, dists[1:]))
    assert dists[-1] == F(1, 2 * 4 ** 3)


def test_three_way_consistency_sweep():
    # spectral verdict <=> search finds a spectrum <=> convolution uniform
    for b2, n1, n2 in itertools.product(range(2, 6), range(2, 6), range(2, 6)):
        sys_ = _sys((4, b2), (n1, n2))
        rep = fuglede_report(sys_, 2)
        spectral = str(rep.verdict) == "Spectral"
        found = spectrum_search(MeasureWindow(sys_, 1, 2)) is not None
        assert spectral == found, (b2, n1, n2)
        if spectral:
            assert rep.convolution_uniform


def test_complement_factor_is_itself_spectral():
    # when the convolution identity holds, the discrete complement factor
    # admits a spectrum of its own
    for b, n in (((4, 4), (2, 2)), ((6, 6), (3, 3)), ((4, 6), (2, 3))):
        rep = fuglede_report(_sys(b, n), 2)
        assert rep.convolution_uniform
        comp = rep.complement
        assert iterated_digits(comp, 2).direct_sum
        assert spectrum_search(MeasureWindow(comp, 1, 2)) is not None


def test_report_rejects_nonunit_scales():
    scaled = parse_system(
        '{"prefix": {"b": [4, 4], "N": [2, 2], "scale": [2, 1]},'
        ' "tail": {"kind": "none"}}')
    with pytest.raises(ValueError):
        fuglede_report(scaled, 2)
