import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coherent_amp.fock import CoherentLabel
from coherent_amp.geometry import WignerGrid, distance, gram, overlap, psd_check, wigner_center, wigner_grid

# high-precision reference values (direct Fock sums)
OVERLAP_1_MINUS1 = 0.13533528323661269189
OVERLAP_HALF_PM = 0.6065306597126334236
OVERLAP_GENERIC = complex(0.15675819437521270923, -0.11916826896428860944)  # <0.3-1.1i | -0.7+0.4i>

labels = st.builds(CoherentLabel, st.floats(0.0, 3.0), st.floats(0.0, 2 * math.pi))


def test_overlap_values():
    assert overlap(CoherentLabel(0.0), CoherentLabel(0.0)) == 1
    one, minus = CoherentLabel(1.0, 0.0), CoherentLabel(1.0, math.pi)
    assert overlap(one, minus) == pytest.approx(OVERLAP_1_MINUS1, abs=1e-15)
    assert abs(overlap(one, minus)) ** 2 == pytest.approx(math.exp(-4), rel=1e-14)
    a = CoherentLabel.from_complex(complex(0.3, -1.1))
    b = CoherentLabel.from_complex(complex(-0.7, 0.4))
    assert overlap(a, b) == pytest.approx(OVERLAP_GENERIC, abs=1e-15)


def test_distance_values():
    assert distance(CoherentLabel(1.0, 0.0), CoherentLabel(1.0, math.pi)) == pytest.approx(4.0, abs=1e-15)
    assert distance(CoherentLabel(1.0, 0.0), CoherentLabel(1.0, math.pi / 2)) == pytest.approx(2.0, abs=1e-15)


def test_gram_examples():
    g = gram([CoherentLabel(1.2, 0.4)])
    assert g.entries.shape == (1, 1) and g.entries[0, 0] == 1
    g = gram([CoherentLabel(0.5, 0.0), CoherentLabel(0.5, math.pi)])
    assert g.entries[0, 1] == pytest.approx(OVERLAP_HALF_PM, abs=1e-15)


def test_psd_check_examples():
    v = psd_check(np.eye(3))
    assert v.is_psd and v.min_eigenvalue == pytest.approx(1.0)
    v = psd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not v.is_psd and v.min_eigenvalue == pytest.approx(-1.0)


def test_psd_tolerance_scales_with_norm():
    m = np.diag([1e6, -1e-5])
    assert psd_check(m, 1e-10).is_psd
    assert not psd_check(np.diag([1.0, -1e-5]), 1e-10).is_psd


@given(labels, labels)
def test_overlap_distance_identity(a, b):
    assert abs(abs(overlap(a, b)) ** 2 - math.exp(-distance(a, b))) < 1e-12


@given(labels, labels)
def test_distance_symmetric_and_zero_on_equal(a, b):
    assert distance(a, b) == pytest.approx(distance(b, a), abs=1e-15)
    assert distance(a, a) == 0.0


@given(st.lists(labels, min_size=1, max_size=8))
def test_gram_is_hermitian_unit_diagonal_psd(labs):
    g = gram(labs).entries
    assert np.array_equal(g, g.conj().T)
    assert np.all(np.diag(g) == 1)
    assert psd_check(g, 1e-10).is_psd


@given(labels, labels, st.floats(1.0, 3.0))
def test_uniform_gain_scales_distance_quadratically(a, b, g):
    assert distance(a.scaled(g), b.scaled(g)) == pytest.approx(g * g * distance(a, b), rel=1e-12, abs=1e-12)


def test_wigner_vacuum_peak_and_normalization():
    grid = wigner_grid(CoherentLabel(0.0))
    i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    assert grid.xs[i] == pytest.approx(0.0, abs=1e-12) and grid.ps[j] == pytest.approx(0.0, abs=1e-12)
    assert grid.values[i, j] == pytest.approx(1 / math.pi, abs=1e-12)
    assert abs(grid.integral() - 1.0) < 1e-6


def test_wigner_center_follows_amplitude():
    assert wigner_center(CoherentLabel(1.0, 0.0)) == pytest.approx((math.sqrt(2), 0.0))
    grid = wigner_grid(CoherentLabel(1.0, 0.0))
    i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    assert (grid.xs[i], grid.ps[j]) == pytest.approx((math.sqrt(2), 0.0), abs=1e-12)


def test_wigner_serialization_round_trip():
    grid = wigner_grid(CoherentLabel(0.7, 2.0), resolution=11)
    back = WignerGrid.from_json(json.loads(json.dumps(grid.to_json())))
    assert np.array_equal(back.values, grid.values) and back.window == grid.window
    rows = list(grid.csv_rows())
    assert len(rows) == 121 and rows[1][0] == rows[0][0] and rows[1][1] > rows[0][1]
