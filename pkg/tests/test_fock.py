import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coherent_amp.errors import DimensionMismatchError, DimensionOverflowError, InvalidInputError
from coherent_amp.fock import (
    CoherentLabel,
    TruncationConfig,
    coherent_vector,
    fock_dim,
    inner_product,
    normalize_phase,
    state_matrix,
    truncation_dim,
)
from coherent_amp.geometry import overlap

# high-precision reference values (direct Fock sums with factorials)
TAIL_ALPHA1_GE5 = 0.0036598468273437123
TAIL_ALPHA1_GE6 = 0.00059418481758169300
OVERLAP_1_MINUS1 = 0.13533528323661269189
OVERLAP_VAC_1 = 0.6065306597126334236

amps = st.floats(0.0, 4.0)
phases = st.floats(-10.0, 10.0)


def test_phase_normalized_into_range():
    assert CoherentLabel(1.0, -math.pi / 2).phase == pytest.approx(1.5 * math.pi)
    assert CoherentLabel(1.0, 2 * math.pi).phase == 0.0
    assert 0.0 <= normalize_phase(-1e-300) < 2 * math.pi


def test_label_equality_after_normalization():
    assert CoherentLabel(1.0, 0.5) == CoherentLabel(1.0, 0.5 + 2 * math.pi)
    assert CoherentLabel(0.0, 1.0) == CoherentLabel(0.0, 2.0)
    assert hash(CoherentLabel(0.0, 1.0)) == hash(CoherentLabel(0.0, 3.0))
    assert CoherentLabel(1.0, 0.0) != CoherentLabel(1.0, 1.0)


@pytest.mark.parametrize("amp", [-0.1, math.inf, math.nan])
def test_label_rejects_bad_amplitude(amp):
    with pytest.raises(InvalidInputError):
        CoherentLabel(amp, 0.0)


def test_from_complex_round_trip():
    z = complex(-0.3, 1.7)
    assert CoherentLabel.from_complex(z).value == pytest.approx(z, abs=1e-15)


def test_truncation_vacuum_is_zero():
    assert truncation_dim([CoherentLabel(0.0)], TruncationConfig(tail_epsilon=1e-3)) == 0


def test_truncation_alpha_one_matches_poisson_tail():
    # P(n >= 6) < 1e-3 <= P(n >= 5), so the cutoff is 5
    assert TAIL_ALPHA1_GE6 < 1e-3 <= TAIL_ALPHA1_GE5
    assert truncation_dim([CoherentLabel(1.0)], TruncationConfig(tail_epsilon=1e-3)) == 5


def test_truncation_dominated_by_largest_amplitude():
    cfg = TruncationConfig(tail_epsilon=1e-9)
    both = truncation_dim([CoherentLabel(1.0), CoherentLabel(2.0, 1.0)], cfg)
    assert both == truncation_dim([CoherentLabel(2.0)], cfg)


def test_truncation_overflow_and_bad_config():
    with pytest.raises(DimensionOverflowError):
        truncation_dim([CoherentLabel(30.0)], TruncationConfig(max_dim=50))
    for eps in (0.0, 1.0, -1e-3):
        with pytest.raises(InvalidInputError):
            TruncationConfig(tail_epsilon=eps)


def test_explicit_dim_is_vector_length():
    assert fock_dim([CoherentLabel(1.0)], TruncationConfig(explicit_dim=7)) == 7


def test_vacuum_vector():
    v = coherent_vector(CoherentLabel(0.0), 5)
    assert np.array_equal(v, np.array([1, 0, 0, 0, 0], dtype=complex))


def test_truncated_overlap_matches_closed_form():
    u = coherent_vector(CoherentLabel(1.0, 0.0), 40)
    v = coherent_vector(CoherentLabel(1.0, math.pi), 40)
    assert abs(inner_product(u, v) - OVERLAP_1_MINUS1) < 1e-10
    vac = coherent_vector(CoherentLabel(0.0), 40)
    assert abs(inner_product(vac, u) - OVERLAP_VAC_1) < 1e-10


def test_inner_product_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        inner_product(np.ones(3), np.ones(4))


def test_recurrence_matches_factorials():
    z = 1.3 * complex(math.cos(0.7), math.sin(0.7))
    v = coherent_vector(CoherentLabel(1.3, 0.7), 21)
    direct = np.array([math.exp(-1.3**2 / 2) * z**n / math.sqrt(math.factorial(n)) for n in range(21)])
    assert np.max(np.abs(v - direct) / np.abs(direct)) < 1e-12


def test_large_photon_numbers_do_not_overflow():
    v = coherent_vector(CoherentLabel(15.0), 600)
    assert np.all(np.isfinite(v))
    assert abs(np.vdot(v, v).real - 1.0) < 1e-12


@given(amps, phases, st.sampled_from([1e-6, 1e-9, 1e-12]))
def test_truncated_norm_within_tail(a, th, eps):
    lab = CoherentLabel(a, th)
    v = coherent_vector(lab, fock_dim([lab], TruncationConfig(tail_epsilon=eps)))
    norm2 = np.vdot(v, v).real
    assert norm2 <= 1 + 1e-12
    assert 1 - norm2 < eps


@given(amps, phases, amps, phases)
def test_truncated_inner_product_converges(a1, t1, a2, t2):
    eps = 1e-12
    la, lb = CoherentLabel(a1, t1), CoherentLabel(a2, t2)
    dim = fock_dim([la, lb], TruncationConfig(tail_epsilon=eps))
    got = inner_product(coherent_vector(la, dim), coherent_vector(lb, dim))
    assert abs(got - overlap(la, lb)) < 10 * eps


@given(amps, phases, amps, phases)
def test_inner_product_hermitian(a1, t1, a2, t2):
    m = state_matrix([CoherentLabel(a1, t1), CoherentLabel(a2, t2)], 30)
    assert inner_product(m[0], m[1]) == pytest.approx(np.conj(inner_product(m[1], m[0])), abs=1e-15)
    assert inner_product(m[0], m[0]).real >= 0
