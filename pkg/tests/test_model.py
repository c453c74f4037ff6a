import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton_hom.model import (PairSample, PhaseConfig, bs_transform, detuning_phase,
                                output_fields, output_intensities, phase_ledger)

PI = math.pi
BS_MATRIX = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
angles = st.floats(-4 * PI, 4 * PI, allow_nan=False)


def test_bs_single_port_column():
    c, d = bs_transform(1, 0)
    assert c == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert d == pytest.approx(1j / math.sqrt(2), abs=1e-15)


def test_bs_zero_input():
    assert bs_transform(0, 0) == (0, 0)


def test_bs_matches_matrix_product():
    out = np.array(bs_transform(1, 1j))
    ref = BS_MATRIX @ np.array([1, 1j])
    np.testing.assert_allclose(out, ref, atol=1e-15)
    assert abs(out[0]) ** 2 + abs(out[1]) ** 2 == pytest.approx(2.0, abs=1e-12)


def test_bs_unitarity_1000_pairs():
    rng = np.random.default_rng(2024)
    a = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    b = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    c, d = bs_transform(a, b)
    np.testing.assert_allclose(abs(c) ** 2 + abs(d) ** 2, abs(a) ** 2 + abs(b) ** 2, atol=1e-12)


@given(finite, finite, finite, finite)
def test_bs_unitarity_property(ar, ai, br, bi):
    a, b = complex(ar, ai), complex(br, bi)
    c, d = bs_transform(a, b)
    total = abs(a) ** 2 + abs(b) ** 2
    assert abs(c) ** 2 + abs(d) ** 2 == pytest.approx(total, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("df, tau, conv, expected", [
    (1e9, 0.0, "paper", 0.0),
    (0.5, 1.0, "paper", 0.5),
    (0.5, 1.0, "si", PI),
])
def test_detuning_phase(df, tau, conv, expected):
    assert detuning_phase(df, tau, conv) == pytest.approx(expected, abs=1e-15)


def test_detuning_phase_rejects_unknown_convention():
    with pytest.raises(ValueError):
        detuning_phase(1.0, 1.0, "degrees")


def test_phase_config_validation():
    with pytest.raises(ValueError):
        PhaseConfig(xi=math.nan)
    with pytest.raises(ValueError):
        PhaseConfig(convention="rad")
    assert PhaseConfig().zeta == pytest.approx(PI / 2)


def test_pair_sample_weight_non_negative():
    with pytest.raises(ValueError):
        PairSample(1.0, -0.1)


def _brute_fields(xi, zeta, delay_phase):
    """Independent route: explicit 2x2 matrix products on both input columns."""
    theta = zeta - xi - 2 * delay_phase
    ab = BS_MATRIX @ np.array([np.exp(1j * xi), np.exp(1j * (zeta - 2 * delay_phase))])
    ba = BS_MATRIX @ np.array([np.exp(1j * theta), 1.0])
    return ab[0], ab[1], ba[0], ba[1]


def test_fields_dip_configuration():
    q = output_fields(PhaseConfig(0.0, PI / 2), 1e9, 0.0)
    assert abs(q.e_c) ** 2 == pytest.approx(0.0, abs=1e-15)
    assert abs(q.e_d) ** 2 == pytest.approx(2.0, abs=1e-15)


def test_fields_balanced_split():
    q = output_fields(PhaseConfig(0.0, 0.0), 1e9, 0.0)
    assert abs(q.e_c) ** 2 == pytest.approx(1.0, abs=1e-15)
    assert abs(q.e_d) ** 2 == pytest.approx(1.0, abs=1e-15)


def test_fields_peak_configuration_balanced_per_term():
    # theta = zeta - xi = 0: each term splits evenly (1 - sin 0 = 1), checked by brute force
    q = output_fields(PhaseConfig(PI / 2, PI / 2), 1e9, 0.0)
    ref = _brute_fields(PI / 2, PI / 2, 0.0)
    np.testing.assert_allclose(q, ref, atol=1e-15)
    assert abs(q.e_c) ** 2 == pytest.approx(1.0, abs=1e-15)
    assert abs(q.e_d) ** 2 == pytest.approx(1.0, abs=1e-15)


def test_fields_match_closed_forms():
    xi, zeta, delay = 0.3, 1.1, 0.7
    q = output_fields(PhaseConfig(xi, zeta), delay, 1.0)
    theta = zeta - xi - 2 * delay
    r2 = 1 / math.sqrt(2)
    assert q.e_c == pytest.approx(np.exp(1j * xi) * (1 + 1j * np.exp(1j * theta)) * r2, abs=1e-15)
    assert q.e_d == pytest.approx(1j * np.exp(1j * xi) * (1 - 1j * np.exp(1j * theta)) * r2, abs=1e-15)
    assert q.e_c2 == pytest.approx((np.exp(1j * theta) + 1j) * r2, abs=1e-15)
    assert q.e_d2 == pytest.approx(1j * (np.exp(1j * theta) - 1j) * r2, abs=1e-15)


@pytest.mark.parametrize("xi, zeta, delay, expected", [
    (0.0, PI / 2, 0.0, (0.0, 2.0, 2.0, 0.0)),
    (0.0, 0.0, 0.0, (1.0, 1.0, 1.0, 1.0)),
    (PI / 2, PI / 2, PI / 8, (1 + math.sqrt(2) / 2, 1 - math.sqrt(2) / 2,
                              1 - math.sqrt(2) / 2, 1 + math.sqrt(2) / 2)),
])
def test_intensity_examples(xi, zeta, delay, expected):
    q = output_intensities(PhaseConfig(xi, zeta), delay, 1.0)
    np.testing.assert_allclose(q, expected, atol=1e-12)
    f = output_fields(PhaseConfig(xi, zeta), delay, 1.0)
    np.testing.assert_allclose([abs(e) ** 2 for e in f], expected, atol=1e-12)


@settings(max_examples=300)
@given(angles, angles, angles)
def test_intensity_equals_field_modulus(xi, zeta, delay):
    cfg = PhaseConfig(xi, zeta)
    q = output_intensities(cfg, delay, 1.0)
    f = output_fields(cfg, delay, 1.0)
    np.testing.assert_allclose(q, [abs(e) ** 2 for e in f], atol=1e-12)
    assert all(-1e-12 <= v <= 2 + 1e-12 for v in q)


@given(angles, angles, angles)
def test_energy_and_cross_term_cancellation(xi, zeta, delay):
    q = output_intensities(PhaseConfig(xi, zeta), delay, 1.0)
    assert q.i_c + q.i_d == pytest.approx(2.0, abs=1e-12)
    assert q.i_c2 + q.i_d2 == pytest.approx(2.0, abs=1e-12)
    assert q.i_c + q.i_c2 == pytest.approx(2.0, abs=1e-12)
    assert q.i_d + q.i_d2 == pytest.approx(2.0, abs=1e-12)


@given(angles, angles)
def test_zeta_branch_symmetry(xi, delay):
    plus = output_intensities(PhaseConfig(xi, PI / 2), delay, 1.0)
    minus = output_intensities(PhaseConfig(xi, -PI / 2), delay, 1.0)
    expected = math.sin(xi + 2 * delay) ** 2
    assert plus.i_c * plus.i_d == pytest.approx(minus.i_c * minus.i_d, abs=1e-12)
    assert plus.i_c * plus.i_d == pytest.approx(expected, abs=1e-12)


def test_vectorised_matches_scalar():
    cfg = PhaseConfig(0.4, 1.2)
    df = np.linspace(-3e9, 3e9, 7)
    vec = output_intensities(cfg, df, 2e-10)
    for k, d in enumerate(df):
        sc = output_intensities(cfg, float(d), 2e-10)
        assert [v[k] for v in vec] == pytest.approx(list(sc), abs=1e-15)


@pytest.mark.parametrize("xi, sign, expected", [
    (0.0, "+", (PI, 0.0)),
    (0.0, "-", (0.0, PI)),
    (PI / 2, "+", (3 * PI / 2, PI / 2)),
    (PI / 2, "-", (PI / 2, 3 * PI / 2)),
])
def test_phase_ledger_enumeration(xi, sign, expected):
    assert phase_ledger(xi, sign) == expected


def test_phase_ledger_rejects_other_xi():
    with pytest.raises(ValueError):
        phase_ledger(PI / 4, "+")
    with pytest.raises(ValueError):
        phase_ledger(0.0, "0")
