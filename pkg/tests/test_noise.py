import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvmdi import noise
from cvmdi.channel_plan import FwmTriple, build_configuration, grid_plan
from cvmdi.noise import (
    DetectionParams,
    DwdmParams,
    FwmParams,
    NoiseBudget,
    excess_noise_snu,
    fwm_efficiency,
    fwm_phase_mismatch,
    fwm_product_power,
    fwm_total_power,
    lcxt_power,
    output_power_dbm,
    photon_probability,
    raman_backward,
    raman_forward,
)
from cvmdi.raman import flat_table

from conftest import plan_from_thz

XI_018 = 0.04144653167389282  # 0.18 dB/km in 1/km
P_OUT = 3.981e-6


def ten_channel_plan(power_dbm=-24.0):
    return plan_from_thz([192.1 + 0.1 * k for k in range(10)], power=power_dbm)


# --- power budget ----------------------------------------------------------

@pytest.mark.parametrize("rx,il,expected", [(-32, 8, -24), (-32, 0, -32), (0, 8, 8)])
def test_output_power(rx, il, expected):
    p = DwdmParams(receiver_sensitivity=rx, insertion_loss_system=il, isolation=30,
                   filter_bandwidth=15e9)
    assert output_power_dbm(p) == expected


def test_param_validation():
    with pytest.raises(ValueError):
        DwdmParams(-32, 8, 0, 15e9)
    with pytest.raises(ValueError):
        DwdmParams(-32, 8, 30, 0)
    with pytest.raises(ValueError):
        DetectionParams(0, 0.6, 2)
    with pytest.raises(ValueError):
        FwmParams(-1, 17, 0.056)


# --- Raman -----------------------------------------------------------------

def test_raman_forward_examples(flat_rho):
    plan = ten_channel_plan()
    assert raman_forward(P_OUT, 0, plan, flat_rho, 0.12) == 0
    assert raman_forward(P_OUT, 10, plan, flat_rho, 0.12) == pytest.approx(4.7772e-14, rel=1e-12)
    doubled = plan_from_thz([192.1 + 0.1 * k for k in range(20)])
    assert raman_forward(P_OUT, 10, doubled, flat_rho, 0.12) == pytest.approx(
        2 * raman_forward(P_OUT, 10, plan, flat_rho, 0.12), rel=1e-12)


def test_raman_backward_examples(flat_rho):
    plan = ten_channel_plan()
    got = raman_backward(P_OUT, 10, XI_018, plan, flat_rho, 0.12)
    assert got == pytest.approx(4.915151994218591e-14, rel=1e-12)
    small = raman_backward(P_OUT, 1e-4 / XI_018, XI_018, plan, flat_rho, 0.12)
    fwd = raman_forward(P_OUT, 1e-4 / XI_018, plan, flat_rho, 0.12)
    assert small / fwd == pytest.approx(1.0, abs=1e-8)
    assert raman_backward(P_OUT, 0, XI_018, plan, flat_rho, 0.12) == 0


def test_raman_table_miss_names_pair():
    plan = plan_from_thz([192.1, 192.2])
    narrow = flat_table(1e-9, [1536.61], classical_range_nm=(1530.0, 1540.0))
    with pytest.raises(ValueError, match="does not cover classical"):
        raman_forward(P_OUT, 1, plan, narrow, 0.12)


@settings(max_examples=200)
@given(st.floats(min_value=1e-4, max_value=0.2), st.floats(min_value=1e-3, max_value=50))
def test_raman_ratio_is_sinhc(xi, length):
    plan = ten_channel_plan()
    t = flat_table(3e-9, [1536.61])
    ratio = (raman_backward(P_OUT, length, xi, plan, t, 0.12)
             / raman_forward(P_OUT, length, plan, t, 0.12))
    x = xi * length
    assert ratio == pytest.approx(math.sinh(x) / x, rel=1e-10)
    assert ratio >= 1.0


# --- FWM -------------------------------------------------------------------

def test_phase_mismatch_vanishes(fwm_params):
    lam = 1550e-9
    assert fwm_phase_mismatch(193.1e12, 193.3e12, 193.1e12, lam, fwm_params) == 0
    assert fwm_phase_mismatch(193.3e12, 193.1e12, 193.1e12, lam, fwm_params) == 0


def test_phase_mismatch_value(fwm_params):
    # independent evaluation in ps / nm / km / THz units
    got = fwm_phase_mismatch(193.1e12, 193.2e12, 193.0e12, 1550e-9, fwm_params)
    assert got == pytest.approx(0.01725549284121924, rel=1e-12)


def test_efficiency():
    xi = 4.1447e-5
    assert fwm_efficiency(0.0, xi, 1e4) == pytest.approx(1.0, rel=1e-14)
    # long fiber, delta_beta L = 2 pi: oscillating term suppressed
    L = 1e6
    db = 2 * math.pi / L
    assert fwm_efficiency(db, xi, L) == pytest.approx(xi ** 2 / (xi ** 2 + db ** 2), rel=1e-12)
    assert fwm_efficiency(5e-3, xi, 1e4) == pytest.approx(9.633691109627232e-05, rel=1e-10)
    # zero length limit
    assert fwm_efficiency(5e-3, xi, 0.0) == 1.0
    assert fwm_efficiency(5e-3, xi, 1e-6) == pytest.approx(1.0, rel=1e-6)


def test_product_power(fiber):
    plan = plan_from_thz([193.1, 193.2, 193.0], power=-24.0)
    no_dispersion = FwmParams(nonlinear_coefficient=1.3, dispersion=0.0, dispersion_slope=0.0)
    t = FwmTriple(0, 1, 2, 6)
    assert fwm_product_power(t, plan, fiber, no_dispersion, 10.0) == pytest.approx(
        1.888664425865008e-14, rel=1e-9)
    assert fwm_product_power(t, plan, fiber, no_dispersion, 0.0) == 0.0
    half = plan.with_power(-24.0 - 10 * math.log10(2))
    assert fwm_product_power(t, half, fiber, no_dispersion, 10.0) == pytest.approx(
        fwm_product_power(t, plan, fiber, no_dispersion, 10.0) / 8, rel=1e-12)


def test_total_power_o_band_zero(fiber, fwm_params):
    for cid in (2, 4):
        assert fwm_total_power(build_configuration(cid), fiber, fwm_params, 10.0) == 0.0


def test_total_power_single_triple(fiber, fwm_params):
    from cvmdi.units import frequency_to_wavelength
    plan = plan_from_thz([193.1, 193.2], quantum_nm=frequency_to_wavelength(193.3e12))
    triples = noise.enumerate_fwm_triples(plan)
    assert len(triples) == 1
    assert fwm_total_power(plan, fiber, fwm_params, 7.0) == pytest.approx(
        fwm_product_power(triples[0], plan, fiber, fwm_params, 7.0), rel=1e-13)


def brute_force_fwm(plan, fiber, fwm, length_km, tol=1e9):
    """Independent O(N^3) evaluation of the FWM power sum."""
    f = plan.classical_frequencies
    fq = plan.quantum_frequency
    P = 1e-3 * 10 ** (plan.per_channel_output_power / 10)
    alpha = fiber.attenuation(plan.quantum_wavelength)
    xi = alpha / (10 * math.log10(math.e))  # 1/km
    lam_nm = plan.quantum_wavelength
    c_nm_ps = 2.99792458e5
    total = 0.0
    for i, j, k in itertools.product(range(len(f)), repeat=3):
        if i > j or abs(f[i] + f[j] - f[k] - fq) > tol:
            continue
        d1, d2 = abs(f[i] - f[k]) / 1e12, abs(f[j] - f[k]) / 1e12
        l2c = lam_nm ** 2 / c_nm_ps
        dbeta = 2 * math.pi * l2c * d1 * d2 * (fwm.dispersion + fwm.dispersion_slope * l2c * (d1 + d2))
        a = math.exp(-xi * length_km)
        eta = xi ** 2 / (xi ** 2 + dbeta ** 2) * (
            1 + 4 * a * math.sin(dbeta * length_km / 2) ** 2 / (1 - a) ** 2)
        D = 3 if i == j else 6
        total += (eta * fwm.nonlinear_coefficient ** 2 * D ** 2 * fwm.polarization_factor ** 2
                  * a * (1 - a) ** 2 / (9 * xi ** 2) * P ** 3)
    return total


@pytest.mark.parametrize("cid", [1, 2, 3, 4])
@pytest.mark.parametrize("length", [0.5, 5.0, 25.0])
def test_total_power_brute_force(cid, length, fiber, fwm_params):
    plan = build_configuration(cid)
    expected = brute_force_fwm(plan, fiber, fwm_params, length)
    got = fwm_total_power(plan, fiber, fwm_params, length)
    if expected == 0:
        assert got == 0
    else:
        assert got == pytest.approx(expected, rel=1e-12)


def test_fwm_nonzero_for_embedded_quantum_channel(fiber, fwm_params):
    # 40-channel C-band plan has pumps on both sides of the quantum channel
    assert fwm_total_power(build_configuration(3), fiber, fwm_params, 5.0) > 0
    low_dispersion = FwmParams(1.3, 0.5, 0.0)
    plan = grid_plan(40, 1537.40, -24.0)
    assert (fwm_total_power(plan, fiber, low_dispersion, 5.0)
            > fwm_total_power(plan, fiber, fwm_params, 5.0))


def test_c_band_plan_with_o_band_quantum_has_no_fwm(fiber, fwm_params):
    plan = grid_plan(40, 1310.0, 0.0)
    assert fwm_total_power(plan, fiber, fwm_params, 20.0) == 0.0


# --- crosstalk and detection -----------------------------------------------

def test_lcxt():
    assert lcxt_power(-24, 30) == pytest.approx(3.981071705534972e-9, rel=1e-12)
    assert lcxt_power(-24, 200) < 1e-25
    assert lcxt_power(-24, 0) == pytest.approx(3.981071705534972e-6, rel=1e-12)


def test_photon_probability(detection):
    assert photon_probability(0, 1536.61, detection) == 0
    assert photon_probability(4.777e-14, 1536.61, detection) == pytest.approx(
        1.3989217241706985e-4, rel=1e-10)
    longer = DetectionParams(2e-9, 0.6, 2.0)
    assert photon_probability(1e-12, 1536.61, longer) == pytest.approx(
        2 * photon_probability(1e-12, 1536.61, detection), rel=1e-14)


@given(st.floats(min_value=0, max_value=1e-9), st.floats(min_value=0, max_value=1e-9),
       st.floats(min_value=1e-10, max_value=1e-7), st.floats(min_value=0.01, max_value=1.0))
def test_photon_probability_linear(p1, p2, window, eff):
    det = DetectionParams(window, eff, 2.0)
    assert photon_probability(p1 + p2, 1550, det) == pytest.approx(
        photon_probability(p1, 1550, det) + photon_probability(p2, 1550, det), rel=1e-12, abs=1e-300)
    det1 = DetectionParams(window, 1.0, 2.0)
    assert photon_probability(p1, 1550, det) == pytest.approx(
        eff * photon_probability(p1, 1550, det1), rel=1e-12, abs=1e-300)


def test_excess_noise():
    assert excess_noise_snu(0) == 0
    assert excess_noise_snu(1e-4) == pytest.approx(2e-4)
    assert excess_noise_snu(1e-4) + excess_noise_snu(3e-4) == pytest.approx(excess_noise_snu(4e-4))
    b = NoiseBudget(1e-14, 0, 1e-12, 1e-4, 0.0, 2e-3, baseline_snu=0.01)
    assert b.excess_noise_snu == pytest.approx(0.01 + 2 * (1e-4 + 2e-3))


def test_noise_monotone_in_power(flat_rho, fiber, fwm_params):
    prev = None
    for p_dbm in np.linspace(-40, 0, 9):
        plan = build_configuration(3, p_dbm)
        p = 1e-3 * 10 ** (p_dbm / 10)
        vals = (raman_forward(p, 5, plan, flat_rho, 0.12),
                raman_backward(p, 5, XI_018, plan, flat_rho, 0.12),
                fwm_total_power(plan, fiber, fwm_params, 5),
                lcxt_power(p_dbm, 30))
        if prev is not None:
            assert all(v >= q for v, q in zip(vals, prev))
        prev = vals
