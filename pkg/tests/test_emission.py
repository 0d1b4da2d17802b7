import math

import numpy as np
import pytest

from gse.emission import (
    MODELS,
    SweepRecord,
    chemical_gate,
    emission_spectrum,
    gse_total_rate,
    sweep_record,
    total_emission,
)
from gse.errors import ConfigurationError
from gse.params import params_for_coupling


def test_chemical_gate_truth_table():
    # out: electron leaves into a lead below -delta; in: lead above delta
    assert chemical_gate(-3.0, 2.4, "out") is True
    assert chemical_gate(-2.0, 2.4, "out") is False
    assert chemical_gate(4.0, 4.5, "in") is True
    assert chemical_gate(5.0, 4.5, "in") is False
    # the marginal case counts as open on both directions
    assert chemical_gate(-2.4, 2.4, "out") is True
    assert chemical_gate(4.5, 4.5, "in") is True
    with pytest.raises(ConfigurationError):
        chemical_gate(0.0, 1.0, "up")


def test_total_emission_branching():
    tot = total_emission((1.0, 2.0), (0.5, 0.25), 1e-2)
    assert tot == (pytest.approx(0.5), pytest.approx(0.5))
    # dark decay competes with cavity loss
    tot = total_emission((1.0, 1.0), (1.0, 1.0), 1e-2, (1e-2, 3e-2))
    assert tot[0] == pytest.approx(0.5)
    assert tot[1] == pytest.approx(0.25)
    with pytest.raises(ConfigurationError):
        total_emission((1.0, 1.0), (1.0, 1.0), 0.0)
    with pytest.raises(ConfigurationError):
        total_emission((-1.0, 1.0), (1.0, 1.0), 1e-2)


def test_gse_total_rate():
    assert gse_total_rate(1.0, 2.0, 3.0) == pytest.approx(6.0)
    assert gse_total_rate() == 0.0
    with pytest.raises(ConfigurationError):
        gse_total_rate(1.0, -2.0)


def make_record(**kw):
    base = dict(model="pert", detuning=0.0, g_over_omega0=0.05,
                n_electrons=1000, omega_plus=1.05, omega_minus=0.95,
                rate_plus=1e-4, rate_minus=2e-4, weight_plus=0.5,
                weight_minus=0.5, tot_plus=5e-5, tot_minus=1e-4)
    base.update(kw)
    return SweepRecord(**base)


def test_record_derived_quantities():
    r = make_record()
    assert r.flux_plus == pytest.approx(1.05e-4)
    assert r.flux_minus == pytest.approx(1.9e-4)
    assert r.gse_rate == pytest.approx(3e-4)
    assert r.gse_flux == pytest.approx(r.flux_plus + r.flux_minus)
    assert r.tot_rate == pytest.approx(1.5e-4)
    assert r.tot_flux == pytest.approx(1.05 * 5e-5 + 0.95 * 1e-4)
    assert r.tot_rate <= r.gse_rate


def test_record_validation():
    with pytest.raises(ConfigurationError):
        make_record(model="quantum")
    with pytest.raises(ConfigurationError):
        make_record(rate_plus=-1e-9)


@pytest.mark.parametrize("model", MODELS)
def test_sweep_record_resonance(model):
    p = params_for_coupling(1.0, 0.05, 10**6)
    r = sweep_record(p, model)
    expected = 0.05**2 / 8
    assert r.rate_plus == pytest.approx(expected, rel=5 * 0.05)
    assert r.rate_minus == pytest.approx(expected, rel=5 * 0.05)
    assert 0.3 <= r.tot_rate / r.gse_rate <= 1.0
    assert r.flux_plus == r.omega_plus * r.rate_plus
    assert r.tot_rate <= r.gse_rate


def test_sweep_record_label_overrides():
    p = params_for_coupling(1.02, 0.049, 10**6)
    r = sweep_record(p, "full", detuning=0.02, g_over_omega0=0.05)
    assert r.detuning == 0.02
    assert r.g_over_omega0 == 0.05


def test_sweep_record_rejects_unknown_model():
    p = params_for_coupling(1.0, 0.05, 100)
    with pytest.raises(ConfigurationError):
        sweep_record(p, "bogus")


def test_zero_coupling_records():
    p = params_for_coupling(1.2, 0.0, 100)
    for model in MODELS:
        r = sweep_record(p, model)
        assert r.gse_rate == 0.0
        assert r.tot_rate == 0.0
        # upper branch is the empty cavity mode for a blue-detuned cavity
        assert r.weight_plus == pytest.approx(1.0)
        assert r.weight_minus == pytest.approx(0.0, abs=1e-12)


def test_spectrum_integrates_to_total_rate():
    p = params_for_coupling(1.0, 0.05, 10**6)
    r = sweep_record(p, "full")
    grid = np.linspace(r.omega_minus - 400 * p.gamma_cav,
                       r.omega_plus + 400 * p.gamma_cav, 400001)
    spec = emission_spectrum(r, p.gamma_cav, grid)
    integral = float(np.trapezoid(spec, grid))
    assert integral == pytest.approx(r.tot_rate, rel=5e-3)
    # peaks sit at the polariton frequencies
    for center in (r.omega_minus, r.omega_plus):
        k = int(np.argmin(np.abs(grid - center)))
        assert spec[k] >= 0.9 * float(spec.max())


def test_spectrum_rejects_bad_width():
    r = make_record()
    with pytest.raises(ConfigurationError):
        emission_spectrum(r, 0.0, np.linspace(0.9, 1.1, 10))


def test_branch_monotonicity_in_detuning():
    # upper branch rate grows, lower branch shrinks across resonance
    for model in MODELS:
        rates = [sweep_record(params_for_coupling(1.0 + d, 0.1, 10**6), model)
                 for d in (-0.3, 0.0, 0.3)]
        plus = [r.rate_plus for r in rates]
        minus = [r.rate_minus for r in rates]
        assert plus[0] < plus[1] < plus[2]
        assert minus[0] > minus[1] > minus[2]
