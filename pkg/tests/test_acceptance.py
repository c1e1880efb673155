"""
End-to-end properties of the sweep surfaces and the measurement contract
"""

import math

import numpy as np
import pytest

from erasent.model import ModelParams
from erasent.dynamics import STATIONARY
from erasent.erasure import PLUS, MINUS, TRACED
from erasent.thermal import ThermalSpec, TruncationConfig, mix_thermal, outcome_probabilities
from erasent.entanglement import log_negativity, stationary_block_logneg
from erasent.container import frange
from erasent.sweep import SweepSpec, Axis, run_sweep, single_point, figure_preset


def _ln(params: ModelParams, mbar1: float, mbar2: float, t=STATIONARY, **kwargs) -> float:
    return single_point(params, ThermalSpec(mbar1, mbar2), t=t, **kwargs).log_negativity


@pytest.mark.parametrize('n1', [0, 1, 2])
@pytest.mark.parametrize('n2', [0, 1, 2])
@pytest.mark.parametrize('theta', [math.pi / 6, math.pi / 2, 2 * math.pi / 3])
@pytest.mark.parametrize('delta', [0.5, 1.0, 2.0])
def test_stationary_formula_on_fock_input(n1, n2, theta, delta):
    params = ModelParams.from_detuning(delta=delta, theta=theta)
    report = single_point(params, fock=(n1, n2))
    assert report.log_negativity == pytest.approx(stationary_block_logneg(n1, n2, params), abs=1e-12)


def test_resonant_null_over_figure_grid():
    preset = figure_preset(1)
    params = preset.params.replace(delta=0.0)
    for a in preset.spec.axis1.values:
        assert _ln(params, a, a) == 0.0


def test_threshold_in_alpha(default_params):
    lns = [_ln(default_params, a, a) for a in frange(0, 2, 0.25)]
    assert lns[0] > 0
    assert lns[-1] == 0.0
    positive = [v for v in lns if v > 0]
    assert all(a > b for a, b in zip(positive, positive[1:]))
    assert all(a >= b for a, b in zip(lns, lns[1:]))
    assert lns[len(positive):] == [0.0] * (len(lns) - len(positive))


def test_vacuum_mode_keeps_entanglement(default_params):
    for m2 in frange(0, 5, 0.5):
        assert _ln(default_params, 0.0, m2) > 0


@pytest.mark.parametrize('t', [STATIONARY, 2.0, 5.0, 10.0])
def test_increases_with_photon_number_difference(default_params, t):
    mode = STATIONARY if t == STATIONARY else 'time'
    fixed = dict(mbar_sum=1.0) if t == STATIONARY else dict(mbar_sum=1.0, t=t)
    spec = SweepSpec(Axis('mbar_diff', 0, 1, 0.1), fixed=fixed, mode=mode)
    lns = [v for _, _, v in run_sweep(spec, default_params).rows]
    assert len(lns) == 11
    assert np.all(np.diff(lns) >= -1e-12)


def test_resonant_sudden_death(resonant_params):
    early = [_ln(resonant_params, 0.1, 0.1, t=t) for t in frange(0.1, 3, 0.1)]
    assert max(early) > 0
    assert _ln(resonant_params, 0.1, 0.1, t=20.0) <= 1e-6


def test_off_resonant_stationary_plateau(default_params):
    late = _ln(default_params, 0.1, 0.1, t=20.0)
    assert late > 0
    assert late == pytest.approx(_ln(default_params, 0.1, 0.1), abs=1e-3)


def test_measurement_contract(default_params):
    rng = np.random.default_rng(3)
    spec = ThermalSpec(0.3, 0.2)
    for _ in range(20):
        params = default_params.replace(theta=rng.uniform(0, math.pi), phi=rng.uniform(0, 2 * math.pi))
        probs = outcome_probabilities(rng.uniform(0, 10), params, spec)
        assert abs(probs[PLUS] + probs[MINUS] - 1) <= 1e-14

    for t in (0.5, 3.0, STATIONARY):
        probs = outcome_probabilities(t, default_params, spec)
        assert probs[PLUS] == pytest.approx(0.5, abs=1e-14)
        assert probs[MINUS] == pytest.approx(0.5, abs=1e-14)
        plus, minus = (_ln(default_params, 0.3, 0.2, t=t, outcome=o) for o in (PLUS, MINUS))
        assert plus == pytest.approx(minus, abs=1e-12)


def test_no_erasure_null(default_params):
    rng = np.random.default_rng(4)
    for _ in range(20):
        params = default_params.replace(delta=rng.uniform(-2, 2), gamma=rng.uniform(0.1, 1))
        spec = ThermalSpec(rng.uniform(0, 1), rng.uniform(0, 1))
        t = rng.uniform(0, 10)
        assert log_negativity(mix_thermal(t, params, spec, outcome=TRACED)) == 0.0


def test_truncation_convergence(default_params):
    spec = ThermalSpec(2.0, 2.0)
    for t in (STATIONARY, 1.0, 3.0):
        coarse = log_negativity(mix_thermal(t, default_params, spec, TruncationConfig(tail_mass=1e-8)))
        fine = log_negativity(mix_thermal(t, default_params, spec, TruncationConfig(tail_mass=1e-10)))
        assert abs(coarse - fine) <= 1e-7


@pytest.mark.parametrize('number', [1, 2, 3, 4, 5, 6])
def test_figure_csv_deterministic(number):
    preset = figure_preset(number, stride=10 if number <= 3 else 20)
    first = run_sweep(preset.spec, preset.params).to_csv()
    assert run_sweep(preset.spec, preset.params, n_worker=2).to_csv() == first
    n_row = len(preset.spec.grid())
    assert len([ln for ln in first.splitlines() if not ln.startswith('#')]) == n_row + 1


def test_figure_1_resonant_rows():
    preset = figure_preset(1, stride=5)
    for _, delta, v in run_sweep(preset.spec, preset.params).rows:
        if delta == 0:
            assert v == 0.0


def test_figure_2_off_resonant_rows():
    preset = figure_preset(2, stride=5)
    for _, delta, v in run_sweep(preset.spec, preset.params).rows:
        if delta > 0:
            assert v > 0
