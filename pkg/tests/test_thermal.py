import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from erasent.dynamics import STATIONARY, evolve_block
from erasent.erasure import PLUS, MINUS, TRACED, erase
from erasent.thermal import (
    ThermalSpec, TruncationConfig, cutoff, thermal_weight, FieldState, mix_thermal, mix_fock, outcome_probabilities
)
from erasent.entanglement import field_spectrum
from erasent.errors import ParameterError, StructureError, TruncationError


class TestThermalSpec:
    def test_rejects_negative(self):
        with pytest.raises(ParameterError):
            ThermalSpec(mbar1=-0.1)
        with pytest.raises(ParameterError):
            ThermalSpec(mbar2=float('inf'))

    @given(st.floats(1e-3, 50), st.floats(1e-3, 50))
    def test_inverse_temperature_round_trip(self, mbar1, mbar2):
        spec = ThermalSpec(mbar1, mbar2)
        beta1, beta2 = spec.inverse_temperatures(omega1=1.0, omega2=2.0)
        back = ThermalSpec.from_inverse_temperature(beta1, beta2, omega1=1.0, omega2=2.0)
        assert back.mbar1 == pytest.approx(mbar1, rel=1e-12)
        assert back.mbar2 == pytest.approx(mbar2, rel=1e-12)

    def test_vacuum_is_zero_temperature(self):
        assert ThermalSpec().inverse_temperatures() == (math.inf, math.inf)
        assert ThermalSpec.from_inverse_temperature(math.inf, math.inf) == ThermalSpec()


class TestTruncation:
    def test_cutoff(self):
        assert cutoff(0.0) == 0
        # ln(5e-11) / ln(1/2) = 34.2...
        assert cutoff(1.0, 1e-10) == 34

    @pytest.mark.parametrize('mbar', [0.1, 1.0, 2.5, 5.0])
    @pytest.mark.parametrize('tail_mass', [1e-6, 1e-10])
    def test_tail_bound(self, mbar, tail_mass):
        n = cutoff(mbar, tail_mass)
        ratio = mbar / (1 + mbar)
        assert ratio ** (n + 1) <= tail_mass / 2  # geometric tail beyond `n`
        assert ratio ** n > tail_mass / 2

    def test_hard_cap(self):
        trunc = TruncationConfig(hard_cap=10)
        assert trunc.cutoffs(ThermalSpec(0.0, 0.1)) == (0, cutoff(0.1))
        with pytest.raises(TruncationError) as e:
            trunc.cutoffs(ThermalSpec(0.1, 5.0))
        assert e.value.mode == 2
        assert e.value.exit_code == 2

    @pytest.mark.parametrize('kwargs', [dict(tail_mass=0.0), dict(tail_mass=1.0), dict(hard_cap=-1), dict(hard_cap=2.5)])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            TruncationConfig(**kwargs)


class TestThermalWeight:
    @pytest.mark.parametrize('n1, n2, mbar1, mbar2, expected', [
        (0, 0, 0.0, 0.0, 1.0),
        (0, 0, 1.0, 1.0, 0.25),
        (2, 1, 1.0, 0.5, 0.125 * 0.5 / 1.5 ** 2),
        (1, 0, 0.0, 3.0, 0.0),
    ])
    def test_values(self, n1, n2, mbar1, mbar2, expected):
        assert thermal_weight(n1, n2, ThermalSpec(mbar1, mbar2)) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize('mbar1, mbar2', [(0.5, 2.0), (3.0, 0.0)])
    def test_kept_mass(self, mbar1, mbar2):
        spec, trunc = ThermalSpec(mbar1, mbar2), TruncationConfig()
        n1, n2 = trunc.cutoffs(spec)
        w = thermal_weight(*np.meshgrid(np.arange(n1 + 1), np.arange(n2 + 1), indexing='ij'), spec)
        assert 1 - trunc.tail_mass <= w.sum() <= 1 + 1e-12

    def test_rejects_negative(self):
        with pytest.raises(ParameterError):
            thermal_weight(-1, 0, ThermalSpec())


class TestFieldState:
    def test_from_entries(self):
        s = FieldState.from_entries({(0, 0): 0.75, (1, 1): 0.25}, {((0, 0), (1, 1)): 0.25})
        assert s.shape == (2, 2)
        assert s.coherence_map() == {(0, 0): 0.25}
        t = FieldState.from_entries({(0, 0): 0.75, (1, 1): 0.25}, {((1, 1), (0, 0)): 0.25j})
        assert t.coherence_map() == {(0, 0): -0.25j}

    def test_off_band_rejected(self):
        with pytest.raises(StructureError):
            FieldState.from_entries({(0, 0): 0.5, (1, 0): 0.5}, {((0, 0), (1, 0)): 0.1})

    @pytest.mark.parametrize('pops, coh', [
        ({(0, 0): 0.6, (1, 1): 0.6}, dict()),  # trace
        ({(0, 0): 1.2, (1, 1): -0.2}, dict()),  # negative
        ({(0, 0): 0.5, (1, 1): 0.5}, {(0, 0): 0.6}),  # coherence bound
    ])
    def test_invariants(self, pops, coh):
        with pytest.raises(StructureError):
            FieldState.from_entries(pops, coh)

    def test_read_only(self):
        s = FieldState.from_entries({(0, 0): 1.0})
        with pytest.raises(ValueError):
            s.populations[0, 0] = 0.5

    def test_dense(self):
        s = FieldState.from_entries({(0, 0): 0.75, (1, 1): 0.25}, {(0, 0): 0.2j})
        rho = s.to_dense()
        d2 = s.shape[1]
        assert rho[0, 1 * d2 + 1] == 0.2j
        assert rho[1 * d2 + 1, 0] == -0.2j
        np.testing.assert_allclose(rho, rho.conj().T)
        assert np.trace(rho).real == pytest.approx(1.0)


class TestMixThermal:
    def test_vacuum_stationary(self, default_params):
        s = mix_thermal(STATIONARY, default_params, ThermalSpec(), TruncationConfig())
        assert s.cutoffs == (0, 0)
        assert s.population_map() == {(0, 0): pytest.approx(0.75), (1, 1): pytest.approx(0.25)}
        assert s.coherence_map() == {(0, 0): pytest.approx(0.25)}
        assert s.normalization == pytest.approx(2.0)
        assert s.probability == pytest.approx(0.5)

    def test_initial_state_is_thermal(self, default_params):
        spec = ThermalSpec(1.0, 1.0)
        s = mix_thermal(0.0, default_params, spec)
        n1, n2 = TruncationConfig().cutoffs(spec)
        grid = np.meshgrid(np.arange(n1 + 1), np.arange(n2 + 1), indexing='ij')
        w = thermal_weight(*grid, spec)
        np.testing.assert_allclose(s.populations[:-1, :-1], w / w.sum(), rtol=1e-12, atol=1e-300)
        assert not np.any(s.populations[-1, :]) and not np.any(s.populations[:, -1])
        assert not np.any(s.coherences)

    def test_accumulation(self, default_params):
        """
        Population `(1, 1)` receives `w_low` of block `(1, 1)` & `w_high` of block `(0, 0)`
        """
        spec, t = ThermalSpec(0.4, 0.7), 1.3
        s = mix_thermal(t, default_params, spec, outcome=PLUS)
        fb00, fb11 = (erase(evolve_block(n, n, t, default_params), default_params.theta, default_params.phi, PLUS) for n in (0, 1))
        expected = thermal_weight(1, 1, spec) * fb11.w_low + thermal_weight(0, 0, spec) * fb00.w_high
        assert s.populations[1, 1] == pytest.approx(expected * s.normalization, rel=1e-12)
        assert s.coherences[0, 0] == pytest.approx(thermal_weight(0, 0, spec) * fb00.c * s.normalization, rel=1e-12)

    @settings(deadline=None)
    @given(st.floats(0, 3), st.floats(0, 3), st.floats(0, 30), st.sampled_from([PLUS, MINUS, TRACED]))
    def test_trace_and_positivity(self, mbar1, mbar2, t, outcome):
        from erasent.model import ModelParams
        params = ModelParams.from_detuning(delta=0.6, g=0.5, gamma=0.2, theta=1.0, phi=0.5)
        s = mix_thermal(t, params, ThermalSpec(mbar1, mbar2), TruncationConfig(tail_mass=1e-8), outcome=outcome)
        assert s.trace == pytest.approx(1.0, abs=1e-10)
        assert field_spectrum(s).min() >= -1e-10

    def test_traced_is_diagonal(self, default_params):
        s = mix_thermal(2.0, default_params, ThermalSpec(0.5, 0.5), outcome=TRACED)
        assert not np.any(s.coherences)
        assert s.probability == pytest.approx(1.0, abs=1e-9)

    def test_truncation_failure(self, default_params):
        with pytest.raises(TruncationError):
            mix_thermal(STATIONARY, default_params, ThermalSpec(50.0, 0.0), TruncationConfig(hard_cap=64))

    def test_zero_probability(self, default_params):
        with pytest.raises(ParameterError):
            mix_thermal(0.0, default_params.replace(theta=0.0), ThermalSpec(0.5, 0.5), outcome=MINUS)

    def test_rejects_negative_time(self, default_params):
        with pytest.raises(ParameterError):
            mix_thermal(-0.5, default_params, ThermalSpec())


class TestOutcomeProbabilities:
    @given(st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.floats(0, 20))
    @settings(deadline=None)
    def test_complete(self, theta, phi, t):
        from erasent.model import ModelParams
        params = ModelParams.from_detuning(delta=1.0, g=0.5, gamma=0.5, theta=theta, phi=phi)
        probs = outcome_probabilities(t, params, ThermalSpec(0.3, 0.6))
        assert probs[PLUS] + probs[MINUS] == pytest.approx(1.0, abs=1e-14)

    def test_even_at_right_angle(self, default_params):
        probs = outcome_probabilities(4.0, default_params, ThermalSpec(0.5, 1.0))
        assert probs[PLUS] == pytest.approx(0.5, abs=1e-14)
        assert probs[MINUS] == pytest.approx(0.5, abs=1e-14)


class TestMixFock:
    def test_single_block(self, default_params):
        s = mix_fock(1, 2, STATIONARY, default_params)
        assert s.cutoffs == (1, 2)
        assert set(s.population_map()) == {(1, 2), (2, 3)}
        assert set(s.coherence_map()) == {(1, 2)}
        assert s.trace == pytest.approx(1.0)

    def test_vacuum_matches_thermal(self, default_params):
        a, b = mix_fock(0, 0, STATIONARY, default_params), mix_thermal(STATIONARY, default_params, ThermalSpec())
        np.testing.assert_allclose(a.populations, b.populations, atol=1e-15)
        np.testing.assert_allclose(a.coherences, b.coherences, atol=1e-15)
