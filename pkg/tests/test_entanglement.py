import math

import numpy as np
import pytest

from erasent.model import ModelParams
from erasent.dynamics import STATIONARY
from erasent.erasure import PLUS, MINUS
from erasent.thermal import ThermalSpec, TruncationConfig, FieldState, mix_thermal, mix_fock
from erasent.entanglement import (
    EIGEN_CLAMP, partial_transpose_blocks, log_negativity, stationary_block_logneg, oracle_log_negativity, field_spectrum
)
from erasent.sweep import random_field_state
from erasent.errors import ParameterError, NoStationaryStateError, DimensionError


LOG2_1P5 = math.log2(1.5)


@pytest.fixture
def vacuum_state(default_params) -> FieldState:
    return mix_thermal(STATIONARY, default_params, ThermalSpec())


class TestPartialTransposeBlocks:
    def test_diagonal_state(self):
        s = FieldState.from_entries({(0, 0): 0.5, (1, 0): 0.2, (1, 1): 0.3})
        blocks, uncoupled = partial_transpose_blocks(s)
        assert blocks == []
        assert dict(uncoupled) == {(0, 0): 0.5, (0, 1): 0.0, (1, 0): 0.2, (1, 1): 0.3}

    def test_pure_off_diagonal(self):
        s = FieldState.from_entries({(0, 0): 0.5, (1, 1): 0.5}, {(0, 0): 0.3j})
        blocks, _ = partial_transpose_blocks(s)
        assert len(blocks) == 1
        b = blocks[0]
        assert b.pair == ((0, 1), (1, 0))
        assert (b.d1, b.d2) == (0.0, 0.0)
        np.testing.assert_allclose(b.eigenvalues(), [-0.3, 0.3])

    def test_vacuum_stationary(self, vacuum_state):
        blocks, uncoupled = partial_transpose_blocks(vacuum_state)
        assert len(blocks) == 1
        b = blocks[0]
        assert b.pair == ((0, 1), (1, 0))
        assert (b.d1, b.d2) == (0.0, 0.0)
        assert b.c == pytest.approx(0.25)
        np.testing.assert_allclose(b.eigenvalues(), [-0.25, 0.25])
        assert dict(uncoupled) == {(0, 0): pytest.approx(0.75), (1, 1): pytest.approx(0.25)}

    def test_partitions_entries(self):
        s = random_field_state(7, max_cutoff=4)
        blocks, uncoupled = partial_transpose_blocks(s)
        labels = [lb for b in blocks for lb in b.labels] + [lb for lb, _ in uncoupled]
        assert len(labels) == len(set(labels)) == s.populations.size
        n_coupling = sum(len(b) - 1 for b in blocks)
        assert n_coupling == np.count_nonzero(s.coherences)

    def test_chain(self):
        """
        Two coherences meeting at label `(1, 1)` under the transpose form a 3-label component
        """
        s = FieldState.from_entries(
            {(0, 1): 0.2, (1, 0): 0.2, (1, 2): 0.2, (2, 1): 0.2, (0, 2): 0.05, (2, 0): 0.05, (1, 1): 0.1},
            {(0, 1): 0.15, (1, 0): 0.15j}
        )
        blocks, _ = partial_transpose_blocks(s)
        chain = [b for b in blocks if len(b) == 3]
        assert len(chain) == 1
        assert chain[0].labels == ((0, 2), (1, 1), (2, 0))
        with pytest.raises(ValueError):
            chain[0].pair
        assert log_negativity(s) == pytest.approx(oracle_log_negativity(s), abs=1e-12)

    def test_rejects_mode(self, vacuum_state):
        with pytest.raises(ValueError):
            partial_transpose_blocks(vacuum_state, mode=3)


class TestLogNegativity:
    def test_diagonal_is_zero(self):
        s = FieldState.from_entries({(0, 0): 0.4, (1, 1): 0.4, (0, 1): 0.2})
        assert log_negativity(s) == 0.0
        assert oracle_log_negativity(s) == pytest.approx(0.0, abs=1e-15)

    def test_vacuum_stationary(self, vacuum_state, default_params):
        assert log_negativity(vacuum_state) == pytest.approx(LOG2_1P5, abs=1e-12)
        assert log_negativity(vacuum_state) == pytest.approx(stationary_block_logneg(0, 0, default_params), abs=1e-12)
        assert oracle_log_negativity(vacuum_state) == pytest.approx(LOG2_1P5, abs=1e-12)

    @pytest.mark.parametrize('mbar', [0.0, 0.3, 2.0])
    def test_resonant_stationary_is_zero(self, resonant_params, mbar):
        assert log_negativity(mix_thermal(STATIONARY, resonant_params, ThermalSpec(mbar, mbar))) == 0.0

    def test_negative_only_above_product(self):
        # |c|^2 <= d1 * d2 leaves the transposed block positive
        s = FieldState.from_entries(
            {(0, 0): 0.3, (1, 1): 0.3, (0, 1): 0.2, (1, 0): 0.2}, {(0, 0): 0.19})
        assert log_negativity(s) == 0.0
        t = FieldState.from_entries(
            {(0, 0): 0.3, (1, 1): 0.3, (0, 1): 0.2, (1, 0): 0.2}, {(0, 0): 0.25})
        assert log_negativity(t) == pytest.approx(math.log2(1 + 2 * 0.05))

    def test_rejects_unnormalized(self):
        s = FieldState(populations=[[0.25, 0], [0, 0.25]], coherences=[[0.1]], normalized=False)
        with pytest.raises(ParameterError):
            log_negativity(s)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            s = random_field_state(rng, max_cutoff=4)
            assert log_negativity(s) == pytest.approx(oracle_log_negativity(s), abs=1e-10)

    def test_mode_1_transpose(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            s = random_field_state(rng)
            assert log_negativity(s, mode=1) == pytest.approx(log_negativity(s, mode=2), abs=1e-12)
            assert oracle_log_negativity(s, mode=1) == pytest.approx(oracle_log_negativity(s, mode=2), abs=1e-10)

    @pytest.mark.parametrize('shift', [0.3, 2.0, 5.9])
    @pytest.mark.parametrize('spec', [ThermalSpec(), ThermalSpec(0.4, 0.2)])
    def test_phase_invariance(self, default_params, shift, spec):
        params = default_params.replace(theta=1.1)
        a = log_negativity(mix_thermal(3.0, params, spec))
        b = log_negativity(mix_thermal(3.0, params.replace(phi=params.phi + shift), spec))
        assert a == pytest.approx(b, abs=1e-14)
        if spec == ThermalSpec():
            assert a > 0

    @pytest.mark.parametrize('t', [0.5, 2.0, STATIONARY])
    def test_outcome_symmetry(self, default_params, t):
        spec = ThermalSpec(0.2, 0.5)
        plus = log_negativity(mix_thermal(t, default_params, spec, outcome=PLUS))
        minus = log_negativity(mix_thermal(t, default_params, spec, outcome=MINUS))
        assert plus == pytest.approx(minus, abs=1e-12)

    def test_thermal_degradation(self, default_params):
        vals = [log_negativity(mix_thermal(STATIONARY, default_params, ThermalSpec(a, a))) for a in np.arange(11) * 0.2]
        positive = [v for v in vals if v > 0]
        assert all(x > y for x, y in zip(positive, positive[1:]))
        assert vals[-1] == 0.0
        assert vals == positive + [0.0] * (len(vals) - len(positive))

    def test_truncation_convergence(self, default_params):
        spec = ThermalSpec(1.0, 1.5)
        a = log_negativity(mix_thermal(2.0, default_params, spec, TruncationConfig(tail_mass=1e-6)))
        b = log_negativity(mix_thermal(2.0, default_params, spec, TruncationConfig(tail_mass=1e-12)))
        assert a == pytest.approx(b, abs=10 * 1e-6)


class TestStationaryBlockLogneg:
    def test_vacuum(self, default_params):
        assert stationary_block_logneg(0, 0, default_params) == pytest.approx(0.5849625007211562, abs=1e-15)

    def test_nulls(self, default_params, resonant_params):
        assert stationary_block_logneg(2, 1, resonant_params) == 0.0
        assert stationary_block_logneg(1, 1, default_params.replace(theta=0.0)) == 0.0
        assert stationary_block_logneg(1, 1, default_params.replace(theta=math.pi)) == 0.0

    def test_requires_decoherence(self, default_params):
        with pytest.raises(NoStationaryStateError):
            stationary_block_logneg(0, 0, default_params.replace(gamma=0.0))

    @pytest.mark.parametrize('n1', [0, 1, 2])
    @pytest.mark.parametrize('n2', [0, 1, 2])
    @pytest.mark.parametrize('theta', [math.pi / 6, math.pi / 2, 2 * math.pi / 3])
    @pytest.mark.parametrize('delta', [0.5, 1.0, 2.0])
    def test_matches_fock_pipeline(self, n1, n2, theta, delta):
        params = ModelParams.from_detuning(delta=delta, g=0.5, gamma=0.5, theta=theta)
        expected = stationary_block_logneg(n1, n2, params)
        assert log_negativity(mix_fock(n1, n2, STATIONARY, params)) == pytest.approx(expected, abs=1e-12)


class TestOracle:
    def test_dimension_cap(self, vacuum_state):
        with pytest.raises(DimensionError):
            oracle_log_negativity(vacuum_state, max_dim=3)

    def test_field_spectrum(self):
        s = random_field_state(11, max_cutoff=3)
        np.testing.assert_allclose(field_spectrum(s), np.linalg.eigvalsh(s.to_dense()), atol=1e-13)
        assert field_spectrum(s).min() >= -EIGEN_CLAMP
