"""
Thermal averaging of the erased field blocks into the full two-mode field state, with adaptive Fock-space truncation

Populations live on labels `(m1, m2)` for `0 <= m_i <= N_i + 1`, coherences only on the `(+1, +1)` band:
    `coherences[n1, n2]` is the coefficient of `|n1, n2><n1+1, n2+1|`
"""

import math
import dataclasses
from dataclasses import dataclass, InitVar
from typing import Tuple, Dict, Mapping, Union

import numpy as np

from erasent.model import ModelParams
from erasent.dynamics import Time, block_terms
from erasent.erasure import PLUS, OUTCOMES, _erase_terms
from erasent.errors import ParameterError, StructureError, TruncationError
from erasent.prettier import get_logger, check_arg as ca, style


__all__ = [
    'ThermalSpec', 'TruncationConfig', 'cutoff', 'thermal_weight',
    'FieldState', 'mix_thermal', 'mix_fock', 'outcome_probabilities',
]


logger = get_logger(__name__)


@dataclass(frozen=True)
class ThermalSpec:
    """
    Mean photon numbers of the two initially thermal modes, `0` is the vacuum
    """
    mbar1: float = 0.0
    mbar2: float = 0.0

    def __post_init__(self):
        for k in ('mbar1', 'mbar2'):
            v = float(getattr(self, k))
            if not (math.isfinite(v) and v >= 0):
                raise ParameterError(f'Mean photon number {style(k)} must be finite & non-negative, got {style(v)}')
            object.__setattr__(self, k, v)

    @classmethod
    def from_inverse_temperature(
            cls, beta1: float, beta2: float, omega1: float = 1.0, omega2: float = 1.0
    ) -> 'ThermalSpec':
        """
        `mbar = 1 / (exp(beta omega) - 1)`, an infinite `beta` gives the vacuum
        """
        def mbar(beta: float, omega: float) -> float:
            if not beta > 0:
                raise ParameterError(f'Inverse temperature must be positive, got {style(beta)}')
            return 0.0 if math.isinf(beta) else 1 / math.expm1(beta * omega)
        return cls(mbar1=mbar(beta1, omega1), mbar2=mbar(beta2, omega2))

    def inverse_temperatures(self, omega1: float = 1.0, omega2: float = 1.0) -> Tuple[float, float]:
        def beta(mbar: float, omega: float) -> float:
            return math.inf if mbar == 0 else math.log1p(1 / mbar) / omega
        return beta(self.mbar1, omega1), beta(self.mbar2, omega2)

    def replace(self, **changes) -> 'ThermalSpec':
        return dataclasses.replace(self, **changes)


def cutoff(mbar: float, tail_mass: float = 1e-10) -> int:
    """
    Smallest `N` such that the geometric tail beyond `N` of a thermal mode holds at most `tail_mass / 2`
    """
    if mbar == 0:
        return 0
    ratio = mbar / (1 + mbar)
    return max(math.ceil(math.log(tail_mass / 2) / math.log(ratio)) - 1, 0)


@dataclass(frozen=True)
class TruncationConfig:
    """
    :param tail_mass: Maximum total thermal probability discarded by truncation
    :param hard_cap: Largest per-mode cutoff allowed
    """
    tail_mass: float = 1e-10
    hard_cap: int = 512

    def __post_init__(self):
        if not 0 < self.tail_mass < 1:
            raise ParameterError(f'{style("tail_mass")} must lie in (0, 1), got {style(self.tail_mass)}')
        if int(self.hard_cap) != self.hard_cap or self.hard_cap < 0:
            raise ParameterError(f'{style("hard_cap")} must be a non-negative integer, got {style(self.hard_cap)}')
        object.__setattr__(self, 'hard_cap', int(self.hard_cap))

    def cutoffs(self, spec: ThermalSpec) -> Tuple[int, int]:
        ret = []
        for mode, mbar in enumerate((spec.mbar1, spec.mbar2), start=1):
            n = cutoff(mbar, self.tail_mass)
            if n > self.hard_cap:
                raise TruncationError(mode=mode, mbar=mbar, cutoff=n, hard_cap=self.hard_cap)
            ret.append(n)
        return ret[0], ret[1]

    def replace(self, **changes) -> 'TruncationConfig':
        return dataclasses.replace(self, **changes)


def _geometric_weight(n: np.ndarray, mbar: float) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if mbar == 0:
        return (n == 0).astype(float)
    # log space keeps large `n` from overflowing
    return np.exp(n * math.log(mbar) - (n + 1) * math.log1p(mbar))


def thermal_weight(n1: Union[int, np.ndarray], n2: Union[int, np.ndarray], spec: ThermalSpec) -> Union[float, np.ndarray]:
    """
    `mbar1^n1 mbar2^n2 / ((1+mbar1)^(n1+1) (1+mbar2)^(n2+1))`
    """
    if np.any(np.asarray(n1) < 0) or np.any(np.asarray(n2) < 0):
        raise ParameterError(f'Fock labels must be non-negative, got {style(dict(n1=n1, n2=n2))}')
    ret = _geometric_weight(n1, spec.mbar1) * _geometric_weight(n2, spec.mbar2)
    return float(ret) if np.ndim(ret) == 0 else ret


Label = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class FieldState:
    """
    Two-mode field density matrix, populations plus the `(+1, +1)` coherence band

    :param populations: array of shape `(N1 + 2, N2 + 2)`
    :param coherences: complex array of shape `(N1 + 1, N2 + 1)`
    :param normalization: The constant applied to reach unit trace
    :param outcome: Measurement channel the state is conditioned on
    """
    populations: np.ndarray
    coherences: np.ndarray
    normalization: float = 1.0
    normalized: bool = True
    outcome: str = PLUS
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        pops = np.array(self.populations, dtype=float)
        coh = np.array(self.coherences, dtype=complex)
        if pops.ndim != 2 or coh.ndim != 2 or pops.shape[0] < 1 or pops.shape[1] < 1:
            raise StructureError(f'Expect 2D population & coherence arrays, got shapes {style((pops.shape, coh.shape))}')
        if coh.shape != (pops.shape[0] - 1, pops.shape[1] - 1):
            raise StructureError(
                f'Coherence band must be one shorter than populations per mode, got shapes {style((pops.shape, coh.shape))}')
        pops.setflags(write=False)
        coh.setflags(write=False)
        object.__setattr__(self, 'populations', pops)
        object.__setattr__(self, 'coherences', coh)
        if check:
            self._check()

    def _check(self):
        if np.any(self.populations < -1e-12):
            raise StructureError(f'Negative population, minimum {style(float(self.populations.min()))}')
        if self.normalized and abs(self.trace - 1) > 1e-10:
            raise StructureError(f'Normalized field state must have trace 1, got {style(self.trace)}')
        bound = self.populations[:-1, :-1] * self.populations[1:, 1:] + 1e-12
        bad = np.abs(self.coherences) ** 2 > bound
        if np.any(bad):
            n1, n2 = (int(i) for i in np.argwhere(bad)[0])
            raise StructureError(f'Coherence at {style((n1, n2))} exceeds the geometric mean of its populations')

    @property
    def shape(self) -> Tuple[int, int]:
        """
        Number of Fock levels kept per mode
        """
        return self.populations.shape

    @property
    def cutoffs(self) -> Tuple[int, int]:
        return self.shape[0] - 2, self.shape[1] - 2

    @property
    def trace(self) -> float:
        return float(self.populations.sum())

    @property
    def probability(self) -> float:
        """
        Probability of the conditioning outcome over the truncated ensemble
        """
        return 1 / self.normalization

    def population_map(self) -> Dict[Label, float]:
        return {(int(m1), int(m2)): float(self.populations[m1, m2]) for m1, m2 in np.argwhere(self.populations != 0)}

    def coherence_map(self) -> Dict[Label, complex]:
        return {(int(n1), int(n2)): complex(self.coherences[n1, n2]) for n1, n2 in np.argwhere(self.coherences != 0)}

    def to_dense(self) -> np.ndarray:
        """
        Density matrix on the truncated product basis, label `(m1, m2)` at index `m1 * D2 + m2`
        """
        d1, d2 = self.shape
        ret = np.diag(self.populations.reshape(-1).astype(complex))
        n1, n2 = np.meshgrid(np.arange(d1 - 1), np.arange(d2 - 1), indexing='ij')
        row, col = (n1 * d2 + n2).reshape(-1), ((n1 + 1) * d2 + n2 + 1).reshape(-1)
        ret[row, col] = self.coherences.reshape(-1)
        ret[col, row] = self.coherences.reshape(-1).conj()
        return ret

    @classmethod
    def from_entries(
            cls, populations: Mapping[Label, float], coherences: Mapping[Tuple, complex] = None,
            normalized: bool = True, outcome: str = PLUS
    ) -> 'FieldState':
        """
        :param populations: diagonal entries keyed by label `(m1, m2)`
        :param coherences: upper off-diagonal entries keyed by `((a1, a2), (b1, b2))` for `|a><b|`,
            or by `(n1, n2)` as shorthand for the band entry `|n1, n2><n1+1, n2+1|`
        """
        coherences = coherences or dict()
        band: Dict[Label, complex] = dict()
        for k, v in coherences.items():
            if len(k) == 2 and all(isinstance(x, tuple) for x in k):
                (a1, a2), (b1, b2) = k
                if (b1 - a1, b2 - a2) == (-1, -1):  # the lower entry, store its conjugate
                    (a1, a2), (b1, b2), v = (b1, b2), (a1, a2), complex(v).conjugate()
                if (b1 - a1, b2 - a2) != (1, 1):
                    raise StructureError(f'Coherence {style(k)} is off the (+1, +1) band')
                k = (a1, a2)
            band[k] = complex(v)
        labels = list(populations) + list(band) + [(n1 + 1, n2 + 1) for n1, n2 in band]
        if any(m1 < 0 or m2 < 0 for m1, m2 in labels):
            raise StructureError(f'Negative Fock label in {style(labels)}')
        d1 = max([m1 for m1, _ in labels] + [1]) + 1
        d2 = max([m2 for _, m2 in labels] + [1]) + 1
        pops, coh = np.zeros((d1, d2)), np.zeros((d1 - 1, d2 - 1), dtype=complex)
        for (m1, m2), p in populations.items():
            pops[m1, m2] = p
        for (n1, n2), c in band.items():
            coh[n1, n2] = c
        return cls(populations=pops, coherences=coh, normalized=normalized, outcome=outcome)


def _accumulate(
        weights: np.ndarray, p_ee: np.ndarray, p_gg: np.ndarray, c_eg: np.ndarray, params: ModelParams, outcome: str
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Population `(m1, m2)` receives `w_low` of block `(m1, m2)` & `w_high` of block `(m1-1, m2-1)`
    """
    w_low, w_high, c = _erase_terms(p_ee, p_gg, c_eg, params.theta, params.phi, outcome)
    n1, n2 = weights.shape
    pops = np.zeros((n1 + 1, n2 + 1))
    pops[:-1, :-1] += weights * w_low
    pops[1:, 1:] += weights * w_high
    return pops, weights * c


def _mix_unnormalized(
        t: Time, params: ModelParams, spec: ThermalSpec, trunc: TruncationConfig, outcome: str
) -> Tuple[np.ndarray, np.ndarray, Tuple[int, int]]:
    ca(channel=outcome)
    n1_max, n2_max = trunc.cutoffs(spec)
    n1, n2 = np.meshgrid(np.arange(n1_max + 1), np.arange(n2_max + 1), indexing='ij')
    weights = thermal_weight(n1, n2, spec)
    p_ee, p_gg, c_eg = block_terms(n1, n2, t, params)
    pops, coh = _accumulate(weights, p_ee, p_gg, c_eg, params, outcome)
    return pops, coh, (n1_max, n2_max)


def _normalize(pops: np.ndarray, coh: np.ndarray, outcome: str, ctx: Dict) -> FieldState:
    total = float(pops.sum())
    if not total > 0:
        raise ParameterError(f'Outcome {style(outcome)} has zero probability at {style(ctx)}')
    norm = 1 / total
    return FieldState(populations=pops * norm, coherences=coh * norm, normalization=norm, normalized=True, outcome=outcome)


def mix_thermal(
        t: Time, params: ModelParams, spec: ThermalSpec, trunc: TruncationConfig = None, outcome: str = PLUS
) -> FieldState:
    """
    Thermal average of the unnormalized erased blocks, normalized once over the truncated ensemble

    :param t: Time, or `STATIONARY`
    :param outcome: One of [`plus`, `minus`], or `traced` for discarding the atom without measurement
    """
    trunc = trunc or TruncationConfig()
    pops, coh, cutoffs = _mix_unnormalized(t, params, spec, trunc, outcome)
    logger.debug(f'Mixed field state with cutoffs {style(cutoffs)} at t={style(t)}')
    return _normalize(pops, coh, outcome, ctx=dict(t=t, mbar1=spec.mbar1, mbar2=spec.mbar2))


def outcome_probabilities(
        t: Time, params: ModelParams, spec: ThermalSpec, trunc: TruncationConfig = None
) -> Dict[str, float]:
    """
    Probability of each measurement outcome over the truncated thermal ensemble, relative to the thermal weight kept
    """
    trunc = trunc or TruncationConfig()
    ret = {o: float(_mix_unnormalized(t, params, spec, trunc, o)[0].sum()) for o in OUTCOMES}
    kept = sum(ret.values())  # every block has unit trace, so this is the kept weight
    return {o: p / kept for o, p in ret.items()}


def mix_fock(n1: int, n2: int, t: Time, params: ModelParams, outcome: str = PLUS) -> FieldState:
    """
    Field state for the fields starting in the Fock state `|n1, n2>`, a single normalized erased block
    """
    ca(channel=outcome)
    if n1 < 0 or n2 < 0:
        raise ParameterError(f'Fock labels must be non-negative, got {style(dict(n1=n1, n2=n2))}')
    weights = np.zeros((n1 + 1, n2 + 1))
    weights[n1, n2] = 1.0
    p_ee, p_gg, c_eg = block_terms(np.array(n1), np.array(n2), t, params)
    pops, coh = _accumulate(weights, p_ee, p_gg, c_eg, params, outcome)
    return _normalize(pops, coh, outcome, ctx=dict(t=t, fock=(n1, n2)))
