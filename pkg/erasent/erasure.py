"""
Projective measurement of the atom in a tilted basis, leaving an unnormalized two-mode field block

Outcome `plus` projects onto `cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>`,
    outcome `minus` onto `cos(theta/2)|g> - e^{-i phi} sin(theta/2)|e>`
"""

import math
from dataclasses import dataclass, InitVar
from typing import Tuple

import numpy as np

from erasent.dynamics import AtomFieldBlockState
from erasent.errors import StructureError
from erasent.prettier import check_arg as ca, style


__all__ = [
    'PLUS', 'MINUS', 'TRACED', 'OUTCOMES',
    'FieldBlock', 'MeasurementOutcome', 'erase', 'outcome_probability', 'measure', 'trace_out_atom',
]


PLUS, MINUS = 'plus', 'minus'
TRACED = 'traced'  # no measurement, the atom is traced out
OUTCOMES = (PLUS, MINUS)

_TOL = 1e-12


@dataclass(frozen=True)
class FieldBlock:
    """
    Field operator `w_low |n1,n2><n1,n2| + w_high |n1+1,n2+1><n1+1,n2+1| + (c |n1,n2><n1+1,n2+1| + h.c.)`
    """
    n1: int
    n2: int
    w_low: float
    w_high: float
    c: complex
    normalized: bool = False
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        object.__setattr__(self, 'w_low', float(self.w_low))
        object.__setattr__(self, 'w_high', float(self.w_high))
        object.__setattr__(self, 'c', complex(self.c))
        if not check:
            return
        if self.w_low < -_TOL or self.w_high < -_TOL:
            raise StructureError(f'Negative field block weight: {style(dict(w_low=self.w_low, w_high=self.w_high))}')
        if abs(self.c) ** 2 > self.w_low * self.w_high + _TOL:
            raise StructureError(f'Field block is not positive: {style(dict(w_low=self.w_low, w_high=self.w_high, c=self.c))}')
        if self.normalized and abs(self.trace - 1) > _TOL:
            raise StructureError(f'Normalized field block must have trace 1, got {style(self.trace)}')

    @property
    def trace(self) -> float:
        return self.w_low + self.w_high

    def normalize(self) -> 'FieldBlock':
        tr = self.trace
        if not tr > 0:
            raise StructureError(f'Cannot normalize a field block of trace {style(tr)}')
        return FieldBlock(self.n1, self.n2, self.w_low / tr, self.w_high / tr, self.c / tr, normalized=True)


@dataclass(frozen=True)
class MeasurementOutcome:
    label: str
    probability: float

    def __post_init__(self):
        ca(outcome=self.label)


def _erase_terms(
        p_ee: np.ndarray, p_gg: np.ndarray, c_eg: np.ndarray, theta: float, phi: float, channel: str
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized `(w_low, w_high, c)` for a measurement outcome, or for tracing out the atom
    """
    ca(channel=channel)
    if channel == TRACED:
        return p_ee, p_gg, np.zeros_like(c_eg, dtype=complex)
    cos2, sin2 = math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2
    cross = 0.5 * math.sin(theta) * np.exp(1j * phi) * c_eg
    if channel == PLUS:
        return cos2 * p_ee, sin2 * p_gg, cross
    else:
        return sin2 * p_ee, cos2 * p_gg, -cross


def erase(block: AtomFieldBlockState, theta: float, phi: float, outcome: str = PLUS) -> FieldBlock:
    """
    :return: The unnormalized field block conditioned on `outcome`, its trace is the outcome probability
    """
    ca(outcome=outcome)
    w_low, w_high, c = _erase_terms(block.p_ee, block.p_gg, block.c_eg, theta, phi, outcome)
    return FieldBlock(n1=block.n1, n2=block.n2, w_low=w_low, w_high=w_high, c=c)


def outcome_probability(block: AtomFieldBlockState, theta: float, phi: float, outcome: str = PLUS) -> float:
    return erase(block, theta, phi, outcome).trace


def measure(block: AtomFieldBlockState, theta: float, phi: float, outcome: str = PLUS) -> Tuple[MeasurementOutcome, FieldBlock]:
    """
    :return: The outcome with its probability, and the field block normalized to it
    """
    fb = erase(block, theta, phi, outcome)
    return MeasurementOutcome(label=outcome, probability=fb.trace), fb.normalize()


def trace_out_atom(block: AtomFieldBlockState) -> FieldBlock:
    """
    Field block with the atom discarded instead of measured, always diagonal
    """
    return FieldBlock(n1=block.n1, n2=block.n2, w_low=block.p_ee, w_high=block.p_gg, c=0, normalized=True, check=False)
