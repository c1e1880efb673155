"""
Physical parameters of the two-mode two-photon Jaynes-Cummings model & the analytic decomposition of its Hamiltonian
    into 2x2 invariant blocks

Block `(n1, n2)` is spanned by `|n1, n2, e>` & `|n1+1, n2+1, g>`, `hbar = 1` throughout
"""

import math
import dataclasses
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from erasent.errors import ParameterError
from erasent.prettier import style


__all__ = ['ModelParams', 'BlockHamiltonian', 'rabi_frequency', 'block_hamiltonian']


Index = Union[int, np.ndarray]


def _check_finite(**kwargs):
    for k, v in kwargs.items():
        if not math.isfinite(v):
            raise ParameterError(f'{style(k)} must be finite, got {style(v)}')


@dataclass(frozen=True)
class ModelParams:
    """
    :param omega1: mode-1 frequency
    :param omega2: mode-2 frequency
    :param omega: atomic transition frequency
    :param g: atom-field coupling constant
    :param gamma: phase decoherence coefficient
    :param theta: polar angle of the atom measurement basis, in [0, pi]
    :param phi: azimuthal angle of the atom measurement basis, wrapped into [0, 2pi)

    The detuning is derived from the three frequencies, see `delta`
    """
    omega1: float = 1.0
    omega2: float = 1.0
    omega: float = 3.0
    g: float = 0.5
    gamma: float = 0.5
    theta: float = math.pi / 2
    phi: float = 0.0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        _check_finite(**dataclasses.asdict(self))
        if not self.g > 0:
            raise ParameterError(f'Coupling constant {style("g")} must be positive, got {style(self.g)}')
        if self.gamma < 0:
            raise ParameterError(f'Decoherence coefficient {style("gamma")} must be non-negative, got {style(self.gamma)}')
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise ParameterError(f'Mode frequencies must be positive, got {style(dict(omega1=self.omega1, omega2=self.omega2))}')
        if not 0 <= self.theta <= math.pi:
            raise ParameterError(f'{style("theta")} must lie in [0, pi], got {style(self.theta)}')
        phi = self.phi % (2 * math.pi)
        if phi == 2 * math.pi:  # `%` of a tiny negative rounds up to the period
            phi = 0.0
        object.__setattr__(self, 'phi', phi)

    @property
    def delta(self) -> float:
        """
        Detuning from the two-photon resonance
        """
        return self.omega - self.omega1 - self.omega2

    @classmethod
    def from_detuning(
            cls, delta: float = 1.0, omega1: float = 1.0, omega2: float = 1.0, g: float = 0.5, gamma: float = 0.5,
            theta: float = math.pi / 2, phi: float = 0.0
    ) -> 'ModelParams':
        return cls(omega1=omega1, omega2=omega2, omega=omega1 + omega2 + delta, g=g, gamma=gamma, theta=theta, phi=phi)

    def replace(self, **changes) -> 'ModelParams':
        """
        `dataclasses.replace`, additionally accepting `delta` which sets `omega` against the (possibly new) mode frequencies
        """
        delta = changes.pop('delta', None)
        if delta is not None:
            if 'omega' in changes:
                raise ParameterError(f'Specify at most one of {style("omega")} and {style("delta")}')
            omega1, omega2 = changes.get('omega1', self.omega1), changes.get('omega2', self.omega2)
            changes['omega'] = omega1 + omega2 + delta
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class BlockHamiltonian:
    """
    Hamiltonian restricted to block `(n1, n2)`: `base_energy * I + [[delta/2, coupling], [coupling, -delta/2]]`
    """
    n1: int
    n2: int
    omega_rabi: float
    f_plus: float
    f_minus: float
    base_energy: float
    delta: float
    coupling: float  # g * sqrt((n1+1)(n2+1))

    @property
    def mixing_angle(self) -> float:
        """
        `arctan(2 * coupling / delta)`, taken on the branch in [0, pi] so that it is continuous through resonance
        """
        return math.atan2(2 * self.coupling, self.delta)

    def matrix(self) -> np.ndarray:
        d = self.delta / 2
        return np.array([[self.base_energy + d, self.coupling], [self.coupling, self.base_energy - d]])

    def eigenvectors(self) -> np.ndarray:
        """
        :return: Columns are the dressed states of energy `f_plus` and `f_minus`, in the (e, g) basis
        """
        half = self.mixing_angle / 2
        c, s = math.cos(half), math.sin(half)
        return np.array([[c, -s], [s, c]])

    @property
    def eigenvalues(self) -> Tuple[float, float]:
        return self.f_plus, self.f_minus


def _check_labels(n1: Index, n2: Index):
    if np.any(np.asarray(n1) < 0) or np.any(np.asarray(n2) < 0):
        raise ParameterError(f'Fock labels must be non-negative, got {style(dict(n1=n1, n2=n2))}')


def _rabi_squared(n1: Index, n2: Index, params: ModelParams) -> Union[float, np.ndarray]:
    s2 = (np.asarray(n1) + 1) * (np.asarray(n2) + 1)
    return params.delta ** 2 / 4 + params.g ** 2 * s2


def rabi_frequency(n1: Index, n2: Index, params: ModelParams) -> Union[float, np.ndarray]:
    """
    `sqrt(delta^2/4 + g^2 (n1+1)(n2+1))`, elementwise for array labels
    """
    _check_labels(n1, n2)
    ret = np.sqrt(_rabi_squared(n1, n2, params))
    return float(ret) if np.ndim(ret) == 0 else ret


def block_hamiltonian(n1: int, n2: int, params: ModelParams) -> BlockHamiltonian:
    _check_labels(n1, n2)
    n1, n2 = int(n1), int(n2)
    omega_rabi = rabi_frequency(n1, n2, params)
    base = params.omega1 * (n1 + 0.5) + params.omega2 * (n2 + 0.5)
    return BlockHamiltonian(
        n1=n1, n2=n2, omega_rabi=omega_rabi, f_plus=base + omega_rabi, f_minus=base - omega_rabi, base_energy=base,
        delta=params.delta, coupling=params.g * math.sqrt((n1 + 1) * (n2 + 1))
    )


if __name__ == '__main__':
    from erasent.prettier import sic

    def check_block():
        params = ModelParams.from_detuning(delta=1.0)
        h = block_hamiltonian(1, 1, params)
        sic(h, h.mixing_angle)
        sic(np.linalg.eigvalsh(h.matrix()))
        v = h.eigenvectors()
        sic(v.T @ h.matrix() @ v)
    check_block()
