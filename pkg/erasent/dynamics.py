"""
Time evolution of block `(n1, n2)` under phase decoherence, the atom starting excited & the fields in `|n1, n2>`

The closed-form solution is the fast path; `oracle_evolve_block` & `rk4_evolve_block` are independent numerical
    evaluations of the master equation for validation
"""

import math
from dataclasses import dataclass, InitVar
from typing import Tuple, Union

import numpy as np
from scipy.special import gammaln

from erasent.model import ModelParams, block_hamiltonian, _check_labels, _rabi_squared
from erasent.errors import ParameterError, NoStationaryStateError, StructureError, ConvergenceError
from erasent.prettier import get_logger, style


__all__ = [
    'STATIONARY', 'Time',
    'AtomFieldBlockState', 'evolve_block', 'stationary_block', 'oracle_evolve_block', 'rk4_evolve_block',
    'block_leakage',
]


logger = get_logger(__name__)


STATIONARY = 'stationary'
Time = Union[float, str]  # a non-negative time or `STATIONARY`

_TOL = 1e-12


@dataclass(frozen=True)
class AtomFieldBlockState:
    """
    2x2 density matrix on `{|n1, n2, e>, |n1+1, n2+1, g>}`

    :param p_ee: population of `|n1, n2, e>`
    :param p_gg: population of `|n1+1, n2+1, g>`
    :param c_eg: coherence `<n1, n2, e| rho |n1+1, n2+1, g>`, the lower one is its conjugate
    :param check: If true, trace & positivity are asserted
    """
    n1: int
    n2: int
    p_ee: float
    p_gg: float
    c_eg: complex
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        object.__setattr__(self, 'p_ee', float(self.p_ee))
        object.__setattr__(self, 'p_gg', float(self.p_gg))
        object.__setattr__(self, 'c_eg', complex(self.c_eg))
        if not check:
            return
        if self.p_ee < -_TOL or self.p_gg < -_TOL:
            raise StructureError(f'Negative block population: {style(dict(p_ee=self.p_ee, p_gg=self.p_gg))}')
        if abs(self.trace - 1) > _TOL:
            raise StructureError(f'Block trace must be 1, got {style(self.trace)}')
        if self.determinant < -_TOL:
            raise StructureError(f'Block is not positive: {style(dict(det=self.determinant, c_eg=self.c_eg))}')

    @property
    def trace(self) -> float:
        return self.p_ee + self.p_gg

    @property
    def determinant(self) -> float:
        return self.p_ee * self.p_gg - abs(self.c_eg) ** 2

    def matrix(self) -> np.ndarray:
        return np.array([[self.p_ee, self.c_eg], [self.c_eg.conjugate(), self.p_gg]], dtype=complex)

    @classmethod
    def from_matrix(cls, n1: int, n2: int, rho: np.ndarray, check: bool = True) -> 'AtomFieldBlockState':
        return cls(n1=n1, n2=n2, p_ee=rho[0, 0].real, p_gg=rho[1, 1].real, c_eg=rho[0, 1], check=check)


def _check_time(t: float):
    if not (math.isfinite(t) and t >= 0):
        raise ParameterError(f'Time {style("t")} must be non-negative, got {style(t)}')


def _evolve_terms(
        n1: np.ndarray, n2: np.ndarray, t: float, params: ModelParams
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Closed-form `(p_ee, p_gg, c_eg)` over arrays of labels
    """
    s2 = ((np.asarray(n1) + 1) * (np.asarray(n2) + 1)).astype(float)
    omega2 = _rabi_squared(n1, n2, params)
    omega = np.sqrt(omega2)
    delta, g = params.delta, params.g

    decay = np.exp(-2 * params.gamma * t * omega2)
    cos, sin = decay * np.cos(2 * omega * t), decay * np.sin(2 * omega * t)
    r = delta ** 2 / (2 * omega2)
    p_ee = (2 + r + (2 - r) * cos) / 4
    p_gg = g ** 2 * s2 / omega2 * (2 - 2 * cos) / 4
    c_eg = g * np.sqrt(s2) / (4 * omega) * (delta / omega * (1 - cos) + 2j * sin)
    return p_ee, p_gg, c_eg


def _stationary_terms(
        n1: np.ndarray, n2: np.ndarray, params: ModelParams
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    s2 = ((np.asarray(n1) + 1) * (np.asarray(n2) + 1)).astype(float)
    omega2 = _rabi_squared(n1, n2, params)
    p_ee = (2 + params.delta ** 2 / (2 * omega2)) / 4
    p_gg = params.g ** 2 * s2 / (2 * omega2)
    c_eg = (params.g * params.delta * np.sqrt(s2) / (4 * omega2)).astype(complex)
    return p_ee, p_gg, c_eg


def block_terms(
        n1: np.ndarray, n2: np.ndarray, t: Time, params: ModelParams
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized `(p_ee, p_gg, c_eg)` at time `t` or in the stationary limit
    """
    if isinstance(t, str):
        if t != STATIONARY:
            raise ParameterError(f'Expect a time or {style(STATIONARY)}, got {style(t)}')
        if not params.gamma > 0:
            raise NoStationaryStateError(params.gamma)
        return _stationary_terms(n1, n2, params)
    _check_time(t)
    return _evolve_terms(n1, n2, t, params)


def evolve_block(n1: int, n2: int, t: float, params: ModelParams) -> AtomFieldBlockState:
    _check_labels(n1, n2)
    _check_time(t)
    p_ee, p_gg, c_eg = _evolve_terms(n1, n2, t, params)
    return AtomFieldBlockState(n1=int(n1), n2=int(n2), p_ee=p_ee, p_gg=p_gg, c_eg=c_eg)


def stationary_block(n1: int, n2: int, params: ModelParams) -> AtomFieldBlockState:
    """
    The `t -> inf` limit, where every decaying term has vanished
    """
    _check_labels(n1, n2)
    if not params.gamma > 0:
        raise NoStationaryStateError(params.gamma)
    p_ee, p_gg, c_eg = _stationary_terms(n1, n2, params)
    return AtomFieldBlockState(n1=int(n1), n2=int(n2), p_ee=p_ee, p_gg=p_gg, c_eg=c_eg)


_SERIES_TOL = 1e-14
_SERIES_MAX_TERMS = 10 ** 6
_SERIES_CHUNK = 256


def oracle_evolve_block(
        n1: int, n2: int, t: float, params: ModelParams, k_max: int = 1
) -> AtomFieldBlockState:
    """
    Sums the formal solution `rho(t) = sum_k (gamma t)^k / k! M^k rho(0) M^k^dagger` term by term,
        with `M^k = H^k exp(-iHt) exp(-gamma t H^2 / 2)` built from the dressed-state decomposition of the block

    :param k_max: Minimum number of terms summed, more are added until the tail falls below `1e-14`
    """
    _check_labels(n1, n2)
    _check_time(t)
    if k_max < 1:
        raise ParameterError(f'{style("k_max")} must be at least 1, got {style(k_max)}')
    h = block_hamiltonian(n1, n2, params)
    f = np.array(h.eigenvalues)
    v = h.eigenvectors()
    rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
    gt = params.gamma * t

    phase = np.exp(-1j * f * t)
    if gt == 0:  # only the zeroth term survives
        m0 = v @ np.diag(phase) @ v.T
        return AtomFieldBlockState.from_matrix(n1, n2, m0 @ rho0 @ m0.conj().T, check=False)

    with np.errstate(divide='ignore'):
        log_f = np.log(np.abs(f))  # -inf for a zero eigenvalue, whose terms vanish past k = 0
    sign = np.sign(f)
    lam_max = float(np.max(gt * f ** 2))  # mean of the Poisson weights

    rho = np.zeros((2, 2), dtype=complex)
    k0 = 0
    while True:
        k = np.arange(k0, k0 + _SERIES_CHUNK)[:, None]  # (K, 1)
        # log of |(gamma t)^k / k!| * |f|^(2k) * exp(-gamma t f^2), per dressed state
        with np.errstate(invalid='ignore'):
            log_w = k * math.log(gt) - gammaln(k + 1) + np.where(k == 0, 0.0, 2 * k * log_f) - gt * f ** 2
        amp = np.exp(log_w / 2) * np.where(sign < 0, (-1.0) ** k, 1.0) * phase  # (K, 2)
        m = np.einsum('ij,kj,lj->kil', v, amp, v)  # M^k = V diag(amp_k) V^T
        terms = m @ rho0 @ m.conj().transpose(0, 2, 1)
        rho += terms.sum(axis=0)
        k0 += _SERIES_CHUNK

        last = float(np.trace(terms[-1]).real)
        ratio = lam_max / k0
        if k0 >= k_max and ratio < 1 and last * ratio / (1 - ratio) < _SERIES_TOL:
            break
        if k0 >= _SERIES_MAX_TERMS:
            raise ConvergenceError(
                f'Series did not converge within {style(_SERIES_MAX_TERMS)} terms: {style(dict(n1=n1, n2=n2, t=t))}')
    logger.debug(f'Series summed with {style(k0)} terms for block {style((n1, n2))} at t={style(t)}')
    return AtomFieldBlockState.from_matrix(n1, n2, rho, check=False)


def _lindblad_rhs(h: np.ndarray, rho: np.ndarray, gamma: float) -> np.ndarray:
    """
    Phase-decoherence master equation, `-i[H, rho] - gamma/2 [H, [H, rho]]`
    """
    comm = h @ rho - rho @ h
    return -1j * comm - gamma / 2 * (h @ comm - comm @ h)


def _rk4_step(h: np.ndarray, rho: np.ndarray, dt: float, gamma: float) -> np.ndarray:
    k1 = _lindblad_rhs(h, rho, gamma)
    k2 = _lindblad_rhs(h, rho + 0.5 * dt * k1, gamma)
    k3 = _lindblad_rhs(h, rho + 0.5 * dt * k2, gamma)
    k4 = _lindblad_rhs(h, rho + dt * k3, gamma)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


# Hermitian 2x2 basis for the real coordinates `(p_ee, p_gg, Re c_eg, Im c_eg)`
_BASIS = np.array([
    [[1, 0], [0, 0]],
    [[0, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, 1j], [-1j, 0]],
], dtype=complex)


def _to_coords(rho: np.ndarray) -> np.ndarray:
    return np.array([rho[0, 0].real, rho[1, 1].real, rho[0, 1].real, rho[0, 1].imag])


def rk4_evolve_block(n1: int, n2: int, t: float, params: ModelParams) -> AtomFieldBlockState:
    """
    Fixed-step fourth-order Runge-Kutta integration of the master equation on the 4 real block coordinates

    Step size is `min(0.01 / Omega, 0.01 / (gamma Omega^2))`, shrunk so that it divides `t`
    """
    _check_labels(n1, n2)
    _check_time(t)
    h = block_hamiltonian(n1, n2, params)
    ham = h.matrix() - h.base_energy * np.eye(2)  # the scalar part commutes with everything
    omega = h.omega_rabi
    step = 0.01 / omega
    if params.gamma > 0:
        step = min(step, 0.01 / (params.gamma * omega ** 2))
    n_step = max(math.ceil(t / step), 1)
    dt = t / n_step

    # one RK4 step is linear in rho, so it is a 4x4 real propagator on the coordinates
    prop = np.stack([_to_coords(_rk4_step(ham, b, dt, params.gamma)) for b in _BASIS], axis=1)
    coords = np.linalg.matrix_power(prop, n_step) @ np.array([1.0, 0.0, 0.0, 0.0])
    logger.debug(f'RK4 with {style(n_step)} steps for block {style((n1, n2))} at t={style(t)}')
    p_ee, p_gg, x, y = coords
    return AtomFieldBlockState(n1=int(n1), n2=int(n2), p_ee=p_ee, p_gg=p_gg, c_eg=x + 1j * y, check=False)


def _full_hamiltonian(d1: int, d2: int, params: ModelParams) -> np.ndarray:
    """
    Hamiltonian on the truncated space `Fock(d1) x Fock(d2) x atom`, atom ordered `(e, g)`
    """
    a1, a2 = np.diag(np.sqrt(np.arange(1, d1)), k=1), np.diag(np.sqrt(np.arange(1, d2)), k=1)
    i1, i2 = np.eye(d1), np.eye(d2)
    sz = np.diag([1.0, -1.0])
    sp = np.array([[0.0, 1.0], [0.0, 0.0]])  # |e><g|
    n1_op, n2_op = a1.T @ a1, a2.T @ a2
    ret = params.omega1 * np.kron(np.kron(n1_op, i2), np.eye(2)) \
        + params.omega2 * np.kron(np.kron(i1, n2_op), np.eye(2)) \
        + params.omega / 2 * np.kron(np.kron(i1, i2), sz)
    absorb = np.kron(np.kron(a1, a2), sp)  # a1 a2 |e><g|
    return ret + params.g * (absorb + absorb.T)


def block_leakage(block: AtomFieldBlockState, params: ModelParams) -> float:
    """
    Embeds a block state into a truncated Fock space large enough to hold its neighbours, applies the master-equation
        generator & returns the largest entry of the result outside the block

    Zero up to rounding whenever the block is invariant under the dynamics
    """
    n1, n2 = block.n1, block.n2
    d1, d2 = n1 + 3, n2 + 3
    ham = _full_hamiltonian(d1, d2, params)

    def idx(m1: int, m2: int, atom: int) -> int:
        return (m1 * d2 + m2) * 2 + atom
    inside = [idx(n1, n2, 0), idx(n1 + 1, n2 + 1, 1)]
    rho = np.zeros_like(ham, dtype=complex)
    rho[np.ix_(inside, inside)] = block.matrix()

    out = _lindblad_rhs(ham, rho, params.gamma)
    mask = np.ones(out.shape, dtype=bool)
    mask[np.ix_(inside, inside)] = False
    return float(np.max(np.abs(out[mask])))


if __name__ == '__main__':
    from erasent.prettier import sic

    def check_oracles():
        params = ModelParams.from_detuning(delta=1.0, g=0.5, gamma=0.5)
        for n1, n2, t in [(0, 0, 50.0), (1, 2, 3.0), (5, 5, 20.0)]:
            sic(evolve_block(n1, n2, t, params))
            sic(oracle_evolve_block(n1, n2, t, params))
            sic(rk4_evolve_block(n1, n2, t, params))
        sic(block_leakage(evolve_block(1, 1, 2.0, params), params))
    check_oracles()
