"""
Log-negativity of a `FieldState` through the structure of its partial transpose

Coherence `|n1, n2><n1+1, n2+1|` is moved by the mode-2 transpose onto `|n1, n2+1><n1+1, n2|`, both labels with
    total photon number `S = n1 + n2 + 1`. The partial transpose is hence a direct sum over `S` of Hermitian tridiagonal
    chains `(0, S) - (1, S-1) - ... - (S, 0)`, split further wherever a coupling is zero.
    Components of 2 labels are the usual 2x2 blocks
"""

import math
from dataclasses import dataclass
from typing import Tuple, List, Iterator

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from erasent.model import ModelParams, _check_labels, _rabi_squared
from erasent.thermal import FieldState, Label
from erasent.errors import ParameterError, NoStationaryStateError, DimensionError
from erasent.prettier import check_arg as ca, style


__all__ = [
    'EIGEN_CLAMP',
    'PartialTransposeBlock', 'partial_transpose_blocks', 'log_negativity', 'stationary_block_logneg',
    'oracle_log_negativity', 'field_spectrum',
]


EIGEN_CLAMP = 1e-13  # eigenvalues smaller in magnitude count as zero


@dataclass(frozen=True, eq=False)
class PartialTransposeBlock:
    """
    A connected component of the partial transpose, a Hermitian tridiagonal matrix over `labels`

    :param labels: Basis labels in chain order, consecutive labels differ by `(+1, -1)`
    :param diagonal: Populations at `labels`
    :param couplings: Upper off-diagonal entries, all non-zero
    """
    labels: Tuple[Label, ...]
    diagonal: np.ndarray
    couplings: np.ndarray

    def __len__(self):
        return len(self.labels)

    @property
    def pair(self) -> Tuple[Label, Label]:
        if len(self) != 2:
            raise ValueError(f'{style("pair")} is defined for 2-label blocks only, got {style(len(self))} labels')
        return self.labels[0], self.labels[1]

    @property
    def d1(self) -> float:
        return float(self.diagonal[0])

    @property
    def d2(self) -> float:
        return float(self.diagonal[1])

    @property
    def c(self) -> complex:
        return complex(self.couplings[0])

    def eigenvalues(self) -> np.ndarray:
        """
        Ascending; only `|couplings|` enters since a diagonal unitary makes a Hermitian tridiagonal matrix real
        """
        if len(self) == 2:
            mean, half = (self.d1 + self.d2) / 2, (self.d1 - self.d2) / 2
            r = math.sqrt(half ** 2 + abs(self.c) ** 2)
            return np.array([mean - r, mean + r])
        return eigvalsh_tridiagonal(self.diagonal, np.abs(self.couplings))


def _anti_diagonal_chains(state: FieldState, mode: int) -> Iterator[Tuple[int, np.ndarray, np.ndarray, np.ndarray]]:
    """
    :return: per total photon number `S`, the mode-1 labels of the chain, its diagonal & its couplings
    """
    pops, coh = state.populations, state.coherences
    d1, d2 = state.shape
    for s in range(d1 + d2 - 1):
        m1 = np.arange(max(0, s - d2 + 1), min(s, d1 - 1) + 1)
        diag = pops[m1, s - m1]
        off = coh[m1[:-1], s - m1[:-1] - 1]
        yield s, m1, diag, (off if mode == 2 else off.conj())


def partial_transpose_blocks(
        state: FieldState, mode: int = 2
) -> Tuple[List[PartialTransposeBlock], List[Tuple[Label, float]]]:
    """
    :param state: Field state
    :param mode: The mode transposed
    :return: The coupled components, and the uncoupled diagonal entries keyed by label;
        together they partition every entry of the partially transposed matrix
    """
    ca(transpose_mode=mode)
    blocks, uncoupled = [], []
    for s, m1, diag, off in _anti_diagonal_chains(state, mode):
        cuts = [0] + [int(i) + 1 for i in np.flatnonzero(off == 0)] + [len(m1)]
        for a, b in zip(cuts[:-1], cuts[1:]):
            labels = tuple((int(j), s - int(j)) for j in m1[a:b])
            if b - a == 1:
                uncoupled.append((labels[0], float(diag[a])))
            else:
                blocks.append(PartialTransposeBlock(labels=labels, diagonal=diag[a:b].copy(), couplings=off[a:b - 1].copy()))
    return blocks, uncoupled


def _log_neg(negative_mass: float) -> float:
    return math.log2(1 + 2 * negative_mass) if negative_mass > 0 else 0.0


def log_negativity(state: FieldState, mode: int = 2) -> float:
    """
    `log2 || rho^T ||_1`, which for unit trace is `log2(1 + 2 * sum of |negative eigenvalues|)`

    Exactly 0 when no eigenvalue falls below `-EIGEN_CLAMP`
    """
    if not state.normalized:
        raise ParameterError(f'Log-negativity requires a normalized state, got trace {style(state.trace)}')
    blocks, uncoupled = partial_transpose_blocks(state, mode=mode)
    eigs = [b.eigenvalues() for b in blocks] + [np.array([p for _, p in uncoupled])]
    eigs = np.concatenate(eigs)
    return _log_neg(float(-eigs[eigs < -EIGEN_CLAMP].sum()))


def stationary_block_logneg(n1: int, n2: int, params: ModelParams) -> float:
    """
    Closed form for the stationary state of the fields started in `|n1, n2>`, conditioned on outcome `plus`:
        `log2(1 + 2 |sin(theta) g delta sqrt((n1+1)(n2+1)) / (4 Omega^2 + delta^2 cos(theta))|)`
    """
    _check_labels(n1, n2)
    if not params.gamma > 0:
        raise NoStationaryStateError(params.gamma)
    omega2 = float(_rabi_squared(n1, n2, params))
    denom = 4 * omega2 + params.delta ** 2 * math.cos(params.theta)
    if denom == 0:
        raise ParameterError(f'Vanishing denominator for block {style((n1, n2))} at {style(params)}')
    x = math.sin(params.theta) * params.g * params.delta * math.sqrt((n1 + 1) * (n2 + 1)) / denom
    x = abs(x)
    return _log_neg(x if x >= EIGEN_CLAMP else 0.0)


def oracle_log_negativity(state: FieldState, max_dim: int = 4096, mode: int = 2) -> float:
    """
    Dense path: materializes the matrix, transposes `mode` entrywise & sums the absolute eigenvalues
    """
    ca(transpose_mode=mode)
    d1, d2 = state.shape
    dim = d1 * d2
    if dim > max_dim:
        raise DimensionError(f'Dense dimension {style(dim)} exceeds the cap {style(max_dim)}')
    rho = state.to_dense().reshape(d1, d2, d1, d2)
    rho_t = rho.transpose(0, 3, 2, 1) if mode == 2 else rho.transpose(2, 1, 0, 3)
    eigs = np.linalg.eigvalsh(rho_t.reshape(dim, dim))
    return max(math.log2(float(np.abs(eigs).sum())), 0.0)


def field_spectrum(state: FieldState) -> np.ndarray:
    """
    Eigenvalues of the field state itself, a direct sum of tridiagonal chains along fixed `m1 - m2`
    """
    pops, coh = state.populations, state.coherences
    d1, d2 = state.shape
    ret = []
    for k in range(-(d2 - 1), d1):
        m1 = np.arange(max(0, k), min(d1 - 1, d2 - 1 + k) + 1)
        diag = pops[m1, m1 - k]
        if len(m1) == 1:
            ret.append(diag)
        else:
            ret.append(eigvalsh_tridiagonal(diag, np.abs(coh[m1[:-1], m1[:-1] - k])))
    return np.sort(np.concatenate(ret))
