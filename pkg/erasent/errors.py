"""
exceptions raised by the package, each carrying the command-line exit code it maps to
"""

from typing import Tuple, Dict, Any

from erasent.prettier import style


__all__ = [
    'ErasentError', 'ParameterError', 'NoStationaryStateError', 'DimensionError',
    'StructureError', 'TruncationError', 'ConvergenceError',
]


class ErasentError(ValueError):
    exit_code = 1


class ParameterError(ErasentError):
    """
    Invalid model, thermal, truncation or sweep parameters
    """
    pass


class NoStationaryStateError(ParameterError):
    def __init__(self, gamma: float = 0.0):
        self.gamma = gamma
        super().__init__(f'No stationary state without phase decoherence: expect {style("gamma")} > 0, got {style(gamma)}')


class DimensionError(ParameterError):
    pass


class StructureError(ErasentError):
    """
    A state violating the structure implied by the dynamics, e.g. a coherence off the (+1, +1) band
    """
    pass


class TruncationError(ErasentError):
    """
    The Fock-space cutoff needed for the requested tail mass exceeds the hard cap
    """
    exit_code = 2

    def __init__(
            self, mode: int, mbar: float, cutoff: int, hard_cap: int, grid_point: Dict[str, Any] = None
    ):
        self.mode, self.mbar, self.cutoff, self.hard_cap = mode, mbar, cutoff, hard_cap
        self.grid_point = grid_point
        d = dict(mode=mode, mbar=mbar, cutoff=cutoff, hard_cap=hard_cap)
        msg = f'Fock cutoff exceeds the hard cap, the field is too hot for the configured cap: {style(d)}'
        if grid_point:
            msg = f'{msg} at grid point {style(grid_point)}'
        super().__init__(msg)

    def at(self, grid_point: Dict[str, Any]) -> 'TruncationError':
        """
        A copy identifying the sweep grid point that failed
        """
        return TruncationError(self.mode, self.mbar, self.cutoff, self.hard_cap, grid_point=grid_point)

    def __reduce__(self) -> Tuple:
        # pickleable across worker processes
        return TruncationError, (self.mode, self.mbar, self.cutoff, self.hard_cap, self.grid_point)


class ConvergenceError(ErasentError):
    pass
