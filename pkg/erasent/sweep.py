"""
Parameter sweeps of the full pipeline (evolve or stationary, erase, thermal mix, log-negativity), single-point queries,
    the oracle cross-check & the figure presets
"""

import io
import math
import dataclasses
from dataclasses import dataclass, field
from typing import Tuple, List, Dict, Optional, Union, Any

import numpy as np
import pandas as pd

from erasent.version import __version__
from erasent.model import ModelParams
from erasent.dynamics import Time, STATIONARY, evolve_block, stationary_block, oracle_evolve_block, rk4_evolve_block
from erasent.erasure import PLUS, OUTCOMES, outcome_probability
from erasent.thermal import ThermalSpec, TruncationConfig, FieldState, mix_thermal, mix_fock, outcome_probabilities
from erasent.entanglement import log_negativity, oracle_log_negativity
from erasent.errors import ParameterError, TruncationError
from erasent.container import frange, describe
from erasent.concurrency import conc_yield
from erasent.misc import get_random_generator
from erasent.os import ensure_parent_dir
from erasent.primitive import to_float
from erasent.prettier import get_logger, check_arg as ca, style, fmt_sig, Timer


__all__ = [
    'Axis', 'SweepSpec', 'SweepResult', 'run_sweep', 'evaluate_point',
    'PointReport', 'single_point', 'averaged_log_negativity',
    'OracleReport', 'oracle_check', 'random_field_state',
    'FigurePreset', 'FIGURES', 'figure_preset',
]


logger = get_logger(__name__)


# parameters set by each axis
_AXIS2TARGETS = dict(
    mbar_alpha={'mbar1', 'mbar2'}, mbar1={'mbar1'}, mbar2={'mbar2'}, mbar_diff={'mbar1', 'mbar2'},
    delta={'delta'}, t={'t'}
)
_FIXED_KEYS = ('mbar1', 'mbar2', 'mbar_sum', 't')


@dataclass(frozen=True)
class Axis:
    """
    Inclusive grid `start, start + step, ..., stop` over one named parameter
    """
    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        ca(axis_name=self.name)
        for k in ('start', 'stop', 'step'):
            object.__setattr__(self, k, float(getattr(self, k)))
        if not self.step > 0:
            raise ParameterError(f'Axis {style(self.name)} needs a positive step, got {style(self.step)}')
        if self.start > self.stop:
            raise ParameterError(f'Axis {style(self.name)} needs start <= stop, got {style((self.start, self.stop))}')

    @property
    def values(self) -> List[float]:
        return frange(self.start, self.stop, self.step)

    def strided(self, k: int) -> 'Axis':
        """
        Every `k`-th grid value
        """
        return dataclasses.replace(self, step=self.step * k) if k > 1 else self

    @classmethod
    def parse(cls, text: str) -> 'Axis':
        """
        From `NAME=START:STOP:STEP`, values may be multiples of `pi`
        """
        name, sep, rng = text.partition('=')
        parts = rng.split(':')
        if not sep or len(parts) != 3:
            raise ParameterError(f'Expect {style("NAME=START:STOP:STEP")}, got {style(text)}')
        try:
            start, stop, step = (to_float(p) for p in parts)
        except ValueError as e:
            raise ParameterError(f'Invalid sweep {style(text)}: {e}') from e
        return cls(name=name.strip(), start=start, stop=stop, step=step)

    def __str__(self):
        return f'{self.name}={self.start!r}:{self.stop!r}:{self.step!r}'


@dataclass(frozen=True)
class SweepSpec:
    """
    :param axis1: Major axis
    :param axis2: Optional minor axis
    :param fixed: Values of `mbar1`, `mbar2`, `mbar_sum` & `t` not set by an axis
    :param mode: `stationary` or `time`
    :param outcome: Measurement outcome conditioned on
    """
    axis1: Axis
    axis2: Optional[Axis] = None
    fixed: Dict[str, float] = field(default_factory=dict)
    mode: str = STATIONARY
    outcome: str = PLUS

    def __post_init__(self):
        ca(sweep_mode=self.mode, outcome=self.outcome)
        object.__setattr__(self, 'fixed', {k: float(v) for k, v in self.fixed.items()})
        unknown = [k for k in self.fixed if k not in _FIXED_KEYS]
        if unknown:
            raise ParameterError(f'Unknown fixed sweep values {style(unknown)}, expect a subset of {style(_FIXED_KEYS)}')
        if self.axis2 is not None:
            if self.axis1.name == self.axis2.name:
                raise ParameterError(f'Sweep axes must be distinct, got {style(self.axis1.name)} twice')
            overlap = _AXIS2TARGETS[self.axis1.name] & _AXIS2TARGETS[self.axis2.name]
            if overlap:
                raise ParameterError(f'Sweep axes {style(self.axis_names)} both set {style(sorted(overlap))}')
        shadowed = set().union(*(_AXIS2TARGETS[a.name] for a in self.axes)) & set(self.fixed)
        if shadowed:
            raise ParameterError(f'Fixed values {style(sorted(shadowed))} are also set by sweep axes {style(self.axis_names)}')

        names = self.axis_names
        if 'mbar_diff' in names:
            total = self.fixed.get('mbar_sum')
            if total is None:
                raise ParameterError(f'Axis {style("mbar_diff")} requires a fixed {style("mbar_sum")}')
            diff_axis = self.axis1 if self.axis1.name == 'mbar_diff' else self.axis2
            if diff_axis.start < 0 or max(diff_axis.values) > total + 1e-12:
                raise ParameterError(
                    f'Mean photon number difference must lie in [0, {style("mbar_sum")}={style(total)}], got {style(str(diff_axis))}')
        elif 'mbar_sum' in self.fixed:
            raise ParameterError(f'{style("mbar_sum")} is only used with axis {style("mbar_diff")}')
        if self.mode == STATIONARY and 't' in names:
            raise ParameterError(f'Axis {style("t")} is meaningless in {style(STATIONARY)} mode')
        if self.mode == 'time' and 't' not in names and 't' not in self.fixed:
            raise ParameterError(f'Mode {style("time")} requires an axis or a fixed value for {style("t")}')

    @property
    def axes(self) -> List[Axis]:
        return [self.axis1] + ([self.axis2] if self.axis2 is not None else [])

    @property
    def axis_names(self) -> List[str]:
        return [a.name for a in self.axes]

    def grid(self) -> List[Tuple[float, Optional[float]]]:
        """
        Axis-major order
        """
        v2s = self.axis2.values if self.axis2 is not None else [None]
        return [(v1, v2) for v1 in self.axis1.values for v2 in v2s]

    def strided(self, k: int) -> 'SweepSpec':
        return dataclasses.replace(
            self, axis1=self.axis1.strided(k), axis2=self.axis2.strided(k) if self.axis2 is not None else None)

    def point(self, params: ModelParams, v1: float, v2: Optional[float] = None) -> Tuple[ModelParams, ThermalSpec, Time]:
        """
        :return: The model parameters, thermal spec & time at a grid point
        """
        vals = dict(self.fixed)
        for axis, v in zip(self.axes, (v1, v2)):
            name = axis.name
            if name == 'mbar_alpha':
                vals['mbar1'] = vals['mbar2'] = v
            elif name == 'mbar_diff':
                total = vals['mbar_sum']
                vals['mbar1'], vals['mbar2'] = (total + v) / 2, max((total - v) / 2, 0.0)
            else:
                vals[name] = v
        if 'delta' in vals:
            params = params.replace(delta=vals['delta'])
        t = STATIONARY if self.mode == STATIONARY else vals['t']
        return params, ThermalSpec(mbar1=vals.get('mbar1', 0.0), mbar2=vals.get('mbar2', 0.0)), t


@dataclass
class SweepResult:
    """
    :param table: Columns `axis1`, `axis2`, `log_negativity` in axis-major order, `axis2` is empty for a 1D sweep
    :param metadata: Echo of every input & the cutoffs used, written as `# key=value` lines
    """
    table: pd.DataFrame
    metadata: Dict[str, str]

    @property
    def header(self) -> List[str]:
        return list(self.table.columns)

    @property
    def rows(self) -> List[Tuple[float, Optional[float], float]]:
        return [
            (float(a1), None if pd.isna(a2) else float(a2), float(v))
            for a1, a2, v in self.table.itertuples(index=False, name=None)
        ]

    def to_csv(self, path: str = None) -> str:
        """
        Writes the CSV to `path` if given, always returns the CSV text
        """
        buf = io.StringIO()
        for k, v in self.metadata.items():
            buf.write(f'# {k}={v}\n')
        self.table.to_csv(buf, index=False, float_format='%.17g')
        ret = buf.getvalue()
        if path:
            with open(ensure_parent_dir(path), 'w', encoding='utf-8', newline='') as f:
                f.write(ret)
        return ret


def evaluate_point(task: Tuple[ModelParams, ThermalSpec, Time, TruncationConfig, str]) -> float:
    """
    Log-negativity at one grid point, module-level so that it is pickleable for process workers
    """
    params, spec, t, trunc, outcome = task
    return log_negativity(mix_thermal(t, params, spec, trunc, outcome))


def _fmt(v: Any) -> str:
    return fmt_sig(v) if isinstance(v, (float, np.floating)) else str(v)


def _sweep_metadata(
        spec: SweepSpec, params: ModelParams, trunc: TruncationConfig, cutoffs: Tuple[int, int]
) -> Dict[str, str]:
    ret = {'version': __version__, 'mode': spec.mode, 'outcome': spec.outcome}
    ret.update({k: _fmt(v) for k, v in dataclasses.asdict(params).items()})
    ret['delta'] = _fmt(params.delta)
    ret.update({k: _fmt(v) for k, v in sorted(spec.fixed.items())})
    ret['axis1'] = str(spec.axis1)
    ret['axis2'] = str(spec.axis2) if spec.axis2 is not None else ''
    ret.update(tail_mass=_fmt(trunc.tail_mass), hard_cap=str(trunc.hard_cap), cutoffs=f'{cutoffs[0]} {cutoffs[1]}')
    return ret


def run_sweep(
        spec: SweepSpec, params: ModelParams, trunc: TruncationConfig = None, n_worker: int = 1,
        with_tqdm: bool = False
) -> SweepResult:
    """
    Evaluates every grid point, concurrently if `n_worker > 1`; rows are always in axis-major order
    """
    trunc = trunc or TruncationConfig()
    grid = spec.grid()
    tasks, max_cutoffs = [], (0, 0)
    for v1, v2 in grid:
        p, thermal, t = spec.point(params, v1, v2)
        try:  # fail before any work is dispatched
            n1, n2 = trunc.cutoffs(thermal)
        except TruncationError as e:
            pt = {spec.axis1.name: v1}
            if spec.axis2 is not None:
                pt[spec.axis2.name] = v2
            raise e.at(pt) from e
        max_cutoffs = (max(max_cutoffs[0], n1), max(max_cutoffs[1], n2))
        tasks.append((p, thermal, t, trunc, spec.outcome))

    logger.info(f'Sweeping {style(len(tasks))} grid points over {style(spec.axis_names)} with {style(n_worker)} workers, '
                f'largest cutoffs {style(max_cutoffs)}')
    timer = Timer()
    batch_size = max(1, math.ceil(len(tasks) / (4 * n_worker)))
    tqdm_args = dict(desc='Sweep', total=len(tasks)) if with_tqdm else False
    values = list(conc_yield(
        fn=evaluate_point, args=tasks, n_worker=n_worker, mode='process', batch_size=batch_size, enforce_order=True,
        with_tqdm=tqdm_args
    ))
    logger.info(f'Sweep finished in {style(timer.end(n_digit_delta=2))}')

    table = pd.DataFrame({
        'axis1': [v1 for v1, _ in grid],
        'axis2': [np.nan if v2 is None else v2 for _, v2 in grid],
        'log_negativity': values,
    })
    return SweepResult(table=table, metadata=_sweep_metadata(spec, params, trunc, max_cutoffs))


@dataclass(frozen=True)
class PointReport:
    """
    :param log_negativity: Of the field state conditioned on `outcome`
    :param probabilities: Of both measurement outcomes
    :param cutoffs: Per-mode Fock cutoffs, the Fock labels for a Fock input
    """
    log_negativity: float
    outcome: str
    probabilities: Dict[str, float]
    cutoffs: Tuple[int, int]


def single_point(
        params: ModelParams, spec: ThermalSpec = None, t: Time = STATIONARY, trunc: TruncationConfig = None,
        outcome: str = PLUS, fock: Tuple[int, int] = None
) -> PointReport:
    """
    Full thermal pipeline, or a single block if `fock` is given
    """
    ca(outcome=outcome)
    if fock is not None:
        n1, n2 = fock
        state = mix_fock(n1, n2, t, params, outcome)
        block = stationary_block(n1, n2, params) if t == STATIONARY else evolve_block(n1, n2, t, params)
        probs = {o: outcome_probability(block, params.theta, params.phi, o) for o in OUTCOMES}
        cutoffs = (int(n1), int(n2))
    else:
        spec = spec or ThermalSpec()
        trunc = trunc or TruncationConfig()
        state = mix_thermal(t, params, spec, trunc, outcome)
        probs = outcome_probabilities(t, params, spec, trunc)
        cutoffs = state.cutoffs
    return PointReport(log_negativity=log_negativity(state), outcome=outcome, probabilities=probs, cutoffs=cutoffs)


def averaged_log_negativity(
        params: ModelParams, spec: ThermalSpec = None, t: Time = STATIONARY, trunc: TruncationConfig = None
) -> float:
    """
    Log-negativity averaged over both measurement outcomes, weighted by their probabilities
    """
    spec, trunc = spec or ThermalSpec(), trunc or TruncationConfig()
    probs = outcome_probabilities(t, params, spec, trunc)
    total = sum(probs.values())
    return sum(
        p / total * log_negativity(mix_thermal(t, params, spec, trunc, o)) for o, p in probs.items() if p > 0
    )


def random_field_state(rng: Union[int, np.random.Generator] = None, max_cutoff: int = 4, p_zero: float = 0.25) -> FieldState:
    """
    A random valid field state, the normalized sum of random positive 2x2 pieces on the coherence band

    :param rng: Random generator or seed
    :param max_cutoff: Largest per-mode cutoff drawn
    :param p_zero: Probability of a piece having no coherence, so that partial-transpose chains split
    """
    rng = get_random_generator(rng)
    n1, n2 = (int(x) for x in rng.integers(0, max_cutoff + 1, size=2))
    shape = (n1 + 1, n2 + 1)
    a, b = rng.random(shape), rng.random(shape)
    mag = np.sqrt(a * b) * rng.random(shape) * (rng.random(shape) >= p_zero)
    coh = mag * np.exp(2j * np.pi * rng.random(shape))
    pops = np.zeros((n1 + 2, n2 + 2))
    pops[:-1, :-1] += a
    pops[1:, 1:] += b
    pops += 0.1 * rng.random(pops.shape) * (rng.random(pops.shape) < 0.5)
    norm = 1 / pops.sum()
    return FieldState(populations=pops * norm, coherences=coh * norm, normalization=norm)


@dataclass(frozen=True)
class OracleReport:
    seed: int
    trials: int
    method: str
    max_dynamics_deviation: float
    max_negativity_deviation: float
    tol_dynamics: float
    tol_negativity: float

    @property
    def passed(self) -> bool:
        return self.max_dynamics_deviation <= self.tol_dynamics and self.max_negativity_deviation <= self.tol_negativity


_ORACLE_TOL = dict(series=1e-8, rk4=1e-6)


def oracle_check(seed: int = 1, trials: int = 100, method: str = 'series', tol_negativity: float = 1e-10) -> OracleReport:
    """
    Closed-form dynamics against a numerical oracle, and block against dense log-negativity, on random samples
    """
    ca(oracle_method=method)
    if trials < 1:
        raise ParameterError(f'{style("trials")} must be at least 1, got {style(trials)}')
    rng = get_random_generator(seed)
    oracle = oracle_evolve_block if method == 'series' else rk4_evolve_block

    dyn_devs, neg_devs = [], []
    for _ in range(trials):
        n1, n2 = (int(x) for x in rng.integers(0, 6, size=2))
        params = ModelParams.from_detuning(
            delta=rng.uniform(-2, 2), g=rng.uniform(0.1, 1), gamma=rng.uniform(0, 1))
        t = rng.uniform(0, 20)
        closed, ref = evolve_block(n1, n2, t, params), oracle(n1, n2, t, params)
        dyn_devs.append(max(
            abs(closed.p_ee - ref.p_ee), abs(closed.p_gg - ref.p_gg),
            abs(closed.c_eg.real - ref.c_eg.real), abs(closed.c_eg.imag - ref.c_eg.imag)
        ))

        state = random_field_state(rng)
        neg_devs.append(abs(log_negativity(state) - oracle_log_negativity(state)))

    ret = OracleReport(
        seed=seed, trials=trials, method=method, max_dynamics_deviation=max(dyn_devs),
        max_negativity_deviation=max(neg_devs), tol_dynamics=_ORACLE_TOL[method], tol_negativity=tol_negativity
    )
    logger.info(f'Dynamics deviation {style(describe(dyn_devs))}')
    logger.info(f'Negativity deviation {style(describe(neg_devs))}')
    logger.info(f'Oracle check {style("passed" if ret.passed else "failed")}: {style(ret)}')
    return ret


@dataclass(frozen=True)
class FigurePreset:
    number: int
    caption: str
    spec: SweepSpec
    params: ModelParams


_TIME_AXIS = Axis('t', 0, 20, 0.1)

FIGURES: Dict[int, FigurePreset] = {
    1: FigurePreset(
        1, 'stationary log-negativity over mbar1 = mbar2 = alpha and the detuning',
        SweepSpec(Axis('mbar_alpha', 0, 3, 0.1), Axis('delta', 0, 3, 0.1)),
        ModelParams.from_detuning(delta=1.0)
    ),
    2: FigurePreset(
        2, 'stationary log-negativity over mbar2 = alpha and the detuning, mode 1 in vacuum',
        SweepSpec(Axis('mbar2', 0, 5, 0.1), Axis('delta', 0, 3, 0.1), fixed=dict(mbar1=0.0)),
        ModelParams.from_detuning(delta=1.0)
    ),
    3: FigurePreset(
        3, 'stationary log-negativity over mbar1 and mbar2',
        SweepSpec(Axis('mbar1', 0, 2, 0.1), Axis('mbar2', 0, 2, 0.1)),
        ModelParams.from_detuning(delta=1.0)
    ),
    4: FigurePreset(
        4, 'log-negativity over mbar1 = mbar2 = alpha and time, on resonance',
        SweepSpec(Axis('mbar_alpha', 0, 1, 0.05), _TIME_AXIS, mode='time'),
        ModelParams.from_detuning(delta=0.0)
    ),
    5: FigurePreset(
        5, 'log-negativity over mbar1 = mbar2 = alpha and time, off resonance',
        SweepSpec(Axis('mbar_alpha', 0, 1, 0.05), _TIME_AXIS, mode='time'),
        ModelParams.from_detuning(delta=1.0)
    ),
    6: FigurePreset(
        6, 'log-negativity over |mbar1 - mbar2| and time, mbar1 + mbar2 = 1',
        SweepSpec(Axis('mbar_diff', 0, 1, 0.05), _TIME_AXIS, fixed=dict(mbar_sum=1.0), mode='time'),
        ModelParams.from_detuning(delta=1.0)
    ),
}


def figure_preset(number: int, stride: int = 1) -> FigurePreset:
    """
    :param number: Figure number
    :param stride: Keep every `stride`-th value along both axes
    """
    if number not in FIGURES:
        raise ParameterError(f'Unknown figure {style(number)}, expect one of {style(list(FIGURES))}')
    if stride < 1:
        raise ParameterError(f'{style("stride")} must be at least 1, got {style(stride)}')
    ret = FIGURES[number]
    return dataclasses.replace(ret, spec=ret.spec.strided(stride))
