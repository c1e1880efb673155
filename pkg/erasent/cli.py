"""
Command-line front end: `erasent run`, `erasent figure N` & `erasent oracle-check`

Exit codes: 0 on success, 1 on invalid arguments, 2 on truncation failure, 3 on oracle-check failure
"""

import io
import sys
import math
import dataclasses
from typing import Tuple, List, Dict, Optional, Any

import click
import pandas as pd

from erasent.version import __version__
from erasent.primitive import to_float
from erasent.model import ModelParams
from erasent.dynamics import STATIONARY
from erasent.erasure import PLUS, MINUS, OUTCOMES
from erasent.thermal import ThermalSpec, TruncationConfig
from erasent.sweep import Axis, SweepSpec, SweepResult, run_sweep, single_point, oracle_check, figure_preset
from erasent.project import KvConfig
from erasent.errors import ErasentError
from erasent.os import ensure_parent_dir
from erasent.prettier import get_logger, set_package_log_handlers, style, fmt_sig


__all__ = ['erasent', 'main']


logger = get_logger(__name__)


class FloatOrPi(click.ParamType):
    """
    Floats, additionally multiples of `pi` such as `pi/2`
    """
    name = 'float'

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            return to_float(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


FLOAT = FloatOrPi()


class ErasentGroup(click.Group):
    """
    Maps failures onto the documented exit codes, instead of `click`'s default of 2 for usage errors
    """
    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        if not standalone_mode:
            return super().main(args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra)
        try:
            ret = super().main(args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra)
            code = ret if isinstance(ret, int) else 0  # `ctx.exit(n)` comes back as the return value
        except click.ClickException as e:
            e.show()
            code = 1
        except click.Abort:
            click.echo('Aborted!', err=True)
            code = 1
        except ErasentError as e:
            logger.error(str(e))
            code = e.exit_code
        except ValueError as e:
            logger.error(str(e))
            code = 1
        sys.exit(code)


def _load_config(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[str]:
    """
    Values in the config file become defaults, so that explicit flags override them
    """
    if value:
        known = [p.name for p in ctx.command.params if p.name != 'config']
        ctx.default_map = {**(ctx.default_map or dict()), **KvConfig(value).default_map(known)}
    return value


def _setup_logging(log_level: str, log_file: Optional[str]):
    set_package_log_handlers(kind='stderr+file' if log_file else 'stderr', level=log_level, file_path=log_file)


def _common_options(fn):
    opts = [
        click.option(
            '--config', type=click.Path(dir_okay=False), is_eager=True, expose_value=False, callback=_load_config,
            help='Flat key=value file of flag values, overridden by explicit flags'),
        click.option('--output', type=click.Path(dir_okay=False), default=None, help='CSV path, stdout if omitted'),
        click.option(
            '--log-level', type=click.Choice(['debug', 'info', 'warning', 'error']), default='info', show_default=True),
        click.option('--log-file', type=click.Path(dir_okay=False), default=None, help='Also log to this file'),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _emit(text: str, output: Optional[str]):
    if output:
        with open(ensure_parent_dir(output), 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f'Wrote CSV to {style(output)}')
    else:
        click.echo(text, nl=False)


def _model_params(
        g: float, delta: Optional[float], omega1: float, omega2: float, omega: Optional[float], gamma: float,
        theta: float, phi: float
) -> ModelParams:
    if delta is None and omega is not None:
        return ModelParams(omega1=omega1, omega2=omega2, omega=omega, g=g, gamma=gamma, theta=theta, phi=phi)
    if delta is not None and omega is not None:
        logger.warning(f'{style("--delta")} overrides {style("--omega")}')
    delta = 1.0 if delta is None else delta
    return ModelParams.from_detuning(delta=delta, omega1=omega1, omega2=omega2, g=g, gamma=gamma, theta=theta, phi=phi)


def _point_csv(
        report, params: ModelParams, spec: Optional[ThermalSpec], t, trunc: TruncationConfig,
        fock: Optional[Tuple[int, int]]
) -> str:
    meta: Dict[str, Any] = dict(version=__version__, outcome=report.outcome, delta=params.delta)
    meta.update(dataclasses.asdict(params))
    if fock is not None:
        meta['fock'] = f'{fock[0]} {fock[1]}'
    else:
        meta.update(mbar1=spec.mbar1, mbar2=spec.mbar2, tail_mass=trunc.tail_mass, hard_cap=trunc.hard_cap)
    meta['t'] = t

    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f'# {k}={fmt_sig(v) if isinstance(v, float) else v}\n')
    df = pd.DataFrame([{
        'log_negativity': report.log_negativity,
        f'p_{PLUS}': report.probabilities[PLUS], f'p_{MINUS}': report.probabilities[MINUS],
        'cutoff1': report.cutoffs[0], 'cutoff2': report.cutoffs[1],
    }])
    df.to_csv(buf, index=False, float_format='%.17g')
    return buf.getvalue()


@click.group(cls=ErasentGroup)
@click.version_option(__version__, prog_name='erasent')
def erasent():
    """
    Entanglement of two thermal field modes induced by an atom under phase decoherence & quantum erasure
    """
    pass


@erasent.command()
@click.option('--g', type=FLOAT, default=0.5, show_default=True, help='Atom-field coupling constant')
@click.option('--delta', type=FLOAT, default=None, help='Detuning, overrides --omega  [default: 1]')
@click.option('--omega1', type=FLOAT, default=1.0, show_default=True, help='Mode-1 frequency')
@click.option('--omega2', type=FLOAT, default=1.0, show_default=True, help='Mode-2 frequency')
@click.option('--omega', type=FLOAT, default=None, help='Atomic transition frequency')
@click.option('--gamma', type=FLOAT, default=0.5, show_default=True, help='Phase decoherence coefficient')
@click.option('--theta', type=FLOAT, default=math.pi / 2, show_default='pi/2', help='Measurement polar angle')
@click.option('--phi', type=FLOAT, default=0.0, show_default=True, help='Measurement azimuthal angle')
@click.option('--mbar1', type=FLOAT, default=None, help='Mode-1 mean photon number  [default: 0]')
@click.option('--mbar2', type=FLOAT, default=None, help='Mode-2 mean photon number  [default: 0]')
@click.option('--mbar-sum', type=FLOAT, default=None, help='Fixed mbar1 + mbar2, for a mbar_diff sweep')
@click.option('--t', type=FLOAT, default=None, help='Evolution time')
@click.option('--stationary', is_flag=True, default=False, help='Use the stationary state instead of a time')
@click.option('--fock', type=int, nargs=2, default=None, help='Start the fields in the Fock state |N1, N2>')
@click.option('--tail-mass', type=float, default=1e-10, show_default=True, help='Thermal weight dropped per mode')
@click.option('--hard-cap', type=int, default=512, show_default=True, help='Largest Fock cutoff allowed per mode')
@click.option('--sweep', multiple=True, help='Sweep axis NAME=START:STOP:STEP, at most twice')
@click.option('--outcome', type=click.Choice(list(OUTCOMES)), default=PLUS, show_default=True)
@click.option('--workers', type=int, default=1, show_default=True, help='Number of worker processes')
@click.option('--progress', is_flag=True, default=False, help='Show a progress bar for sweeps')
@_common_options
def run(
        g, delta, omega1, omega2, omega, gamma, theta, phi, mbar1, mbar2, mbar_sum, t, stationary, fock,
        tail_mass, hard_cap, sweep, outcome, workers, progress, output, log_level, log_file
):
    """
    A single point, or a sweep over one or two axes
    """
    _setup_logging(log_level, log_file)
    if stationary and t is not None:
        raise click.UsageError('Specify at most one of --t and --stationary')
    fock = tuple(fock) if fock else None
    params = _model_params(g, delta, omega1, omega2, omega, gamma, theta, phi)
    trunc = TruncationConfig(tail_mass=tail_mass, hard_cap=hard_cap)

    if not sweep:
        if not stationary and t is None:
            raise click.UsageError('A single point needs one of --t and --stationary')
        t_ = STATIONARY if stationary else t
        if fock is not None:
            if mbar1 is not None or mbar2 is not None:
                raise click.UsageError('--fock replaces the thermal input, drop --mbar1 and --mbar2')
            spec = None
        else:
            spec = ThermalSpec(mbar1=mbar1 or 0.0, mbar2=mbar2 or 0.0)
        report = single_point(params, spec=spec, t=t_, trunc=trunc, outcome=outcome, fock=fock)
        logger.info(f'Log-negativity {style(report.log_negativity)} with outcome probabilities {style(report.probabilities)}')
        _emit(_point_csv(report, params, spec, t_, trunc, fock), output)
        return

    if len(sweep) > 2:
        raise click.UsageError(f'At most 2 sweep axes, got {len(sweep)}')
    if fock is not None:
        raise click.UsageError('--fock applies to single points only')
    axes: List[Axis] = [Axis.parse(s) for s in sweep]
    fixed = {k: v for k, v in dict(mbar1=mbar1, mbar2=mbar2, mbar_sum=mbar_sum, t=t).items() if v is not None}
    spec = SweepSpec(
        axis1=axes[0], axis2=axes[1] if len(axes) > 1 else None, fixed=fixed,
        mode=STATIONARY if stationary else 'time', outcome=outcome
    )
    res = run_sweep(spec, params, trunc, n_worker=workers, with_tqdm=progress)
    _emit(res.to_csv(), output)


@erasent.command()
@click.argument('number', type=click.IntRange(1, 6))
@click.option('--stride', type=click.IntRange(min=1), default=1, show_default=True, help='Keep every k-th grid value')
@click.option('--workers', type=int, default=1, show_default=True, help='Number of worker processes')
@click.option('--progress', is_flag=True, default=False, help='Show a progress bar')
@_common_options
def figure(number, stride, workers, progress, output, log_level, log_file):
    """
    Sweep surface of a preset figure, 1 to 6
    """
    _setup_logging(log_level, log_file)
    preset = figure_preset(number, stride=stride)
    logger.info(f'Figure {style(number)}: {preset.caption}')
    res: SweepResult = run_sweep(preset.spec, preset.params, n_worker=workers, with_tqdm=progress)
    res.metadata['figure'] = str(number)
    _emit(res.to_csv(), output)


@erasent.command('oracle-check')
@click.option('--seed', type=int, default=1, show_default=True)
@click.option('--trials', type=int, default=100, show_default=True)
@click.option('--oracle-method', type=click.Choice(['series', 'rk4']), default='series', show_default=True)
@_common_options
def oracle_check_cmd(seed, trials, oracle_method, output, log_level, log_file):
    """
    Closed forms against brute-force oracles on random samples, exit code 3 on any excess deviation
    """
    _setup_logging(log_level, log_file)
    report = oracle_check(seed=seed, trials=trials, method=oracle_method)
    df = pd.DataFrame([dict(
        seed=report.seed, trials=report.trials, method=report.method,
        max_dynamics_deviation=report.max_dynamics_deviation, tol_dynamics=report.tol_dynamics,
        max_negativity_deviation=report.max_negativity_deviation, tol_negativity=report.tol_negativity,
        passed=report.passed
    )])
    _emit(df.to_csv(index=False, float_format='%.17g'), output)
    if not report.passed:
        click.get_current_context().exit(3)


def main():
    erasent()


if __name__ == '__main__':
    main()
