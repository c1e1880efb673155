"""
container operations for grids & batches
"""

import math
import itertools
from typing import Tuple, List, Dict, Iterable, TypeVar, Any, Union

import numpy as np
import pandas as pd

from erasent.prettier import style


__all__ = ['group_n', 'frange', 'describe']


T = TypeVar('T')


def group_n(it: Iterable[T], n: int) -> Iterable[Tuple[T]]:
    """
    Slice iterable into groups of size n (last group included) by iteration order
    """
    it = iter(it)
    while True:
        chunk = tuple(itertools.islice(it, n))
        if not chunk:
            return
        yield chunk


def frange(start: float, stop: float, step: float, n_dec: int = 12) -> List[float]:
    """
    Inclusive float range, `start, start + step, ..., stop`

    Values are computed as `start + i * step` and rounded to `n_dec` decimals, so that e.g. `0:3:0.1`
        gives 31 points ending on exactly `3.0` regardless of accumulated floating point error

    :param start: First value
    :param stop: Last value, included if it lies on the grid up to rounding
    :param step: Positive increment
    :param n_dec: Number of decimals kept
    """
    if not step > 0:
        raise ValueError(f'{style("step")} must be positive, got {style(step)}')
    if start > stop:
        raise ValueError(f'{style("start")} must not exceed {style("stop")}, got {style(dict(start=start, stop=stop))}')
    n = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, n_dec) for i in range(n)]


def describe(vals: Iterable[float], round_dec: int = None) -> Dict[str, Any]:
    """
    Summary statistics for logging, e.g. over oracle deviations
    """
    vals: Union[List, np.ndarray]
    df = pd.DataFrame(np.asarray(list(vals), dtype=float), columns=['value'])
    ret = df.describe().to_dict()['value']
    if round_dec:
        ret = {k: round(v, round_dec) for k, v in ret.items()}
    ret['count'] = int(ret['count'])
    return ret


if __name__ == '__main__':
    from erasent.prettier import sic

    def check_frange():
        sic(frange(0, 3, 0.1))
        sic(len(frange(0, 20, 0.1)))
        sic(frange(0, 1, 0.25))
    check_frange()
