"""
primitive manipulation

numeric strings, for config-file parsing & log styling
"""

import re
import math
from typing import Any, Union

__all__ = [
    'is_int', 'float_is_sci', 'is_float', 'is_number', 'to_float',
]


def is_int(x: Any, allow_str: bool = False) -> bool:
    if allow_str and isinstance(x, str):
        try:
            x = int(x)
        except ValueError:
            return False
    return isinstance(x, int) or (isinstance(x, float) and x.is_integer())


def float_is_sci(f: Union[float, str]) -> bool:
    return 'e' in str(f).lower() and not str(f).lower() in ('inf', '-inf', 'nan')


def is_float(x: Any, no_int=False, no_sci=False) -> bool:
    try:
        f = float(x)
        out = True
        if no_int:
            out = out and (not f.is_integer())
        if no_sci:
            out = out and (not float_is_sci(x))
        return out
    except (ValueError, TypeError):
        return False


def is_number(x: Any) -> bool:
    # intended for proper log styling
    if isinstance(x, bool):
        return False
    return is_int(x) or is_float(x)


# a product of signed numbers & `pi`, optionally over one divisor, e.g. `pi/2`, `-2*pi/3`, `0.5pi`, `1e-3`
_pattern_pi_expr = re.compile(
    r'^(?P<sign>[+-]?)\s*(?P<num>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?\s*\*?\s*(?P<pi>pi|π)?\s*(/\s*(?P<den>\d+(\.\d*)?))?$'
)


def to_float(x: Union[str, float, int]) -> float:
    """
    Parses a float, additionally accepting multiples of pi such as `pi/2` & `2*pi/3`

    Intended for angles on the command line and in config files
    """
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    s = str(x).strip().lower()
    if is_float(s):
        return float(s)
    m = _pattern_pi_expr.match(s)
    if m is None or (m.group('num') is None and m.group('pi') is None):
        raise ValueError(f'Cannot parse {x!r} as a number')
    ret = float(m.group('num')) if m.group('num') is not None else 1.0
    if m.group('pi'):
        ret *= math.pi
    if m.group('den') is not None:
        den = float(m.group('den'))
        if den == 0:
            raise ValueError(f'Division by zero in {x!r}')
        ret /= den
    return -ret if m.group('sign') == '-' else ret


if __name__ == '__main__':
    def check_to_float():
        for s in ['0.5', 'pi/2', '2*pi/3', '-pi', '0.5pi', '1e-3', 'pi / 6']:
            print(s, to_float(s))
    check_to_float()
