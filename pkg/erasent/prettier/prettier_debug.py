"""
styling values for terminal logging, and a debug printer
"""

import os
import re
import pprint
import dataclasses
from typing import Tuple, List, Dict, Union, Any
from pathlib import Path

import numpy as np
from icecream import IceCreamDebugger

from erasent.primitive import is_float, float_is_sci, is_number
from erasent.prettier.prettier import enclose_in_quote, fmt_sig


__all__ = [
    'MyIceCreamDebugger', 'icecream', 'sic',
    '_DEFAULT_ANSI_BACKEND', '_ANSI_REST_ALL',
    'Styler', 'style',
]


class MyIceCreamDebugger(IceCreamDebugger):
    def __init__(self, output_width: int = 120, sort_dicts: bool = False, **kwargs):
        self._output_width = output_width
        self._sort_dicts = sort_dicts
        kwargs.update(argToStringFunction=lambda x: pprint.pformat(x, width=output_width, sort_dicts=sort_dicts))
        super().__init__(**kwargs)
        self.lineWrapWidth = output_width

    @property
    def output_width(self):
        return self._output_width

    @output_width.setter
    def output_width(self, value):
        if value != self._output_width:
            self._output_width = value
            self.lineWrapWidth = value
            self.argToStringFunction = lambda x: pprint.pformat(x, width=value, sort_dicts=self._sort_dicts)


# syntactic sugar
sic = icecream = MyIceCreamDebugger()


_DEFAULT_ANSI_BACKEND = 'rich'
_ANSI_REST_ALL = '\033[0m'


Single = Union[int, float, complex, bool, str, None]
Container = Union[dict, list, tuple]


class Styler:
    """
    coloring & formatting for python built-in types, numpy scalars & arrays and the package's value objects
    """
    var_type2style = {
        None: dict(fg='bright_magenta', italic=True),
        True: dict(fg='bright_green', italic=True),
        False: dict(fg='bright_red', italic=True),
        int: dict(fg='bright_cyan'),
        float: dict(fg='bright_cyan'),
        complex: dict(fg='cyan'),
        'array': dict(fg='yellow'),
        str: dict(fg='bright_green'),
        'path': dict(fg='magenta')
    }
    brace_style = dict(fg='magenta')

    def __init__(self, with_color: bool = True, n_sig: int = 6):
        self.with_color = with_color
        self.n_sig = n_sig

    def __call__(
            self, x: Union[Single, Container, Any], with_color: bool = None, fg: str = None, bold: bool = None,
            quote_str: bool = False, n_sig: int = None
    ) -> str:
        with_color = self.with_color if with_color is None else with_color
        n_sig = n_sig or self.n_sig
        return self._style(x, with_color=with_color, fg=fg, bold=bold, quote_str=quote_str, n_sig=n_sig)

    def nc(self, x, **kwargs) -> str:
        """
        Syntactic sugar for style w/o color
        """
        kwargs['with_color'] = False
        return self(x, **kwargs)

    def nb(self, x, **kwargs) -> str:
        kwargs['bold'] = False
        return self(x, **kwargs)

    @staticmethod
    def _render(x: str, fg: str = None, bold: bool = None, italic: bool = None) -> str:
        if not fg and not bold and not italic:
            return x
        import rich.style
        return rich.style.Style(color=fg, bold=bold, italic=italic).render(text=x)

    @staticmethod
    def _kind(x: Any):
        if any(x is t for t in [None, True, False]):
            return x
        if isinstance(x, (bool, np.bool_)):
            return bool(x)
        if isinstance(x, (int, np.integer)):
            return int
        if isinstance(x, (float, np.floating)):
            return float
        if isinstance(x, (complex, np.complexfloating)):
            return complex
        if isinstance(x, np.ndarray):
            return 'array'
        if isinstance(x, Path) or (isinstance(x, str) and len(x) < 256 and (x.count(os.sep) >= 2 or os.path.exists(x))):
            return 'path'
        return type(x)

    def _single(self, x: Any, with_color: bool, fg: str, bold: bool, quote_str: bool, n_sig: int) -> str:
        kind = Styler._kind(x)
        if kind is float:
            txt = Styler._num(float(x), n_sig=n_sig)
        elif kind is complex:
            x = complex(x)
            sign = '-' if x.imag < 0 else '+'
            txt = f'{Styler._num(x.real, n_sig)}{sign}{Styler._num(abs(x.imag), n_sig)}j'
        elif kind == 'array':
            txt = f'array(shape={x.shape}, dtype={x.dtype})'
        elif kind is str and quote_str and not is_float(x):
            txt = enclose_in_quote(x)
        else:
            txt = str(x)
        if not with_color:
            return txt
        args = dict(Styler.var_type2style.get(kind, dict()))
        if kind is str and is_number(x):
            args = dict(Styler.var_type2style[float])
        if fg is not None:
            args['fg'] = fg
        if bold is not None:
            args['bold'] = bold
        return Styler._render(txt, fg=args.get('fg'), bold=args.get('bold'), italic=args.get('italic'))

    @staticmethod
    def _num(f: float, n_sig: int) -> str:
        ret = fmt_sig(f, n=n_sig)
        if float_is_sci(ret):
            ret = ret.replace('e-0', 'e-').replace('e+0', 'e+')  # drop leading 0 of the exponent
        return ret

    def _braces(self, pref: str, post: str, with_color: bool) -> Tuple[str, str]:
        if with_color:
            return Styler._render(pref, **Styler.brace_style), Styler._render(post, **Styler.brace_style)
        return pref, post

    def _style(self, x: Any, **kwargs) -> str:
        with_color = kwargs['with_color']
        if dataclasses.is_dataclass(x) and not isinstance(x, type):
            # shallow, arrays inside value objects are summarized by `_single`
            d = {f.name: getattr(x, f.name) for f in dataclasses.fields(x)}
            return f'{type(x).__name__}{self._dict(d, **kwargs)}'
        elif isinstance(x, dict):
            return self._dict(x, **kwargs)
        elif isinstance(x, (list, tuple)):
            pref, post = ('[', ']') if isinstance(x, list) else ('(', ')')
            pref, post = self._braces(pref, post, with_color)
            return f'{pref}{", ".join(self._style(e, **kwargs) for e in x)}{post}'
        else:
            return self._single(x, **kwargs)

    def _dict(self, d: Dict, **kwargs) -> str:
        with_color = kwargs['with_color']
        sep = Styler._render(': ', **Styler.brace_style) if with_color else ': '
        pairs: List[str] = [f'{k}{sep}{self._style(v, **kwargs)}' for k, v in d.items()]
        pref, post = self._braces('{', '}', with_color)
        return f'{pref}{", ".join(pairs)}{post}'


style = Styler()


def filter_ansi(txt: str) -> str:
    """
    Removes ANSI escape sequences from the string
    """
    if not hasattr(filter_ansi, 'pattern'):
        filter_ansi.pattern = re.compile(r'\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])')
    return filter_ansi.pattern.sub('', txt)


if __name__ == '__main__':
    def check_style():
        d = dict(g=0.5, delta=np.float64(1.0), c=0.25 - 1e-17j, outcome='plus', cutoffs=(58, 58), stationary=True)
        print(style(d))
        print(style.nc(d))
        print(style(np.zeros((3, 3))))
    check_style()
