import os
import sys
import logging
from typing import List, Dict, Union, Optional, Any

from erasent.prettier.prettier_debug import style, filter_ansi, _ANSI_REST_ALL


__all__ = [
    'MyFormatter', 'filter_ansi', 'StdStreamHandler', 'CleanAnsiFileHandler',
    'LOG_STR2LOG_LEVEL', 'get_logging_handler', 'get_logger', 'set_package_log_handlers',
    'CheckArg', 'check_arg', 'ca',
]


class MyFormatter(logging.Formatter):
    """
    Default styling: time in cyan, metadata indicates logger & severity, plain log message
    """
    time = dict(fg='cyan', italic=True)
    sep = dict(fg='magenta')
    ref = dict(fg='blue')

    debug = dict(fg=None, italic=True)
    info = dict(fg=None, italic=True)
    warning = dict(fg='yellow', italic=True)
    error = dict(fg='red', italic=True)
    critical = dict(fg='magenta', bold=True, italic=True)

    LVL_MAP = {  # level => (abbreviation, style)
        logging.DEBUG: ('DBG', debug),
        logging.INFO: ('INFO', info),
        logging.WARNING: ('WARN', warning),
        logging.ERROR: ('ERR', error),
        logging.CRITICAL: ('CRIT', critical)
    }

    KW_TIME = '%(asctime)s'
    KW_MSG = '%(message)s'
    KW_LINENO = '%(lineno)d'
    KW_FNM = '%(filename)s'
    KW_FUNC_NM = '%(funcName)s'
    KW_NAME = '%(name)s'

    def __init__(self, with_color: bool = True):
        super().__init__()
        self.with_color = with_color

        def args2fmt(meta_abv: str, meta_style: Dict[str, Any]) -> str:
            if self.with_color:
                color_time = self._s(MyFormatter.KW_TIME, MyFormatter.time) + self._s('|', MyFormatter.sep)
                return color_time + self.fmt_meta(meta_abv, meta_style) + self._s(': ', MyFormatter.sep) \
                    + MyFormatter.KW_MSG + _ANSI_REST_ALL
            else:
                return f'{MyFormatter.KW_TIME}|{self.fmt_meta(meta_abv)}: {MyFormatter.KW_MSG}'

        self.formatter = {
            lv: logging.Formatter(args2fmt(*args), datefmt='%Y-%m-%d %H:%M:%S') for lv, args in MyFormatter.LVL_MAP.items()
        }

    @staticmethod
    def _s(txt: str, args: Dict[str, Any]) -> str:
        return style.nb(txt, fg=args.get('fg'), bold=args.get('bold', False)) if args.get('fg') or args.get('bold') \
            else txt

    def fmt_meta(self, meta_abv: str, meta_style: Dict[str, Any] = None) -> str:
        if self.with_color:
            ref, sep = MyFormatter.ref, MyFormatter.sep
            return '[' + self._s(MyFormatter.KW_NAME, ref) + ']' \
                + self._s('::', sep) + self._s(MyFormatter.KW_FUNC_NM, ref) \
                + self._s('::', sep) + self._s(MyFormatter.KW_FNM, ref) \
                + self._s(':', sep) + self._s(MyFormatter.KW_LINENO, ref) \
                + self._s(':', sep) + self._s(meta_abv, meta_style or dict())
        else:
            return f'[{MyFormatter.KW_NAME}] {MyFormatter.KW_FUNC_NM}::{MyFormatter.KW_FNM}:{MyFormatter.KW_LINENO}:{meta_abv}'

    def format(self, entry):
        return self.formatter[entry.levelno].format(entry)


class StdStreamHandler(logging.StreamHandler):
    """
    Writes to whatever `sys.stdout`/`sys.stderr` is at emit time, so that swapped streams (e.g. by a test runner) are honored
    """
    def __init__(self, stream_name: str = 'stderr'):
        self.stream_name = stream_name
        super().__init__()

    @property
    def stream(self):
        return getattr(sys, self.stream_name)

    @stream.setter
    def stream(self, value):
        pass


class CleanAnsiFileHandler(logging.FileHandler):
    """
    Removes ANSI escape sequences from log file as they are not supported by most text editors
    """
    def emit(self, record):
        record.msg = filter_ansi(str(record.msg))
        super().emit(record)


LOG_STR2LOG_LEVEL = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
    'critical': logging.CRITICAL,
}


LogLevel = Union[str, int]


def _level2int_level(level: LogLevel) -> int:
    if isinstance(level, str):
        return LOG_STR2LOG_LEVEL[level.lower()]
    assert isinstance(level, int)
    return level


_stream_logging_kinds = ['stdout', 'stderr']
_logging_kinds = _stream_logging_kinds + ['file', 'std+file', 'stderr+file']


def get_logging_handler(
        kind: str = 'stderr', file_path: str = None, level: LogLevel = 'debug', file_mode: str = 'a'
) -> Union[logging.Handler, List[logging.Handler]]:
    """
    :param kind: Handler kind, one of [`stdout`, `stderr`, `file`, `std+file`, `stderr+file`].
        If `stdout`/`stderr`, colored handler for the terminal stream
        If `file`, handler for file write with ANSI style filtering
        If `std+file` or `stderr+file`, both the stream and the file handler
    :param file_path: File path for file logging.
    :param level: Logging level for the handler.
    :param file_mode: File mode for file logging.
    """
    ca.assert_options('Logging Handler Kind', kind, _logging_kinds)
    if '+' in kind:  # recursive case
        stream = 'stdout' if kind == 'std+file' else 'stderr'
        return [
            get_logging_handler(kind=stream, level=level),
            get_logging_handler(kind='file', file_path=file_path, level=level, file_mode=file_mode)
        ]

    if kind in _stream_logging_kinds:
        handler = StdStreamHandler(stream_name=kind)
    else:
        if not file_path:
            raise ValueError(f'{style("file_path")} must be specified for {style("file")} logging')
        dnm = os.path.dirname(file_path)
        if dnm and not os.path.exists(dnm):
            os.makedirs(dnm, exist_ok=True)
        handler = CleanAnsiFileHandler(file_path, mode=file_mode)
    if level:
        handler.setLevel(_level2int_level(level))
    handler.setFormatter(MyFormatter(with_color=kind in _stream_logging_kinds))
    return handler


def _set_handlers(logger: logging.Logger, kind: str, level: LogLevel, file_path: Optional[str]) -> logging.Logger:
    for h in logger.handlers:
        if isinstance(h, logging.FileHandler):
            h.close()
    logger.handlers = []  # a crude way to remove prior handlers in case of conflict w/ later added handlers
    logger.setLevel(_level2int_level(level))
    handlers = get_logging_handler(kind=kind, file_path=file_path, level=level)
    for handler in (handlers if isinstance(handlers, list) else [handlers]):
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def get_logger(name: str, kind: str = 'stderr', level: LogLevel = 'info', file_path: str = None) -> logging.Logger:
    """
    :param name: name of the logger.
    :param kind: handler kind, see `get_logging_handler`.
    :param level: logging level.
    :param file_path: the file path for file logging.
    """
    return _set_handlers(logging.getLogger(name), kind=kind, level=level, file_path=file_path)


def set_package_log_handlers(
        prefix: str = 'erasent', kind: str = 'stderr', level: LogLevel = 'info', file_path: str = None
) -> List[logging.Logger]:
    """
    Re-configures every logger already created under the `prefix` namespace

    Intended for the command line, where level & destination are only known after argument parsing
    """
    names = [nm for nm in logging.Logger.manager.loggerDict if nm == prefix or nm.startswith(f'{prefix}.')]
    # each logger gets its own file handler, all appending to the same file
    return [_set_handlers(logging.getLogger(nm), kind=kind, level=level, file_path=file_path) for nm in sorted(names)]


class CheckArg:
    """
    An easy, readable interface for checking string arguments as effectively enums

    Raise errors when common arguments don't match the expected values
    """
    def __init__(self, ignore_none: bool = False):
        """
        :param ignore_none: If true, arguments passed in as `None` will not raise error
        """
        self.d_name2func = dict()
        self.ignore_none = ignore_none

    def __call__(self, **kwargs):
        for k, v in kwargs.items():
            self.d_name2func[k](v)

    def assert_options(
            self, display_name: str, val: Optional[str], options: List[str], silent: bool = False
    ) -> bool:
        if self.ignore_none and val is None:
            return True
        if val not in options:
            if silent:
                return False
            raise ValueError(f'Unexpected {style(display_name)}: expect one of {style(options)}, got {style(val)}')
        return True

    def cache_options(self, display_name: str, attr_name: str, options: List[str]):
        if attr_name in self.d_name2func:
            raise ValueError(f'Attribute name {style(attr_name)} already exists')
        self.d_name2func[attr_name] = lambda x: self.assert_options(display_name, x, options)
        setattr(self, attr_name, options)


ca = check_arg = CheckArg()
ca.cache_options('Measurement Outcome', attr_name='outcome', options=['plus', 'minus'])
ca.cache_options('Field Channel', attr_name='channel', options=['plus', 'minus', 'traced'])
ca.cache_options('Sweep Mode', attr_name='sweep_mode', options=['stationary', 'time'])
ca.cache_options(
    'Sweep Axis', attr_name='axis_name', options=['mbar_alpha', 'mbar1', 'mbar2', 'delta', 't', 'mbar_diff']
)
ca.cache_options('Oracle Method', attr_name='oracle_method', options=['series', 'rk4'])
ca.cache_options('Concurrency Mode', attr_name='conc_mode', options=['thread', 'process'])
ca.cache_options('Transposed Mode', attr_name='transpose_mode', options=[1, 2])


if __name__ == '__main__':
    def check_logger():
        logger = get_logger('erasent.check', level='debug')
        logger.debug(f'cutoffs {style((58, 58))}')
        logger.info(f'grid {style(dict(n_point=961, n_worker=4))}')
        logger.warning('warning')
    check_logger()

    def check_ca():
        ca(outcome='plus')
        ca(outcome='plus-minus')  # will raise error
    check_ca()
