"""
Project configuration, a flat `key=value` file mirroring the command-line flags
"""

import os
from typing import List, Dict, Iterable, Union, Any

from erasent.os import rel_path
from erasent.errors import ParameterError
from erasent.prettier import get_logger, style


__all__ = ['KvConfig']


logger = get_logger(__name__)


ConfigValue = Union[str, bool, List[str]]


class KvConfig:
    """
    the one-stop place for run parameters, expects a flat text file of `key=value` lines

    `#` starts a comment, blank lines are ignored, keys match the command-line flags with or without the leading `--`,
        `-` and `_` are interchangeable
    """
    true_strs, false_strs = ('true', 'yes', 'on', '1'), ('false', 'no', 'off', '0')

    def __init__(
            self, config_file: str, multiple: Iterable[str] = ('sweep',), flags: Iterable[str] = ('stationary',),
            pairs: Iterable[str] = ('fock',)
    ):
        """
        :param config_file: Path to the config file
        :param multiple: Keys that may repeat, collected into a list in file order
        :param flags: Keys with boolean values
        :param pairs: Keys taking two whitespace-separated values
        """
        self.config_file = config_file
        self.multiple, self.flags, self.pairs = set(multiple), set(flags), set(pairs)
        if not os.path.isfile(config_file):
            raise ParameterError(f'Config file not found at {style(config_file)}')
        with open(config_file, 'r', encoding='utf-8') as f:
            self.d = self._parse(f.readlines())
        logger.debug(f'Loaded {style(len(self.d))} keys from config {style(rel_path(config_file))}')

    @staticmethod
    def normalize_key(key: str) -> str:
        return key.strip().lstrip('-').replace('-', '_')

    def _parse(self, lines: List[str]) -> Dict[str, ConfigValue]:
        ret: Dict[str, ConfigValue] = dict()
        for i, line in enumerate(lines, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ParameterError(f'Expect {style("key=value")} at line {style(i)} of {style(self.config_file)}, got {style(line)}')
            k, v = line.split('=', 1)
            k, v = KvConfig.normalize_key(k), v.strip()
            if not k:
                raise ParameterError(f'Empty key at line {style(i)} of {style(self.config_file)}')

            if k in self.multiple:
                ret.setdefault(k, []).append(v)
                continue
            if k in ret:
                raise ParameterError(f'Duplicate key {style(k)} at line {style(i)} of {style(self.config_file)}')
            if k in self.flags:
                if v.lower() not in KvConfig.true_strs + KvConfig.false_strs:
                    raise ParameterError(f'Expect a boolean for {style(k)}, got {style(v)}')
                ret[k] = v.lower() in KvConfig.true_strs
            elif k in self.pairs:
                vs = v.replace(',', ' ').split()
                if len(vs) != 2:
                    raise ParameterError(f'Expect two values for {style(k)}, got {style(v)}')
                ret[k] = vs
            else:
                ret[k] = v
        return ret

    def __call__(self, key: str = None) -> Union[ConfigValue, Dict[str, ConfigValue]]:
        """
        Retrieves the queried value, or the entire mapping if no key is given
        """
        if key is None:
            return dict(self.d)
        key = KvConfig.normalize_key(key)
        if key not in self.d:
            raise ParameterError(f'{style(key)} not found in config, available keys: {style(list(self.d))}')
        return self.d[key]

    def default_map(self, known_keys: Iterable[str]) -> Dict[str, Any]:
        """
        :param known_keys: Parameter names accepted by the command
        :return: Values keyed by parameter name, for `click`'s `default_map`
        """
        known_keys = set(known_keys)
        unknown = sorted(k for k in self.d if k not in known_keys)
        if unknown:
            raise ParameterError(f'Unknown keys in config {style(self.config_file)}: {style(unknown)}')
        return dict(self.d)
