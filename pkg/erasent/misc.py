"""
enhanced-built-in function
"""

from typing import Union

import numpy as np


__all__ = ['get_random_generator']


def get_random_generator(generator: Union[int, np.random.Generator] = None) -> np.random.Generator:
    """
    Get a numpy random generator

    :param generator: An existing generator is passed through, an int is used as seed
    """
    if isinstance(generator, np.random.Generator):
        return generator
    elif generator is not None and isinstance(generator, (int, np.integer)):
        return np.random.default_rng(int(generator))
    else:
        return np.random.default_rng()  # effectively no seed
