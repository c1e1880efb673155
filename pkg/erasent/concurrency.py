"""
concurrency

intended for evaluating independent grid points of a sweep
"""


import os
import heapq
import operator
import concurrent.futures
from typing import List, Dict, Iterable, Callable, TypeVar, Union

from erasent.container import group_n
from erasent.prettier import check_arg as ca, tqdc


__all__ = ['conc_yield']


T = TypeVar('T')
K = TypeVar('K')

MapFn = Callable[[T], K]


def _get_length(it: Iterable[T]) -> int:
    try:
        return len(it)
    except TypeError:
        return operator.length_hint(it, 0)


class BatchedFn:
    """
    Maps a batch of elements, a module-level class so that it is pickleable for multiprocessing
    """
    def __init__(self, fn: MapFn = None):
        self.fn = fn

    def __call__(self, args: Iterable[T]) -> List[K]:
        return [self.fn(a) for a in args]


def conc_yield(
        fn: MapFn, args: Iterable[T], with_tqdm: Union[bool, Dict] = False, n_worker: int = max(os.cpu_count() - 1, 1),
        mode: str = 'process', batch_size: Union[int, bool] = None, enforce_order: bool = False
) -> Iterable[K]:
    """
    Wrapper for `concurrent.futures`, yielding results as they become available

    :param fn: A function
    :param args: A list of elements as input to the function
    :param with_tqdm: If true, progress bar is shown
        If dict, treated as `tqdm` kwargs
    :param n_worker: Number of concurrent workers
        If 1, elements are mapped serially in the calling process
    :param mode: One of ['thread', 'process']
        Function has to be pickleable if 'process'
    :param batch_size: Number of elements for each worker submission
        Intended to lower concurrency overhead
    :param enforce_order: If true, results are yielded in the order of args passed
    :return: Iterator of `args` elements mapped by `fn`
    """
    ca(conc_mode=mode)
    args = list(args)

    pbar = None
    if with_tqdm:
        tqdm_args = dict(total=_get_length(args) or None)
        if isinstance(with_tqdm, dict):
            tqdm_args.update(with_tqdm)
        pbar = tqdc(**tqdm_args)

    def _update(n: int):
        if pbar is not None:
            pbar.update(n)

    try:
        if n_worker <= 1:
            for a in args:
                yield fn(a)
                _update(1)
            return

        batch_size = (32 if isinstance(batch_size, bool) else batch_size) or 1
        fn_ = BatchedFn(fn=fn)
        cls = concurrent.futures.ThreadPoolExecutor if mode == 'thread' else concurrent.futures.ProcessPoolExecutor
        with cls(max_workers=n_worker) as executor:
            futures = {executor.submit(fn_, batch): i for i, batch in enumerate(group_n(args, batch_size))}

            pq, index = [], 0  # priority queue of (batch index, results) pairs, the next batch index to yield
            for f in concurrent.futures.as_completed(futures):
                res = f.result()
                if enforce_order:
                    heapq.heappush(pq, (futures[f], res))
                    while pq and pq[0][0] == index:
                        _, res = heapq.heappop(pq)
                        yield from res
                        _update(len(res))
                        index += 1
                else:
                    yield from res
                    _update(len(res))
                del futures[f]
    finally:
        if pbar is not None:
            pbar.close()


if __name__ == '__main__':
    import time
    import random

    from erasent.prettier import sic

    def _work(task_idx: int = None):
        time.sleep(round(random.uniform(0.1, 0.5), 3))
        return task_idx

    def check_conc_yield():
        for mode in ['thread', 'process']:
            res = list(conc_yield(fn=_work, args=range(16), with_tqdm=True, n_worker=4, mode=mode, enforce_order=True))
            sic(mode, res)
    check_conc_yield()
