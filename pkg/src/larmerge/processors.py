"""Sequential and thread-parallel processors for per-fragment work."""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from .errors import LarmergeError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class FragmentProcessor:
    """
    Apply a function to independent work items (facets, segments, components).

    Results are yielded as ``(index, result)`` pairs. With ``deterministic``
    the pairs come back in input order regardless of the number of workers;
    otherwise they come back as soon as each item completes.
    """

    def __init__(self, jobs: Optional[int] = 1, deterministic: bool = True):
        self.jobs = max(1, jobs or 1)
        self.deterministic = deterministic

    def map(self, func: Callable[[T], R], items: Iterable[T]) -> Iterator[tuple[int, R]]:
        items = list(items)
        if self.jobs == 1 or len(items) < 2:
            yield from self._sequential(func, items)
        elif self.deterministic:
            yield from self._ordered(func, items)
        else:
            yield from self._completed(func, items)

    def _sequential(self, func, items) -> Iterator[tuple[int, R]]:
        for index, item in enumerate(items):
            yield index, self._call(func, index, item)

    def _ordered(self, func, items) -> Iterator[tuple[int, R]]:
        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            futures = [executor.submit(self._call, func, i, item) for i, item in enumerate(items)]
            for index, future in enumerate(futures):
                yield index, future.result()

    def _completed(self, func, items) -> Iterator[tuple[int, R]]:
        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            futures = {
                executor.submit(self._call, func, i, item): i for i, item in enumerate(items)
            }
            for completed in as_completed(futures):
                yield futures[completed], completed.result()

    @staticmethod
    def _call(func, index: int, item):
        try:
            return func(item)
        except LarmergeError as e:
            if e.provenance is None:
                e.provenance = index
            logger.error(f"Error processing item {index}: {e}")
            raise
