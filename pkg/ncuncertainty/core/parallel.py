from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """Apply ``fn`` to every item, returning results in input order.

    ``threads <= 1`` runs inline. Exceptions from workers propagate to the caller.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    results: List[R] = [None] * len(items)  # type: ignore[list-item]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as ex:
        futs = {ex.submit(fn, it): i for i, it in enumerate(items)}
        for fut in as_completed(futs):
            results[futs[fut]] = fut.result()
    return results
