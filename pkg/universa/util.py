#
# universa - unified multi-metric speech quality profiler.
#
# Copyright (C) 2025 - 2026 by universa developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#

"""
universa utility functions.
"""

import asyncio
import typing as tp
from collections.abc import Callable, Sequence

T = tp.TypeVar('T')
R = tp.TypeVar('R')

async def gather_threads(
        f: Callable[[T], R],
        items: Sequence[T],
        *,
        workers: int=4,
    ) -> list[R]:
    """
    Run function for each item in worker threads.

    Results are returned in order of the input items. At most `workers`
    calls run at the same time.

    :param f: Function to call for each item.
    :param items: Items to process.
    :param workers: Maximum number of concurrent calls.
    """
    if workers < 1:
        raise ValueError('Number of workers has to be positive')

    sem = asyncio.Semaphore(workers)

    async def run(item: T) -> R:
        async with sem:
            return await asyncio.to_thread(f, item)

    tasks = [asyncio.create_task(run(item)) for item in items]
    try:
        return await asyncio.gather(*tasks)
    finally:
        for t in tasks:
            t.cancel()

def run_parallel(
        f: Callable[[T], R],
        items: Sequence[T],
        *,
        workers: int=4,
    ) -> list[R]:
    """
    Run function for each item in worker threads and wait for results.

    .. seealso:: `gather_threads`
    """
    if workers == 1 or len(items) < 2:
        return [f(item) for item in items]
    return asyncio.run(gather_threads(f, items, workers=workers))

# vim: sw=4:et:ai
