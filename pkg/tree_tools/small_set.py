"""Constant-size predecessor over polylog-size sorted lists.

A bisect over a list of at most c·log²n entries stands in for an atomic
heap; each call counts as one probe.
"""
from bisect import bisect_left, bisect_right

from stwa.probes import tick


def small_set_predecessor(values, x):
    tick()
    rank = bisect_right(values, x)
    if rank == 0:
        return None
    return rank, values[rank - 1]


def small_set_successor(values, x):
    tick()
    rank = bisect_left(values, x)
    if rank == len(values):
        return None
    return rank + 1, values[rank]
