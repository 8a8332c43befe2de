"""Probe counter for query paths.

Each table lookup, bit-vector word or array access on a query path calls
``tick``. Benchmarks wrap single queries in ``measure`` and histogram the
counts. Counts are kept per thread, so concurrent queries measure only
their own probes.
"""
import threading
from contextlib import contextmanager


class _Counts(threading.local):
    count = 0


class ProbeCounter:
    __slots__ = ('_counts',)

    def __init__(self):
        self._counts = _Counts()

    def tick(self, n=1):
        self._counts.count += n

    @property
    def count(self):
        return self._counts.count


probes = ProbeCounter()
tick = probes.tick


@contextmanager
def measure():
    """Yield a one-element list that holds the probes spent inside the block."""
    start = probes.count
    box = [0]
    try:
        yield box
    finally:
        box[0] = probes.count - start
