"""Predecessor in nested sets S_1 ⊆ S_2 ⊆ ... ⊆ S_k.

Sets are grouped by size class floor(log2 |S_i|); since sizes never shrink
the groups are contiguous. A query first finds the predecessor of x in the
last set of the group (a dense table, or packed rank/select in compact
mode) and then maps that rank to a rank in S_i with a per-set table.
"""
import logging

import numpy as np

from bitvec.rank_select import PackedRankSelect
from stwa.exceptions import InvalidArgument
from stwa.probes import tick

from .sets import SetCollection, check_nested

logger = logging.getLogger(__name__)


class PinsIndex:
    def __init__(self, collection, compact=False, t1=1, validate=True):
        if not isinstance(collection, SetCollection):
            collection = SetCollection(list(collection[0]), collection[1])
        sets = collection.sets
        if validate:
            check_nested(sets)
        self.universe_size = collection.universe_size
        self.compact = compact
        self.values = sets
        self.group_of = []
        self.group_last = []
        for i, values in enumerate(sets):
            if not len(values):
                self.group_of.append(-1)
                continue
            size_class = len(values).bit_length() - 1
            if not self.group_last or size_class != self._size_class(self.group_last[-1]):
                self.group_last.append(i)
            else:
                self.group_last[-1] = i
            self.group_of.append(len(self.group_last) - 1)

        self.rank_tables = []
        self.last_rank = None
        if compact and self.group_last:
            last = sets[self.group_last[-1]]
            self.last_rank = PackedRankSelect(last, self.universe_size, t1 + 1)
            for g in self.group_last[:-1]:
                positions = np.searchsorted(last, sets[g]) + 1
                self.rank_tables.append(PackedRankSelect(positions, len(last), t1))
            self.rank_tables.append(None)
        else:
            probe = np.arange(self.universe_size + 1)
            for g in self.group_last:
                self.rank_tables.append(np.searchsorted(sets[g], probe, side='right').astype(np.int64))

        self.pred_tables = []
        for i, values in enumerate(sets):
            if self.group_of[i] < 0:
                self.pred_tables.append(None)
                continue
            anchor = sets[self.group_last[self.group_of[i]]]
            table = np.zeros(len(anchor) + 1, dtype=np.int64)
            table[1:] = np.searchsorted(values, anchor, side='right')
            self.pred_tables.append(table)
        logger.debug('PINS: %d sets, %d groups, N=%d, compact=%s',
                     len(sets), len(self.group_last), self.universe_size, compact)

    def _size_class(self, i):
        return len(self.values[i]).bit_length() - 1

    def __len__(self):
        return len(self.values)

    def size(self, i):
        return len(self.values[i - 1])

    def max_value(self, i):
        values = self.values[i - 1]
        return int(values[-1]) if len(values) else None

    def predecessor(self, i, x):
        """Largest element <= x of S_i as (rank, value), or None."""
        if i < 1 or i > len(self.values):
            raise InvalidArgument(f'set index {i} outside [1, {len(self.values)}]')
        if x < 1 or x > self.universe_size:
            raise InvalidArgument(f'query {x} outside [1, {self.universe_size}]')
        group = self.group_of[i - 1]
        if group < 0:
            return None
        if self.compact:
            r = self.last_rank.rank(x)
            table = self.rank_tables[group]
            if table is not None:
                r = table.rank(r)
        else:
            tick()
            r = int(self.rank_tables[group][x])
        tick()
        rank = int(self.pred_tables[i - 1][r])
        if rank == 0:
            return None
        tick()
        return rank, int(self.values[i - 1][rank - 1])

    def element_total(self):
        return sum(len(v) for v in self.values)

    def words(self):
        total = sum(len(v) for v in self.values)
        total += sum(len(t) for t in self.pred_tables if t is not None)
        total += 2 * len(self.values)
        if self.compact:
            if self.last_rank is not None:
                total += self.last_rank.words()
            total += sum(t.words() for t in self.rank_tables if t is not None)
        else:
            total += sum(len(t) for t in self.rank_tables)
        return total


def build_pins(collection):
    return PinsIndex(collection)


def build_pins_compact(collection, t1=1):
    return PinsIndex(collection, compact=True, t1=t1)


def pins_predecessor(index, i, x):
    return index.predecessor(i, x)
