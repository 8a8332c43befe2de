"""Predecessor in shrinking nested sets.

Lower bounds m_1 <= m_2 <= ... <= m_k are nondecreasing, S_i lies in
[m_i, N] and S_i ∩ [m_{i+1}, N] ⊆ S_{i+1}. The padded universe is split
recursively at its midpoint. At a node, the sets whose bound lies in the low
half contribute their high-half elements to one nested PINS and continue
into the low half; the remaining sets continue into the high half. Each set
therefore follows one root-to-node route and keeps a guide mask with one bit
per route depth that stores elements.
"""
import logging
from bisect import bisect_right

from stwa.conf import stwa_setting
from stwa.exceptions import InvalidArgument
from stwa.probes import tick

from .pins import PinsIndex
from .sets import SetCollection, check_shrinking

logger = logging.getLogger(__name__)


def split_point(bounds, mid):
    """Number of bounds <= mid, galloping from both ends at once."""
    n = len(bounds)
    step = 1
    while step <= n:
        if bounds[step - 1] > mid:
            return bisect_right(bounds, mid, step // 2, step - 1)
        if bounds[n - step] <= mid:
            return bisect_right(bounds, mid, n - step + 1, n - step // 2)
        step *= 2
    return bisect_right(bounds, mid)


class _Level:
    __slots__ = ('pins', 'local', 'shift', 'size', 'offset', 'max_value')

    def __init__(self, pins, local, shift, size):
        self.pins = pins
        self.local = local
        self.shift = shift
        self.size = size
        self.offset = 0
        self.max_value = 0


class _Route:
    __slots__ = ('path_bits', 'path_len', 'guide', 'levels')

    def __init__(self):
        self.path_bits = 0
        self.path_len = 0
        self.guide = 0
        self.levels = {}


class PisnsIndex:
    def __init__(self, collection, compact=False, t2=None, validate=True):
        sets = collection.sets
        bounds = None if collection.lower_bounds is None else [int(m) for m in collection.lower_bounds]
        if validate:
            check_shrinking(sets, bounds, collection.universe_size)
        self.universe_size = collection.universe_size
        self.compact = compact
        self.t1 = (stwa_setting('COMPACT_PISNS_DEPTH') if t2 is None else t2) + 1
        self.bits = max(0, (collection.universe_size - 1).bit_length())
        self.lower_bounds = bounds
        self.routes = [_Route() for _ in sets]
        self.subproblems = []

        members = [(i, [int(v) for v in values], bound) for i, (values, bound) in enumerate(zip(sets, bounds))]
        if members:
            self._split(1, 1 << self.bits, 0, members)
        for route in self.routes:
            offset = 0
            for depth in sorted(route.levels, reverse=True):
                level = route.levels[depth]
                level.offset = offset
                level.max_value = level.pins.max_value(level.local) + level.shift
                offset += level.size
        logger.debug('PISNS: %d sets, N=%d, %d subproblems', len(sets), self.universe_size, len(self.subproblems))

    def _attach(self, depth, lo, hi, shift, parts):
        """One nested PINS over the non-empty parts, registered at `depth` for their sets."""
        parts = [(i, values) for i, values in parts if values]
        if not parts:
            return
        pins = PinsIndex(SetCollection([[v - shift for v in values] for _, values in parts], hi - shift),
                         compact=self.compact, t1=self.t1, validate=False)
        self.subproblems.append((depth, lo, hi, pins))
        for local, (i, values) in enumerate(parts, 1):
            route = self.routes[i]
            route.levels[depth] = _Level(pins, local, shift, len(values))
            route.guide |= 1 << depth

    def _split(self, lo, hi, depth, members):
        if lo == hi or len(members) == 1:
            for i, _, _ in members:
                self.routes[i].path_len = depth
            self._attach(depth, lo, hi, lo - 1, [(i, values) for i, values, _ in members])
            return
        mid = (lo + hi) // 2
        k = split_point([bound for _, _, bound in members], mid)
        high_parts = []
        low = []
        for i, values, bound in members[:k]:
            cut = bisect_right(values, mid)
            route = self.routes[i]
            route.path_bits <<= 1
            high_parts.append((i, values[cut:]))
            if cut:
                low.append((i, values[:cut], bound))
            else:
                route.path_len = depth + 1
        self._attach(depth, mid + 1, hi, mid, high_parts)
        for i, _, _ in members[k:]:
            self.routes[i].path_bits = (self.routes[i].path_bits << 1) | 1
        if low:
            self._split(lo, mid, depth + 1, low)
        if k < len(members):
            self._split(mid + 1, hi, depth + 1, members[k:])

    def __len__(self):
        return len(self.routes)

    def predecessor(self, i, x):
        """Largest element <= x of S_i as (rank in S_i, value), or None."""
        if i < 1 or i > len(self.routes):
            raise InvalidArgument(f'set index {i} outside [1, {len(self.routes)}]')
        if x > self.universe_size:
            raise InvalidArgument(f'query {x} outside the universe [1, {self.universe_size}]')
        tick()
        if x < self.lower_bounds[i - 1]:
            return None
        route = self.routes[i - 1]
        y = x - 1
        diff = (y >> (self.bits - route.path_len)) ^ route.path_bits
        if diff:
            depth = route.path_len - diff.bit_length()
            if (route.path_bits >> (route.path_len - 1 - depth)) & 1:
                return None
        else:
            depth = route.path_len
        if (route.guide >> depth) & 1:
            level = route.levels[depth]
            tick()
            found = level.pins.predecessor(level.local, x - level.shift)
            if found is not None:
                return level.offset + found[0], found[1] + level.shift
        deeper = route.guide >> (depth + 1)
        if not deeper:
            return None
        tick()
        level = route.levels[depth + 1 + ((deeper & -deeper).bit_length() - 1)]
        return level.offset + level.size, level.max_value

    def element_total(self):
        return sum(pins.element_total() for _, _, _, pins in self.subproblems)

    def words(self):
        total = sum(pins.words() for _, _, _, pins in self.subproblems)
        return total + sum(3 + 6 * len(route.levels) for route in self.routes) + len(self.lower_bounds)


def build_pisns(collection, compact=False, t2=None):
    return PisnsIndex(collection, compact=compact, t2=t2)


def pisns_predecessor(index, i, x):
    return index.predecessor(i, x)
