"""Sparse bit vector with rank/select over a packed decomposition.

Positions are 1-based in [1, N]. The universe is cut into top buckets of
W**t positions with explicit partial sums; each non-empty bucket is a node
of height t whose W children cover W**(t-1) positions each. A node keeps an
occupancy mask B over its children, partial sums C over the non-empty ones
and handles to them. Height-1 nodes are plain W-bit masks. Popcount on the
masks replaces a universal lookup table.
"""
import logging
from itertools import groupby

import numpy as np

from stwa.conf import stwa_setting
from stwa.exceptions import InvalidArgument
from stwa.probes import tick

logger = logging.getLogger(__name__)


class _Node:
    __slots__ = ('mask', 'sums', 'children')

    def __init__(self, mask, sums, children):
        self.mask = mask
        self.sums = sums
        self.children = children


def _build_node(xs, height, word_bits):
    """Bucket-sort the local offsets `xs` into a node of the given height."""
    if height == 1:
        mask = 0
        for x in xs:
            mask |= 1 << x
        return mask
    span = word_bits ** (height - 1)
    mask = 0
    sums = [0]
    children = []
    for c, group in groupby(xs, key=lambda x: x // span):
        group = [x - c * span for x in group]
        mask |= 1 << c
        sums.append(sums[-1] + len(group))
        children.append(_build_node(group, height - 1, word_bits))
    return _Node(mask, sums, children)


def _node_words(node):
    if isinstance(node, int):
        return 1
    return 1 + len(node.sums) + len(node.children) + sum(_node_words(c) for c in node.children)


def _node_count(node):
    if isinstance(node, int):
        return 0
    return 1 + sum(_node_count(c) for c in node.children)


class PackedRankSelect:
    """Immutable rank/select structure over the one-bit positions of [1, N]."""

    def __init__(self, one_indices, universe_size, depth=None, word_bits=None):
        depth = stwa_setting('RANK_SELECT_DEPTH') if depth is None else depth
        word_bits = stwa_setting('WORD_BITS') if word_bits is None else word_bits
        if depth < 1:
            raise InvalidArgument(f'depth must be at least 1, got {depth}')
        if universe_size < 0:
            raise InvalidArgument(f'negative universe size {universe_size}')
        ones = [int(x) for x in one_indices]
        previous = 0
        for x in ones:
            if x <= previous or x > universe_size:
                raise InvalidArgument(f'one index {x} is out of range or out of order')
            previous = x

        self.universe_size = universe_size
        self.depth = depth
        self.word_bits = word_bits
        self.bucket_span = word_bits ** depth
        bucket_count = -(-universe_size // self.bucket_span) if universe_size else 0

        top_sums = np.zeros(bucket_count + 1, dtype=np.int64)
        self.top_nodes = [None] * bucket_count
        for b, group in groupby((x - 1 for x in ones), key=lambda x: x // self.bucket_span):
            group = [x - b * self.bucket_span for x in group]
            top_sums[b + 1] = len(group)
            self.top_nodes[b] = _build_node(group, depth, word_bits)
        self.top_sums = np.cumsum(top_sums)
        self.positions = np.asarray(ones, dtype=np.int64)
        logger.debug('packed rank/select: N=%d M=%d t=%d', universe_size, len(ones), depth)

    @property
    def ones(self):
        return len(self.positions)

    def rank(self, i):
        """Number of one bits at positions <= i, for 0 <= i <= N."""
        if i < 0 or i > self.universe_size:
            raise InvalidArgument(f'rank position {i} outside [0, {self.universe_size}]')
        if i == 0:
            return 0
        x = i - 1
        b = x // self.bucket_span
        tick()
        result = int(self.top_sums[b])
        node = self.top_nodes[b]
        local = x - b * self.bucket_span
        height = self.depth
        while node is not None:
            tick()
            if height == 1:
                return result + (node & ((2 << local) - 1)).bit_count()
            span = self.word_bits ** (height - 1)
            c, local = divmod(local, span)
            k = (node.mask & ((1 << c) - 1)).bit_count()
            result += node.sums[k]
            if not (node.mask >> c) & 1:
                break
            node = node.children[k]
            height -= 1
        return result

    def select(self, k):
        """Position of the k-th one bit, for 1 <= k <= M."""
        if k < 1 or k > len(self.positions):
            raise InvalidArgument(f'select rank {k} outside [1, {len(self.positions)}]')
        tick()
        return int(self.positions[k - 1])

    def internal_nodes(self):
        return sum(_node_count(node) for node in self.top_nodes if node is not None)

    def words(self):
        nodes = sum(_node_words(node) for node in self.top_nodes if node is not None)
        return len(self.top_sums) + len(self.top_nodes) + nodes + len(self.positions)


def build_packed_rank_select(one_indices, universe_size, depth=None):
    return PackedRankSelect(one_indices, universe_size, depth)


def rs_rank(structure, i):
    return structure.rank(i)


def rs_select(structure, k):
    return structure.select(k)
