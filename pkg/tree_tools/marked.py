"""Predecessor and successor by weight among the marked ancestors of a node.

Weights strictly increase from the root. Nodes are split bottom-up into
macro nodes and micro trees of at most `limit` nodes. A macro node keeps the
sorted weights of every marked ancestor (itself included); a micro tree
keeps the sorted weights of its own marked nodes and each of its nodes a
bitmask over the positions of its marked ancestors inside the micro tree.
A micro tree's marks are all deeper than the marks of the macro node above
it, so a search checks one word and at most one small sorted list.
"""
import logging
import math

from stwa.conf import stwa_setting
from stwa.exceptions import InvalidArgument
from stwa.probes import tick

from .shape import tree_shape
from .small_set import small_set_predecessor, small_set_successor

logger = logging.getLogger(__name__)

PRED = 'pred'
SUCC = 'succ'


class _MicroTree:
    __slots__ = ('weights', 'nodes')

    def __init__(self):
        self.weights = []
        self.nodes = []


class MarkedPredIndex:
    def __init__(self, parent, weights, marks, density_factor=None, limit=None):
        n = len(parent)
        root, children, order = tree_shape(parent)
        density_factor = stwa_setting('MARK_DENSITY_FACTOR') if density_factor is None else density_factor
        limit = stwa_setting('MICRO_TREE_LIMIT') if limit is None else limit
        self.block = max(1, min(int(math.log2(n)) if n > 1 else 1, limit))
        marked = [False] * n
        for v in marks:
            marked[v] = True
        self.weights = list(weights)

        cap = density_factor * (math.log2(max(n, 2)) + 1)
        on_path = [0] * n
        for v in order:
            above = on_path[parent[v]] if v != root else 0
            on_path[v] = above + marked[v]
            if on_path[v] > cap:
                raise InvalidArgument(f'node {v} has {on_path[v]} marked ancestors, more than {cap:.0f}')
            if v != root and self.weights[v] <= self.weights[parent[v]]:
                raise InvalidArgument(f'weight of node {v} does not exceed its parent weight')

        is_macro = [False] * n
        open_size = [0] * n
        for v in reversed(order):
            size = 1 + sum(open_size[c] for c in children[v] if not is_macro[c])
            if size > self.block:
                is_macro[v] = True
            else:
                open_size[v] = size

        # anchor: the macro node itself, or the macro parent of the micro tree
        self.anchor = [-1] * n
        self.micro_of = [-1] * n
        self.position_mask = [0] * n
        self.micro_trees = []
        self.heaps = {}
        for v in order:
            p = parent[v]
            if is_macro[v]:
                self.anchor[v] = v
            elif p < 0 or is_macro[p]:
                self.anchor[v] = p
                self.micro_of[v] = len(self.micro_trees)
                self.micro_trees.append(_MicroTree())
            else:
                self.anchor[v] = self.anchor[p]
                self.micro_of[v] = self.micro_of[p]
        self._index_micro_marks(order, parent, marked, is_macro)

        for v in order:
            p = parent[v]
            if is_macro[v]:
                inherited = self.heaps[self.anchor[p]] if p >= 0 and self.anchor[p] >= 0 else ([], [])
                ws, ns = list(inherited[0]), list(inherited[1])
                if p >= 0 and not is_macro[p]:
                    micro = self.micro_trees[self.micro_of[p]]
                    for bit in _bits(self.position_mask[p]):
                        ws.append(micro.weights[bit])
                        ns.append(micro.nodes[bit])
                if marked[v]:
                    ws.append(self.weights[v])
                    ns.append(v)
                self.heaps[v] = (ws, ns)
        self.marked = marked
        logger.debug('marked ancestors: %d nodes, %d macro, %d micro trees, block %d',
                     n, len(self.heaps), len(self.micro_trees), self.block)

    def _index_micro_marks(self, order, parent, marked, is_macro):
        members = {}
        for v in order:
            if not is_macro[v] and marked[v]:
                members.setdefault(self.micro_of[v], []).append(v)
        position = {}
        for micro_id, nodes in members.items():
            nodes.sort(key=lambda v: self.weights[v])
            micro = self.micro_trees[micro_id]
            micro.weights = [self.weights[v] for v in nodes]
            micro.nodes = nodes
            for i, v in enumerate(nodes):
                position[v] = i
        for v in order:
            if is_macro[v]:
                continue
            p = parent[v]
            mask = self.position_mask[p] if p >= 0 and not is_macro[p] else 0
            if marked[v]:
                mask |= 1 << position[v]
            self.position_mask[v] = mask

    def _heap(self, v):
        anchor = self.anchor[v]
        return self.heaps[anchor] if anchor >= 0 else None

    def predecessor(self, v, x):
        """Marked ancestor of v (inclusive) with the largest weight <= x."""
        tick()
        micro_id = self.micro_of[v]
        if micro_id >= 0:
            micro = self.micro_trees[micro_id]
            found = small_set_predecessor(micro.weights, x)
            if found is not None:
                i = found[0] - 1
                hits = self.position_mask[v] & ((2 << i) - 1)
                if hits:
                    return micro.nodes[hits.bit_length() - 1]
        heap = self._heap(v)
        if heap is None:
            return None
        found = small_set_predecessor(heap[0], x)
        return heap[1][found[0] - 1] if found else None

    def successor(self, v, x):
        """Marked ancestor of v (inclusive) with the smallest weight >= x."""
        tick()
        heap = self._heap(v)
        if heap is not None:
            found = small_set_successor(heap[0], x)
            if found is not None:
                return heap[1][found[0] - 1]
        micro_id = self.micro_of[v]
        if micro_id < 0:
            return None
        micro = self.micro_trees[micro_id]
        found = small_set_successor(micro.weights, x)
        i = found[0] - 1 if found else len(micro.weights)
        hits = self.position_mask[v] >> i
        if not hits:
            return None
        return micro.nodes[i + (hits & -hits).bit_length() - 1]

    def search(self, v, x, direction=PRED):
        if direction == PRED:
            return self.predecessor(v, x)
        if direction == SUCC:
            return self.successor(v, x)
        raise InvalidArgument(f'unknown search direction {direction!r}')

    def words(self):
        total = 3 * len(self.anchor)
        total += sum(2 * len(ws) for ws, _ in self.heaps.values())
        total += sum(2 * len(m.weights) for m in self.micro_trees)
        return total


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_marked_pred(parent, weights, marks, density_factor=None):
    return MarkedPredIndex(parent, weights, marks, density_factor)


def marked_pred_search(index, v, x, direction=PRED):
    return index.search(v, x, direction)
