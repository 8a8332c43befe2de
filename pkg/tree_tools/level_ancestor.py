"""Level ancestors by jump pointers plus ladders over long paths."""
import logging

import numpy as np

from stwa.exceptions import InvalidArgument
from stwa.probes import tick

from .shape import tree_shape

logger = logging.getLogger(__name__)


class LevelAncestorIndex:
    def __init__(self, parent):
        n = len(parent)
        root, children, order = tree_shape(parent)
        self.root = root
        depth = [0] * n
        for v in order:
            for c in children[v]:
                depth[c] = depth[v] + 1
        height = [1] * n
        long_child = [-1] * n
        for v in reversed(order):
            for c in children[v]:
                if height[c] + 1 > height[v]:
                    height[v] = height[c] + 1
                    long_child[v] = c
        self.depth = depth

        self.ladders = []
        self.ladder_top = []
        path_of = [0] * n
        for v in order:
            if v != root and long_child[parent[v]] == v:
                continue
            path = []
            u = v
            while u >= 0:
                path.append(u)
                path_of[u] = len(self.ladders)
                u = long_child[u]
            extension = []
            u = parent[v]
            while u >= 0 and len(extension) < len(path):
                extension.append(u)
                u = parent[u]
            extension.reverse()
            self.ladders.append(extension + path)
            self.ladder_top.append(depth[v] - len(extension))
        self.path_of = path_of

        levels = max(1, (max(depth, default=0)).bit_length())
        jump = np.empty((levels, n), dtype=np.int64)
        jump[0] = [p if p >= 0 else v for v, p in enumerate(parent)]
        for i in range(1, levels):
            jump[i] = jump[i - 1][jump[i - 1]]
        self.jump = jump
        logger.debug('level ancestor: %d nodes, %d ladders', n, len(self.ladders))

    def __call__(self, v, d):
        return self.query(v, d)

    def query(self, v, d):
        """Ancestor of v at tree depth d."""
        tick()
        k = self.depth[v] - d
        if k < 0 or d < 0:
            raise InvalidArgument(f'depth {d} outside [0, {self.depth[v]}] for node {v}')
        if k == 0:
            return v
        tick()
        u = int(self.jump[k.bit_length() - 1, v])
        tick()
        ladder = self.path_of[u]
        return self.ladders[ladder][d - self.ladder_top[ladder]]

    def words(self):
        return self.jump.size + sum(len(ladder) for ladder in self.ladders) + 3 * len(self.depth)


def build_level_ancestor(parent):
    return LevelAncestorIndex(parent)


def level_ancestor(index, v, d):
    return index.query(v, d)
