"""Active nodes and levels of the bottom part of a generalised suffix tree.

A node is active when its string depth is at least 3/4 of the instance
length and no two leaves below it come from the same document. The level
of a node is floor(log2(leaf count)).
"""
import logging
import math
from bisect import bisect_left, bisect_right

from suffix_tree.tree import ROOT

logger = logging.getLogger(__name__)

UNREACHABLE = math.inf


def long_threshold(length):
    """Smallest integer string depth d with 4d >= 3 * length."""
    return (3 * length + 3) // 4


def is_long(depth, length):
    return 4 * depth >= 3 * length


class DecoratedTree:
    def __init__(self, tree, length):
        self.tree = tree
        self.length = length
        self.threshold = long_threshold(length)
        size = len(tree)

        # next suffix-array rank holding a suffix of the same document
        doc_of_rank = [int(tree.doc_at[p]) for p in tree.sa]
        next_same = [UNREACHABLE] * len(doc_of_rank)
        last_seen = {}
        for r in range(len(doc_of_rank) - 1, -1, -1):
            next_same[r] = last_seen.get(doc_of_rank[r], UNREACHABLE)
            last_seen[doc_of_rank[r]] = r

        order = tree.preorder()
        nearest = [UNREACHABLE] * size
        for v in reversed(order):
            if tree.is_leaf(v):
                nearest[v] = next_same[tree.rank_lo[v]]
            else:
                nearest[v] = min(nearest[c] for c in tree.children[v])
        self.repeated = [nearest[v] <= tree.rank_hi[v] for v in range(size)]
        self.level = [tree.leaf_count(v).bit_length() - 1 for v in range(size)]
        self.active = [is_long(tree.string_depth[v], length) and not self.repeated[v] for v in range(size)]

        top_active = [-1] * size
        for v in order:
            p = tree.parent[v]
            if p >= 0 and self.active[p]:
                top_active[v] = top_active[p]
            elif self.active[v]:
                top_active[v] = v
        self.top_active = top_active
        self.min_active = {}
        for v in order:
            if tree.is_leaf(v):
                top = top_active[v]
                if top < 0:
                    self.min_active[v] = UNREACHABLE
                else:
                    self.min_active[v] = max(tree.string_depth[tree.parent[top]] + 1, self.threshold)
        logger.debug('decorated tree: length %d, %d active nodes', length, sum(self.active))

    def min_active_depth(self, leaf):
        """Smallest string depth of an active (possibly implicit) ancestor of a leaf."""
        return self.min_active[leaf]

    def levels(self):
        return sorted({self.level[v] for v in range(len(self.tree)) if self.active[v]})

    def link_violations(self):
        """Inactive nodes with an active suffix link, and links that lose levels."""
        tree = self.tree
        problems = []
        for v in range(len(tree)):
            if v == ROOT:
                continue
            link = tree.suffix_link[v]
            if not self.active[v] and self.active[link]:
                problems.append(f'node {v} is inactive but its suffix link {link} is active')
            if link != ROOT and self.level[link] < self.level[v]:
                problems.append(f'suffix link of node {v} has a smaller level')
        return problems

    def incoming_link_violations(self):
        """Incomparable same-level nodes whose links nest must link to a higher level."""
        tree = self.tree
        link = tree.suffix_link
        lo, hi = tree.rank_lo, tree.rank_hi
        problems = []
        by_level = {}
        for v in range(1, len(tree)):
            by_level.setdefault(self.level[v], []).append(v)

        def contains(a, b):
            return lo[a] <= lo[b] and hi[b] <= hi[a]

        for k, nodes in by_level.items():
            nodes.sort(key=lambda v: lo[link[v]])
            keys = [lo[link[v]] for v in nodes]
            for u in nodes:
                lu = link[u]
                if lu == ROOT or self.level[lu] > k:
                    continue
                for at in range(bisect_left(keys, lo[lu]), bisect_right(keys, hi[lu])):
                    v = nodes[at]
                    if v != u and not contains(u, v) and not contains(v, u) and contains(lu, link[v]):
                        problems.append(f'nodes {u} and {v} share level {k} and link into the same level')
                        break
        return problems

    def words(self):
        return 3 * len(self.level) + len(self.min_active)


def decorate(tree, length):
    return DecoratedTree(tree, length)
