"""Suffix trees and generalised suffix trees over integer alphabets.

The tree is lifted from the suffix array and LCP array of the concatenation
w_1 $_1 w_2 $_2 ... where every separator is unique, so no common prefix
ever crosses a separator. Nodes live in flat arrays; node 0 is the root.
"""
import logging
from functools import cached_property

import numpy as np

from strcore.symbols import SEPARATOR_BASE, to_symbols
from stwa.exceptions import InvalidArgument, InvariantViolation
from stwa.probes import tick
from tree_tools.level_ancestor import LevelAncestorIndex

from .construction import lcp_array, suffix_array
from .locus import Locus

logger = logging.getLogger(__name__)

ROOT = 0


class SuffixTree:
    def __init__(self, documents):
        documents = [to_symbols(doc) for doc in documents]
        if not documents:
            raise InvalidArgument('at least one document is required')
        # separators sit above every text symbol
        self.separator_base = max([SEPARATOR_BASE] + [max(doc) + 1 for doc in documents if doc])
        text = []
        self.doc_start = []
        self.doc_length = []
        for d, doc in enumerate(documents):
            self.doc_start.append(len(text))
            self.doc_length.append(len(doc))
            text.extend(doc)
            text.append(self.separator_base + d)
        self.text = text
        n = len(text)
        self.doc_at = np.repeat(np.arange(len(documents)), [length + 1 for length in self.doc_length])
        self.separator_at = np.repeat(
            np.asarray(self.doc_start) + np.asarray(self.doc_length), [length + 1 for length in self.doc_length])

        self.sa = suffix_array(text)
        lcp = lcp_array(text, self.sa)

        self.parent = [-1]
        self.string_depth = [0]
        self.children = [[]]
        self.rep = [0]
        self.leaf_position = [-1]
        leaf_at = [0] * n

        def new_node(depth, position):
            self.parent.append(-1)
            self.string_depth.append(depth)
            self.children.append([])
            self.rep.append(position)
            self.leaf_position.append(-1)
            return len(self.parent) - 1

        def attach(p, c):
            self.parent[c] = p
            self.children[p].append(c)

        stack = [ROOT]
        for r in range(n):
            p = int(self.sa[r])
            h = lcp[r]
            last = None
            while self.string_depth[stack[-1]] > h:
                last = stack.pop()
                if self.string_depth[stack[-1]] >= h:
                    attach(stack[-1], last)
            if self.string_depth[stack[-1]] < h:
                u = new_node(h, p)
                attach(u, last)
                stack.append(u)
            leaf = new_node(int(self.separator_at[p]) - p + 1, p)
            self.leaf_position[leaf] = p
            leaf_at[p] = leaf
            stack.append(leaf)
        while len(stack) > 1:
            last = stack.pop()
            attach(stack[-1], last)
        self.leaf_at = leaf_at

        size = len(self.parent)
        self.rank_lo = [0] * size
        self.rank_hi = [0] * size
        self.tree_depth = [0] * size
        order = self.preorder()
        for v in order:
            if self.parent[v] >= 0:
                self.tree_depth[v] = self.tree_depth[self.parent[v]] + 1
        rank_of = np.empty(n, dtype=np.int64)
        rank_of[self.sa] = np.arange(n)
        for v in reversed(order):
            if self.leaf_position[v] >= 0:
                self.rank_lo[v] = self.rank_hi[v] = int(rank_of[self.leaf_position[v]])
            else:
                self.rank_lo[v] = self.rank_lo[self.children[v][0]]
                self.rank_hi[v] = self.rank_hi[self.children[v][-1]]
                self.rep[v] = int(self.sa[self.rank_lo[v]])
        self.rank_of = rank_of
        self.by_symbol = [None] * size
        for v in range(size):
            if self.children[v]:
                sd = self.string_depth[v]
                self.by_symbol[v] = {text[self.rep[c] + sd]: c for c in self.children[v]}
        self.suffix_link = self._suffix_links(order)
        logger.info('suffix tree: %d documents, %d symbols, %d nodes', len(documents), n, size)

    def _suffix_links(self, order):
        link = [-1] * len(self.parent)
        link[ROOT] = ROOT
        for v in sorted((v for v in order if v != ROOT and self.leaf_position[v] < 0),
                        key=self.string_depth.__getitem__):
            target = self.string_depth[v] - 1
            start = self.rep[v] + 1
            p = self.parent[v]
            x = link[p] if p != ROOT else ROOT
            while self.string_depth[x] < target:
                c = self.by_symbol[x][self.text[start + self.string_depth[x]]]
                if self.string_depth[c] > target:
                    raise InvariantViolation(f'suffix link of node {v} ends inside an edge')
                x = c
            link[v] = x
        for p, leaf in enumerate(self.leaf_at):
            link[leaf] = ROOT if self.is_separator_position(p) else self.leaf_at[p + 1]
        return link

    def is_separator_position(self, p):
        return int(self.separator_at[p]) == p

    def preorder(self):
        order = []
        stack = [ROOT]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        return order

    def __len__(self):
        return len(self.parent)

    @property
    def document_count(self):
        return len(self.doc_start)

    def is_leaf(self, v):
        return self.leaf_position[v] >= 0

    def leaf_count(self, v):
        return self.rank_hi[v] - self.rank_lo[v] + 1

    def leaf_document(self, v):
        """1-based document of a leaf."""
        return int(self.doc_at[self.leaf_position[v]]) + 1

    def leaf_offset(self, v):
        """1-based offset of a leaf's suffix inside its document."""
        p = self.leaf_position[v]
        return p - self.doc_start[int(self.doc_at[p])] + 1

    def document(self, doc):
        start = self.doc_start[doc - 1]
        return self.text[start:start + self.doc_length[doc - 1]]

    def position(self, doc, offset):
        """Text position (0-based) of w_doc[offset]."""
        if doc < 1 or doc > len(self.doc_start):
            raise InvalidArgument(f'document {doc} outside [1, {len(self.doc_start)}]')
        if offset < 1 or offset > self.doc_length[doc - 1]:
            raise InvalidArgument(f'offset {offset} outside document {doc}')
        return self.doc_start[doc - 1] + offset - 1

    def leaf_of(self, doc, offset):
        tick()
        return self.leaf_at[self.position(doc, offset)]

    def child(self, v, symbol):
        tick()
        table = self.by_symbol[v]
        return table.get(symbol) if table else None

    def label(self, v):
        return self.text[self.rep[v]:self.rep[v] + self.string_depth[v]]

    @cached_property
    def level_ancestors(self):
        return LevelAncestorIndex(self.parent)

    @cached_property
    def leftmost_position(self):
        """Smallest 0-based text position among the leaves below each node."""
        best = [len(self.text)] * len(self)
        for v in reversed(self.preorder()):
            if self.is_leaf(v):
                best[v] = self.leaf_position[v]
            else:
                best[v] = min(best[c] for c in self.children[v])
        return best

    def locate(self, position, length):
        """Locus of text[position:position+length] by binary search over the leaf's ancestors."""
        if length == 0:
            return Locus.explicit(ROOT, 0)
        leaf = self.leaf_at[position]
        if length > self.string_depth[leaf]:
            raise InvalidArgument(f'length {length} runs past the document end')
        la = self.level_ancestors
        lo, hi = 1, self.tree_depth[leaf]
        while lo < hi:
            mid = (lo + hi) // 2
            if self.string_depth[la.query(leaf, mid)] >= length:
                hi = mid
            else:
                lo = mid + 1
        u = la.query(leaf, lo)
        if self.string_depth[u] == length:
            return Locus.explicit(u, length)
        return Locus.implicit(u, length)

    def locus_of(self, doc, i, j):
        return self.locate(self.position(doc, i), j - i + 1)

    def words(self):
        return 9 * len(self.parent) + 3 * len(self.text) + sum(len(c) for c in self.children)


def build_suffix_tree(w):
    return SuffixTree([w])


def build_gst(documents):
    if hasattr(documents, 'materialize'):
        documents = documents.materialize()
    return SuffixTree(documents)


def leaf_of(tree, doc, offset):
    return tree.leaf_of(doc, offset)


def naive_locus(tree, doc, i, j):
    """Locus of w_doc[i..j] by walking down from the root one symbol at a time."""
    start = tree.position(doc, i)
    if j < i or j > tree.doc_length[doc - 1]:
        raise InvalidArgument(f'bad substring [{i}, {j}] of document {doc}')
    pattern = tree.text[start:start + j - i + 1]
    length = len(pattern)
    v = ROOT
    matched = 0
    while True:
        if tree.string_depth[v] == length:
            return Locus.explicit(v, length)
        c = tree.by_symbol[v].get(pattern[matched]) if tree.by_symbol[v] else None
        if c is None:
            raise InvariantViolation('substring of an indexed document is missing from the tree')
        edge_end = min(length, tree.string_depth[c])
        base = tree.rep[c]
        for q in range(matched, edge_end):
            if tree.text[base + q] != pattern[q]:
                raise InvariantViolation('substring of an indexed document is missing from the tree')
        matched = edge_end
        if tree.string_depth[c] > length:
            return Locus.implicit(c, length)
        v = c
