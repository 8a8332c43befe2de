"""Document shortening and the marked-node fix of the compact index.

For an instance length l with threshold 3l/4 and ceiling D (one less block
than l), every root path of the master tree carries two marks: its shallowest
explicit node of string depth at least 3l/4, and its shallowest explicit node
deeper than D. A long query either ends on the edge above the first mark or
at most at the parent of the second one, the anchor. Anchors deeper than the
query are resolved by a small instance built over anchor labels only.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from long_retrieval.decorate import long_threshold
from long_retrieval.instance import LongInstance
from stwa.conf import stwa_setting
from stwa.exceptions import InvariantViolation
from suffix_tree.documents import DocumentSet
from suffix_tree.locus import Locus
from tree_tools.marked import MarkedPredIndex

from .mapping import GstLocusMap

logger = logging.getLogger(__name__)


def instance_ceiling(key):
    """Longest query length routed to the (k, alpha) instance, plus one."""
    k, alpha = key
    return (alpha - 1) * 2 ** k


def first_deep_nodes(master, threshold):
    """For every node, its shallowest explicit ancestor (inclusive) of string depth >= threshold, or -1."""
    depth = master.string_depth
    parent = master.parent
    first = [-1] * len(master)
    for v in master.preorder():
        if parent[v] >= 0 and first[parent[v]] >= 0:
            first[v] = first[parent[v]]
        elif depth[v] >= threshold:
            first[v] = v
    return first


def shorten_documents(master, documents, length, first=None):
    """Longest qualifying suffix of every document; labels keep the original document numbers."""
    threshold = long_threshold(length)
    first = first_deep_nodes(master, threshold) if first is None else first
    depth = master.string_depth
    intervals = []
    labels = []
    for number, (start, end) in enumerate(documents.intervals, start=1):
        for p in range(start, end - threshold + 2):
            mark = first[master.leaf_at[p - 1]]
            if depth[mark] <= end - p + 1:
                intervals.append((p, end))
                labels.append(number)
                break
    logger.debug('length %d: kept %d of %d documents', length, len(intervals), len(documents))
    return DocumentSet(documents.text, intervals, nominal_length=length, labels=labels)


class CompactMarks:
    """Threshold and ceiling marks of every instance length, searchable by string depth."""

    def __init__(self, master, keys):
        marked = set()
        for key in keys:
            k, alpha = key
            for depth in (long_threshold(alpha * 2 ** k), instance_ceiling(key) + 1):
                marked.update(v for v, top in enumerate(first_deep_nodes(master, depth)) if top == v)
        self.index = MarkedPredIndex(master.parent, master.string_depth, sorted(marked),
                                     density_factor=2 * stwa_setting('MARK_DENSITY_FACTOR'))
        logger.info('compact marks: %d marked nodes over %d lengths', len(marked), len(keys))

    def mark_above(self, leaf, depth):
        """Shallowest marked ancestor of a leaf with string depth >= depth."""
        return self.index.successor(leaf, depth)

    def words(self):
        return self.index.words()


def long_edge_locus(master, mark, length):
    """Locus on the edge above `mark`, or None when the string runs below it."""
    depth = master.string_depth[mark]
    if depth == length:
        return Locus.explicit(mark, length)
    if depth > length:
        return Locus.implicit(mark, length)
    return None


def band_anchors(master, threshold, ceiling):
    """Inner nodes in [threshold, ceiling] with a leaf child or a child deeper than ceiling."""
    depth = master.string_depth
    anchors = []
    for v in range(1, len(master)):
        if master.is_leaf(v) or not threshold <= depth[v] <= ceiling:
            continue
        if any(master.is_leaf(c) or depth[c] > ceiling for c in master.children[v]):
            anchors.append(v)
    return anchors


def anchor_documents(master, text, anchors, threshold, length):
    """Anchor labels as documents, each label dropped when it ends a longer kept one.

    Returns the documents and, for every anchor, the (document, offset) its
    label starts at. The labels ending a kept label are its suffix link chain.
    """
    depth = master.string_depth
    place = {}
    intervals = []
    for u in sorted(anchors, key=lambda v: -depth[v]):
        if u in place:
            continue
        intervals.append((master.rep[u] + 1, master.rep[u] + depth[u]))
        doc = len(intervals)
        x, offset = u, 1
        while x not in place and depth[x] >= threshold:
            place[x] = (doc, offset)
            x = master.suffix_link[x]
            offset += 1
    documents = DocumentSet(text, intervals, nominal_length=length)
    return documents, {u: place[u] for u in anchors}


@dataclass
class CompactSlot:
    """The anchors of one instance length and the shrunk instance over their labels."""
    key: tuple
    documents: DocumentSet
    pointers: dict = field(default_factory=dict)
    master_of: dict = field(default_factory=dict)
    instance: LongInstance = None
    problems: list = field(default_factory=list)
    shortened: int = 0

    @property
    def length(self):
        k, alpha = self.key
        return alpha * 2 ** k

    @property
    def threshold(self):
        return long_threshold(self.length)

    @property
    def ceiling(self):
        return instance_ceiling(self.key)

    def anchored_locus(self, master, anchor, below, i, length):
        """Locus of w[i..i+length-1] given its deepest explicit ancestor path node <= ceiling."""
        depth = master.string_depth[anchor]
        if depth == length:
            return Locus.explicit(anchor, length)
        if depth < length:
            return Locus.implicit(below, length)
        floor = self.instance.floor_from_leaf(self.pointers[anchor], length)
        node = self.master_of.get(floor)
        if node is None:
            raise InvariantViolation(f'instance {self.key}: floor {floor} has no master node')
        depth = master.string_depth[node]
        if depth == length:
            return Locus.explicit(node, length)
        return Locus.implicit(master.child(node, master.text[i - 1 + depth]), length)

    def words(self):
        total = 2 * len(self.documents) + 2 * len(self.pointers) + 2 * len(self.master_of)
        if self.instance is not None:
            total += self.instance.words()
        return total


def build_compact_slot(master, text, key, blocks, t2=None, check_invariants=False):
    """Anchors and label instance of one length; `blocks` are the length's block documents.

    A length none of whose block documents survives shortening sends every
    query to a long edge and keeps no anchors.
    """
    slot = CompactSlot(key, DocumentSet(text, [], nominal_length=0))
    slot.shortened = len(shorten_documents(master, blocks, slot.length))
    anchors = band_anchors(master, slot.threshold, slot.ceiling) if slot.shortened else []
    if not anchors:
        logger.debug('instance %s: no anchors', key)
        return slot
    slot.documents, place = anchor_documents(master, text, anchors, slot.threshold, slot.length)
    instance = LongInstance(slot.documents, slot.length, compact=True, t2=t2)
    gst = instance.tree
    slot.pointers = {u: gst.leaf_of(doc, offset) for u, (doc, offset) in place.items()}
    located = GstLocusMap(master, gst, slot.documents.intervals)
    if check_invariants:
        slot.problems = instance.invariant_problems()
    for v in instance.shrink(slot.pointers.values()):
        locus = located.node[v]
        if not locus.is_explicit:
            raise InvariantViolation(f'instance {key}: deep node {v} is implicit in the master tree')
        slot.master_of[v] = locus.node
    slot.instance = instance
    return slot


def length_accounting(master, slots, word_bits=None):
    """Per-length words against factor * (n/W + n/l + s_l), s_l the master nodes at depth in [l/2, l]."""
    word_bits = stwa_setting('WORD_BITS') if word_bits is None else word_bits
    factor = stwa_setting('COMPACT_LENGTH_FACTOR')
    n = len(master.text) - 1
    depths = np.sort(np.asarray(master.string_depth[1:]))
    rows = {}
    for key, slot in slots.items():
        length = slot.length
        band = int(np.searchsorted(depths, length, side='right') - np.searchsorted(depths, -(-length // 2)))
        bound = factor * (n / word_bits + n / length + band)
        words = slot.words()
        rows[key] = {'length': length, 'band_nodes': band, 'words': words,
                     'bound': bound, 'passed': words <= bound}
    return rows
