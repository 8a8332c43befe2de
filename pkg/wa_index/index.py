"""Substring locus queries over the suffix tree of one text.

The text is cut into blocks of 2**k symbols and every run of alpha
consecutive blocks is one document of the (k, alpha) instance. A substring
of length L >= 6 is long for exactly one instance, and the document starting
at the block of its first symbol holds all of it, so the instance's long
retrieval finds its locus and the instance's locus map carries that back to
the master tree. Shorter substrings are found by walking down from the root.

A compact index keeps no block documents. Marks on the master tree place a
long query on an edge directly, or at an anchor whose label instance
resolves the rest (see `compact`).
"""
import logging
from dataclasses import dataclass, field

from tqdm import tqdm

from long_retrieval.instance import LongInstance
from strcore.symbols import to_symbols
from stwa.conf import stwa_setting
from stwa.exceptions import InvalidArgument
from stwa.probes import tick
from suffix_tree.documents import DocumentSet
from suffix_tree.locus import Locus
from suffix_tree.tree import ROOT, build_suffix_tree

from .compact import CompactMarks, build_compact_slot, length_accounting, long_edge_locus
from .mapping import GstLocusMap

logger = logging.getLogger(__name__)

STANDARD = 'standard'
COMPACT = 'compact'
MODES = (STANDARD, COMPACT)

MIN_LONG_QUERY = 6


def choose_instance(length):
    """(k, alpha) with (alpha - 2) * 2**k <= length < (alpha - 1) * 2**k."""
    if length < MIN_LONG_QUERY:
        raise InvalidArgument(f'substrings shorter than {MIN_LONG_QUERY} have no instance')
    k = (length // 6).bit_length() - 1
    return k, length // 2 ** k + 2


def instance_keys(n, alphas=None):
    """Instances some query length in [6, n] is sent to."""
    alphas = stwa_setting('ALPHAS') if alphas is None else alphas
    keys = []
    k = 0
    while 6 * 2 ** k <= n:
        for alpha in alphas:
            shortest = (alpha - 2) * 2 ** k
            if shortest <= n and choose_instance(shortest) == (k, alpha):
                keys.append((k, alpha))
        k += 1
    return keys


def block_documents(text, k, alpha):
    """Runs of alpha blocks starting at every block; the last ones are clipped at the text end."""
    n = len(text)
    block = 2 ** k
    intervals = [(start, min(start + alpha * block - 1, n)) for start in range(1, n + 1, block)]
    return DocumentSet(text, intervals, nominal_length=alpha * block, labels=list(range(1, len(intervals) + 1)))


@dataclass
class InstanceSlot:
    key: tuple
    documents: DocumentSet
    instance: LongInstance = None
    locus_map: GstLocusMap = None
    problems: list = field(default_factory=list)

    @property
    def length(self):
        k, alpha = self.key
        return alpha * 2 ** k

    def query(self, i, length):
        """Master locus of w[i..i+length-1] through this instance; block b is document b."""
        doc = (i - 1) // 2 ** self.key[0] + 1
        tick()
        offset = i - self.documents.intervals[doc - 1][0] + 1
        found = self.instance.query(doc, offset, offset + length - 1)
        return self.locus_map.map_locus(found)

    def words(self):
        total = 2 * len(self.documents)
        if self.instance is not None:
            total += self.instance.words() + self.locus_map.words()
        return total


class WaIndex:
    def __init__(self, text, mode=STANDARD, t2=None, check_invariants=False):
        if mode not in MODES:
            raise InvalidArgument(f'unknown index mode {mode!r}')
        self.text = to_symbols(text)
        if not self.text:
            raise InvalidArgument('the text must not be empty')
        self.n = len(self.text)
        self.mode = mode
        self.master = build_suffix_tree(self.text)
        keys = instance_keys(self.n)
        self.marks = CompactMarks(self.master, keys) if mode == COMPACT else None
        self.slots = {}
        for key in tqdm(keys, desc='instances', disable=not stwa_setting('SHOW_PROGRESS')):
            if mode == COMPACT:
                blocks = block_documents(self.text, *key)
                self.slots[key] = build_compact_slot(self.master, self.text, key, blocks, t2, check_invariants)
            else:
                self.slots[key] = self._build_slot(key, t2, check_invariants)
        if logger.isEnabledFor(logging.INFO):
            logger.info('%s index over %d symbols: %d instances, %d words',
                        mode, self.n, len(self.slots), self.words())

    def _build_slot(self, key, t2, check_invariants):
        k, alpha = key
        documents = block_documents(self.text, k, alpha)
        slot = InstanceSlot(key, documents)
        slot.instance = LongInstance(documents, slot.length, t2=t2)
        slot.locus_map = GstLocusMap(self.master, slot.instance.tree, documents.intervals)
        if check_invariants:
            slot.problems = slot.instance.invariant_problems()
        logger.debug('instance %s: %d documents, %d generalised tree nodes, %d map extras',
                     key, len(documents), len(slot.instance.tree), slot.locus_map.extras)
        return slot

    def substring_locus(self, i, j):
        if not 1 <= i <= j <= self.n:
            raise InvalidArgument(f'bad substring [{i}, {j}] of a text of length {self.n}')
        length = j - i + 1
        if length < max(stwa_setting('SHORT_QUERY_LIMIT'), MIN_LONG_QUERY):
            return self.short_locus(i, length)
        if self.mode == COMPACT:
            return self.compact_locus(i, length)
        return self.slots[choose_instance(length)].query(i, length)

    def short_locus(self, i, length):
        """Root walk; every step consumes at least one symbol."""
        master = self.master
        v = ROOT
        depth = 0
        while True:
            c = master.child(v, master.text[i - 1 + depth])
            below = master.string_depth[c]
            if below == length:
                return Locus.explicit(c, length)
            if below > length:
                return Locus.implicit(c, length)
            v, depth = c, below

    def compact_locus(self, i, length):
        slot = self.slots[choose_instance(length)]
        leaf = self.master.leaf_at[i - 1]
        mark = self.marks.mark_above(leaf, slot.threshold)
        found = long_edge_locus(self.master, mark, length)
        if found is not None:
            return found
        below = self.marks.mark_above(leaf, slot.ceiling + 1)
        below = leaf if below is None else below
        tick()
        return slot.anchored_locus(self.master, self.master.parent[below], below, i, length)

    def components(self):
        parts = {
            'suffix_tree': self.master.words(),
            'instances': sum(s.instance.words() for s in self.slots.values() if s.instance is not None),
            'documents': sum(2 * len(s.documents) for s in self.slots.values()),
        }
        if self.mode == COMPACT:
            parts['marks'] = self.marks.words()
            parts['anchors'] = sum(2 * len(s.pointers) + 2 * len(s.master_of) for s in self.slots.values())
        else:
            parts['locus_maps'] = sum(s.locus_map.words() for s in self.slots.values())
        return parts

    def words(self):
        return sum(self.components().values())

    def accounting(self):
        if self.mode != COMPACT:
            raise InvalidArgument('per-length accounting needs a compact index')
        return length_accounting(self.master, self.slots)

    def invariant_problems(self):
        return [f'instance {key}: {p}' for key, slot in self.slots.items() for p in slot.problems]


def build_index(w, mode=STANDARD, t2=None, check_invariants=False):
    return WaIndex(w, mode, t2, check_invariants)


def substring_locus(index, i, j):
    return index.substring_locus(i, j)


def map_gst_locus(index, key, gst_locus):
    return index.slots[key].locus_map.map_locus(gst_locus)


def compact_query_fix(index, i, j):
    if index.mode != COMPACT:
        raise InvalidArgument('the marked-node fix needs a compact index')
    if not 1 <= i <= j <= index.n or j - i + 1 < MIN_LONG_QUERY:
        raise InvalidArgument(f'bad long substring [{i}, {j}]')
    return index.compact_locus(i, j - i + 1)
