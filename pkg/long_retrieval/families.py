"""Periodic families: long substrings that repeat inside a single document.

Such a substring has period at most l/4, so the middle of its document is
periodic too. Documents are grouped by the Lyndon word r of that period.
For every rotation i of r the explicit nodes on the path spelling
(r[i..] r[..i-1])^inf are cut into fragments of |r| string depths, and the
fragment sets S_{i,j} nest in the order S_{1,1}, ..., S_{|r|,1}, S_{1,2}, ...
so one PINS answers every fragment.
"""
import logging
from bisect import bisect_right
from dataclasses import dataclass

from nested_pred.pins import PinsIndex
from nested_pred.sets import SetCollection
from strcore.periodicity import compute_period, is_primitive, lyndon_rotation, maximal_run
from strcore.symbols import Interval
from stwa.exceptions import InvalidArgument, InvariantViolation
from stwa.probes import tick

from .decorate import long_threshold

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodicDescriptor:
    """Periodic middle of one document, in 1-based document coordinates."""
    doc: int
    period: int
    run: Interval
    occurrence: int
    word: tuple


def middle_window(doc_length, length):
    """Part of a document covered by every substring of length >= 3l/4."""
    shift = length - doc_length
    return Interval(length // 4 + 1 - shift, long_threshold(length) - shift)


def periodic_descriptor(doc, symbols, length):
    if len(symbols) < long_threshold(length) or len(symbols) > length:
        return None
    window = middle_window(len(symbols), length)
    middle = symbols[window.start - 1:window.end]
    p = compute_period(middle)
    if 4 * p > length:
        return None
    run = maximal_run(symbols, window, p)
    rho = lyndon_rotation(middle[:p])
    word = tuple(middle[rho - 1:p]) + tuple(middle[:rho - 1])
    return PeriodicDescriptor(doc, p, run, window.start + rho - 1, word)


class PeriodicFamily:
    def __init__(self, word, descriptors, decorated, compact=False, t1=1):
        word = tuple(word)
        if not word or not is_primitive(list(word)) or lyndon_rotation(list(word)) != 1:
            raise InvalidArgument('a periodic family needs a primitive Lyndon word')
        tree = decorated.tree
        length = decorated.length
        p = len(word)
        if 4 * p > length:
            raise InvalidArgument(f'period {p} exceeds a quarter of the length {length}')
        self.word = word
        self.period = p
        self.alpha = -(-length // p)
        self.beta = self.alpha - (long_threshold(length) - 1 - p) // p
        self.docs = sorted(d.doc for d in descriptors)

        best = {}
        for d in descriptors:
            for t in range(d.run.start, min(d.run.start + p, d.run.end + 1)):
                phase = (t - d.occurrence) % p + 1
                extension = d.run.end - t + 1
                if phase not in best or extension > best[phase][0]:
                    best[phase] = (extension, d.doc, t)
        if len(best) != p:
            raise InvariantViolation(f'family of period {p} misses a rotation')

        self.deepest_depth = [0] * (p + 1)
        self.deepest_tree_depth = [0] * (p + 1)
        self.fallback = [None] * (p + 1)
        self.chains = [None] * (p + 1)
        self.chain_depths = [None] * (p + 1)
        self.chain_base = [0] * (p + 1)
        self.deep = set()
        sets = [None] * (p * self.beta)
        for i in range(1, p + 1):
            extension, doc, t = best[i]
            v = tree.leaf_of(doc, t)
            chain = []
            while v >= 0:
                if tree.string_depth[v] <= extension:
                    chain.append(v)
                v = tree.parent[v]
            chain.reverse()
            depths = [tree.string_depth[u] for u in chain]
            self.deep.update(u for u in chain if 2 * tree.string_depth[u] >= length)
            self.deepest_depth[i] = depths[-1]
            self.deepest_tree_depth[i] = tree.tree_depth[chain[-1]]
            fallback = [0] * (self.beta + 1)
            for j in range(1, self.beta + 1):
                base = self.base(i, j)
                count = bisect_right(depths, base)
                fallback[j] = count - 1
                upper = bisect_right(depths, base + p)
                sets[(j - 1) * p + i - 1] = [d - base for d in depths[count:upper]]
            self.fallback[i] = fallback
            self.chains[i] = chain
            self.chain_depths[i] = depths
        try:
            self.pins = PinsIndex(SetCollection(sets, p), compact=compact, t1=t1, validate=False)
        except InvalidArgument as exc:
            raise InvariantViolation(f'fragment sets of period {p} do not nest: {exc}') from exc
        logger.debug('periodic family: period %d, %d documents, %d fragments', p, len(self.docs), self.beta)

    def base(self, i, j):
        """String depth where fragment j of rotation i starts (exclusive)."""
        return (self.period - i + 1) + self.period * (self.alpha - j)

    def phase(self, descriptor, start):
        return (start - descriptor.occurrence) % self.period + 1

    def floor(self, descriptor, start, length):
        """Deepest explicit node with string depth <= length above the substring at `start`."""
        if start < descriptor.run.start or start + length - 1 > descriptor.run.end:
            raise InvariantViolation('inactive long substring leaves the periodic run of its document')
        tick()
        i = self.phase(descriptor, start)
        p = self.period
        if length >= self.deepest_depth[i]:
            depth = self.deepest_tree_depth[i]
        else:
            j = self.alpha - (-(-(length - (p - i + 1)) // p)) + 1
            tick()
            found = self.pins.predecessor((j - 1) * p + i, length - self.base(i, j))
            tick()
            depth = self.fallback[i][j] + (found[0] if found else 0)
        return self.chains[i][depth - self.chain_base[i]]

    def trim(self, threshold):
        """Drop chain nodes above the deepest one of string depth < threshold."""
        for i in range(1, self.period + 1):
            cut = max(bisect_right(self.chain_depths[i], threshold - 1) - 1, 0)
            self.chains[i] = self.chains[i][cut:]
            self.chain_depths[i] = self.chain_depths[i][cut:]
            self.chain_base[i] += cut
        self.deep = set()

    def words(self):
        return (self.pins.words() + (self.period + 1) * (self.beta + 3) + len(self.word)
                + 2 * sum(len(chain) for chain in self.chains[1:]))


def build_periodic_family(word, descriptors, decorated, compact=False, t1=1):
    return PeriodicFamily(word, descriptors, decorated, compact, t1)
