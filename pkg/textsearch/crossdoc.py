"""Pattern occurrences of one document's substring inside another document.

The documents are joined with a distinct separator after each one and a
single index is built over the result, so the locus step is the index's
query. Each document keeps the sorted suffix-array ranks of its own
suffixes; the leaves below a locus are one rank interval, which two binary
searches cut out of a document's list.
"""
import logging

import numpy as np

from strcore.symbols import SEPARATOR_BASE, to_symbols
from stwa.exceptions import InvalidArgument
from stwa.probes import tick
from wa_index.index import STANDARD, WaIndex

logger = logging.getLogger(__name__)


class DocOccurrenceIndex:
    def __init__(self, documents, mode=STANDARD):
        documents = [to_symbols(doc) for doc in documents]
        if not documents or not all(documents):
            raise InvalidArgument('documents must be non-empty')
        base = max([SEPARATOR_BASE] + [max(doc) + 1 for doc in documents])
        joined = []
        self.doc_start = []
        self.doc_length = []
        for d, doc in enumerate(documents):
            self.doc_start.append(len(joined) + 1)
            self.doc_length.append(len(doc))
            joined.extend(doc)
            joined.append(base + d)
        self.index = WaIndex(joined, mode)
        master = self.index.master
        doc_of = np.full(len(master.text), -1, dtype=np.int64)
        for d, (start, length) in enumerate(zip(self.doc_start, self.doc_length)):
            doc_of[start - 1:start - 1 + length] = d
        docs_by_rank = doc_of[master.sa]
        self.ranks = [np.flatnonzero(docs_by_rank == d) for d in range(len(documents))]
        logger.info('cross-document index: %d documents, %d symbols', len(documents), len(joined))

    @property
    def document_count(self):
        return len(self.doc_start)

    def _check(self, doc, i, j):
        if not 1 <= doc <= self.document_count:
            raise InvalidArgument(f'document {doc} outside [1, {self.document_count}]')
        if not 1 <= i <= j <= self.doc_length[doc - 1]:
            raise InvalidArgument(f'bad substring [{i}, {j}] of document {doc}')

    def locus(self, doc, i, j):
        self._check(doc, i, j)
        start = self.doc_start[doc - 1]
        return self.index.substring_locus(start + i - 1, start + j - 1)

    def search(self, doc, i, j, target):
        """Sorted 1-based offsets in document `target` where w_doc[i..j] starts."""
        if not 1 <= target <= self.document_count:
            raise InvalidArgument(f'document {target} outside [1, {self.document_count}]')
        locus = self.locus(doc, i, j)
        master = self.index.master
        ranks = self.ranks[target - 1]
        tick(2)
        lo = np.searchsorted(ranks, master.rank_lo[locus.node], side='left')
        hi = np.searchsorted(ranks, master.rank_hi[locus.node], side='right')
        positions = master.sa[ranks[lo:hi]] - (self.doc_start[target - 1] - 1) + 1
        return np.sort(positions).tolist()

    def words(self):
        return self.index.words() + sum(len(r) for r in self.ranks) + 2 * self.document_count


def build_doc_occurrences(documents, mode=STANDARD):
    return DocOccurrenceIndex(documents, mode)


def cross_doc_search(doc_index, doc, i, j, target):
    return doc_index.search(doc, i, j, target)
