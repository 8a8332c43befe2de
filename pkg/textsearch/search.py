"""Substring search with occurrence reporting over a built index."""
import logging

import numpy as np

from stwa.probes import tick

logger = logging.getLogger(__name__)


def occurrences(index, locus):
    """Sorted 1-based starting positions of every leaf below a locus."""
    master = index.master
    lo, hi = master.rank_lo[locus.node], master.rank_hi[locus.node]
    return (np.sort(master.sa[lo:hi + 1]) + 1).tolist()


def substring_search(index, i, j, report=False):
    """Locus of w[i..j] and, when asked, every position where it starts."""
    locus = index.substring_locus(i, j)
    if not report:
        return locus, None
    return locus, occurrences(index, locus)


def leftmost_occurrence(index, i, j):
    """First position of w where w[i..j] starts."""
    locus = index.substring_locus(i, j)
    tick()
    return index.master.leftmost_position[locus.node] + 1


def occurrence_count(index, i, j):
    locus = index.substring_locus(i, j)
    return index.master.leaf_count(locus.node)
