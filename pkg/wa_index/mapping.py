"""Loci of an instance's generalised suffix tree, mapped into the suffix tree of the whole text.

Every explicit inner node of the generalised tree keeps the locus of its
string in the master tree. That locus is usually explicit too; the rest are
the extras, where a document end made the node branch. Every other node keeps
the master node entered right below its parent, which carries the implicit
loci of its edge.

One preorder pass fills the map: each generalised node descends the master
tree from the deepest master node at or above its parent, so a master node is
stepped over at most once per generalised edge that spans it.
"""
import logging

from stwa.probes import tick
from suffix_tree.locus import Locus
from suffix_tree.tree import ROOT

logger = logging.getLogger(__name__)


class GstLocusMap:
    def __init__(self, master, gst, intervals):
        self.node = {ROOT: Locus.explicit(ROOT, 0)}
        self.entry = {}
        self.extras = 0
        depth = gst.string_depth
        master_depth = master.string_depth
        text = master.text
        # deepest master node with string depth <= that of the generalised node
        upper = {ROOT: ROOT}
        for v in gst.preorder()[1:]:
            above = depth[gst.parent[v]]
            if gst.is_separator_position(gst.rep[v] + above):
                continue
            start = _master_position(gst, intervals, gst.rep[v])
            y = upper[gst.parent[v]]
            c = master.child(y, text[start + master_depth[y]])
            self.entry[v] = c
            if gst.is_leaf(v):
                continue
            while master_depth[c] < depth[v]:
                y = c
                c = master.child(y, text[start + master_depth[y]])
            if master_depth[c] == depth[v]:
                upper[v] = c
                self.node[v] = Locus.explicit(c, depth[v])
            else:
                upper[v] = y
                self.node[v] = Locus.implicit(c, depth[v])
                self.extras += 1
        logger.debug('locus map: %d nodes, %d entries, %d extras', len(self.node), len(self.entry), self.extras)

    def map_locus(self, locus):
        tick()
        if locus.is_explicit:
            return self.node[locus.node]
        return Locus.implicit(self.entry[locus.node], locus.string_depth)

    def words(self):
        return 2 * (len(self.node) + len(self.entry))


def _master_position(gst, intervals, position):
    """0-based master text position of a 0-based position inside the generalised tree's text."""
    doc = int(gst.doc_at[position])
    return intervals[doc][0] - 1 + position - gst.doc_start[doc]
