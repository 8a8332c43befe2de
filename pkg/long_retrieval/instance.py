"""One long substring retrieval instance over a set of documents of length <= l."""
import logging

from stwa.conf import stwa_setting
from stwa.exceptions import InvalidArgument, InvariantViolation
from stwa.probes import tick
from suffix_tree.locus import Locus
from suffix_tree.tree import build_gst
from tree_tools.marked import MarkedPredIndex

from .decorate import decorate, is_long
from .families import PeriodicFamily, periodic_descriptor
from .paths import CYCLE, assemble_chains_cycles, build_chain_pisns, check_cost_bound, decompose_paths

logger = logging.getLogger(__name__)


class ForestMarks:
    """Level-drop marks restricted to the bottom forest of a shrunk instance."""

    def __init__(self, tree, marked, keep):
        self.nodes = [-1] + list(keep)
        self.fid = {v: f for f, v in enumerate(self.nodes) if f}
        parent = [-1] + [self.fid.get(tree.parent[v], 0) for v in keep]
        weights = [0] + [tree.string_depth[v] for v in keep]
        marks = [f for f, v in enumerate(self.nodes) if f and marked[v]]
        levels = max((tree.leaf_count(v).bit_length() for v in keep), default=1)
        factor = max(stwa_setting('MARK_DENSITY_FACTOR'), levels + 1)
        self.index = MarkedPredIndex(parent, weights, marks, density_factor=factor)

    def successor(self, v, x):
        found = self.index.successor(self.fid[v], x)
        return None if found is None else self.nodes[found]

    def words(self):
        return self.index.words() + 2 * len(self.nodes)


class LongInstance:
    def __init__(self, documents, length, compact=False, t2=None):
        if hasattr(documents, 'materialize'):
            documents = documents.materialize()
        self.length = length
        self.compact = compact
        t2 = stwa_setting('COMPACT_PISNS_DEPTH') if t2 is None else t2
        self.tree = tree = build_gst(documents)
        if max(tree.doc_length) > length:
            raise InvalidArgument(f'documents must not be longer than {length}')
        self.instance_size = len(tree.text)
        self.decorated = decorated = decorate(tree, length)
        self.min_active = decorated.min_active
        self.node_depth = tree.string_depth
        self.node_parent = tree.parent

        self.groups = []
        self.path_handle = {}
        for k in decorated.levels():
            for group in assemble_chains_cycles(decorated, decompose_paths(decorated, k)):
                build_chain_pisns(decorated, group, compact=compact, t2=t2)
                index = len(self.groups)
                self.groups.append(group)
                for path in group.paths:
                    for v in path.nodes:
                        self.path_handle[v] = (index, path.position)

        level = decorated.level
        marks = [v for v in range(1, len(tree)) if level[tree.parent[v]] > level[v]]
        self.marks = MarkedPredIndex(tree.parent, tree.string_depth, marks)

        self.descriptors = {}
        grouped = {}
        for doc in range(1, tree.document_count + 1):
            descriptor = periodic_descriptor(doc, tree.document(doc), length)
            if descriptor is not None:
                self.descriptors[doc] = descriptor
                grouped.setdefault(descriptor.word, []).append(descriptor)
        self.families = {word: PeriodicFamily(word, members, decorated, compact=compact, t1=t2 + 1)
                         for word, members in grouped.items()}
        owner = {}
        for word, family in self.families.items():
            for v in family.deep:
                if v in owner:
                    raise InvariantViolation(f'node {v} belongs to two periodic families')
                owner[v] = word
        self.leaf_origin = None
        self.summary = None
        logger.info('long instance: length %d, %d documents, %d chains/cycles, %d families',
                    length, tree.document_count, len(self.groups), len(self.families))

    def origin(self, leaf):
        """(document, offset) of a leaf."""
        if self.tree is None:
            return self.leaf_origin[leaf]
        return self.tree.leaf_document(leaf), self.tree.leaf_offset(leaf)

    def floor_from_leaf(self, leaf, length):
        """Deepest explicit ancestor of a leaf with string depth <= length."""
        tick()
        if length >= self.min_active[leaf]:
            upper = self.marks.successor(leaf, length)
            tick()
            u = upper if self.node_depth[self.node_parent[upper]] < length else self.node_parent[upper]
            tick()
            handle = self.path_handle.get(u)
            if handle is None:
                return self.node_parent[u]
            group_index, position = handle
            group = self.groups[group_index]
            path = group.paths[position - 1]
            found = group.predecessor(position, length)
            if found is None:
                return path.above
            return path.nodes[found[0] - 1]
        doc, start = self.origin(leaf)
        tick()
        descriptor = self.descriptors.get(doc)
        if descriptor is None:
            raise InvariantViolation(f'inactive long substring in aperiodic document {doc}')
        return self.families[descriptor.word].floor(descriptor, start, length)

    def query_from_leaf(self, leaf, length):
        """Locus of the length-`length` prefix of a leaf's suffix."""
        tree = self.tree
        if tree is None:
            raise InvalidArgument('a shrunk instance only answers floor queries')
        node = self.floor_from_leaf(leaf, length)
        if tree.string_depth[node] == length:
            return Locus.explicit(node, length)
        return Locus.implicit(tree.level_ancestors.query(leaf, tree.tree_depth[node] + 1), length)

    def query(self, doc, i, j):
        tree = self.tree
        if tree is None:
            raise InvalidArgument('a shrunk instance only answers floor queries')
        if not 1 <= doc <= tree.document_count or j < i or j > tree.doc_length[doc - 1]:
            raise InvalidArgument(f'bad substring [{i}, {j}] of document {doc}')
        if not is_long(j - i + 1, self.length):
            raise InvalidArgument(f'substring of length {j - i + 1} is shorter than 3/4 of {self.length}')
        return self.query_from_leaf(tree.leaf_of(doc, i), j - i + 1)

    def shrink(self, leaves):
        """Drop the generalised tree, keeping what floor queries from `leaves` need.

        What stays: the explicit inner nodes at string depth >= 3l/4, the given
        leaves, the chains and cycles reaching into that forest, and family
        chains cut at 3l/4.
        """
        tree = self.tree
        threshold = self.decorated.threshold
        self.summary = self._summary()
        forest = [v for v in tree.preorder() if not tree.is_leaf(v) and tree.string_depth[v] >= threshold]
        leaves = sorted(set(leaves))
        keep = forest + leaves
        self.marks = ForestMarks(tree, self.marks.marked, keep)
        self.node_parent = {v: tree.parent[v] for v in keep}
        self.node_depth = {v: tree.string_depth[v] for v in keep}
        for p in list(self.node_parent.values()):
            self.node_depth.setdefault(p, tree.string_depth[p])
        self.leaf_origin = {leaf: (tree.leaf_document(leaf), tree.leaf_offset(leaf)) for leaf in leaves}
        self.min_active = {leaf: self.min_active[leaf] for leaf in leaves}
        inner = set(forest)
        self.path_handle = {v: h for v, h in self.path_handle.items() if v in inner}
        used = {index for index, _ in self.path_handle.values()}
        self.groups = [group if index in used else None for index, group in enumerate(self.groups)]
        for family in self.families.values():
            family.trim(threshold)
        self.tree = None
        self.decorated = None
        logger.debug('shrunk instance of length %d: %d forest nodes, %d leaves', self.length, len(forest), len(leaves))
        return forest

    def cost_reports(self):
        return [check_cost_bound(self.groups, k, self.instance_size) for k in self.decorated.levels()]

    def invariant_problems(self):
        problems = list(self.decorated.link_violations())
        problems.extend(self.decorated.incoming_link_violations())
        for report in self.cost_reports():
            if not report.passed:
                problems.append(f'level {report.level}: cost {report.total} exceeds {report.bound:.1f}')
                problems.extend(report.telescope_failures)
        return problems

    def report(self):
        summary = self.summary if self.tree is None else self._summary()
        return dict(summary, words=self.words())

    def _summary(self):
        return {
            'length': self.length,
            'documents': self.tree.document_count,
            'instance_size': self.instance_size,
            'nodes': len(self.tree),
            'chains': sum(g.kind != CYCLE for g in self.groups),
            'cycles': sum(g.kind == CYCLE for g in self.groups),
            'families': len(self.families),
            'levels': {r.level: {'cost': r.total, 'bound': r.bound, 'passed': r.passed}
                       for r in self.cost_reports()},
        }

    def words(self):
        groups = [g for g in self.groups if g is not None]
        total = (self.marks.words() + 2 * len(self.path_handle)
                 + sum(g.pisns.words() + sum(len(p.nodes) + 6 for p in g.paths) for g in groups)
                 + sum(f.words() for f in self.families.values()) + 5 * len(self.descriptors))
        if self.tree is None:
            return (total + 2 * len(self.node_parent) + 2 * len(self.node_depth)
                    + 3 * len(self.leaf_origin) + 2 * len(self.min_active))
        return total + self.tree.words() + self.decorated.words() + self.tree.level_ancestors.words()


def build_long_instance(documents, length, compact=False, t2=None):
    return LongInstance(documents, length, compact, t2)


def query_long(instance, doc, i, j):
    return instance.query(doc, i, j)


def query_from_leaf(instance, leaf, length):
    return instance.query_from_leaf(leaf, length)


def instance_report(instance):
    return instance.report()
