import random
from unittest import mock

from django.test import SimpleTestCase

from nested_pred.oracle import naive_predecessor
from strcore.symbols import to_symbols
from stwa.exceptions import InvalidArgument
from suffix_tree.tree import build_gst, build_suffix_tree, naive_locus

from .decorate import decorate, long_threshold
from .families import middle_window, periodic_descriptor
from .instance import build_long_instance, instance_report, query_long
from .paths import CHAIN, CYCLE, assemble_chains_cycles, decompose_paths


def cycle_family(length=8, repeats=4):
    return [('a' * (length - i) + 'b' + 'a' * (i - 1)) * repeats for i in range(1, length + 1)]


def random_docs(rng, count, length, sigma, min_length=None):
    low = min_length or length
    return [bytes(rng.randrange(97, 97 + sigma) for _ in range(rng.randint(low, length))) for _ in range(count)]


def long_queries(instance):
    tree = instance.tree
    threshold = long_threshold(instance.length)
    for doc in range(1, tree.document_count + 1):
        n = tree.doc_length[doc - 1]
        for i in range(1, n + 1):
            for j in range(i + threshold - 1, n + 1):
                yield doc, i, j


class LongQueryAssertions:
    def assertMatchesNaiveWalk(self, instance):
        count = 0
        for doc, i, j in long_queries(instance):
            self.assertEqual(query_long(instance, doc, i, j), naive_locus(instance.tree, doc, i, j),
                             f'document {doc} [{i}, {j}]')
            count += 1
        return count


class DecorateTests(SimpleTestCase):
    def test_levels(self):
        tree = build_suffix_tree('aaab')
        decorated = decorate(tree, 4)
        by_label = {bytes(tree.label(v)): v for v in range(len(tree)) if not tree.is_leaf(v)}
        self.assertEqual(decorated.level[by_label[b'']], 2)
        self.assertEqual(decorated.level[by_label[b'a']], 1)
        self.assertEqual(decorated.level[by_label[b'aa']], 1)
        for v in range(len(tree)):
            if tree.is_leaf(v):
                self.assertEqual(decorated.level[v], 0)

    def test_repeated_document_blocks_activity(self):
        tree = build_gst(['aaaa'])
        decorated = decorate(tree, 4)
        for v in range(len(tree)):
            if not tree.is_leaf(v) and tree.string_depth[v] >= 3:
                self.assertFalse(decorated.active[v])

    def test_active_is_closed_upwards_and_under_links(self):
        rng = random.Random(67)
        for _ in range(30):
            docs = random_docs(rng, rng.randint(1, 6), 24, rng.choice((1, 2, 4)), min_length=10)
            tree = build_gst(docs)
            decorated = decorate(tree, 24)
            self.assertEqual(decorated.link_violations(), [])
            self.assertEqual(decorated.incoming_link_violations(), [])
            for v in range(1, len(tree)):
                if decorated.active[v]:
                    self.assertGreaterEqual(decorated.level[tree.parent[v]], decorated.level[v])
                if not decorated.active[v]:
                    self.assertFalse(decorated.active[tree.parent[v]])
                same_level = [c for c in tree.children[v] if decorated.level[c] == decorated.level[v]]
                self.assertLessEqual(len(same_level), 1)


class PathTests(SimpleTestCase):
    def test_paths_partition_active_nodes(self):
        rng = random.Random(71)
        docs = random_docs(rng, 12, 32, 2, min_length=24)
        tree = build_gst(docs)
        decorated = decorate(tree, 32)
        for k in decorated.levels():
            paths = decompose_paths(decorated, k)
            covered = [v for path in paths for v in path.nodes]
            self.assertEqual(len(covered), len(set(covered)))
            expected = [v for v in range(len(tree)) if decorated.active[v] and decorated.level[v] == k]
            self.assertEqual(sorted(covered), sorted(expected))
            for path in paths:
                others = set(covered) - set(path.nodes)
                u = tree.parent[path.top]
                while u >= 0:
                    self.assertNotIn(u, others)
                    u = tree.parent[u]
            for group in assemble_chains_cycles(decorated, paths):
                self.assertIn(group.kind, (CHAIN, CYCLE))

    def test_cycle_family_forms_a_cycle(self):
        instance = build_long_instance([to_symbols(d) for d in cycle_family()], 32)
        self.assertTrue(any(g.kind == CYCLE for g in instance.groups))
        self.assertEqual(instance.invariant_problems(), [])

    def test_random_aperiodic_documents_form_chains(self):
        rng = random.Random(73)
        instance = build_long_instance(random_docs(rng, 10, 40, 26), 40)
        self.assertTrue(all(g.kind == CHAIN for g in instance.groups))
        self.assertEqual(len(instance.families), 0)

    def test_path_predecessors_match_path_scan(self):
        rng = random.Random(79)
        instance = build_long_instance(random_docs(rng, 16, 32, 2, min_length=24), 32)
        tree = instance.tree
        for group in instance.groups:
            for path in group.paths:
                depths = [tree.string_depth[v] for v in path.nodes]
                for d in range(path.top_depth, path.bottom_depth + 1):
                    expected = naive_predecessor(depths, d)
                    self.assertEqual(group.predecessor(path.position, d), expected)

    def test_cost_bounds_and_telescoping(self):
        rng = random.Random(83)
        for sigma in (1, 2, 4):
            instance = build_long_instance(random_docs(rng, 12, 32, sigma, min_length=24), 32)
            for report in instance.cost_reports():
                self.assertTrue(report.passed, report)


class PeriodicDescriptorTests(SimpleTestCase):
    def test_middle_window_tracks_short_documents(self):
        self.assertEqual((middle_window(32, 32).start, middle_window(32, 32).end), (9, 24))
        self.assertEqual((middle_window(28, 32).start, middle_window(28, 32).end), (5, 20))

    def test_descriptor(self):
        descriptor = periodic_descriptor(1, to_symbols('ba' * 8), 16)
        self.assertEqual(descriptor.period, 2)
        self.assertEqual(descriptor.word, tuple(to_symbols('ab')))
        self.assertEqual((descriptor.run.start, descriptor.run.end), (1, 16))
        self.assertIsNone(periodic_descriptor(1, to_symbols('abcdefghijklmnop'), 16))
        self.assertIsNone(periodic_descriptor(1, to_symbols('ab'), 16))


class LongInstanceTests(SimpleTestCase, LongQueryAssertions):
    def test_random_instance_matches_naive_walk(self):
        rng = random.Random(89)
        for sigma in (2, 4):
            instance = build_long_instance(random_docs(rng, 20, 32, sigma, min_length=20), 32)
            self.assertGreater(self.assertMatchesNaiveWalk(instance), 0)

    def test_constant_documents(self):
        instance = build_long_instance([to_symbols('a' * 32)] * 3, 32)
        self.assertEqual(list(instance.families), [tuple(to_symbols('a'))])
        self.assertEqual(query_long(instance, 1, 1, 32), naive_locus(instance.tree, 1, 1, 32))
        self.assertMatchesNaiveWalk(instance)

    def test_two_rotation_family(self):
        instance = build_long_instance([to_symbols('ab' * 8), to_symbols('ab' * 8)], 16)
        family = instance.families[tuple(to_symbols('ab'))]
        self.assertEqual(family.period, 2)
        self.assertMatchesNaiveWalk(instance)

    def test_cycle_family_queries(self):
        instance = build_long_instance([to_symbols(d) for d in cycle_family()], 32)
        self.assertMatchesNaiveWalk(instance)

    def test_internal_collections_are_not_checked_again(self):
        rejected = AssertionError('collection checked twice')
        with mock.patch('nested_pred.pins.check_nested', side_effect=rejected), \
                mock.patch('nested_pred.pisns.check_shrinking', side_effect=rejected):
            instance = build_long_instance([to_symbols(d) for d in cycle_family()], 32)
        self.assertMatchesNaiveWalk(instance)

    def test_mixed_periodic_and_random_documents(self):
        rng = random.Random(97)
        for length in (24, 40):
            docs = random_docs(rng, 6, length, 3, min_length=length // 2)
            docs += [to_symbols('abc' * 20)[:length], to_symbols('ab' * 20)[:length - 1], to_symbols('a' * length)]
            docs += [to_symbols('cab' * 20)[:length]]
            instance = build_long_instance(docs, length)
            self.assertMatchesNaiveWalk(instance)
            self.assertEqual(instance.invariant_problems(), [])

    def test_rejects_short_and_misplaced_queries(self):
        instance = build_long_instance([to_symbols('abcabcabcabcabca')], 16)
        with self.assertRaises(InvalidArgument):
            query_long(instance, 1, 1, 11)
        with self.assertRaises(InvalidArgument):
            query_long(instance, 1, 1, 17)
        with self.assertRaises(InvalidArgument):
            query_long(instance, 2, 1, 12)
        with self.assertRaises(InvalidArgument):
            build_long_instance([to_symbols('a' * 20)], 16)

    def test_report(self):
        instance = build_long_instance([to_symbols(d) for d in cycle_family()], 32)
        report = instance_report(instance)
        self.assertEqual(report['documents'], 8)
        self.assertGreaterEqual(report['cycles'], 1)
        self.assertGreater(report['words'], 0)
        self.assertTrue(all(level['passed'] for level in report['levels'].values()))


def ancestor_floor(tree, leaf, length):
    v = leaf
    while tree.string_depth[v] > length:
        v = tree.parent[v]
    return v


def long_leaf_queries(instance):
    for doc, i, j in long_queries(instance):
        yield instance.tree.leaf_of(doc, i), j - i + 1


class FloorTests(SimpleTestCase):
    def instances(self):
        rng = random.Random(139)
        yield build_long_instance(random_docs(rng, 12, 24, 2, min_length=18), 24)
        yield build_long_instance([to_symbols('a' * 32)] * 2, 32)
        yield build_long_instance([to_symbols(d) for d in cycle_family()], 32)
        yield build_long_instance([to_symbols('abc' * 8), to_symbols('cab' * 8)[:23]], 24)

    def test_floor_matches_ancestor_scan(self):
        for instance in self.instances():
            for leaf, length in long_leaf_queries(instance):
                self.assertEqual(instance.floor_from_leaf(leaf, length), ancestor_floor(instance.tree, leaf, length),
                                 f'leaf {leaf}, length {length}')

    def test_shrunk_instance_keeps_floors_of_kept_leaves(self):
        for instance in self.instances():
            rng = random.Random(instance.length)
            queries = list(long_leaf_queries(instance))
            leaves = {leaf for leaf, _ in rng.sample(queries, min(len(queries), 40))}
            expected = {(leaf, length): ancestor_floor(instance.tree, leaf, length)
                        for leaf, length in queries if leaf in leaves}
            before = instance_report(instance)
            forest = instance.shrink(leaves)
            self.assertIsNone(instance.tree)
            self.assertTrue(all(instance.node_depth[v] >= long_threshold(instance.length) for v in forest))
            for (leaf, length), floor in expected.items():
                self.assertEqual(instance.floor_from_leaf(leaf, length), floor, f'leaf {leaf}, length {length}')
            after = instance_report(instance)
            self.assertEqual(after['nodes'], before['nodes'])
            self.assertLess(after['words'], before['words'])
            with self.assertRaises(InvalidArgument):
                query_long(instance, 1, 1, instance.length)
