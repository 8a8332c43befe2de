import random

from django.test import SimpleTestCase

from strcore.symbols import separator, to_symbols
from stwa.exceptions import InvalidArgument

from .construction import lcp_array, suffix_array
from .documents import DocumentSet
from .locus import Locus
from .oracle import explicit_strings, tree_strings
from .tree import ROOT, build_gst, build_suffix_tree, leaf_of, naive_locus


def cycle_family(length=8, repeats=4):
    return [('a' * (length - i) + 'b' + 'a' * (i - 1)) * repeats for i in range(1, length + 1)]


def random_text(rng, n, sigma):
    return bytes(rng.randrange(97, 97 + sigma) for _ in range(n))


class SuffixArrayTests(SimpleTestCase):
    def test_against_sorting(self):
        rng = random.Random(43)
        for _ in range(50):
            text = [rng.randrange(3) for _ in range(rng.randint(1, 60))] + [256]
            sa = [int(p) for p in suffix_array(text)]
            self.assertEqual(sa, sorted(range(len(text)), key=lambda p: text[p:]))
            lcp = lcp_array(text, sa)
            for r in range(1, len(sa)):
                a, b = text[sa[r - 1]:], text[sa[r]:]
                h = 0
                while h < min(len(a), len(b)) and a[h] == b[h]:
                    h += 1
                self.assertEqual(lcp[r], h)


class SuffixTreeShapeTests(SimpleTestCase):
    def test_abracadabra(self):
        tree = build_suffix_tree('abracadabra')
        leaves = [v for v in range(len(tree)) if tree.is_leaf(v)]
        internal = {bytes(tree.label(v)) for v in range(len(tree)) if not tree.is_leaf(v)}
        self.assertEqual(len(leaves), 12)
        self.assertEqual(internal, {b'', b'a', b'abra', b'bra', b'ra'})
        self.assertEqual(tree_strings(tree), explicit_strings(['abracadabra']))

    def test_single_symbol(self):
        tree = build_suffix_tree('a')
        self.assertEqual(len(tree), 3)
        self.assertEqual(len(tree.children[ROOT]), 2)

    def test_gst_leaves(self):
        tree = build_gst(['ab', 'b'])
        leaves = sorted((tree.leaf_document(v), tree.leaf_offset(v)) for v in range(len(tree)) if tree.is_leaf(v))
        self.assertEqual(leaves, [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)])
        self.assertEqual(tree.label(tree.leaf_of(2, 1)), [ord('b'), separator(1)])

    def test_separators_sit_above_large_symbols(self):
        tree = build_gst([[300, 1, 300], [1, 300]])
        self.assertEqual(tree.separator_base, 301)
        self.assertEqual(tree.text, [300, 1, 300, 301, 1, 300, 302])
        self.assertTrue(tree.is_separator_position(3))
        self.assertFalse(tree.is_separator_position(2))
        self.assertEqual(tree.locus_of(1, 2, 3), naive_locus(tree, 1, 2, 3))

    def test_leftmost_position(self):
        tree = build_suffix_tree('abracadabra')
        for i in range(1, 12):
            for j in range(i, 12):
                locus = tree.locus_of(1, i, j)
                expected = 'abracadabra'.find('abracadabra'[i - 1:j])
                self.assertEqual(tree.leftmost_position[locus.node], expected)

    def test_cycle_family_builds(self):
        docs = cycle_family()
        tree = build_gst(DocumentSet(to_symbols(''.join(docs)), [(1 + 32 * i, 32 * (i + 1)) for i in range(8)]))
        self.assertEqual(sum(tree.is_leaf(v) for v in range(len(tree))), 8 * 33)
        self.assertEqual(tree_strings(tree), explicit_strings(docs))

    def test_random_texts_match_trie(self):
        rng = random.Random(47)
        for _ in range(20):
            docs = [random_text(rng, rng.randint(1, 40), rng.choice((1, 2, 4))) for _ in range(rng.randint(1, 4))]
            tree = build_gst(docs)
            self.assertEqual(tree_strings(tree), explicit_strings(docs))
            for v in range(1, len(tree)):
                self.assertGreater(tree.string_depth[v], tree.string_depth[tree.parent[v]])
                if not tree.is_leaf(v):
                    self.assertGreaterEqual(len(tree.children[v]), 2)
                    self.assertEqual(tree.leaf_count(v), sum(tree.leaf_count(c) for c in tree.children[v]))


class SuffixLinkTests(SimpleTestCase):
    def test_links_drop_first_symbol(self):
        rng = random.Random(53)
        for _ in range(20):
            docs = [random_text(rng, rng.randint(1, 60), rng.choice((2, 4))) for _ in range(rng.randint(1, 3))]
            tree = build_gst(docs)
            for v in range(1, len(tree)):
                link = tree.suffix_link[v]
                self.assertEqual(tree.string_depth[link], tree.string_depth[v] - 1)
                self.assertEqual(tree.label(link), tree.label(v)[1:])

    def test_depth_sets_shift_along_links(self):
        tree = build_suffix_tree(random_text(random.Random(59), 200, 2))
        la = tree.level_ancestors
        for p in range(len(tree.text) - 1):
            v = tree.leaf_at[p]
            u = tree.suffix_link[v]
            depths_v = {tree.string_depth[la.query(v, d)] for d in range(tree.tree_depth[v] + 1)}
            depths_u = {tree.string_depth[la.query(u, d)] for d in range(tree.tree_depth[u] + 1)}
            for x in depths_v:
                if x > 0:
                    self.assertIn(x - 1, depths_u)


class LocusTests(SimpleTestCase):
    def setUp(self):
        self.tree = build_suffix_tree('abracadabra')

    def node_for(self, label):
        return next(v for v in range(len(self.tree))
                    if not self.tree.is_leaf(v) and bytes(self.tree.label(v)) == label)

    def test_naive_locus_examples(self):
        self.assertEqual(naive_locus(self.tree, 1, 1, 4), Locus.explicit(self.node_for(b'abra'), 4))
        self.assertEqual(naive_locus(self.tree, 1, 1, 2), Locus.implicit(self.node_for(b'abra'), 2))
        cad = naive_locus(self.tree, 1, 5, 7)
        self.assertEqual(cad, Locus.implicit(self.tree.leaf_at[4], 3))
        self.assertEqual(cad.edge(self.tree), (ROOT, self.tree.leaf_at[4]))

    def test_leaf_of(self):
        self.assertEqual(self.tree.label(leaf_of(self.tree, 1, 1)), to_symbols('abracadabra') + [separator(0)])
        with self.assertRaises(InvalidArgument):
            leaf_of(self.tree, 1, 12)
        with self.assertRaises(InvalidArgument):
            leaf_of(self.tree, 2, 1)

    def test_leaf_records_round_trip(self):
        tree = build_gst(['abab', 'bab', 'a'])
        for doc in range(1, 4):
            for offset in range(1, tree.doc_length[doc - 1] + 1):
                leaf = tree.leaf_of(doc, offset)
                self.assertEqual((tree.leaf_document(leaf), tree.leaf_offset(leaf)), (doc, offset))

    def test_locate_matches_naive_walk(self):
        rng = random.Random(61)
        for _ in range(10):
            docs = [random_text(rng, rng.randint(1, 50), rng.choice((1, 2, 3))) for _ in range(rng.randint(1, 3))]
            tree = build_gst(docs)
            for doc in range(1, len(docs) + 1):
                n = len(docs[doc - 1])
                for i in range(1, n + 1):
                    for j in range(i, n + 1):
                        self.assertEqual(tree.locus_of(doc, i, j), naive_locus(tree, doc, i, j))
