import itertools
import math
import os
import random
import tempfile
from unittest import mock, skipUnless

from django.test import SimpleTestCase, tag

from long_retrieval.decorate import long_threshold
from long_retrieval.instance import LongInstance
from stwa.conf import stwa_setting
from stwa.exceptions import IndexFormatError, InvalidArgument
from stwa.probes import measure
from suffix_tree.tree import SuffixTree, naive_locus

from . import index as index_module
from .compact import CompactSlot, band_anchors, first_deep_nodes, shorten_documents
from .index import (
    COMPACT, STANDARD, WaIndex, block_documents, build_index, choose_instance, compact_query_fix, instance_keys,
    map_gst_locus, substring_locus,
)
from .stats import index_stats, probe_histogram
from .storage import (
    HEADER, MAGIC, OBJECT, SECTION, SECTIONS, U32, VERSION, dump_index, load_index, parse_index, save_index,
)


def fibonacci_word(n):
    a, b = 'a', 'ab'
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def cycle_text(length=8):
    return ''.join(('a' * (length - i) + 'b' + 'a' * (i - 1)) * 4 for i in range(1, length + 1))


def random_text(rng, n, sigma):
    return bytes(rng.randrange(97, 97 + sigma) for _ in range(n))


def all_pairs(n):
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            yield i, j


class ChooseInstanceTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(choose_instance(6), (0, 8))
        self.assertEqual(choose_instance(100), (4, 8))
        self.assertEqual(choose_instance(47), (2, 13))

    def test_target_inequality(self):
        for length in range(6, 5000):
            k, alpha = choose_instance(length)
            self.assertIn(alpha, range(8, 14))
            self.assertLessEqual((alpha - 2) * 2 ** k, length)
            self.assertLess(length, (alpha - 1) * 2 ** k)
            self.assertGreaterEqual(length, long_threshold(alpha * 2 ** k))

    def test_short_lengths_have_no_instance(self):
        with self.assertRaises(InvalidArgument):
            choose_instance(5)

    def test_instance_keys(self):
        self.assertEqual(instance_keys(5), [])
        self.assertEqual(instance_keys(11), [(0, alpha) for alpha in range(8, 14)])
        keys = set(instance_keys(300))
        self.assertEqual(keys, {choose_instance(length) for length in range(6, 301)})

    def test_block_documents(self):
        documents = block_documents(list(range(10)), 1, 8)
        self.assertEqual(documents.intervals, [(1, 10), (3, 10), (5, 10), (7, 10), (9, 10)])
        documents = block_documents(list(range(40)), 1, 8)
        self.assertEqual(documents.intervals[0], (1, 16))
        self.assertEqual(documents.nominal_length, 16)


class SubstringLocusTests(SimpleTestCase):
    def assertMatchesNaiveWalk(self, index, pairs=None):
        for i, j in pairs or all_pairs(index.n):
            self.assertEqual(substring_locus(index, i, j), naive_locus(index.master, 1, i, j), f'[{i}, {j}]')

    def test_abracadabra(self):
        for mode in (STANDARD, COMPACT):
            index = build_index('abracadabra', mode)
            self.assertMatchesNaiveWalk(index)
            abra = substring_locus(index, 8, 11)
            self.assertEqual(abra, substring_locus(index, 1, 4))
            self.assertTrue(abra.is_explicit)
            self.assertEqual(bytes(index.master.label(abra.node)), b'abra')
            a = substring_locus(index, 1, 1)
            self.assertTrue(a.is_explicit)
            self.assertEqual(bytes(index.master.label(a.node)), b'a')
            cad = substring_locus(index, 5, 7)
            self.assertFalse(cad.is_explicit)
            self.assertEqual(cad.string_depth, 3)
            self.assertEqual(index.master.leaf_at[4], cad.node)

    def test_random_texts(self):
        rng = random.Random(101)
        for sigma in (1, 2, 4, 26):
            text = random_text(rng, 48, sigma)
            for mode in (STANDARD, COMPACT):
                self.assertMatchesNaiveWalk(build_index(text, mode))

    def test_structured_texts(self):
        texts = ['a' * 64, 'ab' * 32, fibonacci_word(64), 'a' * 63 + 'b', cycle_text(4)]
        for text in texts:
            for mode in (STANDARD, COMPACT):
                self.assertMatchesNaiveWalk(build_index(text, mode))

    def test_longer_texts_sampled(self):
        rng = random.Random(103)
        for text in (random_text(rng, 300, 2), 'ab' * 150, cycle_text(8)):
            index = build_index(text, STANDARD)
            pairs = []
            for _ in range(1500):
                i = rng.randint(1, index.n)
                pairs.append((i, rng.randint(i, index.n)))
            self.assertMatchesNaiveWalk(index, pairs)

    def test_modes_agree(self):
        rng = random.Random(107)
        text = random_text(rng, 96, 3)
        standard = build_index(text, STANDARD)
        compact = build_index(text, COMPACT)
        for i, j in all_pairs(96):
            self.assertEqual(standard.substring_locus(i, j), compact.substring_locus(i, j))

    def test_modes_agree_across_families(self):
        for name, text in BoundsAssertions().families(128).items():
            standard = build_index(text, STANDARD)
            compact = build_index(text, COMPACT)
            for i, j in all_pairs(standard.n):
                self.assertEqual(standard.substring_locus(i, j), compact.substring_locus(i, j), f'{name} [{i}, {j}]')

    def test_rejects_bad_coordinates(self):
        index = build_index('abracadabra')
        for i, j in ((0, 3), (4, 3), (5, 12)):
            with self.assertRaises(InvalidArgument):
                substring_locus(index, i, j)
        with self.assertRaises(InvalidArgument):
            build_index('')
        with self.assertRaises(InvalidArgument):
            build_index('abc', 'sparse')

    def test_long_queries_touch_structures(self):
        index = build_index('ab' * 40)
        with measure() as spent:
            index.substring_locus(3, 50)
        self.assertGreater(spent[0], 0)


class LocusMapTests(SimpleTestCase):
    def test_explicit_nodes_map_to_the_same_string(self):
        index = build_index('abracadabraabracadabra')
        master = index.master
        for key, slot in index.slots.items():
            gst = slot.instance.tree
            for v, locus in slot.locus_map.node.items():
                self.assertEqual(locus.string_depth, gst.string_depth[v])
                if locus.is_explicit:
                    self.assertEqual(master.label(locus.node), gst.label(v))
                if v == 0:
                    continue
                doc, offset = gst.leaf_document(gst.leaf_at[gst.rep[v]]), gst.leaf_offset(gst.leaf_at[gst.rep[v]])
                found = naive_locus(gst, doc, offset, offset + gst.string_depth[v] - 1)
                self.assertEqual(map_gst_locus(index, key, found), locus)

    def test_implicit_loci_keep_their_depth(self):
        rng = random.Random(109)
        index = build_index(random_text(rng, 80, 2))
        for slot in index.slots.values():
            gst = slot.instance.tree
            for v, entry in slot.locus_map.entry.items():
                upper = gst.string_depth[gst.parent[v]]
                self.assertGreater(index.master.string_depth[entry], upper)
                self.assertLessEqual(index.master.string_depth[index.master.parent[entry]], upper)

    def test_map_does_not_search_leaf_ancestors(self):
        with mock.patch.object(SuffixTree, 'locate', side_effect=AssertionError('located')):
            index = build_index(fibonacci_word(90))
        self.assertNotIn('level_ancestors', vars(index.master))

    def test_build_summary_is_not_computed_when_info_is_off(self):
        with mock.patch.object(index_module.logger, 'isEnabledFor', return_value=False), \
                mock.patch.object(WaIndex, 'words', side_effect=AssertionError('words totalled')):
            index = build_index(fibonacci_word(60))
        self.assertEqual(index.n, 60)


class CompactModeTests(SimpleTestCase):
    def test_shortening_on_constant_text_keeps_documents(self):
        index = build_index('a' * 64, COMPACT)
        for key in index.slots:
            k, alpha = key
            length = alpha * 2 ** k
            full = block_documents(index.text, k, alpha)
            kept = [(s, e) for s, e in full.intervals if e - s + 1 >= long_threshold(length)]
            self.assertEqual(shorten_documents(index.master, full, length).intervals, kept)

    def test_shortening_matches_ancestor_scan(self):
        rng = random.Random(113)
        index = build_index(b'abababab' * 4 + random_text(rng, 64, 26), COMPACT)
        master = index.master
        for key in index.slots:
            k, alpha = key
            length = alpha * 2 ** k
            threshold = long_threshold(length)
            full = block_documents(index.text, k, alpha)
            expected = []
            for start, end in full.intervals:
                for p in range(start, end - threshold + 2):
                    v = master.leaf_at[p - 1]
                    depths = []
                    while v >= 0:
                        depths.append(master.string_depth[v])
                        v = master.parent[v]
                    if any(threshold <= d <= end - p + 1 for d in depths):
                        expected.append((p, end))
                        break
            shortened = shorten_documents(master, full, length, first_deep_nodes(master, threshold))
            self.assertEqual(shortened.intervals, expected)
            self.assertTrue(all(e - s + 1 <= length for s, e in shortened.intervals))

    def test_unique_text_answers_on_long_edges(self):
        rng = random.Random(127)
        index = build_index(random_text(rng, 160, 26), COMPACT)
        blocks = {key: len(block_documents(index.text, *key)) for key in index.slots}
        self.assertTrue(any(slot.shortened < blocks[key] for key, slot in index.slots.items()))
        with mock.patch.object(CompactSlot, 'anchored_locus', side_effect=AssertionError('anchor used')):
            for i, j in all_pairs(index.n):
                if j - i + 1 >= 6:
                    self.assertEqual(compact_query_fix(index, i, j), naive_locus(index.master, 1, i, j))

    def test_periodic_text_answers_through_anchors(self):
        index = build_index('a' * 64, COMPACT)
        with mock.patch.object(LongInstance, 'floor_from_leaf', autospec=True,
                               side_effect=LongInstance.floor_from_leaf) as floor:
            self.assertEqual(compact_query_fix(index, 2, 30), naive_locus(index.master, 1, 2, 30))
        self.assertEqual(floor.call_count, 1)

    def test_anchor_labels_end_their_documents(self):
        index = build_index(fibonacci_word(200), COMPACT)
        master = index.master
        for key, slot in index.slots.items():
            anchors = set(band_anchors(master, slot.threshold, slot.ceiling)) if slot.shortened else set()
            self.assertEqual(slot.pointers.keys(), anchors)
            labels = [bytes(index.text[s - 1:e]) for s, e in slot.documents.intervals]
            for u, leaf in slot.pointers.items():
                doc, offset = slot.instance.origin(leaf)
                start, end = slot.documents.intervals[doc - 1]
                self.assertEqual(end - (start + offset - 1) + 1, master.string_depth[u])
                self.assertEqual(index.text[start + offset - 2:end], master.label(u))
            for a, b in itertools.permutations(labels, 2):
                self.assertFalse(a.endswith(b), key)

    def test_forest_nodes_map_to_master_nodes_of_equal_depth(self):
        index = build_index(b'ab' * 100, COMPACT)
        for slot in index.slots.values():
            for v, node in slot.master_of.items():
                self.assertEqual(slot.instance.node_depth[v], index.master.string_depth[node])
                self.assertGreaterEqual(index.master.string_depth[node], slot.threshold)
            if slot.instance is not None:
                self.assertIsNone(slot.instance.tree)

    def test_marks_per_path_are_few(self):
        rng = random.Random(131)
        index = build_index(random_text(rng, 200, 2), COMPACT)
        master = index.master
        marked = index.marks.index.marked
        limit = 2 * len(index.slots)
        for leaf in master.leaf_at:
            v, count = leaf, 0
            while v >= 0:
                count += marked[v]
                v = master.parent[v]
            self.assertLessEqual(count, limit)

    def test_compact_words_per_symbol_stay_flat(self):
        rng = random.Random(137)
        families = {
            'constant': lambda n: 'a' * n,
            'alternating': lambda n: 'ab' * (n // 2),
            'random': lambda n: random_text(rng, n, 2),
        }
        for name, make in families.items():
            ratios = {n: build_index(make(n), COMPACT).words() / n for n in (256, 512, 1024, 2048)}
            self.assertLessEqual(ratios[2048], 1.5 * ratios[256], f'{name}: {ratios}')
            self.assertLessEqual(max(ratios.values()), stwa_setting('COMPACT_SPACE_FACTOR'), name)

    def test_length_accounting(self):
        for text in ('a' * 512, fibonacci_word(512), cycle_text(8)):
            index = build_index(text, COMPACT)
            rows = index.accounting()
            self.assertEqual(set(rows), set(index.slots))
            for key, row in rows.items():
                self.assertTrue(row['passed'], f'{key}: {row}')
                self.assertGreaterEqual(row['band_nodes'], 0)
        with self.assertRaises(InvalidArgument):
            build_index('abracadabra').accounting()

    def test_fix_needs_compact_mode(self):
        with self.assertRaises(InvalidArgument):
            compact_query_fix(build_index('abracadabra'), 1, 8)
        with self.assertRaises(InvalidArgument):
            compact_query_fix(build_index('abracadabra', COMPACT), 1, 4)


class BoundsAssertions:
    """Probes per query and words per symbol against the recorded constants."""

    def families(self, n):
        rng = random.Random(n)
        return {
            'random': random_text(rng, n, 4),
            'constant': 'a' * n,
            'alternating': 'ab' * (n // 2),
            'fibonacci': fibonacci_word(n),
            'single-mismatch': 'a' * (n - 1) + 'b',
            'cycle-family': (cycle_text(8) * (n // 256 + 1))[:n],
        }

    def assertWithinBounds(self, index, pairs):
        bound = stwa_setting('PROBE_BOUND')
        for i, j in pairs:
            with measure() as spent:
                index.substring_locus(i, j)
            self.assertLessEqual(spent[0], bound, f'{index.mode} [{i}, {j}]')
        n = index.n
        if index.mode == COMPACT:
            self.assertLessEqual(index.words(), stwa_setting('COMPACT_SPACE_FACTOR') * n)
        else:
            self.assertLessEqual(index.words(), stwa_setting('STANDARD_SPACE_FACTOR') * n * math.log2(n))

    def sample(self, n, count, seed):
        rng = random.Random(seed)
        pairs = []
        for _ in range(count):
            i = rng.randint(1, n)
            pairs.append((i, rng.randint(i, n)))
        return pairs


class BoundsTests(SimpleTestCase, BoundsAssertions):
    def test_small_texts_exhaustively(self):
        for text in self.families(64).values():
            for mode in (STANDARD, COMPACT):
                self.assertWithinBounds(build_index(text, mode), all_pairs(len(text)))

    def test_larger_texts_sampled(self):
        for n, modes in ((256, (STANDARD, COMPACT)), (1024, (COMPACT,))):
            for text in self.families(n).values():
                for mode in modes:
                    index = build_index(text, mode)
                    self.assertWithinBounds(index, self.sample(index.n, 300, n))


class StorageTests(SimpleTestCase):
    def test_round_trip(self):
        for mode in (STANDARD, COMPACT):
            index = build_index(fibonacci_word(60), mode)
            with tempfile.TemporaryDirectory() as tmp:
                path = os.path.join(tmp, 'fib.stwa')
                save_index(index, path)
                loaded = load_index(path)
            self.assertEqual(loaded.mode, mode)
            self.assertEqual(loaded.text, index.text)
            for i, j in all_pairs(index.n):
                self.assertEqual(loaded.substring_locus(i, j), index.substring_locus(i, j))

    def test_reloaded_index_serializes_to_the_same_bytes(self):
        for mode in (STANDARD, COMPACT):
            for text in ('abracadabra' * 3, cycle_text(4), 'a' * 100):
                data = dump_index(build_index(text, mode))
                self.assertEqual(dump_index(parse_index(data)), data, f'{mode} {text[:12]}')

    def test_shared_structures_stay_shared(self):
        loaded = parse_index(dump_index(build_index(fibonacci_word(50))))
        for slot in loaded.slots.values():
            self.assertIs(slot.documents.text, loaded.text)
            self.assertIs(slot.instance.decorated.tree, slot.instance.tree)

    def test_saving_is_deterministic(self):
        index = build_index('abracadabra' * 3)
        self.assertEqual(dump_index(index), dump_index(index))

    def test_rejects_malformed_files(self):
        data = dump_index(build_index('abracadabra'))
        with self.assertRaises(IndexFormatError):
            parse_index(b'NOPE1' + data[5:])
        with self.assertRaises(IndexFormatError):
            parse_index(data[:8])
        with self.assertRaises(IndexFormatError):
            parse_index(data[:len(data) - 10])

    def test_rejects_foreign_classes(self):
        data = dump_index(build_index('abracadabra'))
        meta, text = storage_sections(data)[:2]
        for name in (b'os.system', b'subprocess.Popen', b'builtins.eval', b'wa_index.storage.json'):
            crafted = bytes([OBJECT]) + U32.pack(len(name)) + name + U32.pack(0)
            with self.assertRaises(IndexFormatError):
                parse_index(container(meta, text, crafted))
        with self.assertRaises(IndexFormatError):
            parse_index(container(meta, text, b'R' + U32.pack(7)))
        with self.assertRaises(IndexFormatError):
            parse_index(container(meta, text, b'M' + U32.pack(3)))

    def test_refuses_unknown_values(self):
        index = build_index('abracadabra')
        index.extra = object()
        with self.assertRaises(InvalidArgument):
            dump_index(index)


def storage_sections(data):
    bodies = []
    for s in range(len(SECTIONS)):
        _, offset, length = SECTION.unpack_from(data, HEADER.size + s * SECTION.size)
        bodies.append(data[offset:offset + length])
    return bodies


def container(meta, text, structures):
    offset = HEADER.size + SECTION.size * len(SECTIONS)
    records = []
    for name, body in zip(SECTIONS, (meta, text, structures)):
        records.append(SECTION.pack(name.encode(), offset, len(body)))
        offset += len(body)
    return b''.join([HEADER.pack(MAGIC, VERSION, len(SECTIONS)), *records, meta, text, structures])


class StatsTests(SimpleTestCase):
    def test_index_stats(self):
        index = build_index(cycle_text(4), COMPACT)
        stats = index_stats(index)
        self.assertEqual(stats.text_length, 64)
        self.assertEqual(stats.total_words, index.words())
        self.assertIn('marks', stats.components)
        self.assertNotIn('level_ancestors', stats.components)
        self.assertEqual(len(stats.instances), len(index.slots))
        self.assertEqual(len(stats.accounting), len(index.slots))
        self.assertIn('"components"', stats.model_dump_json())

    def test_standard_stats(self):
        index = build_index('abracadabra' * 4)
        stats = index_stats(index)
        self.assertIn('locus_maps', stats.components)
        self.assertEqual(stats.accounting, [])
        self.assertTrue(all(s.gst_nodes > 0 for s in stats.instances))

    def test_probe_histogram(self):
        self.assertEqual(probe_histogram([2, 2, 0, 3]), [1, 0, 2, 1])
        self.assertEqual(probe_histogram([]), [0])


@tag('acceptance')
@skipUnless(os.getenv('STWA_ACCEPTANCE'), 'set STWA_ACCEPTANCE=1 to run the acceptance suite')
class AcceptanceTests(SimpleTestCase, BoundsAssertions):
    """Full-size checks over the bundled text families; slow."""

    def test_exhaustive_up_to_512(self):
        for n in (256, 512):
            for name, text in self.families(n).items():
                for mode in (STANDARD, COMPACT):
                    index = build_index(text, mode)
                    for i, j in all_pairs(index.n):
                        self.assertEqual(index.substring_locus(i, j), naive_locus(index.master, 1, i, j),
                                         f'{name} {mode} [{i}, {j}]')

    def test_modes_agree_up_to_2048(self):
        for name, text in self.families(2048).items():
            standard = build_index(text, STANDARD)
            compact = build_index(text, COMPACT)
            for i, j in all_pairs(standard.n):
                self.assertEqual(standard.substring_locus(i, j), compact.substring_locus(i, j), f'{name} [{i}, {j}]')

    def test_bounds_up_to_4096(self):
        for n in (1024, 2048, 4096):
            for name, text in self.families(n).items():
                for mode in (STANDARD, COMPACT):
                    index = build_index(text, mode)
                    self.assertWithinBounds(index, self.sample(index.n, 10 ** 4, n))
                    if mode == COMPACT:
                        self.assertTrue(all(row['passed'] for row in index.accounting().values()), name)

    def test_persistence_is_byte_identical(self):
        for name, text in self.families(512).items():
            for mode in (STANDARD, COMPACT):
                index = build_index(text, mode)
                data = dump_index(index)
                loaded = parse_index(data)
                self.assertEqual(dump_index(loaded), data, f'{name} {mode}')
                for i, j in all_pairs(index.n):
                    self.assertEqual(loaded.substring_locus(i, j), index.substring_locus(i, j))
