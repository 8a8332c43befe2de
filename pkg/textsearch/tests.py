import os
import random
from unittest import skipUnless

from django.test import SimpleTestCase, tag

from stwa.exceptions import InvalidArgument
from wa_index.index import COMPACT, STANDARD, build_index

from .crossdoc import build_doc_occurrences, cross_doc_search
from .hashing import SubstringHash, hash_bits, packed_hash, substring_hash
from .search import leftmost_occurrence, occurrence_count, substring_search


def naive_occurrences(text, pattern):
    return [p + 1 for p in range(len(text) - len(pattern) + 1) if text[p:p + len(pattern)] == pattern]


class SubstringSearchTests(SimpleTestCase):
    def setUp(self):
        self.index = build_index('abracadabra')

    def test_examples(self):
        locus, found = substring_search(self.index, 1, 4, report=True)
        self.assertTrue(locus.is_explicit)
        self.assertEqual(found, [1, 8])
        self.assertEqual(substring_search(self.index, 1, 11, report=True)[1], [1])
        self.assertIsNone(substring_search(self.index, 1, 11)[1])
        self.assertEqual(leftmost_occurrence(self.index, 8, 11), 1)
        self.assertEqual(occurrence_count(self.index, 4, 4), 5)

    def test_random_texts(self):
        rng = random.Random(211)
        for sigma in (2, 3):
            text = bytes(rng.randrange(97, 97 + sigma) for _ in range(70))
            index = build_index(text)
            for _ in range(400):
                i = rng.randint(1, 70)
                j = rng.randint(i, min(70, i + rng.randint(0, 20)))
                expected = naive_occurrences(text, text[i - 1:j])
                self.assertEqual(substring_search(index, i, j, report=True)[1], expected)
                self.assertEqual(leftmost_occurrence(index, i, j), expected[0])

    def test_rejects_bad_coordinates(self):
        with self.assertRaises(InvalidArgument):
            substring_search(self.index, 3, 2)


class SubstringHashTests(SimpleTestCase):
    def test_examples(self):
        index = build_index('abracadabra')
        self.assertEqual(substring_hash(index, 1, 4), substring_hash(index, 8, 11))
        self.assertNotEqual(substring_hash(index, 1, 4), substring_hash(index, 1, 5))
        self.assertEqual(substring_hash(index, 1, 4).length, 4)

    def test_equal_hashes_iff_equal_strings(self):
        rng = random.Random(223)
        for sigma in (1, 2, 3):
            text = bytes(rng.randrange(97, 97 + sigma) for _ in range(36))
            index = build_index(text, COMPACT if sigma == 3 else STANDARD)
            pairs = [(i, j) for i in range(1, 37) for j in range(i, 37)]
            hashes = {pair: substring_hash(index, *pair) for pair in pairs}
            by_string = {}
            for (i, j), h in hashes.items():
                by_string.setdefault(text[i - 1:j], set()).add(h)
            self.assertTrue(all(len(found) == 1 for found in by_string.values()))
            self.assertEqual(len(set(hashes.values())), len(by_string))

    def test_packed_hash(self):
        index = build_index('abracadabra')
        h = substring_hash(index, 1, 4)
        packed = packed_hash(h, 11)
        self.assertEqual(packed & 0b1111, 4)
        self.assertEqual(packed >> 4, h.locus_id)
        self.assertLess(packed.bit_length(), hash_bits(11) + 1)
        with self.assertRaises(InvalidArgument):
            packed_hash(SubstringHash(3, 12), 11)


class CrossDocumentTests(SimpleTestCase):
    def test_example(self):
        doc_index = build_doc_occurrences(['abab', 'bab'])
        self.assertEqual(cross_doc_search(doc_index, 1, 3, 4, 2), [2])
        self.assertEqual(cross_doc_search(doc_index, 1, 1, 2, 1), [1, 3])
        self.assertEqual(cross_doc_search(doc_index, 2, 1, 3, 1), [2])
        self.assertEqual(cross_doc_search(doc_index, 1, 1, 4, 2), [])

    def test_random_collections(self):
        rng = random.Random(227)
        docs = [bytes(rng.randrange(97, 99) for _ in range(rng.randint(5, 30))) for _ in range(8)]
        doc_index = build_doc_occurrences(docs)
        for _ in range(300):
            doc = rng.randint(1, len(docs))
            n = len(docs[doc - 1])
            i = rng.randint(1, n)
            j = rng.randint(i, min(n, i + 12))
            target = rng.randint(1, len(docs))
            expected = naive_occurrences(docs[target - 1], docs[doc - 1][i - 1:j])
            self.assertEqual(cross_doc_search(doc_index, doc, i, j, target), expected)

    def test_rejects_bad_coordinates(self):
        doc_index = build_doc_occurrences(['abab', 'bab'])
        with self.assertRaises(InvalidArgument):
            cross_doc_search(doc_index, 3, 1, 1, 1)
        with self.assertRaises(InvalidArgument):
            cross_doc_search(doc_index, 2, 1, 4, 1)
        with self.assertRaises(InvalidArgument):
            cross_doc_search(doc_index, 1, 1, 1, 0)
        with self.assertRaises(InvalidArgument):
            build_doc_occurrences(['ab', ''])


class HashingScaleTests(SimpleTestCase):
    def check_strings(self, n, count, seed):
        rng = random.Random(seed)
        for round_ in range(count):
            sigma = rng.choice((1, 2, 3, 4))
            text = bytes(rng.randrange(97, 97 + sigma) for _ in range(n))
            index = build_index(text, COMPACT if round_ % 2 else STANDARD)
            seen = {}
            for i in range(1, n + 1):
                for j in range(i, n + 1):
                    h = substring_hash(index, i, j)
                    owner = seen.setdefault(h, text[i - 1:j])
                    self.assertEqual(owner, text[i - 1:j], f'[{i}, {j}] collides')
            self.assertEqual(len(seen), len({text[i:j] for i in range(n) for j in range(i + 1, n + 1)}))

    def test_distinct_substrings_get_distinct_hashes(self):
        self.check_strings(96, 4, 227)


@tag('acceptance')
@skipUnless(os.getenv('STWA_ACCEPTANCE'), 'set STWA_ACCEPTANCE=1 to run the acceptance suite')
class AcceptanceTests(HashingScaleTests):
    def test_distinct_substrings_get_distinct_hashes(self):
        self.check_strings(256, 20, 229)
