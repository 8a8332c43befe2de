import os
import random
from bisect import bisect_right
from unittest import skipUnless

from django.test import SimpleTestCase, tag

from stwa.exceptions import InvalidArgument

from .oracle import naive_predecessor
from .pins import build_pins, build_pins_compact, pins_predecessor
from .pisns import build_pisns, pisns_predecessor, split_point
from .sets import SetCollection


def random_nested(rng, count, universe):
    sets = []
    current = set()
    pool = list(range(1, universe + 1))
    for _ in range(count):
        current |= set(rng.sample(pool, rng.randint(0, max(1, universe // (2 * count)))))
        sets.append(sorted(current))
    return sets


def random_shrinking(rng, count, universe):
    bounds = sorted(rng.randint(1, universe) for _ in range(count))
    sets = [None] * count
    last = sorted(rng.sample(range(bounds[-1], universe + 1), rng.randint(1, min(8, universe - bounds[-1] + 1))))
    sets[-1] = last
    for i in range(count - 2, -1, -1):
        carried = [x for x in sets[i + 1] if x >= bounds[i + 1] and rng.random() < 0.8]
        low = range(bounds[i], bounds[i + 1])
        fresh = rng.sample(low, rng.randint(0, min(4, len(low)))) if len(low) else []
        values = sorted(set(carried) | set(fresh))
        sets[i] = values or [sets[i + 1][0]]
    return SetCollection(sets, universe, bounds)


class NaivePredecessorTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(naive_predecessor([3, 7, 9], 8), (2, 7))
        self.assertIsNone(naive_predecessor([3, 7, 9], 2))
        self.assertEqual(naive_predecessor([3, 7, 9], 9), (3, 9))


class PinsTests(SimpleTestCase):
    def setUp(self):
        self.collection = SetCollection([[3, 9], [3, 7, 9], [1, 3, 7, 9, 12]], 16)

    def test_examples(self):
        for index in (build_pins(self.collection), build_pins_compact(self.collection, 1)):
            self.assertEqual(pins_predecessor(index, 2, 8), (2, 7))
            self.assertIsNone(pins_predecessor(index, 1, 2))
            self.assertEqual(pins_predecessor(index, 3, 1), (1, 1))
            self.assertEqual(pins_predecessor(index, 3, 16), (5, 12))

    def test_nesting_violation_names_element(self):
        with self.assertRaisesMessage(InvalidArgument, 'element 4 of set 1'):
            build_pins(SetCollection([[4], [5]], 8))

    def test_out_of_range_queries(self):
        index = build_pins(self.collection)
        with self.assertRaises(InvalidArgument):
            index.predecessor(0, 3)
        with self.assertRaises(InvalidArgument):
            index.predecessor(1, 17)

    def test_compact_single_set(self):
        index = build_pins_compact(SetCollection([[5]], 10 ** 6), 1)
        self.assertEqual(index.predecessor(1, 10 ** 6), (1, 5))
        self.assertLess(index.words(), 10 ** 4)

    def test_empty_collection(self):
        index = build_pins_compact(SetCollection([], 10), 1)
        self.assertEqual(len(index), 0)
        self.assertEqual(build_pins(SetCollection([[], [2]], 4)).predecessor(1, 4), None)

    def test_random_collections_match_oracle(self):
        rng = random.Random(13)
        sets = random_nested(rng, 64, 4096)
        collection = SetCollection(sets, 4096)
        baseline = build_pins(collection)
        compact = build_pins_compact(collection, 1)
        for _ in range(10 ** 4):
            i = rng.randint(1, 64)
            x = rng.randint(1, 4096)
            expected = naive_predecessor(sets[i - 1], x)
            self.assertEqual(baseline.predecessor(i, x), expected)
            self.assertEqual(compact.predecessor(i, x), expected)

    def test_exhaustive_small_universe(self):
        rng = random.Random(17)
        for universe in (1, 7, 64, 256):
            sets = random_nested(rng, 12, universe)
            collection = SetCollection(sets, universe)
            baseline = build_pins(collection)
            compact = build_pins_compact(collection, 2)
            for i in range(1, 13):
                for x in range(1, universe + 1):
                    expected = naive_predecessor(sets[i - 1], x)
                    self.assertEqual(baseline.predecessor(i, x), expected)
                    self.assertEqual(compact.predecessor(i, x), expected)


class SplitPointTests(SimpleTestCase):
    def test_matches_bisect(self):
        rng = random.Random(19)
        for _ in range(500):
            bounds = sorted(rng.randint(1, 50) for _ in range(rng.randint(1, 30)))
            mid = rng.randint(0, 51)
            self.assertEqual(split_point(bounds, mid), bisect_right(bounds, mid))


class PisnsTests(SimpleTestCase):
    def test_examples(self):
        collection = SetCollection([[2, 5, 9], [5, 7, 9], [7, 9]], 16, [1, 4, 6])
        for compact in (False, True):
            index = build_pisns(collection, compact=compact, t2=1)
            self.assertEqual(pisns_predecessor(index, 2, 8), (2, 7))
            self.assertEqual(pisns_predecessor(index, 1, 4), (1, 2))
            self.assertIsNone(pisns_predecessor(index, 3, 6))
            self.assertEqual(pisns_predecessor(index, 1, 16), (3, 9))

    def test_suffix_depth_sets(self):
        # S_i = {i + x : x in D(v)} for the leaves along the suffix links of "aab$"
        sets = [[1, 2, 5], [2, 3, 5], [3, 5], [4, 5]]
        collection = SetCollection(sets, 5, [1, 2, 3, 4])
        index = build_pisns(collection)
        for i in range(1, 5):
            for x in range(i, 6):
                self.assertEqual(index.predecessor(i, x), naive_predecessor(sets[i - 1], x))

    def test_rejects_invalid_collections(self):
        with self.assertRaises(InvalidArgument):
            build_pisns(SetCollection([[2], []], 8, [1, 2]))
        with self.assertRaises(InvalidArgument):
            build_pisns(SetCollection([[2, 6], [7]], 8, [1, 3]))
        with self.assertRaises(InvalidArgument):
            build_pisns(SetCollection([[2]], 8, [3]))
        index = build_pisns(SetCollection([[2]], 8, [1]))
        with self.assertRaises(InvalidArgument):
            index.predecessor(2, 3)

    def test_random_instances_match_oracle(self):
        rng = random.Random(23)
        for round_ in range(20):
            universe = rng.choice((100, 1000, 4096))
            collection = random_shrinking(rng, rng.randint(1, 40), universe)
            sets = [list(map(int, s)) for s in collection.sets]
            index = build_pisns(collection, compact=round_ % 2 == 1, t2=1)
            self.assertEqual(index.element_total(), sum(len(s) for s in sets))
            for route in index.routes:
                self.assertEqual(bin(route.guide).count('1'), len(route.levels))
            for _ in range(2000):
                i = rng.randint(1, len(sets))
                x = rng.randint(1, universe)
                self.assertEqual(index.predecessor(i, x), naive_predecessor(sets[i - 1], x))

    def test_exhaustive_small_universe(self):
        rng = random.Random(29)
        for _ in range(10):
            collection = random_shrinking(rng, rng.randint(1, 12), 256)
            sets = [list(map(int, s)) for s in collection.sets]
            index = build_pisns(collection)
            for i in range(1, len(sets) + 1):
                for x in range(1, 257):
                    self.assertEqual(index.predecessor(i, x), naive_predecessor(sets[i - 1], x))


class LargeCollectionTests(SimpleTestCase):
    universe = 2 ** 14

    def check_pins(self, seed, queries):
        rng = random.Random(seed)
        sets = random_nested(rng, 100, self.universe)
        collection = SetCollection(sets, self.universe)
        indexes = (build_pins(collection), build_pins_compact(collection, 1))
        for _ in range(queries):
            i = rng.randint(1, 100)
            x = rng.randint(1, self.universe)
            expected = naive_predecessor(sets[i - 1], x)
            for index in indexes:
                self.assertEqual(index.predecessor(i, x), expected, f'set {i}, x {x}')

    def check_pisns(self, seed, queries):
        rng = random.Random(seed)
        collection = random_shrinking(rng, 100, self.universe)
        sets = [list(map(int, s)) for s in collection.sets]
        indexes = (build_pisns(collection), build_pisns(collection, compact=True, t2=1))
        for _ in range(queries):
            i = rng.randint(1, 100)
            x = rng.randint(1, self.universe)
            expected = naive_predecessor(sets[i - 1], x)
            for index in indexes:
                self.assertEqual(index.predecessor(i, x), expected, f'set {i}, x {x}')

    def test_hundred_sets(self):
        self.check_pins(31, 2 * 10 ** 4)
        self.check_pisns(37, 2 * 10 ** 4)


@tag('acceptance')
@skipUnless(os.getenv('STWA_ACCEPTANCE'), 'set STWA_ACCEPTANCE=1 to run the acceptance suite')
class AcceptanceTests(LargeCollectionTests):
    def test_hundred_sets(self):
        for seed in range(3):
            self.check_pins(41 + seed, 10 ** 5)
            self.check_pisns(43 + seed, 10 ** 5)
