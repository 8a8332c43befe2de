import bisect
import random

from django.test import SimpleTestCase

from stwa.exceptions import InvalidArgument

from .rank_select import PackedRankSelect, build_packed_rank_select, rs_rank, rs_select


def dense_rank(bits, i):
    return sum(bits[1:i + 1])


class PackedRankSelectExampleTests(SimpleTestCase):
    def test_small_vector(self):
        # bits 10110
        rs = build_packed_rank_select([1, 3, 4], 5, 1)
        self.assertEqual(rs.ones, 3)
        self.assertEqual(rs_rank(rs, 3), 2)
        self.assertEqual(rs_rank(rs, 0), 0)
        self.assertEqual(rs_rank(rs, 5), 3)
        self.assertEqual(rs_select(rs, 2), 3)
        self.assertEqual(rs_select(rs, 1), 1)
        self.assertEqual(rs_select(rs, 3), 4)

    def test_empty_vector(self):
        rs = build_packed_rank_select([], 64, 2)
        for i in range(65):
            self.assertEqual(rs.rank(i), 0)
        with self.assertRaises(InvalidArgument):
            rs.select(1)

    def test_invalid_input(self):
        with self.assertRaises(InvalidArgument):
            PackedRankSelect([3, 2], 5, 1)
        with self.assertRaises(InvalidArgument):
            PackedRankSelect([6], 5, 1)
        with self.assertRaises(InvalidArgument):
            PackedRankSelect([0], 5, 1)
        rs = PackedRankSelect([2], 5, 1)
        with self.assertRaises(InvalidArgument):
            rs.rank(6)
        with self.assertRaises(InvalidArgument):
            rs.select(2)


class PackedRankSelectOracleTests(SimpleTestCase):
    def test_exhaustive_small_universes(self):
        rng = random.Random(1)
        for n in range(1, 513, 7):
            for depth in (1, 2, 3):
                ones = sorted(rng.sample(range(1, n + 1), rng.randint(0, n)))
                bits = [0] * (n + 1)
                for x in ones:
                    bits[x] = 1
                rs = PackedRankSelect(ones, n, depth)
                running = 0
                for i in range(n + 1):
                    running += bits[i]
                    self.assertEqual(rs.rank(i), running)
                for k, x in enumerate(ones, 1):
                    self.assertEqual(rs.select(k), x)
                    self.assertEqual(rs.rank(rs.select(k)), k)

    def test_large_sparse_universe(self):
        rng = random.Random(2)
        n = 10 ** 6
        ones = sorted(rng.sample(range(1, n + 1), 1000))
        rs = PackedRankSelect(ones, n, 2)
        for _ in range(10 ** 4):
            i = rng.randint(0, n)
            self.assertEqual(rs.rank(i), bisect.bisect_right(ones, i))
        for _ in range(1000):
            x = rng.randint(ones[0], n)
            self.assertLessEqual(rs.select(rs.rank(x)), x)

    def test_word_count_tracks_ones_and_buckets(self):
        rng = random.Random(3)
        n = 2 ** 18
        for depth in (1, 2, 3):
            ones = sorted(rng.sample(range(1, n + 1), 500))
            rs = PackedRankSelect(ones, n, depth)
            self.assertLessEqual(rs.internal_nodes(), depth * len(ones))
            bound = depth * len(ones) + n // 64 ** depth + 1
            self.assertLessEqual(rs.words(), 8 * bound)
