import itertools
import math
import random

from django.test import SimpleTestCase

from stwa.exceptions import InvalidArgument

from .periodicity import (
    compute_period, is_periodic, is_primitive, lyndon_rotation, maximal_run, rotation, has_period,
)
from .symbols import Interval, to_symbols, separator, is_separator


def s(text):
    return to_symbols(text)


class PeriodTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(compute_period(s('abaab')), 3)
        self.assertEqual(compute_period(s('aaaa')), 1)
        self.assertEqual(compute_period(s('abcd')), 4)
        self.assertTrue(is_periodic(s('abab')))
        self.assertFalse(is_periodic(s('abaab')))

    def test_empty_rejected(self):
        with self.assertRaises(InvalidArgument):
            compute_period([])
        with self.assertRaises(InvalidArgument):
            is_primitive([])

    def test_matches_definition(self):
        rng = random.Random(7)
        for _ in range(300):
            w = [rng.randrange(2) for _ in range(rng.randint(1, 20))]
            expected = next(p for p in range(1, len(w) + 1)
                            if all(w[i] == w[i + p] for i in range(len(w) - p)))
            self.assertEqual(compute_period(w), expected)

    def test_gcd_of_two_periods_is_a_period(self):
        rng = random.Random(11)
        for _ in range(200):
            w = [rng.randrange(2) for _ in range(rng.randint(1, 16))]
            p = compute_period(w)
            for q in range(p, len(w) + 1):
                if p + q <= len(w) and has_period(w, Interval(1, len(w)), q):
                    self.assertTrue(has_period(w, Interval(1, len(w)), math.gcd(p, q)))


class PrimitivityTests(SimpleTestCase):
    def test_examples(self):
        self.assertFalse(is_primitive(s('abab')))
        self.assertTrue(is_primitive(s('aba')))
        self.assertTrue(is_primitive(s('a')))
        self.assertFalse(is_primitive(s('aaa')))


class LyndonRotationTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(lyndon_rotation(s('aab')), 1)
        self.assertEqual(lyndon_rotation(s('baa')), 2)
        self.assertEqual(lyndon_rotation(s('cab')), 2)

    def test_rejects_powers(self):
        with self.assertRaises(InvalidArgument):
            lyndon_rotation(s('abab'))

    def test_rotation_is_least_exhaustively(self):
        for n in range(1, 11):
            for w in itertools.product((0, 1), repeat=n):
                w = list(w)
                if not is_primitive(w):
                    continue
                i = lyndon_rotation(w)
                best = rotation(w, i)
                for other in range(1, n + 1):
                    self.assertLessEqual(best, rotation(w, other))

    def test_ternary_samples(self):
        rng = random.Random(3)
        for _ in range(200):
            w = [rng.randrange(3) for _ in range(rng.randint(1, 16))]
            if is_primitive(w):
                best = rotation(w, lyndon_rotation(w))
                self.assertEqual(best, min(rotation(w, r) for r in range(1, len(w) + 1)))


class MaximalRunTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(maximal_run(s('cabababd'), Interval(2, 7), 2), Interval(2, 7))
        self.assertEqual(maximal_run(s('ababab'), Interval(2, 5), 2), Interval(1, 6))
        self.assertEqual(maximal_run(s('aXaaaa'), Interval(3, 6), 1), Interval(3, 6))

    def test_seed_without_period(self):
        with self.assertRaises(InvalidArgument):
            maximal_run(s('abcabd'), Interval(1, 6), 3)

    def test_run_is_maximal(self):
        rng = random.Random(5)
        for _ in range(300):
            w = [rng.randrange(2) for _ in range(rng.randint(4, 24))]
            a = rng.randint(1, len(w) - 1)
            b = rng.randint(a + 1, len(w))
            p = compute_period(w[a - 1:b])
            run = maximal_run(w, Interval(a, b), p)
            self.assertTrue(run.contains(Interval(a, b)))
            self.assertTrue(has_period(w, run, p))
            if run.start > 1:
                self.assertFalse(has_period(w, Interval(run.start - 1, run.end), p))
            if run.end < len(w):
                self.assertFalse(has_period(w, Interval(run.start, run.end + 1), p))


class SymbolTests(SimpleTestCase):
    def test_separators_are_outside_bytes(self):
        self.assertTrue(is_separator(separator(0)))
        self.assertNotEqual(separator(0), separator(1))
        self.assertTrue(all(not is_separator(b) for b in to_symbols(bytes(range(256)))))

    def test_bad_interval(self):
        with self.assertRaises(InvalidArgument):
            Interval(3, 2)
