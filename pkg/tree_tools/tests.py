import random

from django.test import SimpleTestCase

from nested_pred.oracle import naive_predecessor
from stwa.exceptions import InvalidArgument

from .level_ancestor import build_level_ancestor, level_ancestor
from .marked import PRED, SUCC, MarkedPredIndex, build_marked_pred, marked_pred_search
from .small_set import small_set_predecessor, small_set_successor


def random_tree(rng, n):
    return [-1] + [rng.randrange(v) for v in range(1, n)]


def random_caterpillar(rng, n):
    parent = [-1]
    for v in range(1, n):
        parent.append(v - 1 if rng.random() < 0.7 else rng.randrange(v))
    return parent


def root_path(parent, v):
    path = []
    while v >= 0:
        path.append(v)
        v = parent[v]
    return path[::-1]


class LevelAncestorTests(SimpleTestCase):
    def test_path(self):
        index = build_level_ancestor([-1, 0, 1, 2])
        self.assertEqual(level_ancestor(index, 3, 1), 1)
        self.assertEqual(level_ancestor(index, 3, 3), 3)
        self.assertEqual(level_ancestor(index, 3, 0), 0)
        with self.assertRaises(InvalidArgument):
            level_ancestor(index, 2, 3)

    def test_rejects_forests(self):
        with self.assertRaises(InvalidArgument):
            build_level_ancestor([-1, -1])

    def test_random_trees_match_parent_walk(self):
        rng = random.Random(31)
        for make in (random_tree, random_caterpillar):
            for _ in range(5):
                parent = make(rng, rng.randint(1, 1000))
                index = build_level_ancestor(parent)
                for v in rng.sample(range(len(parent)), min(200, len(parent))):
                    path = root_path(parent, v)
                    for d, u in enumerate(path):
                        self.assertEqual(index.query(v, d), u)


class SmallSetTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(small_set_predecessor([2, 5, 9], 6), (2, 5))
        self.assertIsNone(small_set_predecessor([2, 5, 9], 1))
        self.assertEqual(small_set_successor([2, 5, 9], 6), (3, 9))
        self.assertIsNone(small_set_successor([2, 5, 9], 10))

    def test_agrees_with_naive(self):
        rng = random.Random(37)
        for _ in range(500):
            values = sorted(rng.sample(range(100), rng.randint(0, 30)))
            x = rng.randint(-1, 101)
            self.assertEqual(small_set_predecessor(values, x), naive_predecessor(values, x))


class MarkedPredTests(SimpleTestCase):
    def test_chain(self):
        parent = [-1] + list(range(10))
        weights = list(range(11))
        index = build_marked_pred(parent, weights, [2, 5, 9])
        self.assertEqual(marked_pred_search(index, 10, 6, PRED), 5)
        self.assertEqual(marked_pred_search(index, 10, 6, SUCC), 9)
        self.assertIsNone(marked_pred_search(index, 10, 1, PRED))
        self.assertIsNone(marked_pred_search(index, 10, 10, SUCC))
        self.assertEqual(marked_pred_search(index, 5, 5, PRED), 5)

    def test_weights_must_increase(self):
        with self.assertRaises(InvalidArgument):
            build_marked_pred([-1, 0], [3, 3], [1])

    def test_density_limit(self):
        parent = [-1] + list(range(99))
        with self.assertRaises(InvalidArgument):
            build_marked_pred(parent, list(range(100)), range(100), density_factor=1)

    def test_unknown_direction(self):
        index = build_marked_pred([-1, 0], [0, 1], [1])
        with self.assertRaises(InvalidArgument):
            index.search(1, 0, 'sideways')

    def test_random_trees_match_root_path_scan(self):
        rng = random.Random(41)
        for round_ in range(100):
            n = rng.randint(1, 512)
            parent = random_caterpillar(rng, n) if round_ % 2 else random_tree(rng, n)
            weights = [0] * n
            for v in range(1, n):
                weights[v] = weights[parent[v]] + rng.randint(1, 3)
            marks = [v for v in range(n) if rng.random() < 0.1]
            index = MarkedPredIndex(parent, weights, marks, density_factor=64, limit=rng.choice((4, 64)))
            marked = set(marks)
            for v in rng.sample(range(n), min(20, n)):
                path = [u for u in root_path(parent, v) if u in marked]
                for x in range(-1, weights[v] + 2):
                    below = [u for u in path if weights[u] <= x]
                    above = [u for u in path if weights[u] >= x]
                    pred = index.predecessor(v, x)
                    succ = index.successor(v, x)
                    self.assertEqual(pred, below[-1] if below else None)
                    self.assertEqual(succ, above[0] if above else None)
                    if pred is not None and succ is not None:
                        self.assertLessEqual(weights[pred], x)
                        self.assertLessEqual(x, weights[succ])
