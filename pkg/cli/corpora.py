"""Text families used by verification runs, benchmarks and tests."""
import random


def random_text(n, sigma, seed=0):
    rng = random.Random(seed * 1000003 + sigma)
    return bytes(rng.randrange(97, 97 + sigma) for _ in range(n))


def constant_text(n):
    return b'a' * n


def alternating_text(n):
    return (b'ab' * (n // 2 + 1))[:n]


def fibonacci_word(n):
    a, b = b'a', b'ab'
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def single_mismatch_text(n):
    return b'a' * (n - 1) + b'b'


def cycle_family(length=8):
    """Documents (a^(l-i) b a^(i-1))^4 for i = 1..l; their suffix trees hold a cycle of paths."""
    return [(b'a' * (length - i) + b'b' + b'a' * (i - 1)) * 4 for i in range(1, length + 1)]


def cycle_text(n):
    length = 8
    while 4 * length * length < n:
        length += 1
    return b''.join(cycle_family(length))[:n]


CORPORA = {
    'random-1': lambda n, seed: random_text(n, 1, seed),
    'random-2': lambda n, seed: random_text(n, 2, seed),
    'random-4': lambda n, seed: random_text(n, 4, seed),
    'random-26': lambda n, seed: random_text(n, 26, seed),
    'constant': lambda n, seed: constant_text(n),
    'alternating': lambda n, seed: alternating_text(n),
    'fibonacci': lambda n, seed: fibonacci_word(n),
    'single-mismatch': lambda n, seed: single_mismatch_text(n),
    'cycle-family': lambda n, seed: cycle_text(n),
}


def bundled_corpora(n, seed=0, names=None):
    for name in names or CORPORA:
        yield name, CORPORA[name](n, seed)
