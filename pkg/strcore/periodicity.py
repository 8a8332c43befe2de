"""Periods, primitivity, Lyndon rotations and maximal periodic runs.

All positions are 1-based, matching the w[i..j] notation of the index.
"""
from stwa.exceptions import InvalidArgument

from .symbols import Interval


def failure_function(s):
    """Border lengths: fail[q] is the longest proper border of s[:q]."""
    fail = [0] * (len(s) + 1)
    k = 0
    for q in range(1, len(s)):
        while k and s[q] != s[k]:
            k = fail[k]
        if s[q] == s[k]:
            k += 1
        fail[q + 1] = k
    return fail


def compute_period(s):
    """Smallest p >= 1 with s[i] == s[i+p] wherever both sides exist."""
    if len(s) == 0:
        raise InvalidArgument('period of an empty string is undefined')
    return len(s) - failure_function(s)[len(s)]


def is_periodic(s):
    return 2 * compute_period(s) <= len(s)


def is_primitive(s):
    if len(s) == 0:
        raise InvalidArgument('primitivity of an empty string is undefined')
    p = compute_period(s)
    return p == len(s) or len(s) % p != 0


def least_rotation(s):
    """Booth's algorithm: 0-based start of the lexicographically least rotation."""
    doubled = list(s) + list(s)
    fail = [-1] * len(doubled)
    k = 0
    for j in range(1, len(doubled)):
        sj = doubled[j]
        i = fail[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != doubled[k + i + 1]:
            if sj < doubled[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def lyndon_rotation(s):
    """1-based index i such that s[i..] s[..i-1] is the Lyndon word of s."""
    if len(s) == 0 or not is_primitive(s):
        raise InvalidArgument('Lyndon rotation is unique only for primitive strings')
    return least_rotation(s) + 1


def rotation(s, i):
    """The cyclic rotation s[i..] s[..i-1] (1-based i)."""
    return list(s[i - 1:]) + list(s[:i - 1])


def has_period(w, interval, p):
    lo, hi = interval.start - 1, interval.end - 1
    return all(w[x] == w[x + p] for x in range(lo, hi - p + 1))


def maximal_run(w, seed, p):
    """Grow `seed` in both directions while p stays a period of w."""
    if p < 1 or seed.end > len(w):
        raise InvalidArgument('run seed lies outside the string')
    if not has_period(w, seed, p):
        raise InvalidArgument(f'{p} is not a period of w[{seed.start}..{seed.end}]')
    start, end = seed.start, seed.end
    while start > 1 and start - 1 + p <= end and w[start - 2] == w[start - 2 + p]:
        start -= 1
    while end < len(w) and end + 1 - p >= start and w[end] == w[end - p]:
        end += 1
    return Interval(start, end)
