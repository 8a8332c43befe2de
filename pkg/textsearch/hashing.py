"""Perfect hashing of the substrings of one text.

Two substrings hash alike exactly when they are equal: equal strings share a
locus, and a locus together with a length names one string.
"""
from dataclasses import dataclass

from stwa.exceptions import InvalidArgument


@dataclass(frozen=True)
class SubstringHash:
    locus_id: int
    length: int


def substring_hash(index, i, j):
    locus = index.substring_locus(i, j)
    return SubstringHash(locus.node, j - i + 1)


def packed_hash(h, n):
    """The hash as one integer: locus id above a length field of n.bit_length() bits."""
    width = n.bit_length()
    if h.length > n or h.length < 1:
        raise InvalidArgument(f'hash length {h.length} outside [1, {n}]')
    return (h.locus_id << width) | h.length


def hash_bits(n):
    """Bits used by packed hashes of a text of length n (its tree has at most 2n + 1 nodes)."""
    return (2 * n + 1).bit_length() + n.bit_length()
