"""Integer alphabet shared by every index structure.

Values 0..255 are text bytes; each document separator gets its own value
starting at SEPARATOR_BASE. Texts that already carry larger symbols (joined
document collections) get their separators above their largest symbol.
"""
from dataclasses import dataclass

from stwa.exceptions import InvalidArgument

SEPARATOR_BASE = 256


def to_symbols(text):
    """Turn bytes, str or an int sequence into a list of non-negative ints."""
    if isinstance(text, (bytes, bytearray, memoryview)):
        return list(bytes(text))
    if isinstance(text, str):
        return list(text.encode('utf-8'))
    symbols = [int(s) for s in text]
    if any(s < 0 for s in symbols):
        raise InvalidArgument('symbols must be non-negative integers')
    return symbols


def separator(index):
    """The unique terminator of document `index` (0-based)."""
    return SEPARATOR_BASE + index


def is_separator(symbol):
    return symbol >= SEPARATOR_BASE


@dataclass(frozen=True)
class Interval:
    """1-based inclusive coordinates of a substring."""
    start: int
    end: int

    def __post_init__(self):
        if self.start < 1 or self.end < self.start:
            raise InvalidArgument(f'bad interval [{self.start}, {self.end}]')

    def __len__(self):
        return self.end - self.start + 1

    def contains(self, other):
        return self.start <= other.start and other.end <= self.end
