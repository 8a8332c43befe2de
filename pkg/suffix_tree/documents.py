from dataclasses import dataclass, field

from stwa.exceptions import InvalidArgument


@dataclass
class DocumentSet:
    """Documents given as 1-based inclusive intervals of a master text."""
    text: list
    intervals: list
    nominal_length: int = 0
    labels: list = field(default=None)

    def __post_init__(self):
        for start, end in self.intervals:
            if start < 1 or end < start or end > len(self.text):
                raise InvalidArgument(f'document interval [{start}, {end}] outside the text')
        if not self.nominal_length:
            self.nominal_length = max((end - start + 1 for start, end in self.intervals), default=0)

    def __len__(self):
        return len(self.intervals)

    def materialize(self):
        return [self.text[start - 1:end] for start, end in self.intervals]
