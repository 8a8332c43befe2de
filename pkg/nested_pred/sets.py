from dataclasses import dataclass, field

import numpy as np

from stwa.exceptions import InvalidArgument


@dataclass
class SetCollection:
    """Sets S_1..S_k over [1, N]; lower bounds are only used by shrinking collections."""
    sets: list
    universe_size: int
    lower_bounds: list = field(default=None)

    def __post_init__(self):
        self.sets = [sorted_array(s, self.universe_size, i) for i, s in enumerate(self.sets, 1)]

    def __len__(self):
        return len(self.sets)

    def total(self):
        return sum(len(s) for s in self.sets)


def sorted_array(values, universe_size, index):
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise InvalidArgument(f'set {index} is not a flat sequence')
    if len(arr) and (arr[0] < 1 or arr[-1] > universe_size):
        raise InvalidArgument(f'set {index} leaves the universe [1, {universe_size}]')
    if len(arr) > 1 and not np.all(arr[1:] > arr[:-1]):
        raise InvalidArgument(f'set {index} is not strictly increasing')
    return arr


def check_nested(sets):
    """Raise with the first (i, element) such that element of S_i is missing from S_{i+1}."""
    for i in range(len(sets) - 1):
        inside = np.isin(sets[i], sets[i + 1])
        if not inside.all():
            element = int(sets[i][np.argmin(inside)])
            raise InvalidArgument(f'nesting violated: element {element} of set {i + 1} is not in set {i + 2}')


def check_shrinking(sets, bounds, universe_size):
    if bounds is None or len(bounds) != len(sets):
        raise InvalidArgument('shrinking collections need one lower bound per set')
    for i, (values, bound) in enumerate(zip(sets, bounds), 1):
        if not len(values):
            raise InvalidArgument(f'set {i} is empty')
        if bound < 1 or bound > universe_size:
            raise InvalidArgument(f'lower bound {bound} of set {i} is outside the universe')
        if values[0] < bound:
            raise InvalidArgument(f'set {i} has element {int(values[0])} below its lower bound {bound}')
        if i > 1 and bounds[i - 2] > bound:
            raise InvalidArgument(f'lower bound of set {i} decreases')
    for i in range(len(sets) - 1):
        tail = sets[i][sets[i] >= bounds[i + 1]]
        inside = np.isin(tail, sets[i + 1])
        if not inside.all():
            element = int(tail[np.argmin(inside)])
            raise InvalidArgument(f'nesting violated: element {element} of set {i + 1} is not in set {i + 2}')
