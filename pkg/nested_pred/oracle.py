from bisect import bisect_right


def naive_predecessor(values, x):
    """Largest element <= x of a sorted list as (1-based rank, value), or None."""
    rank = bisect_right(values, x)
    if rank == 0:
        return None
    return rank, values[rank - 1]
