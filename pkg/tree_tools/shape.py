from collections import deque

from stwa.exceptions import InvalidArgument


def tree_shape(parent):
    """Root, children lists and a BFS order for a parent array (root has parent -1)."""
    n = len(parent)
    children = [[] for _ in range(n)]
    roots = []
    for v, p in enumerate(parent):
        if p < 0:
            roots.append(v)
        else:
            children[p].append(v)
    if len(roots) != 1:
        raise InvalidArgument(f'expected exactly one root, found {len(roots)}')
    order = []
    queue = deque(roots)
    while queue:
        v = queue.popleft()
        order.append(v)
        queue.extend(children[v])
    if len(order) != n:
        raise InvalidArgument('parent array contains a cycle')
    return roots[0], children, order
