"""Level paths of active nodes, their chains and cycles, and the PISNS behind them.

At a fixed level k the active nodes form disjoint vertical paths. A path
points to another when the suffix link of one of its nodes lands on the
other; every path has at most one successor and one predecessor, so the
paths split into chains and cycles. Along a chain p_1 -> ... -> p_z the
sets S_j = {j + string depth of an explicit node of p_j} are shrinking
nested over the ranges [j + l_j, z + r_z].
"""
import logging
from dataclasses import dataclass, field

from nested_pred.pisns import PisnsIndex
from nested_pred.sets import SetCollection
from stwa.exceptions import InvariantViolation
from stwa.probes import tick

logger = logging.getLogger(__name__)

CHAIN = 'chain'
CYCLE = 'cycle'


@dataclass
class LevelPath:
    level: int
    nodes: list
    top_depth: int
    bottom_depth: int
    top_tree_depth: int
    above: int = -1
    chain: int = -1
    position: int = 0

    @property
    def top(self):
        return self.nodes[0]

    @property
    def bottom(self):
        return self.nodes[-1]


@dataclass
class ChainOrCycle:
    kind: str
    paths: list
    level: int
    shift: int = 0
    universe_size: int = 0
    pisns: object = None
    costs: list = field(default_factory=list)

    def __len__(self):
        return len(self.paths)

    def extended_range(self):
        """Size of the widest extended range U'_1."""
        first, last = self.paths[0], self.paths[-1]
        return len(self.paths) + last.bottom_depth - (1 + first.top_depth) + 1

    def predecessor(self, position, depth):
        """Deepest explicit node of path `position` with string depth <= depth, as (rank, string depth)."""
        tick()
        found = self.pisns.predecessor(position, position + depth - self.shift)
        if found is None:
            return None
        return found[0], found[1] + self.shift - position


def decompose_paths(decorated, k):
    """Maximal paths of explicit active level-k nodes, each listed top to bottom."""
    tree = decorated.tree
    active = decorated.active
    level = decorated.level
    candidates = [v for v in range(len(tree)) if active[v] and level[v] == k]
    paths = []
    for v in candidates:
        if any(active[c] and level[c] == k for c in tree.children[v]):
            continue
        nodes = [v]
        u = tree.parent[v]
        while u >= 0 and active[u] and level[u] == k:
            nodes.append(u)
            u = tree.parent[u]
        nodes.reverse()
        top = nodes[0]
        top_depth = max(tree.string_depth[tree.parent[top]] + 1, decorated.threshold)
        paths.append(LevelPath(k, nodes, top_depth, tree.string_depth[v], tree.tree_depth[top], tree.parent[top]))
    return paths


def assemble_chains_cycles(decorated, paths):
    """Group one level's paths into chains and cycles by following suffix links of bottoms."""
    tree = decorated.tree
    path_of = {}
    for index, path in enumerate(paths):
        for v in path.nodes:
            path_of[v] = index
    successor = [-1] * len(paths)
    incoming = [0] * len(paths)
    for index, path in enumerate(paths):
        target = path_of.get(tree.suffix_link[path.bottom], -1)
        if target == index:
            raise InvariantViolation(f'level {path.level} path {index} points to itself')
        if target >= 0:
            successor[index] = target
            incoming[target] += 1
            if incoming[target] > 1:
                raise InvariantViolation(f'level {path.level} path {target} is pointed to twice')

    groups = []
    seen = [False] * len(paths)
    for start in range(len(paths)):
        if incoming[start] or seen[start]:
            continue
        members = []
        index = start
        while index >= 0:
            seen[index] = True
            members.append(paths[index])
            index = successor[index]
        groups.append(ChainOrCycle(CHAIN, members, paths[start].level))
    for start in range(len(paths)):
        if seen[start]:
            continue
        cycle = []
        index = start
        while not seen[index]:
            seen[index] = True
            cycle.append(index)
            index = successor[index]
        anchor = min(range(len(cycle)), key=lambda q: paths[cycle[q]].bottom)
        cycle = cycle[anchor:] + cycle[:anchor]
        groups.append(ChainOrCycle(CYCLE, [paths[q] for q in cycle], paths[start].level))
    return groups


def check_nesting(group):
    """Ranges and sets of consecutive paths nest."""
    for j in range(1, len(group.paths)):
        before, after = group.paths[j - 1], group.paths[j]
        if j + before.top_depth > j + 1 + after.top_depth:
            raise InvariantViolation(f'left ends of paths {j} and {j + 1} are not monotone')
        if j + before.bottom_depth > j + 1 + after.bottom_depth:
            raise InvariantViolation(f'right ends of paths {j} and {j + 1} are not monotone')


def build_chain_pisns(decorated, group, compact=False, t2=None):
    tree = decorated.tree
    check_nesting(group)
    z = len(group.paths)
    group.shift = group.paths[0].top_depth
    group.universe_size = z + group.paths[-1].bottom_depth - group.shift
    sets = []
    bounds = []
    for j, path in enumerate(group.paths, 1):
        path.position = j
        sets.append([j + tree.string_depth[v] - group.shift for v in path.nodes])
        bounds.append(j + path.top_depth - group.shift)
    for j in range(len(sets) - 1):
        nxt = set(sets[j + 1])
        for x in sets[j]:
            if x >= bounds[j + 1] and x not in nxt:
                raise InvariantViolation(f'explicit depth {x} of path {j + 1} is missing from path {j + 2}')
    group.pisns = PisnsIndex(SetCollection(sets, group.universe_size, bounds), compact=compact, t2=t2,
                             validate=False)
    group.costs = path_costs(group)
    return group


def path_costs(group):
    paths = group.paths
    costs = []
    for j, path in enumerate(paths):
        if j:
            costs.append(path.bottom_depth - paths[j - 1].bottom_depth + 1)
        elif group.kind == CYCLE:
            costs.append(path.bottom_depth - paths[-1].bottom_depth + 1)
        else:
            costs.append(path.bottom_depth - path.top_depth + 1)
    return costs


@dataclass
class CostReport:
    level: int
    total: int
    bound: float
    passed: bool
    telescope_failures: list


def check_cost_bound(groups, k, instance_size):
    """Sum of path costs at level k against 3 * instance_size / 2**k."""
    level_groups = [g for g in groups if g.level == k]
    total = sum(sum(g.costs or path_costs(g)) for g in level_groups)
    failures = []
    for index, group in enumerate(level_groups):
        cost = sum(group.costs or path_costs(group))
        width = group.extended_range()
        if group.kind == CHAIN and width != cost:
            failures.append(f'chain {index}: extended range {width} != cost {cost}')
        if group.kind == CYCLE and width > 2 * cost:
            failures.append(f'cycle {index}: extended range {width} > twice the cost {cost}')
    bound = 3 * instance_size / 2 ** k
    return CostReport(k, total, bound, total <= bound and not failures, failures)
