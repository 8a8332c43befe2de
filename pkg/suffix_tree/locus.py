from dataclasses import dataclass

EXPLICIT = 'explicit'
IMPLICIT = 'implicit'


@dataclass(frozen=True)
class Locus:
    """Position of a string in a suffix tree.

    For an explicit locus `node` is the node itself. For an implicit one it
    is the lower endpoint of the edge, so (node, string_depth) is canonical.
    """
    kind: str
    node: int
    string_depth: int

    @classmethod
    def explicit(cls, node, string_depth):
        return cls(EXPLICIT, node, string_depth)

    @classmethod
    def implicit(cls, node, string_depth):
        return cls(IMPLICIT, node, string_depth)

    @property
    def is_explicit(self):
        return self.kind == EXPLICIT

    def edge(self, tree):
        """(upper node, lower node) of the edge holding an implicit locus."""
        return tree.parent[self.node], self.node

    def as_row(self):
        return self.kind, self.node, self.string_depth
