"""Naive suffix trie used to check the compacted trees in tests and verify runs."""
from strcore.symbols import separator, to_symbols


def suffix_strings(documents):
    suffixes = []
    for d, doc in enumerate(documents):
        body = to_symbols(doc) + [separator(d)]
        for p in range(len(body)):
            suffixes.append(tuple(body[p:]))
    return suffixes


def explicit_strings(documents):
    """Strings of the root, every branching trie node and every leaf."""
    trie = {}
    for suffix in suffix_strings(documents):
        node = trie
        for symbol in suffix:
            node = node.setdefault(symbol, {})
    found = set()
    stack = [((), trie)]
    while stack:
        label, node = stack.pop()
        if len(node) != 1 or not label:
            found.add(label)
        for symbol, child in node.items():
            stack.append((label + (symbol,), child))
    return found


def tree_strings(tree):
    return {tuple(tree.label(v)) for v in range(len(tree))}
