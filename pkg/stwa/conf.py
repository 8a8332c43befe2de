from django.conf import settings

DEFAULTS = {
    'WORD_BITS': 64,
    'RANK_SELECT_DEPTH': 2,
    'COMPACT_PISNS_DEPTH': 1,
    'ALPHAS': tuple(range(8, 16)),
    'SHORT_QUERY_LIMIT': 6,
    'MARK_DENSITY_FACTOR': 8,
    'MICRO_TREE_LIMIT': 64,
    'SHOW_PROGRESS': False,
    'QUERY_WORKERS': 1,
    'PROBE_BOUND': 64,
    'STANDARD_SPACE_FACTOR': 4096,
    'COMPACT_SPACE_FACTOR': 4096,
    'COMPACT_LENGTH_FACTOR': 256,
}


def stwa_setting(name):
    """Read one index tunable, falling back to the defaults outside Django."""
    if settings.configured:
        return getattr(settings, 'STWA', {}).get(name, DEFAULTS[name])
    return DEFAULTS[name]
