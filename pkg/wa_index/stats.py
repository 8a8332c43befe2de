"""JSON statistics of built indexes and query benchmarks."""
import math

from pydantic import BaseModel, Field


class InstanceStats(BaseModel):
    k: int
    alpha: int
    length: int
    documents: int
    gst_nodes: int = 0
    chains: int = 0
    cycles: int = 0
    families: int = 0
    map_extras: int = 0
    anchors: int = 0
    shortened: int = 0
    words: int = 0


class LengthAccounting(BaseModel):
    k: int
    alpha: int
    length: int
    band_nodes: int
    words: int
    bound: float
    passed: bool


class IndexStats(BaseModel):
    mode: str
    text_length: int
    components: dict[str, int]
    instances: list[InstanceStats] = Field(default_factory=list)
    accounting: list[LengthAccounting] = Field(default_factory=list)
    total_words: int
    words_per_symbol: float
    words_per_symbol_log: float


class BenchReport(BaseModel):
    queries: int
    failures: int = 0
    probe_histogram: list[int]
    max_probes: int
    components: dict[str, int]
    words_per_symbol: float


def instance_stats(slot):
    k, alpha = slot.key
    stats = InstanceStats(k=k, alpha=alpha, length=slot.length, documents=len(slot.documents),
                          shortened=getattr(slot, 'shortened', 0))
    if slot.instance is None:
        return stats
    report = slot.instance.report()
    stats.gst_nodes = report['nodes']
    stats.chains = report['chains']
    stats.cycles = report['cycles']
    stats.families = report['families']
    if getattr(slot, 'locus_map', None) is not None:
        stats.map_extras = slot.locus_map.extras
    else:
        stats.anchors = len(slot.pointers)
    stats.words = slot.words()
    return stats


def index_stats(index):
    components = index.components()
    total = sum(components.values())
    accounting = []
    if index.mode == 'compact':
        accounting = [LengthAccounting(k=k, alpha=alpha, **row) for (k, alpha), row in index.accounting().items()]
    return IndexStats(
        mode=index.mode,
        text_length=index.n,
        components=components,
        instances=[instance_stats(slot) for slot in index.slots.values()],
        accounting=accounting,
        total_words=total,
        words_per_symbol=total / index.n,
        words_per_symbol_log=total / (index.n * max(1.0, math.log2(index.n))),
    )


def probe_histogram(counts):
    """Number of queries per probe count, index = probes."""
    histogram = [0] * (max(counts, default=0) + 1)
    for count in counts:
        histogram[count] += 1
    return histogram


def bench_report(index, counts, failures=0):
    components = index.components()
    return BenchReport(
        queries=len(counts),
        failures=failures,
        probe_histogram=probe_histogram(counts),
        max_probes=max(counts, default=0),
        components=components,
        words_per_symbol=sum(components.values()) / index.n,
    )
