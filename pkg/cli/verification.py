"""Oracle and invariant checks of one text, the engine behind `verify`."""
import logging
import random

from pydantic import BaseModel, Field

from stwa.exceptions import InvariantViolation
from stwa.probes import measure
from suffix_tree.tree import naive_locus
from wa_index.index import STANDARD, build_index
from wa_index.storage import dump_index, parse_index

logger = logging.getLogger(__name__)

MISMATCH_LIMIT = 20


class VerificationReport(BaseModel):
    name: str
    mode: str
    text_length: int
    queries: int = 0
    mismatch_count: int = 0
    mismatches: list[str] = Field(default_factory=list)
    problems: list[str] = Field(default_factory=list)
    max_probes: int = 0

    @property
    def passed(self):
        return not self.mismatch_count and not self.problems


def query_pairs(n, max_exhaustive=512, samples=2000, seed=0):
    if n <= max_exhaustive:
        return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    rng = random.Random(seed)
    pairs = []
    for _ in range(samples):
        i = rng.randint(1, n)
        pairs.append((i, rng.randint(i, n)))
    return pairs


def verify_corpus(text, mode=STANDARD, name='text', max_exhaustive=512, samples=2000, seed=0, round_trip=True):
    report = VerificationReport(name=name, mode=mode, text_length=len(text))
    try:
        index = build_index(text, mode, check_invariants=True)
    except InvariantViolation as exc:
        report.problems.append(f'build: {exc}')
        logger.error('%s (%s): build failed: %s', name, mode, exc)
        return report
    report.problems.extend(index.invariant_problems())

    pairs = query_pairs(index.n, max_exhaustive, samples, seed)
    answers = []
    for i, j in pairs:
        try:
            with measure() as spent:
                found = index.substring_locus(i, j)
        except InvariantViolation as exc:
            answers.append(None)
            report.problems.append(f'[{i}, {j}]: {exc}')
            continue
        answers.append(found)
        report.max_probes = max(report.max_probes, spent[0])
        expected = naive_locus(index.master, 1, i, j)
        if found != expected:
            report.mismatch_count += 1
            if len(report.mismatches) < MISMATCH_LIMIT:
                report.mismatches.append(f'[{i}, {j}]: got {found.as_row()}, expected {expected.as_row()}')
    report.queries = len(pairs)

    if round_trip:
        data = dump_index(index)
        loaded = parse_index(data)
        if dump_index(loaded) != data:
            report.problems.append('reloaded index does not serialize to the same bytes')
        for (i, j), found in zip(pairs[:MISMATCH_LIMIT * 10], answers):
            if found is not None and loaded.substring_locus(i, j) != found:
                report.problems.append(f'reloaded index differs at [{i}, {j}]')

    if report.passed:
        logger.info('%s (%s, n=%d): %d queries, max probes %d', name, mode, index.n, report.queries,
                    report.max_probes)
    else:
        logger.error('%s (%s, n=%d): %d mismatches, %d invariant problems', name, mode, index.n,
                     report.mismatch_count, len(report.problems))
    return report
