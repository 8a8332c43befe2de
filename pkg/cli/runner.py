"""Command-line entry point and query batch handling shared by the commands."""
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError

from stwa.conf import stwa_setting
from stwa.exceptions import InvalidArgument

COMMANDS = ('build', 'query', 'verify', 'bench')


@dataclass
class QueryBatch:
    """(line number, i, j) triples plus (line number, message) for unreadable lines."""
    pairs: list = field(default_factory=list)
    errors: list = field(default_factory=list)


def parse_pairs(lines):
    batch = QueryBatch()
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        fields = stripped.split()
        if len(fields) != 2:
            batch.errors.append((number, f'expected "i j", got {stripped!r}'))
            continue
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            batch.errors.append((number, f'not integers: {stripped!r}'))
            continue
        batch.pairs.append((number, i, j))
    return batch


def read_batch(path):
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise CommandError(f'cannot read pairs file {path}: {exc}', returncode=2)
    return parse_pairs(text.splitlines())


def answer_pairs(index, pairs, workers=None):
    """Locus or InvalidArgument for every (line, i, j), in input order."""
    workers = stwa_setting('QUERY_WORKERS') if workers is None else workers

    def answer(pair):
        _, i, j = pair
        try:
            return index.substring_locus(i, j)
        except InvalidArgument as exc:
            return exc

    if workers <= 1:
        return [answer(pair) for pair in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(answer, pairs))


def locus_row(i, j, locus, found=None):
    row = [str(i), str(j), locus.kind, str(locus.node), str(locus.string_depth)]
    if found is not None:
        row.append(','.join(map(str, found)))
    return '\t'.join(row)


def run_cli(args, stdout=None, stderr=None):
    """Run one subcommand and return its exit code."""
    stderr = stderr or sys.stderr
    if not args or args[0] not in COMMANDS:
        stderr.write(f'usage: one of {", ".join(COMMANDS)}\n')
        return 2
    try:
        call_command(args[0], *args[1:], stdout=stdout, stderr=stderr)
    except CommandError as exc:
        stderr.write(f'{exc}\n')
        return exc.returncode
    return 0
