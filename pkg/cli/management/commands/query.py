from django.core.management.base import BaseCommand, CommandError

from cli.runner import answer_pairs, locus_row, read_batch
from stwa.exceptions import IndexFormatError
from textsearch.search import occurrences
from wa_index.storage import load_index


class Command(BaseCommand):
    help = 'Answer a batch of substring locus queries, one "i j" pair per line'

    def add_arguments(self, parser):
        parser.add_argument('index_file', type=str)
        parser.add_argument('--pairs', required=True, help='File with one 1-based "i j" pair per line')
        parser.add_argument('--report-occurrences', action='store_true',
                            help='Append the starting positions of every occurrence')
        parser.add_argument('--workers', type=int, default=None)

    def handle(self, *args, **options):
        try:
            index = load_index(options['index_file'])
        except (OSError, IndexFormatError) as e:
            raise CommandError(f"Cannot load {options['index_file']}: {e}", returncode=2)
        batch = read_batch(options['pairs'])

        for number, message in batch.errors:
            self.stderr.write(f'line {number}: {message}')

        answered = 0
        for (number, i, j), found in zip(batch.pairs, answer_pairs(index, batch.pairs, options['workers'])):
            if isinstance(found, Exception):
                self.stdout.write(f'{i}\t{j}\terror\t{found}')
                self.stderr.write(f'line {number}: {found}')
                continue
            positions = occurrences(index, found) if options['report_occurrences'] else None
            self.stdout.write(locus_row(i, j, found, positions))
            answered += 1

        failed = len(batch.errors) + len(batch.pairs) - answered
        if failed and not answered:
            raise CommandError(f'No query line succeeded ({failed} errors)', returncode=2)
