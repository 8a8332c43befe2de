from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from tqdm import tqdm

from cli.corpora import CORPORA, bundled_corpora
from cli.verification import verify_corpus
from stwa.conf import stwa_setting
from wa_index.index import MODES


class Command(BaseCommand):
    help = 'Check substring loci against a naive walk and run the structural invariant checks'

    def add_arguments(self, parser):
        parser.add_argument('text_file', nargs='?', help='Text to verify; the bundled corpora when omitted')
        parser.add_argument('--max-n', type=int, default=512, help='Truncate texts to this many symbols')
        parser.add_argument('--mode', choices=MODES, action='append', help='Modes to check (default: all)')
        parser.add_argument('--corpus', choices=sorted(CORPORA), action='append',
                            help='Bundled corpora to check (default: all)')
        parser.add_argument('--samples', type=int, default=2000,
                            help='Sampled queries for texts above the exhaustive limit')

    def handle(self, *args, **options):
        max_n = options['max_n']
        if max_n < 1:
            raise CommandError('--max-n must be positive', returncode=2)
        if options['text_file']:
            try:
                texts = [(options['text_file'], Path(options['text_file']).read_bytes()[:max_n])]
            except OSError as e:
                raise CommandError(f"Cannot read {options['text_file']}: {e}", returncode=2)
        else:
            texts = list(bundled_corpora(max_n, names=options['corpus']))

        failures = 0
        runs = [(name, text, mode) for name, text in texts for mode in options['mode'] or MODES]
        for name, text, mode in tqdm(runs, desc='verify', disable=not stwa_setting('SHOW_PROGRESS')):
            if not text:
                self.stderr.write(f'{name}: empty text, skipped')
                continue
            report = verify_corpus(text, mode, name=name, samples=options['samples'])
            if report.passed:
                self.stdout.write(
                    f'{name} ({mode}, n={report.text_length}): {report.queries} queries ok, '
                    f'max probes {report.max_probes}'
                )
                continue
            failures += 1
            self.stdout.write(self.style.ERROR(
                f'{name} ({mode}, n={report.text_length}): {report.mismatch_count} mismatches, '
                f'{len(report.problems)} invariant problems'
            ))
            for line in report.mismatches + report.problems:
                self.stdout.write(f'  {line}')

        if failures:
            raise CommandError(f'{failures} of {len(runs)} verification runs failed', returncode=1)
        self.stdout.write(self.style.SUCCESS(f'All {len(runs)} verification runs passed'))
