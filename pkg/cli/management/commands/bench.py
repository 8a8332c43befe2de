from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from cli.models import IndexBuild
from cli.runner import read_batch
from stwa.exceptions import IndexFormatError, InvalidArgument
from stwa.probes import measure
from wa_index.stats import bench_report
from wa_index.storage import load_index


class Command(BaseCommand):
    help = 'Count structure probes per query and report the space of every component'

    def add_arguments(self, parser):
        parser.add_argument('index_file', type=str)
        parser.add_argument('--pairs', required=True)
        parser.add_argument('--json', type=str, help='Write the report to this file instead of stdout')
        parser.add_argument('--record', action='store_true', help='Update the registry entry of this index')

    def handle(self, *args, **options):
        try:
            index = load_index(options['index_file'])
        except (OSError, IndexFormatError) as e:
            raise CommandError(f"Cannot load {options['index_file']}: {e}", returncode=2)
        batch = read_batch(options['pairs'])
        for number, message in batch.errors:
            self.stderr.write(f'line {number}: {message}')

        counts = []
        failures = len(batch.errors)
        for number, i, j in batch.pairs:
            try:
                with measure() as spent:
                    index.substring_locus(i, j)
            except InvalidArgument as e:
                self.stderr.write(f'line {number}: {e}')
                failures += 1
                continue
            counts.append(spent[0])

        report = bench_report(index, counts, failures)
        if options['json']:
            try:
                Path(options['json']).write_text(report.model_dump_json(indent=2))
            except OSError as e:
                raise CommandError(f'Cannot write {options["json"]}: {e}', returncode=2)
        else:
            self.stdout.write(report.model_dump_json(indent=2))

        if options['record']:
            updated = IndexBuild.objects.filter(index_path=options['index_file']).update(max_probes=report.max_probes)
            if not updated:
                self.stderr.write(f"No registry entry for {options['index_file']}")
