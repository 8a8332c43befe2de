from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from cli.models import IndexBuild
from stwa.exceptions import InvalidArgument
from wa_index.index import MODES, STANDARD, build_index
from wa_index.stats import index_stats
from wa_index.storage import save_index


class Command(BaseCommand):
    help = 'Build a substring locus index over a text file and write it to disk'

    def add_arguments(self, parser):
        parser.add_argument('text_file', type=str, help='Text to index, read as raw bytes')
        parser.add_argument('-o', '--output', required=True, help='Index file to write')
        parser.add_argument('--mode', choices=MODES, default=STANDARD)
        parser.add_argument('--stats', type=str, help='Write build statistics as JSON to this file')
        parser.add_argument('--record', action='store_true', help='Store the build in the registry')

    def handle(self, *args, **options):
        try:
            text = Path(options['text_file']).read_bytes()
        except OSError as e:
            raise CommandError(f"Cannot read {options['text_file']}: {e}", returncode=2)

        try:
            index = build_index(text, options['mode'])
        except InvalidArgument as e:
            raise CommandError(f'Cannot index {options["text_file"]}: {e}', returncode=2)

        try:
            size = save_index(index, options['output'])
            stats = index_stats(index)
            if options['stats']:
                Path(options['stats']).write_text(stats.model_dump_json(indent=2))
        except OSError as e:
            raise CommandError(f'Cannot write output: {e}', returncode=2)

        if options['record']:
            IndexBuild.objects.create(
                index_path=options['output'],
                mode=index.mode,
                text_length=index.n,
                total_words=stats.total_words,
            )

        self.stdout.write(
            self.style.SUCCESS(
                f"Built {index.mode} index over {index.n} symbols: {len(index.slots)} instances, "
                f"{stats.total_words} words, {size} bytes -> {options['output']}"
            )
        )
