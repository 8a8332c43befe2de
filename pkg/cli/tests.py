import json
import tempfile
import threading
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from stwa.exceptions import InvariantViolation
from stwa.probes import measure, tick
from wa_index.index import COMPACT, WaIndex, build_index

from .corpora import CORPORA, bundled_corpora, cycle_family, cycle_text, fibonacci_word
from .models import IndexBuild
from .runner import answer_pairs, locus_row, parse_pairs, run_cli
from .verification import VerificationReport, query_pairs, verify_corpus


class CorporaTests(SimpleTestCase):
    def test_generators(self):
        self.assertEqual(fibonacci_word(8), b'abaababa')
        self.assertEqual(len(cycle_family()), 8)
        self.assertEqual(cycle_family()[0], b'aaaaaaab' * 4)
        self.assertEqual(len(cycle_text(256)), 256)
        self.assertEqual(len(cycle_text(1000)), 1000)
        for name, text in bundled_corpora(50):
            self.assertEqual(len(text), 50, name)
        self.assertEqual(len(list(bundled_corpora(10, names=['constant']))), 1)
        self.assertEqual(set(dict(bundled_corpora(12))), set(CORPORA))


class RunnerTests(SimpleTestCase):
    def test_parse_pairs(self):
        batch = parse_pairs(['1 4', '', '# comment', '2 x', '3', '  5 6  '])
        self.assertEqual(batch.pairs, [(1, 1, 4), (6, 5, 6)])
        self.assertEqual([number for number, _ in batch.errors], [4, 5])

    def test_answers_keep_input_order(self):
        index = build_index(fibonacci_word(80))
        pairs = [(n, 1 + n % 40, 40 + n % 37) for n in range(200)] + [(200, 5, 99)]
        serial = answer_pairs(index, pairs, workers=1)
        parallel = answer_pairs(index, pairs, workers=4)
        self.assertEqual(serial[:-1], parallel[:-1])
        self.assertIsInstance(parallel[-1], Exception)

    def test_counts_are_per_thread(self):
        worker = threading.Thread(target=lambda: [tick() for _ in range(500)])
        with measure() as spent:
            worker.start()
            worker.join()
            tick(3)
        self.assertEqual(spent[0], 3)

    def test_locus_row(self):
        index = build_index('abracadabra')
        locus = index.substring_locus(1, 4)
        self.assertEqual(locus_row(1, 4, locus), f'1\t4\texplicit\t{locus.node}\t4')
        self.assertEqual(locus_row(1, 4, locus, [1, 8]), f'1\t4\texplicit\t{locus.node}\t4\t1,8')


class VerificationTests(SimpleTestCase):
    def test_abracadabra_passes(self):
        for mode in ('standard', COMPACT):
            report = verify_corpus(b'abracadabra', mode)
            self.assertTrue(report.passed, report.mismatches + report.problems)
            self.assertEqual(report.queries, 66)

    def test_query_failures_are_recorded(self):
        broken = InvariantViolation('floor 3 has no master node')
        original = WaIndex.substring_locus

        def flaky(index, i, j):
            if (i, j) == (2, 9):
                raise broken
            return original(index, i, j)

        with mock.patch.object(WaIndex, 'substring_locus', autospec=True, side_effect=flaky):
            report = verify_corpus(b'abracadabra', COMPACT)
        self.assertFalse(report.passed)
        self.assertEqual(report.mismatch_count, 0)
        self.assertIn('[2, 9]: floor 3 has no master node', report.problems)

    def test_build_invariant_problems_are_reported(self):
        with mock.patch.object(WaIndex, 'invariant_problems', return_value=['instance (0, 8): level 1: cost 9']):
            report = verify_corpus(b'abracadabra', 'standard', round_trip=False)
        self.assertEqual(report.problems, ['instance (0, 8): level 1: cost 9'])

    def test_bundled_corpora_pass(self):
        for name, text in bundled_corpora(40):
            report = verify_corpus(text, COMPACT, name=name, round_trip=False)
            self.assertTrue(report.passed, f'{name}: {report.mismatches + report.problems}')

    def test_sampled_pairs(self):
        self.assertEqual(len(query_pairs(10)), 55)
        pairs = query_pairs(1000, samples=50)
        self.assertEqual(len(pairs), 50)
        self.assertTrue(all(1 <= i <= j <= 1000 for i, j in pairs))


class CommandTests(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.text_file = self.dir / 'text.txt'
        self.text_file.write_bytes(b'abracadabra')
        self.index_file = self.dir / 'text.stwa'
        self.pairs_file = self.dir / 'pairs.txt'

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue(), err.getvalue()

    def build(self, *extra):
        return self.call('build', str(self.text_file), '-o', str(self.index_file), *extra)

    def test_build_then_query(self):
        stats_file = self.dir / 'stats.json'
        self.build('--stats', str(stats_file))
        stats = json.loads(stats_file.read_text())
        self.assertEqual(stats['text_length'], 11)
        self.assertIn('suffix_tree', stats['components'])

        self.pairs_file.write_text('1 4\n5 7\n')
        out, _ = self.call('query', str(self.index_file), '--pairs', str(self.pairs_file))
        index = build_index(b'abracadabra')
        abra = index.substring_locus(1, 4)
        cad = index.substring_locus(5, 7)
        self.assertEqual(out.splitlines(), [
            f'1\t4\texplicit\t{abra.node}\t4',
            f'5\t7\timplicit\t{cad.node}\t3',
        ])

    def test_query_reports_occurrences_and_bad_lines(self):
        self.build('--mode', COMPACT)
        self.pairs_file.write_text('1 4\n0 3\nfoo\n')
        out, err = self.call('query', str(self.index_file), '--pairs', str(self.pairs_file),
                             '--report-occurrences')
        lines = out.splitlines()
        self.assertTrue(lines[0].endswith('\t4\t1,8'))
        self.assertTrue(lines[1].startswith('0\t3\terror\t'))
        self.assertIn('line 2', err)
        self.assertIn('line 3', err)

    def test_query_output_is_deterministic(self):
        self.text_file.write_bytes(fibonacci_word(120))
        self.build()
        self.pairs_file.write_text(''.join(f'{i} {i + 30}\n' for i in range(1, 90)))
        first, _ = self.call('query', str(self.index_file), '--pairs', str(self.pairs_file), '--workers', '3')
        second, _ = self.call('query', str(self.index_file), '--pairs', str(self.pairs_file))
        self.assertEqual(first, second)

    def test_query_without_any_good_line(self):
        self.build()
        self.pairs_file.write_text('0 99\n')
        with self.assertRaises(CommandError) as caught:
            self.call('query', str(self.index_file), '--pairs', str(self.pairs_file))
        self.assertEqual(caught.exception.returncode, 2)

    def test_io_errors_exit_with_two(self):
        with self.assertRaises(CommandError) as caught:
            self.call('build', str(self.dir / 'missing.txt'), '-o', str(self.index_file))
        self.assertEqual(caught.exception.returncode, 2)
        (self.dir / 'junk.stwa').write_bytes(b'junk')
        self.pairs_file.write_text('1 1\n')
        with self.assertRaises(CommandError) as caught:
            self.call('query', str(self.dir / 'junk.stwa'), '--pairs', str(self.pairs_file))
        self.assertEqual(caught.exception.returncode, 2)

    def test_verify(self):
        out, _ = self.call('verify', str(self.text_file))
        self.assertIn('All 2 verification runs passed', out)
        out, _ = self.call('verify', '--max-n', '32', '--corpus', 'fibonacci', '--corpus', 'cycle-family')
        self.assertIn('All 4 verification runs passed', out)

    def test_verify_failure_exits_with_one(self):
        failing = VerificationReport(name='text', mode='standard', text_length=11, mismatch_count=1,
                                     mismatches=['[1, 4]: wrong'])
        with mock.patch('cli.management.commands.verify.verify_corpus', return_value=failing):
            with self.assertRaises(CommandError) as caught:
                self.call('verify', str(self.text_file), '--mode', 'standard')
        self.assertEqual(caught.exception.returncode, 1)

    def test_registry_and_bench(self):
        self.build('--record')
        build = IndexBuild.objects.get(index_path=str(self.index_file))
        self.assertEqual(build.text_length, 11)
        self.assertIsNone(build.max_probes)

        self.pairs_file.write_text('1 11\n2 9\n3 3\n')
        out, _ = self.call('bench', str(self.index_file), '--pairs', str(self.pairs_file), '--record')
        report = json.loads(out)
        self.assertEqual(report['queries'], 3)
        self.assertEqual(sum(report['probe_histogram']), 3)
        build.refresh_from_db()
        self.assertEqual(build.max_probes, report['max_probes'])

    def test_run_cli_exit_codes(self):
        err = StringIO()
        self.assertEqual(run_cli(['verify', str(self.text_file)], stdout=StringIO(), stderr=err), 0)
        self.assertEqual(run_cli(['query', str(self.dir / 'none.stwa'), '--pairs', 'x'],
                                 stdout=StringIO(), stderr=err), 2)
        self.assertEqual(run_cli(['serve'], stdout=StringIO(), stderr=err), 2)
        self.assertEqual(run_cli([], stdout=StringIO(), stderr=err), 2)
        self.assertIn('usage', err.getvalue())

