import io
import random
import unittest
from collections import Counter

from pydantic import ValidationError

from hierarchical_huffman.core import bench
from hierarchical_huffman.core.bench import (
    BenchRecord,
    BenchSettings,
    GridPoint,
    SweepSpec,
    SynthParams,
    build_grid,
    critical_point,
    cumulative_bytes,
    gen_synthetic,
    make_keywords,
    mean_row,
    measure,
    plant_keywords,
    write_csv,
)
from hierarchical_huffman.core.dictionary import EMPTY_DICTIONARY, Dictionary
from hierarchical_huffman.core.exceptions import DegenerateInputError


def linear_critical_point(dict_size, hh_size, ch_size, limit=100_000):
    for downloads in range(1, limit):
        if downloads * hh_size + dict_size < downloads * ch_size:
            return downloads
    return None


class TestMetrics(unittest.TestCase):

    def test_record_metrics(self):
        record = BenchRecord(input_size=1000, hh_size=400, ch_size=500, dict_size=0)
        self.assertAlmostEqual(record.perf_hh, 0.4)
        self.assertAlmostEqual(record.perf_ch, 0.5)
        self.assertAlmostEqual(record.compression_ratio, 0.8)

    def test_critical_point_examples(self):
        self.assertEqual(critical_point(1000, 4000, 5000), 2)
        self.assertEqual(critical_point(0, 400, 500), 1)
        self.assertIsNone(critical_point(1000, 500, 500))
        self.assertIsNone(critical_point(1000, 600, 500))

    def test_critical_point_matches_linear_search(self):
        rng = random.Random(8)
        for _ in range(1000):
            dict_size = rng.randint(0, 5000)
            hh_size = rng.randint(1, 2000)
            ch_size = rng.randint(1, 2000)
            expected = linear_critical_point(dict_size, hh_size, ch_size) if ch_size > hh_size else None
            self.assertEqual(critical_point(dict_size, hh_size, ch_size), expected)

    def test_ratio_is_perf_quotient(self):
        rng = random.Random(12)
        for _ in range(1000):
            record = BenchRecord(
                input_size=rng.randint(1, 10**7),
                hh_size=rng.randint(1, 10**7),
                ch_size=rng.randint(1, 10**7),
                dict_size=rng.randint(0, 10**6),
            )
            self.assertLessEqual(abs(record.compression_ratio - record.perf_hh / record.perf_ch), 1e-12)

    def test_cumulative_bytes(self):
        record = BenchRecord(input_size=1000, hh_size=4000, ch_size=5000, dict_size=1000)
        self.assertEqual(cumulative_bytes(record, 1), (5000, 5000))
        self.assertEqual(cumulative_bytes(record, 2), (9000, 10000))

    def test_measure_empty_input(self):
        with self.assertRaises(DegenerateInputError):
            measure(b"", EMPTY_DICTIONARY)

    def test_measure_without_matches(self):
        record = measure(b"nothing in here matches at all " * 20, Dictionary((b"tree",)))
        self.assertEqual(record.hh_size, record.ch_size)
        self.assertEqual(record.compression_ratio, 1.0)
        self.assertIsNone(record.critical_point)

    def test_measure_with_matches(self):
        text = b"algorithm kernel compiler " * 500
        record = measure(text, Dictionary((b"algorithm", b"compiler", b"kernel")))
        self.assertLess(record.compression_ratio, 1.0)
        self.assertEqual(record.dict_size, len(Dictionary((b"algorithm", b"compiler", b"kernel")).blob))
        self.assertIsNotNone(record.critical_point)


class TestSynthetic(unittest.TestCase):

    def test_size_zero(self):
        self.assertEqual(gen_synthetic(SynthParams(size=0, keyword_density=0.0)), b"")

    def test_deterministic(self):
        params = SynthParams(size=20000, seed=5, keywords=(b"algorithm", b"kernel"))
        self.assertEqual(gen_synthetic(params), gen_synthetic(params))
        other = SynthParams(size=20000, seed=6, keywords=(b"algorithm", b"kernel"))
        self.assertNotEqual(gen_synthetic(params), gen_synthetic(other))

    def test_only_keyword(self):
        text = gen_synthetic(SynthParams(size=100, keywords=(b"tree",), keyword_density=1.0))
        self.assertEqual(text, b" ".join([b"tree"] * 20))

    def test_never_exceeds_size(self):
        for size in (1, 7, 100, 5000):
            text = gen_synthetic(SynthParams(size=size, keyword_density=0.0))
            self.assertLessEqual(len(text), size)

    def test_fills_close_to_size(self):
        rng = random.Random(21)
        keywords = (b"algorithm", b"kernel", b"polymorphism")
        longest = max(bench.FILLER_MAX_LENGTH, max(len(k) for k in keywords))
        for _ in range(200):
            size = rng.randint(1, 20_000)
            params = SynthParams(size=size, seed=rng.randint(0, 2**32), keywords=keywords,
                                 keyword_density=rng.random())
            self.assertGreaterEqual(len(gen_synthetic(params)), size - longest)

    def test_zipf_rank_order(self):
        keywords = (b"alpha", b"bravo", b"charlie", b"delta")
        text = gen_synthetic(SynthParams(size=100_000, keywords=keywords, keyword_density=0.5))
        counts = Counter(text.split(b" "))
        self.assertGreater(counts[b"alpha"], counts[b"delta"])

    def test_density_requires_keywords(self):
        with self.assertRaises(ValidationError):
            SynthParams(size=10, keyword_density=0.5)

    def test_make_keywords(self):
        keywords = make_keywords(50, 7, seed=3)
        self.assertEqual(len(set(keywords)), 50)
        self.assertTrue(all(len(k) == 7 for k in keywords))
        self.assertEqual(keywords, make_keywords(50, 7, seed=3))
        with self.assertRaises(ValueError):
            make_keywords(30, 1, seed=3)

    def test_plant_keywords_exact_frequency(self):
        # keywords longer than any filler token cannot collide with it
        keywords = make_keywords(10, 12, seed=1)
        text = plant_keywords(50_000, 1, keywords, 25)
        counts = Counter(text.split(b" "))
        for keyword in keywords:
            self.assertEqual(counts[keyword], 25)
        self.assertLessEqual(len(text), 50_000)


class TestSweep(unittest.TestCase):

    def setUp(self):
        self.spec = SweepSpec(keywords_per_point=5, keywords=(b"algorithm", b"kernel", b"compiler"))

    def test_build_grid(self):
        grid = build_grid([100, 200], [3, 5], [10])
        self.assertEqual(
            grid,
            [GridPoint(100, 3, 10), GridPoint(100, 5, 10), GridPoint(200, 3, 10), GridPoint(200, 5, 10)],
        )
        self.assertEqual(build_grid([100]), [GridPoint(100)])
        self.assertFalse(GridPoint(100).planted)

    def test_sweep_rows_in_grid_order(self):
        grid = build_grid([20_000]) + build_grid([20_000, 30_000], [10], [10, 20])
        serial = bench.sweep(grid, self.spec, max_workers=1)
        parallel = bench.sweep(grid, self.spec, max_workers=3)
        self.assertEqual(serial, parallel)
        self.assertEqual([(r["input_size"], r["pattern_len"], r["pattern_freq"]) for r in serial],
                         [(p.input_size, p.pattern_len, p.pattern_freq) for p in grid])

    def test_replicates_average_seeds(self):
        point = GridPoint(20_000, 10, 20)
        averaged = bench.run_point(point, self.spec.model_copy(update={"replicates": 3}))
        singles = [bench.run_point(point, self.spec.model_copy(update={"seed": seed})) for seed in (1, 2, 3)]
        self.assertAlmostEqual(averaged["ratio"], sum(r["ratio"] for r in singles) / 3, places=12)
        self.assertAlmostEqual(averaged["perf_hh"], sum(r["perf_hh"] for r in singles) / 3, places=12)
        self.assertEqual(averaged["hh_size"], round(sum(r["hh_size"] for r in singles) / 3))
        self.assertEqual((averaged["pattern_len"], averaged["pattern_freq"]), (10, 20))

    def test_single_replicate_matches_record(self):
        record = BenchRecord(1000, 400, 500, 100, critical_point=critical_point(100, 400, 500))
        self.assertEqual(mean_row([record], 5, 50), record.to_row(5, 50))

    def test_mean_row_critical_point_from_mean_sizes(self):
        records = [BenchRecord(1000, 400, 500, 100), BenchRecord(1000, 600, 500, 100)]
        row = mean_row(records)
        self.assertEqual((row["hh_size"], row["ch_size"]), (500, 500))
        self.assertIsNone(row["critical_point"])
        self.assertAlmostEqual(row["ratio"], (0.8 + 1.2) / 2)

    def test_empty_grid(self):
        with self.assertRaises(ValueError):
            bench.sweep([], self.spec)

    def test_write_csv(self):
        record = BenchRecord(1000, 400, 500, 100, critical_point=critical_point(100, 400, 500))
        no_gain = BenchRecord(1000, 500, 500, 100)
        out = io.StringIO()
        write_csv([record.to_row(), no_gain.to_row(5, 50)], out)
        self.assertEqual(
            out.getvalue().splitlines(),
            [
                ",".join(bench.CSV_FIELDS),
                "1000,,,100,400,500,0.400000,0.500000,0.800000,2",
                "1000,5,50,100,500,500,0.500000,0.500000,1.000000,",
            ],
        )


class TestBenchSettings(unittest.TestCase):

    def test_grid_zipf_points_first(self):
        settings = BenchSettings(sizes=[1000, 2000], pattern_lengths=[6], pattern_frequencies=[10])
        self.assertEqual(
            settings.grid(),
            [GridPoint(1000), GridPoint(2000), GridPoint(1000, 6, 10), GridPoint(2000, 6, 10)],
        )

    def test_rejects_unusable_sections(self):
        for bad in (
            {"sizes": []},
            {"sizes": [0]},
            {"pattern_lengths": [1]},
            {"pattern_frequencies": [-3]},
            {"replicates": 0},
            {"max_workers": 0},
            {"sizes": [1000], "unknown": True},
        ):
            with self.subTest(section=bad):
                with self.assertRaises(ValidationError):
                    BenchSettings(**bad)

    def test_short_lengths_with_few_keywords(self):
        settings = BenchSettings(pattern_lengths=[1], pattern_frequencies=[10], keywords_per_point=26)
        self.assertEqual(len(settings.grid()), 2)


if __name__ == "__main__":
    unittest.main()
