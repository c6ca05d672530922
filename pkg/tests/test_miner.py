import os
import random
import tempfile
import unittest
from collections import Counter

from pydantic import ValidationError

from hierarchical_huffman.core.exceptions import RejectedKeywordError
from hierarchical_huffman.core.miner import (
    MAX_DICTIONARY_ENTRIES,
    Cluster,
    MiningParams,
    classify,
    cluster_summary,
    count_tokens,
    load_keywords,
    mine,
    packaged_keywords,
    select_patterns,
)
from hierarchical_huffman.core.tokenizer import iter_tokens


class TestMiner(unittest.TestCase):

    def setUp(self):
        self.params = MiningParams(min_length=3, min_frequency=2)

    def test_count_tokens(self):
        counts = count_tokens([b"tree tree, a tree", b"tree house"])
        self.assertEqual(counts, {b"tree": 4, b"a": 1, b"house": 1})

    def test_count_tokens_agrees_with_tokenizer(self):
        rng = random.Random(5)
        texts = [bytes(rng.choices(b"ab_ \n+\x1b", k=rng.randint(0, 400))) for _ in range(20)]
        expected = Counter(token for text in texts for token in iter_tokens(text))
        self.assertEqual(count_tokens(texts), dict(expected))

    def test_count_tokens_worker_independent(self):
        corpus = [b"alpha beta gamma alpha"] * 5 + [b"beta delta"] * 3
        self.assertEqual(count_tokens(corpus, max_workers=1), count_tokens(corpus, max_workers=4))

    def test_clusters_partition_tokens(self):
        counts = {b"ab": 5, b"cd": 1, b"tree": 5, b"house": 1}
        stats = {s.token: s.cluster for s in classify(counts, self.params)}
        self.assertEqual(stats[b"ab"], Cluster.FREQUENT_SHORT)
        self.assertEqual(stats[b"cd"], Cluster.INFREQUENT_SHORT)
        self.assertEqual(stats[b"tree"], Cluster.FREQUENT_LONG)
        self.assertEqual(stats[b"house"], Cluster.INFREQUENT_LONG)
        self.assertEqual(sum(cluster_summary(classify(counts, self.params)).values()), 4)

    def test_only_frequent_long_selected(self):
        ranked, _stats = mine([b"ab ab ab tree tree house"], params=self.params)
        self.assertEqual(ranked, [(b"tree", 2)])

    def test_ranking_by_savings(self):
        # savings: tree 4*2=8, house 3*3=9, graph 2*3=6
        text = b"tree tree tree tree house house house graph graph"
        ranked, _stats = mine([text], params=self.params)
        self.assertEqual([p for p, _ in ranked], [b"house", b"tree", b"graph"])

    def test_ties_broken_by_count_then_bytes(self):
        text = b"wxyz wxyz wxyz hello hello"
        ranked, _stats = mine([text], params=self.params)
        # wxyz 3*2=6, hello 2*3=6 -> higher count first
        self.assertEqual([p for p, _ in ranked], [b"wxyz", b"hello"])
        text = b"bbbb bbbb aaaa aaaa"
        ranked, _stats = mine([text], params=self.params)
        self.assertEqual([p for p, _ in ranked], [b"aaaa", b"bbbb"])

    def test_keyword_appended_when_absent(self):
        ranked, _stats = mine([b"tree tree tree"], keywords=[b"algorithm"], params=self.params)
        self.assertIn((b"algorithm", 2), ranked)

    def test_keyword_count_floor(self):
        params = MiningParams(min_length=3, min_frequency=10)
        ranked, _stats = mine([b"graph " * 3], keywords=[b"graph"], params=params)
        self.assertEqual(ranked, [(b"graph", 10)])
        ranked, _stats = mine([b"graph " * 30], keywords=[b"graph"], params=params)
        self.assertEqual(ranked, [(b"graph", 30)])

    def test_keyword_not_duplicated(self):
        ranked, _stats = mine([b"tree tree tree"], keywords=[b"tree", b"tree"], params=self.params)
        self.assertEqual(ranked, [(b"tree", 3)])

    def test_rejected_keywords(self):
        with self.assertRaises(RejectedKeywordError):
            mine([b""], keywords=[b"ab"], params=self.params)
        with self.assertRaises(RejectedKeywordError):
            mine([b""], keywords=[b"two words"], params=self.params)

    def test_empty_corpus(self):
        ranked, stats = mine([], params=self.params)
        self.assertEqual(ranked, [])
        self.assertEqual(stats, [])

    def test_max_entries_truncates(self):
        params = MiningParams(min_length=3, min_frequency=1, max_entries=2)
        ranked, _stats = mine([b"aaaa bbbb cccc"], params=params)
        self.assertEqual(len(ranked), 2)

    def test_deterministic(self):
        corpus = [b"zeta alpha beta alpha zeta gamma zeta"] * 4
        self.assertEqual(mine(corpus, params=self.params)[0], mine(corpus, params=self.params)[0])

    def test_params_validation(self):
        with self.assertRaises(ValidationError):
            MiningParams(min_length=2)
        with self.assertRaises(ValidationError):
            MiningParams(min_frequency=0)
        with self.assertRaises(ValidationError):
            MiningParams(max_entries=MAX_DICTIONARY_ENTRIES + 1)

    def test_load_keywords(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "kw.txt")
            with open(path, "wb") as f:
                f.write(b"# comment\nalgorithm\r\n\nkernel\n")
            self.assertEqual(load_keywords(path), [b"algorithm", b"kernel"])

    def test_load_keywords_reports_line(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "kw.txt")
            with open(path, "wb") as f:
                f.write(b"algorithm\nbad word\n")
            with self.assertRaises(RejectedKeywordError) as ctx:
                load_keywords(path)
            self.assertEqual(ctx.exception.line, 2)

    def test_packaged_keywords(self):
        keywords = packaged_keywords()
        self.assertGreater(len(keywords), 50)
        self.assertEqual(len(set(keywords)), len(keywords))
        self.assertTrue(all(len(k) >= 3 for k in keywords))

    def test_packaged_keywords_filtered_by_min_length(self):
        everything = packaged_keywords()
        with self.assertLogs("hierarchical_huffman.core.miner", level="INFO") as logs:
            long_only = packaged_keywords(MiningParams(min_length=5))
        self.assertEqual(long_only, [k for k in everything if len(k) >= 5])
        self.assertLess(len(long_only), len(everything))
        self.assertIn("Skipped", logs.output[0])
        ranked, _stats = mine([b""], long_only, MiningParams(min_length=5))
        self.assertEqual({p for p, _count in ranked}, set(long_only))


if __name__ == "__main__":
    unittest.main()
