"""Frequent pattern mining over a training corpus.

Tokens are counted, split into four clusters by length and frequency, and
only the frequent-long cluster (plus domain keywords) is kept as candidate
patterns for the dictionary.
"""

import concurrent.futures
import logging
from collections import Counter
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .exceptions import RejectedKeywordError
from .tokenizer import is_token, iter_tokens

logger = logging.getLogger(__name__)

# 254 two-byte slots + 65536 four-byte slots
MAX_DICTIONARY_ENTRIES = 65790
MAX_PATTERN_LENGTH = 0xFFFF

KEYWORDS_DIR = Path(__file__).resolve().parent.parent / "data" / "keywords"
PACKAGED_KEYWORDS = KEYWORDS_DIR / "computer_science.txt"


class Cluster(str, Enum):
    INFREQUENT_SHORT = "infrequent-short"
    INFREQUENT_LONG = "infrequent-long"
    FREQUENT_SHORT = "frequent-short"
    FREQUENT_LONG = "frequent-long"


class MiningParams(BaseModel):
    """Length and frequency thresholds for the clustering step."""

    model_config = ConfigDict(frozen=True)

    min_length: int = Field(3, ge=3, le=MAX_PATTERN_LENGTH)
    min_frequency: int = Field(10, ge=1)
    max_entries: int = Field(MAX_DICTIONARY_ENTRIES, ge=0, le=MAX_DICTIONARY_ENTRIES)


class PatternStats(NamedTuple):
    token: bytes
    count: int
    cluster: Cluster


def _count_text(text: bytes) -> Counter:
    return Counter(iter_tokens(text))


def count_tokens(corpus: Iterable[bytes], max_workers: int = 1) -> Dict[bytes, int]:
    """Count token occurrences across every text of the corpus.

    With ``max_workers > 1`` the texts are counted in a thread pool and the
    partial counts merged; the result does not depend on the worker count.
    """
    texts = list(corpus)
    totals: Counter = Counter()
    if max_workers <= 1 or len(texts) <= 1:
        for text in texts:
            totals.update(_count_text(text))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
            for partial in executor.map(_count_text, texts):
                totals.update(partial)
    logger.debug(f"Counted {sum(totals.values())} tokens ({len(totals)} distinct) in {len(texts)} texts")
    return dict(totals)


def classify(counts: Dict[bytes, int], params: MiningParams) -> List[PatternStats]:
    """Label every token with exactly one of the four clusters."""
    stats = []
    for token, count in counts.items():
        frequent = count >= params.min_frequency
        long = len(token) >= params.min_length
        if frequent:
            cluster = Cluster.FREQUENT_LONG if long else Cluster.FREQUENT_SHORT
        else:
            cluster = Cluster.INFREQUENT_LONG if long else Cluster.INFREQUENT_SHORT
        stats.append(PatternStats(token, count, cluster))
    return stats


def cluster_summary(stats: Iterable[PatternStats]) -> Dict[Cluster, int]:
    """Number of distinct tokens per cluster."""
    summary = {cluster: 0 for cluster in Cluster}
    for item in stats:
        summary[item.cluster] += 1
    return summary


def check_keyword(keyword: bytes, params: MiningParams, line: Optional[int] = None) -> None:
    if not is_token(keyword):
        raise RejectedKeywordError(keyword, "not a single token of [A-Za-z0-9_]", line)
    if len(keyword) < params.min_length:
        raise RejectedKeywordError(keyword, f"shorter than {params.min_length} bytes", line)
    if len(keyword) > MAX_PATTERN_LENGTH:
        raise RejectedKeywordError(keyword, f"longer than {MAX_PATTERN_LENGTH} bytes", line)


def _rank_key(item: Tuple[bytes, int]):
    token, count = item
    # savings = count x (length - 2-byte replacement)
    return (-count * (len(token) - 2), -count, token)


def select_patterns(
    stats: Iterable[PatternStats],
    keywords: Sequence[bytes],
    params: MiningParams,
) -> List[Tuple[bytes, int]]:
    """Rank the frequent-long tokens together with the domain keywords.

    Keywords are kept whether or not the corpus contains them; their count is
    raised to ``min_frequency`` so they rank below genuinely frequent tokens.

    Raises:
        RejectedKeywordError: If a keyword is not a single token of at least
            ``min_length`` bytes.
    """
    observed: Dict[bytes, int] = {}
    selected: Dict[bytes, int] = {}
    for item in stats:
        observed[item.token] = item.count
        if item.cluster is Cluster.FREQUENT_LONG:
            selected[item.token] = item.count

    for keyword in keywords:
        check_keyword(keyword, params)
        selected[keyword] = max(observed.get(keyword, 0), params.min_frequency)

    ranked = sorted(selected.items(), key=_rank_key)
    if len(ranked) > params.max_entries:
        logger.info(f"Truncating {len(ranked)} candidate patterns to {params.max_entries}")
        ranked = ranked[:params.max_entries]
    return ranked


def mine(
    corpus: Iterable[bytes],
    keywords: Sequence[bytes] = (),
    params: Optional[MiningParams] = None,
    max_workers: int = 1,
) -> Tuple[List[Tuple[bytes, int]], List[PatternStats]]:
    """Count, classify and select in one go; returns (ranked, stats)."""
    params = params or MiningParams()
    stats = classify(count_tokens(corpus, max_workers=max_workers), params)
    ranked = select_patterns(stats, keywords, params)
    summary = cluster_summary(stats)
    logger.info(
        "Clusters: "
        + ", ".join(f"{cluster.value}={n}" for cluster, n in summary.items())
        + f"; selected {len(ranked)} patterns"
    )
    return ranked, stats


def load_keywords(path: Union[str, Path], params: Optional[MiningParams] = None) -> List[bytes]:
    """Read a keyword file: one keyword per line, blank and ``#`` lines ignored.

    Raises:
        RejectedKeywordError: On the first invalid line, with its line number.
    """
    params = params or MiningParams()
    with open(path, "rb") as f:
        raw = f.read()

    keywords = []
    for lineno, line in enumerate(raw.split(b"\n"), start=1):
        if line.endswith(b"\r"):
            line = line[:-1]
        if not line.strip() or line.startswith(b"#"):
            continue
        check_keyword(line, params, line=lineno)
        keywords.append(line)
    return keywords


def packaged_keywords(params: Optional[MiningParams] = None) -> List[bytes]:
    """The bundled computer-science keyword list.

    Entries shorter than ``params.min_length`` are skipped rather than
    rejected: the list is shipped with the package, not chosen by the caller.
    """
    keywords = load_keywords(PACKAGED_KEYWORDS)
    if params is None:
        return keywords
    kept = [keyword for keyword in keywords if len(keyword) >= params.min_length]
    if len(kept) < len(keywords):
        logger.info(f"Skipped {len(keywords) - len(kept)} packaged keywords shorter than {params.min_length} bytes")
    return kept
