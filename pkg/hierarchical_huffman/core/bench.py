"""Benchmark harness: size metrics, download critical point, parameter sweeps.

Sizes are always whole containers (header and table included) for both the
two-level and the Huffman-only pipeline, so framing cancels out of the ratio.

Synthetic corpora use Python's ``random.Random`` (Mersenne Twister MT19937)
seeded with the given seed; identical seeds produce identical bytes.
"""

import concurrent.futures
import csv
import itertools
import logging
import random
import statistics
import string
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from .container import compress
from .dictionary import Dictionary
from .exceptions import DegenerateInputError
from .miner import MiningParams, mine

logger = logging.getLogger(__name__)

CSV_FIELDS = [
    "input_size",
    "pattern_len",
    "pattern_freq",
    "dict_size",
    "hh_size",
    "ch_size",
    "perf_hh",
    "perf_ch",
    "ratio",
    "critical_point",
]

FILLER_ALPHABET = string.ascii_lowercase
FILLER_MIN_LENGTH = 2
FILLER_MAX_LENGTH = 8


@dataclass(frozen=True)
class BenchRecord:
    input_size: int
    hh_size: int
    ch_size: int
    dict_size: int
    critical_point: Optional[int] = None

    @property
    def perf_hh(self) -> float:
        return self.hh_size / self.input_size

    @property
    def perf_ch(self) -> float:
        return self.ch_size / self.input_size

    @property
    def compression_ratio(self) -> float:
        """Two-level size over Huffman-only size; lower is better."""
        return self.hh_size / self.ch_size

    def to_row(self, pattern_len: Optional[int] = None, pattern_freq: Optional[int] = None) -> Dict:
        return {
            "input_size": self.input_size,
            "pattern_len": pattern_len,
            "pattern_freq": pattern_freq,
            "dict_size": self.dict_size,
            "hh_size": self.hh_size,
            "ch_size": self.ch_size,
            "perf_hh": self.perf_hh,
            "perf_ch": self.perf_ch,
            "ratio": self.compression_ratio,
            "critical_point": self.critical_point,
        }


class SynthParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    size: int = Field(0, ge=0)
    seed: int = Field(1, ge=0, le=2**64 - 1)
    keywords: Tuple[bytes, ...] = ()
    zipf_s: float = Field(1.0, gt=0)
    keyword_density: float = Field(0.3, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _keywords_for_density(self):
        if self.keyword_density > 0 and not self.keywords:
            raise ValueError("keyword_density > 0 needs at least one keyword")
        return self


class SweepSpec(BaseModel):
    """Corpus recipe shared by every grid point of a sweep."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(1, ge=0, le=2**64 - 1)
    keywords_per_point: int = Field(50, ge=1)
    min_frequency: int = Field(10, ge=1)
    keywords: Tuple[bytes, ...] = ()
    zipf_s: float = Field(1.0, gt=0)
    keyword_density: float = Field(0.3, ge=0.0, le=1.0)
    replicates: int = Field(1, ge=1)


class BenchSettings(BaseModel):
    """The ``bench`` config section, checked before any corpus is generated."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_workers: int = Field(4, ge=1)
    seed: int = Field(1, ge=0, le=2**64 - 1)
    sizes: List[PositiveInt] = Field(default_factory=lambda: [500000], min_length=1)
    pattern_lengths: List[PositiveInt] = Field(default_factory=list)
    pattern_frequencies: List[PositiveInt] = Field(default_factory=list)
    keywords_per_point: int = Field(50, ge=1)
    replicates: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _lengths_hold_keywords(self):
        for length in self.pattern_lengths:
            if len(FILLER_ALPHABET) ** length < self.keywords_per_point:
                raise ValueError(
                    f"Pattern length {length} cannot hold {self.keywords_per_point} distinct keywords"
                )
        return self

    def grid(self) -> List["GridPoint"]:
        """Zipf points for every size, then planted points for every size/length/frequency."""
        return build_grid(self.sizes) + build_grid(self.sizes, self.pattern_lengths, self.pattern_frequencies)


@dataclass(frozen=True)
class GridPoint:
    """One sweep point; without a pattern length/frequency the Zipf corpus is used."""

    input_size: int
    pattern_len: Optional[int] = None
    pattern_freq: Optional[int] = None

    @property
    def planted(self) -> bool:
        return self.pattern_len is not None and self.pattern_freq is not None


def critical_point(dict_size: int, hh_size: int, ch_size: int) -> Optional[int]:
    """Fewest downloads D with D * hh_size + dict_size < D * ch_size, if any."""
    if ch_size <= hh_size:
        return None
    return dict_size // (ch_size - hh_size) + 1


def cumulative_bytes(record: BenchRecord, downloads: int) -> Tuple[int, int]:
    """(two-level, Huffman-only) bytes moved after ``downloads`` transfers.

    The two-level side pays for the dictionary once.
    """
    return downloads * record.hh_size + record.dict_size, downloads * record.ch_size


def measure(text: bytes, dictionary: Dictionary) -> BenchRecord:
    """Compress ``text`` both ways (external dictionary) and record the sizes."""
    if not text:
        raise DegenerateInputError("Cannot measure an empty input")
    hh_size = len(compress(text, dictionary))
    ch_size = len(compress(text, dictionary, huffman_only=True))
    dict_size = len(dictionary.blob)
    return BenchRecord(
        input_size=len(text),
        hh_size=hh_size,
        ch_size=ch_size,
        dict_size=dict_size,
        critical_point=critical_point(dict_size, hh_size, ch_size),
    )


def gen_synthetic(params: SynthParams) -> bytes:
    """Space-separated tokens: Zipf-ranked keywords or random lowercase filler.

    Whole tokens are emitted until the next one would exceed ``size``.
    """
    if params.size == 0:
        return b""
    rng = random.Random(params.seed)
    keywords = list(params.keywords)
    cum_weights = list(itertools.accumulate(1.0 / rank ** params.zipf_s for rank in range(1, len(keywords) + 1)))

    tokens = []
    length = 0
    while True:
        if keywords and rng.random() < params.keyword_density:
            token = rng.choices(keywords, cum_weights=cum_weights)[0]
        else:
            n = rng.randint(FILLER_MIN_LENGTH, FILLER_MAX_LENGTH)
            token = "".join(rng.choices(FILLER_ALPHABET, k=n)).encode("ascii")
        needed = len(token) + (1 if tokens else 0)
        if length + needed > params.size:
            break
        tokens.append(token)
        length += needed
    return b" ".join(tokens)


def make_keywords(count: int, length: int, seed: int) -> List[bytes]:
    """``count`` distinct random lowercase keywords of exactly ``length`` bytes."""
    if count > len(FILLER_ALPHABET) ** length:
        raise ValueError(f"Cannot make {count} distinct keywords of length {length}")
    rng = random.Random(seed)
    keywords: List[bytes] = []
    seen = set()
    while len(keywords) < count:
        keyword = "".join(rng.choices(FILLER_ALPHABET, k=length)).encode("ascii")
        if keyword not in seen:
            seen.add(keyword)
            keywords.append(keyword)
    return keywords


def plant_keywords(size: int, seed: int, keywords: Sequence[bytes], occurrences: int) -> bytes:
    """Filler text in which every keyword appears exactly ``occurrences`` times.

    Filler fills whatever ``size`` leaves after the planted keywords; the
    keywords always fit, so the result may exceed ``size`` when they alone do.
    """
    planted = [keyword for keyword in keywords for _ in range(occurrences)]
    planted_bytes = sum(len(keyword) + 1 for keyword in planted)
    if planted_bytes > size:
        logger.warning(f"Planted keywords need {planted_bytes} bytes, more than the {size}-byte target")

    budget = max(size - planted_bytes, 0)
    filler = gen_synthetic(SynthParams(size=budget, seed=seed, keyword_density=0.0))
    tokens = planted + [token for token in filler.split(b" ") if token]
    random.Random(seed).shuffle(tokens)
    return b" ".join(tokens)


def build_grid(
    sizes: Iterable[int],
    lengths: Iterable[Optional[int]] = (None,),
    frequencies: Iterable[Optional[int]] = (None,),
) -> List[GridPoint]:
    return [GridPoint(size, length, freq) for size, length, freq in itertools.product(sizes, lengths, frequencies)]


def corpus_for(point: GridPoint, spec: SweepSpec, seed: Optional[int] = None) -> Tuple[bytes, List[bytes]]:
    """Corpus text and the keywords appended at mining time for a grid point."""
    seed = spec.seed if seed is None else seed
    if point.planted:
        keywords = make_keywords(spec.keywords_per_point, point.pattern_len, seed=seed ^ (point.pattern_len << 32))
        # planted keywords must earn their place through frequency alone
        return plant_keywords(point.input_size, seed, keywords, point.pattern_freq), []
    params = SynthParams(
        size=point.input_size,
        seed=seed,
        keywords=spec.keywords,
        zipf_s=spec.zipf_s,
        keyword_density=spec.keyword_density if spec.keywords else 0.0,
    )
    return gen_synthetic(params), list(spec.keywords)


def measure_point(point: GridPoint, spec: SweepSpec, seed: int) -> BenchRecord:
    text, keywords = corpus_for(point, spec, seed)
    ranked, _stats = mine([text], keywords, MiningParams(min_frequency=spec.min_frequency))
    return measure(text, Dictionary.build(ranked))


def mean_row(records: Sequence[BenchRecord], pattern_len: Optional[int] = None,
             pattern_freq: Optional[int] = None) -> Dict:
    """Average replicate records into one row.

    Ratios and per-byte sizes are means of the per-replicate values; byte
    sizes are rounded means and the critical point follows from those.
    """
    def mean_size(attr):
        return round(statistics.fmean(getattr(record, attr) for record in records))

    dict_size, hh_size, ch_size = mean_size("dict_size"), mean_size("hh_size"), mean_size("ch_size")
    return {
        "input_size": mean_size("input_size"),
        "pattern_len": pattern_len,
        "pattern_freq": pattern_freq,
        "dict_size": dict_size,
        "hh_size": hh_size,
        "ch_size": ch_size,
        "perf_hh": statistics.fmean(record.perf_hh for record in records),
        "perf_ch": statistics.fmean(record.perf_ch for record in records),
        "ratio": statistics.fmean(record.compression_ratio for record in records),
        "critical_point": critical_point(dict_size, hh_size, ch_size),
    }


def run_point(point: GridPoint, spec: SweepSpec) -> Dict:
    """Measure ``spec.replicates`` corpora (seeds ``seed``, ``seed + 1``, ...) and average them."""
    records = [measure_point(point, spec, spec.seed + i) for i in range(spec.replicates)]
    row = mean_row(records, point.pattern_len, point.pattern_freq)
    logger.debug(f"{point}: ratio={row['ratio']:.6f} over {len(records)} replicate(s)")
    return row


def sweep(
    grid: Sequence[GridPoint],
    spec: Optional[SweepSpec] = None,
    max_workers: int = 1,
    show_progress: bool = False,
) -> List[Dict]:
    """One CSV row per grid point, in grid order whatever the worker count."""
    if not grid:
        raise ValueError("Sweep grid is empty")
    spec = spec or SweepSpec()
    rows: List[Optional[Dict]] = [None] * len(grid)

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
        disable=not show_progress,
    ) as progress:
        task = progress.add_task("Sweeping grid...", total=len(grid))

        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
            future_to_index = {
                executor.submit(run_point, point, spec): index
                for index, point in enumerate(grid)
            }
            for future in concurrent.futures.as_completed(future_to_index):
                rows[future_to_index[future]] = future.result()
                progress.update(task, advance=1)

    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_csv(rows: Iterable[Dict], target: Union[str, Path, IO[str]]) -> None:
    """Write rows with the fixed header; floats to 6 places, missing values empty."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as f:
            write_csv(rows, f)
        return
    writer = csv.DictWriter(target, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({name: _format_cell(row.get(name)) for name in CSV_FIELDS})
