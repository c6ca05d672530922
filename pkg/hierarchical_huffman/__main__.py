"""Console script for hierarchical-huffman."""

import logging
import sys
from contextlib import contextmanager
from enum import IntEnum
from pathlib import Path
from typing import List, Optional

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from hierarchical_huffman.core import bench as benchmarks
from hierarchical_huffman.core import container
from hierarchical_huffman.core.config import ConfigLoader
from hierarchical_huffman.core.dictionary import EMPTY_DICTIONARY, Dictionary, DictionaryCache
from hierarchical_huffman.core.exceptions import (
    ConfigurationError,
    CoverageError,
    DegenerateInputError,
    DictionaryMismatchError,
    DictionaryMissingError,
    FormatError,
    RejectedKeywordError,
    UnknownPatternError,
)
from hierarchical_huffman.core.miner import MiningParams, load_keywords, mine, packaged_keywords
from hierarchical_huffman.core.transform import level1_savings
from hierarchical_huffman.core.utils.logger import setup_logging

app = typer.Typer(help="Two-level (pattern substitution + Huffman) text compressor.", add_completion=False)
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("hierarchical_huffman")


class ExitStatus(IntEnum):
    OK = 0
    USAGE = 1
    FORMAT = 2
    DICTIONARY_MISMATCH = 3
    IO = 4


_USAGE_ERRORS = (
    RejectedKeywordError,
    DictionaryMissingError,
    DegenerateInputError,
    ConfigurationError,
    ValidationError,
)
_FORMAT_ERRORS = (FormatError, UnknownPatternError, CoverageError)


def _fail(status: ExitStatus, message: str) -> None:
    err_console.print(f"[bold red]Error:[/bold red] {escape(message)}")
    raise typer.Exit(code=int(status))


@contextmanager
def _exit_on_error():
    """Map every library error onto exactly one exit status."""
    try:
        yield
    except _USAGE_ERRORS as e:
        logger.debug("Usage error", exc_info=True)
        _fail(ExitStatus.USAGE, str(e))
    except DictionaryMismatchError as e:
        logger.debug("Dictionary mismatch", exc_info=True)
        _fail(ExitStatus.DICTIONARY_MISMATCH, str(e))
    except _FORMAT_ERRORS as e:
        logger.debug("Format error", exc_info=True)
        _fail(ExitStatus.FORMAT, str(e))
    except OSError as e:
        logger.debug("I/O error", exc_info=True)
        _fail(ExitStatus.IO, str(e))


def _config(ctx: typer.Context) -> ConfigLoader:
    return ctx.obj if isinstance(ctx.obj, ConfigLoader) else ConfigLoader()


def _load_dictionary(path: Optional[Path]) -> Dictionary:
    return Dictionary.load(path) if path is not None else EMPTY_DICTIONARY


def _resolver(path: Optional[Path]) -> container.Resolver:
    if path is None:
        return DictionaryCache()
    patterns = Dictionary.load(path)

    # an explicit --dict is always offered, so a wrong one is a mismatch
    def resolve(_digest: int) -> Dictionary:
        return patterns

    return resolve


@app.callback()
def _main(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="YAML/JSON file overriding defaults"),
) -> None:
    with _exit_on_error():
        loader = ConfigLoader(config)
        level = "DEBUG" if verbose else str(loader.get("logging", "level") or "INFO").upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigurationError(f"Unknown logging level: {level}")
    setup_logging(level, console=err_console)
    ctx.obj = loader


@app.command("mine")
def cmd_mine(
    ctx: typer.Context,
    corpus: List[Path] = typer.Argument(..., help="Training corpus files"),
    output: Path = typer.Option(..., "--output", "-o", help="Dictionary file to write"),
    keywords: Optional[Path] = typer.Option(None, "--keywords", "-k", help="Domain keyword file"),
    builtin_keywords: bool = typer.Option(False, "--builtin-keywords", help="Append the packaged computer-science keywords"),
    min_length: Optional[int] = typer.Option(None, "--min-length", help="Minimum pattern length (L_min, default 3)"),
    min_frequency: Optional[int] = typer.Option(None, "--min-frequency", help="Minimum frequency (F_min, default 10)"),
    max_entries: Optional[int] = typer.Option(None, "--max-entries", help="Dictionary capacity"),
) -> None:
    """Mine frequent-long patterns into a dictionary."""
    cfg = _config(ctx).get("miner")
    with _exit_on_error():
        params = MiningParams(
            min_length=min_length if min_length is not None else cfg["min_length"],
            min_frequency=min_frequency if min_frequency is not None else cfg["min_frequency"],
            max_entries=max_entries if max_entries is not None else cfg["max_entries"],
        )
        domain_keywords: List[bytes] = []
        if keywords is not None:
            domain_keywords.extend(load_keywords(keywords, params))
        if builtin_keywords:
            domain_keywords.extend(packaged_keywords(params))

        texts = [path.read_bytes() for path in corpus]
        ranked, _stats = mine(texts, domain_keywords, params, max_workers=cfg.get("max_workers", 1))
        dictionary = Dictionary.build(ranked)
        dictionary.save(output)

    console.print(f"entries: {len(dictionary)}")
    console.print(f"dropped: {dictionary.dropped}")
    console.print(f"digest:  {dictionary.digest:016x}")


@app.command("compress")
def cmd_compress(
    input_file: Path = typer.Argument(..., help="File to compress"),
    output: Path = typer.Option(..., "--output", "-o", help="Container file to write"),
    dictionary: Optional[Path] = typer.Option(None, "--dict", "-d", help="Dictionary file (empty dictionary if omitted)"),
    embed: bool = typer.Option(False, "--embed", help="Embed the dictionary in the container"),
    huffman_only: bool = typer.Option(False, "--huffman-only", help="Skip level 1 (classical Huffman baseline)"),
) -> None:
    """Compress a file into an HHC1 container."""
    with _exit_on_error():
        patterns = _load_dictionary(dictionary)
        text = input_file.read_bytes()
        data = container.compress(text, patterns, embed=embed, huffman_only=huffman_only)
        output.write_bytes(data)
    logger.info(f"{input_file}: {len(text)} -> {len(data)} bytes")


@app.command("decompress")
def cmd_decompress(
    input_file: Path = typer.Argument(..., help="Container to decompress"),
    output: Path = typer.Option(..., "--output", "-o", help="File to write"),
    dictionary: Optional[Path] = typer.Option(None, "--dict", "-d", help="Dictionary for external-dictionary containers"),
) -> None:
    """Restore the original bytes from a container."""
    with _exit_on_error():
        data = input_file.read_bytes()
        resolver = _resolver(dictionary)
        try:
            text = container.decompress(data, resolver)
        except DictionaryMissingError as e:
            raise DictionaryMissingError(f"{e}; pass it with --dict") from e
        output.write_bytes(text)
    logger.info(f"{input_file}: {len(data)} -> {len(text)} bytes")


def _print_record(name: str, record: benchmarks.BenchRecord, savings: int, downloads: Optional[int]) -> None:
    table = Table(title=name, show_header=False)
    table.add_row("input size", str(record.input_size))
    table.add_row("level-1 savings", f"{savings} bytes")
    table.add_row("two-level size", str(record.hh_size))
    table.add_row("huffman-only size", str(record.ch_size))
    table.add_row("dictionary size", str(record.dict_size))
    table.add_row("perf (two-level)", f"{record.perf_hh:.6f}")
    table.add_row("perf (huffman-only)", f"{record.perf_ch:.6f}")
    table.add_row("compression ratio", f"{record.compression_ratio:.6f}")
    table.add_row("critical point", str(record.critical_point) if record.critical_point else "none")
    if downloads is not None:
        hh_total, ch_total = benchmarks.cumulative_bytes(record, downloads)
        table.add_row(f"bytes after {downloads} downloads", f"two-level {hh_total} / huffman-only {ch_total}")
    console.print(table)


def _sweep_rows(cfg: ConfigLoader) -> List[dict]:
    settings = benchmarks.BenchSettings(**cfg.get("bench"))
    synth_cfg = cfg.get("synth")
    keywords_file = synth_cfg.get("keywords_file")
    keywords = load_keywords(keywords_file) if keywords_file else packaged_keywords()
    spec = benchmarks.SweepSpec(
        seed=settings.seed,
        keywords_per_point=settings.keywords_per_point,
        min_frequency=cfg.get("miner", "min_frequency"),
        keywords=tuple(keywords),
        zipf_s=synth_cfg["zipf_s"],
        keyword_density=synth_cfg["keyword_density"],
        replicates=settings.replicates,
    )
    return benchmarks.sweep(settings.grid(), spec, max_workers=settings.max_workers, show_progress=True)


@app.command("bench")
def cmd_bench(
    ctx: typer.Context,
    corpus: Optional[List[Path]] = typer.Argument(None, help="Files to measure"),
    dictionary: Optional[Path] = typer.Option(None, "--dict", "-d", help="Dictionary file"),
    csv_path: Optional[Path] = typer.Option(None, "--csv", help="Write CSV rows here"),
    downloads: Optional[int] = typer.Option(None, "--downloads", "-n", min=1, help="Report cumulative bytes after N downloads"),
    run_sweep: bool = typer.Option(False, "--sweep", help="Run the configured size/length/frequency grid"),
) -> None:
    """Compare two-level against Huffman-only compression."""
    if not corpus and not run_sweep:
        _fail(ExitStatus.USAGE, "Give corpus files to measure or --sweep")

    rows = []
    with _exit_on_error():
        if corpus:
            patterns = _load_dictionary(dictionary)
            for path in corpus:
                text = path.read_bytes()
                record = benchmarks.measure(text, patterns)
                _print_record(str(path), record, level1_savings(text, patterns), downloads)
                rows.append(record.to_row())
        if run_sweep:
            sweep_rows = _sweep_rows(_config(ctx))
            for row in sweep_rows:
                console.print(
                    f"size={row['input_size']} len={row['pattern_len']} freq={row['pattern_freq']} "
                    f"ratio={row['ratio']:.6f} critical={row['critical_point']}"
                )
            rows.extend(sweep_rows)
        if csv_path is not None:
            benchmarks.write_csv(rows, csv_path)
            logger.info(f"Wrote {len(rows)} rows to {csv_path}")


@app.command("gen")
def cmd_gen(
    ctx: typer.Context,
    output: Path = typer.Option(..., "--output", "-o", help="Corpus file to write"),
    size: int = typer.Option(..., "--size", help="Target size in bytes"),
    seed: Optional[int] = typer.Option(None, "--seed", help="PRNG seed"),
    keywords: Optional[Path] = typer.Option(None, "--keywords", "-k", help="Keyword file (packaged list if omitted)"),
    density: Optional[float] = typer.Option(None, "--density", help="Fraction of tokens drawn from keywords"),
    zipf_s: Optional[float] = typer.Option(None, "--zipf-s", help="Zipf exponent for keyword ranks"),
) -> None:
    """Generate a deterministic synthetic domain corpus."""
    cfg = _config(ctx).get("synth")
    with _exit_on_error():
        keywords_file = keywords or cfg.get("keywords_file")
        keyword_list = load_keywords(keywords_file) if keywords_file else packaged_keywords()
        params = benchmarks.SynthParams(
            size=size,
            seed=seed if seed is not None else cfg["seed"],
            keywords=tuple(keyword_list),
            zipf_s=zipf_s if zipf_s is not None else cfg["zipf_s"],
            keyword_density=density if density is not None else cfg["keyword_density"],
        )
        text = benchmarks.gen_synthetic(params)
        output.write_bytes(text)
    logger.info(f"Wrote {len(text)} bytes to {output}")


@app.command("inspect")
def cmd_inspect(
    input_file: Path = typer.Argument(..., help="Container to inspect"),
) -> None:
    """Print a container's header summary without decoding it."""
    with _exit_on_error():
        info = container.inspect(input_file.read_bytes())
    for key, value in info.as_dict().items():
        console.print(f"{key}: {value}")


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit status instead of exiting."""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="hhuff", standalone_mode=False)
    except click.exceptions.Abort:
        err_console.print("[bold yellow]Interrupted by user[/bold yellow]")
        return 130
    except click.ClickException as e:
        e.show()
        return int(ExitStatus.USAGE)
    return result if isinstance(result, int) else int(ExitStatus.OK)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
