"""Classical byte-level Huffman coding with canonical codes.

Ties in the priority queue are broken by the smallest symbol contained in
each subtree, so equal frequency tables always give the same code lengths.
Codewords are then assigned canonically by (length, symbol), which lets the
table travel as (symbol, length) pairs only::

    u16 S | S x (u8 symbol, u8 length)      sorted by symbol, little-endian

Bits are packed most-significant-bit first; the final byte is zero padded.
"""

import heapq
import math
import struct
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import CoverageError, FormatError, TrailingGarbageError, TruncationError

SYMBOLS = 256
FAST_BITS = 11

_TABLE_COUNT = struct.Struct("<H")


@dataclass(frozen=True)
class FrequencyTable:
    counts: Tuple[int, ...] = (0,) * SYMBOLS

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        if len(self.counts) != SYMBOLS:
            raise ValueError(f"Frequency table needs {SYMBOLS} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError("Frequency counts must be non-negative")

    @classmethod
    def from_bytes(cls, data: bytes) -> "FrequencyTable":
        counter = Counter(data)
        return cls(tuple(counter.get(s, 0) for s in range(SYMBOLS)))

    @classmethod
    def from_mapping(cls, counts: Dict[int, int]) -> "FrequencyTable":
        table = [0] * SYMBOLS
        for symbol, count in counts.items():
            table[symbol] = count
        return cls(tuple(table))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def entropy(self) -> float:
        """Empirical entropy in bits per symbol (0.0 for empty input)."""
        total = self.total
        if not total:
            return 0.0
        return -sum((c / total) * math.log2(c / total) for c in self.counts if c)


@dataclass(frozen=True)
class CodeBook:
    """Per-symbol code lengths (0 = absent) and canonical codewords."""

    lengths: Tuple[int, ...] = (0,) * SYMBOLS
    codes: Tuple[int, ...] = (0,) * SYMBOLS

    @classmethod
    def from_lengths(cls, lengths: Sequence[int]) -> "CodeBook":
        """Assign canonical codewords to a set of code lengths.

        Raises:
            FormatError: If the lengths break the Kraft equality (or, for a
                single symbol, are not exactly 1).
        """
        lengths = tuple(lengths)
        if len(lengths) != SYMBOLS:
            raise FormatError(f"Code book needs {SYMBOLS} lengths, got {len(lengths)}")
        present = sorted((length, symbol) for symbol, length in enumerate(lengths) if length)
        if any(length < 0 or length > 255 for length in lengths):
            raise FormatError("Code lengths must be in 0..255")

        if len(present) == 1 and present[0][0] != 1:
            raise FormatError("A single-symbol code must have length 1")
        if len(present) > 1:
            max_len = present[-1][0]
            kraft = sum(1 << (max_len - length) for length, _ in present)
            if kraft != 1 << max_len:
                state = "oversubscribed" if kraft > 1 << max_len else "incomplete"
                raise FormatError(f"Code lengths violate the Kraft equality ({state})")

        codes = [0] * SYMBOLS
        code = 0
        prev = present[0][0] if present else 0
        for index, (length, symbol) in enumerate(present):
            if index:
                code = (code + 1) << (length - prev)
            codes[symbol] = code
            prev = length
        return cls(lengths, tuple(codes))

    @property
    def is_empty(self) -> bool:
        return not any(self.lengths)

    @property
    def symbols(self) -> List[int]:
        """Present symbols in canonical (length, symbol) order."""
        return [s for _, s in sorted((l, s) for s, l in enumerate(self.lengths) if l)]

    @property
    def max_length(self) -> int:
        return max(self.lengths)

    def codeword(self, symbol: int) -> str:
        length = self.lengths[symbol]
        if not length:
            raise CoverageError(symbol)
        return format(self.codes[symbol], f"0{length}b")

    def encoded_bits(self, freqs: FrequencyTable) -> int:
        """Exact payload size in bits for data with these frequencies."""
        bits = 0
        for symbol, count in enumerate(freqs.counts):
            if count:
                if not self.lengths[symbol]:
                    raise CoverageError(symbol)
                bits += count * self.lengths[symbol]
        return bits

    @cached_property
    def _bit_strings(self) -> Tuple[Optional[str], ...]:
        return tuple(self.codeword(s) if self.lengths[s] else None for s in range(SYMBOLS))

    @cached_property
    def _decoder(self):
        max_len = self.max_length
        width = min(max_len, FAST_BITS)
        fast: List[Optional[Tuple[int, int]]] = [None] * (1 << width)
        slow: Dict[Tuple[int, int], int] = {}
        for symbol, length in enumerate(self.lengths):
            if not length:
                continue
            code = self.codes[symbol]
            if length <= width:
                base = code << (width - length)
                for i in range(1 << (width - length)):
                    fast[base + i] = (symbol, length)
            else:
                slow[(length, code)] = symbol
        return width, fast, slow


EMPTY_CODEBOOK = CodeBook()


def build_codebook(freqs: FrequencyTable) -> CodeBook:
    """Optimal code lengths from a min-heap keyed by (weight, smallest symbol)."""
    heap = [(count, symbol, [symbol]) for symbol, count in enumerate(freqs.counts) if count]
    if not heap:
        return EMPTY_CODEBOOK

    lengths = [0] * SYMBOLS
    if len(heap) == 1:
        lengths[heap[0][1]] = 1
        return CodeBook.from_lengths(lengths)

    # (weight, min symbol) is unique per subtree, the leaf list is never compared
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, s1, leaves1 = heapq.heappop(heap)
        w2, s2, leaves2 = heapq.heappop(heap)
        for symbol in leaves1:
            lengths[symbol] += 1
        for symbol in leaves2:
            lengths[symbol] += 1
        heapq.heappush(heap, (w1 + w2, min(s1, s2), leaves1 + leaves2))
    return CodeBook.from_lengths(lengths)


def encode(data: bytes, book: CodeBook) -> Tuple[bytes, int]:
    """Concatenate codewords MSB-first; returns (bitstream, symbol_count).

    Raises:
        CoverageError: If a byte of ``data`` has no codeword.
    """
    if not data:
        return b"", 0
    words = book._bit_strings
    for symbol in sorted(set(data)):
        if words[symbol] is None:
            raise CoverageError(symbol)

    bits = "".join(map(words.__getitem__, data))
    pad = -len(bits) % 8
    nbytes = (len(bits) + pad) // 8
    return int(bits + "0" * pad, 2).to_bytes(nbytes, "big"), len(data)


def decode(bitstream: bytes, book: CodeBook, symbol_count: int) -> bytes:
    """Read ``symbol_count`` symbols back out of ``bitstream``.

    Raises:
        TruncationError: If the stream ends before ``symbol_count`` symbols.
        TrailingGarbageError: If anything but zero padding of the final
            byte follows the last symbol.
    """
    if symbol_count < 0:
        raise ValueError("symbol_count must be non-negative")
    if symbol_count == 0:
        if bitstream:
            raise TrailingGarbageError(f"{len(bitstream)} bytes present for zero symbols")
        return b""
    if not bitstream or book.is_empty:
        raise TruncationError(f"Stream exhausted before symbol 0 of {symbol_count}")

    total = len(bitstream) * 8
    width, fast, slow = book._decoder
    max_len = book.max_length
    bits = format(int.from_bytes(bitstream, "big"), f"0{total}b") + "0" * max_len

    out = bytearray()
    pos = 0
    for index in range(symbol_count):
        entry = fast[int(bits[pos:pos + width], 2)]
        if entry is None:
            entry = _decode_long(bits, pos, width, max_len, slow)
        symbol, length = entry
        pos += length
        if pos > total:
            raise TruncationError(f"Stream exhausted before symbol {index} of {symbol_count}")
        out.append(symbol)

    if total - pos >= 8 or "1" in bits[pos:total]:
        raise TrailingGarbageError(f"{total - pos} bits after the last symbol are not zero padding")
    return bytes(out)


def _decode_long(bits: str, pos: int, width: int, max_len: int, slow) -> Tuple[int, int]:
    for length in range(width + 1, max_len + 1):
        symbol = slow.get((length, int(bits[pos:pos + length], 2)))
        if symbol is not None:
            return symbol, length
    raise FormatError(f"Invalid codeword at bit {pos}")


def serialize_table(book: CodeBook) -> bytes:
    pairs = [(symbol, length) for symbol, length in enumerate(book.lengths) if length]
    out = bytearray(_TABLE_COUNT.pack(len(pairs)))
    for symbol, length in pairs:
        out.append(symbol)
        out.append(length)
    return bytes(out)


def read_table(buf: bytes, offset: int = 0) -> Tuple[CodeBook, int]:
    """Parse a code table starting at ``offset``; returns (book, next offset)."""
    if offset + _TABLE_COUNT.size > len(buf):
        raise FormatError("Truncated code table header")
    (count,) = _TABLE_COUNT.unpack_from(buf, offset)
    if count > SYMBOLS:
        raise FormatError(f"Code table declares {count} symbols, max {SYMBOLS}")
    pos = offset + _TABLE_COUNT.size
    end = pos + 2 * count
    if end > len(buf):
        raise FormatError("Truncated code table")

    lengths = [0] * SYMBOLS
    previous = -1
    for i in range(pos, end, 2):
        symbol, length = buf[i], buf[i + 1]
        if symbol <= previous:
            raise FormatError(f"Duplicate or unsorted symbol 0x{symbol:02X} in code table")
        if not length:
            raise FormatError(f"Zero code length for symbol 0x{symbol:02X}")
        lengths[symbol] = length
        previous = symbol
    return CodeBook.from_lengths(lengths), end


def parse_table(data: bytes) -> CodeBook:
    book, end = read_table(data)
    if end != len(data):
        raise FormatError(f"{len(data) - end} trailing bytes after code table")
    return book
