"""On-disk container for the two-level (and Huffman-only) pipeline.

Layout, all integers little-endian::

    "HHC1" | u8 version | u8 flags | u64 dictionary digest
    [flags & EMBEDDED: u32 blob length | dictionary blob]
    code table (see huffman)
    u64 symbol count | u64 payload length | payload

The digest is written even when the dictionary is embedded so receivers can
cache dictionaries across downloads and skip the blob next time.
"""

import logging
import struct
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from . import huffman
from .dictionary import EMPTY_DICTIONARY, Dictionary, fnv1a_64
from .exceptions import (
    DictionaryMismatchError,
    DictionaryMissingError,
    FormatError,
    TrailingGarbageError,
    TruncationError,
)
from .transform import decode_level1, encode_level1

logger = logging.getLogger(__name__)

MAGIC = b"HHC1"
VERSION = 1
FLAG_EMBEDDED = 0x01
FLAG_HUFFMAN_ONLY = 0x02
_KNOWN_FLAGS = FLAG_EMBEDDED | FLAG_HUFFMAN_ONLY

_HEADER = struct.Struct("<4sBBQ")
_BLOB_LENGTH = struct.Struct("<I")
_TRAILER = struct.Struct("<QQ")

HEADER_SIZE = _HEADER.size
TRAILER_SIZE = _TRAILER.size

Resolver = Callable[[int], Optional[Dictionary]]


@dataclass(frozen=True)
class ContainerInfo:
    """Header summary of a container; produced without decoding the payload."""

    version: int
    flags: int
    digest: int
    symbol_count: int
    header_size: int
    dictionary_size: int
    table_size: int
    payload_size: int
    total_size: int
    distinct_symbols: int

    @property
    def embedded(self) -> bool:
        return bool(self.flags & FLAG_EMBEDDED)

    @property
    def huffman_only(self) -> bool:
        return bool(self.flags & FLAG_HUFFMAN_ONLY)

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "embedded": self.embedded,
            "huffman_only": self.huffman_only,
            "digest": f"{self.digest:016x}",
            "symbol_count": self.symbol_count,
            "header_size": self.header_size,
            "dictionary_size": self.dictionary_size,
            "table_size": self.table_size,
            "payload_size": self.payload_size,
            "total_size": self.total_size,
            "distinct_symbols": self.distinct_symbols,
        }


def compress(
    text: bytes,
    dictionary: Dictionary = EMPTY_DICTIONARY,
    *,
    embed: bool = False,
    huffman_only: bool = False,
) -> bytes:
    """Run the two-level pipeline (or Huffman alone) and frame the result."""
    level1 = bytes(text) if huffman_only else encode_level1(text, dictionary)
    book = huffman.build_codebook(huffman.FrequencyTable.from_bytes(level1))
    payload, symbol_count = huffman.encode(level1, book)

    flags = (FLAG_EMBEDDED if embed else 0) | (FLAG_HUFFMAN_ONLY if huffman_only else 0)
    parts = [_HEADER.pack(MAGIC, VERSION, flags, dictionary.digest)]
    if embed:
        blob = dictionary.blob
        parts.append(_BLOB_LENGTH.pack(len(blob)))
        parts.append(blob)
    parts.append(huffman.serialize_table(book))
    parts.append(_TRAILER.pack(symbol_count, len(payload)))
    parts.append(payload)
    container = b"".join(parts)

    logger.debug(
        f"Compressed {len(text)} -> {len(container)} bytes "
        f"(level 1: {len(level1)} bytes, payload: {len(payload)} bytes, flags=0x{flags:02x})"
    )
    return container


def _parse(data: bytes) -> Tuple[ContainerInfo, bytes, huffman.CodeBook, bytes]:
    if data[:4] != MAGIC:
        raise FormatError("Bad container magic")
    if len(data) < HEADER_SIZE:
        raise TruncationError("Truncated container header")
    _magic, version, flags, digest = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise FormatError(f"Unsupported container version {version}")
    if flags & ~_KNOWN_FLAGS:
        raise FormatError(f"Unknown container flags 0x{flags:02x}")

    pos = HEADER_SIZE
    blob = b""
    dictionary_size = 0
    if flags & FLAG_EMBEDDED:
        if pos + _BLOB_LENGTH.size > len(data):
            raise TruncationError("Truncated dictionary length")
        (blob_length,) = _BLOB_LENGTH.unpack_from(data, pos)
        pos += _BLOB_LENGTH.size
        if pos + blob_length > len(data):
            raise TruncationError("Truncated embedded dictionary")
        blob = data[pos:pos + blob_length]
        pos += blob_length
        dictionary_size = _BLOB_LENGTH.size + blob_length

    table_start = pos
    book, pos = huffman.read_table(data, pos)
    table_size = pos - table_start

    if pos + TRAILER_SIZE > len(data):
        raise TruncationError("Truncated symbol count / payload length")
    symbol_count, payload_length = _TRAILER.unpack_from(data, pos)
    pos += TRAILER_SIZE
    if pos + payload_length > len(data):
        raise TruncationError(f"Payload truncated: {len(data) - pos} of {payload_length} bytes present")
    payload = data[pos:pos + payload_length]
    pos += payload_length
    if pos != len(data):
        raise TrailingGarbageError(f"{len(data) - pos} bytes after the payload")

    info = ContainerInfo(
        version=version,
        flags=flags,
        digest=digest,
        symbol_count=symbol_count,
        header_size=HEADER_SIZE,
        dictionary_size=dictionary_size,
        table_size=table_size,
        payload_size=TRAILER_SIZE + payload_length,
        total_size=len(data),
        distinct_symbols=sum(1 for length in book.lengths if length),
    )
    return info, blob, book, payload


def inspect(data: bytes) -> ContainerInfo:
    """Report the header and section sizes; the payload is never decoded."""
    info, _blob, _book, _payload = _parse(bytes(data))
    return info


def decompress(data: bytes, resolver: Optional[Resolver] = None) -> bytes:
    """Invert :func:`compress`.

    ``resolver`` maps a digest to a dictionary; it is only consulted for
    two-level containers without an embedded dictionary.

    Raises:
        FormatError: On bad magic, version, flags, table or payload framing.
        DictionaryMissingError: If the dictionary is external and unresolved.
        DictionaryMismatchError: If the resolved dictionary has another digest.
    """
    info, blob, book, payload = _parse(bytes(data))

    dictionary = None
    if info.embedded:
        if fnv1a_64(blob) != info.digest:
            raise FormatError("Embedded dictionary does not match the header digest")
        if not info.huffman_only:
            dictionary = Dictionary.parse(blob)
    elif not info.huffman_only:
        dictionary = resolver(info.digest) if resolver is not None else None
        if dictionary is None:
            raise DictionaryMissingError(f"No dictionary available for digest {info.digest:016x}")
        if dictionary.digest != info.digest:
            raise DictionaryMismatchError(
                f"Container needs dictionary {info.digest:016x}, got {dictionary.digest:016x}"
            )

    level1 = huffman.decode(payload, book, info.symbol_count)
    if info.huffman_only:
        return level1
    return decode_level1(level1, dictionary)
