"""Pattern dictionary: ranks, replacement strings and the shared blob format.

Rank ``i`` owns the replacement string ``r_i``::

    rank < 254          ESC, rank                      (2 bytes)
    254 <= rank < 65790 ESC, 0xFE, lo, hi              (4 bytes, rank - 254 LE)

``ESC, 0xFF`` is reserved for a literal escape byte in the text. A pattern
is only admitted to a slot whose replacement is strictly shorter than it,
so ranks 0..253 take patterns of 3+ bytes and the rest patterns of 5+ bytes.

Blob layout (little-endian)::

    "HHD1" | u32 count | count x (u16 length, pattern bytes)
"""

import logging
import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

from .exceptions import FormatError, RankOutOfRangeError, UnknownPatternError
from .miner import MAX_DICTIONARY_ENTRIES, MAX_PATTERN_LENGTH
from .tokenizer import is_token

logger = logging.getLogger(__name__)

ESCAPE = 0x1B
LONG_FORM = 0xFE
LITERAL = 0xFF
LITERAL_ESCAPE = bytes((ESCAPE, LITERAL))
SHORT_SLOTS = 254

MAGIC = b"HHD1"
_COUNT = struct.Struct("<I")
_LENGTH = struct.Struct("<H")

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit hash of ``data``."""
    h = FNV_OFFSET_BASIS
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK64
    return h


def min_pattern_length(rank: int) -> int:
    """Shortest pattern that still gains from the replacement at ``rank``."""
    return 3 if rank < SHORT_SLOTS else 5


def encode_rank(rank: int) -> bytes:
    if rank < 0 or rank >= MAX_DICTIONARY_ENTRIES:
        raise RankOutOfRangeError(f"Rank {rank} outside 0..{MAX_DICTIONARY_ENTRIES - 1}")
    if rank < SHORT_SLOTS:
        return bytes((ESCAPE, rank))
    offset = rank - SHORT_SLOTS
    return bytes((ESCAPE, LONG_FORM, offset & 0xFF, offset >> 8))


def decode_rank(replacement: bytes) -> int:
    """Inverse of :func:`encode_rank` for well-formed replacement strings."""
    if len(replacement) == 2 and replacement[0] == ESCAPE and replacement[1] < LONG_FORM:
        return replacement[1]
    if len(replacement) == 4 and replacement[0] == ESCAPE and replacement[1] == LONG_FORM:
        return SHORT_SLOTS + replacement[2] + (replacement[3] << 8)
    raise FormatError(f"Malformed replacement string: {bytes(replacement).hex()}")


def _eligible(pattern: bytes, rank: int) -> bool:
    return (
        min_pattern_length(rank) <= len(pattern) <= MAX_PATTERN_LENGTH
        and is_token(pattern)
    )


@dataclass(frozen=True)
class Dictionary:
    """Rank-ordered patterns; immutable and safe to share between threads."""

    entries: Tuple[bytes, ...] = ()
    dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(bytes(e) for e in self.entries))
        if len(self.entries) > MAX_DICTIONARY_ENTRIES:
            raise FormatError(f"Dictionary holds {len(self.entries)} entries, max {MAX_DICTIONARY_ENTRIES}")
        if len(set(self.entries)) != len(self.entries):
            raise FormatError("Dictionary entries are not distinct")
        for rank, pattern in enumerate(self.entries):
            if not _eligible(pattern, rank):
                raise FormatError(f"Pattern {pattern!r} is not eligible for rank {rank}")

    @classmethod
    def build(cls, ranked: Iterable[Tuple[bytes, int]]) -> "Dictionary":
        """Assign ranks in order, dropping patterns that cannot gain in the next free slot."""
        entries = []
        seen = set()
        dropped = 0
        for pattern, _count in ranked:
            rank = len(entries)
            if rank >= MAX_DICTIONARY_ENTRIES or pattern in seen or not _eligible(pattern, rank):
                logger.debug(f"Dropping pattern {pattern!r} at rank {rank}")
                dropped += 1
                continue
            seen.add(pattern)
            entries.append(pattern)
        if dropped:
            logger.info(f"Dropped {dropped} ineligible patterns while building the dictionary")
        return cls(tuple(entries), dropped=dropped)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, pattern: bytes) -> bool:
        return pattern in self.ranks

    @cached_property
    def ranks(self) -> Dict[bytes, int]:
        """pattern -> rank"""
        return {pattern: rank for rank, pattern in enumerate(self.entries)}

    @cached_property
    def replacements(self) -> Dict[bytes, bytes]:
        """pattern -> replacement string"""
        return {pattern: encode_rank(rank) for rank, pattern in enumerate(self.entries)}

    def replacement_for(self, rank: int) -> bytes:
        if not 0 <= rank < len(self.entries):
            raise RankOutOfRangeError(f"Rank {rank} outside dictionary of {len(self.entries)} entries")
        return encode_rank(rank)

    def rank_for(self, replacement: bytes) -> int:
        rank = decode_rank(replacement)
        if rank >= len(self.entries):
            raise UnknownPatternError(f"Rank {rank} is not in a dictionary of {len(self.entries)} entries")
        return rank

    def lookup(self, pattern: bytes) -> Optional[bytes]:
        """Replacement string for ``pattern``, or None when it is not a pattern."""
        return self.replacements.get(pattern)

    def pattern_for(self, replacement: bytes) -> bytes:
        return self.entries[self.rank_for(replacement)]

    def serialize(self) -> bytes:
        parts = [MAGIC, _COUNT.pack(len(self.entries))]
        for pattern in self.entries:
            parts.append(_LENGTH.pack(len(pattern)))
            parts.append(pattern)
        return b"".join(parts)

    @cached_property
    def blob(self) -> bytes:
        return self.serialize()

    @cached_property
    def digest(self) -> int:
        return fnv1a_64(self.blob)

    @classmethod
    def parse(cls, blob: bytes) -> "Dictionary":
        """Parse a serialized dictionary.

        Raises:
            FormatError: On bad magic, truncation, trailing bytes or an
                entry that violates the dictionary invariants.
        """
        blob = bytes(blob)
        if blob[:4] != MAGIC:
            raise FormatError("Bad dictionary magic")
        if len(blob) < 4 + _COUNT.size:
            raise FormatError("Truncated dictionary header")
        (count,) = _COUNT.unpack_from(blob, 4)
        if count > MAX_DICTIONARY_ENTRIES:
            raise FormatError(f"Dictionary declares {count} entries, max {MAX_DICTIONARY_ENTRIES}")

        pos = 4 + _COUNT.size
        entries = []
        for rank in range(count):
            if pos + _LENGTH.size > len(blob):
                raise FormatError(f"Truncated dictionary at entry {rank}")
            (length,) = _LENGTH.unpack_from(blob, pos)
            pos += _LENGTH.size
            if pos + length > len(blob):
                raise FormatError(f"Truncated pattern at entry {rank}")
            entries.append(blob[pos:pos + length])
            pos += length
        if pos != len(blob):
            raise FormatError(f"{len(blob) - pos} trailing bytes after dictionary")
        return cls(tuple(entries))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Dictionary":
        with open(path, "rb") as f:
            return cls.parse(f.read())

    def save(self, path: Union[str, Path]) -> None:
        with open(path, "wb") as f:
            f.write(self.blob)


EMPTY_DICTIONARY = Dictionary()


class DictionaryCache:
    """Digest-keyed dictionary store, usable directly as a container resolver."""

    def __init__(self, dictionaries: Iterable[Dictionary] = ()):
        self._by_digest: Dict[int, Dictionary] = {}
        self.add(EMPTY_DICTIONARY)
        for dictionary in dictionaries:
            self.add(dictionary)

    def add(self, dictionary: Dictionary) -> int:
        self._by_digest[dictionary.digest] = dictionary
        return dictionary.digest

    def get(self, digest: int) -> Optional[Dictionary]:
        return self._by_digest.get(digest)

    def __call__(self, digest: int) -> Optional[Dictionary]:
        return self.get(digest)

    def __contains__(self, digest: int) -> bool:
        return digest in self._by_digest

    def __len__(self) -> int:
        return len(self._by_digest)
