"""Byte-level word segmentation.

A text is split into maximal runs of token bytes ``[A-Za-z0-9_]`` and the
gaps between them. Non-ASCII bytes are never part of a token.
"""

import re
from enum import Enum
from typing import Iterator, List, NamedTuple

TOKEN_CLASS = rb"A-Za-z0-9_"

TOKEN_RE = re.compile(rb"[" + TOKEN_CLASS + rb"]+")
SEGMENT_RE = re.compile(rb"[" + TOKEN_CLASS + rb"]+|[^" + TOKEN_CLASS + rb"]+")


class SegmentKind(str, Enum):
    TOKEN = "token"
    GAP = "gap"


class Segment(NamedTuple):
    kind: SegmentKind
    offset: int
    length: int

    @property
    def end(self) -> int:
        return self.offset + self.length

    def slice(self, text: bytes) -> bytes:
        return text[self.offset:self.end]


def tokenize(text: bytes) -> List[Segment]:
    """Split ``text`` into alternating token and gap segments covering it exactly."""
    segments = []
    for match in SEGMENT_RE.finditer(text):
        start = match.start()
        kind = SegmentKind.TOKEN if TOKEN_RE.match(text, start) else SegmentKind.GAP
        segments.append(Segment(kind, start, match.end() - start))
    return segments


def iter_tokens(text: bytes) -> Iterator[bytes]:
    """Yield the bytes of every token segment, in order."""
    for match in TOKEN_RE.finditer(text):
        yield match.group()


def is_token(candidate: bytes) -> bool:
    """True if ``candidate`` tokenizes to exactly one token segment."""
    return TOKEN_RE.fullmatch(candidate) is not None
