"""Level-1 compression: whole-token pattern substitution and its inverse."""

import re

from .dictionary import ESCAPE, LITERAL, LITERAL_ESCAPE, LONG_FORM, SHORT_SLOTS, Dictionary
from .exceptions import CorruptStreamError
from .tokenizer import TOKEN_CLASS

# Token segments and literal escape bytes are the only units level 1 rewrites;
# everything else is copied through untouched.
_LEVEL1_RE = re.compile(rb"[" + TOKEN_CLASS + rb"]+|\x1b")
_ESCAPE_BYTE = bytes((ESCAPE,))


def encode_level1(text: bytes, dictionary: Dictionary) -> bytes:
    """Replace every token equal to a pattern by its replacement string.

    Literal ``0x1B`` bytes become ``1B FF``. Single left-to-right pass.
    """
    lookup = dictionary.replacements
    if not lookup and _ESCAPE_BYTE not in text:
        return bytes(text)

    def _substitute(match):
        unit = match.group()
        if unit == _ESCAPE_BYTE:
            return LITERAL_ESCAPE
        return lookup.get(unit, unit)

    return _LEVEL1_RE.sub(_substitute, text)


def decode_level1(data: bytes, dictionary: Dictionary) -> bytes:
    """Exact inverse of :func:`encode_level1`.

    Raises:
        CorruptStreamError: On a dangling escape, a malformed long form or a
            rank the dictionary does not hold; carries the byte offset.
    """
    entries = dictionary.entries
    size = len(entries)
    out = []
    pos = 0
    end = len(data)
    while True:
        esc = data.find(_ESCAPE_BYTE, pos)
        if esc < 0:
            out.append(data[pos:])
            break
        out.append(data[pos:esc])
        if esc + 1 >= end:
            raise CorruptStreamError("Dangling escape byte", esc)
        marker = data[esc + 1]
        if marker == LITERAL:
            out.append(_ESCAPE_BYTE)
            pos = esc + 2
            continue
        if marker == LONG_FORM:
            if esc + 4 > end:
                raise CorruptStreamError("Truncated long-form replacement", esc)
            rank = SHORT_SLOTS + data[esc + 2] + (data[esc + 3] << 8)
            pos = esc + 4
        else:
            rank = marker
            pos = esc + 2
        if rank >= size:
            raise CorruptStreamError(f"Unknown pattern rank {rank}", esc)
        out.append(entries[rank])
    return b"".join(out)


def level1_savings(text: bytes, dictionary: Dictionary) -> int:
    """Bytes removed by level 1 (negative when literal escapes dominate)."""
    lookup = dictionary.replacements
    saved = 0
    for match in _LEVEL1_RE.finditer(text):
        unit = match.group()
        if unit == _ESCAPE_BYTE:
            saved -= 1
            continue
        replacement = lookup.get(unit)
        if replacement is not None:
            saved += len(unit) - len(replacement)
    return saved
