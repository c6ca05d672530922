"""Custom exceptions for hierarchical-huffman."""

from typing import Optional


class HierarchicalHuffmanError(Exception):
    """Base exception for all hierarchical-huffman errors."""
    pass


class FormatError(HierarchicalHuffmanError):
    """Raised when a dictionary blob, code table or container is malformed."""
    pass


class CorruptStreamError(FormatError):
    """Raised when a level-1 stream violates the escape grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class TruncationError(FormatError):
    """Raised when a bit stream or payload ends before all symbols are read."""
    pass


class TrailingGarbageError(FormatError):
    """Raised when bits after the last symbol are not zero padding."""
    pass


class UnknownPatternError(HierarchicalHuffmanError):
    """Raised when a replacement string refers to a rank the dictionary lacks."""
    pass


class RankOutOfRangeError(HierarchicalHuffmanError, IndexError):
    """Raised when a rank outside the dictionary is requested."""
    pass


class CoverageError(HierarchicalHuffmanError):
    """Raised when a symbol to encode has no codeword in the code book."""

    def __init__(self, symbol: int):
        super().__init__(f"Symbol 0x{symbol:02X} is not covered by the code book")
        self.symbol = symbol


class RejectedKeywordError(HierarchicalHuffmanError):
    """Raised when a domain keyword is not a single token of minimum length."""

    def __init__(self, keyword: bytes, reason: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"Rejected keyword {keyword!r}{where}: {reason}")
        self.keyword = keyword
        self.line = line


class DictionaryMismatchError(HierarchicalHuffmanError):
    """Raised when the resolved dictionary does not match the container digest."""
    pass


class DictionaryMissingError(HierarchicalHuffmanError):
    """Raised when a container needs an external dictionary nobody supplied."""
    pass


class DegenerateInputError(HierarchicalHuffmanError):
    """Raised when a benchmark is asked to measure an empty input."""
    pass


class ConfigurationError(HierarchicalHuffmanError):
    """Raised when configuration is invalid or missing."""
    pass
