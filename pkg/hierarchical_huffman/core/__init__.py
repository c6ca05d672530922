"""Hierarchical Huffman - core module.

Level 1 replaces mined frequent patterns with short escape-coded strings,
level 2 is classical byte-level Huffman coding.
"""

from .container import ContainerInfo, compress, decompress, inspect
from .dictionary import EMPTY_DICTIONARY, Dictionary, DictionaryCache
from .exceptions import (
    CorruptStreamError,
    CoverageError,
    DegenerateInputError,
    DictionaryMismatchError,
    DictionaryMissingError,
    FormatError,
    HierarchicalHuffmanError,
    RankOutOfRangeError,
    RejectedKeywordError,
    TrailingGarbageError,
    TruncationError,
    UnknownPatternError,
)
from .miner import MiningParams, mine
from .transform import decode_level1, encode_level1

__all__ = [
    "ContainerInfo",
    "CorruptStreamError",
    "CoverageError",
    "DegenerateInputError",
    "Dictionary",
    "DictionaryCache",
    "DictionaryMismatchError",
    "DictionaryMissingError",
    "EMPTY_DICTIONARY",
    "FormatError",
    "HierarchicalHuffmanError",
    "MiningParams",
    "RankOutOfRangeError",
    "RejectedKeywordError",
    "TrailingGarbageError",
    "TruncationError",
    "UnknownPatternError",
    "compress",
    "decode_level1",
    "decompress",
    "encode_level1",
    "inspect",
    "mine",
]
