"""Two-level text compressor: pattern substitution followed by Huffman coding."""

from .core import Dictionary, MiningParams, compress, decompress, inspect, mine

__version__ = "1.0.0"
__all__ = ["Dictionary", "MiningParams", "compress", "decompress", "inspect", "mine"]
