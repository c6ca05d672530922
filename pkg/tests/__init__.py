"""Test suite for hierarchical-huffman."""

__all__ = []
