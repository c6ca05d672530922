import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler


def setup_logging(level=logging.INFO, console: Optional[Console] = None):
    """Route all package logging through a single rich handler on stderr."""
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console or Console(stderr=True), rich_tracebacks=True)],
        force=True,
    )
    return logging.getLogger("hierarchical_huffman")
