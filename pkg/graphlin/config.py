import logging
import os

try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    pass

LOG_LEVEL = os.getenv("GRAPHLIN_LOG", "WARNING").upper()
DEFAULT_JOBS = int(os.getenv("GRAPHLIN_JOBS", 1))
CHUNK_SIZE = int(os.getenv("GRAPHLIN_CHUNK_SIZE", 64))
DEFAULT_BRACKET_K = int(os.getenv("GRAPHLIN_BRACKET_K", 2))
DEFAULT_BITS_K = int(os.getenv("GRAPHLIN_BITS_K", 3))

# reserved relation for artificial (dummy / null) arcs
NULL_RELATION = "NULL"
EMPTY_FIELD = "_"


def setup_logging(verbosity: int = 0) -> None:
    """Route library logging through rich on stderr."""
    from rich.console import Console
    from rich.logging import RichHandler

    level = logging.getLevelName(LOG_LEVEL)
    if not isinstance(level, int):
        level = logging.WARNING
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG

    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
