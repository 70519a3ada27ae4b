from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Filesystem path of a file shipped in ``alertscope/data``."""
    return Path(str(resources.files("alertscope") / "data" / Path(*parts)))
