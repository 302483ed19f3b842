"""
Descriptor Reader - Read a family descriptor from the command line.

The --family flag accepts either inline JSON or ``@path`` naming a UTF-8 JSON
file. Relative paths resolve against the working directory first and the
project root second.
"""

from pathlib import Path
import logging

from lightlike_solitons.errors import DescriptorError

logger = logging.getLogger(__name__)

# src/lightlike_solitons/tools/descriptor_reader.py -> project root
PROJECT_ROOT = Path(__file__).parent.parent.parent.parent


def resolve_path(raw: str) -> Path:
    path = Path(raw).expanduser()
    if path.is_absolute() or path.exists():
        return path
    candidate = PROJECT_ROOT / path
    return candidate if candidate.exists() else path


def read_descriptor_text(value: str) -> str:
    """
    Return the JSON text behind a --family value.

    Raises:
        DescriptorError: empty value, or an ``@path`` that cannot be read
    """
    value = (value or "").strip()
    if not value:
        raise DescriptorError("empty family descriptor")
    if not value.startswith("@"):
        return value

    path = resolve_path(value[1:])
    logger.debug("Reading family descriptor from %s", path.resolve())
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DescriptorError(f"cannot read descriptor file {path}: {e}") from e
