"""
Writers for the command-line outputs.

- CSV through pandas, 17 significant digits, NaN as empty field, preceded by
  a "# lightlike-solitons <version>" line
- Wavefront OBJ meshes (v / f records, 1-based faces)
- JSON reports, written to a temporary file first and then moved into place

Nothing written here carries a timestamp, so equal inputs give equal bytes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Optional, TextIO, Union

import pandas as pd
from pydantic import BaseModel

from lightlike_solitons import __version__
from lightlike_solitons.grid import Mesh

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
HEADER = f"# lightlike-solitons {__version__}\n"

PathLike = Union[str, Path]


def _emit(text: str, out: Optional[PathLike], stream: Optional[TextIO]):
    """Write to ``out`` atomically, or to ``stream`` when no path is given."""
    if out is None:
        if stream is not None:
            stream.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    tmp.replace(path)
    logger.info("Wrote %s", path.resolve())


def frame_to_csv(frame: pd.DataFrame) -> str:
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return HEADER + body


def write_csv(frame: pd.DataFrame, out: Optional[PathLike] = None, stream: Optional[TextIO] = None) -> str:
    text = frame_to_csv(frame)
    _emit(text, out, stream)
    return text


def mesh_to_obj(mesh: Mesh, name: str = "surface") -> str:
    lines = [HEADER.rstrip("\n"), f"o {name}"]
    lines += ["v " + " ".join(format(float(c), ".17g") for c in v) for v in mesh.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces]
    return "\n".join(lines) + "\n"


def write_obj(mesh: Mesh, out: Optional[PathLike] = None, stream: Optional[TextIO] = None, name: str = "surface") -> str:
    text = mesh_to_obj(mesh, name)
    _emit(text, out, stream)
    return text


def to_jsonable(data: Any) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json")
    if isinstance(data, list):
        return [to_jsonable(d) for d in data]
    return data


def dump_json(data: Any) -> str:
    return json.dumps(to_jsonable(data), indent=2, ensure_ascii=False) + "\n"


def write_json(data: Any, out: Optional[PathLike] = None, stream: Optional[TextIO] = None) -> str:
    text = dump_json(data)
    _emit(text, out, stream)
    return text


def write_text(text: str, out: Optional[PathLike] = None, stream: Optional[TextIO] = None) -> str:
    _emit(text, out, stream)
    return text
