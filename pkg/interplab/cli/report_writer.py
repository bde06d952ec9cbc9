"""
Report serialization: JSON documents to stdout or an output path, curves
to two-column CSV files.
"""

import logging
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Tuple

from interplab.models.report import ReportDocument

logger = logging.getLogger(__name__)


def _write_atomic(file_path: Path, text: str, suffix: str) -> None:
    """
    Atomically write text (atomic rename pattern).

    Raises:
        OSError: if the target directory is missing or not writable
    """
    fd, tmp_path = tempfile.mkstemp(dir=file_path.parent, prefix=".tmp_", suffix=suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, file_path)
    except Exception as e:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise e


def emit_json(document: ReportDocument, out: Optional[str] = None, with_timestamp: bool = True) -> str:
    """
    Serialize the document; write it to out when given, to stdout otherwise.

    Returns:
        The JSON text
    """
    text = document.to_json(with_timestamp) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        _write_atomic(Path(out), text, ".json")
        logger.info("report written to %s", out)
    return text


def format_csv(curve: Iterable[Tuple[float, float]]) -> str:
    lines = ["t,value"]
    for t, value in curve:
        t, value = float(t), float(value)
        if not (math.isfinite(t) and math.isfinite(value)):
            raise ValueError(f"Curve point ({t}, {value}) is not finite")
        lines.append(f"{format(t, '.17g')},{format(value, '.17g')}")
    return "\n".join(lines) + "\n"


def emit_csv(curve: Iterable[Tuple[float, float]], path: str) -> None:
    """
    Write a t,value CSV with 17 significant digits.

    Raises:
        ValueError: for a non-finite point
        OSError: for an unwritable path
    """
    _write_atomic(Path(path), format_csv(curve), ".csv")
    logger.info("curve written to %s", path)
