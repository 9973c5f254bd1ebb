# simulations/services/csv_writer.py

import logging
import sys
from pathlib import Path

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def to_csv_text(frame):
    """CSV text: header row, 17 significant digits, LF line endings."""
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_csv(frame, out=None, stream=None):
    """
    Write ``frame`` to the path ``out``, or to ``stream`` (stdout by
    default) when no path is given. Returns the path written, if any.
    """
    text = to_csv_text(frame)
    if out is None:
        (stream or sys.stdout).write(text)
        return None

    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path
