"""
Logic:
- Writes tables as CSV (fixed column order, '.' decimals, '\\n' line endings) or JSON records
- Writes single documents (an evaluated scenario) as indented JSON
- Targets stdout unless --out names a file
"""

import json
import logging
import sys
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


def render_frame(frame, fmt="csv"):
    """
    Input: DataFrame and output format
    Process: CSV without index, or a JSON array of records
    Output: text
    """
    if fmt == "json":
        return frame.to_json(orient="records", double_precision=15, indent=2) + "\n"
    return frame.to_csv(index=False, lineterminator="\n")


def render_document(document):
    return json.dumps(document, indent=2, sort_keys=False) + "\n"


def emit(text, out=None):
    """
    Input: rendered text and an optional output path
    Process: Writes to the file (creating parent directories) or to stdout
    Output: None
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error(f"Error writing {path}: {str(e)}")
        raise
    logger.info(f"Wrote {path}")


def emit_frame(frame, fmt="csv", out=None):
    emit(render_frame(frame, fmt), out)


def rows_frame(rows, columns):
    return pd.DataFrame(rows, columns=columns)
