"""
Deterministic report writers (JSON with sorted keys, CSV with 17 significant digits).
"""
from typing import Dict, Any, List, Optional, Union
import json
import logging
import os

import numpy as np
import pandas as pd

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """
    Convert numpy scalars, arrays and complex numbers into JSON-friendly values.

    Complex numbers become [re, im] pairs, matching the symbol schema.

    Args:
        value (Any): Value to convert

    Returns:
        Any: JSON-serializable value
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps_report(report: Dict[str, Any]) -> str:
    """
    Serialize a report deterministically.

    Args:
        report (Dict[str, Any]): Report dictionary

    Returns:
        str: JSON text with sorted keys and a trailing newline
    """
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_json(report: Dict[str, Any], path: Optional[str]) -> str:
    """
    Write a report as JSON to a file, or return the text when no path is given.

    Args:
        report (Dict[str, Any]): Report dictionary
        path (Optional[str]): Destination file

    Returns:
        str: The serialized text
    """
    text = dumps_report(report)
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        logger.info(f"Wrote JSON report to {path}")
    return text


def write_csv(rows: Union[pd.DataFrame, List[Dict[str, Any]]], path: str) -> None:
    """
    Write rows to CSV with 17-significant-digit floats.

    Args:
        rows (Union[pd.DataFrame, List[Dict[str, Any]]]): Table to write
        path (str): Destination file
    """
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(rows)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
