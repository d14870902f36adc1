"""
Logic:
- Provides utility functions shared by the engine and the command line
- Includes a decorator that records model failures in-row instead of aborting a sweep
- Parses grid specifications ("3,5,7", "log:0.1:1000:25", "lin:0:1:5")
- Parses the parenthetical uncertainty notation used by fitted parameters, e.g. 5.29(16)
"""

import logging
import re
from functools import wraps

import numpy as np

logger = logging.getLogger(__name__)

_UNCERTAINTY = re.compile(
    r"^\s*(?P<mantissa>\d*\.?\d+)\((?P<sigma>\d+(?:\.\d+)?)\)(?:e(?P<exp>[+-]?\d+))?\s*$"
)


def record_failures(*exceptions, error_key="error"):
    """
    Input: exception types to capture and the key the message is stored under
    Process: Calls the function; on a captured exception returns a row holding the message
    Output: Decorated function returning either its own dict row or an error row
    """
    captured = exceptions or (Exception,)

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                row = func(*args, **kwargs)
            except captured as e:
                logger.warning(f"Error evaluating {func.__name__}: {str(e)}")
                return {error_key: str(e)}
            row.setdefault(error_key, "")
            return row
        return wrapper
    return decorator


def parse_grid(text, cast=float):
    """
    Input: grid text, either a comma list or "log:start:stop:num" / "lin:start:stop:num"
    Process: Expands the text into a list of values in the written order
    Output: List of values converted with cast
    """
    text = str(text).strip()
    if not text:
        return []
    if text.startswith(("log:", "lin:")):
        kind, start, stop, num = text.split(":")
        num = int(num)
        if kind == "log":
            values = np.geomspace(float(start), float(stop), num)
        else:
            values = np.linspace(float(start), float(stop), num)
        if cast is int:
            # integer log grids collapse near the low end
            return list(dict.fromkeys(int(round(v)) for v in values.tolist()))
        values = [cast(v) for v in values.tolist()]
        return values
    return [cast(item) for item in text.split(",") if item.strip()]


def parse_uncertainty(text):
    """
    Input: a value in parenthetical notation such as "5.29(16)", "6.56(1.23)e2" or "9.81(101)e-3"
    Process: The digits in parentheses are the standard deviation in units of the last
             mantissa digit; a decimal point inside the parentheses gives it in mantissa units
    Output: (value, sigma) tuple of floats
    """
    match = _UNCERTAINTY.match(text)
    if match is None:
        raise ValueError(f"not in value(sigma) notation: {text!r}")
    mantissa = match.group("mantissa")
    sigma = match.group("sigma")
    exponent = int(match.group("exp") or 0)
    value = float(f"{mantissa}e{exponent}")
    if "." in sigma:
        return value, float(f"{sigma}e{exponent}")
    decimals = len(mantissa.split(".")[1]) if "." in mantissa else 0
    return value, float(f"{sigma}e{exponent - decimals}")
