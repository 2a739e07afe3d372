"""Deterministic report serialization.

Reruns with the same configuration must produce byte-identical files,
so JSON objects are emitted with sorted keys, floats are rounded to 17
significant digits (the double-precision round-trip length) before
encoding, complex numbers become [re, im] pairs, and non-finite values
become null.  CSV cells use the same 17-digit format directly.
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np


def _normalize(obj):
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [_normalize(z.real), _normalize(z.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.17g}")
    if isinstance(obj, np.ndarray):
        return [_normalize(v) for v in obj.tolist()]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")


def canonical_json(obj) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return f"{z.real:.17g}{z.imag:+.17g}j"
    x = float(value)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return f"{x:.17g}"


def csv_table(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def output_dir(explicit=None, config_value=None,
               env_var: str = "TTOLAB_OUTPUT_DIR") -> Path:
    """Output directory priority: flag > environment > config > default."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(env_var)
    if env:
        return Path(env)
    if config_value:
        return Path(config_value)
    return Path("ttolab-out")
