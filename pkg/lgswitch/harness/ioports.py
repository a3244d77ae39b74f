"""
Writing the results of a run to its output directory.

Every run produces up to three files: ``result.json`` with the full nested result,
``table.csv`` with the flat table (written through ``pandas``), and ``manifest.json``
describing the run. Floats in both data files are rounded to the configured number of
significant digits (``LGSWITCH_FLOAT_FORMAT``), so that identical runs produce
byte-identical files.
"""
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from django.conf import settings
from django.utils import timezone

logger = logging.getLogger(__name__)

RESULT_FILE = "result.json"
TABLE_FILE = "table.csv"
MANIFEST_FILE = "manifest.json"
FORMATS = ("json", "csv", "both")


def float_format() -> str:
    return getattr(settings, "LGSWITCH_FLOAT_FORMAT", "%.12g")


def round_float(value: float) -> float:
    """Round ``value`` to the configured significant digits."""
    return float(float_format() % value)


def to_jsonable(obj: Any) -> Any:
    """Recursively convert ``obj`` into JSON-compatible types with rounded floats.

    Complex numbers become ``{"real": ..., "imag": ...}``, tuple keys are joined with
    commas, and non-finite floats become strings.
    """
    if isinstance(obj, dict):
        return {_key(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": to_jsonable(obj.real), "imag": to_jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            return str(obj)
        return round_float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _key(key: Any) -> str:
    if isinstance(key, tuple):
        return ",".join(str(part) for part in key)
    return str(key)


@dataclass
class RunManifest:
    """Provenance of one run."""
    command: str
    config_digest: str
    version: str
    seed: Optional[int]
    timestamp: str
    files: List[str] = field(default_factory=list)


def write_json(path: Path, data: Any):
    with open(path, "w", encoding="utf-8") as json_file:
        json.dump(to_jsonable(data), json_file, indent=2, sort_keys=True)
        json_file.write("\n")


def write_table(path: Path, table: pd.DataFrame):
    table.to_csv(path, index=False, float_format=float_format(), lineterminator="\n")


def write_run(
    out_dir: Path,
    command: str,
    config_digest: str,
    result: Dict[str, Any],
    table: pd.DataFrame,
    fmt: str = "both",
    seed: Optional[int] = None,
) -> RunManifest:
    """Write the result files of a run and its manifest into ``out_dir``."""
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r}, choose from {FORMATS}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    files = []
    if fmt in ("json", "both"):
        write_json(out_dir / RESULT_FILE, result)
        files.append(RESULT_FILE)
    if fmt in ("csv", "both"):
        write_table(out_dir / TABLE_FILE, table)
        files.append(TABLE_FILE)

    manifest = RunManifest(
        command=command,
        config_digest=config_digest,
        version=settings.VERSION,
        seed=seed,
        timestamp=timezone.now().isoformat(),
        files=files,
    )
    write_json(out_dir / MANIFEST_FILE, asdict(manifest))
    logger.info(f"Wrote {files} and {MANIFEST_FILE} to {out_dir}")
    return manifest


def read_manifest(out_dir: Path) -> RunManifest:
    with open(Path(out_dir) / MANIFEST_FILE, "r", encoding="utf-8") as json_file:
        return RunManifest(**json.load(json_file))
