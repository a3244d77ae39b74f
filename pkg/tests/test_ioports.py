from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from lgswitch.harness.ioports import (
    MANIFEST_FILE,
    RESULT_FILE,
    TABLE_FILE,
    read_manifest,
    round_float,
    to_jsonable,
    write_run,
)


def test_to_jsonable():
    data = {
        (1, -1): 1. + 2.j,
        "nan": np.float64(np.nan),
        "array": np.array([1, 2]),
        "flag": np.bool_(True),
        "path": Path("runs/lgi"),
        "third": 1. / 3.,
    }
    assert to_jsonable(data) == {
        "1,-1": {"real": 1., "imag": 2.},
        "nan": "nan",
        "array": [1, 2],
        "flag": True,
        "path": "runs/lgi",
        "third": 0.333333333333,
    }


def test_rounding_removes_noise():
    assert round_float(0.1 + 0.2) == 0.3
    assert round_float(-0.125 + 1e-17) == -0.125


@pytest.mark.parametrize("fmt, files", [
    ("json", [RESULT_FILE]),
    ("csv", [TABLE_FILE]),
    ("both", [RESULT_FILE, TABLE_FILE]),
])
def test_write_run(tmp_path, settings, fmt, files):
    table = pd.DataFrame({"m1": [1, -1], "q": [0.75, 0.25]})
    manifest = write_run(tmp_path, "quasiprob", "abc", {"total": 1.}, table, fmt=fmt, seed=3)
    assert manifest.files == files
    assert sorted(path.name for path in tmp_path.iterdir()) == sorted([*files, MANIFEST_FILE])

    stored = read_manifest(tmp_path)
    assert stored == manifest
    assert stored.version == settings.VERSION


def test_write_run_rejects_format(tmp_path):
    with pytest.raises(ValueError):
        write_run(tmp_path, "lgi", "abc", {}, pd.DataFrame(), fmt="xlsx")
