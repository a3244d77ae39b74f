import hashlib
import json
from io import StringIO
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from lgswitch.harness.base import EXIT_CONFIG, EXIT_INVARIANT
from lgswitch.harness.checks import CheckResult, random_scenarios, run_checks
from lgswitch.harness.ioports import MANIFEST_FILE, RESULT_FILE, TABLE_FILE
from lgswitch.linalg.tolerances import Tolerances

CONFIG_DIR = Path(__file__).parent.parent / "configs"


def run(command, config=None, **options):
    """Call ``command`` with a file from ``configs`` and return what it printed."""
    stdout = StringIO()
    if config is not None:
        options["config"] = CONFIG_DIR / config
    call_command(command, stdout=stdout, **options)
    return stdout.getvalue()


def read_result(out_dir):
    with open(out_dir / RESULT_FILE, encoding="utf-8") as json_file:
        return json.load(json_file)


def test_quasiprob(tmp_path):
    output = run("quasiprob", "precession.yaml", out=tmp_path)
    assert "quasiprob wrote" in output

    result = read_result(tmp_path)
    assert np.isclose(result["three_time"]["total"], 1.)
    assert set(result["two_time"]) == {"12", "13", "23"}
    assert result["three_time"]["marginals"]["holds"]
    assert "pure_form" in result["three_time"]

    table = pd.read_csv(tmp_path / TABLE_FILE)
    assert len(table) == 3 * 4 + 8

    manifest = json.loads((tmp_path / MANIFEST_FILE).read_text(encoding="utf-8"))
    text = (CONFIG_DIR / "precession.yaml").read_text(encoding="utf-8")
    assert manifest["command"] == "quasiprob"
    assert manifest["config_digest"] == hashlib.sha256(text.encode("utf-8")).hexdigest()
    assert manifest["files"] == [RESULT_FILE, TABLE_FILE]
    assert manifest["seed"] == 42


def test_output_is_reproducible(tmp_path):
    run("quasiprob", "precession.yaml", out=tmp_path / "first")
    run("quasiprob", "precession.yaml", out=tmp_path / "second")
    for name in (RESULT_FILE, TABLE_FILE):
        first, second = (tmp_path / run_dir / name for run_dir in ("first", "second"))
        assert first.read_bytes() == second.read_bytes()


def test_lgi_violated(tmp_path):
    run("lgi", "equal_spacing_pi3.yaml", out=tmp_path)
    result = read_result(tmp_path)
    assert result["violated"]
    assert result["violations"]["K3"] > 0
    k3_values = [row["value"] for row in result["rows"] if row["family"] == "K3"]
    assert np.isclose(min(k3_values), -0.5)
    assert len(pd.read_csv(tmp_path / TABLE_FILE)) == 36


def test_lgi_static(tmp_path):
    run("lgi", "static.yaml", out=tmp_path)
    assert not read_result(tmp_path)["violated"]


def test_default_output_dir(tmp_path, settings):
    settings.OUTPUT_DIR = tmp_path
    run("lgi", format="json")
    assert (tmp_path / "lgi" / RESULT_FILE).exists()
    assert not (tmp_path / "lgi" / TABLE_FILE).exists()


def test_switch_negative(tmp_path):
    run("switch", "switch_negative.yaml", out=tmp_path)
    result = read_result(tmp_path)
    assert "failure" not in result
    assert result["input_is_plus"]
    assert np.isclose(result["q_switch"], -0.125)
    assert np.isclose(result["q_formula"], -0.125)
    assert np.isclose(result["total_probability"], 1.)
    assert result["closed_form_residual"] < 1e-10


def test_switch_plus_z(tmp_path):
    run("switch", "switch_plus_z.yaml", out=tmp_path)
    result = read_result(tmp_path)
    assert np.isclose(result["q_switch"], 0.5)
    assert np.isclose(result["postselected_probabilities"]["psi3,+"], 0.125)


def test_sweep(tmp_path):
    run("sweep", "sweep_min_k3.yaml", out=tmp_path)
    result = read_result(tmp_path)
    assert result["free"] == ["theta12"]
    assert result["equal_spacing"]
    assert np.isclose(result["search"]["best_value"], -0.5)
    assert result["revalidation_residual"] == 0.
    grid = pd.read_csv(tmp_path / TABLE_FILE)
    assert list(grid.columns) == ["theta12", "value"]
    assert len(grid) == 48


def test_sweep_with_survey(tmp_path):
    config = tmp_path / "survey.yaml"
    config.write_text(
        "sweep:\n"
        "  objective: min_combo\n"
        "  resolution: 6\n"
        "  free: [theta12]\n"
        "survey:\n"
        "  samples: 20\n"
        "  max_records: 1\n"
        "  free: [purity, theta12]\n",
        encoding="utf-8",
    )
    call_command(
        "sweep", config=config, out=tmp_path / "run", survey=True, seed=5, stdout=StringIO(),
    )
    result = read_result(tmp_path / "run")
    assert result["survey"]["samples"] == 20
    assert result["survey"]["free"] == ["purity", "theta12"]
    assert result["survey"]["implication_holds"]
    assert "failure" not in result


def test_verify(tmp_path):
    output = run("verify", samples=3, out=tmp_path)
    assert "FAIL" not in output
    result = read_result(tmp_path)
    assert result["passed"]
    assert result["samples"] == 3


def test_verify_output_is_reproducible(tmp_path):
    first, second = (run("verify", samples=3, out=tmp_path / name) for name in ("a", "b"))
    assert first.splitlines()[:-1] == second.splitlines()[:-1]
    for name in (RESULT_FILE, TABLE_FILE):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_invalid_config_exits_with_2(tmp_path):
    config = tmp_path / "broken.yaml"
    config.write_text("state:\n  purity: 2\n", encoding="utf-8")
    with pytest.raises(CommandError) as exc_info:
        call_command("lgi", config=config, out=tmp_path / "run", stdout=StringIO())
    assert exc_info.value.returncode == EXIT_CONFIG
    assert "broken.yaml:2: state.purity" in str(exc_info.value)
    assert not (tmp_path / "run").exists()


def test_sweep_rejects_tilted_measurement(tmp_path):
    config = tmp_path / "tilted.yaml"
    config.write_text("measurement:\n  axis: [0, 1, 1]\n", encoding="utf-8")
    with pytest.raises(CommandError) as exc_info:
        call_command("sweep", config=config, out=tmp_path / "run", stdout=StringIO())
    assert exc_info.value.returncode == EXIT_CONFIG
    assert "tilted.yaml:2: measurement.axis" in str(exc_info.value)


def test_failed_invariant_exits_with_1(tmp_path, settings):
    settings.LGSWITCH_TOLERANCES = {"identity": -1., "pipeline": -1.}
    with pytest.raises(CommandError) as exc_info:
        run("verify", samples=2, out=tmp_path)
    assert exc_info.value.returncode == EXIT_INVARIANT


def test_run_checks():
    results = run_checks(samples=4, seed=1, tol=Tolerances())
    names = [check.name for check in results]
    assert len(names) == len(set(names))
    assert all(check.passed for check in results), [c.name for c in results if not c.passed]
    gap = next(check for check in results if check.name == "sequential_nsit_gap")
    assert np.isclose(gap.max_residual, 0.5)


def test_check_result_directions():
    assert not CheckResult("a", "", max_residual=0.1, tolerance=1e-3, evaluations=1).passed
    assert CheckResult("b", "", 0.5, 0.4, 1, minimum=True).passed
    assert not CheckResult("c", "", 0.3, 0.4, 1, minimum=True).passed


def test_random_scenarios_are_seeded():
    first = [params for params, _ in random_scenarios(3, seed=9)]
    second = [params for params, _ in random_scenarios(3, seed=9)]
    assert first == second
    assert all(scenario.initial.is_pure for _, scenario in random_scenarios(3, 9, pure=True))
