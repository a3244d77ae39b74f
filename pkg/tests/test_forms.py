import hashlib
from pathlib import Path

import numpy as np
import pytest
from django.core.exceptions import ValidationError

from lgswitch.harness.forms import (
    SECTION_FORMS,
    AngleField,
    ConfigError,
    VectorField,
    load_config,
    parse_config,
)
from lgswitch.linalg.core import SIGMA_Y
from lgswitch.search.survey import default_survey_space

CONFIG_DIR = Path(__file__).parent.parent / "configs"


@pytest.mark.parametrize("text, expected", [
    ("pi", np.pi),
    ("pi/3", np.pi / 3.),
    ("2*pi/3", 2. * np.pi / 3.),
    ("-pi / 2", -np.pi / 2.),
    ("2pi", 2. * np.pi),
    ("0.25", 0.25),
    (1.5, 1.5),
])
def test_angle_field(text, expected):
    assert np.isclose(AngleField().clean(text), expected)


@pytest.mark.parametrize("text", ["pie", "pi/0", "3*"])
def test_angle_field_rejects(text):
    with pytest.raises(ValidationError):
        AngleField().clean(text)


def test_vector_field():
    assert VectorField().clean([0, 1, 0]) == [0., 1., 0.]
    for value in ([0., 0., 0.], [1., 2.], "z", [1., "a", 0.]):
        with pytest.raises(ValidationError):
            VectorField().clean(value)


def test_defaults():
    config = load_config(None)
    assert set(config.sections) == set(SECTION_FORMS)
    assert config["state"]["purity"] == 1.
    assert config["measurement"]["lam"] == 1.
    assert config["switch"]["convention"] == "phased"
    assert config["sweep"]["free"] == ["state_theta", "state_phi", "theta12"]
    assert not config["sweep"]["equal_spacing"]
    assert config.digest == hashlib.sha256(b"").hexdigest()


def test_lambda_alias():
    config = parse_config("measurement:\n  lambda: 0.5\n")
    assert config["measurement"]["lam"] == 0.5
    assert config.scenario().lam == 0.5


def test_error_carries_line_number():
    text = "state:\n  theta: pi/2\n  purity: 1.5\n"
    with pytest.raises(ConfigError) as exc_info:
        parse_config(text, Path("broken.yaml"))
    messages = exc_info.value.messages
    assert len(messages) == 1
    assert messages[0].startswith("broken.yaml:3: state.purity:")


def test_all_errors_are_collected():
    text = (
        "state:\n"
        "  spin: 1\n"
        "plot:\n"
        "  dpi: 300\n"
        "measurement:\n"
        "  lambda: 0\n"
    )
    with pytest.raises(ConfigError) as exc_info:
        parse_config(text)
    messages = exc_info.value.messages
    assert "<config>:2: state.spin: unknown key" in messages
    assert "<config>:3: unknown section 'plot'" in messages
    assert "<config>:6: measurement.lambda: Unsharpness must be positive" in messages


def test_times_must_be_ordered():
    with pytest.raises(ConfigError) as exc_info:
        parse_config("times:\n  t1: 1\n  t2: 0.5\n")
    assert exc_info.value.messages == ["<config>:3: times.t2: t2 must not precede t1"]


def test_switch_times_must_be_ordered():
    with pytest.raises(ConfigError) as exc_info:
        parse_config("switch:\n  i: 2\n  j: 1\n")
    assert exc_info.value.messages == ["<config>:3: switch.j: j must be later than i"]


@pytest.mark.parametrize("text, fragment", [
    ("state: [\n", "invalid YAML"),
    ("- state\n- times\n", "must be a mapping of sections"),
    ("state: 3\n", "section state must be a mapping"),
    ("switch:\n  convention: lossy\n", "switch.convention"),
    ("sweep:\n  free: [spin]\n", "sweep.free"),
])
def test_invalid_configurations(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text)


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read configuration"):
        load_config(tmp_path / "missing.yaml")


def test_scenario_from_file():
    config = load_config(CONFIG_DIR / "precession.yaml")
    scenario = config.scenario()
    assert scenario.times == (0., 1., 2.)
    assert np.allclose(scenario.hamiltonian, 0.5 * SIGMA_Y)
    assert scenario.initial.is_pure
    assert config.path == CONFIG_DIR / "precession.yaml"


def test_pi_expressions_in_file():
    config = load_config(CONFIG_DIR / "equal_spacing_pi3.yaml")
    params = config.scenario_params()
    assert np.isclose(params["theta12"], np.pi / 3.)
    assert np.isclose(params["theta23"], np.pi / 3.)
    assert params["purity"] == 0.
    assert np.isclose(params["axis_phi"], np.pi / 2.)


def test_search_space_from_file():
    space = load_config(CONFIG_DIR / "sweep_min_k3.yaml").search_space()
    assert space.names == ["theta12"]
    assert space.equal_spacing
    assert space.fixed["purity"] == 0.
    assert "theta23" not in space.fixed


def test_switch_config_from_file():
    config = load_config(CONFIG_DIR / "switch_negative.yaml")
    switch_config = config.switch_config()
    assert switch_config.is_projective()
    assert switch_config.convention.name == "phased"
    assert np.allclose(switch_config.system_input, [1. / np.sqrt(2.), 1. / np.sqrt(2.)])


def test_search_space_needs_z_measurement():
    text = "sweep:\n  free: [theta12]\nmeasurement:\n  axis: [1, 0, 0]\n"
    config = parse_config(text, Path("tilted.yaml"))
    assert np.allclose(config.scenario().observable(1).bloch, [1., 0., 0.])
    for space in (config.search_space, config.survey_space):
        with pytest.raises(ConfigError) as exc_info:
            space()
        assert exc_info.value.messages[0].startswith("tilted.yaml:4: measurement.axis:")


def test_survey_space():
    default = load_config(None).survey_space()
    assert default.names == default_survey_space().names
    assert default.fixed == {"omega": 1., "lam": 1.}

    config = parse_config("survey:\n  free: [purity]\nstate:\n  theta: pi/2\n")
    space = config.survey_space()
    assert space.names == ["purity"]
    assert np.isclose(space.fixed["state_theta"], np.pi / 2.)
    assert "purity" not in space.fixed
