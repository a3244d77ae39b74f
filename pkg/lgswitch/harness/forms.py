"""
Validation of YAML run configurations.

Each section of a configuration file is bound to one `SectionForm`. Missing keys take
the field's initial value, unknown keys are errors, and every error message carries
the line of the offending key (or of its section) in the file, e.g.

    configs/broken.yaml:7: state.purity: Ensure this value is less than or equal to 1.

The cleaned sections are collected in a `RunConfig`, which knows how to turn them into
an `LGScenario`, a `SwitchConfig` and a `SearchSpace`.
"""
import hashlib
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml
from django import forms
from django.core.exceptions import ValidationError
from django.core.validators import MaxValueValidator, MinValueValidator

from ..lgengine.observables import DichotomicObservable, LGScenario, QuantumState
from ..linalg.core import bloch_operator, max_abs_diff
from ..linalg.tolerances import DEFAULT_TOLERANCES
from ..loggers import FormLoggerMixin
from ..search.objectives import OBJECTIVES
from ..search.space import PARAMETERS, SearchSpace
from ..search.survey import SURVEY_PARAMETERS
from ..switch.config import PLUS, CONVENTIONS, SwitchConfig

logger = logging.getLogger(__name__)

ANGLE_PATTERN = re.compile(
    r"^\s*(?P<sign>-?)\s*(?P<factor>[0-9.]*)\s*\*?\s*pi\s*(?:/\s*(?P<divisor>[0-9.]+))?\s*$"
)
SYSTEM_INPUTS = {
    "plus": PLUS,
    "H": np.array([1., 0.], dtype=np.complex128),
    "V": np.array([0., 1.], dtype=np.complex128),
}
OUTCOME_CHOICES = [(1, "+1"), (-1, "-1")]
TIME_CHOICES = [(1, "1"), (2, "2"), (3, "3")]


class ConfigError(Exception):
    """Raised when a run configuration cannot be parsed or fails validation."""

    def __init__(self, messages: List[str]):
        self.messages = list(messages)
        super().__init__("\n".join(self.messages))


class AngleField(forms.FloatField):
    """Float field that also accepts multiples of pi such as ``pi/3`` or
    ``-2*pi/3``."""

    def to_python(self, value):
        if isinstance(value, str):
            match = ANGLE_PATTERN.match(value)
            if match is not None:
                try:
                    factor = float(match["factor"] or 1.)
                    divisor = float(match["divisor"] or 1.)
                    sign = -1. if match["sign"] else 1.
                    return sign * factor * np.pi / divisor
                except (ValueError, ZeroDivisionError) as num_err:
                    raise ValidationError("Not a valid multiple of pi") from num_err
        return super().to_python(value)


class VectorField(forms.Field):
    """A list of ``length`` real numbers that must not all vanish."""

    def __init__(self, *args, length: int = 3, **kwargs):
        self.length = length
        super().__init__(*args, **kwargs)

    def to_python(self, value):
        if value in self.empty_values:
            return None
        if not isinstance(value, (list, tuple)) or len(value) != self.length:
            raise ValidationError(f"Expects a list of {self.length} numbers")
        try:
            vector = [float(entry) for entry in value]
        except (TypeError, ValueError) as type_err:
            raise ValidationError("Expects numbers") from type_err
        if np.linalg.norm(vector) == 0.:
            raise ValidationError("Vector must not be zero")
        return vector


class SectionForm(FormLoggerMixin, forms.Form):
    """Base form for one section of a run configuration."""
    section: str = ""
    aliases: Dict[str, str] = {}
    """YAML keys that differ from the field names."""

    @classmethod
    def bind(cls, data: Optional[Dict[str, Any]]) -> Tuple["SectionForm", List[str]]:
        """Bind ``data`` on top of the initial values. Returns the form and the
        YAML keys that name no field."""
        merged = {
            name: field.initial
            for name, field in cls.base_fields.items()
            if field.initial is not None
        }
        unknown = []
        for key, value in (data or {}).items():
            name = cls.aliases.get(key, key)
            if name in cls.base_fields:
                merged[name] = value
            else:
                unknown.append(key)
        return cls(data=merged), unknown

    @classmethod
    def yaml_key(cls, name: str) -> str:
        for key, alias in cls.aliases.items():
            if alias == name:
                return key
        return name


class StateForm(SectionForm):
    """Initial qubit state by Bloch angles and purity."""
    section = "state"
    theta = AngleField(
        initial=0.,
        validators=[MinValueValidator(0.), MaxValueValidator(np.pi)],
    )
    phi = AngleField(
        initial=0.,
        validators=[MinValueValidator(0.), MaxValueValidator(2. * np.pi)],
    )
    purity = forms.FloatField(initial=1., min_value=0., max_value=1.)


class HamiltonianForm(SectionForm):
    """Precession Hamiltonian ``(ω/2) n·σ``."""
    section = "hamiltonian"
    axis = VectorField(initial=[0., 1., 0.])
    omega = forms.FloatField(initial=1., min_value=0.)


class TimesForm(SectionForm):
    section = "times"
    t1 = AngleField(initial=0.)
    t2 = AngleField(initial=1.)
    t3 = AngleField(initial=2.)

    def clean(self) -> Dict[str, Any]:
        """Make sure the times are ordered."""
        cleaned_data = super().clean()
        t1, t2, t3 = (cleaned_data.get(name) for name in ("t1", "t2", "t3"))
        if None not in (t1, t2, t3):
            if t2 < t1:
                self.add_error("t2", ValidationError("t2 must not precede t1"))
            if t3 < t2:
                self.add_error("t3", ValidationError("t3 must not precede t2"))
        return cleaned_data


class MeasurementForm(SectionForm):
    """Observable measured at t₁ and unsharpness of the earlier measurement."""
    section = "measurement"
    aliases = {"lambda": "lam"}
    axis = VectorField(initial=[0., 0., 1.])
    lam = forms.FloatField(initial=1., max_value=1.)

    def clean_lam(self) -> float:
        lam = self.cleaned_data["lam"]
        if lam <= 0.:
            raise ValidationError("Unsharpness must be positive")
        return lam


class SwitchForm(SectionForm):
    """Outcome branch, measurement times and optics of the switch."""
    section = "switch"
    i = forms.TypedChoiceField(choices=TIME_CHOICES, coerce=int, initial=1)
    j = forms.TypedChoiceField(choices=TIME_CHOICES, coerce=int, initial=2)
    m_i = forms.TypedChoiceField(choices=OUTCOME_CHOICES, coerce=int, initial=1)
    m_j = forms.TypedChoiceField(choices=OUTCOME_CHOICES, coerce=int, initial=1)
    convention = forms.ChoiceField(
        choices=[(name, name) for name in CONVENTIONS], initial="phased",
    )
    input = forms.ChoiceField(
        choices=[(name, name) for name in SYSTEM_INPUTS], initial="plus",
    )
    aliases = {"lambda": "lam"}
    lam = forms.FloatField(initial=1., max_value=1.)

    def clean(self) -> Dict[str, Any]:
        """Check the order of the two measurement times."""
        cleaned_data = super().clean()
        i, j = cleaned_data.get("i"), cleaned_data.get("j")
        if i is not None and j is not None and i >= j:
            self.add_error("j", ValidationError("j must be later than i"))
        lam = cleaned_data.get("lam")
        if lam is not None and lam <= 0.:
            self.add_error("lam", ValidationError("Unsharpness must be positive"))
        return cleaned_data


class SweepForm(SectionForm):
    """Objective and parameters of a grid sweep followed by refinement."""
    section = "sweep"
    objective = forms.ChoiceField(
        choices=[(name, name) for name in OBJECTIVES], initial="min_q2",
    )
    resolution = forms.IntegerField(initial=24, min_value=2)
    tol = forms.FloatField(initial=1e-9, min_value=0.)
    budget = forms.IntegerField(initial=100_000, min_value=1)
    step = forms.FloatField(required=False, min_value=0.)
    free = forms.MultipleChoiceField(
        choices=[(name, name) for name in PARAMETERS],
        initial=["state_theta", "state_phi", "theta12"],
    )
    equal_spacing = forms.BooleanField(required=False, initial=False)


class SurveyForm(SectionForm):
    section = "survey"
    samples = forms.IntegerField(initial=10_000, min_value=1)
    max_records = forms.IntegerField(initial=20, min_value=0)
    free = forms.MultipleChoiceField(
        choices=[(name, name) for name in PARAMETERS],
        initial=list(SURVEY_PARAMETERS),
    )


SECTION_FORMS = {
    form.section: form
    for form in (
        StateForm, HamiltonianForm, TimesForm, MeasurementForm,
        SwitchForm, SweepForm, SurveyForm,
    )
}


def _key_lines(text: str) -> Dict[Tuple[str, ...], int]:
    """1-based line of every section and every key inside a section."""
    lines = {}
    root = yaml.compose(text)
    if not isinstance(root, yaml.MappingNode):
        return lines
    for key_node, value_node in root.value:
        section = str(key_node.value)
        lines[(section,)] = key_node.start_mark.line + 1
        if isinstance(value_node, yaml.MappingNode):
            for sub_key, _ in value_node.value:
                lines[(section, str(sub_key.value))] = sub_key.start_mark.line + 1
    return lines


@dataclass
class RunConfig:
    """Validated run configuration."""
    sections: Dict[str, Dict[str, Any]]
    digest: str
    """SHA-256 of the configuration text."""
    path: Optional[Path] = None
    text: str = field(default="", repr=False)

    def __getitem__(self, section: str) -> Dict[str, Any]:
        return self.sections[section]

    def scenario(self) -> LGScenario:
        """The scenario described by the state, Hamiltonian, times and measurement
        sections."""
        state, ham = self["state"], self["hamiltonian"]
        times, meas = self["times"], self["measurement"]
        axis = np.asarray(ham["axis"]) / np.linalg.norm(ham["axis"])
        base = np.asarray(meas["axis"]) / np.linalg.norm(meas["axis"])
        return LGScenario(
            initial=QuantumState.from_bloch(state["theta"], state["phi"], state["purity"]),
            hamiltonian=ham["omega"] / 2. * bloch_operator(axis),
            times=(times["t1"], times["t2"], times["t3"]),
            base=DichotomicObservable.from_bloch(base),
            lam=meas["lam"],
        )

    def scenario_params(self) -> Dict[str, float]:
        """The scenario sections expressed as search-space parameters."""
        state, ham = self["state"], self["hamiltonian"]
        times, meas = self["times"], self["measurement"]
        axis = np.asarray(ham["axis"]) / np.linalg.norm(ham["axis"])
        scale = ham["omega"] if ham["omega"] > 0. else 1.
        return {
            "state_theta": state["theta"],
            "state_phi": state["phi"] % (2. * np.pi),
            "purity": state["purity"],
            "axis_theta": float(np.arccos(np.clip(axis[2], -1., 1.))),
            "axis_phi": float(np.arctan2(axis[1], axis[0]) % (2. * np.pi)),
            "omega": ham["omega"],
            "theta12": scale * (times["t2"] - times["t1"]) % (2. * np.pi),
            "theta23": scale * (times["t3"] - times["t2"]) % (2. * np.pi),
            "lam": meas["lam"],
        }

    @property
    def where(self) -> str:
        return str(self.path) if self.path is not None else "<config>"

    def _check_measured_axis(self):
        """Searched scenarios always measure σ_z at t₁."""
        base = np.asarray(self["measurement"]["axis"], dtype=float)
        base = base / np.linalg.norm(base)
        if max_abs_diff(base, [0., 0., 1.]) > DEFAULT_TOLERANCES.identity:
            lines = _key_lines(self.text) if self.text.strip() else {}
            line = lines.get(("measurement", "axis"), lines.get(("measurement",), 0))
            raise ConfigError([
                f"{self.where}:{line}: measurement.axis: sweeps and surveys measure "
                f"along z, got {base.round(6).tolist()}"
            ])

    def _space(self, free: List[str], equal_spacing: bool = False) -> SearchSpace:
        self._check_measured_axis()
        fixed = {
            name: value for name, value in self.scenario_params().items()
            if name not in free
        }
        return SearchSpace(
            free={name: PARAMETERS[name] for name in free},
            fixed=fixed,
            equal_spacing=equal_spacing,
        )

    def search_space(self) -> SearchSpace:
        """Free parameters from the sweep section, all others fixed at the values of
        the scenario sections."""
        sweep = self["sweep"]
        return self._space(list(sweep["free"]), sweep["equal_spacing"])

    def survey_space(self) -> SearchSpace:
        """Free parameters from the survey section, fixed as in `search_space`."""
        return self._space(list(self["survey"]["free"]))

    def switch_config(self) -> SwitchConfig:
        """Switch measuring the scenario's observables at times ``i`` and ``j``."""
        switch = self["switch"]
        scenario = self.scenario()
        return SwitchConfig.from_observables(
            scenario.observable(switch["i"]),
            scenario.observable(switch["j"]),
            system_input=SYSTEM_INPUTS[switch["input"]],
            lam=switch["lam"],
            convention=switch["convention"],
        )


def parse_config(text: str, path: Optional[Path] = None) -> RunConfig:
    """Validate the YAML ``text`` and return the cleaned configuration."""
    where = str(path) if path is not None else "<config>"
    try:
        data = yaml.safe_load(text)
        lines = _key_lines(text) if text.strip() else {}
    except yaml.YAMLError as yaml_err:
        mark = getattr(yaml_err, "problem_mark", None)
        line = mark.line + 1 if mark is not None else 0
        raise ConfigError([f"{where}:{line}: invalid YAML: {yaml_err}"]) from yaml_err

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError([f"{where}:1: the configuration must be a mapping of sections"])

    messages, sections = [], {}
    for section in data:
        if section not in SECTION_FORMS:
            line = lines.get((str(section),), 0)
            messages.append(f"{where}:{line}: unknown section {section!r}")

    for section, form_class in SECTION_FORMS.items():
        section_data = data.get(section)
        section_line = lines.get((section,), 0)
        if section_data is not None and not isinstance(section_data, dict):
            messages.append(f"{where}:{section_line}: section {section} must be a mapping")
            continue

        form, unknown = form_class.bind(section_data)
        for key in unknown:
            line = lines.get((section, str(key)), section_line)
            messages.append(f"{where}:{line}: {section}.{key}: unknown key")
        if not form.is_valid():
            for name, errors in form.errors.items():
                key = form_class.yaml_key(name)
                line = lines.get((section, key), section_line)
                label = section if name == "__all__" else f"{section}.{key}"
                for error in errors:
                    messages.append(f"{where}:{line}: {label}: {error}")
            continue
        sections[section] = form.cleaned_data

    if messages:
        raise ConfigError(messages)

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    logger.info(f"Loaded configuration {where} with digest {digest[:12]}")
    return RunConfig(sections=sections, digest=digest, path=path, text=text)


def load_config(path: Optional[Path] = None) -> RunConfig:
    """Read and validate a configuration file. Without a path, all defaults apply."""
    if path is None:
        return parse_config("")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as os_err:
        raise ConfigError([f"{path}:0: cannot read configuration: {os_err}"]) from os_err
    return parse_config(text, path)
