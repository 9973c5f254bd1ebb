# simulations/services/run_config.py
"""
Run configuration files for the simulation commands.

    [run]
    samples = 100000
    seed = 20170101

    [source]
    kind = pdc
    xi = 0.01:0.5:25

    [detector]
    eta_c = 0.3
    nu = 1.7e-5

    [scenario]
    kind = copropagation
    model = strong

    [model.strong]
    kind = lognormal
    mean = 1e-3
    variance = 2.2e-6
    eta_m = 0.04

``--config`` takes a file path or the name of a shipped preset.
"""

import dataclasses
import logging
from pathlib import Path

from django.conf import settings

from atmosphere.channels.transmittance_models import Copropagating, Counterpropagating
from atmosphere.services.model_config import MODEL_PREFIX, loads_models, validate_section
from core.configfile import parse_sections
from core.exceptions import ConfigError
from fockoracle.services.validation_service import ValidationGrid
from photocount.sources import BellState, DetectorParams, Pdc
from simulations.forms import (
    MIN_SAMPLES,
    DetectorForm,
    PostselectionForm,
    RunForm,
    ScenarioForm,
    SourceForm,
    StatsForm,
    ValidateForm,
)

logger = logging.getLogger(__name__)

SECTIONS = ("run", "source", "detector", "scenario", "postselection", "stats", "validate")

PRESET_SUFFIX = ".cfg"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    name: str
    text: str
    sources: tuple = ()
    detector: DetectorParams = None
    scenario: object = None
    models: dict = dataclasses.field(default_factory=dict)
    include_double_clicks: bool = True
    eta_ps_grid: tuple = None
    stats_model: str = None
    thresholds: tuple = ()
    validation: ValidationGrid = None
    samples: int = None
    seed: int = None

    def __post_init__(self):
        if self.samples is not None and self.samples < MIN_SAMPLES:
            raise ConfigError(f"samples must be >= {MIN_SAMPLES}, got {self.samples}", key="run.samples")

    @property
    def xi_grid(self):
        return tuple(source.xi if isinstance(source, Pdc) else 0.0 for source in self.sources)

    def require(self, *names):
        """Raise ConfigError unless every named section was given."""
        present = {
            "source": bool(self.sources),
            "detector": self.detector is not None,
            "scenario": self.scenario is not None,
            "postselection": self.eta_ps_grid is not None,
            "stats": self.stats_model is not None,
        }
        for name in names:
            if not present[name]:
                raise ConfigError(f"missing section [{name}]", key=name)

    def with_overrides(self, samples=None, seed=None, include_double_clicks=None):
        changes = {}
        if samples is not None:
            changes["samples"] = samples
        if seed is not None:
            changes["seed"] = seed
        if include_double_clicks is not None:
            changes["include_double_clicks"] = include_double_clicks
        return dataclasses.replace(self, **changes)


# ==========================================================
# SECTION BUILDERS
# ==========================================================

def _model(models, section, key):
    name = section.values()[key]
    if name not in models:
        raise ConfigError(f"unknown model '{name}'", line=section.line_of(key), key=f"{section.name}.{key}")
    return models[name]


def _scenario(section, models):
    data = validate_section(ScenarioForm, section)
    if data["kind"] == "copropagation":
        return Copropagating(_model(models, section, "model"))
    if data["model"]:
        model = _model(models, section, "model")
        return Counterpropagating(model, model)
    return Counterpropagating(_model(models, section, "model_a"), _model(models, section, "model_b"))


def _sources(section):
    data = validate_section(SourceForm, section)
    if data["kind"] == "bell":
        return (BellState(),)
    return tuple(Pdc(xi) for xi in data["xi"])


def _detector(section):
    data = validate_section(DetectorForm, section)
    return DetectorParams(data["eta_c"], data["nu"] or 0.0)


def _validation_grid(section):
    data = validate_section(ValidateForm, section)
    overrides = {
        key: tuple(data[key])
        for key in ("xi", "eta_c", "nu", "delta_theta")
        if data[key] is not None
    }
    if data["eta_a"] is not None:
        overrides["transmittances"] = tuple(zip(data["eta_a"], data["eta_b"]))
    for key in ("tolerance", "n_max", "closed_form_eta_c_shift"):
        if data[key] is not None:
            overrides[key] = data[key]
    return ValidationGrid(**overrides)


# ==========================================================
# ENTRY POINTS
# ==========================================================

def parse_run_config(text, name="<config>", base_dir=None):
    """
    Raises
    ------
    ConfigError
        With the line and ``section.key`` of the first problem found.
    """
    sections = parse_sections(text)

    for section_name, section in sections.items():
        if section_name not in SECTIONS and not section_name.startswith(MODEL_PREFIX):
            raise ConfigError(f"unknown section [{section_name}]", line=section.line, key=section_name)

    models = loads_models(sections, base_dir=base_dir)
    fields = {"name": name, "text": text, "models": models}

    if "run" in sections:
        run = validate_section(RunForm, sections["run"])
        fields["samples"] = run["samples"]
        fields["seed"] = run["seed"]
        if run["double_clicks"] is not None:
            fields["include_double_clicks"] = run["double_clicks"]

    if "source" in sections:
        fields["sources"] = _sources(sections["source"])
    if "detector" in sections:
        fields["detector"] = _detector(sections["detector"])
    if "scenario" in sections:
        fields["scenario"] = _scenario(sections["scenario"], models)
    if "postselection" in sections:
        fields["eta_ps_grid"] = tuple(validate_section(PostselectionForm, sections["postselection"])["eta_ps"])

    if "stats" in sections:
        section = sections["stats"]
        data = validate_section(StatsForm, section)
        _model(models, section, "model")
        fields["stats_model"] = data["model"]
        fields["thresholds"] = tuple(data["thresholds"] or ())

    if "validate" in sections:
        try:
            fields["validation"] = _validation_grid(sections["validate"])
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), line=sections["validate"].line, key="validate") from exc

    return RunConfig(**fields)


def preset_path(name):
    return Path(settings.BELLSIM_PRESETS_DIR) / f"{name}{PRESET_SUFFIX}"


def list_presets():
    return sorted(path.stem for path in Path(settings.BELLSIM_PRESETS_DIR).glob(f"*{PRESET_SUFFIX}"))


def load_run_config(reference):
    """
    Load a config file, or the preset named ``reference``.

    Relative paths inside the file (empirical samples) resolve against the
    file's directory.
    """
    path = Path(reference)
    if not path.is_file():
        candidate = preset_path(reference)
        if not candidate.is_file():
            raise ConfigError(
                f"no config file or preset named '{reference}' "
                f"(presets: {', '.join(list_presets()) or 'none'})"
            )
        path = candidate

    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc

    logger.info(f"Loaded run config {path}")
    return parse_run_config(text, name=path.stem, base_dir=path.parent)


def seed_or_default(config):
    return settings.BELLSIM_DEFAULT_SEED if config.seed is None else config.seed


def samples_or_default(config):
    samples = settings.BELLSIM_DEFAULT_SAMPLES if config.samples is None else config.samples
    if samples < MIN_SAMPLES:
        raise ConfigError(f"samples must be an integer >= {MIN_SAMPLES}, got {samples!r}", key="run.samples")
    return samples
