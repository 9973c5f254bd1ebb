# atmosphere/services/model_config.py
"""
Transmittance models <-> ``[model.NAME]`` configuration sections.

    [model.strong]
    kind = lognormal
    mean = 1e-3
    variance = 2.2e-6
    eta_m = 0.04

    [model.strong_ps]
    kind = postselected
    inner = strong
    eta_ps = 0.002
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from atmosphere.channels.parameters import (
    EllipticBeamChannel,
    TruncatedLogNormalChannel,
    lognormal_from_moments,
)
from atmosphere.channels.transmittance_models import (
    Deterministic,
    EllipticBeam,
    Empirical,
    Postselected,
    TruncatedLogNormal,
)
from atmosphere.forms import TransmittanceModelForm
from core.configfile import parse_sections, render_sections
from core.exceptions import ConfigError

logger = logging.getLogger(__name__)

MODEL_PREFIX = "model."


def load_empirical_samples(path):
    """
    Read one transmittance per line; blank lines and ``#`` comments are
    skipped.
    """
    try:
        frame = pd.read_csv(
            path, header=None, names=["eta"], comment="#",
            skip_blank_lines=True, dtype=float,
        )
    except FileNotFoundError as exc:
        raise ConfigError(f"empirical sample file not found: {path}") from exc
    except (ValueError, pd.errors.ParserError) as exc:
        raise ConfigError(f"empirical sample file {path} is not one number per line: {exc}") from exc

    values = frame["eta"].to_numpy()
    if values.size == 0:
        raise ConfigError(f"empirical sample file {path} is empty")
    if not np.all(np.isfinite(values)) or values.min() < 0 or values.max() > 1:
        raise ConfigError(f"empirical sample file {path} has values outside [0, 1]")

    logger.info(f"Loaded {values.size} empirical transmittances from {path}")
    return values


def validate_section(form_class, section, prefix=None):
    """
    Bind ``section`` to ``form_class`` and return cleaned_data, or raise
    ConfigError pointing at the first offending line.
    """
    prefix = prefix or section.name
    values = section.values()

    for key in values:
        if key not in form_class.base_fields:
            raise ConfigError("unknown key", line=section.line_of(key), key=f"{prefix}.{key}")

    form = form_class(data=values)
    if form.is_valid():
        return form.cleaned_data

    for field, messages in form.errors.items():
        if field == "__all__":
            raise ConfigError(messages[0], line=section.line, key=prefix)
        raise ConfigError(messages[0], line=section.line_of(field), key=f"{prefix}.{field}")
    raise ConfigError("invalid section", line=section.line, key=prefix)


def _build_model(name, data, resolve, base_dir):
    kind = data["kind"]

    if kind == "deterministic":
        return Deterministic(data["eta0"])

    if kind == "lognormal":
        eta_m = data["eta_m"] if data["eta_m"] is not None else 1.0
        if data["mean"] is not None:
            channel = lognormal_from_moments(data["mean"], data["variance"], eta_m=eta_m)
        else:
            channel = TruncatedLogNormalChannel(mu=data["mu"], sigma=data["sigma"], eta_m=eta_m)
        return TruncatedLogNormal(channel)

    if kind == "elliptic":
        eta_m = data["eta_m"] if data["eta_m"] is not None else 1.0
        geometry = dict(
            beam_waist=data["W0"], aperture=data["aperture"],
            length=data["length"], eta_m=eta_m,
        )
        if data["cn2"] is not None:
            channel = EllipticBeamChannel.from_physical(
                cn2=data["cn2"], wavelength=data["wavelength"], **geometry
            )
        else:
            channel = EllipticBeamChannel(
                rytov_sq=data["rytov_sq"], fresnel=data["fresnel"], **geometry
            )
        return EllipticBeam(channel)

    if kind == "postselected":
        return Postselected(resolve(data["inner"]), data["eta_ps"])

    path = Path(data["path"])
    if not path.is_absolute() and base_dir is not None:
        path = Path(base_dir) / path
    return Empirical(load_empirical_samples(path), source=data["path"])


def loads_models(sections, base_dir=None):
    """
    Build every ``[model.NAME]`` section into a model.

    ``sections`` is configuration text or the mapping returned by
    core.configfile.parse_sections. Relative empirical paths resolve
    against ``base_dir``. Returns ``{NAME: model}``.

    Raises
    ------
    ConfigError
        On invalid sections, unknown or cyclic ``inner`` references and
        unreadable sample files.
    """
    if isinstance(sections, str):
        sections = parse_sections(sections)

    model_sections = {
        name[len(MODEL_PREFIX):]: section
        for name, section in sections.items()
        if name.startswith(MODEL_PREFIX)
    }
    built = {}
    in_progress = []

    def resolve(name, referenced_from=None):
        if name in built:
            return built[name]
        if name not in model_sections:
            section = model_sections.get(referenced_from)
            raise ConfigError(
                f"unknown model '{name}'",
                line=section.line_of("inner") if section else None,
                key=f"{MODEL_PREFIX}{referenced_from}.inner" if referenced_from else None,
            )
        section = model_sections[name]
        if name in in_progress:
            raise ConfigError(
                f"cyclic inner reference: {' -> '.join(in_progress + [name])}",
                line=section.line, key=f"{MODEL_PREFIX}{name}",
            )

        in_progress.append(name)
        data = validate_section(TransmittanceModelForm, section)
        try:
            model = _build_model(name, data, lambda inner: resolve(inner, name), base_dir)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), line=section.line, key=section.name) from exc
        in_progress.pop()

        built[name] = model
        return model

    for name in model_sections:
        resolve(name)
    return built


def _inner_name(name, taken):
    candidate = f"{name}_inner"
    suffix = 2
    while candidate in taken:
        candidate = f"{name}_inner{suffix}"
        suffix += 1
    taken.add(candidate)
    return candidate


def _model_entries(name, model, sections, taken):
    if isinstance(model, Deterministic):
        return {"kind": "deterministic", "eta0": repr(model.eta0)}

    if isinstance(model, TruncatedLogNormal):
        channel = model.channel
        return {
            "kind": "lognormal",
            "mu": repr(channel.mu),
            "sigma": repr(channel.sigma),
            "eta_m": repr(channel.eta_m),
        }

    if isinstance(model, EllipticBeam):
        channel = model.channel
        return {
            "kind": "elliptic",
            "rytov_sq": repr(channel.rytov_sq),
            "fresnel": repr(channel.fresnel),
            "W0": repr(channel.beam_waist),
            "aperture": repr(channel.aperture),
            "length": repr(channel.length),
            "eta_m": repr(channel.eta_m),
        }

    if isinstance(model, Postselected):
        inner_name = _inner_name(name, taken)
        sections[f"{MODEL_PREFIX}{inner_name}"] = _model_entries(inner_name, model.inner, sections, taken)
        return {"kind": "postselected", "inner": inner_name, "eta_ps": repr(model.eta_ps)}

    if isinstance(model, Empirical):
        if model.source is None:
            raise ValueError(f"empirical model '{name}' has no sample file to refer to")
        return {"kind": "empirical", "path": model.source}

    raise TypeError(f"unknown transmittance model {model!r}")


def dumps_models(models):
    """
    Render ``{NAME: model}`` as configuration text readable by loads_models.

    Postselected inner models are written as their own ``NAME_inner``
    sections, numbered ``NAME_inner2``, ``NAME_inner3``, ... when that name
    is already taken.
    """
    sections = {}
    taken = set(models)
    for name, model in models.items():
        entries = _model_entries(name, model, sections, taken)
        sections[f"{MODEL_PREFIX}{name}"] = entries
    return render_sections(sections)
