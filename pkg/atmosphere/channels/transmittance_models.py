# atmosphere/channels/transmittance_models.py
"""
Transmittance models (PDTs) and channel-pair scenarios.

Models are immutable values; sampling and statistics live in
atmosphere/services/pdt_service.py.
"""

import math
from dataclasses import dataclass

import numpy as np

from atmosphere.channels.parameters import EllipticBeamChannel, TruncatedLogNormalChannel


@dataclass(frozen=True)
class Deterministic:
    eta0: float

    def __post_init__(self):
        if not (math.isfinite(self.eta0) and 0 <= self.eta0 <= 1):
            raise ValueError(f"eta0 must be in [0, 1], got {self.eta0}")

    @property
    def kind(self):
        return "deterministic"


@dataclass(frozen=True)
class TruncatedLogNormal:
    channel: TruncatedLogNormalChannel

    @property
    def kind(self):
        return "lognormal"


@dataclass(frozen=True)
class EllipticBeam:
    channel: EllipticBeamChannel

    @property
    def kind(self):
        return "elliptic"


@dataclass(frozen=True)
class Postselected:
    """``inner`` conditioned on eta >= eta_ps."""

    inner: object
    eta_ps: float

    def __post_init__(self):
        if not (math.isfinite(self.eta_ps) and 0 <= self.eta_ps < 1):
            raise ValueError(f"eta_ps must be in [0, 1), got {self.eta_ps}")

    @property
    def kind(self):
        return "postselected"


@dataclass(frozen=True, eq=False)
class Empirical:
    """
    Measured transmittances. ``samples`` is stored sorted and read-only;
    ``source`` remembers the file the samples were loaded from, if any.
    """

    samples: np.ndarray
    source: str = None

    def __post_init__(self):
        samples = np.sort(np.array(self.samples, dtype=float).ravel())
        if samples.size == 0:
            raise ValueError("empirical PDT needs at least one sample")
        if not np.all(np.isfinite(samples)) or samples[0] < 0 or samples[-1] > 1:
            raise ValueError("empirical transmittances must lie in [0, 1]")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def kind(self):
        return "empirical"


TRANSMITTANCE_MODELS = (Deterministic, TruncatedLogNormal, EllipticBeam, Postselected, Empirical)


def is_transmittance_model(value):
    return isinstance(value, TRANSMITTANCE_MODELS)


@dataclass(frozen=True)
class Copropagating:
    """Both photons cross the same channel: eta_A = eta_B for every pulse."""

    model: object

    def __post_init__(self):
        if not is_transmittance_model(self.model):
            raise ValueError(f"not a transmittance model: {self.model!r}")

    @property
    def models(self):
        return (self.model,)


@dataclass(frozen=True)
class Counterpropagating:
    """Independent channels towards A and B."""

    model_a: object
    model_b: object

    def __post_init__(self):
        for model in (self.model_a, self.model_b):
            if not is_transmittance_model(model):
                raise ValueError(f"not a transmittance model: {model!r}")

    @property
    def models(self):
        return (self.model_a, self.model_b)


def is_deterministic(value):
    """True for models and scenarios whose transmittances never fluctuate."""
    if isinstance(value, Deterministic):
        return True
    if isinstance(value, (Copropagating, Counterpropagating)):
        return all(is_deterministic(model) for model in value.models)
    return False
