# atmosphere/services/pdt_service.py
"""
PDT sampling and statistics.

Every entry point is a pure function of (model or scenario, count, seed):
samples are drawn in fixed-size chunks whose seeds are derived from the
root seed and the chunk index, so results never depend on how the work is
split between workers.

Seed layout
-----------
sample_pdt(model, seed)         chunk k of a stream uses (seed, k)
  EllipticBeam                  v from derive_seed(seed, 0), chi from (seed, 1, k)
  Postselected                  batch 0 reuses seed, batch j uses derive_seed(seed, j)
sample_pairs(scenario, seed)    arm A derive_seed(seed, 0), arm B derive_seed(seed, 1)
                                (copropagation reuses arm A for both)
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy import special

from atmosphere.channels.parameters import lognormal_exceedance, lognormal_mean
from atmosphere.channels.transmittance_models import (
    Copropagating,
    Counterpropagating,
    Deterministic,
    EllipticBeam,
    Empirical,
    Postselected,
    TruncatedLogNormal,
)
from atmosphere.engine.elliptic_beam import elliptic_transmittance
from core.exceptions import FeasibilityError
from core.numerics import derive_seed, gaussian_sample, rng_for
from core.numerics.seeding import DEFAULT_CHUNK_SIZE, chunk_layout

logger = logging.getLogger(__name__)

# Postselection below this acceptance probability is refused
MIN_FEASIBILITY = 1e-6

MAX_REJECTION_BATCHES = 64
MAX_REJECTION_BATCH = 4_000_000


@dataclass(frozen=True)
class Estimate:
    """A value with its Monte Carlo standard error (zero when exact)."""

    value: float
    stderr: float = 0.0

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class PdtMoments:
    mean: float
    second: float
    variance: float
    mean_stderr: float = 0.0
    second_stderr: float = 0.0
    variance_stderr: float = 0.0


def _chunk_size(chunk_size):
    if chunk_size is not None:
        return chunk_size
    return getattr(settings, "BELLSIM_CHUNK_SIZE", DEFAULT_CHUNK_SIZE)


def _default_count(count):
    return settings.BELLSIM_DEFAULT_SAMPLES if count is None else count


def _default_seed(seed):
    return settings.BELLSIM_DEFAULT_SEED if seed is None else seed


def _require_count(count):
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count <= 0:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    return int(count)


def is_analytic(model):
    """Models whose exceedance and moments are known in closed form."""
    if isinstance(model, (Deterministic, TruncatedLogNormal, Empirical)):
        return True
    if isinstance(model, Postselected):
        return is_analytic(model.inner)
    return False


# ==========================================================
# SAMPLING
# ==========================================================

def _uniforms(seed, count, chunk_size):
    blocks = [rng_for(seed, index).random(size) for index, size in chunk_layout(count, chunk_size)]
    return np.concatenate(blocks)


def _sample_lognormal(channel, count, seed, chunk_size, eta_ps=0.0):
    """
    Inverse-CDF sampling of the normal variable Z = (ln eta + mu) / sigma
    restricted to [lower, upper]; eta_ps = 0 gives lower = -inf.

    Above the median the survival function is inverted instead, so a
    threshold deep in the upper tail keeps full relative precision.
    """
    upper_cdf = channel.normalization
    lower_cdf = 0.0
    if eta_ps > 0:
        lower = float(channel.standardize(eta_ps))
        lower_cdf = float(special.ndtr(lower))

    u = _uniforms(seed, count, chunk_size)
    if lower_cdf > 0.5:
        lower_sf = float(special.ndtr(-lower))
        upper_sf = float(special.ndtr(-channel.upper_bound))
        z = -special.ndtri(lower_sf - u * (lower_sf - upper_sf))
    else:
        z = special.ndtri(lower_cdf + u * (upper_cdf - lower_cdf))
    eta = np.exp(-channel.mu + channel.sigma * z)
    return np.clip(eta, eta_ps, channel.eta_m)


def _sample_elliptic(channel, count, seed, chunk_size):
    v = gaussian_sample(channel.moments(), derive_seed(seed, 0), count, chunk_size)
    chi = np.concatenate([
        rng_for(seed, 1, index).uniform(0.0, math.pi / 2, size)
        for index, size in chunk_layout(count, chunk_size)
    ])
    return elliptic_transmittance(v, chi, channel)


def _sample_empirical(samples, count, seed, chunk_size):
    picks = np.concatenate([
        rng_for(seed, index).integers(0, samples.size, size)
        for index, size in chunk_layout(count, chunk_size)
    ])
    return samples[picks]


def _sample_postselected(model, count, seed, chunk_size):
    inner, eta_ps = model.inner, model.eta_ps

    if isinstance(inner, Deterministic):
        if inner.eta0 < eta_ps:
            raise FeasibilityError(
                f"deterministic eta0={inner.eta0} never exceeds eta_ps={eta_ps}"
            )
        return np.full(count, inner.eta0)

    if isinstance(inner, TruncatedLogNormal):
        feasibility = lognormal_exceedance(inner.channel, eta_ps)
        _check_feasibility(feasibility, eta_ps)
        return _sample_lognormal(inner.channel, count, seed, chunk_size, eta_ps=eta_ps)

    if isinstance(inner, Empirical):
        accepted = inner.samples[inner.samples >= eta_ps]
        _check_feasibility(accepted.size / inner.samples.size, eta_ps)
        return _sample_empirical(accepted, count, seed, chunk_size)

    return _rejection_sample(inner, eta_ps, count, seed, chunk_size)


def _check_feasibility(feasibility, eta_ps):
    if feasibility < MIN_FEASIBILITY:
        raise FeasibilityError(
            f"postselection at eta_ps={eta_ps} accepts a fraction {feasibility:.3e} "
            f"of pulses (minimum {MIN_FEASIBILITY:.0e})"
        )


def _rejection_sample(inner, eta_ps, count, seed, chunk_size):
    first = sample_pdt(inner, count, seed, chunk_size=chunk_size)
    accepted = [first[first >= eta_ps]]
    feasibility = accepted[0].size / count
    _check_feasibility(feasibility, eta_ps)

    total = accepted[0].size
    batch = 1
    while total < count:
        if batch > MAX_REJECTION_BATCHES:
            raise FeasibilityError(
                f"rejection sampling at eta_ps={eta_ps} did not finish "
                f"after {MAX_REJECTION_BATCHES} batches"
            )
        needed = count - total
        size = min(int(math.ceil(1.2 * needed / feasibility)) + 64, MAX_REJECTION_BATCH)
        draws = sample_pdt(inner, size, derive_seed(seed, batch), chunk_size=chunk_size)
        kept = draws[draws >= eta_ps]
        accepted.append(kept)
        total += kept.size
        batch += 1

    logger.debug(f"postselection at eta_ps={eta_ps}: {batch} batches, feasibility≈{feasibility:.4f}")
    return np.concatenate(accepted)[:count]


def sample_pdt(model, count, seed, chunk_size=None):
    """
    Draw ``count`` transmittances from ``model``.

    Deterministic in (model, count, seed, chunk_size); every value lies in
    [0, 1] and postselected values are >= eta_ps exactly.

    Raises
    ------
    FeasibilityError
        If a postselection accepts fewer than 1e-6 of the inner pulses.
    """
    count = _require_count(count)
    chunk_size = _chunk_size(chunk_size)

    if isinstance(model, Deterministic):
        return np.full(count, model.eta0)
    if isinstance(model, TruncatedLogNormal):
        return _sample_lognormal(model.channel, count, seed, chunk_size)
    if isinstance(model, EllipticBeam):
        return _sample_elliptic(model.channel, count, seed, chunk_size)
    if isinstance(model, Empirical):
        return _sample_empirical(model.samples, count, seed, chunk_size)
    if isinstance(model, Postselected):
        return _sample_postselected(model, count, seed, chunk_size)

    raise TypeError(f"unknown transmittance model {model!r}")


# ==========================================================
# STATISTICS
# ==========================================================

def _moments_from_samples(eta):
    n = eta.size
    mean = float(eta.mean())
    second = float(np.mean(eta ** 2))
    centered_sq = (eta - mean) ** 2
    variance = float(centered_sq.mean())
    root_n = math.sqrt(n)
    return PdtMoments(
        mean=mean,
        second=second,
        variance=variance,
        mean_stderr=float(eta.std()) / root_n,
        second_stderr=float((eta ** 2).std()) / root_n,
        variance_stderr=float(centered_sq.std()) / root_n,
    )


def _exact_moments(mean, second):
    return PdtMoments(mean=mean, second=second, variance=max(second - mean ** 2, 0.0))


def pdt_moments(model, count=None, seed=None, chunk_size=None):
    """
    Mean, second moment and variance of the transmittance.

    Deterministic and empirical models are exact (zero standard errors);
    everything else is a Monte Carlo estimate from sample_pdt with the same
    (count, seed), so the mean equals the mean of those very samples.
    """
    if isinstance(model, Deterministic):
        return _exact_moments(model.eta0, model.eta0 ** 2)
    if isinstance(model, Empirical):
        return _exact_moments(float(model.samples.mean()), float(np.mean(model.samples ** 2)))

    eta = sample_pdt(model, _default_count(count), _default_seed(seed), chunk_size=chunk_size)
    return _moments_from_samples(eta)


def exceedance(model, eta_ps, count=None, seed=None, chunk_size=None):
    """
    P(eta >= eta_ps) as an Estimate.

    Closed form for deterministic, log-normal, empirical and postselected
    analytic models; otherwise the sampled fraction with its binomial
    standard error. For a fixed seed the Monte Carlo estimate is
    non-increasing in eta_ps.
    """
    if eta_ps <= 0:
        return Estimate(1.0)

    if isinstance(model, Deterministic):
        return Estimate(1.0 if model.eta0 >= eta_ps else 0.0)
    if isinstance(model, TruncatedLogNormal):
        return Estimate(lognormal_exceedance(model.channel, eta_ps))
    if isinstance(model, Empirical):
        return Estimate(float(np.mean(model.samples >= eta_ps)))
    if isinstance(model, Postselected) and is_analytic(model.inner):
        if eta_ps <= model.eta_ps:
            return Estimate(1.0)
        accepted = exceedance(model.inner, model.eta_ps).value
        if accepted <= 0:
            raise FeasibilityError(f"postselection at eta_ps={model.eta_ps} accepts nothing")
        return Estimate(exceedance(model.inner, eta_ps).value / accepted)

    count = _default_count(count)
    eta = sample_pdt(model, count, _default_seed(seed), chunk_size=chunk_size)
    fraction = float(np.mean(eta >= eta_ps))
    return Estimate(fraction, math.sqrt(fraction * (1 - fraction) / count))


def joint_feasibility(scenario, eta_ps, count=None, seed=None, chunk_size=None):
    """
    Probability that both arms exceed eta_ps.

    Copropagation is one event (eta_A = eta_B); counterpropagation is the
    product of the two independent exceedances. Arm seeds follow
    sample_pairs.
    """
    seed = _default_seed(seed)

    if isinstance(scenario, Copropagating):
        return exceedance(scenario.model, eta_ps, count, derive_seed(seed, 0), chunk_size)

    if isinstance(scenario, Counterpropagating):
        a = exceedance(scenario.model_a, eta_ps, count, derive_seed(seed, 0), chunk_size)
        b = exceedance(scenario.model_b, eta_ps, count, derive_seed(seed, 1), chunk_size)
        stderr = math.hypot(a.value * b.stderr, b.value * a.stderr)
        return Estimate(a.value * b.value, stderr)

    raise TypeError(f"unknown channel scenario {scenario!r}")


def sample_pairs(scenario, count, seed, chunk_size=None):
    """
    (count, 2) array of (eta_A, eta_B).

    Copropagation repeats one draw in both columns bit for bit.
    """
    if isinstance(scenario, Copropagating):
        eta = sample_pdt(scenario.model, count, derive_seed(seed, 0), chunk_size=chunk_size)
        return np.column_stack([eta, eta])

    if isinstance(scenario, Counterpropagating):
        eta_a = sample_pdt(scenario.model_a, count, derive_seed(seed, 0), chunk_size=chunk_size)
        eta_b = sample_pdt(scenario.model_b, count, derive_seed(seed, 1), chunk_size=chunk_size)
        return np.column_stack([eta_a, eta_b])

    raise TypeError(f"unknown channel scenario {scenario!r}")


def scenario_means(scenario, count=None, seed=None, chunk_size=None):
    """
    (<eta_A>, <eta_B>) using the same arm seeds as sample_pairs.
    """
    seed = _default_seed(seed)
    if isinstance(scenario, Copropagating):
        mean = pdt_moments(scenario.model, count, derive_seed(seed, 0), chunk_size).mean
        return mean, mean
    if isinstance(scenario, Counterpropagating):
        return (
            pdt_moments(scenario.model_a, count, derive_seed(seed, 0), chunk_size).mean,
            pdt_moments(scenario.model_b, count, derive_seed(seed, 1), chunk_size).mean,
        )
    raise TypeError(f"unknown channel scenario {scenario!r}")


def exact_mean(model):
    """Closed-form <eta>, or None when only sampling can give it."""
    if isinstance(model, Deterministic):
        return model.eta0
    if isinstance(model, TruncatedLogNormal):
        return lognormal_mean(model.channel)
    if isinstance(model, Empirical):
        return float(model.samples.mean())
    return None
