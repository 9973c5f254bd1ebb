# atmosphere/channels/parameters.py
"""
Channel parameter records and the formulas that produce them.

Pure calculation layer. No Django logic.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from core.numerics import GaussianSpec

RYTOV_COEFFICIENT = 1.23


def _require(condition, message):
    if not condition:
        raise ValueError(message)


def _finite(*values):
    return all(math.isfinite(v) for v in values)


# ==========================================================
# TURBULENCE STRENGTH
# ==========================================================

def rytov_parameter(cn2, wavenumber, length):
    """
    Rytov variance sigma_R^2 = 1.23 * Cn2 * k^(7/6) * L^(11/6).

    cn2 in m^(-2/3), wavenumber in 1/m, length in m.
    """
    _require(cn2 >= 0, f"cn2 must be >= 0, got {cn2}")
    _require(wavenumber > 0, f"wavenumber must be > 0, got {wavenumber}")
    _require(length > 0, f"length must be > 0, got {length}")
    return RYTOV_COEFFICIENT * cn2 * wavenumber ** (7 / 6) * length ** (11 / 6)


def fresnel_parameter(beam_waist, wavenumber, length):
    """Omega = k * W0^2 / (2L)."""
    _require(beam_waist > 0, f"beam_waist must be > 0, got {beam_waist}")
    _require(wavenumber > 0, f"wavenumber must be > 0, got {wavenumber}")
    _require(length > 0, f"length must be > 0, got {length}")
    return wavenumber * beam_waist ** 2 / (2 * length)


# ==========================================================
# WEAK TO MODERATE TURBULENCE (elliptic beam)
# ==========================================================

@dataclass(frozen=True)
class EllipticBeamChannel:
    """
    Elliptic-beam channel. Lengths in metres; rytov_sq and fresnel are
    dimensionless; eta_m is the deterministic efficiency of the link.
    """

    rytov_sq: float
    fresnel: float
    beam_waist: float
    aperture: float
    length: float
    eta_m: float = 1.0

    def __post_init__(self):
        _require(
            _finite(self.rytov_sq, self.fresnel, self.beam_waist,
                    self.aperture, self.length, self.eta_m),
            "elliptic-beam parameters must be finite",
        )
        _require(self.rytov_sq >= 0, f"rytov_sq must be >= 0, got {self.rytov_sq}")
        _require(self.fresnel > 0, f"fresnel must be > 0, got {self.fresnel}")
        _require(self.beam_waist > 0, f"W0 must be > 0, got {self.beam_waist}")
        _require(self.aperture > 0, f"aperture must be > 0, got {self.aperture}")
        _require(self.length > 0, f"length must be > 0, got {self.length}")
        _require(0 < self.eta_m <= 1, f"eta_m must be in (0, 1], got {self.eta_m}")

    @classmethod
    def from_physical(cls, cn2, wavelength, beam_waist, aperture, length, eta_m=1.0):
        """Build the channel from Cn2 [m^(-2/3)] and the optical wavelength [m]."""
        _require(wavelength > 0, f"wavelength must be > 0, got {wavelength}")
        wavenumber = 2 * math.pi / wavelength
        return cls(
            rytov_sq=rytov_parameter(cn2, wavenumber, length),
            fresnel=fresnel_parameter(beam_waist, wavenumber, length),
            beam_waist=beam_waist,
            aperture=aperture,
            length=length,
            eta_m=eta_m,
        )

    def moments(self):
        return elliptic_moments(self.rytov_sq, self.fresnel, self.beam_waist)


def elliptic_moments(rytov_sq, fresnel, beam_waist):
    """
    Gaussian law of v = (x0, y0, Theta1, Theta2) for Kolmogorov turbulence.

    Position variances are raw m^2. The (x0, y0) block is uncorrelated with
    the (Theta1, Theta2) block.
    """
    _require(rytov_sq >= 0, f"rytov_sq must be >= 0, got {rytov_sq}")
    _require(fresnel > 0, f"fresnel must be > 0, got {fresnel}")
    _require(beam_waist > 0, f"beam_waist must be > 0, got {beam_waist}")

    strength = rytov_sq * fresnel ** (5 / 6)
    growth = (1 + 2.96 * strength) ** 2

    theta_mean = math.log(growth / (fresnel ** 2 * math.sqrt(growth + 1.2 * strength)))
    position_var = 0.33 * beam_waist ** 2 * rytov_sq * fresnel ** (-7 / 6)
    theta_var = math.log1p(1.2 * strength / growth)
    theta_cov = math.log1p(-0.8 * strength / growth)

    covariance = np.zeros((4, 4))
    covariance[0, 0] = covariance[1, 1] = position_var
    covariance[2, 2] = covariance[3, 3] = theta_var
    covariance[2, 3] = covariance[3, 2] = theta_cov

    return GaussianSpec(
        mean=np.array([0.0, 0.0, theta_mean, theta_mean]),
        covariance=covariance,
    )


# ==========================================================
# STRONG TURBULENCE (truncated log-normal)
# ==========================================================

@dataclass(frozen=True)
class TruncatedLogNormalChannel:
    """
    Log-normal PDT with density proportional to exp[-(ln eta + mu)^2 / (2 sigma^2)] / eta,
    truncated to [0, eta_m] and renormalized by F(eta_m).
    """

    mu: float
    sigma: float
    eta_m: float = 1.0

    def __post_init__(self):
        _require(_finite(self.mu, self.sigma, self.eta_m), "log-normal parameters must be finite")
        _require(self.sigma > 0, f"sigma must be > 0, got {self.sigma}")
        _require(0 < self.eta_m <= 1, f"eta_m must be in (0, 1], got {self.eta_m}")
        _require(
            self.normalization > 0,
            f"F(eta_m) underflows for mu={self.mu}, sigma={self.sigma}, eta_m={self.eta_m}",
        )

    def standardize(self, eta):
        """(ln eta + mu) / sigma; -inf at eta = 0."""
        with np.errstate(divide="ignore"):
            return (np.log(eta) + self.mu) / self.sigma

    @property
    def upper_bound(self):
        return float(self.standardize(self.eta_m))

    @property
    def normalization(self):
        """F(eta_m), the untruncated CDF at the truncation point."""
        return float(special.ndtr(self.upper_bound))

    def with_truncation(self, eta_m):
        return TruncatedLogNormalChannel(mu=self.mu, sigma=self.sigma, eta_m=eta_m)


def lognormal_from_moments(mean, variance, eta_m=1.0):
    """
    Fit mu and sigma to the pre-truncation mean and variance of eta, then
    truncate at eta_m.
    """
    _require(mean > 0, f"mean must be > 0, got {mean}")
    _require(variance > 0, f"variance must be > 0, got {variance}")

    spread = variance / mean ** 2
    sigma = math.sqrt(math.log1p(spread))
    mu = -math.log(mean / math.sqrt(1 + spread))
    return TruncatedLogNormalChannel(mu=mu, sigma=sigma, eta_m=eta_m)


def lognormal_from_count_statistics(mean_eta, mean_counts, count_variance, eta_m=1.0):
    """
    Fit from received-energy statistics: the relative variance of the
    transmittance equals the relative variance of the counted energy.
    """
    _require(mean_counts > 0, f"mean_counts must be > 0, got {mean_counts}")
    variance = mean_eta ** 2 * count_variance / mean_counts ** 2
    return lognormal_from_moments(mean_eta, variance, eta_m=eta_m)


def lognormal_mean(channel):
    """Exact mean of the truncated log-normal PDT."""
    upper = channel.upper_bound
    shifted = special.ndtr(upper - channel.sigma)
    return float(
        math.exp(-channel.mu + channel.sigma ** 2 / 2) * shifted / channel.normalization
    )


def lognormal_exceedance(channel, eta_ps):
    """P(eta >= eta_ps) for the truncated log-normal PDT."""
    if eta_ps <= 0:
        return 1.0
    if eta_ps > channel.eta_m:
        return 0.0
    upper = channel.upper_bound
    lower = float(channel.standardize(eta_ps))
    tail = special.ndtr(-lower) - special.ndtr(-upper)
    return float(min(max(tail / channel.normalization, 0.0), 1.0))
