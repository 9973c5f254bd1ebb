# photocount/analytics/pdc_coefficients.py
"""
Coefficients of the PDC click probabilities for one transmittance pair.

Pure calculation layer. No Django logic.

With t = tanh^2(xi), alpha = eta_c * eta_A, beta = eta_c * eta_B and
K = (1 - alpha)(1 - beta), the common bracket

    alpha * beta * t - [1 + (alpha - 1) t][1 + (beta - 1) t]

factorizes as -(1 - t)(1 - K t). Both factors are evaluated as sums of
non-negative terms (1 - t = sech^2 xi, 1 - K t = sech^2 xi + t(1 - K)),
so nothing cancels as t -> 0 or t -> 1.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PdcCoefficients:
    c0: float
    c1a: float
    c1b: float
    c_same: float
    c_different: float


def squeezing_terms(xi):
    """(t, 1 - t) = (tanh^2 xi, sech^2 xi) without forming 1 - tanh^2."""
    t = math.tanh(xi) ** 2
    return t, 1.0 / math.cosh(xi) ** 2


def pdc_coefficients(xi, detector, eta_a, eta_b, delta_theta):
    """
    C0, C1A, C1B, C_same and C_different at angle difference
    delta_theta = theta_A - theta_B.
    """
    for name, eta in (("eta_a", eta_a), ("eta_b", eta_b)):
        if not 0 <= eta <= 1:
            raise ValueError(f"{name} must be in [0, 1], got {eta}")

    t, u = squeezing_terms(xi)
    alpha = detector.eta_c * eta_a
    beta = detector.eta_c * eta_b
    k = (1 - alpha) * (1 - beta)

    bracket = -u * (u + t * (1 - k))
    sin_sq = math.sin(delta_theta) ** 2
    cos_sq = math.cos(delta_theta) ** 2
    correlated = alpha * beta * t * u ** 2

    return PdcCoefficients(
        c0=bracket ** 2,
        c1a=beta * (1 - alpha) * u * t * bracket,
        c1b=alpha * (1 - beta) * u * t * bracket,
        c_same=correlated * (k * t - sin_sq),
        c_different=correlated * (k * t - cos_sq),
    )


def reduced_denominators(t, u, alpha, beta):
    """
    Vectorized pieces of the click probabilities, each scaled by (1 - t)^2:

        g_k = (1 - K t),  g_a = 1 - t(1 - alpha),  g_b = 1 - t(1 - beta)
        base = u^2 + u t (1 - K),  weight = alpha * beta * t

    so that (C0 + C1A + C1B + C_same) / (1 - t)^2 = base + weight * cos^2(dtheta)
    and the different-outcome sum has sin^2 in place of cos^2.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    one_minus_k = alpha + beta - alpha * beta

    return {
        "g_k": u + t * one_minus_k,
        "g_a": u + t * alpha,
        "g_b": u + t * beta,
        "base": u * u + u * t * one_minus_k,
        "weight": alpha * beta * t,
    }
