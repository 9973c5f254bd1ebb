# fockoracle/processors/rotation.py
"""
Polarization analyzer at one site: (H, V) -> (T, R).

a_H^dagger -> cos(theta) a_T^dagger - sin(theta) a_R^dagger
a_V^dagger -> sin(theta) a_T^dagger + cos(theta) a_R^dagger

Photon number is conserved, so the unitary acts inside each subspace
n_H + n_V = n; components with n above the cutoff are left out.
"""

import math

import numpy as np
from scipy.special import comb, factorial

from fockoracle.processors.loss import as_density

SITE_MODES = {"A": (0, 1), "B": (2, 3)}


def rotation_unitary(theta, dim):
    """U[p, q, h, v] = <p_T, q_R| U |h_H, v_V>."""
    c, s = math.cos(theta), math.sin(theta)
    unitary = np.zeros((dim,) * 4)

    for h in range(dim):
        for v in range(dim - h):
            norm = math.sqrt(factorial(h) * factorial(v))
            # (c T - s R)^h (s T + c R)^v, coefficient of T^p R^q
            for i in range(h + 1):
                from_h = comb(h, i) * c ** i * (-s) ** (h - i)
                for j in range(v + 1):
                    from_v = comb(v, j) * s ** j * c ** (v - j)
                    p, q = i + j, h + v - i - j
                    unitary[p, q, h, v] += from_h * from_v * math.sqrt(factorial(p) * factorial(q)) / norm
    return unitary


def rotate_site(state_or_density, theta, site):
    """U rho U^T on the two modes of ``site``; the modes become (T, R)."""
    density = as_density(state_or_density)
    first, second = SITE_MODES[site]
    unitary = rotation_unitary(theta, density.shape[0])

    ket = np.tensordot(unitary, density, axes=([2, 3], [first, second]))
    ket = np.moveaxis(ket, [0, 1], [first, second])
    bra = np.tensordot(unitary, ket, axes=([2, 3], [first + 4, second + 4]))
    return np.moveaxis(bra, [0, 1], [first + 4, second + 4])


def trace(density):
    dim = density.shape[0] ** 4
    return float(np.trace(density.reshape(dim, dim)))


def purity(density):
    """Tr(rho^2) for a real symmetric density."""
    return float(np.sum(density ** 2))
