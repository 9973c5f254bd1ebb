# fockoracle/processors/loss.py
"""
Pure-loss channel on one mode of a four-mode density.

Kraus operators K_k |n> = sqrt(C(n, k) eta^(n-k) (1-eta)^k) |n-k>,
k photons lost.
"""

import numpy as np
from scipy.special import comb

from fockoracle.engine.fock_state import FockState4


def as_density(state_or_density):
    if isinstance(state_or_density, FockState4):
        return state_or_density.density()
    density = np.asarray(state_or_density, dtype=float)
    if density.ndim != 8 or len(set(density.shape)) != 1:
        raise ValueError(f"density must be a (d,)*8 tensor, got shape {density.shape}")
    return density


def loss_kraus(eta, dim):
    """(dim, dim, dim) array: kraus[k, a, b] = <a|K_k|b>."""
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    kraus = np.zeros((dim, dim, dim))
    for n in range(dim):
        for k in range(n + 1):
            kraus[k, n - k, n] = np.sqrt(comb(n, k) * eta ** (n - k) * (1 - eta) ** k)
    return kraus


def loss_superoperator(eta, dim):
    """S[a, c, b, d] = sum_k K_k[a, b] K_k[c, d], acting on rho[b, d]."""
    kraus = loss_kraus(eta, dim)
    return np.einsum("kab,kcd->acbd", kraus, kraus)


def apply_loss(state_or_density, eta, mode):
    """
    rho -> sum_k K_k rho K_k^T on ``mode`` (0..3 for H_A, V_A, H_B, V_B).
    """
    density = as_density(state_or_density)
    if mode not in range(4):
        raise ValueError(f"mode must be 0..3, got {mode}")
    if eta == 1:
        return density

    superop = loss_superoperator(eta, density.shape[0])
    out = np.tensordot(superop, density, axes=([2, 3], [mode, mode + 4]))
    return np.moveaxis(out, [0, 1], [mode, mode + 4])


def apply_site_loss(state_or_density, eta, site):
    """Same loss on both polarization modes of site "A" or "B"."""
    first = {"A": 0, "B": 2}[site]
    density = apply_loss(state_or_density, eta, first)
    return apply_loss(density, eta, first + 1)
