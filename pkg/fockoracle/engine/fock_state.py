# fockoracle/engine/fock_state.py
"""
Four-mode Fock states of the entangled source.

Modes are ordered (H_A, V_A, H_B, V_B). The PDC state is the product of
two two-mode squeezed vacua, (H_A, V_B) with parameter xi and (V_A, H_B)
with -xi, so the component with n pairs reads

    sech^2(xi) * tanh^n(xi) * sum_m (-1)^m |n-m, m, m, n-m>

Truncating to n <= n_max drops the probability

    sum_{n > n_max} (n + 1) t^n (1 - t)^2 = t^(n_max+1) [(n_max + 2) - (n_max + 1) t]

with t = tanh^2(xi).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from core.exceptions import CutoffTooSmallError

logger = logging.getLogger(__name__)

# (d,)*8 densities above this cutoff no longer fit comfortably in memory
MAX_CUTOFF = 6

MODES = ("H_A", "V_A", "H_B", "V_B")


@dataclass(frozen=True, eq=False)
class FockState4:
    """
    Real amplitudes indexed by (n_HA, n_VA, n_HB, n_VB), each in 0..cutoff.

    ``tail`` is the probability discarded by the truncation.
    """

    amplitudes: np.ndarray
    cutoff: int
    tail: float = 0.0

    def __post_init__(self):
        dim = self.cutoff + 1
        if self.amplitudes.shape != (dim,) * 4:
            raise ValueError(
                f"amplitudes must have shape {(dim,) * 4}, got {self.amplitudes.shape}"
            )
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("amplitudes must be finite")

    @property
    def dim(self):
        return self.cutoff + 1

    @property
    def norm(self):
        """<psi|psi>, i.e. 1 - tail up to rounding."""
        return float(np.sum(self.amplitudes ** 2))

    def amplitude(self, n_ha, n_va, n_hb, n_vb):
        return float(self.amplitudes[n_ha, n_va, n_hb, n_vb])

    def density(self):
        """|psi><psi| as a (d,)*8 tensor, ket indices first."""
        return np.multiply.outer(self.amplitudes, self.amplitudes)


def pdc_tail(xi, n_max):
    """Probability of more than n_max pairs."""
    t = math.tanh(xi) ** 2
    return t ** (n_max + 1) * ((n_max + 2) - (n_max + 1) * t)


def choose_cutoff(xi, tail_tolerance=None):
    """
    Smallest n_max whose truncation tail is within tolerance.

    Raises
    ------
    CutoffTooSmallError
        If even MAX_CUTOFF leaves too much probability out.
    """
    tolerance = settings.BELLSIM_ORACLE_TAIL_TOLERANCE if tail_tolerance is None else tail_tolerance
    for n_max in range(1, MAX_CUTOFF + 1):
        if pdc_tail(xi, n_max) <= tolerance:
            return n_max
    raise CutoffTooSmallError(
        f"xi={xi} needs a Fock cutoff above {MAX_CUTOFF}: "
        f"tail {pdc_tail(xi, MAX_CUTOFF):.3e} > {tolerance:.1e}"
    )


def build_pdc_state(xi, n_max=None, tail_tolerance=None):
    """
    Truncated PDC state. With ``n_max`` omitted the cutoff is chosen by
    choose_cutoff; an explicit ``n_max`` must meet the tolerance.

    Raises
    ------
    CutoffTooSmallError
        If the truncation tail exceeds the tolerance.
    """
    if not (math.isfinite(xi) and xi >= 0):
        raise ValueError(f"xi must be a finite value >= 0, got {xi}")

    tolerance = settings.BELLSIM_ORACLE_TAIL_TOLERANCE if tail_tolerance is None else tail_tolerance
    if n_max is None:
        n_max = choose_cutoff(xi, tolerance)
    elif n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")

    tail = pdc_tail(xi, n_max)
    if tail > tolerance:
        raise CutoffTooSmallError(
            f"n_max={n_max} too small for xi={xi}: tail {tail:.3e} > {tolerance:.1e}"
        )

    dim = n_max + 1
    amplitudes = np.zeros((dim,) * 4)
    scale = 1.0 / math.cosh(xi) ** 2
    ratio = math.tanh(xi)
    for n in range(n_max + 1):
        for m in range(n + 1):
            amplitudes[n - m, m, m, n - m] = (-1) ** m * scale * ratio ** n

    logger.debug(f"PDC state xi={xi}: n_max={n_max}, tail={tail:.3e}")
    return FockState4(amplitudes=amplitudes, cutoff=n_max, tail=tail)


def build_bell_state():
    """(|1,0,0,1> - |0,1,1,0>) / sqrt(2): the one-pair component of the PDC state."""
    amplitudes = np.zeros((2,) * 4)
    amplitudes[1, 0, 0, 1] = 1 / math.sqrt(2)
    amplitudes[0, 1, 1, 0] = -1 / math.sqrt(2)
    return FockState4(amplitudes=amplitudes, cutoff=1)
