# fockoracle/engine/oracle_engine.py
"""
Brute-force joint probabilities at fixed transmittances.

    source state
        ↓
    loss on the A modes (eta_a), loss on the B modes (eta_b)
        ↓
    analyzers at theta_A and theta_B
        ↓
    on/off click patterns
        ↓
    squash
"""

import logging

from fockoracle.engine.fock_state import build_bell_state, build_pdc_state
from fockoracle.processors.detection import click_pattern_probs, same_and_different, squash
from fockoracle.processors.loss import apply_site_loss
from fockoracle.processors.rotation import rotate_site
from photocount.sources import BellState, Pdc

logger = logging.getLogger(__name__)


def source_state(source, n_max=None, tail_tolerance=None):
    if isinstance(source, Pdc):
        return build_pdc_state(source.xi, n_max, tail_tolerance)
    if isinstance(source, BellState):
        return build_bell_state()
    raise TypeError(f"unknown source {source!r}")


def lossy_density(state, eta_a, eta_b):
    density = apply_site_loss(state, eta_a, "A")
    return apply_site_loss(density, eta_b, "B")


def analyzed_density(density, theta_a, theta_b):
    return rotate_site(rotate_site(density, theta_a, "A"), theta_b, "B")


def oracle_joint_probs(
    source,
    eta_a,
    eta_b,
    theta_a,
    theta_b,
    detector,
    n_max=None,
    include_double_clicks=True,
    tail_tolerance=None,
):
    """
    {(i_A, i_B): probability} for i in {"T", "R"}.

    Raises
    ------
    CutoffTooSmallError
        If the PDC truncation discards more than the tolerance.
    """
    state = source_state(source, n_max, tail_tolerance)
    density = analyzed_density(lossy_density(state, eta_a, eta_b), theta_a, theta_b)
    joint = squash(click_pattern_probs(density, detector), include_double_clicks)
    logger.debug(f"oracle {source!r} eta=({eta_a}, {eta_b}) theta=({theta_a}, {theta_b}): {joint}")
    return joint


def oracle_click_probs(source, eta_a, eta_b, delta_theta, detector, n_max=None,
                       include_double_clicks=True, tail_tolerance=None):
    """(P_same, P_different) with theta_A = delta_theta and theta_B = 0."""
    joint = oracle_joint_probs(
        source, eta_a, eta_b, delta_theta, 0.0, detector, n_max, include_double_clicks, tail_tolerance
    )
    return same_and_different(joint)
