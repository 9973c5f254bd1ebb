# fockoracle/processors/detection.py
"""
On/off detection and the squash assignment.

Each of the four detectors (T_A, R_A, T_B, R_B) stays silent on |n> with
probability e^(-nu) (1 - eta_c)^n. Detector noise and photon counts are
independent given the photon numbers, so pattern probabilities follow
from these no-click marginals mode by mode.
"""

import itertools
from typing import NamedTuple

import numpy as np


class ClickPattern(NamedTuple):
    t_a: bool
    r_a: bool
    t_b: bool
    r_b: bool


ALL_PATTERNS = tuple(ClickPattern(*flags) for flags in itertools.product((False, True), repeat=4))

OUTCOMES = (("T", "T"), ("T", "R"), ("R", "T"), ("R", "R"))


def photon_number_distribution(density):
    """Diagonal of rho as a (d,)*4 array of photon-number probabilities."""
    dim = density.shape[0]
    flat = density.reshape(dim ** 4, dim ** 4)
    return np.diagonal(flat).reshape((dim,) * 4).copy()


def click_pattern_probs(density, detector):
    """{ClickPattern: probability} for all 16 patterns."""
    populations = photon_number_distribution(density)
    dim = populations.shape[0]

    silent = np.exp(-detector.nu) * (1 - detector.eta_c) ** np.arange(dim)
    # response[c, n]: detector outcome c (0 silent, 1 click) given n photons
    response = np.vstack([silent, 1 - silent])

    table = np.einsum("abcd,ia,jb,kc,ld->ijkl", populations, response, response, response, response)
    return {pattern: float(table[tuple(int(flag) for flag in pattern)]) for pattern in ALL_PATTERNS}


def _site_outcomes(transmitted, reflected, include_double_clicks):
    """{outcome: weight} for one site."""
    if transmitted and reflected:
        return {"T": 0.5, "R": 0.5} if include_double_clicks else {}
    if transmitted:
        return {"T": 1.0}
    if reflected:
        return {"R": 1.0}
    return {}


def squash(pattern_probs, include_double_clicks=True):
    """
    Joint outcome probabilities {(i_A, i_B): P} with i in {"T", "R"}.

    A double click at a site is replaced by a random outcome (weight 1/2
    per outcome, 1/4 when both sites double-click). Without double clicks
    only patterns with exactly one click per site count.
    """
    joint = {outcome: 0.0 for outcome in OUTCOMES}
    for pattern, probability in pattern_probs.items():
        site_a = _site_outcomes(pattern.t_a, pattern.r_a, include_double_clicks)
        site_b = _site_outcomes(pattern.t_b, pattern.r_b, include_double_clicks)
        for i_a, weight_a in site_a.items():
            for i_b, weight_b in site_b.items():
                joint[(i_a, i_b)] += weight_a * weight_b * probability
    return joint


def same_and_different(joint):
    """(P_same, P_different) from squashed outcomes."""
    same = joint[("T", "T")] + joint[("R", "R")]
    different = joint[("T", "R")] + joint[("R", "T")]
    return same, different
