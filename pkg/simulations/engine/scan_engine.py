# simulations/engine/scan_engine.py
"""
ScanEngine

Turns a RunConfig into result tables:

    scan_squeezing     Bell parameter vs xi, fading and deterministic-loss
                       channels, with and without double clicks (the dc
                       columns stay empty when double clicks are discarded)
    scan_postselection Bell parameter and feasibility vs eta_ps
    pdt_stats          moments, exceedances and histogram of one PDT
    validate           closed forms vs the Fock oracle

Grid points run on a thread pool. Point i uses the seed derived from
(seed, i), so results do not depend on the number of workers and rows
come out in grid order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from atmosphere.channels.transmittance_models import (
    Copropagating,
    Counterpropagating,
    Deterministic,
    Postselected,
    TruncatedLogNormal,
)
from atmosphere.services.pdt_service import (
    exact_mean,
    exceedance,
    joint_feasibility,
    pdt_moments,
    sample_pdt,
)
from chsh.engine.bell_optimizer import maximize_bell
from core.exceptions import BellSimError, ConfigError
from core.numerics import derive_seed
from fockoracle.services.validation_service import ValidationGrid, validate_grid
from photocount.sources import Pdc
from simulations.services.run_config import samples_or_default, seed_or_default

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 100

SQUEEZING_COLUMNS = ["xi"] + [
    f"bell_{channel}_{clicks}{suffix}"
    for channel in ("fading", "det")
    for clicks in ("dc", "nodc")
    for suffix in ("", "_stderr", "_canonical")
] + ["eta_mean_a", "eta_mean_b"]

POSTSELECTION_COLUMNS = [
    "eta_ps", "bell", "bell_stderr", "bell_canonical", "feasibility", "feasibility_stderr",
]

STATS_COLUMNS = ["quantity", "lower", "upper", "value", "stderr"]


def _mean(model, samples, seed):
    value = exact_mean(model)
    if value is None:
        value = pdt_moments(model, samples, seed).mean
    return value


def deterministic_baseline(scenario, samples, seed):
    """
    The same scenario with every arm replaced by Deterministic(<eta>).
    Arm seeds follow sample_pairs.
    """
    if isinstance(scenario, Copropagating):
        return Copropagating(Deterministic(_mean(scenario.model, samples, derive_seed(seed, 0))))
    return Counterpropagating(
        Deterministic(_mean(scenario.model_a, samples, derive_seed(seed, 0))),
        Deterministic(_mean(scenario.model_b, samples, derive_seed(seed, 1))),
    )


def postselected_scenario(scenario, eta_ps):
    """Condition every arm on eta >= eta_ps; eta_ps = 0 keeps the scenario."""
    if eta_ps <= 0:
        return scenario
    if isinstance(scenario, Copropagating):
        return Copropagating(Postselected(scenario.model, eta_ps))
    return Counterpropagating(
        Postselected(scenario.model_a, eta_ps), Postselected(scenario.model_b, eta_ps)
    )


class ScanEngine:
    """
    Runs one command's worth of grid points for a RunConfig.
    """

    def __init__(self, config, workers=1):
        self.config = config
        self.workers = max(int(workers), 1)
        self.seed = seed_or_default(config)
        self.samples = samples_or_default(config)

    def _map(self, task, items):
        items = list(items)
        if self.workers == 1 or len(items) == 1:
            return [task(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(task, items))

    def _point(self, label, index, func):
        """Run one grid point, logging failures with their position."""
        try:
            return func()
        except BellSimError as exc:
            logger.error(f"{label} point {index} failed: {exc}")
            raise

    # ==========================================================
    # SQUEEZING SCAN
    # ==========================================================

    def scan_squeezing(self):
        config = self.config
        config.require("source", "detector", "scenario")

        baseline = deterministic_baseline(config.scenario, self.samples, self.seed)
        eta_means = tuple(model.eta0 for model in baseline.models)
        mean_a, mean_b = eta_means if len(eta_means) == 2 else eta_means * 2
        click_modes = (("dc", True), ("nodc", False)) if config.include_double_clicks else (("nodc", False),)
        reported = click_modes[0][0]
        logger.info(f"scan_squeezing: {len(config.sources)} points, <eta> = ({mean_a:.6g}, {mean_b:.6g})")

        def row(item):
            index, source = item
            point_seed = derive_seed(self.seed, index)
            values = {"xi": source.xi if isinstance(source, Pdc) else 0.0}

            for channel, scenario in (("fading", config.scenario), ("det", baseline)):
                for clicks, flag in click_modes:
                    result = self._point(
                        "scan_squeezing", index,
                        lambda: maximize_bell(source, scenario, config.detector, flag, self.samples, point_seed),
                    )
                    prefix = f"bell_{channel}_{clicks}"
                    values[prefix] = result.bell_value
                    values[f"{prefix}_stderr"] = result.stderr
                    values[f"{prefix}_canonical"] = result.canonical_value

            values["eta_mean_a"] = mean_a
            values["eta_mean_b"] = mean_b
            logger.info(
                f"xi={values['xi']:.4g} ({reported}): fading {values[f'bell_fading_{reported}']:.5f}, "
                f"deterministic {values[f'bell_det_{reported}']:.5f}"
            )
            return values

        rows = self._map(row, enumerate(config.sources))
        return pd.DataFrame(rows, columns=SQUEEZING_COLUMNS)

    # ==========================================================
    # POSTSELECTION SCAN
    # ==========================================================

    def scan_postselection(self):
        config = self.config
        config.require("source", "detector", "scenario", "postselection")
        if len(config.sources) != 1:
            raise ConfigError(
                f"scan_postselection takes a single source, got a grid of {len(config.sources)}",
                key="source.xi",
            )
        source = config.sources[0]
        logger.info(f"scan_postselection: {len(config.eta_ps_grid)} points")

        def row(item):
            index, eta_ps = item
            scenario = postselected_scenario(config.scenario, eta_ps)

            def evaluate():
                result = maximize_bell(
                    source, scenario, config.detector, config.include_double_clicks,
                    self.samples, derive_seed(self.seed, index),
                )
                # One seed along the whole grid keeps the feasibility monotone
                feasibility = joint_feasibility(config.scenario, eta_ps, self.samples, self.seed)
                return result, feasibility

            result, feasibility = self._point("scan_postselection", index, evaluate)
            logger.info(f"eta_ps={eta_ps:.4g}: B={result.bell_value:.5f}, F={feasibility.value:.3e}")
            return {
                "eta_ps": eta_ps,
                "bell": result.bell_value,
                "bell_stderr": result.stderr,
                "bell_canonical": result.canonical_value,
                "feasibility": feasibility.value,
                "feasibility_stderr": feasibility.stderr,
            }

        rows = self._map(row, enumerate(config.eta_ps_grid))
        return pd.DataFrame(rows, columns=POSTSELECTION_COLUMNS)

    # ==========================================================
    # PDT STATISTICS
    # ==========================================================

    def pdt_stats(self):
        config = self.config
        config.require("stats")
        model = config.models[config.stats_model]
        samples, seed = self.samples, self.seed

        moments = pdt_moments(model, samples, seed)
        rows = [
            ("mean", np.nan, np.nan, moments.mean, moments.mean_stderr),
            ("second_moment", np.nan, np.nan, moments.second, moments.second_stderr),
            ("variance", np.nan, np.nan, moments.variance, moments.variance_stderr),
        ]

        if isinstance(model, TruncatedLogNormal):
            rows.append(("fit_sigma", np.nan, np.nan, model.channel.sigma, 0.0))
            rows.append(("fit_mu", np.nan, np.nan, model.channel.mu, 0.0))

        for threshold in config.thresholds:
            estimate = exceedance(model, threshold, samples, seed)
            rows.append(("exceedance", threshold, np.nan, estimate.value, estimate.stderr))

        eta = sample_pdt(model, samples, seed)
        counts, edges = np.histogram(eta, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
        probabilities = counts / eta.size
        stderrs = np.sqrt(probabilities * (1 - probabilities) / eta.size)
        for k in range(HISTOGRAM_BINS):
            rows.append(("histogram", edges[k], edges[k + 1], probabilities[k], stderrs[k]))

        logger.info(f"pdt_stats {config.stats_model}: <eta>={moments.mean:.6g}, var={moments.variance:.6g}")
        return pd.DataFrame(rows, columns=STATS_COLUMNS)

    # ==========================================================
    # ORACLE VALIDATION
    # ==========================================================

    def validate(self):
        grid = self.config.validation or ValidationGrid()
        modes = (True, False) if self.config.include_double_clicks else (False,)
        logger.info(f"validate: {grid.size} grid points, double-click modes {modes}")
        return validate_grid(grid, double_click_modes=modes, workers=self.workers)
