"""Monte Carlo pipelines: rate-vs-crossover profile, rate pmf, average rate and gain.

The decoder only ever sees a binary symmetric channel, so its behavior is
profiled once as a function of the crossover probability and then reused
for every (average SNR, constellation) pair by integrating against the
fading distribution.  Trials share stream ids across crossover points
(stream id = (experiment seed, trial index)), which nests the flip sets
and keeps the profile columns stochastically ordered.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .channel import conditional_bit_error_prob_many, required_average_snr_uncoded
from .codetables import RATE_GRID
from .ltcode import DEFAULT_MAX_ITERS, DegreeDistribution, run_session
from .params import linear_to_db

__all__ = [
    "RateProfile",
    "RatePmf",
    "default_p_grid",
    "rate_vs_crossover_profile",
    "lt_rate_pmf",
    "lt_average_rate_and_gain",
    "LtOperatingTable",
    "build_lt_table",
]

PROFILE_STREAM = 0  # spawn-key tag for profile trials

QUAD_NODES = 400
QUAD_SPAN = 12.0  # integrate the SNR density out to span * average SNR
DEFAULT_TRIALS = 2000
DEFAULT_P_POINTS = 40
DEFAULT_P_MIN = 1e-5
DEFAULT_P_MAX = 0.49


def default_p_grid(points: int = DEFAULT_P_POINTS, p_min: float = DEFAULT_P_MIN,
                   p_max: float = DEFAULT_P_MAX) -> np.ndarray:
    """Crossover grid for profiling: 0 plus log-spaced points in [p_min, p_max]."""
    return np.concatenate([[0.0], np.geomspace(p_min, p_max, points)])


@dataclass
class RateProfile:
    """Empirical achieved-rate distribution per crossover probability.

    ``mass[i, j]`` is the fraction of trials at crossover ``p_values[i]``
    that achieved ``rates[j]``; the last rate column is the 0.0 failure
    bin.  Rows are probability distributions.
    """

    k: int
    p_values: np.ndarray          # ascending, first entry may be 0.0
    rates: np.ndarray             # descending grid rates plus trailing 0.0
    mass: np.ndarray              # shape (len(p_values), len(rates))
    trials: int
    seed: int

    def success_cdf(self, i: int) -> np.ndarray:
        """P{achieved rate >= r} over the grid at crossover index ``i``."""
        return np.cumsum(self.mass[i, :-1])

    def distribution_at(self, p: float) -> np.ndarray:
        """Rate distribution at crossover ``p``, interpolated between columns.

        Log-linear in p between grid points; linear in p between the
        noiseless column and the smallest positive grid point; clamped at
        the top of the grid.
        """
        pv = self.p_values
        positive = pv[pv > 0.0]
        if p <= 0.0:
            return self.mass[0] if pv[0] == 0.0 else self.mass[0]
        if pv[0] == 0.0 and p < positive[0]:
            lam = p / positive[0]
            return (1.0 - lam) * self.mass[0] + lam * self.mass[1]
        if p >= pv[-1]:
            return self.mass[-1]
        j = int(np.searchsorted(pv, p, side="right")) - 1
        lo, hi = pv[j], pv[j + 1]
        if lo == 0.0:
            lam = p / hi
        else:
            lam = (np.log(p) - np.log(lo)) / (np.log(hi) - np.log(lo))
        return (1.0 - lam) * self.mass[j] + lam * self.mass[j + 1]


def rate_vs_crossover_profile(k: int, dist: DegreeDistribution,
                              p_grid: Sequence[float], trials: int, seed: int,
                              rate_grid: Sequence[float] = RATE_GRID,
                              max_iters: int = DEFAULT_MAX_ITERS) -> RateProfile:
    """Run ``trials`` sessions per crossover point and tabulate achieved rates.

    Trial t reuses stream id (seed, t) at every crossover point, so the
    flip sets are nested across the grid.
    """
    p_grid = np.asarray(sorted(p_grid), dtype=float)
    if p_grid[0] < 0.0 or p_grid[-1] >= 0.5:
        raise ValueError("crossover grid must lie in [0, 0.5)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rates = np.array(list(rate_grid) + [0.0], dtype=float)
    rate_index = {float(r): j for j, r in enumerate(rates)}
    mass = np.zeros((len(p_grid), len(rates)))

    # per-trial messages and session seeds, fixed across the p grid
    trial_streams = []
    for t in range(trials):
        trial_ss = np.random.SeedSequence(entropy=seed,
                                          spawn_key=(PROFILE_STREAM, t))
        msg_ss, sess_ss = trial_ss.spawn(2)
        msg = (np.random.Generator(np.random.PCG64(msg_ss)).random(k)
               < 0.5).astype(np.uint8)
        trial_streams.append((msg, sess_ss))

    for i, p in enumerate(p_grid):
        for msg, sess_ss in trial_streams:
            result = run_session(msg, dist, sess_ss, float(p),
                                 rate_grid=rate_grid, max_iters=max_iters)
            mass[i, rate_index[result.achieved_rate]] += 1.0
    mass /= trials
    return RateProfile(k=k, p_values=p_grid, rates=rates, mass=mass,
                       trials=trials, seed=seed)


@dataclass
class RatePmf:
    """Probability mass of the achieved code rate at one (avg SNR, M) point."""

    avg_snr_db: float
    m: int
    rates: np.ndarray
    mass: np.ndarray

    def average_rate(self) -> float:
        return float(np.dot(self.rates, self.mass))

    def failure_mass(self) -> float:
        return float(self.mass[-1])


def lt_rate_pmf(avg_snr_db: float, m: int, profile: RateProfile,
                quadrature_nodes: int = QUAD_NODES,
                span: float = QUAD_SPAN) -> RatePmf:
    """Integrate the profile over the fading SNR density at one average SNR.

    The instantaneous SNR is exponential; each quadrature node maps to a
    crossover probability and hence to an achieved-rate distribution.
    The analytic tail beyond the quadrature span (mass exp(-span)) is
    assigned to the noiseless column, so no probability is truncated.
    """
    gbar = 10.0 ** (avg_snr_db / 10.0)
    gamma = np.linspace(0.0, span * gbar, quadrature_nodes)
    dens = np.exp(-gamma / gbar) / gbar
    step = gamma[1] - gamma[0]
    weights = dens * step
    weights[0] *= 0.5
    weights[-1] *= 0.5

    p_of_gamma = conditional_bit_error_prob_many(gamma, m)
    if p_of_gamma.max() > profile.p_values[-1] + 1e-12 and \
            profile.p_values[-1] < 0.49:
        warnings.warn(
            "profile covers crossover only up to "
            f"{profile.p_values[-1]:.3g}; clamping larger values",
            stacklevel=2)

    pmf = np.zeros_like(profile.rates)
    for w, p in zip(weights, p_of_gamma):
        pmf += w * profile.distribution_at(float(p))
    pmf += np.exp(-span) * profile.distribution_at(0.0)
    total = pmf.sum()
    if abs(total - 1.0) > 1e-6:
        warnings.warn(f"quadrature mass {total:.8f} != 1; renormalizing",
                      stacklevel=2)
    return RatePmf(avg_snr_db=avg_snr_db, m=m, rates=profile.rates.copy(),
                   mass=pmf / total)


def lt_average_rate_and_gain(pmf: RatePmf, m: int,
                             target_ber: float) -> Tuple[float, float]:
    """Average achieved rate and the coding gain (dB) at the pmf's SNR.

    The gain is the SNR saving versus the uncoded requirement at the same
    target BER: required_dB - operating_dB.  Negative when operating
    above the uncoded requirement.
    """
    required = required_average_snr_uncoded(m, target_ber)
    gain_db = linear_to_db(required) - pmf.avg_snr_db
    return pmf.average_rate(), gain_db


@dataclass
class LtOperatingTable:
    """Average rate and gain versus operating average SNR for one M."""

    m: int
    target_ber: float
    snr_db: np.ndarray
    avg_rate: np.ndarray
    gain_db: np.ndarray

    def interpolate(self, snr_db: float) -> Tuple[float, float]:
        """(avg_rate, gain_db) linearly interpolated in dB, clamped at the ends."""
        rate = float(np.interp(snr_db, self.snr_db, self.avg_rate))
        required = required_average_snr_uncoded(self.m, self.target_ber)
        return rate, linear_to_db(required) - snr_db


def build_lt_table(profile: RateProfile, m: int, snr_grid_db: Sequence[float],
                   target_ber: float,
                   quadrature_nodes: int = QUAD_NODES,
                   span: float = QUAD_SPAN) -> LtOperatingTable:
    """Tabulate (avg rate, gain) over an SNR grid for the optimizer and CSVs."""
    snr = np.asarray(sorted(snr_grid_db), dtype=float)
    rates = np.empty_like(snr)
    gains = np.empty_like(snr)
    for i, s in enumerate(snr):
        pmf = lt_rate_pmf(float(s), m, profile, quadrature_nodes, span)
        rates[i], gains[i] = lt_average_rate_and_gain(pmf, m, target_ber)
    return LtOperatingTable(m=m, target_ber=target_ber, snr_db=snr,
                            avg_rate=rates, gain_db=gains)
