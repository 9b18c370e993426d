"""Rayleigh fading statistics and non-coherent MFSK error-rate mapping.

Everything here is a pure function; random draws come from a caller
supplied ``numpy.random.Generator``.  Within one codeword the fading is
constant, so the decoder sees a binary symmetric channel whose crossover
probability is the conditional bit error rate at that codeword's
instantaneous SNR.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np

__all__ = [
    "sample_fading",
    "conditional_bit_error_prob",
    "conditional_bit_error_prob_many",
    "required_average_snr_uncoded",
    "crossover_for_snr",
]

# Above this constellation size the alternating SER sum loses too many
# digits to cancellation in float64 (binomial terms up to ~1e17 for M=64),
# so it is evaluated in arbitrary precision instead.
_EXACT_SUM_MAX_M = 16


def sample_fading(omega: float, rng: np.random.Generator, size=None):
    """Draw squared fading amplitudes, exponentially distributed with mean ``omega``.

    A Rayleigh amplitude with mean-square ``omega`` has an exponential
    power gain; ``size=None`` returns a scalar.
    """
    if not omega > 0.0:
        raise ValueError(f"omega must be > 0, got {omega}")
    return rng.exponential(scale=omega, size=size)


def _check_m(m: int) -> None:
    if m < 2 or m & (m - 1):
        raise ValueError(f"constellation size must be a power of two >= 2, got {m}")


@lru_cache(maxsize=64)
def _ser_terms(m: int):
    """Signed coefficients and decay rates of the conditional SER sum."""
    signs = np.array([(-1.0) ** (j + 1) for j in range(1, m)])
    coef = np.array([math.comb(m - 1, j) / (j + 1) for j in range(1, m)])
    rate = np.array([j / (j + 1) for j in range(1, m)])
    return signs * coef, rate


@lru_cache(maxsize=64)
def _ser_terms_mp(m: int):
    prec = int(math.log10(math.comb(m - 1, (m - 1) // 2))) + 25
    coef = [mpmath.mpf((-1) ** (j + 1)) * math.comb(m - 1, j) / (j + 1)
            for j in range(1, m)]
    rate = [mpmath.mpf(j) / (j + 1) for j in range(1, m)]
    return prec, coef, rate


def conditional_bit_error_prob(gamma: float, m: int) -> float:
    """Bit error probability of non-coherent m-FSK at instantaneous SNR ``gamma``.

    Evaluates the exact alternating-sum symbol error rate

        P_s(g) = sum_{j=1}^{m-1} (-1)^(j+1) C(m-1, j) / (j+1) * exp(-j*g/(j+1))

    and converts to bit errors with P_b = m/(2(m-1)) * P_s.  For m = 2
    this reduces to exp(-g/2)/2.  The sum cancels catastrophically in
    double precision for large m, so m > 16 goes through mpmath.

    Returns a value in [0, 1/2]; 1/2 exactly at gamma = 0.
    """
    _check_m(m)
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if m == 2:
        ps = 0.5 * math.exp(-gamma / 2.0)
    elif m <= _EXACT_SUM_MAX_M:
        signed, rate = _ser_terms(m)
        ps = math.fsum(signed * np.exp(-gamma * rate))
    else:
        prec, coef, rate = _ser_terms_mp(m)
        with mpmath.workdps(prec):
            ps = float(mpmath.fsum(c * mpmath.e ** (-gamma * r)
                                   for c, r in zip(coef, rate)))
    pb = m / (2.0 * (m - 1)) * ps
    return min(max(pb, 0.0), 0.5)


def conditional_bit_error_prob_many(gammas: np.ndarray, m: int) -> np.ndarray:
    """Vectorized :func:`conditional_bit_error_prob` over an SNR array."""
    _check_m(m)
    gammas = np.asarray(gammas, dtype=float)
    if np.any(gammas < 0.0):
        raise ValueError("gamma must be >= 0")
    if m == 2:
        ps = 0.5 * np.exp(-gammas / 2.0)
    elif m <= _EXACT_SUM_MAX_M:
        signed, rate = _ser_terms(m)
        ps = np.exp(-np.multiply.outer(gammas, rate)) @ signed
    else:
        flat = gammas.reshape(-1)
        ps = np.array([conditional_bit_error_prob(g, m) for g in flat])
        # scalar path already applied the bit mapping and clamp
        return ps.reshape(gammas.shape)
    pb = m / (2.0 * (m - 1)) * ps
    return np.clip(pb, 0.0, 0.5)


def required_average_snr_uncoded(m: int, target_ber: float) -> float:
    """Average SNR (linear) an uncoded m-FSK link needs for ``target_ber``.

    This is the pairwise-combination inversion used by the transmit
    energy sizing: gamma = (1 - (1 - P_s)^(1/(m-1)))^-1 - 2 with
    P_s = 2(m-1)/m * target_ber, floored at zero.  For m = 2 it equals
    1/P_b - 2 and matches the exact Rayleigh-averaged BER; for larger m
    it is the same approximation the energy model is built on.
    """
    _check_m(m)
    ps = 2.0 * (m - 1) / m * target_ber
    if not 0.0 < ps < 1.0:
        raise ValueError(
            f"target_ber must lie in (0, {m / (2.0 * (m - 1))}) for M={m}, "
            f"got {target_ber}")
    x = -math.expm1(math.log1p(-ps) / (m - 1))  # 1 - (1-ps)^(1/(m-1))
    return max(1.0 / x - 2.0, 0.0)


def crossover_for_snr(gamma: float, m: int) -> float:
    """BSC crossover probability seen by the block decoder at SNR ``gamma``.

    Alias of :func:`conditional_bit_error_prob`: the fading is constant
    over a codeword, so conditioned on its SNR the hard-decision channel
    is a BSC with this flip probability.
    """
    return conditional_bit_error_prob(gamma, m)
