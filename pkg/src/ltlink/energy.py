"""Closed-form energy accounting for uncoded and coded NC-MFSK links.

Per reporting period the sensor wakes, transmits the payload (expanded by
1/code-rate when coded) and sleeps; the sink runs its receive chain for
the same active duration.  Total energy is radiated power (with amplifier
overhead), transmit/receive circuit power over the active time, the
synthesizer-dominated transient, and any decoder energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import required_average_snr_uncoded
from .params import ChannelSpec, ModulationConfig, SystemParams, modulation_for

__all__ = [
    "EnergyBreakdown",
    "path_loss_gain",
    "active_mode_duration",
    "max_constellation_size",
    "transmit_energy_per_symbol",
    "circuit_power_minus_amp",
    "total_energy",
    "crossover_distance",
    "bch_decoder_energy",
]


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy per reporting period, split by where it is spent (J)."""

    radiated: float
    tx_circuit: float
    rx_circuit: float
    transient: float
    decoder: float

    @property
    def total(self) -> float:
        return (self.radiated + self.tx_circuit + self.rx_circuit
                + self.transient + self.decoder)


def path_loss_gain(d: float, ch: ChannelSpec) -> float:
    """Linear path-loss factor (Pt/Pr) at separation ``d`` meters."""
    if not d > 0.0:
        raise ValueError(f"distance must be > 0, got {d}")
    return ch.margin * d ** ch.eta * ch.ref_gain


def active_mode_duration(sys: SystemParams, mod: ModulationConfig,
                         rate: float = 1.0) -> float:
    """Seconds of active mode needed to move the payload at code rate ``rate``."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"code rate must be in (0, 1], got {rate}")
    return mod.m * sys.payload_bits / (sys.bandwidth_hz * mod.bits_per_symbol * rate)


def max_constellation_size(sys: SystemParams) -> int:
    """Largest power-of-two M whose active duration fits the reporting period.

    M = 2^b symbols carry b bits in M/B seconds, so the payload fits iff
    2^b / b <= (B/N) * (T_period - T_transient).
    """
    budget = sys.bandwidth_hz * (sys.period_s - sys.transient_s) / sys.payload_bits
    if budget < 2.0:
        raise ValueError(
            f"period too short: even M=2 needs B*(T-Ttr)/N >= 2, have {budget:.4g}")
    b = 1
    while 2.0 ** (b + 1) / (b + 1) <= budget:
        b += 1
    return 2 ** b


def transmit_energy_per_symbol(mod: ModulationConfig, target_ber: float,
                               l_d: float, ch: ChannelSpec,
                               sys: SystemParams) -> float:
    """Radiated energy per symbol (J) to hit ``target_ber`` through gain ``l_d``.

    The required average SNR factor is clamped at zero, so absurdly high
    BER targets cost nothing instead of raising inside sweeps.
    """
    snr = required_average_snr_uncoded(mod.m, target_ber)
    return snr * l_d * sys.noise_density_j / ch.omega


def circuit_power_minus_amp(sys: SystemParams, m: int) -> float:
    """Total circuit power (W) excluding the radiated-power amplifier term.

    Sensor side: synthesizer + transmit filter.  Sink side: LNA, one
    filter + envelope detector per tone, IF amplifier and ADC.
    """
    return (sys.p_synth_w + sys.p_tx_filter_w + sys.p_lna_w
            + m * (sys.p_rx_filter_w + sys.p_envelope_w)
            + sys.p_if_amp_w + sys.p_adc_w)


def transient_energy(sys: SystemParams) -> float:
    """Start-up energy (J), dominated by the frequency synthesizer."""
    return 1.75 * sys.p_synth_w * sys.transient_s


def total_energy(sys: SystemParams, mod: ModulationConfig, ch: ChannelSpec,
                 d: float, target_ber: float, rate: float = 1.0,
                 gain_linear: float = 1.0,
                 decoder_energy: float = 0.0) -> EnergyBreakdown:
    """Total energy per reporting period for one (constellation, code) choice.

    ``rate`` and ``gain_linear`` describe the code (1, 1 for uncoded);
    the coding gain divides only the radiated term while the rate
    stretches the active duration, hence both circuit terms.
    """
    mod.validate()
    m_max = max_constellation_size(sys)
    if mod.m > m_max:
        raise ValueError(f"M={mod.m} exceeds M_max={m_max} for these parameters")
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"code rate must be in (0, 1], got {rate}")
    if not gain_linear > 0.0:
        raise ValueError(f"linear coding gain must be > 0, got {gain_linear}")
    if decoder_energy < 0.0:
        raise ValueError("decoder energy must be >= 0")

    l_d = path_loss_gain(d, ch)
    e_sym = transmit_energy_per_symbol(mod, target_ber, l_d, ch, sys)
    symbols = sys.payload_bits / (rate * mod.bits_per_symbol)
    radiated = (1.0 + sys.amp_alpha) * e_sym * symbols / gain_linear

    t_active = active_mode_duration(sys, mod, rate)
    tx_circuit = (sys.p_synth_w + sys.p_tx_filter_w) * t_active
    rx_circuit = (circuit_power_minus_amp(sys, mod.m)
                  - sys.p_synth_w - sys.p_tx_filter_w) * t_active

    return EnergyBreakdown(radiated=radiated, tx_circuit=tx_circuit,
                           rx_circuit=rx_circuit,
                           transient=transient_energy(sys),
                           decoder=decoder_energy)


def crossover_distance(sys: SystemParams, mod: ModulationConfig, ch: ChannelSpec,
                       target_ber: float, rate: float,
                       gain_linear: float) -> float:
    """Distance (m) where this fixed-rate code's total energy meets uncoded.

    Setting the coded and uncoded period energies equal (transients
    cancel) and solving for the path-loss gives

        d^eta = M * Omega * (Pc - Pamp) * G*(1-R) / (G*R - 1)
                / ((1+alpha) * snr_req * N0 * B * margin * ref_gain)

    Beyond the returned distance the coded system is cheaper.  Requires
    ``gain_linear * rate > 1``; at or below that the radiated saving
    never pays for the rate overhead.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"code rate must be in (0, 1], got {rate}")
    if gain_linear * rate <= 1.0:
        raise ValueError(
            f"no finite crossover: gain*rate = {gain_linear * rate:.6g} <= 1")
    snr = required_average_snr_uncoded(mod.m, target_ber)
    if snr <= 0.0:
        raise ValueError("target BER requires no transmit energy; no crossover")
    num = (mod.m * ch.omega * circuit_power_minus_amp(sys, mod.m)
           * gain_linear * (1.0 - rate))
    den = ((1.0 + sys.amp_alpha) * snr * sys.noise_density_j * sys.bandwidth_hz
           * ch.margin * ch.ref_gain * (gain_linear * rate - 1.0))
    return (num / den) ** (1.0 / ch.eta)


def bch_decoder_energy(n: int, k: int, t: int, payload_bits: int,
                       e_add_j: float, e_mult_j: float) -> float:
    """Energy (J) to hard-decision decode the payload with a BCH(n, k, t) code.

    Per codeword the decoder performs about 2nt + 2t^2 add/multiply
    pairs.  Payloads not divisible by k are zero-padded, and the pad's
    decode work is charged.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not n > k:
        raise ValueError(f"n must exceed k, got n={n}, k={k}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    blocks = -(-payload_bits // k)  # ceil; pad energy charged
    return blocks * (2 * n * t + 2 * t * t) * (e_add_j + e_mult_j)


def uncoded_total_energy(sys: SystemParams, ch: ChannelSpec, m: int, d: float,
                         target_ber: float) -> EnergyBreakdown:
    """Convenience wrapper: uncoded link at constellation size ``m``."""
    return total_energy(sys, modulation_for(m, sys.bandwidth_hz), ch, d,
                        target_ber)
