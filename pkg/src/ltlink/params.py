"""Radio, channel and modulation parameter records with validation.

All quantities are stored in linear SI units (Hz, s, W, J).  Decibel
values appear only at I/O boundaries (config files, CSV) and are
converted on the way in/out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def db_to_linear(x_db: float) -> float:
    """Convert a dB quantity to its linear value."""
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a linear quantity to dB."""
    if x <= 0.0:
        raise ValueError("dB undefined for non-positive value %r" % (x,))
    return 10.0 * math.log10(x)


class ValidationError(ValueError):
    """A parameter violates its documented invariant.

    ``field`` carries the dotted path of the offending entry so config
    errors can point at the exact key.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class SystemParams:
    """Fixed radio-hardware and framing parameters of one sensor link.

    Power figures are the active-mode consumptions of the individual
    transceiver blocks: frequency synthesizer, transmit/receive filters,
    low-noise amplifier, envelope detectors, IF amplifier and ADC.
    ``amp_alpha`` is the power-amplifier overhead, i.e. the amplifier
    draws ``amp_alpha`` times the radiated power on top of it.
    """

    bandwidth_hz: float = 62.5e3
    payload_bits: int = 8192
    period_s: float = 1.4
    transient_s: float = 5e-6
    noise_density_j: float = 1e-18  # total one-sided density, J/Hz
    amp_alpha: float = 0.33
    p_synth_w: float = 10e-3
    p_tx_filter_w: float = 2.5e-3
    p_rx_filter_w: float = 2.5e-3
    p_lna_w: float = 9e-3
    p_envelope_w: float = 3e-3
    p_if_amp_w: float = 3e-3
    p_adc_w: float = 7e-3

    def validate(self, prefix: str = "system") -> "SystemParams":
        positive = [
            ("bandwidth_hz", self.bandwidth_hz),
            ("payload_bits", self.payload_bits),
            ("period_s", self.period_s),
            ("transient_s", self.transient_s),
            ("noise_density_j", self.noise_density_j),
            ("p_synth_w", self.p_synth_w),
            ("p_tx_filter_w", self.p_tx_filter_w),
            ("p_rx_filter_w", self.p_rx_filter_w),
            ("p_lna_w", self.p_lna_w),
            ("p_envelope_w", self.p_envelope_w),
            ("p_if_amp_w", self.p_if_amp_w),
            ("p_adc_w", self.p_adc_w),
        ]
        for name, value in positive:
            if not value > 0.0:
                raise ValidationError(f"{prefix}.{name}", "must be strictly positive")
        if not self.transient_s < self.period_s:
            raise ValidationError(f"{prefix}.transient_s", "must be < period_s")
        if self.amp_alpha < 0.0:
            raise ValidationError(f"{prefix}.amp_alpha", "must be >= 0")
        return self


@dataclass(frozen=True)
class ChannelSpec:
    """Rayleigh flat-fading channel with power-law path loss.

    ``omega`` is the mean square fading amplitude, ``eta`` the path-loss
    exponent, ``margin`` the linear link margin and ``ref_gain`` the
    linear attenuation at 1 m (antenna gains and wavelength folded in).
    """

    omega: float = 1.0
    eta: float = 3.5
    margin: float = 1e4       # 40 dB
    ref_gain: float = 1e3     # 30 dB

    def validate(self, prefix: str = "channel") -> "ChannelSpec":
        if not self.omega > 0.0:
            raise ValidationError(f"{prefix}.omega", "must be > 0")
        if not self.eta >= 2.0:
            raise ValidationError(f"{prefix}.eta", "must be >= 2")
        if not self.margin >= 1.0:
            raise ValidationError(f"{prefix}.margin", "must be >= 1 (linear)")
        if not self.ref_gain > 0.0:
            raise ValidationError(f"{prefix}.ref_gain", "must be > 0")
        return self


@dataclass(frozen=True)
class ModulationConfig:
    """One orthogonal-FSK constellation: size, bits/symbol and symbol time."""

    m: int
    bits_per_symbol: int
    symbol_s: float

    def validate(self, prefix: str = "modulation") -> "ModulationConfig":
        if self.m < 2 or self.m & (self.m - 1):
            raise ValidationError(f"{prefix}.m", "must be a power of two >= 2")
        if self.bits_per_symbol != self.m.bit_length() - 1:
            raise ValidationError(f"{prefix}.bits_per_symbol", "must equal log2(m)")
        if self.symbol_s <= 0.0:
            raise ValidationError(f"{prefix}.symbol_s", "must be > 0")
        return self


def modulation_for(m: int, bandwidth_hz: float) -> ModulationConfig:
    """Build the constellation record for size ``m`` in a fixed bandwidth.

    The m orthogonal tones at minimum non-coherent spacing occupy the
    whole bandwidth, so the symbol time is ``m / bandwidth``.
    """
    if m < 2 or m & (m - 1):
        raise ValueError(f"constellation size must be a power of two >= 2, got {m}")
    return ModulationConfig(m=m, bits_per_symbol=m.bit_length() - 1,
                            symbol_s=m / bandwidth_hz)
