"""Reference code data: fixed-rate coding gains and the rateless degree polynomial.

The coding gains below are measured inputs (hard-decision decoding over a
Rayleigh flat-fading link); they are consumed as configuration data, never
re-derived.  Gains are stored in dB per constellation size for the two
calibrated target BERs, 1e-3 and 1e-4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

M_COLUMNS = (2, 4, 8, 16, 32, 64)
GAIN_BERS = (1e-3, 1e-4)


@dataclass(frozen=True)
class Uncoded:
    """Degenerate scheme: rate 1, no gain, no decoder."""

    name: str = "uncoded"


@dataclass(frozen=True)
class FixedRateCode:
    """A block or convolutional code with fixed rate and tabulated gain.

    ``gains_db[m]`` is the (gain@1e-3, gain@1e-4) pair in dB.
    ``decoder_nkt`` carries (n, k, t) for block codes whose decoder energy
    is modeled; None for convolutional codes (decoder energy not modeled).
    """

    name: str
    rate: float
    gains_db: Mapping[int, Tuple[float, float]] = field(hash=False)
    decoder_nkt: Optional[Tuple[int, int, int]] = None

    def gain_db(self, m: int, target_ber: float) -> float:
        if m not in self.gains_db:
            raise KeyError(f"{self.name}: no gain entry for M={m}")
        for i, ber in enumerate(GAIN_BERS):
            if abs(target_ber - ber) <= 1e-3 * ber:
                return self.gains_db[m][i]
        raise KeyError(
            f"{self.name}: gains tabulated only for BER {GAIN_BERS}, got {target_ber}"
        )


def _gains(*pairs: Tuple[float, float]) -> Mapping[int, Tuple[float, float]]:
    assert len(pairs) == len(M_COLUMNS)
    return dict(zip(M_COLUMNS, pairs))


BCH_CODES = (
    FixedRateCode("bch-7-4-1", 4 / 7, _gains((2.5, 2.8), (0.3, 0.4), (0.1, 0.2),
                  (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)), (7, 4, 1)),
    FixedRateCode("bch-15-11-1", 11 / 15, _gains((1.4, 1.6), (0.2, 0.3), (0.0, 0.0),
                  (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)), (15, 11, 1)),
    FixedRateCode("bch-15-7-2", 7 / 15, _gains((2.4, 3.3), (2.0, 2.3), (0.8, 1.0),
                  (0.3, 0.4), (0.0, 0.0), (0.0, 0.0)), (15, 7, 2)),
    FixedRateCode("bch-15-5-3", 5 / 15, _gains((4.1, 4.6), (2.7, 2.9), (2.0, 2.1),
                  (1.5, 1.6), (0.7, 0.8), (0.2, 0.2)), (15, 5, 3)),
    FixedRateCode("bch-31-26-1", 26 / 31, _gains((1.2, 1.5), (0.2, 0.2), (0.0, 0.0),
                  (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)), (31, 26, 1)),
    FixedRateCode("bch-31-21-2", 21 / 31, _gains((2.3, 2.9), (1.7, 2.0), (0.7, 0.8),
                  (0.2, 0.2), (0.0, 0.0), (0.0, 0.0)), (31, 21, 2)),
    FixedRateCode("bch-31-16-3", 16 / 31, _gains((2.9, 3.1), (2.1, 2.2), (1.5, 1.6),
                  (1.3, 1.4), (0.6, 0.7), (0.1, 0.1)), (31, 16, 3)),
    FixedRateCode("bch-31-11-5", 11 / 31, _gains((4.1, 4.4), (3.5, 4.2), (2.2, 2.3),
                  (2.0, 2.1), (1.8, 2.0), (1.1, 1.3)), (31, 11, 5)),
    FixedRateCode("bch-31-6-7", 6 / 31, _gains((5.4, 5.9), (4.3, 4.8), (3.5, 3.8),
                  (3.2, 3.3), (2.7, 2.8), (2.3, 2.4)), (31, 6, 7)),
)

CONV_CODES = (
    FixedRateCode("cc-r12-k6", 0.5, _gains((3.8, 4.6), (2.7, 3.1), (2.1, 2.3),
                  (1.8, 2.0), (1.4, 1.5), (1.4, 1.4))),
    FixedRateCode("cc-r12-k7", 0.5, _gains((4.0, 4.7), (3.0, 3.5), (2.2, 2.4),
                  (1.8, 2.0), (1.5, 1.6), (1.4, 1.5))),
    FixedRateCode("cc-r13-k7", 1 / 3, _gains((5.7, 6.4), (4.8, 5.1), (3.7, 3.9),
                  (3.1, 3.3), (2.7, 2.8), (2.5, 2.6))),
    FixedRateCode("cc-r23-a", 2 / 3, _gains((2.2, 2.6), (1.5, 1.7), (0.9, 1.1),
                  (0.6, 0.6), (0.5, 0.5), (0.5, 0.5))),
    FixedRateCode("cc-r23-b", 2 / 3, _gains((2.9, 3.5), (1.9, 2.4), (1.4, 1.8),
                  (1.1, 1.2), (0.8, 0.9), (0.7, 0.8))),
)

# Output-node degree polynomial optimized for a binary symmetric channel
# under hard-decision ternary decoding: (degree, probability) pairs.
RATELESS_DEGREE_TABLE = (
    (1, 0.00466),
    (2, 0.55545),
    (3, 0.09743),
    (5, 0.17506),
    (8, 0.03774),
    (14, 0.08202),
    (33, 0.01775),
    (100, 0.02989),
)

# Rate grid used to quantize achieved rateless rates: 0.95 cap down to
# 0.10 in 0.05 steps, plus the 0.00 failure bin.
RATE_GRID = tuple(round(0.95 - 0.05 * i, 2) for i in range(18))
FAILURE_RATE = 0.0


def code_by_name(name: str) -> FixedRateCode:
    for code in BCH_CODES + CONV_CODES:
        if code.name == name:
            return code
    raise KeyError(f"unknown code {name!r}")
