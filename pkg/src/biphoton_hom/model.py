"""Per-pair field optics for a path-entangled signal/idler pair on a 50/50 beam splitter.

Fields are plain Python/numpy complex numbers with the common optical carrier
``exp(i(kx - 2 pi f0 t)) exp(i Delta)`` dropped; it cancels in every intensity
and coincidence product.  Units are normalized so that a single photon has
``E0 = 1`` and ``I0 = 1``; port intensities therefore live in ``[0, 2]``.

All functions broadcast over numpy arrays of ``delta_f`` / ``tau``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

CONVENTIONS = ("paper", "si")

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_QUARTER_TURN = 0.5 * math.pi


@dataclass(frozen=True)
class PhaseConfig:
    """Control phases of the interferometer.

    xi : phase applied at beam-splitter input ``a`` (dip at 0, peak at pi/2)
    zeta : phase of the idler relative to the signal
    convention : ``"paper"`` uses ``Delta = df * tau``; ``"si"`` uses ``2 pi df tau``
    """

    xi: float = 0.0
    zeta: float = _QUARTER_TURN
    convention: str = "paper"

    def __post_init__(self):
        if not (math.isfinite(self.xi) and math.isfinite(self.zeta)):
            raise ValueError(f"phases must be finite, got xi={self.xi}, zeta={self.zeta}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}; expected one of {CONVENTIONS}")

    def describe(self) -> dict:
        return {"xi": float(self.xi), "zeta": float(self.zeta), "convention": self.convention}


@dataclass(frozen=True)
class PairSample:
    """One photon pair: signal detuned by +delta_f, idler by -delta_f (Hz)."""

    delta_f: float
    weight: float

    def __post_init__(self):
        if not self.weight >= 0:
            raise ValueError(f"weight must be non-negative, got {self.weight}")


class FieldQuad(NamedTuple):
    e_c: complex
    e_d: complex
    e_c2: complex
    e_d2: complex


class IntensityQuad(NamedTuple):
    i_c: float
    i_d: float
    i_c2: float
    i_d2: float


def bs_transform(a, b):
    """Lossless symmetric 50/50 beam splitter: ``((a + i b)/sqrt2, (i a + b)/sqrt2)``."""
    return (a + 1j * b) * _SQRT_HALF, (1j * a + b) * _SQRT_HALF


def phase_scale(convention: str) -> float:
    """Radians of delay phase per unit ``delta_f * tau``."""
    if convention == "paper":
        return 1.0
    if convention == "si":
        return 2.0 * math.pi
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def detuning_phase(delta_f, tau, convention: str = "paper"):
    """Delay-induced phase of one pair, ``Delta = df * tau`` (times 2 pi under ``si``)."""
    return phase_scale(convention) * np.multiply(delta_f, tau)


def interference_phase(cfg: PhaseConfig, delta_f, tau):
    """``theta = zeta - xi - 2 Delta``, the only phase the port intensities depend on."""
    return (cfg.zeta - cfg.xi) - 2.0 * detuning_phase(delta_f, tau, cfg.convention)


def output_fields(cfg: PhaseConfig, delta_f, tau) -> FieldQuad:
    """Output fields of both correlation terms of the entangled pair.

    Term AB has the signal in ``a`` (carrying ``xi``) and the idler in ``b``
    (carrying ``zeta - 2 Delta``).  In the swapped term BA the idler sits in
    ``a`` with ``zeta - xi - 2 Delta`` and the signal in ``b`` is the phase
    reference.
    """
    delay = 2.0 * detuning_phase(delta_f, tau, cfg.convention)
    a_ab = np.exp(1j * cfg.xi) * np.ones_like(delay)
    b_ab = np.exp(1j * (cfg.zeta - delay))
    e_c, e_d = bs_transform(a_ab, b_ab)

    a_ba = np.exp(1j * (cfg.zeta - cfg.xi - delay))
    b_ba = np.ones_like(a_ba)
    e_c2, e_d2 = bs_transform(a_ba, b_ba)
    if np.ndim(delay) == 0:
        return FieldQuad(complex(e_c), complex(e_d), complex(e_c2), complex(e_d2))
    return FieldQuad(e_c, e_d, e_c2, e_d2)


def output_intensities(cfg: PhaseConfig, delta_f, tau) -> IntensityQuad:
    s = np.sin(interference_phase(cfg, delta_f, tau))
    lo, hi = 1.0 - s, 1.0 + s
    if np.ndim(s) == 0:
        lo, hi = float(lo), float(hi)
    return IntensityQuad(lo, hi, hi, lo)


def _wrap_quarter_turns(phase: float) -> float:
    # the enumerated cases are multiples of pi/2; snap away rounding noise
    k = round(phase / _QUARTER_TURN) % 4
    return k * _QUARTER_TURN


def phase_ledger(xi: float, zeta_sign) -> tuple[float, float]:
    """Relative phase of the two interfering contributions at each output port.

    At each port the phase of the contribution entering through ``a`` is
    taken relative to the one entering through ``b`` (the idler).  Port ``c``
    receives the idler by reflection, port ``d`` by transmission, so the
    pair returned is ``(reflected, transmitted)`` in ``[0, 2 pi)``.

    Only ``xi in {0, pi/2}`` and ``zeta = +-pi/2`` are defined.
    """
    if math.isclose(xi, 0.0, abs_tol=1e-12):
        xi = 0.0
    elif math.isclose(xi, _QUARTER_TURN, abs_tol=1e-12):
        xi = _QUARTER_TURN
    else:
        raise ValueError(f"phase ledger is defined only for xi in {{0, pi/2}}, got {xi}")
    if zeta_sign in ("+", 1, +1.0):
        zeta = _QUARTER_TURN
    elif zeta_sign in ("-", -1, -1.0):
        zeta = -_QUARTER_TURN
    else:
        raise ValueError(f"zeta_sign must be '+' or '-', got {zeta_sign!r}")

    a = complex(np.exp(1j * xi))
    b = complex(np.exp(1j * zeta))
    t, r = 1.0, 1j
    reflected = np.angle(t * a) - np.angle(r * b)
    transmitted = np.angle(r * a) - np.angle(t * b)
    return _wrap_quarter_turns(reflected), _wrap_quarter_turns(transmitted)
