"""Fidelity, success probability and utility of amplified coherent states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import fock
from .amplifiers import AmplifierConfig, Variant, amplify, n_network
from .fock import MultimodeState


class ReferenceCutoffError(ValueError):
    pass


@dataclass(frozen=True)
class MeritPoint:
    intensity_gain: float
    fidelity: float
    defect: float
    log_recip_defect: float
    probability: float
    utility: float

    @classmethod
    def from_values(cls, intensity_gain: float, fidelity: float, probability: float) -> MeritPoint:
        defect = 1.0 - fidelity
        if defect > 0:
            log_recip = -math.log10(defect)
            utility = probability / defect
        else:
            log_recip = utility = math.inf
        return cls(intensity_gain, fidelity, defect, log_recip, probability, utility)


def reference_cutoff(g_alpha: complex) -> int:
    """Cutoff at which a coherent state of amplitude ``g_alpha`` is complete to ~1e-10."""
    x = abs(g_alpha) ** 2
    return max(12, math.ceil(x + 8 * math.sqrt(x) + 10))


def fidelity_vs_amplified_coherent(output: MultimodeState, g_alpha: complex,
                                   cutoff: int | None = None, sign_flipped: bool = False) -> float:
    """``|<g alpha|output>|^2`` for a normalized single-mode ``output``.

    With ``sign_flipped`` the target's two-photon amplitude is negated, the
    target appropriate to the sign-shift amplifier.
    """
    if output.mode_count != 1:
        raise ValueError("fidelity needs a single-mode output")
    if abs(output.norm_squared() - 1) > 1e-10:
        raise ValueError("output must be normalized")
    cutoff = reference_cutoff(g_alpha) if cutoff is None else cutoff
    cutoff = max(cutoff, output.cutoff)
    target = fock.coherent_amplitudes(g_alpha, cutoff)
    deficit = 1.0 - float(np.sum(np.abs(target) ** 2))
    if deficit > 1e-10:
        raise ReferenceCutoffError(
            f"reference cutoff {cutoff} leaves norm deficit {deficit:.3g} for |g alpha|^2 = {abs(g_alpha)**2:.6g}")
    if sign_flipped and cutoff >= 2:
        target[2] = -target[2]
    overlap = np.vdot(target, output.with_cutoff(cutoff).amplitudes)
    return float(abs(overlap) ** 2)


def merit_curve(config: AmplifierConfig, gain_grid: Iterable[float], simulated: bool = False,
                sign_flipped_target: bool = False) -> list[MeritPoint]:
    """One :class:`MeritPoint` per intensity gain, other settings taken from ``config``."""
    points = []
    for g2 in gain_grid:
        if not g2 > 0:
            raise ValueError(f"gain grid values must be positive, got {g2!r}")
        cfg = AmplifierConfig(config.variant, config.alpha, g2, config.n_arms, config.cutoff)
        probability, output = amplify(cfg, simulated=simulated)
        flip = sign_flipped_target and cfg.variant is Variant.TWO_PHOTON_SIGN_SHIFT
        fidelity = fidelity_vs_amplified_coherent(output, cfg.gain * cfg.alpha, sign_flipped=flip)
        points.append(MeritPoint.from_values(g2, fidelity, probability))
    return points


def n_network_fidelity(alpha: complex, intensity_gain: float, n_arms: int, cutoff: int | None = None) -> float:
    _, output = n_network(alpha, intensity_gain, n_arms, cutoff)
    return fidelity_vs_amplified_coherent(output, math.sqrt(intensity_gain) * complex(alpha))
