"""Scissors-based noiseless amplifiers, in closed form and by simulation.

Mode layout shared by every device (zero-based):

``OUTPUT`` (0)
    The BS1 output port that carries the amplified state.
``LINK`` (1)
    The other BS1 output, which feeds BS2; one of the two detectors.
``SIGNAL`` (2)
    The coherent input to BS2; the other detector.
``LOSS`` (3, ...)
    Vacuum ancillas that absorb light lost in a lossy splitter.

BS1 couples ``OUTPUT`` (port 1) with ``LINK`` (port 2). BS2 couples
``SIGNAL`` (port 1) with ``LINK`` (port 2), so the coherent input is
transmitted with ``t2`` and the BS1 light reaches the ``SIGNAL`` detector
with ``r2'``.

Every device is built so that its effective amplitude gain is the real,
positive ``sqrt(intensity_gain)``; that is the gain the target ``|g alpha>``
uses in :mod:`qscissors.metrics`.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize

from . import fock
from .conditions import lossy_phase_bound, pure_gain_residual, sign_shift_roots
from .fock import MultimodeState
from .optics import (
    BeamSplitter,
    PhaseConvention,
    apply_bs,
    apply_linear,
    apply_lossy_bs,
    embed_tritter,
    make_lossless,
    make_lossy,
)

OUTPUT, LINK, SIGNAL, LOSS = 0, 1, 2, 3


class Variant(str, Enum):
    ONE_PHOTON = "one_photon"
    N_NETWORK = "n_network"
    TWO_PHOTON_PURE = "two_photon_pure"
    TWO_PHOTON_SIGN_SHIFT = "two_photon_sign_shift"
    TWO_PHOTON_VARIANT_II = "two_photon_variant_ii"


@dataclass(frozen=True)
class AmplifierConfig:
    variant: Variant
    alpha: complex
    intensity_gain: float
    n_arms: int = 1
    cutoff: int = 10

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not self.intensity_gain > 0:
            raise ValueError("intensity gain must be positive")
        if self.n_arms < 1:
            raise ValueError("n_arms must be at least 1")
        if self.cutoff < 0:
            raise ValueError("cutoff must be non-negative")

    @property
    def gain(self) -> float:
        return math.sqrt(self.intensity_gain)


@dataclass(frozen=True)
class HeraldOutcome:
    """One detection pattern, its probability and the conditional output."""

    herald: dict[int, int]
    probability: float
    output: MultimodeState
    raw_branch: MultimodeState = field(repr=False)

    @classmethod
    def from_branch(cls, herald: dict[int, int], raw_branch: MultimodeState) -> HeraldOutcome:
        return cls(dict(herald), raw_branch.norm_squared(), raw_branch.normalize(), raw_branch)


# --- splitter choices -----------------------------------------------------


def gain_splitter(intensity_gain: float, phase: float = 0.0) -> BeamSplitter:
    """Lossless BS2 with ``|t|^2 = g^2/(1+g^2)`` and ``t/r' = g e^{i phase}``."""
    if not intensity_gain > 0:
        raise ValueError("intensity gain must be positive")
    c = math.sqrt(intensity_gain / (1 + intensity_gain))
    s = math.sqrt(1 / (1 + intensity_gain))
    return BeamSplitter(c, c, -s * cmath.exp(1j * phase), s * cmath.exp(-1j * phase))


def balanced_splitter() -> BeamSplitter:
    """Real-transmission 50/50 splitter used as BS1 of the one-photon scissors."""
    return make_lossless(math.pi / 4, PhaseConvention.REAL_T)


def pure_amplifier_splitter() -> BeamSplitter:
    """The 33/33 lossy splitter with ``Phi_t - Phi_r = 2 pi/3``.

    With the phases split evenly, both gain-correction factors of the
    two-photon scissors are exactly 1.
    """
    m = 1 / math.sqrt(3)
    return make_lossy(m, m, 2 * math.pi / 3, 0.0)


def sign_shift_splitter(root: str = "upper") -> BeamSplitter:
    """Symmetric lossless BS1 with ``|t|^2`` a root of ``5x^2 - 5x + 1``."""
    upper, lower = sign_shift_roots()
    x = {"upper": upper, "lower": lower}[root]
    return make_lossless(math.acos(math.sqrt(x)), PhaseConvention.SYMMETRIC)


def _one_photon_gain_factor(bs1: BeamSplitter) -> complex:
    return bs1.t / bs1.r


def _two_photon_gain_factors(bs1: BeamSplitter) -> tuple[complex, complex]:
    # Corrections to the BS2 gain on the one- and two-photon amplitudes.
    base = bs1.t_prime * bs1.r
    return (bs1.t * bs1.t_prime + bs1.r * bs1.r_prime) / base, bs1.r_prime * bs1.t / base


def _check_gain_inputs(bs1: BeamSplitter, bs2: BeamSplitter):
    if bs1.r * bs2.r_prime == 0:
        raise ValueError("r1 * r2' = 0: the gain is undefined")


# --- one-photon scissors --------------------------------------------------


def one_photon_closed_form(alpha: complex, bs1: BeamSplitter, bs2: BeamSplitter,
                           cutoff: int = 1) -> HeraldOutcome:
    """Heralded output ``e^{-|a|^2/2} r1 r2' (|0> + g a |1>)``, ``g = t1 t2 / (r1 r2')``."""
    _check_gain_inputs(bs1, bs2)
    alpha = complex(alpha)
    g = bs1.t * bs2.t / (bs1.r * bs2.r_prime)
    pref = math.exp(-abs(alpha) ** 2 / 2) * bs1.r * bs2.r_prime
    raw = fock.superposition([pref, pref * g * alpha], max(cutoff, 1))
    return HeraldOutcome.from_branch({LINK: 0, SIGNAL: 1}, raw)


def _one_photon_network(alpha, bs1, bs2, coherent_cutoff, cutoff):
    dim = max(cutoff, coherent_cutoff + 1)
    state = fock.tensor([
        fock.fock_state((1, 0), dim),
        fock.coherent_truncated(alpha, coherent_cutoff).with_cutoff(dim),
    ])
    state = apply_bs(state, bs1, OUTPUT, LINK)
    return apply_bs(state, bs2, SIGNAL, LINK)


def one_photon_simulated(alpha: complex, bs1: BeamSplitter, bs2: BeamSplitter, cutoff: int = 10,
                         pre_truncate: bool = True, herald: dict[int, int] | None = None) -> HeraldOutcome:
    """Fock-space simulation of the one-photon scissors.

    With ``pre_truncate`` the coherent input is cut at one photon, as in the
    closed form; otherwise it is kept up to ``cutoff`` photons.
    """
    herald = {LINK: 0, SIGNAL: 1} if herald is None else herald
    coherent_cutoff = 1 if pre_truncate else cutoff
    state = _one_photon_network(alpha, bs1, bs2, coherent_cutoff, cutoff)
    return HeraldOutcome.from_branch(herald, fock.project_branch(state, herald))


def one_photon_amplifier(alpha: complex, intensity_gain: float, simulated: bool = False,
                         cutoff: int = 10) -> HeraldOutcome:
    """One-photon scissors with a 50/50 BS1 and real positive gain."""
    bs1 = balanced_splitter()
    bs2 = gain_splitter(intensity_gain, -cmath.phase(_one_photon_gain_factor(bs1)))
    if simulated:
        return one_photon_simulated(alpha, bs1, bs2, cutoff)
    return one_photon_closed_form(alpha, bs1, bs2)


# --- N-arm network ----------------------------------------------------------


def n_network_probability(alpha: complex, intensity_gain: float, n_arms: int) -> float:
    """Joint success probability of ``n_arms`` 50/50 scissors on ``alpha/sqrt(N)`` each."""
    a2 = abs(alpha) ** 2
    return (math.exp(-a2) / 2**n_arms / (1 + intensity_gain) ** n_arms
            * (1 + intensity_gain * a2 / n_arms) ** n_arms)


def n_network(alpha: complex, intensity_gain: float, n_arms: int,
              cutoff: int | None = None) -> tuple[float, MultimodeState]:
    """Closed form for the split-amplify-recombine network.

    Each arm leaves ``|0> + (g alpha/sqrt N)|1>``. Recombining on a balanced
    N-port and heralding vacuum on the other N-1 ports gives
    ``(1 + (g alpha / N) c^dag)^N |0>``, whose k-photon amplitude is
    ``C(N, k) (g alpha / N)^k sqrt(k!)``.
    """
    if n_arms < 1:
        raise ValueError("n_arms must be at least 1")
    beta = math.sqrt(intensity_gain) * complex(alpha) / n_arms
    coeffs = [math.comb(n_arms, k) * beta**k * math.sqrt(math.factorial(k)) for k in range(n_arms + 1)]
    norm = math.sqrt(sum(abs(c) ** 2 for c in coeffs))
    out = fock.superposition([c / norm for c in coeffs], max(cutoff or 0, n_arms))
    return n_network_probability(alpha, intensity_gain, n_arms), out


def recombination_matrix(n_arms: int) -> np.ndarray:
    """Balanced N-port (discrete Fourier transform) merging the arms into mode 0."""
    k = np.arange(n_arms)
    return np.exp(2j * np.pi * np.outer(k, k) / n_arms) / math.sqrt(n_arms)


def n_network_simulated(alpha: complex, intensity_gain: float, n_arms: int,
                        cutoff: int = 10) -> tuple[float, MultimodeState]:
    """Simulate every arm, recombine coherently, herald vacuum on the spare ports.

    The reported probability is the product of the arm herald probabilities;
    the vacuum heralds at recombination only condition the output state.
    """
    arm_alpha = complex(alpha) / math.sqrt(n_arms)
    arms = [one_photon_amplifier(arm_alpha, intensity_gain, simulated=True, cutoff=cutoff)
            for _ in range(n_arms)]
    probability = math.prod(a.probability for a in arms)
    if n_arms == 1:
        return probability, arms[0].output
    dim = max(n_arms, 1)
    joint = fock.tensor([a.raw_branch.with_cutoff(dim) for a in arms])
    joint = apply_linear(joint, recombination_matrix(n_arms), range(n_arms))
    raw = fock.project_branch(joint, {k: 0 for k in range(1, n_arms)})
    return probability, raw.normalize().with_cutoff(max(cutoff, n_arms))


# --- two-photon scissors, one photon in each BS1 port -----------------------


def _loss_modes(bs: BeamSplitter) -> tuple[int, ...]:
    if bs.is_lossless:
        return ()
    return tuple(range(LOSS, LOSS + embed_tritter(bs).ancilla_count))


def two_photon_closed_form(alpha: complex, bs1: BeamSplitter, bs2: BeamSplitter,
                           cutoff: int = 2) -> HeraldOutcome:
    """No-loss branch of the two-photon scissors with one photon in each BS1 port.

    Two counts at the ``SIGNAL`` detector, none at ``LINK``, leave
    ``sqrt2 e^{-|a|^2/2} [t1' r1 r2'^2 |0> + a (t1 t1' + r1 r1') t2 r2' |1>
    + (a^2/sqrt2) r1' t1 t2^2 |2>]``.
    """
    alpha = complex(alpha)
    pref = math.sqrt(2) * math.exp(-abs(alpha) ** 2 / 2)
    t1, t1p, r1, r1p = bs1.t, bs1.t_prime, bs1.r, bs1.r_prime
    t2, r2p = bs2.t, bs2.r_prime
    coeffs = [
        pref * t1p * r1 * r2p**2,
        pref * alpha * (t1 * t1p + r1 * r1p) * t2 * r2p,
        pref * alpha**2 / math.sqrt(2) * r1p * t1 * t2**2,
    ]
    herald = {LINK: 0, SIGNAL: 2, **{m: 0 for m in _loss_modes(bs1)}}
    return HeraldOutcome.from_branch(herald, fock.superposition(coeffs, max(cutoff, 2)))


def _two_photon_network(alpha, bs1, bs2, coherent_cutoff, cutoff):
    losses = _loss_modes(bs1)
    dim = max(cutoff, coherent_cutoff + 2)
    state = fock.tensor([
        fock.fock_state((1, 1), dim),
        fock.coherent_truncated(alpha, coherent_cutoff).with_cutoff(dim),
        *(fock.vacuum(1, dim) for _ in losses),
    ])
    if losses:
        state = apply_lossy_bs(state, bs1, OUTPUT, LINK, losses)
    else:
        state = apply_bs(state, bs1, OUTPUT, LINK)
    return apply_bs(state, bs2, SIGNAL, LINK), losses


def two_photon_simulated(alpha: complex, bs1: BeamSplitter, bs2: BeamSplitter, cutoff: int = 10,
                         pre_truncate: bool = True, herald: dict[int, int] | None = None) -> HeraldOutcome:
    """Fock-space simulation of the two-photon scissors (single photons into BS1).

    A lossy BS1 is dilated with loss modes, which are heralded empty.
    """
    coherent_cutoff = 2 if pre_truncate else cutoff
    state, losses = _two_photon_network(alpha, bs1, bs2, coherent_cutoff, cutoff)
    if herald is None:
        herald = {LINK: 0, SIGNAL: 2, **{m: 0 for m in losses}}
    return HeraldOutcome.from_branch(herald, fock.project_branch(state, herald))


def _two_photon_bs2(bs1: BeamSplitter, intensity_gain: float) -> BeamSplitter:
    one, _ = _two_photon_gain_factors(bs1)
    return gain_splitter(intensity_gain, -cmath.phase(one))


def two_photon_pure_closed_form(alpha: complex, intensity_gain: float) -> HeraldOutcome:
    """Pure amplifier: ``|0> + g a|1> + (g a)^2/sqrt2 |2>`` up to normalization."""
    bs1 = pure_amplifier_splitter()
    return two_photon_closed_form(alpha, bs1, _two_photon_bs2(bs1, intensity_gain))


def two_photon_pure_simulated(alpha: complex, intensity_gain: float, cutoff: int = 10,
                              pre_truncate: bool = True,
                              herald: dict[int, int] | None = None) -> HeraldOutcome:
    bs1 = pure_amplifier_splitter()
    return two_photon_simulated(alpha, bs1, _two_photon_bs2(bs1, intensity_gain), cutoff,
                                pre_truncate, herald)


def two_photon_sign_shift(alpha: complex, intensity_gain: float, simulated: bool = False,
                          cutoff: int = 10, root: str = "upper", pre_truncate: bool = True,
                          herald: dict[int, int] | None = None) -> HeraldOutcome:
    """Lossless amplifier ``|0> + g a|1> - (g a)^2/sqrt2 |2>`` up to normalization."""
    bs1 = sign_shift_splitter(root)
    bs2 = _two_photon_bs2(bs1, intensity_gain)
    if simulated:
        return two_photon_simulated(alpha, bs1, bs2, cutoff, pre_truncate, herald)
    return two_photon_closed_form(alpha, bs1, bs2)


# --- two-photon scissors, |2> into BS1 ---------------------------------------


def variant_ii_closed_form(alpha: complex, bs1: BeamSplitter, bs2: BeamSplitter,
                           cutoff: int = 2) -> HeraldOutcome:
    """No-loss branch with ``|2>`` into BS1 and one count at each BS2 detector.

    The output is ``e^{-|a|^2/2} [sqrt2 r1^2 t2' r2' |0>
    + sqrt2 a t1 r1 (t2 t2' + r2 r2') |1> + a^2 t1^2 t2 r2 |2>]``.
    """
    alpha = complex(alpha)
    pref = math.exp(-abs(alpha) ** 2 / 2)
    t1, r1 = bs1.t, bs1.r
    t2, t2p, r2, r2p = bs2.t, bs2.t_prime, bs2.r, bs2.r_prime
    coeffs = [
        pref * math.sqrt(2) * r1**2 * t2p * r2p,
        pref * math.sqrt(2) * alpha * t1 * r1 * (t2 * t2p + r2 * r2p),
        pref * alpha**2 * t1**2 * t2 * r2,
    ]
    herald = {LINK: 1, SIGNAL: 1, **{m: 0 for m in _loss_modes(bs2)}}
    return HeraldOutcome.from_branch(herald, fock.superposition(coeffs, max(cutoff, 2)))


def _variant_ii_network(alpha, bs1, bs2, coherent_cutoff, cutoff):
    losses = _loss_modes(bs2)
    dim = max(cutoff, coherent_cutoff + 2)
    state = fock.tensor([
        fock.fock_state((2, 0), dim),
        fock.coherent_truncated(alpha, coherent_cutoff).with_cutoff(dim),
        *(fock.vacuum(1, dim) for _ in losses),
    ])
    state = apply_bs(state, bs1, OUTPUT, LINK)
    if losses:
        state = apply_lossy_bs(state, bs2, SIGNAL, LINK, losses)
    else:
        state = apply_bs(state, bs2, SIGNAL, LINK)
    return state, losses


def variant_ii_simulated(alpha: complex, bs1: BeamSplitter, bs2: BeamSplitter, cutoff: int = 10,
                         pre_truncate: bool = True, herald: dict[int, int] | None = None) -> HeraldOutcome:
    coherent_cutoff = 2 if pre_truncate else cutoff
    state, losses = _variant_ii_network(alpha, bs1, bs2, coherent_cutoff, cutoff)
    if herald is None:
        herald = {LINK: 1, SIGNAL: 1, **{m: 0 for m in losses}}
    return HeraldOutcome.from_branch(herald, fock.project_branch(state, herald))


def _variant_ii_bs1(bs2: BeamSplitter, intensity_gain: float) -> BeamSplitter:
    # Gain is (t1/r1) * (T + R)/(t2' r2'); rotate r1 to make it real positive.
    factor = (bs2.t * bs2.t_prime + bs2.r * bs2.r_prime) / (bs2.t_prime * bs2.r_prime)
    phi = cmath.phase(factor)
    c = math.sqrt(intensity_gain / (1 + intensity_gain))
    s = math.sqrt(1 / (1 + intensity_gain))
    return BeamSplitter(c, c, s * cmath.exp(1j * phi), -s * cmath.exp(-1j * phi))


def two_photon_variant_ii(alpha: complex, intensity_gain: float, cutoff: int = 10,
                          simulated: bool = True, bs2: BeamSplitter | None = None,
                          pre_truncate: bool = True,
                          herald: dict[int, int] | None = None) -> HeraldOutcome:
    """Pure amplifier with a lossless BS1 fed ``|2>|0>`` and a lossy BS2.

    BS2 defaults to the 33/33 splitter; BS1 then sets the gain through
    ``|t1|^2 = g^2/(1+g^2)``. Pass a splitter from :func:`fit_variant_ii_splitter`
    to use a numerically found BS2 instead.
    """
    bs2 = pure_amplifier_splitter() if bs2 is None else bs2
    bs1 = _variant_ii_bs1(bs2, intensity_gain)
    if simulated:
        return variant_ii_simulated(alpha, bs1, bs2, cutoff, pre_truncate, herald)
    return variant_ii_closed_form(alpha, bs1, bs2)


def _splitter_from_params(p) -> BeamSplitter:
    rho, psi, u = p
    t_mag, r_mag = rho * math.cos(psi), rho * math.sin(psi)
    bound = lossy_phase_bound(t_mag**2, r_mag**2)
    delta = 2 * math.acos(max(-1.0, min(1.0, u * bound)))
    return make_lossy(t_mag, r_mag, delta, 0.0)


def _pure_form_residual(p) -> np.ndarray:
    bs = _splitter_from_params(p)
    big_t, big_r = abs(bs.t * bs.t_prime), abs(bs.r * bs.r_prime)
    res = pure_gain_residual(bs) / max(big_t * big_r, 1e-300)
    return np.array([res.real, res.imag])


def fit_variant_ii_splitter(lossless: bool = False, grid: int = 21) -> tuple[BeamSplitter | None, float]:
    """Search BS2 parameters that make the variant-ii output a pure amplification.

    Parameters live inside the passive region: moduli ``rho (cos psi, sin psi)``
    and ``cos((Phi_t - Phi_r)/2) = u * lossy_phase_bound``. A grid is refined
    by least squares on the scale-free condition residual. With ``lossless``
    only ``rho = 1`` is searched. Returns ``(splitter, residual)``; the splitter
    is ``None`` if no solution reaches ``1e-10``.
    """
    eps = 1e-6
    rhos = [1.0] if lossless else np.linspace(0.2, 1.0, grid)
    psis = np.linspace(eps, math.pi / 2 - eps, grid)
    us = np.linspace(-1.0, 1.0, grid)
    best = min(
        ((float(np.linalg.norm(_pure_form_residual(p))), p)
         for p in itertools.product(rhos, psis, us)),
        key=lambda item: item[0],
    )
    if lossless:
        lower, upper = [1.0 - 1e-15, eps, -1.0], [1.0, math.pi / 2 - eps, 1.0]
    else:
        lower, upper = [0.05, eps, -1.0], [1.0, math.pi / 2 - eps, 1.0]
    start = np.clip(best[1], lower, upper)
    fit = optimize.least_squares(_pure_form_residual, start, bounds=(lower, upper),
                                 xtol=1e-15, ftol=1e-15, gtol=1e-15)
    residual = float(np.linalg.norm(fit.fun))
    if residual < 1e-10:
        return _splitter_from_params(fit.x), residual
    return None, min(residual, best[0])


# --- dispatch -----------------------------------------------------------------


def amplify(config: AmplifierConfig, simulated: bool = False) -> tuple[float, MultimodeState]:
    """Success probability and normalized output state for any variant."""
    v, a, g2, cut = config.variant, config.alpha, config.intensity_gain, config.cutoff
    if v is Variant.N_NETWORK:
        return (n_network_simulated(a, g2, config.n_arms, cut) if simulated
                else n_network(a, g2, config.n_arms, cut))
    if v is Variant.ONE_PHOTON:
        out = one_photon_amplifier(a, g2, simulated, cut)
    elif v is Variant.TWO_PHOTON_PURE:
        out = two_photon_pure_simulated(a, g2, cut) if simulated else two_photon_pure_closed_form(a, g2)
    elif v is Variant.TWO_PHOTON_SIGN_SHIFT:
        out = two_photon_sign_shift(a, g2, simulated, cut)
    else:
        out = two_photon_variant_ii(a, g2, cut, simulated=simulated)
    return out.probability, out.output


def simulated_network(config: AmplifierConfig) -> tuple[MultimodeState, tuple[int, ...], dict[int, int]]:
    """Full pre-herald network state for a simulated variant.

    The coherent input is kept up to ``config.cutoff`` photons. Returns the
    state, the detector and loss modes, and the success herald.
    """
    v, a, g2, cut = config.variant, config.alpha, config.intensity_gain, config.cutoff
    if v is Variant.ONE_PHOTON:
        bs1 = balanced_splitter()
        bs2 = gain_splitter(g2, -cmath.phase(_one_photon_gain_factor(bs1)))
        state = _one_photon_network(a, bs1, bs2, cut, cut)
        return state, (LINK, SIGNAL), {LINK: 0, SIGNAL: 1}
    if v in (Variant.TWO_PHOTON_PURE, Variant.TWO_PHOTON_SIGN_SHIFT):
        bs1 = pure_amplifier_splitter() if v is Variant.TWO_PHOTON_PURE else sign_shift_splitter()
        state, losses = _two_photon_network(a, bs1, _two_photon_bs2(bs1, g2), cut, cut)
        return state, (LINK, SIGNAL, *losses), {LINK: 0, SIGNAL: 2, **{m: 0 for m in losses}}
    if v is Variant.TWO_PHOTON_VARIANT_II:
        bs2 = pure_amplifier_splitter()
        state, losses = _variant_ii_network(a, _variant_ii_bs1(bs2, g2), bs2, cut, cut)
        return state, (LINK, SIGNAL, *losses), {LINK: 1, SIGNAL: 1, **{m: 0 for m in losses}}
    raise ValueError(f"no single simulated network for variant {v.value}")


def herald_table(config: AmplifierConfig) -> list[HeraldOutcome]:
    """Every detector and loss-mode count pattern with nonzero probability."""
    state, modes, _ = simulated_network(config)
    outcomes = []
    for counts in itertools.product(range(state.cutoff + 1), repeat=len(modes)):
        herald = dict(zip(modes, counts))
        branch = fock.project_branch(state, herald)
        if branch.norm_squared() > 0:
            outcomes.append(HeraldOutcome.from_branch(herald, branch))
    return outcomes
