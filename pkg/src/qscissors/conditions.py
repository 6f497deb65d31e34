"""Amplification conditions on beam-splitter coefficients.

Everything here works on plain coefficients (anything with ``t``,
``t_prime``, ``r``, ``r_prime`` attributes), so the module does not depend on
:mod:`qscissors.optics`.

Phase sums follow the usual notation: ``Phi_t = arg t + arg t'`` and
``Phi_r = arg r + arg r'``. The relevant phase difference throughout is
``delta = Phi_t - Phi_r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize

TOL = 1e-10

# |cos((Phi_t - Phi_r)/2)| demanded by pure two-photon amplification.
PURE_AMP_COS = math.cos(math.pi / 3)


@dataclass(frozen=True)
class ConditionReport:
    feasible: bool
    residual: float
    solutions: list[float] = field(default_factory=list)
    notes: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.feasible and not self.residual < TOL:
            raise ValueError("a feasible report must carry a residual below tolerance")


def _pure_gain_residual_coeffs(t, t_prime, r, r_prime):
    big_t = np.asarray(t) * np.asarray(t_prime)
    big_r = np.asarray(r) * np.asarray(r_prime)
    delta = np.angle(big_t) - np.angle(big_r)
    mt, mr = np.abs(big_t), np.abs(big_r)
    return mr**2 + mr * mt * np.exp(1j * delta) + mt**2 * np.exp(2j * delta)


def pure_gain_residual(bs) -> complex:
    """Distance of BS1 from the pure two-photon amplification condition.

    Evaluates ``|rr'|^2 + |rr'||tt'| e^{i delta} + |tt'|^2 e^{2 i delta}``,
    which vanishes exactly when the one- and two-photon gain factors of the
    two-photon scissors coincide. It is ``(T^2 + TR + R^2) e^{-2i Phi_r}``
    with ``T = tt'``, ``R = rr'``.
    """
    return complex(_pure_gain_residual_coeffs(bs.t, bs.t_prime, bs.r, bs.r_prime))


def gain_magnitude_residual(bs) -> float:
    """``|tt' + rr'|^2 - |r t'|^2``: zero when the two gain magnitudes agree.

    This is the relaxed condition behind the sign-shift amplifier.
    """
    return abs(bs.t * bs.t_prime + bs.r * bs.r_prime) ** 2 - abs(bs.r * bs.t_prime) ** 2


def lossless_infeasibility_proof(n_theta: int = 101, n_phase: int = 100, seed: int = 0) -> ConditionReport:
    """Show pure amplification is impossible with a lossless BS1.

    For a lossless splitter ``delta = +-pi`` and the condition reduces to
    ``x^2 - x + 1 = 0`` in ``x = |rr'|/|tt'|``, whose discriminant is -3. The
    algebra is backed by a brute-force scan of ``n_theta * n_phase`` lossless
    splitters with random individual phases on both branches of the lossless
    phase condition.
    """
    a, b, c = Fraction(1), Fraction(-1), Fraction(1)
    discriminant = b * b - 4 * a * c

    rng = np.random.default_rng(seed)
    theta = np.linspace(0.0, math.pi / 2, n_theta)[:, None]
    phi_t, phi_tp, phi_r = rng.uniform(-math.pi, math.pi, size=(3, 1, n_phase))
    branch = np.where(np.arange(n_phase) % 2 == 0, math.pi, -math.pi)[None, :]
    phi_rp = phi_t + phi_tp - phi_r + branch
    t = np.cos(theta) * np.exp(1j * phi_t)
    tp = np.cos(theta) * np.exp(1j * phi_tp)
    r = np.sin(theta) * np.exp(1j * phi_r)
    rp = np.sin(theta) * np.exp(1j * phi_rp)
    residual = np.abs(_pure_gain_residual_coeffs(t, tp, r, rp))
    idx = np.unravel_index(np.argmin(residual), residual.shape)
    scan_min = float(residual[idx])

    # a + b = 1 for |tt'| + |rr'| on a lossless splitter: a^2 - ab + b^2 = 1 - 3ab >= 1/4.
    return ConditionReport(
        feasible=False,
        residual=scan_min,
        notes="x^2 - x + 1 has no real root; lossless residual is bounded below by 1/4",
        details={
            "quadratic": (int(a), int(b), int(c)),
            "discriminant": int(discriminant),
            "scan_points": int(residual.size),
            "scan_min_residual": scan_min,
            "scan_argmin_t2": float(np.cos(theta[idx[0], 0]) ** 2),
            "exact_floor": 0.25,
        },
    )


def sign_shift_roots() -> tuple[float, float]:
    """The two values of ``|t1|^2`` solving ``5x^2 - 5x + 1 = 0``, larger first."""
    s = math.sqrt(5.0)
    return (5 + s) / 10, (5 - s) / 10


def sign_shift_polynomial(x: float) -> float:
    return 5 * x * x - 5 * x + 1


def lossy_phase_bound(t_mag2: float, r_mag2: float | None = None) -> float:
    """Largest ``|cos((Phi_r - Phi_t)/2)|`` a passive splitter allows.

    Requiring that coherent inputs never gain mean photon number gives
    ``2|t||r| |cos((Phi_r - Phi_t)/2)| <= 1 - |t|^2 - |r|^2``. With ``r_mag2``
    omitted the equal-magnitude case ``|r| = |t|`` is used, where the bound is
    ``(1 - 2|t|^2) / (2|t|^2)``. The result is clipped to [0, 1].
    """
    if r_mag2 is None:
        r_mag2 = t_mag2
    if t_mag2 < 0 or r_mag2 < 0:
        raise ValueError("squared magnitudes must be non-negative")
    spare = 1.0 - t_mag2 - r_mag2
    if spare < -1e-12:
        raise ValueError(
            f"|t|^2 + |r|^2 = {t_mag2 + r_mag2!r} > 1: the splitter would create photons"
        )
    cross = 2.0 * math.sqrt(t_mag2 * r_mag2)
    if cross == 0.0:
        return 1.0
    return min(1.0, max(spare, 0.0) / cross)


def min_loss_for_pure_amp() -> float:
    """Smallest BS1 loss compatible with pure two-photon amplification.

    Found by solving ``lossy_phase_bound(t2) = cos(pi/3)`` for the
    equal-magnitude splitter and returning ``1 - 2 t2``.
    """
    t2 = optimize.brentq(lambda x: lossy_phase_bound(x) - PURE_AMP_COS, 0.26, 0.49,
                         xtol=1e-16, rtol=4 * np.finfo(float).eps)
    return 1.0 - 2.0 * t2


def mean_photon_ratio(bs, alpha: complex, beta: complex) -> float:
    """Output over input mean photon number for coherent inputs on ports 1 and 2."""
    out = abs(bs.t_prime * beta + bs.r * alpha) ** 2 + abs(bs.t * alpha + bs.r_prime * beta) ** 2
    return out / (abs(alpha) ** 2 + abs(beta) ** 2)


def max_mean_photon_ratio(bs, magnitude: float = 1.0, grid: int = 721) -> tuple[float, float]:
    """Maximize :func:`mean_photon_ratio` over the relative input phase.

    Both coherent inputs have the same ``magnitude``, which is where the
    photon-number constraint is tightest. Returns ``(ratio, phase)``.
    """
    def neg(phase):
        return -mean_photon_ratio(bs, magnitude, magnitude * np.exp(1j * phase))

    phases = np.linspace(-math.pi, math.pi, grid)
    values = [neg(p) for p in phases]
    k = int(np.argmin(values))
    step = phases[1] - phases[0]
    res = optimize.minimize_scalar(neg, bounds=(phases[k] - step, phases[k] + step),
                                   method="bounded", options={"xatol": 1e-12})
    best = min((res.fun, res.x), (values[k], phases[k]))
    return -float(best[0]), float(best[1])


def pure_amplification_report(bs) -> ConditionReport:
    """Feasibility of pure two-photon amplification for one splitter."""
    res = abs(pure_gain_residual(bs))
    return ConditionReport(
        feasible=res < TOL,
        residual=res,
        notes="lossy splitter" if abs(bs.t) ** 2 + abs(bs.r) ** 2 < 1 - 1e-12 else "lossless splitter",
    )
