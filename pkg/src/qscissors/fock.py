"""Truncated photon-number-basis states.

A :class:`MultimodeState` stores a dense complex array of shape
``(cutoff + 1,) * mode_count``; entry ``[n1, n2, ...]`` is the amplitude of
the ket ``|n1 n2 ...>``. States may be sub-normalized: conditional branches
keep their absolute weight so that heralding probabilities can be read off as
squared norms.

Modes are indexed from zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MultimodeState:
    """Immutable multimode ket in a truncated Fock basis.

    Args:
        amplitudes: complex array, one axis per mode, every axis of length
            ``cutoff + 1``.
        normalized: whether the state is asserted to have unit norm.
        leakage: squared norm discarded above the cutoff by the operations
            that produced this state.
    """

    amplitudes: np.ndarray
    normalized: bool = False
    leakage: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim == 0:
            raise ValueError("a state needs at least one mode")
        if len(set(amps.shape)) != 1:
            raise ValueError(f"all modes must share one cutoff, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if norm2 > 1 + NORM_TOL:
            raise ValueError(f"squared norm {norm2!r} exceeds 1")
        if self.normalized and abs(norm2 - 1) > NORM_TOL:
            raise ValueError(f"state flagged normalized but squared norm is {norm2!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def mode_count(self) -> int:
        return self.amplitudes.ndim

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def is_empty(self) -> bool:
        """True for the zero vector returned by impossible heralds."""
        return not np.any(self.amplitudes)

    def amplitude(self, *occupation: int) -> complex:
        if len(occupation) != self.mode_count:
            raise ValueError(f"expected {self.mode_count} photon numbers, got {len(occupation)}")
        if any(n < 0 or n > self.cutoff for n in occupation):
            return 0j
        return complex(self.amplitudes[occupation])

    def normalize(self) -> MultimodeState:
        """Return the renormalized state; an empty state is returned unchanged."""
        norm2 = self.norm_squared()
        if norm2 == 0:
            return self
        return MultimodeState(self.amplitudes / math.sqrt(norm2), True, self.leakage)

    def with_cutoff(self, cutoff: int) -> MultimodeState:
        """Zero-pad or truncate every mode to a new cutoff.

        Truncated weight is added to ``leakage``.
        """
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        m = self.mode_count
        out = np.zeros((cutoff + 1,) * m, dtype=np.complex128)
        keep = min(cutoff, self.cutoff) + 1
        window = (slice(0, keep),) * m
        out[window] = self.amplitudes[window]
        lost = self.norm_squared() - float(np.sum(np.abs(out) ** 2))
        return MultimodeState(out, self.normalized and lost <= NORM_TOL,
                              self.leakage + max(lost, 0.0))

    def mean_photon_number(self, mode: int | None = None) -> float:
        """Mean photon number in ``mode`` (or summed over all modes), unnormalized."""
        probs = np.abs(self.amplitudes) ** 2
        n = np.arange(self.cutoff + 1)
        modes = range(self.mode_count) if mode is None else [mode]
        total = 0.0
        for k in modes:
            axes = tuple(a for a in range(self.mode_count) if a != k)
            total += float(np.dot(n, probs.sum(axis=axes)))
        return total

    def __repr__(self):
        return (f"MultimodeState(mode_count={self.mode_count}, cutoff={self.cutoff}, "
                f"norm2={self.norm_squared():.12g}, normalized={self.normalized})")


def fock_state(occupation: Sequence[int], cutoff: int) -> MultimodeState:
    """The product number state ``|n1 n2 ...>``."""
    occupation = tuple(int(n) for n in occupation)
    if any(n < 0 or n > cutoff for n in occupation):
        raise ValueError(f"photon numbers {occupation} must lie in [0, {cutoff}]")
    amps = np.zeros((cutoff + 1,) * len(occupation), dtype=np.complex128)
    amps[occupation] = 1.0
    return MultimodeState(amps, normalized=True)


def vacuum(mode_count: int, cutoff: int) -> MultimodeState:
    return fock_state((0,) * mode_count, cutoff)


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Poissonian amplitudes ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)`` for n <= cutoff."""
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    alpha = complex(alpha)
    amps = np.empty(cutoff + 1, dtype=np.complex128)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, cutoff + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def coherent_truncated(alpha: complex, cutoff: int) -> MultimodeState:
    """Single-mode coherent state cut at ``cutoff`` photons.

    The state is left sub-normalized: the ``exp(-|alpha|^2/2)`` prefactor is
    kept so that branch probabilities downstream are absolute.
    """
    return MultimodeState(coherent_amplitudes(alpha, cutoff))


def superposition(coefficients: Sequence[complex], cutoff: int | None = None) -> MultimodeState:
    """Single-mode state ``sum_n c_n |n>`` from explicit coefficients."""
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    if cutoff is None:
        cutoff = len(coefficients) - 1
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    n = min(len(coefficients), cutoff + 1)
    amps[:n] = coefficients[:n]
    return MultimodeState(amps)


def tensor(states: Sequence[MultimodeState]) -> MultimodeState:
    """Tensor product, modes concatenated in order."""
    if not states:
        raise ValueError("tensor product of no states")
    cutoffs = {s.cutoff for s in states}
    if len(cutoffs) != 1:
        raise ValueError(f"cutoff mismatch: {sorted(cutoffs)}")
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.multiply.outer(amps, s.amplitudes)
    normalized = all(s.normalized for s in states)
    leakage = sum(s.leakage for s in states)
    return MultimodeState(amps, normalized, leakage)


def inner_product(a: MultimodeState, b: MultimodeState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError(
            f"shape mismatch: {a.mode_count} modes/cutoff {a.cutoff} vs "
            f"{b.mode_count} modes/cutoff {b.cutoff}"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def project_branch(state: MultimodeState, heralds: dict[int, int]) -> MultimodeState:
    """Unnormalized branch ``<counts|_modes |state>`` with the heralded modes removed.

    Counts above the cutoff give an empty branch. Heralding every mode is not
    allowed since a state needs at least one mode.
    """
    if not heralds:
        return state
    for mode in heralds:
        if not 0 <= mode < state.mode_count:
            raise IndexError(f"mode {mode} out of range for {state.mode_count} modes")
    if len(heralds) >= state.mode_count:
        raise ValueError("cannot herald every mode")
    remaining = state.mode_count - len(heralds)
    if any(c < 0 or c > state.cutoff for c in heralds.values()):
        return MultimodeState(np.zeros((state.cutoff + 1,) * remaining), leakage=state.leakage)
    index = tuple(heralds.get(k, slice(None)) for k in range(state.mode_count))
    return MultimodeState(state.amplitudes[index], leakage=state.leakage)


def project_mode(state: MultimodeState, mode: int, count: int) -> tuple[float, MultimodeState]:
    """Herald ``count`` photons in ``mode``.

    Returns the conditional probability (branch weight over input weight) and
    the renormalized conditional state. A zero-probability branch yields
    ``(0.0, empty_state)`` rather than raising.
    """
    if count > state.cutoff:
        raise ValueError(f"count {count} exceeds cutoff {state.cutoff}")
    branch = project_branch(state, {mode: count})
    total = state.norm_squared()
    weight = branch.norm_squared()
    if total == 0 or weight == 0:
        return 0.0, branch
    return weight / total, branch.normalize()
