"""Beam splitters in the photon-number basis.

A splitter couples two modes. With ``mode_i`` as port 1 and ``mode_j`` as
port 2, output operators are ``b1 = t a1 + r' a2`` and ``b2 = r a1 + t' a2``;
on states this reads ``a1^dag -> t b1^dag + r b2^dag`` and
``a2^dag -> r' b1^dag + t' b2^dag``. The coupling matrix is therefore
``[[t, r'], [r, t']]``.

Lossy splitters act either through :func:`apply_bs`, which keeps only the
branch where no photon is lost, or through :func:`apply_lossy_bs`, which
dilates the splitter to a unitary with explicit loss modes.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .conditions import lossy_phase_bound
from .fock import NORM_TOL, MultimodeState

MODULUS_TOL = 1e-12
PHASE_TOL = 1e-10
LOSSLESS_TOL = 1e-12


class PhaseBoundError(ValueError):
    """Splitter phases incompatible with its loss.

    ``max_cos`` is the largest ``|cos((Phi_t - Phi_r)/2)|`` allowed.
    """

    def __init__(self, message, max_cos):
        super().__init__(message)
        self.max_cos = max_cos


class PhaseConvention(str, Enum):
    SYMMETRIC = "symmetric"
    REAL_T = "real_t"


def _check_phases(t_mag2, r_mag2, delta):
    if t_mag2 == 0 or r_mag2 == 0:
        return
    bound = lossy_phase_bound(t_mag2, r_mag2)
    cos_half = abs(math.cos(delta / 2))
    if cos_half > bound + PHASE_TOL:
        raise PhaseBoundError(
            f"|cos((Phi_t - Phi_r)/2)| = {cos_half:.12g} exceeds the allowed maximum "
            f"{bound:.12g} for |t|^2 = {t_mag2:.12g}, |r|^2 = {r_mag2:.12g}",
            bound,
        )


@dataclass(frozen=True)
class BeamSplitter:
    """Two-port coupler given by its four complex coefficients."""

    t: complex
    t_prime: complex
    r: complex
    r_prime: complex

    def __post_init__(self):
        for name in ("t", "t_prime", "r", "r_prime"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if abs(abs(self.t) - abs(self.t_prime)) > MODULUS_TOL:
            raise ValueError("|t'| must equal |t|")
        if abs(abs(self.r) - abs(self.r_prime)) > MODULUS_TOL:
            raise ValueError("|r'| must equal |r|")
        if self.loss < -MODULUS_TOL:
            raise ValueError(f"|t|^2 + |r|^2 = {1 - self.loss!r} exceeds 1")
        _check_phases(abs(self.t) ** 2, abs(self.r) ** 2, self.phase_t - self.phase_r)

    @property
    def loss(self) -> float:
        return 1.0 - abs(self.t) ** 2 - abs(self.r) ** 2

    @property
    def is_lossless(self) -> bool:
        return abs(self.loss) < LOSSLESS_TOL

    @property
    def phase_t(self) -> float:
        return cmath.phase(self.t) + cmath.phase(self.t_prime)

    @property
    def phase_r(self) -> float:
        return cmath.phase(self.r) + cmath.phase(self.r_prime)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.t, self.r_prime], [self.r, self.t_prime]], dtype=np.complex128)

    def inverse(self) -> BeamSplitter:
        """Splitter with the conjugate-transpose coupling matrix."""
        return BeamSplitter(self.t.conjugate(), self.t_prime.conjugate(),
                            self.r_prime.conjugate(), self.r.conjugate())

    def mirrored(self) -> BeamSplitter:
        """The same component with its two ports relabelled."""
        return BeamSplitter(self.t_prime, self.t, self.r_prime, self.r)


def make_lossless(theta: float, phase_convention: PhaseConvention | str = PhaseConvention.SYMMETRIC) -> BeamSplitter:
    """Lossless splitter with ``|t|^2 = cos^2 theta``, ``theta`` in [0, pi/2]."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta = {theta!r} outside [0, pi/2]")
    c, s = math.cos(theta), math.sin(theta)
    convention = PhaseConvention(phase_convention)
    if convention is PhaseConvention.SYMMETRIC:
        return BeamSplitter(c, c, 1j * s, 1j * s)
    return BeamSplitter(c, c, s, -s)


def make_lossy(t_mag: float, r_mag: float, Phi_t: float, Phi_r: float) -> BeamSplitter:
    """Splitter with given moduli and phase sums, phases split evenly between primes.

    Raises :class:`PhaseBoundError` if the phase difference is not allowed
    at this loss level.
    """
    if t_mag < 0 or r_mag < 0:
        raise ValueError("magnitudes must be non-negative")
    if t_mag**2 + r_mag**2 > 1 + MODULUS_TOL:
        raise ValueError(f"|t|^2 + |r|^2 = {t_mag**2 + r_mag**2!r} exceeds 1")
    _check_phases(t_mag**2, r_mag**2, Phi_t - Phi_r)
    t = t_mag * cmath.exp(0.5j * Phi_t)
    r = r_mag * cmath.exp(0.5j * Phi_r)
    return BeamSplitter(t, t, r, r)


@dataclass(frozen=True, eq=False)
class TritterEmbedding:
    """Unitary on the two signal modes plus loss modes.

    The upper-left 2x2 block is the embedded splitter's coupling matrix.
    Usually one loss mode suffices (a tritter); splitters whose loss is spread
    over both signal inputs in a way no single mode can absorb get two.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        n = m.shape[0]
        if m.shape != (n, n) or n < 3:
            raise ValueError("embedding must be a square matrix of size >= 3")
        if np.max(np.abs(m.conj().T @ m - np.eye(n))) > 1e-10:
            raise ValueError("embedding matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def ancilla_count(self) -> int:
        return self.matrix.shape[0] - 2

    @property
    def signal_block(self) -> np.ndarray:
        return self.matrix[:2, :2]


def embed_tritter(bs: BeamSplitter) -> TritterEmbedding:
    """Complete a lossy splitter's coupling matrix to a unitary.

    The first two columns are ``[M; C]`` with ``C^dag C = 1 - M^dag M``; the
    rank of that defect sets the number of loss modes. The remaining columns
    come from Gram-Schmidt on the standard basis.
    """
    if bs.is_lossless:
        raise ValueError("splitter is lossless; no embedding needed")
    block = bs.matrix
    if np.linalg.svd(block, compute_uv=False).max() > 1 + 1e-12:
        raise ValueError("coupling matrix has a singular value above 1; no unitary completion exists")
    defect = np.eye(2) - block.conj().T @ block
    w, v = np.linalg.eigh(defect)
    keep = w > 1e-12
    c = np.sqrt(w[keep])[:, None] * v[:, keep].conj().T
    n = 2 + int(keep.sum())
    columns = [col for col in np.vstack([block, c]).T]
    for e in np.eye(n, dtype=np.complex128):
        if len(columns) == n:
            break
        vec = e.copy()
        for col in columns:
            vec -= np.vdot(col, vec) * col
        size = np.linalg.norm(vec)
        if size > 1e-8:
            columns.append(vec / size)
    return TritterEmbedding(np.array(columns).T)


def _expand(matrix: np.ndarray, occupation: tuple[int, ...]) -> dict[tuple[int, ...], complex]:
    # Fock amplitudes of prod_j (sum_i M_ij b_i^dag)^{n_j} / sqrt(n_j!) |0>.
    k = len(occupation)
    poly: dict[tuple[int, ...], complex] = {(0,) * k: 1.0 + 0j}
    for j, n in enumerate(occupation):
        column = [(i, matrix[i, j]) for i in range(k) if matrix[i, j] != 0]
        for _ in range(n):
            nxt: dict[tuple[int, ...], complex] = defaultdict(complex)
            for mono, coeff in poly.items():
                for i, u in column:
                    bumped = mono[:i] + (mono[i] + 1,) + mono[i + 1:]
                    nxt[bumped] += coeff * u
            poly = nxt
    scale_in = math.sqrt(math.prod(math.factorial(n) for n in occupation))
    return {
        mono: coeff * math.sqrt(math.prod(math.factorial(m) for m in mono)) / scale_in
        for mono, coeff in poly.items()
    }


def apply_linear(state: MultimodeState, matrix, modes: Sequence[int]) -> MultimodeState:
    """Apply a passive linear map to ``modes``.

    ``matrix[i, j]`` is the amplitude for a photon entering ``modes[j]`` to
    leave in ``modes[i]``. Weight pushed above the cutoff is added to the
    state's ``leakage``.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    modes = tuple(int(m) for m in modes)
    k = len(modes)
    if matrix.shape != (k, k):
        raise ValueError(f"matrix shape {matrix.shape} does not match {k} modes")
    if len(set(modes)) != k:
        raise ValueError(f"modes must be distinct, got {modes}")
    if any(not 0 <= m < state.mode_count for m in modes):
        raise IndexError(f"modes {modes} out of range for {state.mode_count} modes")

    d = state.cutoff + 1
    sub_shape = (d,) * k
    sub = np.moveaxis(state.amplitudes, modes, range(k))
    rest_shape = sub.shape[k:]
    flat = sub.reshape(d**k, -1)
    out = np.zeros_like(flat)
    overflow: dict[tuple[int, ...], np.ndarray] = {}
    for row in np.flatnonzero(np.any(flat != 0, axis=1)):
        occupation = tuple(int(n) for n in np.unravel_index(row, sub_shape))
        vec = flat[row]
        for mono, coeff in _expand(matrix, occupation).items():
            if max(mono) < d:
                out[np.ravel_multi_index(mono, sub_shape)] += coeff * vec
            elif mono in overflow:
                overflow[mono] = overflow[mono] + coeff * vec
            else:
                overflow[mono] = coeff * vec
    leaked = float(sum(np.sum(np.abs(v) ** 2) for v in overflow.values()))
    amps = np.moveaxis(out.reshape(sub_shape + rest_shape), range(k), modes)
    norm2 = float(np.sum(np.abs(amps) ** 2))
    return MultimodeState(amps, state.normalized and abs(norm2 - 1) < NORM_TOL,
                          state.leakage + leaked)


def apply_bs(state: MultimodeState, bs: BeamSplitter, mode_i: int, mode_j: int) -> MultimodeState:
    """Couple ``mode_i`` (port 1) and ``mode_j`` (port 2) through ``bs``.

    For a lossy splitter this is the no-loss branch only, so the norm drops.
    """
    if mode_i == mode_j:
        raise ValueError("beam splitter needs two distinct modes")
    return apply_linear(state, bs.matrix, (mode_i, mode_j))


def apply_lossy_bs(state: MultimodeState, bs: BeamSplitter, mode_i: int, mode_j: int,
                   mode_ancilla: int | Sequence[int]) -> MultimodeState:
    """Apply a lossy splitter unitarily, routing lost light into ancilla modes.

    The ancillas must hold vacuum; their number must match
    ``embed_tritter(bs).ancilla_count``.
    """
    ancillas = (mode_ancilla,) if isinstance(mode_ancilla, (int, np.integer)) else tuple(mode_ancilla)
    embedding = embed_tritter(bs)
    if len(ancillas) != embedding.ancilla_count:
        raise ValueError(f"this splitter needs {embedding.ancilla_count} loss mode(s), got {len(ancillas)}")
    for a in ancillas:
        if not 0 <= a < state.mode_count:
            raise IndexError(f"ancilla mode {a} out of range")
        occupied = np.take(state.amplitudes, np.arange(1, state.cutoff + 1), axis=a)
        if np.any(np.abs(occupied) > 1e-14):
            raise ValueError(f"ancilla mode {a} is not in vacuum")
    return apply_linear(state, embedding.matrix, (mode_i, mode_j, *ancillas))
