"""Truncated Fock-space oracle.

States are number-basis amplitude vectors built by construction-level
operations only (matrix exponentials, ladder algebra), so every value they
produce is independent of the closed-form Hermite sums they are used to
verify.  All values are immutable after construction and all operations are
pure functions.

Conventions
  alpha = (x + i p)/sqrt(2); the displaced-parity kernel is
  Delta(alpha) = 2 D(alpha) Pi D(alpha)^dag, and ``wigner_point`` returns
  tr[rho Delta(alpha)]/pi (unit integral over d^2alpha).  Squeezing uses
  S(+-r) = exp(+-(r/2)(adag^2 - a^2)); for r > 0 the + branch squeezes p.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import _kernels
from .errors import (
    CutoffExhaustedError,
    InsufficientCutoffError,
    ZeroNormError,
)

_TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class CutoffPolicy:
    """Controls the truncation dimension and its growth until convergence."""

    initial: int = 64
    growth_factor: float = 2.0
    tail_tolerance: float = 1e-12
    max_cutoff: int = 4096

    def __post_init__(self):
        if self.initial < 8:
            raise ValueError("CutoffPolicy.initial must be >= 8")
        if self.growth_factor <= 1.0:
            raise ValueError("CutoffPolicy.growth_factor must be > 1")
        if self.max_cutoff < self.initial:
            raise ValueError("CutoffPolicy.max_cutoff must be >= initial")

    def cutoffs(self):
        """Yield the candidate cutoffs in increasing order."""
        cut = self.initial
        while True:
            yield min(cut, self.max_cutoff)
            if cut >= self.max_cutoff:
                return
            cut = int(math.ceil(cut * self.growth_factor))


def default_policy(n_photons: int = 0) -> CutoffPolicy:
    """Default policy; the initial cutoff scales with the photons applied."""
    return CutoffPolicy(initial=max(64, 4 * n_photons + 32))


@dataclass(frozen=True)
class FockVector:
    """Number-basis amplitudes 0..cutoff-1 with a cached squared norm.

    States may be unnormalized; every physical output normalizes first.
    """

    amplitudes: np.ndarray
    norm_sq: float = field(default=-1.0)

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        if self.norm_sq < 0.0:
            object.__setattr__(self, "norm_sq", float(np.vdot(amps, amps).real))

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def is_zero(self) -> bool:
        return self.norm_sq == 0.0

    @property
    def tail_mass(self) -> float:
        """Relative mass of the last two entries (parity states alternate zeros)."""
        if self.norm_sq == 0.0:
            return 0.0
        tail = np.abs(self.amplitudes[-2:]) ** 2
        return float(tail.max() / self.norm_sq)

    def normalized(self) -> "FockVector":
        if self.norm_sq < 1e-300:
            raise ZeroNormError("cannot normalize a zero-norm state")
        return FockVector(self.amplitudes / math.sqrt(self.norm_sq), 1.0)

    def padded(self, cutoff: int) -> "FockVector":
        if cutoff <= self.cutoff:
            return self
        amps = np.zeros(cutoff, np.complex128)
        amps[: self.cutoff] = self.amplitudes
        return FockVector(amps, self.norm_sq)

    def parity_flipped(self) -> "FockVector":
        """Apply the photon-number parity operator (-1)^k."""
        signs = 1.0 - 2.0 * (np.arange(self.cutoff) % 2)
        return FockVector(self.amplitudes * signs, self.norm_sq)

    def support_mask(self) -> np.ndarray:
        return np.abs(self.amplitudes) > 0.0


@dataclass(frozen=True)
class DensityMatrix:
    """Trace-normalized cutoff x cutoff density matrix."""

    entries: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        scale = float(np.abs(mat).max()) or 1.0
        if np.abs(mat - mat.conj().T).max() > 1e-12 * scale:
            raise ValueError("density matrix must be Hermitian within 1e-12")
        tr = np.trace(mat)
        if abs(tr.imag) > 1e-12 * abs(tr.real) + 1e-300 or tr.real <= 0.0:
            raise ValueError("density matrix trace must be real and positive")
        mat = mat / tr.real
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def cutoff(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_pure(cls, state: FockVector) -> "DensityMatrix":
        psi = state.normalized().amplitudes
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense truncated operator with a descriptive label."""

    entries: np.ndarray
    label: str

    def __post_init__(self):
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def cutoff(self) -> int:
        return self.entries.shape[0]


# ---------------------------------------------------------------------------
# operators


def annihilation_operator(cutoff: int) -> OperatorMatrix:
    mat = np.diag(np.sqrt(np.arange(1.0, cutoff)), k=1).astype(np.complex128)
    return OperatorMatrix(mat, "annihilation")


def creation_operator(cutoff: int) -> OperatorMatrix:
    mat = np.diag(np.sqrt(np.arange(1.0, cutoff)), k=-1).astype(np.complex128)
    return OperatorMatrix(mat, "creation")


def _squeeze_generator(r: float, cutoff: int) -> np.ndarray:
    # (r/2)(adag^2 - a^2): banded, couples k <-> k+2 only
    gen = np.zeros((cutoff, cutoff), np.complex128)
    k = np.arange(cutoff - 2)
    coup = 0.5 * r * np.sqrt((k + 1.0) * (k + 2.0))
    gen[k + 2, k] = coup
    gen[k, k + 2] = -coup
    return gen


def squeeze_operator(r: float, cutoff: int) -> OperatorMatrix:
    """exp[(r/2)(adag^2 - a^2)] truncated; pass signed r for the two branches."""
    mat = expm(_squeeze_generator(r, cutoff))
    return OperatorMatrix(mat, f"squeeze({r:+g})")


def displacement_operator(delta_alpha: complex, cutoff: int) -> OperatorMatrix:
    """exp(da*adag - conj(da)*a) truncated by scaling-and-squaring."""
    if abs(delta_alpha) * math.sqrt(cutoff) > 0.25 * cutoff:
        warnings.warn(
            "displacement reach |delta_alpha|*sqrt(cutoff) is not small "
            "against the cutoff; the low-index block may be inaccurate",
            stacklevel=2,
        )
    adag = creation_operator(cutoff).entries
    gen = delta_alpha * adag - np.conj(delta_alpha) * adag.conj().T
    return OperatorMatrix(expm(gen), f"displacement({delta_alpha:g})")


def displaced_parity_operator(alpha: complex, cutoff: int) -> OperatorMatrix:
    """Delta(alpha) = 2 D(alpha) Pi D(alpha)^dag."""
    disp = displacement_operator(alpha, cutoff).entries
    parity = 1.0 - 2.0 * (np.arange(cutoff) % 2)
    mat = 2.0 * (disp * parity) @ disp.conj().T
    return OperatorMatrix(mat, f"displaced-parity({alpha:g})")


# ---------------------------------------------------------------------------
# state constructors


def _coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    k = np.arange(cutoff)
    mag = abs(alpha)
    if mag == 0.0:
        amps = np.zeros(cutoff, np.complex128)
        amps[0] = 1.0
        return amps
    logmag = -0.5 * mag * mag + k * math.log(mag) - 0.5 * _lgamma_arr(k + 1)
    if alpha.imag == 0.0:
        # keep real-alpha amplitudes exactly real (exact sign alternation)
        signs = np.ones(cutoff)
        if alpha.real < 0.0:
            signs[1::2] = -1.0
        return np.exp(logmag) * signs + 0.0j
    return np.exp(logmag + 1j * k * np.angle(alpha))


def _lgamma_arr(values: np.ndarray) -> np.ndarray:
    from scipy.special import gammaln

    return gammaln(values)


def coherent_state(alpha: complex, policy: CutoffPolicy | None = None) -> FockVector:
    """Displaced vacuum, amplitudes alpha^k/sqrt(k!), unit norm."""
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    policy = policy or default_policy()
    for cut in policy.cutoffs():
        amps = _coherent_amplitudes(complex(alpha), cut)
        state = FockVector(amps)
        if state.tail_mass < policy.tail_tolerance:
            return state.normalized()
    raise CutoffExhaustedError(
        f"coherent state |alpha|={abs(alpha):g} not converged at cutoff {policy.max_cutoff}"
    )


_SQUEEZE_MEMO: dict[tuple[float, int], np.ndarray] = {}


def _squeezed_vacuum_at(signed_r: float, cutoff: int) -> FockVector:
    """Squeezed vacuum at one fixed cutoff, no convergence check."""
    key = (signed_r, cutoff)
    amps = _SQUEEZE_MEMO.get(key)
    if amps is None:
        col = expm(_squeeze_generator(signed_r, cutoff))[:, 0]
        col[1::2] = 0.0  # generator couples even levels only
        amps = col / np.linalg.norm(col)
        _SQUEEZE_MEMO[key] = amps
    return FockVector(amps, 1.0)


def squeezed_vacuum(r: float, branch: int = +1, policy: CutoffPolicy | None = None) -> FockVector:
    """Truncated matrix exponential of +-(r/2)(adag^2-a^2) applied to vacuum.

    Deliberately built by expm rather than the known tanh^m amplitudes so the
    oracle stays independent of every closed form it validates.
    """
    if abs(r) > 3.0:
        raise ValueError("|r| <= 3 required; cutoff growth is impractical beyond")
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    policy = policy or default_policy()
    for cut in policy.cutoffs():
        state = _squeezed_vacuum_at(branch * r, cut)
        if state.tail_mass < policy.tail_tolerance:
            return state
    raise CutoffExhaustedError(
        f"squeezed vacuum r={r:g} not converged at cutoff {policy.max_cutoff}"
    )


def photon_varied_squeezed_vacuum(
    kind: str, n: int, r: float, branch: int = +1, policy: CutoffPolicy | None = None
) -> FockVector:
    """Unnormalized adag^n S(br)|0> (kind "added") or a^n S(br)|0> ("subtracted").

    The ladder operators amplify the base state's truncation tail by
    sqrt((k+n)!/k!), and a^n shifts exact zeros into the top n slots, which a
    naive tail check cannot see.  Convergence is therefore judged on the last
    entries actually computed from in-range data, and the cutoff grows until
    they are negligible.
    """
    if kind not in ("added", "subtracted"):
        raise ValueError(f"unknown kind {kind!r}")
    if n < 0:
        raise ValueError("n must be >= 0")
    if abs(r) > 3.0:
        raise ValueError("|r| <= 3 required")
    policy = policy or default_policy(n)
    for cut in policy.cutoffs():
        base = _squeezed_vacuum_at(branch * r, cut)
        if kind == "added":
            state = apply_creation(base, n)
            seg = state.amplitudes[-2:]
        else:
            state = apply_annihilation(base, n)
            hi = cut - n  # entries >= hi lost their out-of-range sources
            seg = state.amplitudes[max(hi - 2, 0) : hi]
        if state.norm_sq > 0.0 and seg.size:
            tail = float(np.max(np.abs(seg)) ** 2 / state.norm_sq)
            if tail < policy.tail_tolerance:
                return state
    raise CutoffExhaustedError(
        f"{kind} n={n} squeezed vacuum r={r:g} not converged at cutoff {policy.max_cutoff}"
    )


def compass_state(x0: float, policy: CutoffPolicy | None = None) -> FockVector:
    """Four coherent states at (+-x0/sqrt2, +-i x0/sqrt2), normalized.

    The four amplitude sets interfere to 4*c_k on k = 0 mod 4 and cancel
    exactly elsewhere, which is how the amplitudes are laid down here.
    """
    if x0 <= 0.0:
        raise ValueError("x0 must be positive")
    policy = policy or default_policy()
    g = x0 / math.sqrt(2.0)
    for cut in policy.cutoffs():
        base = _coherent_amplitudes(g, cut)
        amps = np.zeros(cut, np.complex128)
        amps[::4] = 4.0 * base[::4]
        state = FockVector(amps)
        if state.tail_mass < policy.tail_tolerance:
            return state.normalized()
    raise CutoffExhaustedError(
        f"compass state x0={x0:g} not converged at cutoff {policy.max_cutoff}"
    )


# ---------------------------------------------------------------------------
# ladder / composition operations


def apply_creation(state: FockVector, n: int) -> FockVector:
    """Unnormalized adag^n |state>; the cutoff is grown by n to hold it."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return state
    amps = np.zeros(state.cutoff + n, np.complex128)
    amps[: state.cutoff] = state.amplitudes
    for _ in range(n):
        k = np.arange(1.0, amps.shape[0])
        shifted = np.zeros_like(amps)
        shifted[1:] = np.sqrt(k) * amps[:-1]
        amps = shifted
    return FockVector(amps)


def apply_annihilation(state: FockVector, n: int) -> FockVector:
    """Unnormalized a^n |state>; may be the zero vector."""
    if n < 0:
        raise ValueError("n must be >= 0")
    amps = state.amplitudes.copy()
    for _ in range(n):
        k = np.arange(1.0, amps.shape[0])
        shifted = np.zeros_like(amps)
        shifted[:-1] = np.sqrt(k) * amps[1:]
        amps = shifted
    if n == 0:
        return state
    return FockVector(amps)


def superpose(c1: complex, s1: FockVector, c2: complex, s2: FockVector) -> FockVector:
    """c1|s1> + c2|s2> on a common (padded) cutoff, norm tracked."""
    cut = max(s1.cutoff, s2.cutoff)
    amps = c1 * s1.padded(cut).amplitudes + c2 * s2.padded(cut).amplitudes
    return FockVector(amps)


def mix(w1: float, s1: FockVector, w2: float, s2: FockVector) -> DensityMatrix:
    """w1|s1><s1| + w2|s2><s2| trace-normalized; sources must be normalized."""
    if w1 < 0.0 or w2 < 0.0 or w1 + w2 <= 0.0:
        raise ValueError("weights must be nonnegative with positive sum")
    for s in (s1, s2):
        if abs(s.norm_sq - 1.0) > 1e-9:
            raise ValueError("mixture sources must be normalized")
    cut = max(s1.cutoff, s2.cutoff)
    a1 = s1.padded(cut).amplitudes
    a2 = s2.padded(cut).amplitudes
    rho = w1 * np.outer(a1, a1.conj()) + w2 * np.outer(a2, a2.conj())
    return DensityMatrix(rho)


# ---------------------------------------------------------------------------
# observables


def mean_photon(state: FockVector | DensityMatrix) -> float:
    """<adag a> of a normalized state."""
    if isinstance(state, FockVector):
        psi = state.normalized().amplitudes
        return float(np.sum(np.arange(psi.shape[0]) * np.abs(psi) ** 2))
    pops = np.diag(state.entries).real
    return float(np.sum(np.arange(state.cutoff) * pops))


def wigner_point(rho: DensityMatrix, alpha: complex) -> float:
    """tr[rho * 2 D(alpha) Pi D(alpha)^dag] / pi at a single phase-space point."""
    delta = displaced_parity_operator(alpha, rho.cutoff).entries
    val = complex(np.trace(rho.entries @ delta)) / math.pi
    if abs(val.imag) > 1e-10:
        raise InsufficientCutoffError(
            f"Wigner imaginary residue {val.imag:.3e} exceeds 1e-10: cutoff too small"
        )
    return val.real


def overlap_displaced(rho: DensityMatrix, delta_alpha: complex) -> float:
    """tr{rho D(da) rho D(da)^dag}, real in [0, 1] for trace-normalized rho."""
    disp = displacement_operator(delta_alpha, rho.cutoff).entries
    val = complex(np.trace(rho.entries @ disp @ rho.entries @ disp.conj().T))
    if abs(val.imag) > 1e-10:
        raise InsufficientCutoffError(
            f"overlap imaginary residue {val.imag:.3e} exceeds 1e-10"
        )
    if val.real < -1e-10:
        raise InsufficientCutoffError(f"overlap {val.real:.3e} negative beyond tolerance")
    return float(max(val.real, 0.0))


# ---------------------------------------------------------------------------
# vectorized kernel front ends (grid evaluation)


def displacement_overlap_map(bra: FockVector, ket: FockVector, deltas: np.ndarray) -> np.ndarray:
    """<bra|D(delta_j)|ket> for an array of displacements."""
    cut = max(bra.cutoff, ket.cutoff)
    b = bra.padded(cut)
    k = ket.padded(cut)
    deltas = np.ascontiguousarray(deltas, dtype=np.complex128)
    return _kernels.displacement_overlaps(
        b.amplitudes, k.amplitudes, deltas, b.support_mask(), k.support_mask()
    )


def wigner_map(state: FockVector, alphas: np.ndarray) -> np.ndarray:
    """tr[rho Delta(alpha_j)]/pi for a pure normalized state.

    Uses D(a) Pi D(a)^dag = D(2a) Pi, so a single displacement-overlap pass
    <psi|D(2a)|Pi psi> gives the whole field.
    """
    psi = state.normalized()
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    vals = _TWO_OVER_PI * displacement_overlap_map(psi, psi.parity_flipped(), 2.0 * alphas)
    resid = float(np.abs(vals.imag).max(initial=0.0))
    if resid > 1e-9:
        raise InsufficientCutoffError(
            f"Wigner imaginary residue {resid:.3e} exceeds 1e-9: cutoff too small"
        )
    return vals.real
