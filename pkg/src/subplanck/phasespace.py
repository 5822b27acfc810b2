"""Grid evaluation of phase-space observables for declarative state specs.

Coordinates: alpha = (x + i p)/sqrt(2); overlap maps use the same convention
for delta_alpha = (dx + i dp)/sqrt(2).

Backends return their native scales from the array APIs (oracle Wigner is
tr[rho_hat Delta]/pi, closed-form Wigner is that of the unnormalized state
over 2 pi; oracle overlaps start at the purity, closed-form overlaps at 1).
``evaluate_field`` reconciles them: origin normalization divides the scale
out, physical normalization rescales to integral 1 over dx dp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import __version__, closedform, fock
from .errors import DegenerateNormalizationError, GridMismatchError, SingularParameterError

FAMILIES = (
    "coherent",
    "compass",
    "svs",
    "pasvs",
    "pssvs",
    "spasvs",
    "spssvs",
    "mix_pa",
    "mix_ps",
)
_SQUEEZED = ("svs", "pasvs", "pssvs", "spasvs", "spssvs", "mix_pa", "mix_ps")
_TWO_BRANCH = ("spasvs", "spssvs", "mix_pa", "mix_ps")
_KIND_OF = {
    "pasvs": closedform.KIND_ADDED,
    "pssvs": closedform.KIND_SUBTRACTED,
    "spasvs": closedform.KIND_ADDED,
    "spssvs": closedform.KIND_SUBTRACTED,
    "mix_pa": closedform.KIND_ADDED,
    "mix_ps": closedform.KIND_SUBTRACTED,
}

BACKENDS = ("closedform", "oracle")
QUANTITIES = ("wigner", "overlap")


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a target state.

    Only the fields that the family uses may be set; c2 defaults to the real
    completion sqrt(1 - |c1|^2) for the two-branch families.
    """

    family: str
    n: int = 0
    r: float = 0.0
    branch: int = +1
    c1: complex | None = None
    c2: complex | None = None
    x0: float | None = None
    normalization: str = "origin"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.normalization not in ("origin", "physical"):
            raise ValueError("normalization must be 'origin' or 'physical'")
        if self.branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.family in ("coherent", "compass"):
            if self.x0 is None:
                raise ValueError(f"{self.family} requires x0")
            if self.family == "compass" and self.x0 <= 0.0:
                raise ValueError("compass requires x0 > 0")
            if self.n or self.r or self.c1 is not None or self.c2 is not None:
                raise ValueError(f"{self.family} takes only x0")
        else:
            if self.x0 is not None:
                raise ValueError(f"{self.family} does not take x0")
            if self.r < 0.0:
                raise ValueError("r must be >= 0 (the branch carries the sign)")
        if self.family == "svs" and (self.n or self.c1 is not None):
            raise ValueError("svs takes only r and branch")
        if self.family in ("pasvs", "pssvs") and self.c1 is not None:
            raise ValueError(f"{self.family} takes n, r, branch")
        if self.family in _TWO_BRANCH:
            if self.c1 is None:
                raise ValueError(f"{self.family} requires c1")
            c2 = self.c2
            if c2 is None:
                rem = 1.0 - abs(self.c1) ** 2
                if rem < -1e-9:
                    raise ValueError("|c1|^2 exceeds 1")
                c2 = math.sqrt(max(rem, 0.0))
                object.__setattr__(self, "c2", complex(c2))
            total = abs(self.c1) ** 2 + abs(self.c2) ** 2
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"|c1|^2+|c2|^2 = {total:.12g} must equal 1")

    @property
    def kind(self) -> str:
        return _KIND_OF[self.family]

    def describe(self) -> dict:
        out = {"family": self.family, "normalization": self.normalization}
        if self.family in ("coherent", "compass"):
            out["x0"] = self.x0
        elif self.family == "svs":
            out.update(r=self.r, branch=self.branch)
        elif self.family in ("pasvs", "pssvs"):
            out.update(n=self.n, r=self.r, branch=self.branch)
        else:
            out.update(n=self.n, r=self.r, c1=str(self.c1), c2=str(self.c2))
        return out


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid; symmetric ranges get exactly paired points.

    For x_min == -x_max the axis is built as (i - (n-1)/2) * h so that points
    come in exact +-pairs with an exact 0.0 at the center of odd-count axes
    (origin normalization never interpolates).
    """

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.p_min < self.p_max):
            raise ValueError("grid bounds must be strictly increasing")
        if self.nx < 2 or self.np < 2:
            raise ValueError("grid needs at least 2 points per axis")

    @staticmethod
    def _axis(lo: float, hi: float, count: int) -> np.ndarray:
        if lo == -hi:
            center = (count - 1) / 2.0
            step = hi / center
            return (np.arange(count) - center) * step
        return np.linspace(lo, hi, count)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return self._axis(self.x_min, self.x_max, self.nx), self._axis(
            self.p_min, self.p_max, self.np
        )

    def points(self) -> np.ndarray:
        """Flattened (row-major) complex phase-space points alpha."""
        xs, ps = self.axes()
        xg, pg = np.meshgrid(xs, ps, indexing="ij")
        return ((xg + 1j * pg) / math.sqrt(2.0)).ravel()

    def origin_index(self) -> tuple[int, int]:
        xs, ps = self.axes()
        ix = np.nonzero(xs == 0.0)[0]
        ip = np.nonzero(ps == 0.0)[0]
        if not ix.size or not ip.size:
            raise ValueError("grid does not contain the origin exactly")
        return int(ix[0]), int(ip[0])

    @property
    def is_mirror_symmetric(self) -> bool:
        return self.x_min == -self.x_max and self.p_min == -self.p_max


def default_wigner_grid() -> GridSpec:
    """Resolves the finest central oscillation at n=50 with >= 6 samples/period."""
    return GridSpec(-6.0, 6.0, -6.0, 6.0, 241, 241)


def default_overlap_grid() -> GridSpec:
    return GridSpec(-1.5, 1.5, -1.5, 1.5, 121, 121)


@dataclass(frozen=True)
class ScalarField:
    """A real field sampled on a grid, plus normalization bookkeeping."""

    grid: GridSpec
    values: np.ndarray
    origin_value: float
    normalized: bool
    provenance: dict = field(compare=False)

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.shape != (self.grid.nx, self.grid.np):
            raise ValueError("values shape does not match grid")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


# ---------------------------------------------------------------------------
# oracle state construction

ORACLE_FIELD_TAIL = 1e-24  # amplitude tail ~1e-12: keeps field residuals <1e-10


def _field_policy(spec: StateSpec) -> fock.CutoffPolicy:
    if spec.family == "compass":
        start = max(64, int(2.0 * spec.x0 * spec.x0))
    else:
        start = max(64, 4 * spec.n + 32)
    return fock.CutoffPolicy(
        initial=start, growth_factor=2.0, tail_tolerance=ORACLE_FIELD_TAIL, max_cutoff=4096
    )


@lru_cache(maxsize=64)
def _oracle_parts_cached(spec: StateSpec) -> tuple[tuple[fock.FockVector, float], ...]:
    policy = _field_policy(spec)
    fam = spec.family
    if fam == "coherent":
        return ((fock.coherent_state(spec.x0 / math.sqrt(2.0), policy), 1.0),)
    if fam == "compass":
        return ((fock.compass_state(spec.x0, policy), 1.0),)
    if fam == "svs":
        return ((fock.squeezed_vacuum(spec.r, spec.branch, policy), 1.0),)
    if fam in ("pasvs", "pssvs"):
        st = fock.photon_varied_squeezed_vacuum(spec.kind, spec.n, spec.r, spec.branch, policy)
        return ((st.normalized(), 1.0),)
    plus = fock.photon_varied_squeezed_vacuum(spec.kind, spec.n, spec.r, +1, policy)
    minus = fock.photon_varied_squeezed_vacuum(spec.kind, spec.n, spec.r, -1, policy)
    if fam in ("spasvs", "spssvs"):
        sup = fock.superpose(spec.c1, plus, spec.c2, minus)
        return ((sup.normalized(), 1.0),)
    return (
        (plus.normalized(), abs(spec.c1) ** 2),
        (minus.normalized(), abs(spec.c2) ** 2),
    )


def oracle_components(spec: StateSpec) -> tuple[tuple[fock.FockVector, float], ...]:
    """Normalized pure components with mixture weights (one entry if pure)."""
    return _oracle_parts_cached(replace(spec, normalization="origin"))


def oracle_cutoff(spec: StateSpec) -> int:
    return max(st.cutoff for st, _w in oracle_components(spec))


# ---------------------------------------------------------------------------
# array APIs (native backend scales; see module docstring)


def wigner_values(spec: StateSpec, alphas: np.ndarray, backend: str) -> np.ndarray:
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    if backend == "oracle":
        out = np.zeros(alphas.shape, np.float64)
        for state, weight in oracle_components(spec):
            out += weight * fock.wigner_map(state, alphas)
        return out
    if backend != "closedform":
        raise ValueError(f"unknown backend {backend!r}")
    fam = spec.family
    if fam == "coherent":
        return closedform.wigner_coherent_values(spec.x0, alphas)
    if fam == "compass":
        return closedform.wigner_compass_values(spec.x0, alphas)
    if fam == "svs":
        return closedform.wigner_svs_values(spec.r, spec.branch, alphas)
    if spec.r == 0.0:
        if spec.n > 0:
            raise SingularParameterError(f"{fam} with n>0 requires r > 0")
        if fam in ("pasvs", "pssvs"):
            return closedform.wigner_svs_values(0.0, spec.branch, alphas)
        return closedform.wigner_ssv_values(0.0, spec.c1, spec.c2, alphas)
    if fam in ("pasvs", "pssvs"):
        return closedform.wigner_diag_values(spec.kind, spec.n, spec.r, spec.branch, alphas)
    if fam in ("spasvs", "spssvs"):
        return closedform.wigner_superposition_values(
            spec.kind, spec.n, spec.r, spec.c1, spec.c2, alphas
        )
    return closedform.wigner_mixture_values(spec.kind, spec.n, spec.r, spec.c1, spec.c2, alphas)


def overlap_values(spec: StateSpec, deltas: np.ndarray, backend: str) -> np.ndarray:
    deltas = np.ascontiguousarray(deltas, dtype=np.complex128)
    if backend == "oracle":
        parts = oracle_components(spec)
        if len(parts) == 1:
            amp = fock.displacement_overlap_map(parts[0][0], parts[0][0], deltas)
            return np.abs(amp) ** 2
        (sp, w1), (sm, w2) = parts
        epp = fock.displacement_overlap_map(sp, sp, deltas)
        emm = fock.displacement_overlap_map(sm, sm, deltas)
        epm = fock.displacement_overlap_map(sp, sm, deltas)
        return (
            w1 * w1 * np.abs(epp) ** 2
            + w2 * w2 * np.abs(emm) ** 2
            + 2.0 * w1 * w2 * np.abs(epm) ** 2
        )
    if backend != "closedform":
        raise ValueError(f"unknown backend {backend!r}")
    fam = spec.family
    if fam == "coherent":
        return closedform.overlap_coherent_values(deltas)
    if fam == "compass":
        return closedform.overlap_compass_values(spec.x0, deltas)
    if fam == "svs":
        # exact: the displaced squeezed frame turns delta into eta_b
        eta = deltas * math.cosh(spec.r) - spec.branch * deltas.conj() * math.sinh(spec.r)
        return np.exp(-np.abs(eta) ** 2)
    if spec.r == 0.0:
        if spec.n > 0:
            raise SingularParameterError(f"{fam} with n>0 requires r > 0")
        return closedform.overlap_coherent_values(deltas)  # every branch is vacuum
    if fam in ("pasvs", "pssvs"):
        return closedform.overlap_single_values(spec.kind, spec.n, spec.r, spec.branch, deltas)
    if fam in ("spasvs", "spssvs"):
        return closedform.overlap_superposition_values(
            spec.kind, spec.n, spec.r, spec.c1, spec.c2, deltas
        )
    return closedform.overlap_mixture_values(spec.kind, spec.n, spec.r, spec.c1, spec.c2, deltas)


# ---------------------------------------------------------------------------
# field evaluation


def _parity_definite(spec: StateSpec) -> bool:
    """True when the state commutes with photon parity, so W(-a) = W(a)."""
    return spec.family != "coherent" or spec.x0 == 0.0


def _physical_scale(spec: StateSpec, backend: str) -> float:
    """Multiplier making the raw Wigner integrate to 1 over dx dp."""
    if backend == "oracle":
        return 0.5
    fam = spec.family
    if fam in ("coherent", "svs"):
        return 1.0
    if fam == "compass":
        return 1.0 / (math.pi * closedform.compass_norm_sq(spec.x0))
    if spec.r == 0.0:
        return 1.0 if spec.n == 0 else math.nan
    if fam in ("pasvs", "pssvs"):
        return 1.0 / closedform.state_norm_sq(spec.kind, spec.n, spec.r)
    if fam in ("spasvs", "spssvs"):
        return 1.0 / closedform.superposition_norm_sq(spec.kind, spec.n, spec.r, spec.c1, spec.c2)
    return 1.0 / closedform.state_norm_sq(spec.kind, spec.n, spec.r)


def evaluate_field(
    spec: StateSpec,
    grid: GridSpec,
    backend: str = "closedform",
    quantity: str = "wigner",
) -> ScalarField:
    """Dense deterministic field of the requested quantity on the grid.

    For overlap maps the grid is read in (dx, dp).  Mirror symmetry
    (values(-point) = values(point)) halves the oracle work when it holds.
    """
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    pts = grid.points()
    mirror = (
        backend == "oracle"
        and grid.is_mirror_symmetric
        and (quantity == "overlap" or _parity_definite(spec))
    )
    evaluate = wigner_values if quantity == "wigner" else overlap_values
    if mirror:
        half = (pts.shape[0] + 1) // 2
        vals_half = evaluate(spec, pts[:half], backend)
        vals = np.empty(pts.shape[0], np.float64)
        vals[:half] = vals_half
        vals[half:] = vals_half[: pts.shape[0] - half][::-1]
    else:
        vals = evaluate(spec, pts, backend)
    values = vals.reshape(grid.nx, grid.np)
    provenance = {
        "spec": spec.describe(),
        "backend": backend,
        "quantity": quantity,
        "normalization": spec.normalization,
        "cutoff": oracle_cutoff(spec) if backend == "oracle" else None,
        "version": __version__,
    }
    try:
        ix, ip = grid.origin_index()
        origin = float(values[ix, ip])
    except ValueError:
        origin = math.nan
    provenance["raw_origin_value"] = origin
    fld = ScalarField(grid, values, origin, False, provenance)
    if spec.normalization == "origin":
        return normalize_origin(fld)
    if quantity == "wigner":
        scale = _physical_scale(spec, backend)
        if math.isnan(scale):
            raise SingularParameterError("no physical normalization for this spec")
        return ScalarField(grid, values * scale, origin * scale, False, provenance)
    if backend != "oracle":
        raise ValueError(
            "closed-form overlap maps are origin-normalized; physical requires the oracle"
        )
    return fld


def normalize_origin(fld: ScalarField) -> ScalarField:
    """Divide by |value at origin| (Wigner) or the origin value (overlap)."""
    if fld.normalized:
        return fld
    ix, ip = fld.grid.origin_index()
    v0 = float(fld.values[ix, ip])
    if abs(v0) < 1e-300:
        raise DegenerateNormalizationError("origin value too small to normalize by")
    quantity = fld.provenance.get("quantity", "wigner")
    denom = abs(v0) if quantity == "wigner" else v0
    values = fld.values / denom
    return ScalarField(fld.grid, values, float(values[ix, ip]), True, dict(fld.provenance))


def marginal(fld: ScalarField, axis: str) -> np.ndarray:
    """Trapezoidal integral over the other axis; needs physical normalization."""
    if fld.normalized or fld.provenance.get("normalization") != "physical":
        raise ValueError("marginals require a physically normalized Wigner field")
    xs, ps = fld.grid.axes()
    if axis == "x":
        return np.trapezoid(fld.values, ps, axis=1)
    if axis == "p":
        return np.trapezoid(fld.values, xs, axis=0)
    raise ValueError("axis must be 'x' or 'p'")


@dataclass(frozen=True)
class ResidualStats:
    max_abs: float
    max_rel_to_peak: float
    rms: float


def residual_stats(a: ScalarField, b: ScalarField) -> ResidualStats:
    """Elementwise difference statistics; peak is that of the first field."""
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different grids")
    diff = a.values - b.values
    peak = float(np.abs(a.values).max())
    max_abs = float(np.abs(diff).max())
    return ResidualStats(
        max_abs=max_abs,
        max_rel_to_peak=max_abs / peak if peak > 0.0 else math.inf,
        rms=float(np.sqrt(np.mean(diff**2))),
    )
