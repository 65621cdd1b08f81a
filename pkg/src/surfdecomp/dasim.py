"""
Derived-from-Anosov map on the 2-torus.

The hyperbolic automorphism ``A`` is perturbed inside a ball of radius ``r0``
around the origin by pushing along the stable eigendirection:

    f(p) = A p + k * psi(|p| / r0) * xi_s(p) * v_s   (mod 1)

where ``p`` is the lift nearest the origin, ``xi_s`` its stable eigen-coordinate
and ``psi`` a smooth bump with ``psi(0) = 1`` and support in [0, 1).  When the
stable eigenvalue plus ``k`` exceeds 1 the origin turns into a source and two
saddles appear on the stable line; everything else is the attractor.

Points are float arrays whose last axis has length 2.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

DEFAULT_MATRIX = ((2, 1), (1, 1))
DEFAULT_R0 = 0.15
DEFAULT_SOURCE_EIGENVALUE = 1.6

# lorentzian bump: a^2 / (a^2 + r^2), smoothly cut off on [CUTOFF_START, 1]
LORENTZ_WIDTH = 0.2
CUTOFF_START = 0.3

DEDUP_DISTANCE = 1e-4
SINGULAR_DET = 1e-12


class TorusPoint(NamedTuple):
    x: float
    y: float


def wrap(p):
    """Reduce coordinates into [0, 1)."""
    q = np.asarray(p, dtype=float)
    q = q - np.floor(q)
    return np.where(q >= 1.0, 0.0, q)


def nearest_lift(d):
    """Representative of a torus displacement with coordinates in [-1/2, 1/2]."""
    d = np.asarray(d, dtype=float)
    return d - np.round(d)


def torus_distance(p, q):
    return np.hypot(*np.moveaxis(nearest_lift(np.asarray(p) - np.asarray(q)), -1, 0))


# ---------------------------------------------------------------------------
# bumps: psi(r) and psi'(r) for r >= 0, identically zero for r >= 1
# ---------------------------------------------------------------------------


def _smooth_step(x):
    """C-infinity step from 0 (x <= 0) to 1 (x >= 1) and its derivative."""
    x = np.asarray(x, dtype=float)
    inner = (x > 0) & (x < 1)
    xi = np.where(inner, x, 0.5)
    with np.errstate(over="ignore"):
        t = 1.0 / (1.0 + np.exp(1.0 / xi - 1.0 / (1.0 - xi)))
    dt = t * (1.0 - t) * (1.0 / xi**2 + 1.0 / (1.0 - xi) ** 2)
    step = np.where(inner, t, np.where(x >= 1, 1.0, 0.0))
    return step, np.where(inner, dt, 0.0)


def lorentzian_bump(r):
    r = np.asarray(r, dtype=float)
    a2 = LORENTZ_WIDTH**2
    core = a2 / (a2 + r * r)
    dcore = -2.0 * a2 * r / (a2 + r * r) ** 2
    span = 1.0 - CUTOFF_START
    s, ds = _smooth_step((r - CUTOFF_START) / span)
    cut, dcut = 1.0 - s, -ds / span
    return core * cut, dcore * cut + core * dcut


def exp_bump(r):
    """exp(1 - 1/(1 - r^2)); too steep to keep the map invertible once a source forms."""
    r = np.asarray(r, dtype=float)
    inside = r < 1
    ri = np.where(inside, r, 0.0)
    psi = np.exp(1.0 - 1.0 / (1.0 - ri * ri))
    dpsi = psi * (-2.0 * ri / (1.0 - ri * ri) ** 2)
    return np.where(inside, psi, 0.0), np.where(inside, dpsi, 0.0)


BUMPS = {"lorentzian": lorentzian_bump, "exp": exp_bump}


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DAParams:
    linear_part: tuple[tuple[int, int], tuple[int, int]] = DEFAULT_MATRIX
    r0: float = DEFAULT_R0
    k: float | None = None
    bump: str = "lorentzian"

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.linear_part)
        object.__setattr__(self, "linear_part", m)
        if round(abs(np.linalg.det(np.array(m, dtype=float)))) != 1:
            raise ValueError("linear_part must have determinant +-1")
        lam = np.linalg.eigvals(np.array(m, dtype=float))
        if np.any(np.isclose(np.abs(lam), 1.0)) or np.any(np.abs(lam.imag) > 0):
            raise ValueError("linear_part must be hyperbolic")
        if not 0 < self.r0 < 0.5:
            raise ValueError("r0 must lie in (0, 0.5)")
        if self.bump not in BUMPS:
            raise ValueError(f"unknown bump {self.bump!r}; choose from {sorted(BUMPS)}")
        if self.k is None:
            object.__setattr__(self, "k", DEFAULT_SOURCE_EIGENVALUE - self.stable_eigenvalue)
        if not self.k >= 0:
            raise ValueError("k must be >= 0")

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear_part, dtype=float)

    @functools.cached_property
    def _eigen(self):
        lam, vecs = np.linalg.eig(self.matrix)
        order = np.argsort(-np.abs(lam))
        lam, vecs = lam[order].real, vecs[:, order].real
        for j in range(2):
            v = vecs[:, j] / np.linalg.norm(vecs[:, j])
            if v[np.flatnonzero(np.abs(v) > 1e-12)[0]] < 0:
                v = -v
            vecs[:, j] = v
        return lam, vecs

    @property
    def unstable_eigenvalue(self) -> float:
        return float(self._eigen[0][0])

    @property
    def stable_eigenvalue(self) -> float:
        return float(self._eigen[0][1])

    @property
    def unstable_vector(self) -> np.ndarray:
        return self._eigen[1][:, 0]

    @property
    def stable_vector(self) -> np.ndarray:
        return self._eigen[1][:, 1]

    @functools.cached_property
    def stable_covector(self) -> np.ndarray:
        """Row w with xi_s(q) = w . q in the eigenbasis (v_u, v_s)."""
        return np.linalg.inv(self._eigen[1])[1]

    @property
    def creates_source(self) -> bool:
        return self.stable_eigenvalue + self.k > 1

    def bump_fn(self, r):
        return BUMPS[self.bump](r)


# ---------------------------------------------------------------------------
# map, lift and Jacobian
# ---------------------------------------------------------------------------


def _linear(q, a: np.ndarray):
    x, y = q[..., 0], q[..., 1]
    return np.stack([a[0, 0] * x + a[0, 1] * y, a[1, 0] * x + a[1, 1] * y], axis=-1)


def _push(q, params: DAParams):
    c = nearest_lift(q)
    d = np.hypot(c[..., 0], c[..., 1])
    inside = d < params.r0
    out = np.zeros_like(c)
    if params.k and inside.any():
        ci = c[inside]
        psi, _ = params.bump_fn(d[inside] / params.r0)
        xi = ci @ params.stable_covector
        out[inside] = (params.k * psi * xi)[:, None] * params.stable_vector
    return out


def lift_map(q, params: DAParams):
    """Lift of the DA map to the plane (no reduction mod 1)."""
    q = np.asarray(q, dtype=float)
    return _linear(q, params.matrix) + _push(q, params)


def da_map(p, params: DAParams):
    p = np.asarray(p, dtype=float)
    return wrap(lift_map(p, params))


def da_jacobian(p, params: DAParams):
    """Analytic derivative; shape (..., 2, 2)."""
    p = np.asarray(p, dtype=float)
    c = nearest_lift(p)
    d = np.hypot(c[..., 0], c[..., 1])
    jac = np.broadcast_to(params.matrix, c.shape[:-1] + (2, 2)).copy()
    inside = d < params.r0
    if params.k and inside.any():
        ci, di = c[inside], d[inside]
        psi, dpsi = params.bump_fn(di / params.r0)
        xi = ci @ params.stable_covector
        safe = np.where(di > 0, di, 1.0)
        radial = np.where(di[:, None] > 0, ci / safe[:, None], 0.0)
        grad = psi[:, None] * params.stable_covector + (xi * dpsi / params.r0)[:, None] * radial
        jac[inside] += params.k * params.stable_vector[None, :, None] * grad[:, None, :]
    return jac


def da_inverse(y, params: DAParams, tol: float = 1e-13, max_iter: int = 50):
    """Preimage of ``y`` under the DA map: damped Newton from the linear inverse."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    q = wrap(_linear(y, np.linalg.inv(params.matrix)))

    def norm(q):
        return np.abs(nearest_lift(da_map(q, params) - y)).max(axis=-1)

    err = norm(q)
    for _ in range(max_iter):
        todo = err >= tol
        if not todo.any():
            break
        qa, ya = q[todo], y[todo]
        res = nearest_lift(da_map(qa, params) - ya)
        step = np.linalg.solve(da_jacobian(qa, params), res[..., None])[..., 0]
        alpha = np.ones(len(qa))
        best_q, best_err = qa, err[todo]
        # halve the step where it does not reduce the residual
        for _ in range(30):
            trial = wrap(qa - alpha[:, None] * step)
            trial_err = np.abs(nearest_lift(da_map(trial, params) - ya)).max(axis=-1)
            better = trial_err < best_err
            best_q = np.where(better[:, None], trial, best_q)
            best_err = np.where(better, trial_err, best_err)
            alpha = np.where(better, 0.0, alpha * 0.5)
            if not alpha.any():
                break
        q[todo], err[todo] = best_q, best_err
    return q


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------


class FixedPointKind(str, enum.Enum):
    SOURCE = "source"
    SINK = "sink"
    SADDLE = "saddle"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class FixedPointRecord:
    location: TorusPoint
    kind: FixedPointKind
    eigenvalues: tuple
    residual: float

    def to_dict(self) -> dict:
        eig = [
            float(e.real) if abs(e.imag) == 0 else [float(e.real), float(e.imag)]
            for e in self.eigenvalues
        ]
        return {
            "x": self.location.x,
            "y": self.location.y,
            "kind": self.kind.value,
            "eigenvalues": eig,
            "residual": self.residual,
        }


def classify(jac: np.ndarray) -> tuple[FixedPointKind, tuple]:
    lam = np.linalg.eigvals(jac)
    lam = lam[np.argsort(-np.abs(lam), kind="stable")]
    if np.all(np.abs(lam.imag) == 0):
        lam = lam.real
    mods = np.abs(lam)
    if abs(np.linalg.det(jac - np.eye(2))) < SINGULAR_DET or np.any(np.isclose(mods, 1.0)):
        kind = FixedPointKind.UNRESOLVED
    elif np.all(mods > 1):
        kind = FixedPointKind.SOURCE
    elif np.all(mods < 1):
        kind = FixedPointKind.SINK
    else:
        kind = FixedPointKind.SADDLE
    return kind, tuple(complex(v) if np.iscomplexobj(lam) else float(v) for v in lam)


def _residual(q, params):
    return np.hypot(*np.moveaxis(nearest_lift(da_map(q, params) - q), -1, 0))


def _newton(q, params, iters):
    eye = np.eye(2)
    for _ in range(iters):
        res = nearest_lift(da_map(q, params) - q)
        m = da_jacobian(q, params) - eye
        det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
        ok = np.abs(det) > SINGULAR_DET
        safe = np.where(ok, det, 1.0)
        step = np.stack([
            (m[..., 1, 1] * res[..., 0] - m[..., 0, 1] * res[..., 1]) / safe,
            (-m[..., 1, 0] * res[..., 0] + m[..., 0, 0] * res[..., 1]) / safe,
        ], axis=-1)
        q = wrap(q - np.where(ok[..., None], step, 0.0))
    return q


def _snap(q):
    q = np.where(np.abs(q) < 1e-13, 0.0, q)
    return np.where(np.abs(q - 1.0) < 1e-13, 0.0, q)


def find_fixed_points(params: DAParams, grid_n: int = 64, newton_tol: float = 1e-12,
                      iterations: int = 40) -> list[FixedPointRecord]:
    """Newton from every node of a grid_n x grid_n grid, deduplicated and classified."""
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    if not 0 < newton_tol <= 1e-6:
        raise ValueError("newton_tol must lie in (0, 1e-6]")
    ticks = np.arange(grid_n) / grid_n
    seeds = np.stack(np.meshgrid(ticks, ticks, indexing="ij"), axis=-1).reshape(-1, 2)
    with np.errstate(all="ignore"):
        roots = _newton(seeds, params, iterations)
        res = _residual(roots, params)
    roots = roots[np.isfinite(res) & (res < newton_tol)]

    reps: list[np.ndarray] = []
    for q in roots[np.lexsort((roots[:, 1], roots[:, 0]))]:
        if all(torus_distance(q, r) >= DEDUP_DISTANCE for r in reps):
            reps.append(q)

    records = []
    for q in reps:
        q = _snap(_newton(q[None, :], params, 3))[0]
        residual = float(_residual(q, params))
        if residual >= newton_tol:
            continue
        kind, eig = classify(da_jacobian(q, params))
        records.append(FixedPointRecord(TorusPoint(float(q[0]), float(q[1])), kind, eig, residual))
    records.sort(key=lambda r: (r.location.x, r.location.y))
    return records


def census_dict(records: Sequence[FixedPointRecord]) -> dict:
    return {"fixed_points": [r.to_dict() for r in records]}


def saddle_offset(params: DAParams, tol: float = 1e-15) -> float | None:
    """Distance from the origin of the created saddles, by bisection on the stable line.

    On the stable line the map reduces to xi -> lam_s xi + k psi(|xi|/r0) xi, so a
    nonzero fixed point solves psi(xi/r0) = (1 - lam_s)/k.  Returns None when
    there is no such root.
    """
    target = (1.0 - params.stable_eigenvalue) / params.k if params.k else math.inf
    if not 0 < target < 1:
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        psi, _ = params.bump_fn(mid)
        if psi > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) * params.r0


# ---------------------------------------------------------------------------
# attractor and unstable manifolds
# ---------------------------------------------------------------------------


def initial_samples(n_samples: int, seed: int) -> np.ndarray:
    """Uniform starting points used by ``approximate_attractor``."""
    return np.random.Generator(np.random.PCG64(seed)).random((n_samples, 2))


def approximate_attractor(params: DAParams, n_samples: int = 10_000, n_transient: int = 500,
                          seed: int = 0) -> np.ndarray:
    """Forward images of ``n_samples`` uniform random points after ``n_transient`` steps."""
    if n_transient < 100:
        raise ValueError("n_transient must be >= 100")
    pts = initial_samples(n_samples, seed)
    for _ in range(n_transient):
        pts = da_map(pts, params)
    return pts


def source_clearance(params: DAParams, steps: Sequence[int], inner_radius: float,
                     n_radii: int = 80, n_angles: int = 360) -> dict[int, float]:
    """Lower bounds on how far ``steps`` forward images of M minus B(inner_radius) stay from the source.

    Circles of radius r in (inner_radius, r0] are pulled back with the inverse
    map; once every circle up to r has entered B(inner_radius) within n steps,
    B(r) lies inside the n-th image of B(inner_radius), so every forward image
    of a point outside B(inner_radius) keeps distance >= r.  Orbits that leave
    B(r0) are abandoned, which only lowers the bound.  The bound is
    non-decreasing in n by construction.
    """
    if not params.creates_source:
        raise ValueError("the origin is not a source for these parameters")
    radii = np.linspace(inner_radius, params.r0, n_radii + 1)[1:]
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    circle = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    q = wrap((radii[:, None, None] * circle[None]).reshape(-1, 2))
    entered = np.full(len(q), np.inf)
    active = np.ones(len(q), dtype=bool)
    for step in range(1, max(steps) + 1):
        if not active.any():
            break
        q[active] = da_inverse(q[active], params)
        d = torus_distance(q, (0.0, 0.0))
        newly = active & (d < inner_radius)
        entered[newly] = step
        active &= ~newly & (d < params.r0)
    first_entry = entered.reshape(n_radii, n_angles).max(axis=1)
    out = {}
    for n in steps:
        ok = np.cumprod(first_entry <= n).astype(bool)
        out[n] = float(radii[ok][-1]) if ok.any() else float(inner_radius)
    return out


def _refine(pre, img, spacing, params):
    while True:
        gaps = np.hypot(*np.diff(img, axis=0).T)
        bad = np.flatnonzero(gaps >= spacing)
        if bad.size == 0:
            return pre, img
        mids = 0.5 * (pre[bad] + pre[bad + 1])
        pre = np.insert(pre, bad + 1, mids, axis=0)
        img = np.insert(img, bad + 1, lift_map(mids, params), axis=0)


def unstable_generations(fp: FixedPointRecord, params: DAParams, arc_steps: int = 200,
                         n_iterates: int = 5, seed_length: float = 1e-4) -> list[np.ndarray]:
    """Unwrapped plane polylines of every generation, seed segment first."""
    if fp.kind is not FixedPointKind.SADDLE:
        raise ValueError(f"unstable segment needs a saddle, got {fp.kind.value}")
    if arc_steps < 1 or n_iterates < 0:
        raise ValueError("arc_steps must be >= 1 and n_iterates >= 0")
    centre = np.array(fp.location)
    lam, vecs = np.linalg.eig(da_jacobian(centre, params))
    v_u = vecs[:, np.argmax(np.abs(lam))].real
    v_u = v_u / np.linalg.norm(v_u)
    t = np.linspace(-0.5 * seed_length, 0.5 * seed_length, 3)
    poly = centre + t[:, None] * v_u
    spacing = 1.0 / arc_steps
    # the lift moves the saddle by a lattice vector; undo it so every generation passes through centre
    shift = np.round(lift_map(centre, params) - centre)
    gens = [poly]
    for _ in range(n_iterates):
        _, poly = _refine(poly, lift_map(poly, params), spacing, params)
        poly = poly - shift
        gens.append(poly)
    return gens


def unstable_segment(fp: FixedPointRecord, params: DAParams, arc_steps: int = 200,
                     n_iterates: int = 5, seed_length: float = 1e-4) -> np.ndarray:
    """Both branches of the saddle's unstable manifold after ``n_iterates`` images, mod 1."""
    return wrap(unstable_generations(fp, params, arc_steps, n_iterates, seed_length)[-1])


def split_at_wraps(poly: np.ndarray) -> list[np.ndarray]:
    """Break a wrapped polyline wherever consecutive points jump across the torus seam."""
    if len(poly) < 2:
        return [poly]
    jumps = np.flatnonzero(np.any(np.abs(np.diff(poly, axis=0)) > 0.5, axis=1)) + 1
    return [p for p in np.split(poly, jumps) if len(p)]
