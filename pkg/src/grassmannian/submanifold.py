"""Discrete oriented closed curves (k = 1) inside an ambient manifold.

A curve is stored by ``m`` samples on the uniform periodic parameter grid;
its continuous model is the trigonometric interpolant of those samples. The
orientation is a sign relative to grid order.
"""

from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import OffManifold, SelfIntersection, TooFewSamples
from .periodic import TWO_PI, PeriodicInterpolant, circular_direction, grid

MIN_SAMPLES = 16


def normal_frame(M, x, t):
    """Metric-orthonormal basis of N_xSigma inside T_xM, shape (P, N, n - 1).

    ``x`` (P, N) points, ``t`` (P, N) metric-unit tangents. For planar curves
    the normal is the tangent rotated clockwise (outward for counterclockwise
    circles); for curves on surfaces in R^3 it is ``nu x t`` with ``nu`` the
    unit normal of M.
    """
    x = np.atleast_2d(x)
    t = np.atleast_2d(t)
    P, N = x.shape
    scale = 1.0 / np.sqrt(M.metric_scale)
    if M.kind == "flat" and N == 2:
        n = np.stack([t[:, 1], -t[:, 0]], axis=-1)
        return n[:, :, None]
    if M.codim == 1 and N == 3:
        nu = M.unit_normals(x)[..., 0]
        n = np.cross(nu, t)
        n *= scale / np.linalg.norm(n, axis=-1, keepdims=True)
        return n[:, :, None]
    # general case: Gram-Schmidt of the projected coordinate basis against t
    nu = M.unit_normals(x)
    basis = [t / np.linalg.norm(t, axis=-1, keepdims=True)]
    basis += [nu[..., j] for j in range(nu.shape[-1])]
    out = np.zeros((P, N, M.dim_manifold - 1))
    for p in range(P):
        vecs = [b[p] for b in basis]
        got = []
        for e in np.eye(N):
            r = e.copy()
            for q in vecs + got:
                r -= (r @ q) * q
            nr = np.linalg.norm(r)
            if nr > 1e-6:
                got.append(r / nr)
            if len(got) == M.dim_manifold - 1:
                break
        out[p] = np.array(got).T * scale
    return out


class OrientedSubmanifold:
    """Closed curve through ``samples`` with orientation sign ``orientation``."""

    def __init__(self, ambient, samples, orientation=1, dim_k=1, _validated=False):
        self.ambient = ambient
        self.samples = np.asarray(samples, dtype=float)
        self.orientation = 1 if orientation >= 0 else -1
        self.dim_k = dim_k
        if not _validated:
            _validate(ambient, self.samples)

    @property
    def m(self):
        return self.samples.shape[0]

    @property
    def parameter_grid(self):
        return grid(self.m)

    @property
    def spacing(self):
        return TWO_PI / self.m

    @cached_property
    def curve(self):
        return PeriodicInterpolant(self.samples)

    @cached_property
    def tangents(self):
        """Metric-unit tangent along increasing grid parameter, (m, N)."""
        return self._unit_tangent(self.samples, self.curve.derivative_samples(1))

    @cached_property
    def normals(self):
        """Metric-orthonormal normal frame, (m, N, n - 1)."""
        return normal_frame(self.ambient, self.samples, self.tangents)

    @cached_property
    def embed_sep(self):
        return self.ambient.tol.embed_sep_factor * float(np.min(adjacent_spacing(self.samples)))

    def _unit_tangent(self, x, d):
        d = self.ambient._tangent_projection(x, d)
        return d / self.ambient.norm(d)[..., None]

    # -- continuous model --------------------------------------------------

    def point(self, theta):
        return self.ambient.project_to(self.curve(theta))

    def frames_at(self, theta):
        """(point, unit tangent, normal frame) at arbitrary parameters."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        x = self.point(theta)
        t = self._unit_tangent(x, self.curve(theta, 1))
        return x, t, normal_frame(self.ambient, x, t)

    def normal_part(self, theta, vectors):
        """Project ambient vectors at parameters ``theta`` onto the normal fibres."""
        _, _, n = self.frames_at(theta)
        return project_onto_frame(self.ambient, n, vectors)

    def with_orientation(self, orientation):
        out = OrientedSubmanifold(self.ambient, self.samples, orientation, self.dim_k, _validated=True)
        for key in ("curve", "tangents", "normals", "embed_sep"):
            if key in self.__dict__:
                out.__dict__[key] = self.__dict__[key]
        return out

    def __repr__(self):
        return f"OrientedSubmanifold(m={self.m}, N={self.samples.shape[1]}, orientation={self.orientation:+d})"


def project_onto_frame(M, frame, vectors):
    """sum_j <v, n_j>_g n_j for a metric-orthonormal frame (P, N, r)."""
    vectors = np.atleast_2d(vectors)
    coef = M.metric_scale * np.einsum("pk,pkr->pr", vectors, frame)
    return np.einsum("pkr,pr->pk", frame, coef)


def adjacent_spacing(samples):
    return np.linalg.norm(np.roll(samples, -1, axis=0) - samples, axis=1)


def _validate(M, samples):
    if samples.ndim != 2 or samples.shape[0] < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {samples.shape[0] if samples.ndim else 0}")
    try:
        M.check_on(samples)
    except OffManifold:
        raise
    gaps = adjacent_spacing(samples)
    if np.any(gaps == 0.0):
        raise SelfIntersection("adjacent samples coincide")
    check_simple(samples, M.tol.embed_sep_factor * float(gaps.min()), SelfIntersection)


def check_simple(samples, sep, error):
    """Raise ``error`` when non-adjacent samples come closer than ``sep``
    or, for planar polylines, when two non-adjacent segments cross."""
    d, i, j = _kernels.min_separation(samples)
    if d <= sep:
        raise error(f"samples {i} and {j} are {d:.3e} apart (separation floor {sep:.3e})")
    if samples.shape[1] == 2:
        i, j = _kernels.first_crossing_2d(samples)
        if i >= 0:
            raise error(f"segments {i} and {j} cross")


def build_submanifold(M, samples, k=1):
    """Discrete oriented submanifold through ``samples`` (grid order, orientation +1)."""
    if k != 1:
        raise NotImplementedError("only closed curves (k = 1) are supported")
    sub = OrientedSubmanifold(M, samples, 1, k)
    sub.normals  # frames are built eagerly so invalid geometry surfaces here
    return sub


def reverse_orientation(sigma):
    return sigma.with_orientation(-sigma.orientation)


def orientation_sign(source, target, correspondence):
    """+1 when the orientation that ``correspondence`` induces on ``target``
    matches its stored orientation, -1 otherwise.

    ``correspondence`` lists, for every source sample in grid order, the
    target parameter it maps to.
    """
    direction, _ = circular_direction(np.asarray(correspondence, dtype=float) % TWO_PI)
    return source.orientation * direction * target.orientation


# ---------------------------------------------------------------------------
# nearest points on the continuous model
# ---------------------------------------------------------------------------

def closest_parameters(sub, points, theta0, max_iter=60, tol=1e-14):
    """Newton iteration for the parameter minimising |c(theta) - p| (ambient).

    Steps are clipped to one grid spacing; returns (theta, distance).
    """
    theta = np.array(theta0, dtype=float)
    h = sub.spacing
    for _ in range(max_iter):
        c, c1, c2 = sub.curve.jet(theta)
        r = c - points
        g = np.sum(r * c1, axis=-1)
        gp = np.sum(c1 * c1, axis=-1) + np.sum(r * c2, axis=-1)
        gp = np.where(gp > 0, gp, np.sum(c1 * c1, axis=-1))
        step = np.clip(g / gp, -h, h)
        theta = theta - step
        if np.max(np.abs(step)) < tol:
            break
    dist = np.linalg.norm(sub.curve(theta) - points, axis=-1)
    return theta, dist


def polyline_guess(sub, points):
    """Parameter of the nearest point on the sample polyline, and its distance."""
    d, seg, frac = _kernels.polyline_project(np.atleast_2d(points), sub.samples)
    return (seg + frac) * sub.spacing, d


def distance_to_curve(sub, points):
    points = np.atleast_2d(points)
    theta0, _ = polyline_guess(sub, points)
    h = sub.spacing
    best_t, best_d = closest_parameters(sub, points, theta0)
    for shift in (-h, h):
        t, d = closest_parameters(sub, points, theta0 + shift)
        better = d < best_d
        best_t = np.where(better, t, best_t)
        best_d = np.where(better, d, best_d)
    return best_d, best_t


def _directed_hausdorff(A, B, refine=3):
    u = grid(2 * A.m)
    d, _ = distance_to_curve(B, A.point(u))
    best = float(d.max())
    h = u[1] - u[0]
    for i in np.argsort(d)[::-1][:refine]:
        res = minimize_scalar(
            lambda s: -distance_to_curve(B, A.point(np.array([s])))[0][0],
            bounds=(u[i] - h, u[i] + h), method="bounded", options={"xatol": 1e-10},
        )
        best = max(best, -float(res.fun))
    return best


def hausdorff_distance(A, B):
    """Symmetric Hausdorff distance between the continuous models of two curves."""
    return max(_directed_hausdorff(A, B), _directed_hausdorff(B, A))


def same_oriented(A, B, tol):
    """True when A and B agree as point sets within ``tol`` and as oriented curves."""
    if hausdorff_distance(A, B) >= tol:
        return False
    return relative_orientation(A, B) == 1


def relative_orientation(A, B):
    """Orientation sign of A relative to B via nearest-point correspondence."""
    _, theta = distance_to_curve(B, A.samples)
    return orientation_sign(A, B, theta)


# ---------------------------------------------------------------------------
# CSV serialisation
# ---------------------------------------------------------------------------

def write_csv(sub, path):
    """One row per sample (parameter, coordinates) under a k/m/orientation header."""
    cols = ["parameter"] + [f"x{i}" for i in range(sub.samples.shape[1])]
    header = f"# k={sub.dim_k},m={sub.m},orientation={sub.orientation:+d}\n" + ",".join(cols)
    np.savetxt(path, np.column_stack([sub.parameter_grid, sub.samples]), delimiter=",",
               header=header, comments="", fmt="%.17g")


def read_csv(M, path):
    with open(path) as fh:
        meta = dict(item.split("=") for item in fh.readline().lstrip("# ").strip().split(","))
    data = np.loadtxt(path, delimiter=",", skiprows=2, ndmin=2)
    if int(meta["k"]) != 1:
        raise NotImplementedError("only closed curves (k = 1) are supported")
    if data.shape[0] != int(meta["m"]):
        raise ValueError("row count does not match the header")
    return OrientedSubmanifold(M, data[:, 1:], int(meta["orientation"]))
