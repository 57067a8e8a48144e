"""Tubular neighbourhoods of closed curves.

A :class:`TubularChart` is the ball bundle of radius ``radius`` in the normal
bundle of a curve together with the normal exponential ``tau`` and its
inverse, the nearest-point retraction ``tau_inverse``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import AmbiguousProjection, DegenerateReach, NoConvergence, OutsideTube
from .periodic import TWO_PI, LiftedCircleMap, circular_direction
from .submanifold import closest_parameters, project_onto_frame


def tubular_radius(sigma):
    """Admissible tube radius: safety_factor * min(reach estimate, ambient bound).

    The reach is estimated with the point-to-tangent criterion over all
    non-adjacent sample pairs.
    """
    M = sigma.ambient
    scale = np.sqrt(M.metric_scale)
    lfs = _kernels.reach_estimate(sigma.samples, sigma.normals * scale) * scale
    if not lfs >= 1e-8:
        raise DegenerateReach(f"reach estimate {lfs:.3e} underflows")
    return M.tol.safety_factor * min(lfs, M.injectivity_bound)


@dataclass(frozen=True)
class TubeCoordinates:
    """Result of :meth:`TubularChart.tau_inverse` for a batch of points."""

    theta: np.ndarray
    base: np.ndarray
    vector: np.ndarray
    spacing: float

    @property
    def index(self):
        m = int(round(TWO_PI / self.spacing))
        return np.floor(self.theta / self.spacing).astype(int) % m

    @property
    def offset(self):
        q = self.theta / self.spacing
        return q - np.floor(q)


class TubularChart:
    """Normal ball bundle of radius ``radius`` around ``sigma``."""

    def __init__(self, sigma, radius=None):
        self.sigma = sigma
        self.radius = float(tubular_radius(sigma) if radius is None else radius)
        if not self.radius > 0:
            raise DegenerateReach("tube radius must be positive")

    @property
    def ambient(self):
        return self.sigma.ambient

    @property
    def tol(self):
        return self.sigma.ambient.tol

    def __repr__(self):
        return f"TubularChart({self.sigma!r}, radius={self.radius:.6g})"

    # -- forward map --------------------------------------------------------

    def tau(self, vectors):
        """exp_{x_i}(s_i) for a section given by its (m, N) vectors."""
        vectors = np.asarray(getattr(vectors, "vectors", vectors), dtype=float)
        norms = self.ambient.norm(vectors)
        if np.any(norms >= self.radius):
            raise OutsideTube(f"section norm {norms.max():.6g} >= tube radius {self.radius:.6g}")
        return self.ambient.exp(self.sigma.samples, vectors)

    def tau_at(self, theta, vectors):
        """exp_{c(theta)}(v) at arbitrary base parameters (no radius check)."""
        x = self.sigma.point(np.atleast_1d(theta))
        return self.ambient.exp(x, vectors)

    # -- inverse ------------------------------------------------------------

    def tau_inverse(self, points, check_ambiguity=True):
        """Tube coordinates (base parameter, base point, normal vector) of points."""
        M = self.ambient
        points = M.check_on(np.atleast_2d(np.asarray(points, dtype=float)))
        theta0 = self._candidates(points, check_ambiguity)
        if M.kind == "levelset":
            theta, base, vec = self._gauss_newton(points, theta0)
        else:
            theta, dist = closest_parameters(self.sigma, points, theta0, max_iter=self.tol.max_iter)
            base, t, n = self.sigma.frames_at(theta)
            g = np.sum((self.sigma.curve(theta) - points) * self.sigma.curve(theta, 1), axis=-1)
            if np.any(np.abs(g) > 1e-6 * max(1.0, float(np.max(dist)))):
                raise NoConvergence("nearest-point iteration did not converge")
            vec = project_onto_frame(M, n, M.log(base, points))
        norms = M.norm(vec)
        if np.any(norms >= self.radius):
            raise OutsideTube(f"point at normal distance {norms.max():.6g} >= tube radius {self.radius:.6g}")
        return TubeCoordinates(theta % TWO_PI, base, vec, self.sigma.spacing)

    def base_projection(self, points):
        return self.tau_inverse(points).base

    def _candidates(self, points, check_ambiguity):
        """Initial parameters; raises AmbiguousProjection near the cut locus."""
        samples = self.sigma.samples
        m = samples.shape[0]
        h = self.sigma.spacing
        d, seg, frac = _kernels.polyline_project(points, samples)
        theta0 = (seg + frac) * h
        if not check_ambiguity:
            return theta0
        # vertex distances; any local minimum close to the best one is a rival basin
        diff = points[:, None, :] - samples[None, :, :]
        vd = np.sqrt(np.einsum("pik,pik->pi", diff, diff))
        slack = 2.0 * float(np.max(np.linalg.norm(np.roll(samples, -1, 0) - samples, axis=1)))
        local_min = (vd <= np.roll(vd, 1, axis=1)) & (vd <= np.roll(vd, -1, axis=1))
        near = local_min & (vd <= vd.min(axis=1, keepdims=True) + slack)
        for p in np.nonzero(near.sum(axis=1) > 1)[0]:
            idx = np.nonzero(near[p])[0]
            lifted = idx * h
            # separate basins only: skip candidates adjacent on the grid
            gaps = np.diff(np.concatenate([idx, [idx[0] + m]]))
            if np.all(gaps <= 2):
                continue
            th, dist = closest_parameters(self.sigma, np.repeat(points[p:p + 1], len(idx), 0), lifted)
            order = np.argsort(dist)
            best_t = th[order[0]]
            for q in order[1:]:
                sep = abs((th[q] - best_t + np.pi) % TWO_PI - np.pi)
                if sep > 2 * h and dist[q] - dist[order[0]] < self.tol.ambiguity_tol:
                    raise AmbiguousProjection(
                        f"point {points[p]} has two nearest base points at parameters "
                        f"{best_t % TWO_PI:.6f} and {th[q] % TWO_PI:.6f}")
        return theta0

    def _gauss_newton(self, points, theta0):
        """Solve exp_{c(theta)}(sum a_j n_j(theta)) = p for (theta, a)."""
        M = self.ambient
        sig = self.sigma
        r = M.dim_manifold - 1
        x0, _, n0 = sig.frames_at(theta0)
        a = M.metric_scale * np.einsum("pk,pkr->pr", points - x0, n0)
        theta = theta0.copy()
        steps = M.exp_steps(x0, np.einsum("pkr,pr->pk", n0, a))

        def residual(th, coef):
            x, _, n = sig.frames_at(th)
            v = np.einsum("pkr,pr->pk", n, coef)
            return M.exp(x, v, steps=steps) - points

        eps = 1e-6
        for _ in range(self.tol.max_iter):
            res = residual(theta, a)
            cols = [(residual(theta + eps, a) - residual(theta - eps, a)) / (2 * eps)]
            for j in range(r):
                e = np.zeros(r)
                e[j] = eps
                cols.append((residual(theta, a + e) - residual(theta, a - e)) / (2 * eps))
            J = np.stack(cols, axis=-1)
            JtJ = np.einsum("pki,pkj->pij", J, J)
            Jtr = np.einsum("pki,pk->pi", J, res)
            delta = np.linalg.solve(JtJ, Jtr[..., None])[..., 0]
            theta = theta - delta[:, 0]
            a = a - delta[:, 1:]
            if np.max(np.abs(delta)) < 1e-13 or np.max(np.abs(res)) < 1e-3 * self.tol.inv_tol:
                break
        else:
            raise NoConvergence("Gauss-Newton tube inversion did not converge")
        res = residual(theta, a)
        if np.max(np.linalg.norm(res, axis=-1)) > self.tol.inv_tol:
            raise NoConvergence(f"tube inversion residual {np.max(np.abs(res)):.3e} above inv_tol")
        x, _, n = sig.frames_at(theta)
        return theta, x, np.einsum("pkr,pr->pk", n, a)

    # -- fibre intersection ---------------------------------------------------

    def fibre_parameters(self, point_fn, base_params, targets, polish=4):
        """Parameters u_j with point_fn(u_j) on the normal fibre over targets[j].

        ``point_fn(u)`` traces a closed curve inside the tube whose sampled
        base parameters ``base_params`` (one per grid sample of u) are
        circularly monotone. The interpolated inverse of that monotone map
        gives a starting value that Newton then polishes against the exact
        fibre condition.
        """
        direction, lifted = circular_direction(np.asarray(base_params) % TWO_PI)
        cmap = LiftedCircleMap(lifted, direction)
        targets = np.asarray(targets, dtype=float)
        u = cmap.inverse_at(targets, tol=self.tol.root_tol)
        M = self.ambient
        if M.kind == "levelset":
            return self._polish_levelset(point_fn, u, targets, polish)
        x, t, _ = self.sigma.frames_at(targets)

        def g(uu):
            return np.sum((point_fn(uu) - x) * t, axis=-1)

        eps = 1e-6
        for _ in range(polish):
            gu = g(u)
            dg = (g(u + eps) - g(u - eps)) / (2 * eps)
            step = gu / dg
            u = u - step
            if np.max(np.abs(step)) < self.tol.root_tol:
                break
        return u

    def _polish_levelset(self, point_fn, u, targets, polish):
        def g(uu):
            th = self.tau_inverse(point_fn(uu), check_ambiguity=False).theta
            return (th - targets + np.pi) % TWO_PI - np.pi

        eps = 1e-6
        for _ in range(polish):
            gu = g(u)
            dg = (g(u + eps) - g(u - eps)) / (2 * eps)
            step = gu / dg
            u = u - step
            if np.max(np.abs(step)) < self.tol.root_tol:
                break
        return u

    def fibre_vectors(self, points, targets):
        """Normal vectors at base parameters ``targets`` reaching ``points``."""
        M = self.ambient
        if M.kind == "levelset":
            return self.tau_inverse(points, check_ambiguity=False).vector
        x, _, n = self.sigma.frames_at(targets)
        vec = project_onto_frame(M, n, M.log(x, points))
        norms = M.norm(vec)
        if np.any(norms >= self.radius):
            raise OutsideTube(f"normal distance {norms.max():.6g} >= tube radius {self.radius:.6g}")
        return vec

    # -- certificate ----------------------------------------------------------

    @cached_property
    def certificate(self):
        """Injectivity / roundtrip certificate on a grid of normal vectors."""
        M = self.ambient
        sig = self.sigma
        r = sig.normals.shape[-1]
        levels = np.array([-0.9, -0.45, 0.45, 0.9]) if r == 1 else np.array([0.45, 0.9])
        V = np.concatenate([lev * self.radius * sig.normals[:, :, j] for lev in levels for j in range(r)])
        X = np.tile(sig.samples, (len(V) // sig.m, 1))
        img = M.exp(X, V)
        coords = self.tau_inverse(img, check_ambiguity=False)
        base_err = np.max(np.linalg.norm(coords.base - X, axis=-1))
        vec_err = np.max(np.linalg.norm(coords.vector - V, axis=-1))
        roundtrip = max(base_err, vec_err)
        d = np.linalg.norm(img[:, None] - img[None], axis=-1)
        np.fill_diagonal(d, np.inf)
        sep = float(d.min())
        return {
            "roundtrip_error": float(roundtrip),
            "min_image_separation": sep,
            "ok": bool(roundtrip < self.tol.roundtrip_tol and sep > self.tol.collision_tol),
        }
