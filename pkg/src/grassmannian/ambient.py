"""Ambient Riemannian manifolds embedded in Euclidean space.

Three kinds are supported, all carrying the metric induced from the ambient
dot product (optionally multiplied by a constant ``metric_scale``):

* ``flat``: Euclidean space R^N,
* ``sphere``: the unit sphere S^d in R^(d+1), with closed-form geodesics,
* ``levelset``: a regular level set {F = 0} of a built-in scalar field, whose
  geodesics are integrated numerically.

Points and vectors are plain numpy arrays; batched calls take (P, N) arrays.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NoConvergence, OffManifold


# ---------------------------------------------------------------------------
# level-set fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelSetField:
    """A named smooth scalar field on R^3 with gradient and Hessian quadratic form."""

    name: str
    params: tuple

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self.name == "sphere":
            (r,) = self.params
            return np.sum(x * x, axis=-1) - r * r
        if self.name == "torus":
            R, r = self.params
            q = np.hypot(x[..., 0], x[..., 1])
            return (q - R) ** 2 + x[..., 2] ** 2 - r * r
        if self.name == "ellipsoid":
            a, b, c = self.params
            return (x[..., 0] / a) ** 2 + (x[..., 1] / b) ** 2 + (x[..., 2] / c) ** 2 - 1.0
        raise ValueError(f"unknown level-set field {self.name!r}")

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        if self.name == "sphere":
            return 2.0 * x
        if self.name == "torus":
            R, _ = self.params
            q = np.hypot(x[..., 0], x[..., 1])
            f = 2.0 * (q - R) / q
            return np.stack([f * x[..., 0], f * x[..., 1], 2.0 * x[..., 2]], axis=-1)
        if self.name == "ellipsoid":
            a, b, c = self.params
            return 2.0 * x / np.array([a * a, b * b, c * c])
        raise ValueError(f"unknown level-set field {self.name!r}")

    def hessian_form(self, x, u):
        """u^T (Hess F)(x) u, batched over the leading axis."""
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        if self.name == "sphere":
            return 2.0 * np.sum(u * u, axis=-1)
        if self.name == "torus":
            R, _ = self.params
            q = np.hypot(x[..., 0], x[..., 1])
            q3 = q ** 3
            hxx = 2.0 * (1.0 - R / q + R * x[..., 0] ** 2 / q3)
            hyy = 2.0 * (1.0 - R / q + R * x[..., 1] ** 2 / q3)
            hxy = 2.0 * R * x[..., 0] * x[..., 1] / q3
            return (hxx * u[..., 0] ** 2 + hyy * u[..., 1] ** 2
                    + 2.0 * hxy * u[..., 0] * u[..., 1] + 2.0 * u[..., 2] ** 2)
        if self.name == "ellipsoid":
            a, b, c = self.params
            return 2.0 * np.sum(u * u / np.array([a * a, b * b, c * c]), axis=-1)
        raise ValueError(f"unknown level-set field {self.name!r}")

    @property
    def injectivity_bound(self):
        # pi/2 times the smallest principal radius of curvature
        if self.name == "sphere":
            return 0.5 * np.pi * self.params[0]
        if self.name == "torus":
            return 0.5 * np.pi * self.params[1]
        if self.name == "ellipsoid":
            a, b, c = self.params
            return 0.5 * np.pi * min(a, b, c) ** 2 / max(a, b, c)
        raise ValueError(f"unknown level-set field {self.name!r}")


BUILTIN_FIELDS = {"sphere": 1, "torus": 2, "ellipsoid": 3}


def level_set_field(name, *params):
    if name not in BUILTIN_FIELDS:
        raise ValueError(f"unknown level-set field {name!r}")
    if len(params) != BUILTIN_FIELDS[name]:
        raise ValueError(f"field {name!r} takes {BUILTIN_FIELDS[name]} parameters")
    return LevelSetField(name, tuple(float(p) for p in params))


# ---------------------------------------------------------------------------
# ambient manifold
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmbientManifold:
    kind: str
    dim_ambient: int
    dim_manifold: int
    field: LevelSetField = None
    metric_scale: float = 1.0
    tol: Tolerances = dc_field(default=DEFAULT_TOLERANCES, compare=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def flat(cls, n, metric_scale=1.0, tol=DEFAULT_TOLERANCES):
        return cls("flat", n, n, None, float(metric_scale), tol)

    @classmethod
    def sphere(cls, d=2, metric_scale=1.0, tol=DEFAULT_TOLERANCES):
        return cls("sphere", d + 1, d, None, float(metric_scale), tol)

    @classmethod
    def level_set(cls, name, *params, metric_scale=1.0, tol=DEFAULT_TOLERANCES):
        return cls("levelset", 3, 2, level_set_field(name, *params), float(metric_scale), tol)

    def with_tolerances(self, tol):
        return AmbientManifold(self.kind, self.dim_ambient, self.dim_manifold,
                               self.field, self.metric_scale, tol)

    # -- basic geometry ---------------------------------------------------

    @property
    def codim(self):
        return self.dim_ambient - self.dim_manifold

    @property
    def injectivity_bound(self):
        """Lower bound on the injectivity radius of exp, in metric units."""
        s = np.sqrt(self.metric_scale)
        if self.kind == "flat":
            return np.inf
        if self.kind == "sphere":
            return s * 0.5 * np.pi
        return s * self.field.injectivity_bound

    def inner(self, u, v):
        return self.metric_scale * np.sum(np.asarray(u) * np.asarray(v), axis=-1)

    def norm(self, v):
        return np.sqrt(self.inner(v, v))

    def defect(self, x):
        """How far x is from the manifold (|F(x)| for the implicit kinds)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "flat":
            return np.zeros(x.shape[:-1])
        if self.kind == "sphere":
            return np.abs(np.linalg.norm(x, axis=-1) - 1.0)
        return np.abs(self.field.value(x))

    def check_on(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim_ambient:
            raise OffManifold(f"expected {self.dim_ambient} coordinates, got {x.shape[-1]}")
        bad = self.defect(x) > self.tol.surface_tol
        if np.any(bad):
            raise OffManifold(f"point(s) off the manifold: max defect {np.max(self.defect(x)):.3e}")
        return x

    def unit_normals(self, x):
        """Unit normals of M in R^N, shape (..., N, codim)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "flat":
            return np.zeros(x.shape + (0,))
        if self.kind == "sphere":
            n = x / np.linalg.norm(x, axis=-1, keepdims=True)
        else:
            g = self.field.gradient(x)
            n = g / np.linalg.norm(g, axis=-1, keepdims=True)
        return n[..., None]

    def project_to(self, x):
        """Pull a nearby point back onto M (normalisation / one Newton step on F)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "flat":
            return x
        if self.kind == "sphere":
            return x / np.linalg.norm(x, axis=-1, keepdims=True)
        g = self.field.gradient(x)
        f = self.field.value(x)
        return x - (f / np.sum(g * g, axis=-1))[..., None] * g

    def _tangent_projection(self, x, u):
        n = self.unit_normals(x)
        if n.shape[-1] == 0:
            return np.array(u, dtype=float, copy=True)
        u = np.asarray(u, dtype=float)
        c = np.einsum("...k,...kr->...r", u, n)
        return u - np.einsum("...kr,...r->...k", n, c)

    # -- operations ---------------------------------------------------------

    def metric_at(self, x):
        """Gram matrix of the metric at x, acting on T_xM (N x N, symmetric).

        Zero on the normal directions of M; ``u @ G @ v`` is g_x(u, v) for
        tangent u, v.
        """
        x = self.check_on(x)
        N = self.dim_ambient
        n = self.unit_normals(x)
        P = np.eye(N) - n @ n.T if n.shape[-1] else np.eye(N)
        return self.metric_scale * P

    def project_tangent(self, x, u):
        """Orthogonal projection of an ambient vector onto T_xM."""
        x = self.check_on(x)
        return self._tangent_projection(x, u)

    def exp(self, x, v, steps=None):
        """Geodesic exponential exp_x(v); batched over a leading axis.

        ``steps`` fixes the RK4 step count for level sets (otherwise it is
        chosen by step doubling until successive results agree to exp_tol).
        """
        x = self.check_on(x)
        v = np.asarray(v, dtype=float)
        if self.kind == "flat":
            return x + v
        if self.kind == "sphere":
            return _sphere_exp(x, v)
        zero = np.all(v == 0.0, axis=-1)
        if steps is not None:
            out = self._geodesic(x, v, steps)[0]
        else:
            out = self._adaptive_geodesic(x, v)[0]
        return np.where(zero[..., None], x, out)

    def exp_steps(self, x, v):
        """Step count the adaptive integrator settles on for (x, v)."""
        if self.kind != "levelset":
            return None
        return self._adaptive_geodesic(self.check_on(x), np.asarray(v, dtype=float))[1]

    def log(self, x, p):
        """Inverse of exp for the closed-form kinds (flat, sphere)."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        if self.kind == "flat":
            return p - x
        if self.kind == "sphere":
            c = np.sum(x * p, axis=-1)
            w = p - c[..., None] * x
            nw = np.linalg.norm(w, axis=-1)
            ang = np.arctan2(nw, c)  # accurate near zero, unlike arccos
            scale = np.where(nw > 0, ang / np.where(nw > 0, nw, 1.0), 1.0)
            return scale[..., None] * w
        raise NotImplementedError("no closed-form log on level sets")

    def exp_differential(self, x, v, w):
        """Directional derivative d/de exp_x(v + e w) at e = 0.

        Fourth-order central differences, with the step picked by comparing
        two successive halvings (Richardson); the extrapolated value is
        returned once they agree to fd_tol.
        """
        x = self.check_on(x)
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        if self.kind == "flat":
            return w.copy()
        if self.kind == "sphere":
            return sphere_exp_derivative(x, v, w)
        wn = float(np.linalg.norm(w))
        if wn == 0.0:
            return np.zeros_like(w)
        d = w / wn
        steps = self.exp_steps(x, v)

        def E(eps):
            return self.exp(x, v + eps * d, steps=steps)

        def D(h):
            return (-E(2 * h) + 8 * E(h) - 8 * E(-h) + E(-2 * h)) / (12 * h)

        h = 1e-2 * max(1.0, float(np.linalg.norm(v)))
        prev = D(h)
        for _ in range(8):
            h *= 0.5
            cur = D(h)
            if np.max(np.abs(cur - prev)) < self.tol.fd_tol:
                return wn * (cur + (cur - prev) / 15.0)
            prev = cur
        raise NoConvergence("finite-difference estimates of d exp do not settle")

    # -- geodesic integration on level sets --------------------------------

    def _accel(self, x, u):
        g = self.field.gradient(x)
        q = self.field.hessian_form(x, u)
        return -(q / np.sum(g * g, axis=-1))[..., None] * g

    def _geodesic(self, x, v, n, record=False):
        h = 1.0 / n
        x = np.array(x, dtype=float)
        u = np.array(v, dtype=float)
        speeds = [np.linalg.norm(u, axis=-1)] if record else None
        for _ in range(n):
            k1x, k1u = u, self._accel(x, u)
            k2x = u + 0.5 * h * k1u
            k2u = self._accel(x + 0.5 * h * k1x, k2x)
            k3x = u + 0.5 * h * k2u
            k3u = self._accel(x + 0.5 * h * k2x, k3x)
            k4x = u + h * k3u
            k4u = self._accel(x + h * k3x, k4x)
            x = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
            u = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
            x = self.project_to(x)
            u = self._tangent_projection(x, u)
            if record:
                speeds.append(np.linalg.norm(u, axis=-1))
        return x, u, speeds

    def _adaptive_geodesic(self, x, v):
        n = self.tol.min_steps
        prev = self._geodesic(x, v, n)[0]
        while n < self.tol.max_steps:
            n *= 2
            cur = self._geodesic(x, v, n)[0]
            if np.max(np.abs(cur - prev)) < self.tol.exp_tol:
                return cur, n
            prev = cur
        raise NoConvergence(f"geodesic step doubling did not reach exp_tol within {self.tol.max_steps} steps")

    def geodesic_speeds(self, x, v, steps=None):
        """Speed |gamma'(t)| at every RK4 node, for conservation checks."""
        x = self.check_on(x)
        v = np.asarray(v, dtype=float)
        if self.kind != "levelset":
            raise NotImplementedError("speeds are constant in closed form")
        if steps is None:
            steps = self.exp_steps(x, v)
        return np.array(self._geodesic(x, v, steps, record=True)[2])


def _sphere_exp(x, v):
    r = np.linalg.norm(v, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    out = np.cos(r)[..., None] * x + (np.sin(r) / safe)[..., None] * v
    return np.where((r > 0)[..., None], out, x)


def sphere_exp_derivative(x, v, w):
    """Closed-form d/de exp_x(v + e w) on the unit sphere (batched)."""
    x, v, w = (np.asarray(a, dtype=float) for a in (x, v, w))
    r = np.linalg.norm(v, axis=-1)[..., None]
    safe = np.where(r > 0, r, 1.0)
    u = v / safe
    dr = np.sum(u * w, axis=-1)[..., None]
    du = (w - dr * u) / safe
    out = (-np.sin(r) * x + np.cos(r) * u) * dr + np.sin(r) * du
    return np.where(r > 0, out, w)
