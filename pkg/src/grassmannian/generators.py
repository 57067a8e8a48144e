"""Named parametric generators for curves, sections, embeddings and families."""

import numpy as np

from .periodic import grid
from .submanifold import build_submanifold


def circle_points(m, center=(0.0, 0.0), radius=1.0, phase=0.0):
    t = grid(m) + phase
    c = np.asarray(center, dtype=float)
    return c + radius * np.stack([np.cos(t), np.sin(t)], axis=-1)


def ellipse_points(m, a, b, center=(0.0, 0.0), angle=0.0, phase=0.0):
    t = grid(m) + phase
    pts = np.stack([a * np.cos(t), b * np.sin(t)], axis=-1)
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return np.asarray(center, dtype=float) + pts @ rot.T


def circle(M, m, center=(0.0, 0.0), radius=1.0, phase=0.0):
    return build_submanifold(M, circle_points(m, center, radius, phase))


def ellipse(M, m, a, b, center=(0.0, 0.0), angle=0.0, phase=0.0):
    return build_submanifold(M, ellipse_points(m, a, b, center, angle, phase))


def latitude_points(m, height=0.0, phase=0.0, radius=1.0):
    """Circle of constant z on the sphere of the given radius."""
    t = grid(m) + phase
    r = np.sqrt(radius * radius - height * height)
    return np.stack([r * np.cos(t), r * np.sin(t), np.full_like(t, height)], axis=-1)


def latitude(M, m, height=0.0, phase=0.0):
    radius = M.field.params[0] if M.kind == "levelset" else 1.0
    return build_submanifold(M, latitude_points(m, height, phase, radius))


def torus_knot_points(m, p=2, q=3, R=2.0, r=0.5):
    t = grid(m)
    w = R + r * np.cos(q * t)
    return np.stack([w * np.cos(p * t), w * np.sin(p * t), r * np.sin(q * t)], axis=-1)


def torus_knot(M, m, p=2, q=3):
    R, r = M.field.params
    return build_submanifold(M, torus_knot_points(m, p, q, R, r))


def limacon_points(m, a=0.5, b=1.0):
    """r = a + b cos(theta); self-crossing at the origin for a < b."""
    t = grid(m)
    r = a + b * np.cos(t)
    return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)


CURVES = {
    "circle": circle,
    "ellipse": ellipse,
    "latitude": latitude,
    "torus_knot": torus_knot,
}


def make_curve(M, m, spec):
    """Build a curve from a ``{"name": ..., **params}`` mapping."""
    spec = dict(spec)
    name = spec.pop("name")
    if name not in CURVES:
        raise KeyError(name)
    return CURVES[name](M, m, **spec)


def random_trig_coefficients(rng, modes, count=1):
    """Random coefficients (count, 2 * modes + 1) of a trigonometric polynomial."""
    return rng.uniform(-1.0, 1.0, size=(count, 2 * modes + 1))


def trig_profile(coef, theta):
    """a_0 + sum_k a_k cos(k theta) + b_k sin(k theta), normalised to sup norm 1."""
    modes = (coef.shape[-1] - 1) // 2
    val = np.full_like(theta, coef[0], dtype=float)
    for k in range(1, modes + 1):
        val = val + coef[2 * k - 1] * np.cos(k * theta) + coef[2 * k] * np.sin(k * theta)
    fine = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
    ref = np.full_like(fine, coef[0])
    for k in range(1, modes + 1):
        ref = ref + coef[2 * k - 1] * np.cos(k * fine) + coef[2 * k] * np.sin(k * fine)
    return val / np.max(np.abs(ref))


def random_circle_diffeo_values(rng, m, amplitude=0.2, modes=3):
    """Lifted samples of a random orientation-preserving circle diffeomorphism.

    theta + shift + sum_k c_k sin(k theta + p_k) with sum_k k |c_k| <= amplitude < 1.
    """
    t = grid(m)
    shift = rng.uniform(0.0, 2 * np.pi)
    ks = np.arange(1, modes + 1)
    c = rng.uniform(-1.0, 1.0, size=modes)
    c *= amplitude / np.sum(ks * np.abs(c))
    ph = rng.uniform(0.0, 2 * np.pi, size=modes)
    return t + shift + np.sum(c[:, None] * np.sin(ks[:, None] * t[None, :] + ph[:, None]), axis=0)
