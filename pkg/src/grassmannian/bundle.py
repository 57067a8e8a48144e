"""Embeddings of a reference curve and the principal-bundle structure over curves.

``Emb(Sigma, M)`` is represented by :class:`DiscreteEmbedding` (image points
of the reference grid), the structure group by :class:`CircleDiffeo`, and the
projection to oriented curves by :func:`project_p`. Local trivialisations over
a tubular chart are :func:`trivialize` / :func:`trivialize_inverse`.
"""

from dataclasses import dataclass

import numpy as np

from .atlas import ChartPoint, NormalSection, chart_contains, periodic_difference
from .errors import (
    NotBijective,
    NotDiffeomorphism,
    NotEmbedding,
    OrientationMismatch,
    OutsideTube,
    SourceMismatch,
)
from .periodic import TWO_PI, LiftedCircleMap, PeriodicInterpolant, circular_direction, grid
from .submanifold import OrientedSubmanifold, adjacent_spacing, check_simple, project_onto_frame


# ---------------------------------------------------------------------------
# circle diffeomorphisms
# ---------------------------------------------------------------------------

class CircleDiffeo(LiftedCircleMap):
    """Sampled diffeomorphism of the parameter circle (lifted values, sign)."""

    def __init__(self, values, sign=1, check=True):
        super().__init__(values, sign)
        if check:
            d = self.sign * periodic_difference(self.values, self.sign)
            if np.any(d <= 0):
                raise NotBijective("circle map samples are not strictly monotone")

    @classmethod
    def identity(cls, m):
        return cls(grid(m), 1, check=False)

    @classmethod
    def rotation(cls, m, angle):
        return cls(grid(m) + angle, 1, check=False)

    @classmethod
    def from_function(cls, m, fn, sign=1):
        return cls(fn(grid(m)), sign)

    def compose(self, other):
        """self o other."""
        return CircleDiffeo(self(other.values), self.sign * other.sign, check=False)

    def inverse(self):
        return CircleDiffeo(self.inverse_at(grid(self.m)), self.sign, check=False)

    def distance(self, other):
        """Max circular distance between sample values."""
        d = (self.values - other.values + np.pi) % TWO_PI - np.pi
        return float(np.max(np.abs(d)))

    def __repr__(self):
        return f"CircleDiffeo(m={self.m}, sign={self.sign:+d})"


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

class DiscreteEmbedding:
    """Images of the reference grid of ``source`` under an embedding."""

    def __init__(self, source, images):
        self.source = source
        self.images = np.asarray(images, dtype=float)
        if self.images.shape != source.samples.shape:
            raise ValueError(f"expected images of shape {source.samples.shape}")
        self._interp = None

    @classmethod
    def inclusion(cls, sigma):
        return cls(sigma, sigma.samples.copy())

    @property
    def ambient(self):
        return self.source.ambient

    @property
    def m(self):
        return self.images.shape[0]

    def __call__(self, theta):
        if self._interp is None:
            self._interp = PeriodicInterpolant(self.images)
        return self.ambient.project_to(self._interp(np.asarray(theta, dtype=float)))

    def derivative(self, theta):
        if self._interp is None:
            self._interp = PeriodicInterpolant(self.images)
        return self._interp(np.asarray(theta, dtype=float), 1)

    @property
    def embed_sep(self):
        return self.ambient.tol.embed_sep_factor * float(np.min(adjacent_spacing(self.images)))


@dataclass(frozen=True)
class EmbeddingCertificate:
    ok: bool
    reason: str = ""
    pair: tuple = None
    sample: int = None

    def __bool__(self):
        return self.ok


def is_embedding(f):
    """Sampled injectivity and immersion test."""
    deriv = np.linalg.norm(f.derivative(grid(f.m)), axis=-1)
    weak = np.nonzero(deriv <= f.ambient.tol.imm_floor)[0]
    if weak.size:
        return EmbeddingCertificate(False, "not immersive", sample=int(weak[0]))
    gaps = adjacent_spacing(f.images)
    if np.any(gaps == 0):
        i = int(np.nonzero(gaps == 0)[0][0])
        return EmbeddingCertificate(False, "adjacent images coincide", pair=(i, (i + 1) % f.m))
    try:
        check_simple(f.images, f.embed_sep, NotEmbedding)
    except NotEmbedding as exc:
        nums = [int(s) for s in str(exc).replace(",", " ").split() if s.isdigit()]
        return EmbeddingCertificate(False, str(exc), pair=tuple(nums[:2]) if len(nums) >= 2 else None)
    return EmbeddingCertificate(True)


def project_p(f):
    """The oriented image curve f(Sigma), oriented through f."""
    cert = is_embedding(f)
    if not cert:
        raise NotEmbedding(cert.reason)
    return OrientedSubmanifold(f.ambient, f.images, f.source.orientation)


def act(f, phi):
    """Right action f o phi of an orientation-preserving circle diffeomorphism."""
    if phi.sign != 1:
        raise OrientationMismatch("the structure group acts through orientation-preserving maps only")
    return DiscreteEmbedding(f.source, f(phi.values))


# ---------------------------------------------------------------------------
# families of embeddings
# ---------------------------------------------------------------------------

class EmbeddingFamily:
    """Embeddings f_t of ``source`` with time derivatives.

    Either ``position`` (and optionally ``velocity``) callables ``t -> (m, N)``
    are supplied, or sampled ``frames``/``velocities`` on ``times`` which are
    then interpolated by cubic Hermite segments in time.
    """

    def __init__(self, source, times, frames=None, velocities=None, position=None, velocity=None):
        self.source = source
        self.times = np.asarray(times, dtype=float)
        self._position = position
        self._velocity = velocity
        if position is None:
            if frames is None or velocities is None:
                raise ValueError("need callables or sampled frames and velocities")
            self._frames = np.asarray(frames, dtype=float)
            self._velocities = np.asarray(velocities, dtype=float)
        else:
            self._frames = None
            self._velocities = None

    @property
    def frames(self):
        if self._frames is None:
            self._frames = np.stack([self.position(t) for t in self.times])
        return self._frames

    @property
    def velocities(self):
        if self._velocities is None:
            self._velocities = np.stack([self.velocity(t) for t in self.times])
        return self._velocities

    def position(self, t):
        if self._position is not None:
            return self._position(float(t))
        return self._hermite(t, 0)

    def velocity(self, t, h=1e-3):
        if self._velocity is not None:
            return self._velocity(float(t))
        if self._position is not None:
            p = self._position
            return (-p(t + 2 * h) + 8 * p(t + h) - 8 * p(t - h) + p(t - 2 * h)) / (12 * h)
        return self._hermite(t, 1)

    def embedding(self, t):
        return DiscreteEmbedding(self.source, self.position(t))

    def _hermite(self, t, deriv):
        T = self.times
        k = int(np.clip(np.searchsorted(T, t) - 1, 0, len(T) - 2))
        dt = T[k + 1] - T[k]
        s = (t - T[k]) / dt
        p0, p1 = self._frames[k], self._frames[k + 1]
        m0, m1 = self._velocities[k] * dt, self._velocities[k + 1] * dt
        if deriv == 0:
            h00 = 2 * s ** 3 - 3 * s ** 2 + 1
            h10 = s ** 3 - 2 * s ** 2 + s
            h01 = -2 * s ** 3 + 3 * s ** 2
            h11 = s ** 3 - s ** 2
            return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1
        d00 = 6 * s ** 2 - 6 * s
        d10 = 3 * s ** 2 - 4 * s + 1
        d01 = -6 * s ** 2 + 6 * s
        d11 = 3 * s ** 2 - 2 * s
        return (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / dt


def project_p_differential(family, t0):
    """Normal projection of df/dt(t0) as a section over W = p(f_t0)."""
    W = project_p(family.embedding(t0))
    vel = family.velocity(t0)
    return NormalSection(W, project_onto_frame(W.ambient, W.normals, vel), check=False)


# ---------------------------------------------------------------------------
# trivialisation over a chart
# ---------------------------------------------------------------------------

def _base_map(chart, images):
    """Lifted base parameters of images on the chart centre, with direction."""
    theta = chart.tau_inverse(images).theta
    try:
        direction, lifted = circular_direction(theta)
    except NotBijective as exc:
        raise NotDiffeomorphism("base projection is not circularly monotone") from exc
    deriv = periodic_difference(lifted, direction)
    if np.min(np.abs(deriv)) < chart.tol.jac_floor:
        raise NotDiffeomorphism("base projection derivative degenerates")
    return direction, lifted


def reparametrize_to_section(family, chart, times=None):
    """For each time, phi_t and s_t with tau(s_t) = f_t o phi_t on the grid."""
    times = family.times if times is None else np.asarray(times, dtype=float)
    W = chart.sigma
    out = []
    for t in times:
        f = family.embedding(t)
        direction, lifted = _base_map(chart, f.images)
        u = chart.fibre_parameters(f, lifted, W.parameter_grid)
        vectors = chart.fibre_vectors(f(u), W.parameter_grid)
        out.append((CircleDiffeo(u, direction, check=False), NormalSection(W, vectors, check=False)))
    return out


def _check_parametrizes(chart, f):
    coords = chart.tau_inverse(f.images)
    off = float(np.max(chart.ambient.norm(coords.vector)))
    if off >= chart.tol.contain_tol:
        raise SourceMismatch(f"embedding leaves the chart centre by {off:.3e}")
    try:
        direction, lifted = circular_direction(coords.theta)
    except NotBijective as exc:
        raise SourceMismatch("embedding does not parametrize the chart centre") from exc
    if f.source.orientation * direction * chart.sigma.orientation != 1:
        raise OrientationMismatch("embedding induces the opposite orientation on the chart centre")
    return direction, lifted


def local_section(cp, f):
    """x -> exp_{f(x)} s(f(x)): the local section of p through f over cp's chart."""
    chart = cp.chart
    _, lifted = _check_parametrizes(chart, f)
    s = cp.section.at(lifted % TWO_PI)
    images = chart.ambient.exp(f.images, s)
    g = DiscreteEmbedding(f.source, images)
    cert = is_embedding(g)
    if not cert:
        raise NotEmbedding(cert.reason)
    return g


def trivialization_gauge(g, f, chart):
    """Lambda(g) = f^-1 o pi o tau^-1 o g as a circle diffeomorphism."""
    df, psi_f = _check_parametrizes(chart, f)
    dg, psi_g = _base_map(chart, g.images)
    if df * dg != 1:
        raise OrientationMismatch("g lies over the orientation-reversed curve")
    f_inv = LiftedCircleMap(psi_f, df)
    return CircleDiffeo(f_inv.inverse_at(psi_g), df * dg, check=False)


def trivialize(g, f, chart):
    """(chart point of p(g), Lambda(g))."""
    section = chart_contains(chart, project_p(g))
    if section is None:
        raise OutsideTube("p(g) is not in the chart image")
    return ChartPoint(chart, section), trivialization_gauge(g, f, chart)


def trivialize_inverse(cp, phi, f):
    """sigma(cp) o phi."""
    return act(local_section(cp, f), phi)
