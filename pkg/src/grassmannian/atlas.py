"""Charts of the space of oriented curves: normal sections over a centre curve.

A :class:`ChartPoint` is a normal section ``s`` of a centre curve ``Sigma``
inside its tube; :func:`chart_apply` maps it to the oriented curve
``tau(s(Sigma))``. :func:`chart_contains` is the inverse (and returns
``None`` for curves outside the chart, including the orientation-reversed
copy of a chart image), and :func:`transition` changes the centre curve.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousProjection,
    NoConvergence,
    NotBijective,
    NotDiffeomorphism,
    OrientationMismatch,
    OutsideTube,
)
from .periodic import TWO_PI, PeriodicInterpolant, circular_direction
from .submanifold import OrientedSubmanifold


class NormalSection:
    """One normal vector per sample of ``base`` (shape (m, N))."""

    def __init__(self, base, vectors, check=True):
        self.base = base
        self.vectors = np.asarray(vectors, dtype=float)
        if self.vectors.shape != base.samples.shape:
            raise ValueError(f"expected vectors of shape {base.samples.shape}, got {self.vectors.shape}")
        if check:
            M = base.ambient
            along = np.abs(M.inner(self.vectors, base.tangents))
            if np.any(along > 1e-9 * np.maximum(1.0, M.norm(self.vectors))):
                raise ValueError(f"section has tangential component {along.max():.3e}")

    @classmethod
    def zero(cls, base):
        return cls(base, np.zeros_like(base.samples), check=False)

    @classmethod
    def from_coefficients(cls, base, coef):
        """Section sum_j coef[:, j] n_j from coefficients in the normal frame."""
        coef = np.asarray(coef, dtype=float).reshape(base.m, -1)
        return cls(base, np.einsum("ikr,ir->ik", base.normals, coef), check=False)

    @property
    def coefficients(self):
        return self.base.ambient.metric_scale * np.einsum("ik,ikr->ir", self.vectors, self.base.normals)

    @property
    def sup_norm(self):
        return float(np.max(self.base.ambient.norm(self.vectors))) if len(self.vectors) else 0.0

    def at(self, theta):
        """Section interpolated at arbitrary base parameters."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        raw = PeriodicInterpolant(self.vectors)(theta)
        return self.base.normal_part(theta, raw)

    def scaled(self, factor):
        return NormalSection(self.base, factor * self.vectors, check=False)

    def __add__(self, other):
        return NormalSection(self.base, self.vectors + np.asarray(getattr(other, "vectors", other)), check=False)


@dataclass(frozen=True)
class ChartPoint:
    chart: object
    section: NormalSection

    def __post_init__(self):
        if self.section.base is not self.chart.sigma and not np.array_equal(
                self.section.base.samples, self.chart.sigma.samples):
            raise ValueError("section is not over the chart's centre curve")
        norm = self.section.sup_norm
        if norm >= self.chart.radius:
            raise OutsideTube(f"section sup norm {norm:.6g} >= tube radius {self.chart.radius:.6g}")

    def image_points(self, theta):
        """Points tau(s(theta)) of the continuous chart image."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        x = self.chart.sigma.point(theta)
        return self.chart.ambient.exp(x, self.section.at(theta))


def chart_apply(cp):
    """The oriented curve tau(s(Sigma)), oriented by x -> tau(s(x))."""
    pts = cp.chart.tau(cp.section.vectors)
    return OrientedSubmanifold(cp.chart.ambient, pts, cp.chart.sigma.orientation)


def _base_parameters(chart, points):
    try:
        return chart.tau_inverse(points).theta
    except AmbiguousProjection as exc:
        raise OutsideTube(str(exc)) from exc


def chart_contains(chart, W):
    """Section s with chart_apply(chart, s) = W as oriented curves, or None."""
    sigma = chart.sigma
    try:
        theta = _base_parameters(chart, W.samples)
        direction, _ = circular_direction(theta)
    except (OutsideTube, NotBijective, NoConvergence):
        return None
    if W.orientation * direction * sigma.orientation != 1:
        return None
    try:
        u = chart.fibre_parameters(W.point, theta, sigma.parameter_grid)
        pts = W.point(u)
        vectors = chart.fibre_vectors(pts, sigma.parameter_grid)
    except (OutsideTube, NoConvergence, NotBijective):
        return None
    section = NormalSection(sigma, vectors, check=False)
    back = chart.tau(vectors)
    if np.max(np.linalg.norm(back - pts, axis=-1)) >= chart.tol.contain_tol:
        return None
    return section


@dataclass(frozen=True)
class Correspondence:
    """Sampled map Sigma_1 -> Sigma_2 with its Jacobian certificate."""

    theta: np.ndarray        # lifted Sigma_2 parameters, one per Sigma_1 sample
    derivative: np.ndarray   # d theta_2 / d theta_1 (4th-order differences)
    direction: int
    certified: bool = True

    @property
    def min_derivative(self):
        return float(np.min(np.abs(self.derivative)))


def periodic_difference(lifted, direction):
    """4th-order central difference of a lifted circle map on the uniform grid."""
    m = len(lifted)
    h = TWO_PI / m
    ext = np.concatenate([lifted[-2:] - direction * TWO_PI, lifted, lifted[:2] + direction * TWO_PI])
    return (-ext[4:] + 8 * ext[3:-1] - 8 * ext[1:-3] + ext[:-4]) / (12 * h)


def correspondence(cp, chart2):
    """x -> base_projection(chart2, exp_x(s(x))) with a diffeomorphism certificate."""
    pts = cp.chart.tau(cp.section.vectors)
    theta2 = _base_parameters(chart2, pts)
    try:
        direction, lifted = circular_direction(theta2)
    except NotBijective as exc:
        raise NotDiffeomorphism("correspondence is not circularly monotone") from exc
    deriv = periodic_difference(lifted, direction)
    if np.min(np.abs(deriv)) < cp.chart.tol.jac_floor or np.any(np.sign(deriv) != direction):
        raise NotDiffeomorphism(f"correspondence derivative degenerates (min {np.min(np.abs(deriv)):.3e})")
    return Correspondence(lifted, deriv, direction)


def transition(cp, chart2):
    """Re-express the chart image of ``cp`` as a section over chart2's centre."""
    corr = correspondence(cp, chart2)
    sigma1, sigma2 = cp.chart.sigma, chart2.sigma
    if sigma1.orientation * corr.direction * sigma2.orientation != 1:
        raise OrientationMismatch("image carries the opposite orientation of chart2's curves")
    u = chart2.fibre_parameters(cp.image_points, corr.theta, sigma2.parameter_grid)
    vectors = chart2.fibre_vectors(cp.image_points(u), sigma2.parameter_grid)
    return ChartPoint(chart2, NormalSection(sigma2, vectors, check=False))
