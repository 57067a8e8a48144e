"""Paths of curves, their lifts to embeddings, and ambient isotopy extension.

A :class:`GrassmannPath` is a chain of curves, each consecutive pair held in
one tubular chart. :func:`lift_path` turns it into an :class:`EmbeddingPath`
made of chart segments ``x -> exp(t s(x))``, :func:`smooth_family_from_path`
eases the segments into one family that is C^2 in time, and
:func:`extend_to_diffeotopy` builds the compactly supported vector field whose
flow restricts to that family. :func:`transport` chains everything, finding
a path by chart hopping when none is given.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .atlas import chart_contains
from .bundle import DiscreteEmbedding, EmbeddingFamily, is_embedding
from .errors import (
    GrassmannianError,
    NoConvergence,
    NoPathFound,
    NotEmbedding,
    SourceMismatch,
    TrackingFailure,
    TubeCollapse,
)
from .periodic import TWO_PI, PeriodicInterpolant, grid
from .submanifold import (
    OrientedSubmanifold,
    adjacent_spacing,
    distance_to_curve,
    hausdorff_distance,
    relative_orientation,
    same_oriented,
)
from .tubular import TubularChart, tubular_radius

FD_STEP = 2.5e-4
INNER = 1.0 / 3.0
OUTER = 2.0 / 3.0


# ---------------------------------------------------------------------------
# paths of curves
# ---------------------------------------------------------------------------

class GrassmannPath:
    """Curves ``nodes[0..K]`` with one witness chart per consecutive pair.

    ``sections[i]`` holds the chart coordinates of ``nodes[i]`` and
    ``nodes[i + 1]`` in ``charts[i]``.
    """

    def __init__(self, nodes, charts=None):
        self.nodes = list(nodes)
        if not self.nodes:
            raise ValueError("a path needs at least one node")
        if charts is None:
            charts = [TubularChart(n) for n in self.nodes[:-1]]
        if len(charts) != len(self.nodes) - 1:
            raise ValueError("need one witness chart per segment")
        self.charts = list(charts)
        self.sections = []
        for i, chart in enumerate(self.charts):
            a = chart_contains(chart, self.nodes[i])
            b = chart_contains(chart, self.nodes[i + 1])
            if a is None or b is None:
                raise ValueError(f"segment {i}: witness chart does not contain both endpoints")
            self.sections.append((a, b))

    def __len__(self):
        return len(self.nodes)


class _ChartSegment:
    """x -> exp_{c(u(x))}((1 - t) s_a(u(x)) + t s_b(u(x))) over a source curve.

    ``u`` are the chart-centre parameters of the source samples, computed
    once; at t = 0 the segment is the identity inclusion of the source
    whenever the source lies on the chart image of ``s_a``.
    """

    def __init__(self, source, chart, s_a, s_b):
        self.source = source
        self.chart = chart
        u = chart.tau_inverse(source.samples).theta
        self.base = chart.sigma.point(u)
        self.va = s_a.at(u)
        self.vb = s_b.at(u)
        # exact start: the source samples themselves
        self.start = source.samples

    def position(self, t):
        if t == 0.0:
            return self.start.copy()
        M = self.chart.ambient
        return M.exp(self.base, (1.0 - t) * self.va + t * self.vb)

    def velocity(self, t):
        M = self.chart.ambient
        return M.exp_differential(self.base, (1.0 - t) * self.va + t * self.vb, self.vb - self.va)


class _ConstantSegment:
    def __init__(self, source, images):
        self.source = source
        self.images = np.asarray(images, dtype=float)

    def position(self, t):
        return self.images.copy()

    def velocity(self, t):
        return np.zeros_like(self.images)


class _ComposedSegment:
    """segment(t) o e for a segment over p(e), re-indexed on e's source grid."""

    def __init__(self, segment, u):
        self.segment = segment
        self.u = u

    @property
    def source(self):
        return self.segment.source

    def _pull(self, values):
        if self.u is None:
            return values
        return PeriodicInterpolant(values)(self.u)

    def position(self, t):
        pts = self._pull(self.segment.position(t))
        return pts if self.u is None else self.segment.source.ambient.project_to(pts)

    def velocity(self, t):
        return self._pull(self.segment.velocity(t))


class EmbeddingPath:
    """Piecewise path of embeddings of ``source`` on [0, 1].

    Segment ``k`` covers ``[k / K, (k + 1) / K]``; ``markers`` are the
    interior junctions.
    """

    def __init__(self, source, segments):
        self.source = source
        self.segments = list(segments)

    @classmethod
    def constant(cls, source, images=None):
        images = source.samples if images is None else images
        return cls(source, [_ConstantSegment(source, images)])

    @property
    def K(self):
        return len(self.segments)

    @property
    def markers(self):
        return np.arange(1, self.K) / self.K

    def _locate(self, t):
        t = float(np.clip(t, 0.0, 1.0))
        k = min(int(np.floor(t * self.K)), self.K - 1)
        return k, t * self.K - k

    def position(self, t):
        k, s = self._locate(t)
        return self.segments[k].position(s)

    def velocity(self, t):
        k, s = self._locate(t)
        return self.K * self.segments[k].velocity(s)

    def embedding(self, t):
        return DiscreteEmbedding(self.source, self.position(t))

    def family(self, samples_per_segment=4):
        times = np.linspace(0.0, 1.0, self.K * samples_per_segment + 1)
        return EmbeddingFamily(self.source, times, position=self.position, velocity=self.velocity)


def concat_paths(beta, beta_tilde):
    """beta followed by beta_tilde(t - 1) o beta(1), reparametrised to [0, 1].

    ``beta_tilde`` must start at the identity inclusion of W = p(beta(1)).
    """
    tol = beta.source.ambient.tol
    end = beta.embedding(1.0)
    W = beta_tilde.source
    image = OrientedSubmanifold(end.ambient, end.images, beta.source.orientation, _validated=True)
    if not same_oriented(image, W, tol.contain_tol):
        raise SourceMismatch("second path does not start over the end curve of the first")
    start = beta_tilde.position(0.0)
    if np.max(np.abs(start - W.samples)) >= tol.junction_tol:
        raise SourceMismatch("second path does not start at the identity inclusion of its source")
    # parameters of beta(1)'s images on W; the index map when W was sampled by beta(1)
    if W.samples.shape == end.images.shape and np.max(np.abs(W.samples - end.images)) < tol.junction_tol:
        u = None
    else:
        _, u = distance_to_curve(W, end.images)
    composed = [_ComposedSegment(seg, u) for seg in beta_tilde.segments]
    out = EmbeddingPath(beta.source, beta.segments + composed)
    jump = np.max(np.linalg.norm(composed[0].position(0.0) - end.images, axis=-1))
    if jump >= tol.junction_tol:
        raise SourceMismatch(f"junction jump {jump:.3e} exceeds junction_tol")
    return out


def lift_path(alpha):
    """Lift a GrassmannPath to an EmbeddingPath starting at the inclusion of nodes[0]."""
    first = alpha.nodes[0]
    if len(alpha.nodes) == 1:
        return EmbeddingPath.constant(first)
    gamma = None
    for i, chart in enumerate(alpha.charts):
        s_a, s_b = alpha.sections[i]
        if gamma is None:
            src = first
        else:
            end = gamma.embedding(1.0)
            src = OrientedSubmanifold(first.ambient, end.images, first.orientation)
        piece = EmbeddingPath(src, [_ChartSegment(src, chart, s_a, s_b)])
        gamma = piece if gamma is None else concat_paths(gamma, piece)
    return gamma


# ---------------------------------------------------------------------------
# smoothing in time
# ---------------------------------------------------------------------------

def ease(tau):
    """Quintic easing 10 t^3 - 15 t^4 + 6 t^5 and its derivative."""
    return tau ** 3 * (10 - 15 * tau + 6 * tau * tau), 30 * tau * tau * (1 - tau) ** 2


def smooth_family_from_path(gamma, samples_per_segment=8):
    """C^2-in-time family following gamma with eased segments.

    Each segment's local time is passed through the quintic easing so that
    velocity and acceleration vanish at the junctions. Frames at the time
    grid are checked with :func:`is_embedding`; ``fam.fd_error`` records the
    gap between velocities and 4th-order time differences at interior grid
    times.
    """
    K = gamma.K

    def locate(t):
        t = float(np.clip(t, 0.0, 1.0))
        k = min(int(np.floor(t * K)), K - 1)
        return k, t * K - k

    def position(t):
        k, s = locate(t)
        e, _ = ease(s)
        return gamma.segments[k].position(e)

    def velocity(t):
        k, s = locate(t)
        e, de = ease(s)
        if de == 0.0:
            return np.zeros_like(gamma.source.samples)
        return K * de * gamma.segments[k].velocity(e)

    times = np.linspace(0.0, 1.0, K * samples_per_segment + 1)
    fam = EmbeddingFamily(gamma.source, times, position=position, velocity=velocity)
    for t in times:
        cert = is_embedding(fam.embedding(t))
        if not cert:
            raise NotEmbedding(f"frame at t = {t:.4f} is not an embedding: {cert.reason}")
    fam.markers = gamma.markers
    # stencil step small enough that the quartic easing term, odd across a
    # junction, stays below 1e-8 (its stencil error is 64 h^3)
    fam.fd_error = velocity_fd_error(fam, times[1:-1], h=FD_STEP)
    return fam


def velocity_fd_error(family, times, h=1e-3):
    """Max gap between the family's velocity and 4th-order differences of its frames."""
    p = family.position
    worst = 0.0
    for t in times:
        fd = (-p(t + 2 * h) + 8 * p(t + h) - 8 * p(t - h) + p(t - 2 * h)) / (12 * h)
        worst = max(worst, float(np.max(np.abs(fd - family.velocity(t)))))
    return worst


# ---------------------------------------------------------------------------
# isotopy extension
# ---------------------------------------------------------------------------

def bump(r):
    """C^2 step: 1 for r <= 0, 0 for r >= 1."""
    r = np.clip(r, 0.0, 1.0)
    return 1.0 - r ** 3 * (10 - 15 * r + 6 * r * r)


@dataclass
class _Carrier:
    chart: TubularChart
    velocity: PeriodicInterpolant


@dataclass
class AmbientFlow:
    """Flow of the bump-extended velocity field of an embedding family."""

    family: EmbeddingFamily
    rho: float
    inner: float = INNER
    outer: float = OUTER
    steps: int = 0
    _carriers: dict = field(default_factory=dict, repr=False)

    @property
    def ambient(self):
        return self.family.source.ambient

    @property
    def tol(self):
        return self.ambient.tol

    def carrier(self, t):
        key = round(float(t), 14)
        c = self._carriers.get(key)
        if c is None:
            src = self.family.source
            W = OrientedSubmanifold(self.ambient, self.family.position(key), src.orientation)
            chart = TubularChart(W, radius=self.rho)
            c = _Carrier(chart, PeriodicInterpolant(self.family.velocity(key)))
            self._carriers[key] = c
        return c

    def field(self, t, y):
        """X_t(y), exactly zero outside outer * rho of the carrier."""
        M = self.ambient
        y = np.atleast_2d(y)
        out = np.zeros_like(y)
        c = self.carrier(t)
        W = c.chart.sigma
        d, _, _ = _kernels.polyline_project(y, W.samples)
        margin = min(float(np.max(adjacent_spacing(W.samples))), self.rho / 6.0)
        near = np.nonzero(d < self.outer * self.rho + margin)[0]
        if near.size == 0:
            return out
        coords = c.chart.tau_inverse(y[near], check_ambiguity=False)
        r = (M.norm(coords.vector) / self.rho - self.inner) / (self.outer - self.inner)
        chi = bump(r)
        live = chi > 0
        if np.any(live):
            idx = near[live]
            u = c.velocity(coords.theta[live])
            out[idx] = chi[live, None] * M.project_tangent(y[idx], u)
        return out

    def _rk4(self, y, t0, t1, n, record=False):
        M = self.ambient
        h = (t1 - t0) / n
        y = np.array(y, dtype=float)
        path = [y.copy()] if record else None
        for k in range(n):
            t = t0 + k * h
            k1 = self.field(t, y)
            k2 = self.field(t + h / 2, M.project_to(y + h / 2 * k1))
            k3 = self.field(t + h / 2, M.project_to(y + h / 2 * k2))
            k4 = self.field(t + h, M.project_to(y + h * k3))
            step = h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            moved = np.any(step != 0.0, axis=-1)
            y[moved] = M.project_to(y[moved] + step[moved])
            if record:
                path.append(y.copy())
        return (y, path) if record else y

    def flow(self, seeds, t0=0.0, t1=1.0, record=False):
        """Flow seeds from t0 to t1; step count doubles until results settle to flow_tol."""
        if t1 == t0:
            y = np.array(np.atleast_2d(seeds), dtype=float)
            return (y, [y.copy()]) if record else y
        n = max(self.steps, self.tol.min_steps) if self.steps else self.tol.min_steps
        prev = self._rk4(seeds, t0, t1, n)
        while True:
            n *= 2
            if n > self.tol.max_steps:
                raise NoConvergence("flow step control exceeded max_steps")
            res = self._rk4(seeds, t0, t1, n, record)
            cur = res[0] if record else res
            if np.max(np.linalg.norm(cur - prev, axis=-1)) < self.tol.flow_tol:
                self.steps = max(self.steps, n // 2)
                return res
            prev = cur

    def tracking_error(self, steps=None):
        """max over step times and samples of |flow(F_0(x)) - F_t(x)|, with the step count used."""
        y, path = self.flow(self.family.position(0.0), record=True)
        n = len(path) - 1
        err = 0.0
        for k, yk in enumerate(path):
            err = max(err, float(np.max(np.linalg.norm(yk - self.family.position(k / n), axis=-1))))
        return err

    def jacobian_signs(self, probes, delta=1e-5):
        """Finite-difference Jacobian determinants of the time-1 map at probes."""
        M = self.ambient
        probes = np.atleast_2d(probes)
        P, N = probes.shape
        if M.kind == "flat":
            basis = np.broadcast_to(np.eye(N), (P, N, N))
        else:
            nu = M.unit_normals(probes)[..., 0]
            a = np.where(np.abs(nu[:, :1]) < 0.9, np.eye(N)[0], np.eye(N)[1])
            e1 = a - np.sum(a * nu, axis=-1, keepdims=True) * nu
            e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
            e2 = np.cross(nu, e1)
            basis = np.stack([e1, e2], axis=1)
        dim = basis.shape[1]
        seeds = [probes]
        for j in range(dim):
            seeds.append(M.project_to(probes + delta * basis[:, j]))
            seeds.append(M.project_to(probes - delta * basis[:, j]))
        out = self.flow(np.concatenate(seeds))
        img = out[:P]
        cols = [(out[(2 * j + 1) * P:(2 * j + 2) * P] - out[(2 * j + 2) * P:(2 * j + 3) * P]) / (2 * delta)
                for j in range(dim)]
        if M.kind == "flat":
            J = np.stack(cols, axis=-1)
            return np.linalg.det(J)
        nu_img = M.unit_normals(img)[..., 0]
        return np.linalg.det(np.stack([nu_img] + cols, axis=-1))

    def far_probes(self, probes, n_times=None):
        """Probes whose chord distance to every carrier exceeds outer * rho (with 5% margin)."""
        probes = np.atleast_2d(probes)
        n_times = n_times or 4 * max(self.steps, self.tol.min_steps)
        far = np.ones(len(probes), dtype=bool)
        for t in np.linspace(0.0, 1.0, n_times + 1):
            d, _, _ = _kernels.polyline_project(probes, self.family.position(t))
            far &= d > 1.05 * self.outer * self.rho
        return far


def extend_to_diffeotopy(family, n_radius_times=None):
    """AmbientFlow whose restriction to F_0(Sigma) tracks the family.

    The support radius is the minimum admissible tube radius of the
    carriers over a fine time grid, held constant in time.
    """
    M = family.source.ambient
    tol = M.tol
    ts = np.linspace(0.0, 1.0, n_radius_times or max(4 * (len(family.times) - 1), 16) + 1)
    rho = np.inf
    for t in ts:
        W = OrientedSubmanifold(M, family.position(t), family.source.orientation)
        r = tubular_radius(W)
        if r < tol.rho_min:
            raise TubeCollapse(f"tube radius {r:.3e} at t = {t:.4f} below rho_min")
        rho = min(rho, r)
    return AmbientFlow(family, float(rho))


def certify_tracking(flow):
    err = flow.tracking_error()
    if err >= flow.tol.track_tol:
        raise TrackingFailure(f"tracking error {err:.3e} >= track_tol")
    return err


# ---------------------------------------------------------------------------
# transitivity
# ---------------------------------------------------------------------------

def _aligned_target(src, target):
    """Target points index-aligned with src: the cyclic shift closest to src,
    traversed so that the blend keeps src's orientation convention."""
    m = src.m
    sgn = src.orientation * target.orientation
    u = sgn * grid(m)
    best = None
    for shift in np.linspace(0.0, TWO_PI, 4 * m, endpoint=False):
        pts = target.point(u + shift)
        cost = float(np.sum((pts - src.samples) ** 2))
        if best is None or cost < best[0]:
            best = (cost, pts)
    return best[1]


def find_path(sigma0, sigma1, max_hops=None):
    """Greedy chart hopping from sigma0 to sigma1 by index-aligned blending."""
    tol = sigma0.ambient.tol
    max_hops = max_hops or tol.max_hops
    M = sigma0.ambient
    nodes = [sigma0]
    charts = []
    attempts = 0
    lam_hint = 1.0
    while True:
        cur = nodes[-1]
        chart = TubularChart(cur)
        if chart_contains(chart, sigma1) is not None:
            nodes.append(sigma1)
            charts.append(chart)
            return GrassmannPath(nodes, charts)
        target = _aligned_target(cur, sigma1)
        lam = lam_hint
        while True:
            attempts += 1
            if attempts > max_hops:
                raise NoPathFound(f"no chain of charts found within {max_hops} attempts")
            try:
                mid = OrientedSubmanifold(M, M.project_to((1 - lam) * cur.samples + lam * target),
                                          cur.orientation)
                if chart_contains(chart, mid) is not None:
                    break
            except GrassmannianError:
                pass
            lam *= 0.5
        nodes.append(mid)
        charts.append(chart)
        lam_hint = min(1.0, 2 * lam) if lam < 1 else 1.0


@dataclass
class TransportResult:
    flow: AmbientFlow
    path: GrassmannPath
    image: OrientedSubmanifold
    hausdorff: float
    orientation: int
    ok: bool


def transport(sigma0, sigma1, path=None, transport_tol=None):
    """Diffeotopy carrying sigma0 onto sigma1, with its endpoint certificate."""
    tol = sigma0.ambient.tol
    transport_tol = tol.transport_tol if transport_tol is None else transport_tol
    if path is None:
        if same_oriented(sigma0, sigma1, tol.lift_tol):
            path = GrassmannPath([sigma0])
        else:
            path = find_path(sigma0, sigma1)
    gamma = lift_path(path)
    family = smooth_family_from_path(gamma)
    flow = extend_to_diffeotopy(family)
    end = flow.flow(sigma0.samples)
    image = OrientedSubmanifold(sigma0.ambient, end, sigma0.orientation)
    hd = hausdorff_distance(image, sigma1)
    sign = relative_orientation(image, sigma1)
    return TransportResult(flow, path, image, hd, sign, bool(hd < transport_tol and sign == 1))
