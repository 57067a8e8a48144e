"""Scenario configs, the experiments they name, and JSON reports.

A scenario is a mapping::

    id: offset-circles
    experiment: chart-transition
    ambient: {kind: flat, n: 2}
    resolution: 256
    seed: 42
    tolerances: {contain_tol: 1.0e-6}
    params: {...}

Every check in a report carries the value, the tolerance it was compared
against and the relation used, so no number in a report is unqualified.
Wall-clock timings are kept out of the report (see :func:`run_scenario`) so
that a fixed config and seed give byte-identical report files.
"""

import json
import math
import pathlib
import time
import zlib
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
import yaml

from . import atlas, bundle, isotopy
from .ambient import AmbientManifold, _sphere_exp
from .config import DEFAULT_TOLERANCES
from .errors import ConfigInvalid, GrassmannianError
from .generators import CURVES, make_curve, random_circle_diffeo_values, random_trig_coefficients, trig_profile
from .isotopy import ease
from .periodic import grid
from .submanifold import hausdorff_distance, relative_orientation
from .tubular import TubularChart

EXPERIMENTS = (
    "chart-transition",
    "projection-diff",
    "trivialize",
    "lift-path",
    "extend-isotopy",
    "transport",
    "verify-all",
)
# checks that only run inside a suite
SUITE_ONLY = ("geodesic", "metric-independence")
MIN_RESOLUTION = 16
U64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

@dataclass
class Scenario:
    id: str
    experiment: str
    ambient: dict
    resolution: int
    seed: int
    tolerances: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def manifold(self):
        return build_ambient(self.ambient, self.tol)

    @property
    def tol(self):
        return DEFAULT_TOLERANCES.with_overrides(**self.tolerances)

    def rng(self):
        """Counter-based generator keyed by (seed, scenario id)."""
        ss = np.random.SeedSequence([self.seed, zlib.crc32(self.id.encode())])
        return np.random.Generator(np.random.Philox(ss))


def build_ambient(spec, tol=DEFAULT_TOLERANCES):
    spec = dict(spec)
    kind = spec.get("kind", "flat")
    scale = float(spec.get("metric_scale", 1.0))
    if kind == "flat":
        return AmbientManifold.flat(int(spec.get("n", 2)), metric_scale=scale, tol=tol)
    if kind == "sphere":
        return AmbientManifold.sphere(int(spec.get("d", 2)), metric_scale=scale, tol=tol)
    if kind == "levelset":
        return AmbientManifold.level_set(spec["name"], *spec.get("params", []), metric_scale=scale, tol=tol)
    raise ValueError(f"unknown ambient kind {kind!r}")


_CURVE_KEYS = ("sigma", "sigma1", "sigma2", "source", "target")


def validate(raw, where="scenario", defaults=None):
    """Turn a raw mapping into a :class:`Scenario`, or raise ConfigInvalid."""
    defaults = defaults or {}
    if not isinstance(raw, dict):
        raise ConfigInvalid(where, "expected a mapping")
    known = {"id", "experiment", "ambient", "resolution", "seed", "tolerances", "params"}
    extra = set(raw) - known
    if extra:
        raise ConfigInvalid(f"{where}.{sorted(extra)[0]}", "unknown field")
    exp = raw.get("experiment")
    if exp not in EXPERIMENTS + SUITE_ONLY or exp == "verify-all":
        raise ConfigInvalid(f"{where}.experiment", f"unknown experiment {exp!r}")
    sid = raw.get("id", exp)
    if not isinstance(sid, str) or not sid:
        raise ConfigInvalid(f"{where}.id", "expected a non-empty string")
    m = raw.get("resolution", defaults.get("resolution", 128))
    if isinstance(m, bool) or not isinstance(m, int):
        raise ConfigInvalid(f"{where}.resolution", "expected an integer")
    if m < MIN_RESOLUTION:
        raise ConfigInvalid(f"{where}.resolution", f"resolution {m} < {MIN_RESOLUTION}")
    seed = raw.get("seed", defaults.get("seed", 0))
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= U64:
        raise ConfigInvalid(f"{where}.seed", "expected an unsigned 64-bit integer")
    tols = raw.get("tolerances", {}) or {}
    if not isinstance(tols, dict):
        raise ConfigInvalid(f"{where}.tolerances", "expected a mapping")
    try:
        tol = DEFAULT_TOLERANCES.with_overrides(**tols)
    except KeyError as exc:
        raise ConfigInvalid(f"{where}.tolerances", str(exc.args[0])) from None
    except TypeError as exc:
        raise ConfigInvalid(f"{where}.tolerances", str(exc)) from None
    amb = raw.get("ambient", {"kind": "flat", "n": 2})
    try:
        build_ambient(amb, tol)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigInvalid(f"{where}.ambient", str(exc)) from None
    params = raw.get("params", {}) or {}
    if not isinstance(params, dict):
        raise ConfigInvalid(f"{where}.params", "expected a mapping")
    for key in _CURVE_KEYS:
        if key in params:
            spec = params[key]
            if not isinstance(spec, dict) or spec.get("name") not in CURVES:
                raise ConfigInvalid(f"{where}.params.{key}.name", f"unknown generator {spec!r}")
    for i, spec in enumerate(params.get("nodes", []) or []):
        if not isinstance(spec, dict) or spec.get("name") not in CURVES:
            raise ConfigInvalid(f"{where}.params.nodes[{i}].name", "unknown generator")
    return Scenario(sid, exp, dict(amb), m, seed, dict(tols), dict(params))


def load_config(path):
    """Read a YAML config: one scenario mapping, or ``{seed, resolution, scenarios: [...]}``."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigInvalid(str(path), exc.strerror or str(exc)) from None
    except yaml.YAMLError as exc:
        raise ConfigInvalid(str(path), f"not valid YAML: {exc}") from None
    return parse_config(raw)


def parse_config(raw):
    if raw is None:
        return []
    if isinstance(raw, dict) and "scenarios" in raw:
        defaults = {k: raw[k] for k in ("seed", "resolution") if k in raw}
        items = raw["scenarios"] or []
        if not isinstance(items, list):
            raise ConfigInvalid("scenarios", "expected a list")
        out = [validate(s, f"scenarios[{i}]", defaults) for i, s in enumerate(items)]
    else:
        out = [validate(raw)]
    ids = [s.id for s in out]
    if len(set(ids)) != len(ids):
        raise ConfigInvalid("scenarios", "scenario ids must be unique")
    return out


def default_suite():
    text = resources.files("grassmannian").joinpath("default_suite.yaml").read_text()
    return parse_config(yaml.safe_load(text))


# ---------------------------------------------------------------------------
# checks and helpers
# ---------------------------------------------------------------------------

def check(name, value, tolerance, relation="<"):
    value = float(value)
    ok = {"<": value < tolerance, "<=": value <= tolerance,
          ">": value > tolerance, ">=": value >= tolerance, "==": value == tolerance}[relation]
    return {"name": name, "value": _num(value), "tolerance": _num(tolerance), "relation": relation,
            "passed": bool(ok)}


def _num(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def random_section(sigma, rng, sup, modes=3):
    """Normal section with coefficient profile a random trig polynomial of sup norm ``sup``."""
    theta = sigma.parameter_grid
    r = sigma.normals.shape[-1]
    coef = random_trig_coefficients(rng, modes, r)
    prof = np.stack([trig_profile(c, theta) for c in coef], axis=-1)
    prof *= sup / np.max(np.linalg.norm(prof, axis=-1))
    scale = 1.0 / np.sqrt(sigma.ambient.metric_scale)
    return atlas.NormalSection.from_coefficients(sigma, prof * scale * 0.999999)


def _curve(sc, M, key, default):
    return make_curve(M, sc.resolution, sc.params.get(key, default))


def _order(errors, floor):
    """Smallest observed order over successive halvings; errors below floor count as exact."""
    orders = []
    for a, b in zip(errors[:-1], errors[1:]):
        if a < floor and b < floor:
            continue
        orders.append(math.log2(a / max(b, 1e-300)))
    return min(orders) if orders else math.inf


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def exp_chart_transition(sc):
    M = sc.manifold()
    p = sc.params
    s1 = _curve(sc, M, "sigma1", {"name": "circle"})
    s2 = _curve(sc, M, "sigma2", {"name": "circle", "center": [0.1, 0.0]})
    c1 = TubularChart(s1)
    c2 = TubularChart(s2, radius=p.get("chart2_radius"))
    rng = sc.rng()
    set_tol = float(p.get("set_tol", 1e-6))
    worst = 0.0
    if "section" in p:
        spec = p["section"]
        theta = s1.parameter_grid
        coef = float(spec.get("amplitude", 0.1)) * np.cos(int(spec.get("mode", 1)) * theta)
        sections = [atlas.NormalSection.from_coefficients(s1, coef)]
    else:
        sup = float(p.get("amplitude", 0.3)) * c1.radius
        sections = [random_section(s1, rng, sup, int(p.get("modes", 3))) for _ in range(int(p.get("trials", 20)))]
    for s in sections:
        cp = atlas.ChartPoint(c1, s)
        cp2 = atlas.transition(cp, c2)
        worst = max(worst, hausdorff_distance(atlas.chart_apply(cp), atlas.chart_apply(cp2)))
    corr = atlas.correspondence(cp, c2)
    coef = cp2.section.coefficients
    art = {"transition.csv": (["theta2"] + [f"s{j}" for j in range(coef.shape[1])] + ["derivative"],
                              np.column_stack([s2.parameter_grid, coef, corr.derivative]))}
    return [check("max_set_consistency_hausdorff", worst, set_tol)], art


FAMILIES = ("radial", "rotational", "translational")


def analytic_family(kind, sigma, center=(0.0, 0.0)):
    """Nonlinear-in-time planar families used for the differential check.

    radial: c + (1 + 0.5 sin t)(x - c); rotational: rotation by sin t + t
    about c; translational: x + (0.5 sin t, 0).
    """
    x = sigma.samples - np.asarray(center, dtype=float)
    c = np.asarray(center, dtype=float)
    if kind == "radial":
        pos = lambda t: c + (1 + 0.5 * np.sin(t)) * x
        vel = lambda t: 0.5 * np.cos(t) * x
    elif kind == "rotational":
        def pos(t):
            a = np.sin(t) + t
            R = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
            return c + x @ R.T

        def vel(t):
            a, da = np.sin(t) + t, np.cos(t) + 1
            dR = np.array([[-np.sin(a), -np.cos(a)], [np.cos(a), -np.sin(a)]])
            return da * (x @ dR.T)
    elif kind == "translational":
        pos = lambda t: sigma.samples + np.array([0.5 * np.sin(t), 0.0])
        vel = lambda t: np.broadcast_to(np.array([0.5 * np.cos(t), 0.0]), x.shape).copy()
    else:
        raise ValueError(kind)
    return bundle.EmbeddingFamily(sigma, [0.0, 1.0], position=pos, velocity=vel)


def projection_fd_errors(family, t0, hs):
    """|(chart coords of p(f_{t0+h}) - p(f_{t0-h})) / 2h - (df/dt)^perp| for each h."""
    target = bundle.project_p_differential(family, t0)
    W = target.base
    chart = TubularChart(W)
    errs = []
    for h in hs:
        sp = atlas.chart_contains(chart, bundle.project_p(family.embedding(t0 + h)))
        sm = atlas.chart_contains(chart, bundle.project_p(family.embedding(t0 - h)))
        if sp is None or sm is None:
            raise GrassmannianError(f"p(f_t) left the chart at h = {h}")
        fd = (sp.vectors - sm.vectors) / (2 * h)
        errs.append(float(np.max(np.abs(fd - target.vectors))))
    return errs, target


def exp_projection_diff(sc):
    M = sc.manifold()
    p = sc.params
    sigma = _curve(sc, M, "sigma", {"name": "circle"})
    center = p.get("center", [0.0, 0.0])
    t0 = float(p.get("t0", 0.3))
    hs = [float(h) for h in p.get("hs", [1e-2, 5e-3, 2.5e-3])]
    min_order = float(p.get("min_order", 1.9))
    floor = float(p.get("exact_floor", 1e-11))
    checks, art = [], {}
    for kind in p.get("families", list(FAMILIES)):
        fam = analytic_family(kind, sigma, center)
        errs, target = projection_fd_errors(fam, t0, hs)
        checks.append(check(f"{kind}_observed_order", _order(errs, floor), min_order, ">="))
        if kind == "rotational":
            checks.append(check("rotational_zero_section", target.sup_norm, float(p.get("zero_tol", 1e-9))))
    return checks, art


def exp_trivialize(sc):
    M = sc.manifold()
    p = sc.params
    sigma = _curve(sc, M, "sigma", {"name": "circle"})
    chart = TubularChart(sigma)
    rng = sc.rng()
    m = sigma.m
    f = bundle.act(bundle.DiscreteEmbedding.inclusion(sigma),
                   bundle.CircleDiffeo(random_circle_diffeo_values(rng, m, 0.2)))
    recon = equiv = round1 = round2 = 0.0
    gauges = None
    for _ in range(int(p.get("trials", 20))):
        s = random_section(sigma, rng, float(p.get("amplitude", 0.3)) * chart.radius)
        cp = atlas.ChartPoint(chart, s)
        phi = bundle.CircleDiffeo(random_circle_diffeo_values(rng, m, float(p.get("diffeo_amplitude", 0.2))))
        g = bundle.trivialize_inverse(cp, phi, f)
        cp_g, lam = bundle.trivialize(g, f, chart)
        # trivialize o trivialize_inverse
        round1 = max(round1, float(np.max(np.abs(cp_g.section.vectors - s.vectors))), lam.distance(phi))
        # reconstruction sigma(p(g)) o Lambda(g) = g
        back = bundle.act(bundle.local_section(cp_g, f), lam)
        recon = max(recon, float(np.max(np.linalg.norm(back.images - g.images, axis=-1))))
        # trivialize_inverse o trivialize
        g2 = bundle.trivialize_inverse(*bundle.trivialize(g, f, chart), f)
        round2 = max(round2, float(np.max(np.linalg.norm(g2.images - g.images, axis=-1))))
        # equivariance Psi(g o psi) = (p(g), Lambda(g) o psi)
        psi = bundle.CircleDiffeo(random_circle_diffeo_values(rng, m, float(p.get("diffeo_amplitude", 0.2))))
        cp_h, lam_h = bundle.trivialize(bundle.act(g, psi), f, chart)
        equiv = max(equiv, float(np.max(np.abs(cp_h.section.vectors - cp_g.section.vectors))),
                    lam_h.distance(lam.compose(psi)))
        gauges = lam
    art = {"gauge.csv": (["parameter", "gauge"], np.stack([grid(m), gauges.values], axis=-1))}
    return [
        check("reconstruction_max_error", recon, float(p.get("recon_tol", 1e-8))),
        check("equivariance_max_error", equiv, float(p.get("equiv_tol", 1e-9))),
        check("roundtrip_pairs_max_error", round1, float(p.get("roundtrip_tol", 1e-8))),
        check("roundtrip_embeddings_max_error", round2, float(p.get("roundtrip_tol", 1e-8))),
    ], art


def _path(sc, M, s0, s1):
    nodes = sc.params.get("nodes")
    if nodes:
        mids = [make_curve(M, sc.resolution, n) for n in nodes]
        return isotopy.GrassmannPath([s0] + mids + [s1])
    return isotopy.find_path(s0, s1)


def exp_lift_path(sc):
    M = sc.manifold()
    tol = sc.tol
    s0 = _curve(sc, M, "source", {"name": "circle"})
    s1 = _curve(sc, M, "target", {"name": "ellipse", "a": 1.2, "b": 0.9})
    gamma = isotopy.lift_path(_path(sc, M, s0, s1))
    start = float(np.max(np.linalg.norm(gamma.position(0.0) - s0.samples, axis=-1)))
    end = bundle.project_p(gamma.embedding(1.0))
    hd = hausdorff_distance(end, s1)
    art = {"endpoint.csv": (["parameter"] + [f"x{i}" for i in range(M.dim_ambient)],
                            np.column_stack([s0.parameter_grid, end.samples]))}
    return [
        check("start_is_inclusion", start, tol.lift_tol),
        check("endpoint_hausdorff", hd, tol.lift_tol),
        check("endpoint_orientation", relative_orientation(end, s1), 1, "=="),
        check("segments", gamma.K, 1, ">="),
    ], art


def probe_points(flow, sigma, rng_count=16, box=9):
    """Probe set: points at +-half the support radius along normals, plus a box grid."""
    M = sigma.ambient
    idx = np.linspace(0, sigma.m, rng_count, endpoint=False).astype(int)
    n = sigma.normals[idx, :, 0]
    ring = [M.exp(sigma.samples[idx], lev * flow.rho * n) for lev in (-0.5, 0.5)]
    pts = np.concatenate(ring)
    if M.kind == "flat" and M.dim_ambient == 2:
        lo = sigma.samples.min(axis=0) - 1.0
        hi = sigma.samples.max(axis=0) + 1.0
        gx, gy = np.meshgrid(np.linspace(lo[0], hi[0], box), np.linspace(lo[1], hi[1], box))
        pts = np.concatenate([pts, np.stack([gx.ravel(), gy.ravel()], axis=-1)])
    return pts


def flow_checks(flow, sigma, target=None, endpoint_tol=None):
    tol = flow.tol
    checks = [check("tracking_error", flow.tracking_error(), tol.track_tol)]
    probes = probe_points(flow, sigma)
    far = flow.far_probes(probes)
    moved = flow.flow(probes)
    if np.any(far):
        checks.append(check("far_probes_moved", int(np.sum(np.any(moved[far] != probes[far], axis=-1))), 0, "=="))
    near = probes[~far]
    jac = flow.jacobian_signs(near) if len(near) else np.array([np.inf])
    checks.append(check("min_jacobian_determinant", float(np.min(jac)), 0.0, ">"))
    if target is not None:
        img = bundle.OrientedSubmanifold(sigma.ambient, flow.flow(sigma.samples), sigma.orientation)
        checks.append(check("endpoint_hausdorff", hausdorff_distance(img, target), endpoint_tol))
        checks.append(check("endpoint_orientation", relative_orientation(img, target), 1, "=="))
    return checks


def eased_family(kind, sigma, p):
    """Analytic eased families for isotopy extension."""
    x = sigma.samples
    M = sigma.ambient
    if kind == "constant":
        return bundle.EmbeddingFamily(sigma, [0.0, 1.0], position=lambda t: x.copy(),
                                      velocity=lambda t: np.zeros_like(x)), sigma
    if kind == "translation":
        d = np.asarray(p.get("offset", [0.5, 0.0]), dtype=float)
        fam = bundle.EmbeddingFamily(sigma, np.linspace(0, 1, 9),
                                     position=lambda t: x + ease(t)[0] * d,
                                     velocity=lambda t: np.broadcast_to(ease(t)[1] * d, x.shape).copy())
        return fam, bundle.OrientedSubmanifold(M, x + d, sigma.orientation)
    if kind == "radial":
        c = np.asarray(p.get("center", [0.0, 0.0]), dtype=float)
        k = float(p.get("scale", 1.3)) - 1.0
        fam = bundle.EmbeddingFamily(sigma, np.linspace(0, 1, 9),
                                     position=lambda t: c + (1 + k * ease(t)[0]) * (x - c),
                                     velocity=lambda t: k * ease(t)[1] * (x - c))
        return fam, bundle.OrientedSubmanifold(M, c + (1 + k) * (x - c), sigma.orientation)
    raise ValueError(f"unknown family {kind!r}")


def exp_extend_isotopy(sc):
    M = sc.manifold()
    p = sc.params
    sigma = _curve(sc, M, "sigma", {"name": "circle"})
    fam, target = eased_family(p.get("family", "translation"), sigma, p)
    flow = isotopy.extend_to_diffeotopy(fam)
    return flow_checks(flow, sigma, target, float(p.get("endpoint_tol", 1e-6))), {}


def exp_transport(sc):
    M = sc.manifold()
    p = sc.params
    tol = sc.tol
    s0 = _curve(sc, M, "source", {"name": "circle"})
    s1 = _curve(sc, M, "target", {"name": "ellipse", "a": 1.2, "b": 0.9, "center": [0.3, 0.1]})
    path = _path(sc, M, s0, s1) if p.get("nodes") else None
    res = isotopy.transport(s0, s1, path=path, transport_tol=float(p.get("transport_tol", tol.transport_tol)))
    checks = [
        check("endpoint_hausdorff", res.hausdorff, float(p.get("transport_tol", tol.transport_tol))),
        check("endpoint_orientation", res.orientation, 1, "=="),
    ]
    checks += [c for c in flow_checks(res.flow, s0) if not c["name"].startswith("endpoint")]
    art = {"image.csv": (["parameter"] + [f"x{i}" for i in range(M.dim_ambient)],
                         np.column_stack([s0.parameter_grid, res.image.samples]))}
    return checks, art


def geodesic_errors(M, x, v, steps):
    exact = _sphere_exp(x, v)
    return [float(np.max(np.linalg.norm(M.exp(x, v, steps=n) - exact, axis=-1))) for n in steps]


def exp_geodesic(sc):
    """ODE exponential on the implicit unit sphere against great circles."""
    p = sc.params
    M = AmbientManifold.level_set("sphere", 1.0, tol=sc.tol)
    rng = sc.rng()
    k = int(p.get("points", 10))
    x = rng.normal(size=(k, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    v = rng.normal(size=(k, 3))
    v -= np.sum(v * x, axis=1, keepdims=True) * x
    v *= rng.uniform(0.2, float(p.get("max_speed", 1.5)), (k, 1)) / np.linalg.norm(v, axis=1, keepdims=True)
    default = float(np.max(np.linalg.norm(M.exp(x, v) - _sphere_exp(x, v), axis=-1)))
    steps = [int(s) for s in p.get("steps", [8, 16, 32, 64])]
    order = _order(geodesic_errors(M, x, v, steps), 0.0)
    return [
        check("default_steps_error", default, float(p.get("error_tol", 1e-8))),
        check("observed_rk4_order", order, float(p.get("min_order", 3.7)), ">="),
    ], {}


def exp_metric_independence(sc):
    """Chart images under g and c g coincide as point sets."""
    p = sc.params
    c = float(p.get("scale", 4.0))
    amb = dict(sc.ambient)
    M1 = build_ambient({**amb, "metric_scale": 1.0}, sc.tol)
    Mc = build_ambient({**amb, "metric_scale": c}, sc.tol)
    spec = sc.params.get("sigma", {"name": "ellipse", "a": 1.3, "b": 0.8} if M1.kind == "flat"
                         else {"name": "latitude", "height": 0.2})
    s1 = make_curve(M1, sc.resolution, spec)
    sc_ = make_curve(Mc, sc.resolution, spec)
    ch1, chc = TubularChart(s1), TubularChart(sc_)
    rng = sc.rng()
    worst = back = 0.0
    for _ in range(int(p.get("trials", 10))):
        s = random_section(s1, rng, 0.3 * ch1.radius)
        img1 = atlas.chart_apply(atlas.ChartPoint(ch1, s))
        sec_c = atlas.NormalSection(sc_, s.vectors, check=False)
        imgc = atlas.chart_apply(atlas.ChartPoint(chc, sec_c))
        worst = max(worst, hausdorff_distance(img1, imgc))
        found = atlas.chart_contains(chc, img1)
        back = max(back, np.inf if found is None else float(np.max(np.abs(found.vectors - s.vectors))))
    tol = float(p.get("set_tol", 1e-9))
    return [check("image_hausdorff", worst, tol), check("section_recovery", back, tol)], {}


RUNNERS = {
    "chart-transition": exp_chart_transition,
    "projection-diff": exp_projection_diff,
    "trivialize": exp_trivialize,
    "lift-path": exp_lift_path,
    "extend-isotopy": exp_extend_isotopy,
    "transport": exp_transport,
    "geodesic": exp_geodesic,
    "metric-independence": exp_metric_independence,
}


# ---------------------------------------------------------------------------
# running and reporting
# ---------------------------------------------------------------------------

@dataclass
class Outcome:
    report: dict
    artifacts: dict
    seconds: float


def run_scenario(sc):
    """Run one scenario; module errors become a failed entry, never an exception."""
    start = time.perf_counter()
    error = None
    checks, art = [], {}
    try:
        checks, art = RUNNERS[sc.experiment](sc)
    except GrassmannianError as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
    passed = error is None and all(c["passed"] for c in checks)
    report = {
        "id": sc.id,
        "experiment": sc.experiment,
        "resolution": sc.resolution,
        "seed": sc.seed,
        "tolerance_overrides": {k: _num(v) for k, v in sorted(sc.tolerances.items())},
        "checks": checks,
        "error": error,
        "passed": passed,
    }
    return Outcome(report, art, time.perf_counter() - start)


def verify_suite(scenarios):
    """Run every scenario; entries are sorted by id so assembly order does not matter."""
    outcomes = sorted((run_scenario(s) for s in scenarios), key=lambda o: o.report["id"])
    reports = [o.report for o in outcomes]
    summary = {
        "scenarios": len(reports),
        "failed": sorted(r["id"] for r in reports if not r["passed"]),
        "passed": all(r["passed"] for r in reports),
    }
    return {"summary": summary, "scenarios": reports}, outcomes


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_outputs(out_dir, report, outcomes):
    """report.json, timings.json and per-scenario CSV artifacts."""
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(dumps(report))
    timings = {o.report["id"]: round(o.seconds, 4) for o in outcomes}
    (out / "timings.json").write_text(json.dumps(timings, sort_keys=True, indent=2) + "\n")
    for o in outcomes:
        for name, (header, rows) in sorted(o.artifacts.items()):
            path = out / f"{o.report['id']}__{name}"
            np.savetxt(path, np.asarray(rows), delimiter=",", header=",".join(header), comments="",
                       fmt="%.17g")
