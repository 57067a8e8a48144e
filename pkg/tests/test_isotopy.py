import numpy as np
import pytest

from grassmannian import TubularChart, hausdorff_distance
from grassmannian.bundle import project_p
from grassmannian.errors import NoPathFound, SourceMismatch
from grassmannian.generators import circle, ellipse
from grassmannian.isotopy import (EmbeddingPath, GrassmannPath, concat_paths, ease, extend_to_diffeotopy, find_path,
                                  lift_path, smooth_family_from_path, transport, velocity_fd_error)
from grassmannian.scenarios import eased_family, flow_checks
from grassmannian.submanifold import OrientedSubmanifold, relative_orientation


def test_ease():
    t = np.linspace(0, 1, 101)
    e, de = ease(t)
    assert e[0] == 0 and e[-1] == 1 and de[0] == 0 and de[-1] == 0
    assert np.all(np.diff(e) > 0)
    h = 1e-6
    assert np.max(np.abs((ease(t[1:-1] + h)[0] - ease(t[1:-1] - h)[0]) / (2 * h) - de[1:-1])) < 1e-8


def test_concat_constant(unit_circle):
    c = EmbeddingPath.constant(unit_circle)
    both = concat_paths(c, c)
    assert both.K == 2
    for t in (0, 0.3, 0.5, 1):
        assert np.array_equal(both.position(t), unit_circle.samples)


def test_concat_radial_then_translation(flat2):
    S = circle(flat2, 128)
    beta = lift_path(GrassmannPath([S, circle(flat2, 128, radius=1.2)]))
    W = OrientedSubmanifold(flat2, beta.position(1.0), 1)
    beta_t = lift_path(GrassmannPath([W, OrientedSubmanifold(flat2, W.samples + [0.3, 0], 1)]))
    gamma = concat_paths(beta, beta_t)
    assert gamma.K == 2 and np.allclose(gamma.markers, [0.5])
    end = project_p(gamma.embedding(1.0))
    assert hausdorff_distance(end, circle(flat2, 256, center=(0.3, 0), radius=1.2)) < 1e-4
    assert np.max(np.abs(np.linalg.norm(end.samples - [0.3, 0], axis=1) - 1.2)) < 1e-9
    assert np.max(np.abs(gamma.position(0.5) - beta.position(1.0))) < 1e-12
    with pytest.raises(SourceMismatch):
        concat_paths(beta, EmbeddingPath.constant(S))


def test_lift_examples(flat2):
    S = circle(flat2, 128)
    single = lift_path(GrassmannPath([S]))
    assert np.array_equal(single.position(1.0), S.samples)
    big = circle(flat2, 128, radius=1.3)
    gamma = lift_path(GrassmannPath([S, big]))
    assert np.max(np.abs(gamma.position(0.0) - S.samples)) == 0
    assert hausdorff_distance(project_p(gamma.embedding(1.0)), big) < 1e-6
    for t in (0.25, 0.6, 1.0):
        assert np.max(np.abs(gamma.position(t) - (1 + 0.3 * t) * S.samples)) < 1e-10
    E = ellipse(flat2, 128, 1.2, 0.9)
    gamma = lift_path(GrassmannPath([S, ellipse(flat2, 128, 1.1, 0.95), E]))
    assert gamma.K == 2
    end = project_p(gamma.embedding(1.0))
    assert hausdorff_distance(end, E) < 1e-6 and relative_orientation(end, E) == 1


def test_smooth_family(flat2):
    S = circle(flat2, 128)
    gamma = lift_path(GrassmannPath([S, circle(flat2, 128, radius=1.3)]))
    fam = smooth_family_from_path(gamma)
    for t in (0.1, 0.4, 0.77):
        np.testing.assert_allclose(fam.velocity(t), 0.3 * ease(t)[1] * S.samples, atol=1e-12)
    assert velocity_fd_error(fam, np.linspace(0.05, 0.95, 7)) < 1e-6

    two = lift_path(GrassmannPath([S, circle(flat2, 128, radius=1.2), circle(flat2, 128, radius=1.4)]))
    fam2 = smooth_family_from_path(two)
    assert np.allclose(fam2.markers, [0.5])
    for t in (0.0, 0.5, 1.0):
        assert np.max(np.abs(fam2.velocity(t))) == 0
    assert fam2.fd_error < 1e-8 and fam.fd_error < flat2.tol.fd_tol
    # near the corner r(0.5 +- d) - 1.2 = +-0.2 e(2|d|): the quartic part is not
    # smooth across d = 0 and the 4th-order stencil misses by 16 B h^3 / 12
    # (B = 15 * 2^4 * 0.2), less 4 C h^4 from the quintic part (C = 6 * 2^5 * 0.2)
    h = 1e-3
    B, C = 48.0, 38.4
    fd = velocity_fd_error(fam2, [0.5], h=h)
    assert fd == pytest.approx(16 * B * h ** 3 / 12 - 4 * C * h ** 4, rel=1e-5)
    const = smooth_family_from_path(EmbeddingPath.constant(S))
    assert np.max(np.abs(const.velocity(0.3))) == 0


def test_extend_constant_is_identity(unit_circle):
    fam, _ = eased_family("constant", unit_circle, {})
    flow = extend_to_diffeotopy(fam)
    pts = np.random.default_rng(0).uniform(-2, 2, (50, 2))
    assert np.array_equal(flow.flow(pts), pts)


@pytest.mark.parametrize("kind,params,tol", [("translation", {"offset": [0.5, 0.0]}, 1e-6),
                                             ("radial", {"scale": 1.3}, 1e-5)])
def test_extend_families(flat2, kind, params, tol):
    S = circle(flat2, 64)
    fam, target = eased_family(kind, S, params)
    checks = {c["name"]: c for c in flow_checks(extend_to_diffeotopy(fam), S, target, tol)}
    for name in ("tracking_error", "min_jacobian_determinant", "endpoint_hausdorff", "endpoint_orientation"):
        assert checks[name]["passed"], checks[name]
    assert checks["far_probes_moved"]["value"] == 0


def test_flow_group_property(flat2):
    S = circle(flat2, 64)
    fam, _ = eased_family("radial", S, {"scale": 1.3})
    flow = extend_to_diffeotopy(fam)
    n = S.normals[::8, :, 0]
    pts = np.concatenate([S.samples[::8] + 0.2 * flow.rho * n, S.samples[::8] - 0.3 * flow.rho * n])
    half = flow.flow(pts, 0.0, 0.5)
    assert np.max(np.abs(flow.flow(half, 0.5, 1.0) - flow.flow(pts))) < 1e-7
    # running backwards inverts the map
    assert np.max(np.abs(flow.flow(flow.flow(pts), 1.0, 0.0) - pts)) < 1e-7


def test_transport_examples(flat2):
    S = circle(flat2, 64)
    same = transport(S, S)
    assert same.ok and same.hausdorff < 1e-12 and len(same.path) == 1
    big = transport(S, circle(flat2, 64, radius=1.3), transport_tol=1e-4)
    assert big.ok and big.orientation == 1
    E = ellipse(flat2, 64, 1.2, 0.9, center=(0.3, 0.1))
    res = transport(S, E)
    assert res.ok and res.hausdorff < 1e-3


def test_find_path_gives_up(flat2):
    S = circle(flat2, 64)
    far = circle(flat2, 64, center=(4.0, 0.0))
    with pytest.raises(NoPathFound):
        find_path(S, far, max_hops=2)
    path = find_path(S, ellipse(flat2, 64, 1.2, 0.9, center=(0.3, 0.1)))
    for chart, (a, b) in zip(path.charts, path.sections):
        assert isinstance(chart, TubularChart) and a.sup_norm < chart.radius and b.sup_norm < chart.radius
