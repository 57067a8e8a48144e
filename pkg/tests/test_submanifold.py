import numpy as np
import pytest

from grassmannian import build_submanifold, hausdorff_distance, orientation_sign, reverse_orientation
from grassmannian.errors import NotBijective, OffManifold, SelfIntersection, TooFewSamples
from grassmannian.generators import circle, circle_points, ellipse, latitude, limacon_points
from grassmannian.periodic import grid
from grassmannian.submanifold import read_csv, relative_orientation, write_csv


def test_circle_frames(flat2):
    S = circle(flat2, 64)
    t = S.parameter_grid
    np.testing.assert_allclose(S.tangents, np.stack([-np.sin(t), np.cos(t)], -1), atol=1e-6)
    np.testing.assert_allclose(S.normals[:, :, 0], np.stack([np.cos(t), np.sin(t)], -1), atol=1e-6)


def test_equator_normal(equator):
    n = equator.normals[:, :, 0]
    assert np.max(np.abs(n[:, :2])) < 1e-6
    assert np.allclose(np.abs(n[:, 2]), 1, atol=1e-6)


def test_frames_orthonormal(sphere2):
    L = latitude(sphere2, 64, 0.4)
    t, n = L.tangents, L.normals[:, :, 0]
    nu = L.samples
    for a, b, val in [(t, t, 1), (n, n, 1), (t, n, 0), (t, nu, 0), (n, nu, 0)]:
        assert np.max(np.abs(np.sum(a * b, 1) - val)) < 1e-9


def test_invalid_samples(flat2, sphere2):
    with pytest.raises(SelfIntersection):
        build_submanifold(flat2, limacon_points(48))
    with pytest.raises(TooFewSamples):
        build_submanifold(flat2, circle_points(8))
    t = grid(32)
    with pytest.raises(OffManifold):
        build_submanifold(sphere2, 1.1 * np.stack([np.cos(t), np.sin(t), 0 * t], -1))


def test_reverse_orientation(unit_circle):
    R = reverse_orientation(unit_circle)
    assert R.orientation == -1 and hausdorff_distance(R, unit_circle) < 1e-12
    RR = reverse_orientation(R)
    assert RR.orientation == 1 and np.array_equal(RR.samples, unit_circle.samples)
    assert orientation_sign(unit_circle, R, unit_circle.parameter_grid) == -1


def test_orientation_sign_examples(unit_circle):
    t = unit_circle.parameter_grid
    assert orientation_sign(unit_circle, unit_circle, t) == 1
    assert orientation_sign(unit_circle, unit_circle, -t) == -1
    assert orientation_sign(unit_circle, unit_circle, t + 0.3) == 1
    with pytest.raises(NotBijective):
        orientation_sign(unit_circle, unit_circle, 2 * t)


def test_hausdorff_examples(flat2):
    A = circle(flat2, 256)
    assert hausdorff_distance(A, A) < 1e-12
    B = circle(flat2, 256, radius=1.2)
    assert abs(hausdorff_distance(A, B) - 0.2) < 1e-3
    C = circle(flat2, 256, phase=0.5 * 2 * np.pi / 256)
    assert hausdorff_distance(A, C) < 1e-4


def test_hausdorff_symmetric_and_triangle(flat2, rng):
    for _ in range(5):
        curves = [ellipse(flat2, 64, *rng.uniform(0.8, 1.4, 2), center=rng.uniform(-0.2, 0.2, 2),
                          angle=rng.uniform(0, 3)) for _ in range(3)]
        a, b, c = curves
        dab, dba = hausdorff_distance(a, b), hausdorff_distance(b, a)
        assert dab == pytest.approx(dba, abs=1e-12)
        assert hausdorff_distance(a, c) <= dab + hausdorff_distance(b, c) + 1e-12


def test_resolution_stability(flat2):
    E1, E2 = ellipse(flat2, 64, 1.3, 0.8), ellipse(flat2, 128, 1.3, 0.8)
    assert np.max(np.abs(E1.tangents - E2.tangents[::2])) < 1e-8


def test_relative_orientation_of_reflection(unit_circle, flat2):
    refl = build_submanifold(flat2, unit_circle.samples * [1, -1])
    assert relative_orientation(refl, unit_circle) == -1


def test_csv_roundtrip(tmp_path, flat2):
    E = reverse_orientation(ellipse(flat2, 32, 1.2, 0.9))
    write_csv(E, tmp_path / "e.csv")
    F = read_csv(flat2, tmp_path / "e.csv")
    assert F.orientation == -1 and np.array_equal(F.samples, E.samples)
