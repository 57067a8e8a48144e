"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and ``GRASSMANNIAN_DISABLE_NUMBA``
is unset (or ``0``). Both paths are always importable as ``numpy_impl`` and
``numba_impl`` so tests and benchmarks can compare them directly.
"""

import os
import types

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _env_disabled():
    return os.environ.get("GRASSMANNIAN_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _np_fourier_eval(coefs, theta, deriv):
    """Evaluate ``Re sum_k coefs[k] (i k)^deriv exp(i k theta)``.

    coefs : (K, d) complex, theta : (P,) float -> (P, d) float
    """
    k = np.arange(coefs.shape[0], dtype=float)
    c = coefs * ((1j * k) ** deriv)[:, None] if deriv else coefs
    phase = np.exp(1j * np.outer(theta, k))
    return (phase @ c).real


def _np_fourier_eval012(coefs, theta):
    """Value, first and second derivative at once: (3, P, d)."""
    k = np.arange(coefs.shape[0], dtype=float)
    phase = np.exp(1j * np.outer(theta, k))
    return np.stack([(phase @ (coefs * ((1j * k) ** q)[:, None])).real for q in range(3)])


def _np_polyline_project(points, verts):
    """Nearest point on the closed polyline through ``verts`` for each point.

    Returns (distance, segment index, fraction along the segment).
    """
    a = verts
    b = np.roll(verts, -1, axis=0)
    ab = b - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    ap = points[:, None, :] - a[None, :, :]
    t = np.einsum("pij,ij->pi", ap, ab) / ab2[None, :]
    np.clip(t, 0.0, 1.0, out=t)
    diff = ap - t[:, :, None] * ab[None, :, :]
    d2 = np.einsum("pij,pij->pi", diff, diff)
    seg = np.argmin(d2, axis=1)
    rows = np.arange(points.shape[0])
    return np.sqrt(d2[rows, seg]), seg, t[rows, seg]


def _np_reach_estimate(samples, normals):
    """min over non-adjacent (i, j) of |x_j - x_i|^2 / (2 |P_N(x_i) (x_j - x_i)|).

    normals : (m, N, r) orthonormal normal frame at each sample (ambient dot).
    """
    m = samples.shape[0]
    d = samples[None, :, :] - samples[:, None, :]
    d2 = np.einsum("ijk,ijk->ij", d, d)
    coef = np.einsum("ijk,ikr->ijr", d, normals)
    dn = np.sqrt(np.einsum("ijr,ijr->ij", coef, coef))
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, m - gap)
    mask = (gap > 1) & (dn > 0.0)
    if not np.any(mask):
        return np.inf
    return float(np.min(d2[mask] / (2.0 * dn[mask])))


def _np_min_separation(samples):
    """Smallest distance between non-adjacent samples of a closed sequence."""
    m = samples.shape[0]
    d = samples[None, :, :] - samples[:, None, :]
    d2 = np.einsum("ijk,ijk->ij", d, d)
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, m - gap)
    d2 = np.where(gap > 1, d2, np.inf)
    flat = int(np.argmin(d2))
    i, j = divmod(flat, m)
    return float(np.sqrt(d2[i, j])), min(i, j), max(i, j)


def _np_first_crossing_2d(samples):
    """First pair of non-adjacent segments of a closed planar polyline that cross."""
    m = samples.shape[0]
    a = samples
    b = np.roll(samples, -1, axis=0)

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    A, B = a[:, None, :], b[:, None, :]
    C, D = a[None, :, :], b[None, :, :]
    o1 = orient(A, B, C)
    o2 = orient(A, B, D)
    o3 = orient(C, D, A)
    o4 = orient(C, D, B)
    cross = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, m - gap)
    cross &= gap > 1
    hits = np.argwhere(np.triu(cross))
    if hits.size == 0:
        return -1, -1
    return int(hits[0, 0]), int(hits[0, 1])


numpy_impl = types.SimpleNamespace(
    fourier_eval=_np_fourier_eval,
    fourier_eval012=_np_fourier_eval012,
    polyline_project=_np_polyline_project,
    reach_estimate=_np_reach_estimate,
    min_separation=_np_min_separation,
    first_crossing_2d=_np_first_crossing_2d,
    name="numpy",
)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

def _build_numba_impl():
    njit = numba.njit(cache=True, fastmath=False)

    @njit
    def fourier_eval_kernel(cre, cim, theta, deriv):
        K, d = cre.shape
        P = theta.shape[0]
        out = np.zeros((P, d))
        # (i k)^deriv = k^deriv * i^deriv
        r = deriv % 4
        for p in range(P):
            c1 = np.cos(theta[p])
            s1 = np.sin(theta[p])
            ck = 1.0
            sk = 0.0
            for k in range(K):
                scale = float(k) ** deriv if deriv > 0 else 1.0
                # e^{ik theta} * i^r
                if r == 0:
                    er, ei = ck, sk
                elif r == 1:
                    er, ei = -sk, ck
                elif r == 2:
                    er, ei = -ck, -sk
                else:
                    er, ei = sk, -ck
                for j in range(d):
                    out[p, j] += scale * (cre[k, j] * er - cim[k, j] * ei)
                ck, sk = ck * c1 - sk * s1, sk * c1 + ck * s1
        return out

    @njit
    def fourier_eval012_kernel(cre, cim, theta):
        K, d = cre.shape
        P = theta.shape[0]
        out = np.zeros((3, P, d))
        for p in range(P):
            c1 = np.cos(theta[p])
            s1 = np.sin(theta[p])
            ck = 1.0
            sk = 0.0
            for k in range(K):
                fk = float(k)
                for j in range(d):
                    a = cre[k, j] * ck - cim[k, j] * sk   # Re c e^{ik t}
                    b = cre[k, j] * sk + cim[k, j] * ck   # Im c e^{ik t}
                    out[0, p, j] += a
                    out[1, p, j] -= fk * b
                    out[2, p, j] -= fk * fk * a
                ck, sk = ck * c1 - sk * s1, sk * c1 + ck * s1
        return out

    @njit
    def polyline_project(points, verts):
        P, N = points.shape
        m = verts.shape[0]
        dist = np.empty(P)
        seg = np.empty(P, dtype=np.int64)
        frac = np.empty(P)
        for p in range(P):
            best = np.inf
            bi = 0
            bt = 0.0
            for i in range(m):
                j = i + 1 if i + 1 < m else 0
                ab2 = 0.0
                apab = 0.0
                for k in range(N):
                    ab = verts[j, k] - verts[i, k]
                    ab2 += ab * ab
                    apab += (points[p, k] - verts[i, k]) * ab
                t = apab / ab2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                d2 = 0.0
                for k in range(N):
                    diff = points[p, k] - verts[i, k] - t * (verts[j, k] - verts[i, k])
                    d2 += diff * diff
                if d2 < best:
                    best = d2
                    bi = i
                    bt = t
            dist[p] = np.sqrt(best)
            seg[p] = bi
            frac[p] = bt
        return dist, seg, frac

    @njit
    def reach_estimate(samples, normals):
        m, N = samples.shape
        r = normals.shape[2]
        best = np.inf
        for i in range(m):
            for j in range(m):
                gap = abs(i - j)
                if m - gap < gap:
                    gap = m - gap
                if gap <= 1:
                    continue
                d2 = 0.0
                for k in range(N):
                    dk = samples[j, k] - samples[i, k]
                    d2 += dk * dk
                dn2 = 0.0
                for q in range(r):
                    c = 0.0
                    for k in range(N):
                        c += (samples[j, k] - samples[i, k]) * normals[i, k, q]
                    dn2 += c * c
                if dn2 <= 0.0:
                    continue
                val = d2 / (2.0 * np.sqrt(dn2))
                if val < best:
                    best = val
        return best

    @njit
    def min_separation(samples):
        m, N = samples.shape
        best = np.inf
        bi = 0
        bj = 0
        for i in range(m):
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue
                d2 = 0.0
                for k in range(N):
                    dk = samples[j, k] - samples[i, k]
                    d2 += dk * dk
                if d2 < best:
                    best = d2
                    bi = i
                    bj = j
        return np.sqrt(best), bi, bj

    @njit
    def first_crossing_2d(samples):
        m = samples.shape[0]
        for i in range(m):
            i2 = i + 1 if i + 1 < m else 0
            ax, ay = samples[i, 0], samples[i, 1]
            bx, by = samples[i2, 0], samples[i2, 1]
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue
                j2 = j + 1 if j + 1 < m else 0
                cx, cy = samples[j, 0], samples[j, 1]
                dx, dy = samples[j2, 0], samples[j2, 1]
                o1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
                o2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
                o3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
                o4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
                if o1 * o2 < 0.0 and o3 * o4 < 0.0:
                    return i, j
        return -1, -1

    def fourier_eval(coefs, theta, deriv):
        cre = np.ascontiguousarray(coefs.real)
        cim = np.ascontiguousarray(coefs.imag)
        return fourier_eval_kernel(cre, cim, np.ascontiguousarray(theta, dtype=float), int(deriv))

    def fourier_eval012(coefs, theta):
        cre = np.ascontiguousarray(coefs.real)
        cim = np.ascontiguousarray(coefs.imag)
        return fourier_eval012_kernel(cre, cim, np.ascontiguousarray(theta, dtype=float))

    def _polyline_project(points, verts):
        return polyline_project(np.ascontiguousarray(points, dtype=float), np.ascontiguousarray(verts, dtype=float))

    def _reach_estimate(samples, normals):
        return float(reach_estimate(np.ascontiguousarray(samples, dtype=float), np.ascontiguousarray(normals, dtype=float)))

    def _min_separation(samples):
        d, i, j = min_separation(np.ascontiguousarray(samples, dtype=float))
        return float(d), int(i), int(j)

    def _first_crossing_2d(samples):
        i, j = first_crossing_2d(np.ascontiguousarray(samples, dtype=float))
        return int(i), int(j)

    return types.SimpleNamespace(
        fourier_eval=fourier_eval,
        fourier_eval012=fourier_eval012,
        polyline_project=_polyline_project,
        reach_estimate=_reach_estimate,
        min_separation=_min_separation,
        first_crossing_2d=_first_crossing_2d,
        name="numba",
    )


numba_impl = _build_numba_impl() if numba is not None else None

USE_NUMBA = numba_impl is not None and not _env_disabled()
active = numba_impl if USE_NUMBA else numpy_impl

fourier_eval = active.fourier_eval
fourier_eval012 = active.fourier_eval012
polyline_project = active.polyline_project
reach_estimate = active.reach_estimate
min_separation = active.min_separation
first_crossing_2d = active.first_crossing_2d
