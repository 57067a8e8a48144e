"""Trigonometric interpolation on the uniform periodic grid and lifted circle maps.

All sampled periodic data in the package (curve samples, section vectors,
velocities, circle maps) is interpolated with the band-limited trigonometric
interpolant of its samples, which is spectrally accurate for the smooth data
handled here.
"""

import numpy as np

from . import _kernels
from .errors import NotBijective

TWO_PI = 2.0 * np.pi


def grid(m):
    """Parameters ``2 pi i / m`` for ``i = 0 .. m-1``."""
    return TWO_PI * np.arange(m) / m


class PeriodicInterpolant:
    """Trigonometric interpolant of samples given on :func:`grid`.

    ``values`` has shape (m,) or (m, d); calls return the matching shape with
    the sample axis replaced by the query axis.
    """

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        self.scalar = values.ndim == 1
        vals = values[:, None] if self.scalar else values
        m = vals.shape[0]
        Y = np.fft.rfft(vals, axis=0)
        c = Y / m
        c[1:] *= 2.0
        if m % 2 == 0:
            c[-1] *= 0.5
        self.m = m
        self.values = values
        self.coefs = np.ascontiguousarray(c)

    def __call__(self, theta, deriv=0):
        theta = np.asarray(theta, dtype=float)
        flat = np.atleast_1d(theta).ravel()
        out = _kernels.fourier_eval(self.coefs, flat, deriv)
        if self.scalar:
            out = out[:, 0]
            return out.reshape(theta.shape)
        return out.reshape(theta.shape + (out.shape[-1],))

    def jet(self, theta):
        """(value, first, second derivative) at 1-D ``theta``."""
        out = _kernels.fourier_eval012(self.coefs, np.ascontiguousarray(theta, dtype=float).ravel())
        if self.scalar:
            out = out[..., 0]
        return out[0], out[1], out[2]

    def derivative_samples(self, deriv=1):
        """Spectral derivative evaluated on the grid."""
        return self(grid(self.m), deriv)


def unwrap_circular(theta):
    """Lift a cyclic sequence of circle parameters to a continuous real sequence.

    Consecutive differences are taken in (-pi, pi]; the result starts at
    ``theta[0]``.
    """
    theta = np.asarray(theta, dtype=float)
    steps = np.diff(theta)
    steps = (steps + np.pi) % TWO_PI - np.pi
    return np.concatenate([[theta[0]], theta[0] + np.cumsum(steps)])


def circular_direction(theta):
    """Direction of a sampled closed circle map.

    Returns ``(direction, lifted)`` where ``direction`` is +1 or -1 when the
    cyclic sequence is strictly monotone and winds exactly once, and raises
    :class:`NotBijective` otherwise.
    """
    lifted = unwrap_circular(theta)
    closing = (theta[0] - lifted[-1] + np.pi) % TWO_PI - np.pi
    steps = np.concatenate([np.diff(lifted), [closing]])
    total = steps.sum()
    if np.all(steps > 0) and abs(total - TWO_PI) < 1e-6:
        return 1, lifted
    if np.all(steps < 0) and abs(total + TWO_PI) < 1e-6:
        return -1, lifted
    raise NotBijective("sampled parameter map is not circularly monotone")


class LiftedCircleMap:
    """Smooth circle map stored by its lifted values on the grid.

    ``values[i]`` is a lift of the image of ``grid(m)[i]``; ``sign`` is the
    degree (+1 orientation preserving, -1 reversing). The periodic displacement
    ``values - sign * grid`` is interpolated trigonometrically.
    """

    def __init__(self, values, sign):
        values = np.asarray(values, dtype=float)
        self.m = values.shape[0]
        self.sign = int(sign)
        self.values = values
        self._disp = PeriodicInterpolant(values - self.sign * grid(self.m))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.sign * theta + self._disp(theta)

    def derivative(self, theta):
        return self.sign + self._disp(np.asarray(theta, dtype=float), 1)

    def min_abs_derivative(self, oversample=4):
        t = grid(self.m * oversample)
        return float(np.min(np.abs(self.derivative(t))))

    def inverse_at(self, targets, tol=1e-12, max_iter=60):
        """Solve ``self(u) = target`` for each target (lifted values).

        Bracketing from the samples, then safeguarded Newton.
        """
        targets = np.asarray(targets, dtype=float)
        g = grid(self.m)
        s = self.sign
        # one period of lifted samples, extended by one for bracketing
        ext_u = np.concatenate([g, [TWO_PI]])
        ext_v = np.concatenate([self.values, [self.values[0] + s * TWO_PI]])
        if s < 0:
            ext_u, ext_v = ext_u[::-1], ext_v[::-1]
        base = ext_v[0]
        # shift targets into the covered lifted window
        shift = np.floor((targets - base) / TWO_PI)
        t_local = targets - shift * TWO_PI
        k = np.clip(np.searchsorted(ext_v, t_local) - 1, 0, self.m - 1)
        lo = ext_u[k].copy()
        hi = ext_u[k + 1].copy()
        if s < 0:
            lo, hi = hi, lo
        lo, hi = np.minimum(lo, hi), np.maximum(lo, hi)
        v_lo = self(lo) - t_local
        u = 0.5 * (lo + hi)
        for _ in range(max_iter):
            f = self(u) - t_local
            df = self.derivative(u)
            same = np.sign(f) == np.sign(v_lo)
            lo = np.where(same, u, lo)
            v_lo = np.where(same, f, v_lo)
            hi = np.where(same, hi, u)
            step = f / df
            u_new = u - step
            outside = (u_new <= lo) | (u_new >= hi) | ~np.isfinite(u_new)
            u_new = np.where(outside, 0.5 * (lo + hi), u_new)
            done = np.abs(u_new - u) < tol
            u = u_new
            if np.all(done):
                break
        # translate back: self(u + 2 pi n) = self(u) + s 2 pi n
        return u + s * shift * TWO_PI
