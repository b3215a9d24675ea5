"""Grid evaluation of trigonometric sums on the torus, and grid maxima with polish.

A coefficient array ``c`` with lattice offset ``(o1, o2)`` represents

    g(theta1, theta2) = sum_{a, b} c[a, b] exp(i((a + o1) theta1 + (b + o2) theta2)).

Analytic polynomials use offset ``(0, 0)``; the one-variable case is handled by
passing a 2-D array with a single column.
"""

import numpy as np
from scipy.optimize import minimize_scalar

TWO_PI = 2.0 * np.pi


def grid_values(coeffs, offset, shape):
    """Values of the trigonometric sum on the uniform ``shape`` grid, via FFT.

    Node ``(k1, k2)`` sits at ``theta = (2 pi k1 / N1, 2 pi k2 / N2)``. Each grid
    dimension must exceed the coefficient span along that axis, otherwise
    frequencies alias.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    n1, n2 = shape
    s1, s2 = coeffs.shape
    if s1 > n1 or s2 > n2:
        raise ValueError("grid %r too small for coefficient span %r" % (shape, coeffs.shape))
    buf = np.zeros((n1, n2), dtype=complex)
    rows = (np.arange(s1) + offset[0]) % n1
    cols = (np.arange(s2) + offset[1]) % n2
    buf[np.ix_(rows, cols)] = coeffs
    return np.fft.ifft2(buf) * (n1 * n2)


def point_value(coeffs, offset, theta1, theta2):
    """Direct evaluation of the trigonometric sum at one point."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    e1 = np.exp(1j * (np.arange(coeffs.shape[0]) + offset[0]) * theta1)
    e2 = np.exp(1j * (np.arange(coeffs.shape[1]) + offset[1]) * theta2)
    return e1 @ coeffs @ e2


def polished_max(values, point_fn, sweeps=3, xatol=1e-13):
    """Maximum of a real function on the torus, seeded from grid samples.

    Parameters
    ----------
    values : ndarray, shape (N1, N2)
        Samples of the function on the uniform grid.
    point_fn : callable
        ``point_fn(theta1, theta2) -> float``, the same function off-grid.
    sweeps : int
        Rounds of coordinate-wise bounded 1-D maximization; an axis with a
        single node is never polished.

    Returns
    -------
    best : float
        The largest value seen; never below the grid maximum, and never above
        the true maximum since every candidate is an actual function value.
    theta : tuple of float
        Where ``best`` was attained.
    """
    values = np.atleast_2d(values)
    shape = values.shape
    idx = np.unravel_index(int(np.argmax(values)), shape)
    best = float(values[idx])
    theta = [TWO_PI * idx[0] / shape[0], TWO_PI * idx[1] / shape[1]]
    axes = [ax for ax in (0, 1) if shape[ax] > 1]
    for _ in range(sweeps):
        improved = False
        for ax in axes:
            h = TWO_PI / shape[ax]

            def neg(t, ax=ax):
                pt = list(theta)
                pt[ax] = t
                return -point_fn(pt[0], pt[1])

            res = minimize_scalar(neg, bounds=(theta[ax] - h, theta[ax] + h),
                                  method="bounded", options={"xatol": xatol})
            if -res.fun > best:
                best = float(-res.fun)
                theta[ax] = float(res.x)
                improved = True
        if not improved:
            break
    return best, tuple(theta)


def chordal_steps(n):
    """Chordal distances |1 - exp(2 pi i k / n)| for k = 0..n-1."""
    return 2.0 * np.abs(np.sin(np.pi * np.arange(n) / n))
