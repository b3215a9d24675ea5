"""Littlewood-Paley machinery on the 2-torus.

The dyadic bump ``w`` is smooth, supported in ``[1/2, 2]`` and satisfies
``w(s) + w(s/2) = 1`` on ``[1, 2]``. Block ``n >= 1`` of a trigonometric
polynomial multiplies the Fourier coefficient at lattice point ``j`` by
``w(|j| / 2**n)``; block 0 takes the complement ``1 - sum_{n>=1} w(|j|/2**n)``,
so the blocks always add back up to the original polynomial. From the
blocks come the Besov quantities ``|| {2**(n s) ||f_n||_p} ||_{l^q}``.

Moduli of continuity and the transform
``omega_*(s) = s * int_s^inf omega(t) / t**2 dt`` live here as well.
"""

import json
import math

import numpy as np
from scipy import integrate

from . import _torus
from .bipoly import BiPolynomial, sup_norm_torus
from .errors import DivergenceError

__all__ = [
    "smooth_step",
    "DyadicBump",
    "make_bump",
    "TrigPolynomial2D",
    "lp_multiplier",
    "lp_block",
    "lp_blocks",
    "lp_norm",
    "besov_norm",
    "holder_norm",
    "is_analytic",
    "ModulusOfContinuity",
    "omega_star",
    "omega_star_quadrature",
    "lambda_omega_seminorm",
]


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, ``e^{-1/x}`` blend between."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 1.0, 1.0, 0.0)
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        xm = x[mid]
        a = np.exp(-1.0 / xm)
        b = np.exp(-1.0 / (1.0 - xm))
        out[mid] = a / (a + b)
    return out if out.ndim else float(out)


class DyadicBump:
    """The function ``w`` behind the Littlewood-Paley multipliers.

    Any vectorized callable may be wrapped; :meth:`check` verifies the
    support, range, and ``w(s) + w(s/2) = 1`` conditions on a sample grid.
    """

    def __init__(self, fn, name="custom"):
        self._fn = fn
        self.name = name

    def __call__(self, s):
        return self._fn(s)

    def check(self, tol=1e-12, samples=4097):
        s = np.linspace(1.0, 2.0, samples)
        if np.max(np.abs(self(s) + self(s / 2) - 1.0)) > tol:
            return False
        outside = np.concatenate([np.linspace(0.0, 0.5, 257), np.linspace(2.0, 64.0, 257)])
        if np.max(np.abs(self(outside))) > tol:
            return False
        vals = self(np.linspace(0.0, 4.0, samples))
        return bool(np.all(vals >= -tol) and np.all(vals <= 1 + tol))


def _canonical_bump(s):
    s = np.asarray(s, dtype=float)
    rising = smooth_step(2.0 * s - 1.0)
    falling = 1.0 - smooth_step(s - 1.0)
    out = np.where((s >= 0.5) & (s <= 1.0), rising, 0.0)
    out = np.where((s > 1.0) & (s <= 2.0), falling, out)
    return out if out.ndim else float(out)


def make_bump():
    """``w(s) = step(2s - 1)`` on ``[1/2, 1]``, ``1 - step(s - 1)`` on ``[1, 2]``, else 0."""
    return DyadicBump(_canonical_bump, name="canonical")


_DEFAULT_BUMP = make_bump()


class TrigPolynomial2D:
    """Finitely supported Fourier series on the 2-torus.

    Stored densely: ``coeffs[a, b]`` is the coefficient at lattice point
    ``(a + offset[0], b + offset[1])``.
    """

    __slots__ = ("_coeffs", "offset")

    def __init__(self, coeffs, offset=(0, 0)):
        c = np.array(coeffs, dtype=complex, copy=True)
        if c.ndim != 2 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 2-D array")
        c.flags.writeable = False
        self._coeffs = c
        self.offset = (int(offset[0]), int(offset[1]))

    @property
    def coeffs(self):
        return self._coeffs

    @classmethod
    def from_dict(cls, terms):
        """From a mapping ``{(j1, j2): value}``."""
        if not terms:
            return cls([[0.0]])
        j1 = [k[0] for k in terms]
        j2 = [k[1] for k in terms]
        lo = (min(j1), min(j2))
        c = np.zeros((max(j1) - lo[0] + 1, max(j2) - lo[1] + 1), dtype=complex)
        for (a, b), v in terms.items():
            c[a - lo[0], b - lo[1]] += v
        return cls(c, lo)

    @classmethod
    def from_bipoly(cls, f):
        return cls(f.coeffs, (0, 0))

    def lattice(self):
        """Integer index grids ``(J1, J2)`` matching ``coeffs``."""
        a = np.arange(self._coeffs.shape[0]) + self.offset[0]
        b = np.arange(self._coeffs.shape[1]) + self.offset[1]
        return np.meshgrid(a, b, indexing="ij")

    def radii(self):
        J1, J2 = self.lattice()
        return np.hypot(J1, J2)

    def items(self):
        J1, J2 = self.lattice()
        nz = np.nonzero(self._coeffs)
        return {(int(J1[i, k]), int(J2[i, k])): complex(self._coeffs[i, k]) for i, k in zip(*nz)}

    def trim(self):
        return TrigPolynomial2D.from_dict(self.items())

    def to_bipoly(self):
        if not is_analytic(self):
            raise ValueError("polynomial has negative frequencies")
        t = self.trim()
        if not t.items():
            return BiPolynomial.zero()
        c = np.zeros((t.offset[0] + t.coeffs.shape[0], t.offset[1] + t.coeffs.shape[1]), dtype=complex)
        c[t.offset[0]:, t.offset[1]:] = t.coeffs
        return BiPolynomial(c)

    def support_radius(self):
        """``max |j_k|`` over the support (0 for the zero polynomial)."""
        items = self.items()
        if not items:
            return 0
        return max(max(abs(a), abs(b)) for a, b in items)

    def __call__(self, theta1, theta2):
        return _torus.point_value(self._coeffs, self.offset, theta1, theta2)

    def _combine(self, other, sign):
        terms = self.items()
        for key, v in other.items().items():
            terms[key] = terms.get(key, 0.0) + sign * v
        return TrigPolynomial2D.from_dict(terms)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        return TrigPolynomial2D(self._coeffs * scalar, self.offset)

    __rmul__ = __mul__

    def to_json(self):
        return [{"j1": a, "j2": b, "re": v.real, "im": v.imag} for (a, b), v in sorted(self.items().items())]

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        terms = {}
        for t in obj:
            key = (int(t["j1"]), int(t["j2"]))
            terms[key] = terms.get(key, 0.0) + complex(float(t["re"]), float(t["im"]))
        return cls.from_dict(terms)

    def __repr__(self):
        return "TrigPolynomial2D(shape=%r, offset=%r)" % (self._coeffs.shape, self.offset)


def _as_trig(f):
    if isinstance(f, TrigPolynomial2D):
        return f
    if isinstance(f, BiPolynomial):
        return TrigPolynomial2D.from_bipoly(f)
    raise TypeError("expected TrigPolynomial2D or BiPolynomial, got %r" % type(f).__name__)


def _top_block(rmax):
    # w(r / 2**n) can be nonzero only while r / 2**n > 1/2
    if rmax <= 1.0:
        return 0
    return int(math.floor(math.log2(rmax))) + 1


def _multiplier_radius(n, r, bump):
    r = np.asarray(r, dtype=float)
    if n >= 1:
        return bump(r / 2.0 ** n)
    top = _top_block(float(np.max(r))) if r.size else 0
    acc = np.zeros_like(r)
    for k in range(1, top + 2):
        acc = acc + bump(r / 2.0 ** k)
    return 1.0 - acc


def lp_multiplier(n, j, bump=None):
    """Multiplier of block ``n`` at lattice point ``j = (j1, j2)``.

    ``j`` may also be an array whose last axis holds the two indices.
    """
    if n < 0:
        raise ValueError("block index must be nonnegative")
    bump = bump or _DEFAULT_BUMP
    j = np.asarray(j, dtype=float)
    r = np.hypot(j[..., 0], j[..., 1])
    out = _multiplier_radius(n, r, bump)
    return float(out) if np.ndim(out) == 0 else out


def lp_block(f, n, bump=None):
    """Block ``f_n``: coefficientwise product with the block-``n`` multiplier."""
    f = _as_trig(f)
    bump = bump or _DEFAULT_BUMP
    return TrigPolynomial2D(f.coeffs * _multiplier_radius(n, f.radii(), bump), f.offset)


def lp_blocks(f, bump=None):
    """All blocks that can be nonzero, ``[f_0, f_1, ..., f_N]``."""
    f = _as_trig(f)
    r = f.radii()[f.coeffs != 0]
    top = _top_block(float(r.max())) if r.size else 0
    return [lp_block(f, n, bump) for n in range(top + 1)]


def lp_norm(f, p, oversample=4):
    """``L^p`` norm on the torus with normalized measure.

    ``p = inf`` uses :func:`~bicontract.bipoly.sup_norm_torus`; finite ``p``
    uses the mean of ``|f|**p`` on a uniform grid with ``oversample`` times the
    support radius nodes per axis (exact for ``p = 2``).
    """
    f = _as_trig(f)
    if not np.any(f.coeffs):
        return 0.0
    if np.isinf(p):
        return sup_norm_torus(f).grid_max
    if p < 1:
        raise ValueError("p must be at least 1")
    rad = max(f.support_radius(), 1)
    n = max(oversample * rad, *f.coeffs.shape)
    vals = np.abs(_torus.grid_values(f.coeffs, f.offset, (n, n)))
    return float(np.mean(vals ** p) ** (1.0 / p))


def _lq(seq, q):
    seq = np.asarray(seq, dtype=float)
    if seq.size == 0:
        return 0.0
    if np.isinf(q):
        return float(seq.max())
    return float(np.sum(seq ** q) ** (1.0 / q))


def besov_norm(f, s, p, q, bump=None):
    """``l^q`` norm of the sequence ``2**(n s) * ||f_n||_{L^p}``."""
    if s <= 0:
        raise ValueError("smoothness s must be positive")
    blocks = lp_blocks(f, bump)
    seq = [2.0 ** (n * s) * lp_norm(b, p) for n, b in enumerate(blocks)]
    return _lq(seq, q)


def holder_norm(f, alpha, bump=None):
    """Holder-Zygmund norm ``sup_n 2**(n alpha) ||f_n||_inf``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return besov_norm(f, alpha, np.inf, np.inf, bump)


def is_analytic(f):
    """True iff every frequency in the support has both indices nonnegative."""
    f = _as_trig(f)
    J1, J2 = f.lattice()
    nz = f.coeffs != 0
    return bool(np.all(J1[nz] >= 0) and np.all(J2[nz] >= 0))


class ModulusOfContinuity:
    """A modulus of continuity, either ``t**alpha`` or piecewise-linear on knots.

    The tabulated kind interpolates linearly between knots starting at
    ``(0, 0)``; concave data (nonincreasing slopes) makes it subadditive.
    Past the last knot it continues as the power law ``t**beta`` matched to the
    log-slope of the final segment.
    """

    def __init__(self, kind, alpha=None, knots=None, values=None):
        self.kind = kind
        if kind == "power":
            if alpha is None or not 0 < alpha <= 1:
                raise ValueError("power modulus needs alpha in (0, 1]")
            self.alpha = float(alpha)
        elif kind == "tabulated":
            t = np.asarray(knots, dtype=float)
            w = np.asarray(values, dtype=float)
            if t.ndim != 1 or t.shape != w.shape or t.size < 3:
                raise ValueError("need at least three knots with matching values")
            if t[0] != 0.0 or w[0] != 0.0:
                raise ValueError("the first knot must be (0, 0)")
            if np.any(np.diff(t) <= 0) or np.any(np.diff(w) < 0):
                raise ValueError("knots must increase and values must not decrease")
            slopes = np.diff(w) / np.diff(t)
            if np.any(np.diff(slopes) > 1e-12 * max(1.0, slopes.max())):
                raise ValueError("tabulated modulus must be concave")
            self.knots, self.values = t, w
            self.tail_exponent = float(np.log(w[-1] / w[-2]) / np.log(t[-1] / t[-2]))
        else:
            raise ValueError("unknown modulus kind %r" % kind)

    @classmethod
    def power(cls, alpha):
        return cls("power", alpha=alpha)

    @classmethod
    def tabulated(cls, knots, values):
        return cls("tabulated", knots=knots, values=values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            out = np.power(t, self.alpha)
        else:
            M, wM = self.knots[-1], self.values[-1]
            inside = np.interp(np.minimum(t, M), self.knots, self.values)
            out = np.where(t > M, wM * (np.maximum(t, M) / M) ** self.tail_exponent, inside)
        return out if out.ndim else float(out)

    def to_json(self):
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha}
        return {"kind": "tabulated", "knots": self.knots.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_json(cls, obj):
        if obj["kind"] == "power":
            return cls.power(obj["alpha"])
        return cls.tabulated(obj["knots"], obj["values"])


def omega_star(omega, s):
    """``s * int_s^inf omega(t) / t**2 dt``.

    Power kind: ``s**alpha / (1 - alpha)``. Tabulated kind: exact integration
    of each linear segment on ``[s, M]`` plus the closed-form power-law tail
    beyond the last knot ``M``.

    Raises
    ------
    DivergenceError
        For ``t**alpha`` with ``alpha >= 1``, or a tabulated tail exponent >= 1.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    if omega.kind == "power":
        if omega.alpha >= 1:
            raise DivergenceError("omega_* diverges for omega(t) = t**alpha with alpha >= 1")
        return s ** omega.alpha / (1.0 - omega.alpha)
    beta = omega.tail_exponent
    if beta >= 1:
        raise DivergenceError("tabulated modulus grows too fast past its last knot")
    t, w = omega.knots, omega.values
    M, wM = t[-1], w[-1]
    if s >= M:
        return s * wM * M ** -beta * s ** (beta - 1.0) / (1.0 - beta)
    # segments of [s, M]; omega = a + b t on each, int (a + b t)/t^2 = a(1/l - 1/r) + b log(r/l)
    cut = np.concatenate([[s], t[t > s]])
    vals = np.interp(cut, t, w)
    left, right = cut[:-1], cut[1:]
    slope = (vals[1:] - vals[:-1]) / (right - left)
    icept = vals[:-1] - slope * left
    body = np.sum(icept * (1.0 / left - 1.0 / right) + slope * np.log(right / left))
    tail = wM / (M * (1.0 - beta))
    return float(s * (body + tail))


def omega_star_quadrature(omega, s):
    """Independent route to ``omega_*``: ``int_1^inf omega(s t) / t**2 dt`` by quadrature."""
    if s <= 0:
        raise ValueError("s must be positive")
    val, _ = integrate.quad(lambda t: omega(s * t) / (t * t), 1.0, np.inf,
                            epsabs=0.0, epsrel=1e-10, limit=500)
    if not np.isfinite(val):
        raise DivergenceError("quadrature for omega_* did not converge")
    return float(val)


def _mesh_values(f, grid):
    f = _as_trig(f)
    theta = 2 * np.pi * np.arange(grid) / grid
    e1 = np.exp(1j * np.outer(theta, np.arange(f.coeffs.shape[0]) + f.offset[0]))
    e2 = np.exp(1j * np.outer(theta, np.arange(f.coeffs.shape[1]) + f.offset[1]))
    return e1 @ f.coeffs @ e2.T


def lambda_omega_seminorm(f, omega, grid=32):
    """Largest ``|f(x) - f(y)| / omega(max_k |x_k - y_k|)`` over a ``grid x grid`` mesh.

    Distances are chordal on each circle factor. Every pair of distinct mesh
    points is some point and its translate by a nonzero mesh shift, so the
    search runs over shifts and is exhaustive. Shifts ``(a, b)`` and
    ``(-a, -b)`` describe the same pairs, so only ``a <= grid / 2`` is scanned.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    V = _mesh_values(f, grid)
    chord = _torus.chordal_steps(grid)
    cols = (np.arange(grid)[None, :] + np.arange(grid)[:, None]) % grid  # [shift, k]
    shifted = V[:, cols]  # [i, b, k] = V[i, k + b]
    best = 0.0
    for a in range(grid // 2 + 1):
        d = np.roll(shifted, -a, axis=0) - V[:, None, :]
        diff = np.sqrt((d.real ** 2 + d.imag ** 2).max(axis=(0, 2)))
        dist = np.maximum(chord[a], chord)
        if a == 0:
            diff, dist = diff[1:], dist[1:]
        best = max(best, float(np.max(diff / omega(dist))))
    return best
