"""Analytic polynomials in one and two complex variables.

``BiPolynomial`` stores the Taylor coefficients ``a[k, m]`` of

    f(z1, z2) = sum_{k, m} a[k, m] z1**k z2**m

as a dense complex array; ``UniPolynomial`` is the one-variable analogue.
Both are immutable. The backward shifts ``shift1``/``shift2`` delete one
power of ``z1``/``z2``: ``(S1* f)(z) = sum a[k+1, m] z1**k z2**m``.
"""

import json
from collections import namedtuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

from . import _torus

__all__ = [
    "BiPolynomial",
    "UniPolynomial",
    "SupNorm",
    "evaluate",
    "shift1",
    "shift2",
    "shift_power",
    "sup_norm_torus",
    "shift_sum_sq",
    "random_bipoly",
    "random_unipoly",
]

SupNorm = namedtuple("SupNorm", ["grid_max", "l1_upper"])


def _frozen(arr, ndim):
    arr = np.array(arr, dtype=complex, copy=True)
    if arr.size == 0:
        arr = np.zeros((1,) * ndim, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError("expected a %d-D coefficient array, got shape %r" % (ndim, arr.shape))
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    arr.flags.writeable = False
    return arr


class BiPolynomial:
    """Analytic polynomial of two variables with dense coefficients ``a[k, m]``.

    Trailing zero rows and columns are allowed; :meth:`trim` removes them.
    The zero polynomial is represented by a 1x1 zero array (degrees 0, 0).
    """

    __slots__ = ("_coeffs",)
    offset = (0, 0)

    def __init__(self, coeffs):
        self._coeffs = _frozen(coeffs, 2)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def deg1(self):
        return self._coeffs.shape[0] - 1

    @property
    def deg2(self):
        return self._coeffs.shape[1] - 1

    @property
    def degree(self):
        """``max(deg1, deg2)`` of the trimmed polynomial."""
        t = self.trim()
        return max(t.deg1, t.deg2)

    @classmethod
    def zero(cls):
        return cls(np.zeros((1, 1)))

    @classmethod
    def constant(cls, c):
        return cls([[c]])

    @classmethod
    def monomial(cls, k, m, coeff=1.0):
        a = np.zeros((k + 1, m + 1), dtype=complex)
        a[k, m] = coeff
        return cls(a)

    @classmethod
    def from_terms(cls, terms):
        """Build from a mapping ``{(k, m): a_km}``."""
        if not terms:
            return cls.zero()
        n1 = max(k for k, _ in terms)
        n2 = max(m for _, m in terms)
        a = np.zeros((n1 + 1, n2 + 1), dtype=complex)
        for (k, m), v in terms.items():
            a[k, m] += v
        return cls(a)

    def is_zero(self):
        return not np.any(self._coeffs)

    def trim(self):
        """Drop trailing all-zero rows and columns (idempotent)."""
        a = self._coeffs
        nz = np.nonzero(a)
        if nz[0].size == 0:
            return BiPolynomial.zero()
        return BiPolynomial(a[: nz[0].max() + 1, : nz[1].max() + 1])

    def padded(self, deg1, deg2):
        """Same polynomial stored on a ``(deg1+1) x (deg2+1)`` rectangle."""
        t = self.trim()
        if t.deg1 > deg1 or t.deg2 > deg2:
            raise ValueError("cannot pad to a smaller rectangle")
        a = np.zeros((deg1 + 1, deg2 + 1), dtype=complex)
        a[: t.deg1 + 1, : t.deg2 + 1] = t.coeffs
        return BiPolynomial(a)

    def __call__(self, z1, z2):
        return evaluate(self, z1, z2)

    def _binary(self, other, op):
        if not isinstance(other, BiPolynomial):
            other = BiPolynomial.constant(other)
        n1 = max(self.deg1, other.deg1)
        n2 = max(self.deg2, other.deg2)
        a = np.zeros((n1 + 1, n2 + 1), dtype=complex)
        b = np.zeros_like(a)
        a[: self.deg1 + 1, : self.deg2 + 1] = self._coeffs
        b[: other.deg1 + 1, : other.deg2 + 1] = other.coeffs
        return BiPolynomial(op(a, b))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __neg__(self):
        return BiPolynomial(-self._coeffs)

    def __mul__(self, other):
        if isinstance(other, BiPolynomial):
            return BiPolynomial(convolve2d(self._coeffs, other.coeffs))
        return BiPolynomial(self._coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return BiPolynomial(self._coeffs / scalar)

    def __repr__(self):
        return "BiPolynomial(deg1=%d, deg2=%d)" % (self.deg1, self.deg2)

    def to_json(self):
        """JSON-ready dict; floats round-trip exactly through ``json``."""
        flat = self._coeffs.ravel()
        return {
            "deg1": self.deg1,
            "deg2": self.deg2,
            "coeffs": [[float(c.real), float(c.imag)] for c in flat],
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        n1, n2 = int(obj["deg1"]), int(obj["deg2"])
        pairs = np.asarray(obj["coeffs"], dtype=float).reshape(-1, 2)
        if pairs.shape[0] != (n1 + 1) * (n2 + 1):
            raise ValueError("coefficient count does not match degrees")
        return cls((pairs[:, 0] + 1j * pairs[:, 1]).reshape(n1 + 1, n2 + 1))


class UniPolynomial:
    """Analytic polynomial of one variable, ``sum_j c[j] z**j``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        self._coeffs = _frozen(coeffs, 1)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        nz = np.nonzero(self._coeffs)[0]
        return int(nz.max()) if nz.size else 0

    def __call__(self, z):
        return npoly.polyval(z, self._coeffs)

    def shift(self, j=1):
        """``(S*)^j f``: drop the first ``j`` Taylor coefficients."""
        if j < 0:
            raise ValueError("shift order must be nonnegative")
        return UniPolynomial(self._coeffs[j:])

    def partial_sum(self, j):
        """Taylor partial sum ``sum_{k<=j} c[k] z**k``."""
        return UniPolynomial(self._coeffs[: j + 1])

    def sup_norm(self, oversample=8):
        """Max of ``|f|`` on the unit circle (grid plus polish), as :class:`SupNorm`."""
        return sup_norm_torus(BiPolynomial(self._coeffs[:, None]), oversample)

    def __repr__(self):
        return "UniPolynomial(degree=%d)" % self.degree


def evaluate(f, z1, z2):
    """``sum a[k, m] z1**k z2**m``, by nested Horner evaluation (broadcasts)."""
    z1, z2 = np.broadcast_arrays(z1, z2)
    return npoly.polyval2d(z1, z2, f.coeffs)


def shift1(f):
    """Backward shift in ``z1``."""
    return shift_power(f, 1, 1)


def shift2(f):
    """Backward shift in ``z2``."""
    return shift_power(f, 2, 1)


def shift_power(f, variable, j):
    """``(S1*)^j f`` for ``variable == 1`` or ``(S2*)^j f`` for ``variable == 2``."""
    if j < 1:
        raise ValueError("shift power must be a positive integer")
    a = f.coeffs
    if variable == 1:
        out = a[j:, :]
    elif variable == 2:
        out = a[:, j:]
    else:
        raise ValueError("variable must be 1 or 2")
    if out.size == 0:
        return BiPolynomial.zero()
    return BiPolynomial(out)


def sup_norm_torus(f, oversample=8):
    """Bracket ``sup |f|`` over the closed bidisk (equivalently over the torus).

    ``f`` is anything exposing ``coeffs`` (2-D) and ``offset``; both
    :class:`BiPolynomial` and ``besov.TrigPolynomial2D`` qualify. The grid has
    ``oversample * (span + 1)`` nodes per axis and its maximum is polished by
    bounded 1-D searches in each coordinate.

    Returns
    -------
    SupNorm
        ``grid_max <= sup|f| <= l1_upper``; ``grid_max`` is the working value
        of the sup-norm everywhere else in the package.
    """
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    a = np.asarray(f.coeffs)
    l1 = float(np.sum(np.abs(a)))
    if l1 == 0.0:
        return SupNorm(0.0, 0.0)
    offset = f.offset
    shape = (oversample * a.shape[0] if a.shape[0] > 1 else 1,
             oversample * a.shape[1] if a.shape[1] > 1 else 1)
    vals = np.abs(_torus.grid_values(a, offset, shape))
    best, _ = _torus.polished_max(
        vals, lambda t1, t2: abs(_torus.point_value(a, offset, t1, t2)))
    return SupNorm(min(best, l1), l1)


def shift_sum_sq(f, n, zeta):
    """``sum_{j=1}^n |((S*)^j f)(zeta)|**2`` for unimodular ``zeta``.

    ``zeta`` may be an array; the result then has the same shape. The tail sums
    ``sum_{k>=j} c[k] zeta**k`` are accumulated once, from the top degree down,
    and ``|((S*)^j f)(zeta)| = |tail_j(zeta)|`` because ``|zeta| = 1``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    zeta = np.asarray(zeta, dtype=complex)
    c = f.coeffs
    d = c.size - 1
    top = min(n, d)
    if top < 1:
        return np.zeros(zeta.shape) if zeta.ndim else 0.0
    z = zeta.reshape(-1, 1)
    terms = c[None, :] * z ** np.arange(d + 1)[None, :]
    tails = np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
    out = np.sum(np.abs(tails[:, 1: top + 1]) ** 2, axis=1)
    return out.reshape(zeta.shape) if zeta.ndim else float(out[0])


def _disk(rng, size):
    r = np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def random_bipoly(rng, deg1, deg2, scale=1.0):
    """Coefficients i.i.d. uniform in the closed disk of radius ``scale``."""
    return BiPolynomial(scale * _disk(rng, (deg1 + 1, deg2 + 1)))


def random_unipoly(rng, degree, scale=1.0):
    return UniPolynomial(scale * _disk(rng, degree + 1))
