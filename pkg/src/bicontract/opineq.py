"""Row/column operators, the bilinear transformer, and polynomial families.

For a finite family ``A_0, ..., A_{n-1}`` of ``d x d`` matrices the row and
column operators of ``Q`` are the block matrices

    row(Q) = [A_0 Q, A_1 Q, ...]          (d x nd)
    col(Q) = [Q A_0; Q A_1; ...]          (nd x d)

A family is admissible when both ``||sum A_j^* A_j||`` and ``||sum A_j A_j^*||``
are at most one. For admissible families the transformer
``sum_j A_j Q B_j`` does not increase any Schatten norm.
"""

from dataclasses import dataclass

import numpy as np

from . import _torus
from .bipoly import BiPolynomial
from .errors import AdmissibilityError
from .funcalc import apply, matrix_powers
from .matnum import op_norm, schatten_norm, schatten_split

__all__ = [
    "OperatorFamily",
    "PolynomialFamily",
    "row_block",
    "col_block",
    "gram_norms",
    "transformer",
    "transformer_factorized",
    "sq_sum_max",
    "family_from_polynomials",
    "bilinear_bound_gap",
]

ADMISSIBLE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    members: tuple

    def __post_init__(self):
        mats = tuple(np.asarray(A, dtype=complex) for A in self.members)
        if not mats:
            raise ValueError("an operator family needs at least one member")
        if len({A.shape for A in mats}) != 1 or mats[0].ndim != 2:
            raise ValueError("family members must be matrices of one shape")
        object.__setattr__(self, "members", mats)

    def __len__(self):
        return len(self.members)

    @property
    def shape(self):
        return self.members[0].shape

    def is_admissible(self, tol=ADMISSIBLE_TOL):
        row, col = gram_norms(self)
        return row <= 1 + tol and col <= 1 + tol


@dataclass(frozen=True, eq=False)
class PolynomialFamily:
    members: tuple

    def __post_init__(self):
        polys = tuple(self.members)
        if not polys or not all(isinstance(f, BiPolynomial) for f in polys):
            raise ValueError("a polynomial family is a nonempty sequence of BiPolynomial")
        object.__setattr__(self, "members", polys)

    def __len__(self):
        return len(self.members)

    def scaled(self, c):
        return PolynomialFamily(tuple(c * f for f in self.members))


def row_block(fam, Q):
    """``[A_0 Q, A_1 Q, ...]``."""
    Q = np.asarray(Q)
    if fam.shape[1] != Q.shape[0]:
        raise ValueError("dimension mismatch between family and Q")
    return np.hstack([A @ Q for A in fam.members])


def col_block(fam, Q):
    """``[Q A_0; Q A_1; ...]``."""
    Q = np.asarray(Q)
    if Q.shape[1] != fam.shape[0]:
        raise ValueError("dimension mismatch between Q and family")
    return np.vstack([Q @ A for A in fam.members])


def gram_norms(fam):
    """``(||sum A_j A_j^*||, ||sum A_j^* A_j||)``."""
    row = sum(A @ A.conj().T for A in fam.members)
    col = sum(A.conj().T @ A for A in fam.members)
    return op_norm(row), op_norm(col)


def transformer(fam1, Q, fam2):
    """Direct sum ``sum_j A_j Q B_j``."""
    if len(fam1) != len(fam2):
        raise ValueError("families must have equal length")
    Q = np.asarray(Q, dtype=complex)
    return sum(A @ Q @ B for A, B in zip(fam1.members, fam2.members))


def transformer_factorized(fam1, Q, fam2, p):
    """The same sum evaluated as ``row_block(fam1, Q1) @ col_block(fam2, Q2)``.

    ``(Q1, Q2)`` is :func:`~bicontract.matnum.schatten_split` of ``Q``, so this
    path never forms ``A_j Q B_j`` directly.
    """
    if len(fam1) != len(fam2):
        raise ValueError("families must have equal length")
    Q1, Q2 = schatten_split(Q, p)
    return row_block(fam1, Q1) @ col_block(fam2, Q2)


def sq_sum_max(polys, oversample=8):
    """Grid-plus-polish maximum of ``sum_j |f_j|**2`` on the torus.

    A lower bound of the true supremum over the closed bidisk.
    """
    members = [f.trim() for f in polys.members]
    n1 = max(f.deg1 for f in members)
    n2 = max(f.deg2 for f in members)
    shape = (oversample * (n1 + 1) if n1 else 1, oversample * (n2 + 1) if n2 else 1)
    vals = sum(np.abs(_torus.grid_values(f.coeffs, (0, 0), shape)) ** 2 for f in members)

    def point(t1, t2):
        return float(sum(abs(_torus.point_value(f.coeffs, (0, 0), t1, t2)) ** 2 for f in members))

    best, _ = _torus.polished_max(vals, point)
    return best


def family_from_polynomials(polys, pair, normalize=False, oversample=8):
    """``A_j = f_j(T, R)``, optionally after scaling the family to unit square sum.

    With ``normalize`` the polynomials are divided by ``sqrt(sq_sum_max)``;
    the grid maximum can only undershoot, so the resulting Gram norms are then
    checked on the matrices themselves and :class:`AdmissibilityError` is
    raised if either exceeds ``1 + 1e-10``.
    """
    if normalize:
        m = sq_sum_max(polys, oversample)
        if m == 0.0:
            raise ValueError("cannot normalize a family of zero polynomials")
        polys = polys.scaled(m ** -0.5)
    deg1 = max(f.trim().deg1 for f in polys.members)
    tp = matrix_powers(pair.T, deg1)
    fam = OperatorFamily(tuple(apply(f, pair, tp) for f in polys.members))
    if normalize and not fam.is_admissible():
        raise AdmissibilityError("Gram norms %r exceed 1 after normalization" % (gram_norms(fam),))
    return fam


def bilinear_bound_gap(polys1, polys2, pair1, pair2, Q, p, oversample=8):
    """``||sum phi_j(T1,R1) Q psi_j(T2,R2)||_p - sqrt(M1 M2) ||Q||_p``.

    ``M1`` and ``M2`` are the torus maxima of the square sums of the two
    families. Nonpositive up to roundoff.
    """
    lhs, rhs = bilinear_bound_sides(polys1, polys2, pair1, pair2, Q, p, oversample)
    return lhs - rhs


def bilinear_bound_sides(polys1, polys2, pair1, pair2, Q, p, oversample=8):
    if len(polys1) != len(polys2):
        raise ValueError("families must have equal length")
    fam1 = family_from_polynomials(polys1, pair1)
    fam2 = family_from_polynomials(polys2, pair2)
    lhs = schatten_norm(transformer(fam1, Q, fam2), p)
    m1 = sq_sum_max(polys1, oversample)
    m2 = sq_sum_max(polys2, oversample)
    return lhs, (m1 * m2) ** 0.5 * schatten_norm(Q, p)
