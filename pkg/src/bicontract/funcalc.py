"""Polynomial functional calculus for a pair of commuting contractions.

For an analytic polynomial ``f`` and commuting contractions ``T``, ``R``,
``f(T, R) = sum a[k, m] T**k R**m``. Besides the calculus itself this module
evaluates the two telescoping expansions of a difference of such values::

    f(T1,R1) - f(T2,R2)
        = sum_j ((S2*)^j f)(T1,R1) (R1 - R2) R2^(j-1)
        + sum_j T1^(j-1) (T1 - T2) ((S1*)^j f)(T2,R2)

and the same with ``R1 Q - Q R2`` / ``T1 Q - Q T2`` in place of the plain
differences, whose left side is ``f(T1,R1) Q - Q f(T2,R2)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .bipoly import BiPolynomial, shift_power, sup_norm_torus
from .errors import CommutationError, ContractionError
from .matnum import op_norm

__all__ = [
    "ContractionPair",
    "commutation_defect",
    "matrix_powers",
    "apply",
    "von_neumann_gap",
    "difference_direct",
    "identity_rhs",
    "quasicommutator_direct",
    "quasicommutator_identity_rhs",
]

TOL_CONTR = 1e-10
TOL_COMM = 1e-10


def commutation_defect(T, R):
    """Operator norm of ``TR - RT``."""
    T = np.asarray(T)
    R = np.asarray(R)
    if T.shape != R.shape or T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("commutation_defect needs square matrices of equal size")
    # diagonal matrices commute; BLAS products would leave last-bit residue
    if _is_diagonal(T) and _is_diagonal(R):
        return 0.0
    return op_norm(T @ R - R @ T)


def _is_diagonal(M):
    return not np.any(M - np.diag(np.diag(M)))


@dataclass(frozen=True, eq=False)
class ContractionPair:
    """Two commuting square matrices of operator norm at most one.

    ``recipe`` carries whatever a generator needs to perturb the pair within
    its own construction (see :mod:`bicontract.pairs`); it plays no role in
    the calculus.
    """

    T: np.ndarray
    R: np.ndarray
    tol_contr: float = TOL_CONTR
    tol_comm: float = TOL_COMM
    recipe: dict = field(default=None, repr=False)

    def __post_init__(self):
        T = np.array(self.T, dtype=complex)
        R = np.array(self.R, dtype=complex)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape != R.shape:
            raise ValueError("T and R must be square matrices of the same size")
        for M in (T, R):
            M.flags.writeable = False
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "R", R)
        nt, nr = op_norm(T), op_norm(R)
        if nt > 1 + self.tol_contr or nr > 1 + self.tol_contr:
            raise ContractionError("operator norms %.3g, %.3g exceed 1" % (nt, nr))
        defect = commutation_defect(T, R)
        if defect > self.tol_comm:
            raise CommutationError("||TR - RT|| = %.3g exceeds tolerance" % defect)

    @property
    def dim(self):
        return self.T.shape[0]


def matrix_powers(M, n):
    """Stack ``[I, M, ..., M**n]`` with shape ``(n+1, d, d)``."""
    M = np.asarray(M, dtype=complex)
    out = np.empty((n + 1,) + M.shape, dtype=complex)
    out[0] = np.eye(M.shape[0])
    for k in range(1, n + 1):
        out[k] = out[k - 1] @ M
    return out


def apply(f, pair, t_powers=None):
    """``f(T, R)``: Horner in ``R`` over the blocks ``B_m = sum_k a[k, m] T**k``.

    ``t_powers`` may pass a precomputed :func:`matrix_powers` stack for ``T``
    with at least ``f.deg1 + 1`` entries.
    """
    f = f.trim()
    if t_powers is None:
        t_powers = matrix_powers(pair.T, f.deg1)
    blocks = np.tensordot(f.coeffs.T, t_powers[: f.deg1 + 1], axes=(1, 0))
    acc = blocks[-1]
    for m in range(f.deg2 - 1, -1, -1):
        acc = acc @ pair.R + blocks[m]
    return acc


def von_neumann_gap(f, pair, oversample=8):
    """``||f(T, R)|| - sup|f|`` with the grid sup; nonpositive up to roundoff."""
    return op_norm(apply(f, pair)) - sup_norm_torus(f, oversample).grid_max


def _check_dims(*mats):
    shapes = {np.shape(M) for M in mats}
    if len(shapes) != 1:
        raise ValueError("dimension mismatch: %s" % sorted(shapes))


def _drop_constant(f):
    # a[0, 0] I cancels exactly from both differences; evaluating it would
    # only add roundoff (c I @ Q and Q @ c I differ in the last bit under BLAS)
    a = np.array(f.coeffs)
    a[0, 0] = 0.0
    return BiPolynomial(a)


def difference_direct(f, pair1, pair2):
    """``f(T1, R1) - f(T2, R2)`` by direct evaluation; the constant term is skipped."""
    _check_dims(pair1.T, pair2.T)
    g = _drop_constant(f)
    return apply(g, pair1) - apply(g, pair2)


def quasicommutator_direct(f, pair1, pair2, Q):
    """``f(T1, R1) Q - Q f(T2, R2)`` by direct evaluation; the constant term is skipped."""
    Q = np.asarray(Q)
    _check_dims(pair1.T, pair2.T, Q)
    g = _drop_constant(f)
    return apply(g, pair1) @ Q - Q @ apply(g, pair2)


def _expansion(f, pair1, pair2, dR, dT):
    """Sum the two telescoping series with middle factors ``dR`` and ``dT``."""
    f = f.trim()
    d = pair1.dim
    n1, n2 = f.deg1, f.deg2
    t1 = matrix_powers(pair1.T, max(n1, 1))
    t2 = matrix_powers(pair2.T, max(n1, 1))
    r2 = matrix_powers(pair2.R, max(n2, 1))
    out = np.zeros((d, d), dtype=complex)
    for j in range(1, n2 + 1):
        out += apply(shift_power(f, 2, j), pair1, t1) @ dR @ r2[j - 1]
    for j in range(1, n1 + 1):
        out += t1[j - 1] @ dT @ apply(shift_power(f, 1, j), pair2, t2)
    return out


def identity_rhs(f, pair1, pair2):
    """Right-hand side of the difference expansion, term by term.

    Terms with ``j`` above the degree in the respective variable vanish and
    are skipped.
    """
    _check_dims(pair1.T, pair2.T)
    return _expansion(f, pair1, pair2, pair1.R - pair2.R, pair1.T - pair2.T)


def quasicommutator_identity_rhs(f, pair1, pair2, Q):
    """Right-hand side of the quasicommutator expansion of ``f(T1,R1) Q - Q f(T2,R2)``."""
    Q = np.asarray(Q, dtype=complex)
    _check_dims(pair1.T, pair2.T, Q)
    dR = pair1.R @ Q - Q @ pair2.R
    dT = pair1.T @ Q - Q @ pair2.T
    return _expansion(f, pair1, pair2, dR, dT)
