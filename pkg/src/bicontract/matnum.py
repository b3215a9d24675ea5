"""Matrix numerics: singular values, Schatten norms and related utilities."""

import json

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "singular_values",
    "schatten_norm",
    "op_norm",
    "schatten_split",
    "decay_fit",
    "numerical_radius",
    "matrix_to_json",
    "matrix_from_json",
]


def _as_matrix(M):
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("expected a 2-D matrix, got shape %r" % (M.shape,))
    return M


def singular_values(M):
    """Singular values in nonincreasing order, ``min(rows, cols)`` of them."""
    return np.linalg.svd(_as_matrix(M), compute_uv=False)


def schatten_norm(M, p):
    r"""Schatten-von Neumann norm :math:`(\sum_j s_j^p)^{1/p}`.

    ``p = np.inf`` (or the string ``"inf"``) gives the operator norm. Values of
    ``p`` below 1 are rejected; those are quasi-norms and are not modeled.
    """
    p = _parse_p(p)
    s = singular_values(M)
    if s.size == 0:
        return 0.0
    if np.isinf(p):
        return float(s[0])
    if p == 1:
        return float(np.sum(s))
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    top = s[0]
    if top == 0.0:
        return 0.0
    # scaled to avoid overflow for large p
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def _parse_p(p):
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "oo"):
            return np.inf
        p = float(p)
    p = float(p)
    if np.isnan(p) or p < 1:
        raise ValueError("Schatten exponent must satisfy p >= 1, got %r" % p)
    return p


def op_norm(M):
    """Operator (spectral) norm."""
    return schatten_norm(M, np.inf)


def schatten_split(Q, p, rtol=1e-10):
    """Factor ``Q = Q1 @ Q2`` with ``||Q1||_{2p} = ||Q2||_{2p} = ||Q||_p ** 0.5``.

    Uses the polar decomposition ``Q = W |Q|`` from the SVD
    ``Q = U diag(s) Vh``: ``Q1 = W |Q|^{1/2} = U diag(sqrt s) Vh`` and
    ``Q2 = |Q|^{1/2} = V diag(sqrt s) Vh``.

    Raises
    ------
    ValueError
        If ``Q`` is the zero matrix.
    ArithmeticError
        If a postcondition fails numerically.
    """
    Q = _as_matrix(Q).astype(complex)
    p = _parse_p(p)
    U, s, Vh = np.linalg.svd(Q, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise ValueError("schatten_split needs a nonzero matrix")
    root = np.sqrt(s)
    Q1 = (U * root) @ Vh
    Q2 = (Vh.conj().T * root) @ Vh
    if op_norm(Q1 @ Q2 - Q) > rtol * s[0]:
        raise ArithmeticError("Q1 @ Q2 does not reproduce Q")
    target = schatten_norm(Q, p) ** 0.5
    for part in (Q1, Q2):
        if abs(schatten_norm(part, 2 * p) - target) > 1e-8 * max(target, 1.0):
            raise ArithmeticError("factor norm differs from ||Q||_p ** 0.5")
    return Q1, Q2


def decay_fit(spectrum, exponent):
    """Smallest ``C`` with ``s_j <= C * (1 + j) ** (-exponent)`` for all ``j``."""
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    s = np.asarray(spectrum, dtype=float)
    if s.size == 0:
        return 0.0
    return float(np.max(s * (1.0 + np.arange(s.size)) ** exponent))


def numerical_radius(M, samples=256):
    r"""Numerical radius :math:`\max_\theta \lambda_{max}(\mathrm{Re}(e^{i\theta} M))`."""
    M = _as_matrix(M).astype(complex)

    def lam(theta):
        H = np.exp(1j * theta) * M
        return np.linalg.eigvalsh(0.5 * (H + H.conj().T))[-1]

    thetas = 2 * np.pi * np.arange(samples) / samples
    vals = np.array([lam(t) for t in thetas])
    k = int(np.argmax(vals))
    h = 2 * np.pi / samples
    res = minimize_scalar(lambda t: -lam(t), bounds=(thetas[k] - h, thetas[k] + h),
                          method="bounded", options={"xatol": 1e-12})
    return float(max(vals[k], -res.fun))


def matrix_to_json(M):
    M = _as_matrix(M)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in np.asarray(M, dtype=complex).ravel()],
    }


def matrix_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    r, c = int(obj["rows"]), int(obj["cols"])
    pairs = np.asarray(obj["entries"], dtype=float).reshape(-1, 2)
    if pairs.shape[0] != r * c:
        raise ValueError("entry count does not match shape")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(r, c)
