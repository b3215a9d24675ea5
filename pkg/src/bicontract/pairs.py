"""Random commuting contraction pairs and perturbations that keep them commuting.

Three schemes:

``diagonal``
    ``T``, ``R`` diagonal with entries uniform in the closed unit disk.
``poly_of_contraction``
    ``T = p(C) / n_p`` and ``R = q(C) / n_q`` for one random contraction ``C``,
    where ``n_p = max(1, grid max of |p| on the circle, ||p(C)||)``.
``triangular``
    ``T``, ``R`` upper-triangular Toeplitz (polynomials in the nilpotent
    shift), each scaled to operator norm exactly 1; typically non-normal.

Perturbations stay inside the scheme, so both pairs commute exactly up to
roundoff, and ``max(||T1 - T2||, ||R1 - R2||) <= DISTANCE_CONSTANT[kind] * eps``.
"""

from dataclasses import dataclass

import numpy as np

from . import _torus
from .funcalc import ContractionPair, commutation_defect
from .matnum import op_norm, schatten_norm

__all__ = [
    "SCHEMES",
    "DISTANCE_CONSTANT",
    "PairScheme",
    "gen_pair",
    "perturb_pair",
    "commutation_defect",
    "pair_distance",
]

SCHEMES = ("diagonal", "poly_of_contraction", "triangular")

DISTANCE_CONSTANT = {"diagonal": 1.0, "poly_of_contraction": 2.0, "triangular": 2.0}

POLY_DEGREE = 3


@dataclass(frozen=True)
class PairScheme:
    kind: str
    dim: int
    seed: int
    perturbation_scale: float = 0.0

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError("unknown pair scheme %r" % self.kind)
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.perturbation_scale < 0:
            raise ValueError("perturbation scale must be nonnegative")


def _rng(seed, stream):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def _disk(rng, size):
    return np.sqrt(rng.random(size)) * np.exp(2j * np.pi * rng.random(size))


def _unimodular(rng, size=None):
    return np.exp(2j * np.pi * rng.random(size))


def _matrix_poly(coeffs, C):
    out = np.zeros_like(C)
    eye = np.eye(C.shape[0])
    for c in coeffs[::-1]:
        out = out @ C + c * eye
    return out


def _poly_normalizer(coeffs, P):
    grid = 8 * len(coeffs)
    circle = np.abs(_torus.grid_values(np.asarray(coeffs)[:, None], (0, 0), (grid, 1)))
    return max(1.0, float(circle.max()), op_norm(P))


def _toeplitz_upper(coeffs, d):
    out = np.zeros((d, d), dtype=complex)
    for k, c in enumerate(coeffs[:d]):
        out += c * np.eye(d, k=k)
    return out


def gen_pair(scheme):
    """Draw a :class:`~bicontract.funcalc.ContractionPair`; deterministic in ``scheme.seed``."""
    rng = _rng(scheme.seed, 0)
    d = scheme.dim
    if scheme.kind == "diagonal":
        t, r = _disk(rng, d), _disk(rng, d)
        return ContractionPair(np.diag(t), np.diag(r), recipe={"kind": "diagonal", "t": t, "r": r})
    if scheme.kind == "poly_of_contraction":
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        C = G / op_norm(G)
        p = _disk(rng, POLY_DEGREE + 1)
        q = _disk(rng, POLY_DEGREE + 1)
        return _poly_pair(C, p, q)
    # triangular: band weights decay geometrically
    decay = 0.7 ** np.arange(d)
    X = _toeplitz_upper(_disk(rng, d) * decay, d)
    Y = _toeplitz_upper(_disk(rng, d) * decay, d)
    T, R = X / op_norm(X), Y / op_norm(Y)
    return ContractionPair(T, R, recipe={"kind": "triangular"})


def _poly_pair(C, p, q):
    P, Qm = _matrix_poly(p, C), _matrix_poly(q, C)
    T = P / _poly_normalizer(p, P)
    R = Qm / _poly_normalizer(q, Qm)
    return ContractionPair(T, R, recipe={"kind": "poly_of_contraction", "C": C, "p": p, "q": q})


def _clamp(z):
    mod = np.abs(z)
    return np.where(mod > 1.0, z / np.maximum(mod, 1.0), z)


def perturb_pair(pair, scheme, eps, seed=None):
    """A second pair at distance at most ``DISTANCE_CONSTANT[kind] * eps``.

    ``diagonal`` moves every eigenvalue by ``eps`` in a random direction and
    clamps radially into the disk. ``poly_of_contraction`` perturbs each
    coefficient of ``p`` and ``q`` by at most ``eps / (deg + 1)`` and
    renormalizes. ``triangular`` shifts the shared diagonal by ``eps`` times a
    random unimodular number and rescales if the norm exceeds one.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    kind = (pair.recipe or {}).get("kind")
    if kind != scheme.kind:
        raise ValueError("pair was not generated by scheme %r" % scheme.kind)
    if eps == 0:
        return pair
    rng = _rng(scheme.seed if seed is None else seed, 1)
    recipe = pair.recipe
    if kind == "diagonal":
        t = _clamp(recipe["t"] + eps * _unimodular(rng, recipe["t"].shape))
        r = _clamp(recipe["r"] + eps * _unimodular(rng, recipe["r"].shape))
        return ContractionPair(np.diag(t), np.diag(r), recipe={"kind": "diagonal", "t": t, "r": r})
    if kind == "poly_of_contraction":
        p, q = recipe["p"], recipe["q"]
        p2 = p + eps / p.size * _disk(rng, p.size)
        q2 = q + eps / q.size * _disk(rng, q.size)
        return _poly_pair(recipe["C"], p2, q2)
    d = pair.dim
    T = pair.T + eps * _unimodular(rng) * np.eye(d)
    R = pair.R + eps * _unimodular(rng) * np.eye(d)
    T = T / max(1.0, op_norm(T))
    R = R / max(1.0, op_norm(R))
    return ContractionPair(T, R, recipe={"kind": "triangular"})


def pair_distance(pair1, pair2, p=np.inf):
    """``max(||T1 - T2||_p, ||R1 - R2||_p)``."""
    return max(schatten_norm(pair1.T - pair2.T, p), schatten_norm(pair1.R - pair2.R, p))
