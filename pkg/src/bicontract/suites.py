"""Randomized experiment suites, one per perturbation inequality or identity.

Every suite draws independent trials from a :class:`SuiteConfig`. A trial
produces one or more :class:`Measurement` values ``(kind, label, lhs, rhs)``
and each kind has a score (a ratio ``lhs / rhs`` or a gap ``lhs - rhs``) and
a threshold. The report keeps, per kind, the maximum score together with the
complete inputs of the trial that attained it, so that the extremal value can
be recomputed with :func:`replay_witness`.

Per-trial seeds derive from ``(config.seed, trial index)`` only, so adding
trials never changes earlier ones.
"""

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .besov import ModulusOfContinuity, besov_norm, holder_norm
from .besov import lambda_omega_seminorm, omega_star
from .bipoly import BiPolynomial, UniPolynomial, random_bipoly, shift_sum_sq, sup_norm_torus
from .errors import ConfigError
from .funcalc import (ContractionPair, apply, difference_direct, identity_rhs,
                      quasicommutator_direct, quasicommutator_identity_rhs)
from .matnum import (decay_fit, matrix_from_json, matrix_to_json, op_norm,
                     schatten_norm, singular_values)
from .opineq import (PolynomialFamily, col_block, bilinear_bound_sides, family_from_polynomials,
                     gram_norms, row_block, sq_sum_max, transformer, transformer_factorized)
from .pairs import SCHEMES, PairScheme, gen_pair, pair_distance, perturb_pair

__all__ = [
    "SuiteConfig",
    "SuiteReport",
    "Measurement",
    "SUITES",
    "default_config",
    "load_config",
    "run_suite",
    "replay_witness",
    "write_report",
]

REPORT_SCHEMA = "bicontract-report/1"
CSV_SCHEMA = "bicontract-trials/1"
CSV_COLUMNS = ["trial", "seed", "kind", "label", "scheme", "dim", "degree", "p", "alpha",
               "epsilon", "lhs", "rhs", "ratio", "score", "degenerate"]
FLOOR = 1e-12
CAP = 10.0

DEFAULT_TOLERANCES = {
    "identity": 1e-9,
    "von_neumann": 1e-8,
    "opineq": 1e-8,
    "factorized": 1e-10,
    "spectrum": 1e-8,
    "shift_square_sum_cap": CAP,
    "bernstein_cap": CAP,
    "lipschitz_cap": CAP,
    "holder_cap": CAP,
    "modulus_cap": CAP,
    "schatten_cap": CAP,
    "commutator_cap": CAP,
    "decay": math.inf,
}


@dataclass
class SuiteConfig:
    suite: str
    trials: int = 100
    dims: list = field(default_factory=lambda: [2, 4, 8])
    degrees: list = field(default_factory=lambda: [2, 4, 8])
    schemes: list = field(default_factory=lambda: list(SCHEMES))
    p_values: list = field(default_factory=lambda: [1, 2, 4, "inf"])
    alpha_values: list = field(default_factory=lambda: [0.25, 0.5, 0.75])
    epsilons: list = field(default_factory=lambda: [1e-3, 1e-2, 1e-1, 0.5])
    seed: int = 20240101
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError("unknown suite %r; known: %s" % (self.suite, ", ".join(SUITES)))
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials must be a positive integer")
        for name in ("dims", "degrees", "schemes", "p_values", "alpha_values", "epsilons"):
            val = getattr(self, name)
            if not isinstance(val, (list, tuple)) or len(val) == 0:
                raise ConfigError("%s must be a nonempty list" % name)
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError("unknown pair scheme %r" % s)
        if any(int(d) < 1 for d in self.dims):
            raise ConfigError("dims must be positive")
        if any(int(n) < 0 for n in self.degrees):
            raise ConfigError("degrees must be nonnegative")
        if any(float(e) < 0 for e in self.epsilons):
            raise ConfigError("epsilons must be nonnegative")
        if any(not 0 < float(a) < 1 for a in self.alpha_values):
            raise ConfigError("alpha values must lie in (0, 1)")
        for p in self.p_values:
            if _p(p) < 1:
                raise ConfigError("p values must be >= 1")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError("unknown tolerance keys: %s" % sorted(unknown))

    def tol(self, key):
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))


@dataclass
class Measurement:
    kind: str
    label: str
    lhs: float
    rhs: float


@dataclass
class SuiteReport:
    suite: str
    theorem: str
    config: dict
    records: list
    aggregates: dict
    passed: bool
    elapsed: float

    @property
    def max_ratio(self):
        return max((a["max_score"] for a in self.aggregates.values()), default=0.0)

    def header(self):
        return {
            "schema": REPORT_SCHEMA,
            "csv_schema": CSV_SCHEMA,
            "csv_columns": CSV_COLUMNS,
            "suite": self.suite,
            "theorem": self.theorem,
        }

    def to_json(self):
        return {
            "header": self.header(),
            "config": self.config,
            "pass": self.passed,
            "elapsed_seconds": self.elapsed,
            "trials": self.config["trials"],
            "aggregates": self.aggregates,
        }


# ---------------------------------------------------------------------------
# serialization of trial inputs


def encode(obj):
    if isinstance(obj, ContractionPair):
        return {"__type__": "pair", "T": matrix_to_json(obj.T), "R": matrix_to_json(obj.R)}
    if isinstance(obj, BiPolynomial):
        return {"__type__": "bipoly", **obj.to_json()}
    if isinstance(obj, UniPolynomial):
        return {"__type__": "unipoly", "coeffs": [[float(c.real), float(c.imag)] for c in obj.coeffs]}
    if isinstance(obj, PolynomialFamily):
        return {"__type__": "polyfamily", "members": [encode(f) for f in obj.members]}
    if isinstance(obj, ModulusOfContinuity):
        return {"__type__": "modulus", **obj.to_json()}
    if isinstance(obj, np.ndarray):
        return {"__type__": "matrix", **matrix_to_json(obj)}
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else {"__type__": "float", "value": repr(v)}
    return obj


def decode(obj):
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    if not isinstance(obj, dict):
        return obj
    kind = obj.get("__type__")
    if kind is None:
        return {k: decode(v) for k, v in obj.items()}
    if kind == "pair":
        return ContractionPair(matrix_from_json(obj["T"]), matrix_from_json(obj["R"]))
    if kind == "bipoly":
        return BiPolynomial.from_json(obj)
    if kind == "unipoly":
        c = np.asarray(obj["coeffs"], dtype=float)
        return UniPolynomial(c[:, 0] + 1j * c[:, 1])
    if kind == "polyfamily":
        return PolynomialFamily(tuple(decode(m) for m in obj["members"]))
    if kind == "modulus":
        return ModulusOfContinuity.from_json(obj)
    if kind == "matrix":
        return matrix_from_json(obj)
    if kind == "float":
        return float(obj["value"])
    raise ValueError("unknown encoded type %r" % kind)


# ---------------------------------------------------------------------------
# shared population helpers


def _p(p):
    if isinstance(p, str):
        return math.inf if p.lower() in ("inf", "infinity") else float(p)
    return float(p)


def _p_label(p):
    p = _p(p)
    return "inf" if math.isinf(p) else ("%g" % p)


def trial_seed(master, index):
    """64-bit seed of trial ``index``; independent of execution order and trial count."""
    ss = np.random.SeedSequence([int(master) & (2 ** 63 - 1), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _pair_population(rng, cfg, index, seed):
    kind = cfg.schemes[index % len(cfg.schemes)]
    dim = int(_pick(rng, cfg.dims))
    eps = float(_pick(rng, cfg.epsilons))
    scheme = PairScheme(kind, dim, seed)
    pair1 = gen_pair(scheme)
    pair2 = perturb_pair(pair1, scheme, eps)
    return {"scheme": kind, "dim": dim, "epsilon": eps}, pair1, pair2


def _random_q(rng, d, max_norm=1.0):
    """Random matrix of random rank with operator norm ``u * max_norm``, ``u`` in (0, 1]."""
    rank = int(rng.integers(1, d + 1))
    A = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    B = rng.standard_normal((rank, d)) + 1j * rng.standard_normal((rank, d))
    Q = A @ B
    return Q * (max_norm * (1.0 - rng.random()) / op_norm(Q))


def _lacunary(rng, deg):
    """Sparse dyadic-frequency polynomial; one block per dyadic scale."""
    terms = {(0, 0): complex(rng.standard_normal())}
    k = 1
    while k <= deg:
        which = int(rng.integers(3))
        idx = [(k, 0), (0, k), (k, k)][which]
        terms[idx] = terms.get(idx, 0) + np.exp(2j * np.pi * rng.random()) * (1.0 - 0.5 * rng.random())
        k *= 2
    return BiPolynomial.from_terms(terms)


def _random_f(rng, deg, families=("dense", "lacunary", "monomial")):
    family = _pick(rng, list(families))
    if deg == 0:
        return family, BiPolynomial.constant(np.exp(2j * np.pi * rng.random()))
    if family == "dense":
        d1 = int(rng.integers(0, deg + 1))
        d2 = deg if d1 < deg else int(rng.integers(0, deg + 1))
        if rng.random() < 0.5:
            d1, d2 = d2, d1
        return family, random_bipoly(rng, d1, d2)
    if family == "lacunary":
        return family, _lacunary(rng, deg)
    k = int(rng.integers(0, deg + 1))
    return family, BiPolynomial.monomial(k, deg - k)


def _meta(info, f=None, p=None, alpha=None):
    out = dict(info)
    if f is not None:
        out["degree"] = f.degree
    if p is not None:
        out["p"] = _p_label(p)
    if alpha is not None:
        out["alpha"] = alpha
    return out


# ---------------------------------------------------------------------------
# suites: each has make(rng, cfg, index, seed) -> inputs, and measure(inputs) -> [Measurement]


def _make_identity(rng, cfg, index, seed):
    info, pair1, pair2 = _pair_population(rng, cfg, index, seed)
    deg = int(_pick(rng, cfg.degrees))
    f = random_bipoly(rng, int(rng.integers(0, deg + 1)), deg)
    if rng.random() < 0.5:
        f = BiPolynomial(f.coeffs.T)
    Q = _random_q(rng, info["dim"])
    return {"meta": _meta(info, f), "f": f, "pair1": pair1, "pair2": pair2, "Q": Q}


def _measure_identity(x):
    f, p1, p2, Q = x["f"], x["pair1"], x["pair2"], x["Q"]
    lhs = difference_direct(f, p1, p2)
    rhs = identity_rhs(f, p1, p2)
    qlhs = quasicommutator_direct(f, p1, p2, Q)
    qrhs = quasicommutator_identity_rhs(f, p1, p2, Q)
    return [
        Measurement("difference", "", op_norm(rhs - lhs), op_norm(lhs)),
        Measurement("quasicommutator", "", op_norm(qrhs - qlhs), op_norm(qlhs)),
    ]


def _make_von_neumann(rng, cfg, index, seed):
    kind = cfg.schemes[index % len(cfg.schemes)]
    dim = int(_pick(rng, cfg.dims))
    pair = gen_pair(PairScheme(kind, dim, seed))
    deg = int(_pick(rng, cfg.degrees))
    _, f = _random_f(rng, deg, ("dense", "monomial"))
    return {"meta": _meta({"scheme": kind, "dim": dim}, f), "f": f, "pair": pair}


def _measure_von_neumann(x):
    f, pair = x["f"], x["pair"]
    return [Measurement("von_neumann", "", op_norm(apply(f, pair)), sup_norm_torus(f).grid_max)]


def _make_opineq(rng, cfg, index, seed):
    info, pair1, pair2 = _pair_population(rng, cfg, index, seed)
    if rng.random() < 0.3:
        other = gen_pair(PairScheme(info["scheme"], info["dim"], seed ^ 0x5A5A5A5A))
        pair2 = other
    size = int(rng.integers(1, 9))
    deg = int(_pick(rng, cfg.degrees))
    polys1 = PolynomialFamily(tuple(random_bipoly(rng, int(rng.integers(0, deg + 1)),
                                                  int(rng.integers(0, deg + 1))) for _ in range(size)))
    polys2 = PolynomialFamily(tuple(random_bipoly(rng, int(rng.integers(0, deg + 1)),
                                                  int(rng.integers(0, deg + 1))) for _ in range(size)))
    Q = _random_q(rng, info["dim"], max_norm=float(1 + 3 * rng.random()))
    info = dict(info, degree=deg)
    return {"meta": info, "polys1": polys1, "polys2": polys2, "pair1": pair1, "pair2": pair2,
            "Q": Q, "p_values": [_p_label(p) for p in cfg.p_values]}


def _measure_opineq(x):
    pair1, pair2, Q = x["pair1"], x["pair2"], x["Q"]
    out = []
    fams = []
    for which, polys, pair in ((1, x["polys1"], pair1), (2, x["polys2"], pair2)):
        scaled = polys.scaled(sq_sum_max(polys) ** -0.5)
        fam = family_from_polynomials(scaled, pair)
        out.append(Measurement("gram", "family=%d" % which, max(gram_norms(fam)), 1.0))
        fams.append(fam)
    fam1, fam2 = fams
    direct = transformer(fam1, Q, fam2)
    for p in x["p_values"]:
        pv = _p(p)
        qn = schatten_norm(Q, pv)
        label = "p=%s" % _p_label(p)
        if pv >= 2:
            out.append(Measurement("row", label, schatten_norm(row_block(fam1, Q), pv), qn))
            out.append(Measurement("col", label, schatten_norm(col_block(fam2, Q), pv), qn))
        out.append(Measurement("transformer", label, schatten_norm(direct, pv), qn))
        fact = transformer_factorized(fam1, Q, fam2, pv)
        out.append(Measurement("factorized", label, op_norm(fact - direct), op_norm(direct)))
        lhs, rhs = bilinear_bound_sides(x["polys1"], x["polys2"], pair1, pair2, Q, pv)
        out.append(Measurement("bilinear_bound", label, lhs, rhs))
    return out


SHIFT_SUM_ZETAS = 256


def _make_shift_square_sum(rng, cfg, index, seed):
    deg = max(1, int(_pick(rng, cfg.degrees)))
    c = np.sqrt(rng.random(deg + 1)) * np.exp(2j * np.pi * rng.random(deg + 1))
    n = int(rng.integers(1, deg + 1))
    return {"meta": {"degree": deg, "n": n}, "f": UniPolynomial(c), "n": n}


def _measure_shift_square_sum(x):
    f, n = x["f"], x["n"]
    zeta = np.exp(2j * np.pi * np.arange(SHIFT_SUM_ZETAS) / SHIFT_SUM_ZETAS)
    top = float(np.max(shift_sum_sq(f, n, zeta)))
    return [Measurement("shift_square_sum", "", top, n * f.sup_norm().grid_max ** 2)]


def _make_perturbation(rng, cfg, index, seed, families=("dense", "lacunary", "monomial")):
    info, pair1, pair2 = _pair_population(rng, cfg, index, seed)
    deg = int(_pick(rng, cfg.degrees))
    family, f = _random_f(rng, deg, families)
    return {"meta": _meta(dict(info, family=family), f), "f": f, "pair1": pair1, "pair2": pair2}


def _measure_bernstein(x):
    f, p1, p2 = x["f"], x["pair1"], x["pair2"]
    lhs = op_norm(difference_direct(f, p1, p2))
    n = f.degree
    return [Measurement("bernstein", "", lhs, n * sup_norm_torus(f).grid_max * pair_distance(p1, p2))]


def _measure_lipschitz(x):
    f, p1, p2 = x["f"], x["pair1"], x["pair2"]
    lhs = op_norm(difference_direct(f, p1, p2))
    return [Measurement("lipschitz", "", lhs, besov_norm(f, 1, np.inf, 1) * pair_distance(p1, p2))]


def _make_holder(rng, cfg, index, seed):
    x = _make_perturbation(rng, cfg, index, seed)
    x["alphas"] = [float(a) for a in cfg.alpha_values]
    return x


def _measure_holder(x):
    f, p1, p2 = x["f"], x["pair1"], x["pair2"]
    lhs = op_norm(difference_direct(f, p1, p2))
    dist = pair_distance(p1, p2)
    return [Measurement("holder", "alpha=%g" % a, lhs, holder_norm(f, a) * dist ** a)
            for a in x["alphas"]]


def _make_modulus(rng, cfg, index, seed):
    x = _make_perturbation(rng, cfg, index, seed)
    alpha = float(_pick(rng, cfg.alpha_values))
    if rng.random() < 0.5:
        omega = ModulusOfContinuity.power(alpha)
    else:
        knots = np.concatenate([[0.0], np.geomspace(1e-6, 64.0, 400)])
        omega = ModulusOfContinuity.tabulated(knots, knots ** alpha)
    x["omega"] = omega
    x["meta"]["alpha"] = alpha
    return x


def _measure_modulus(x):
    f, p1, p2, omega = x["f"], x["pair1"], x["pair2"], x["omega"]
    lhs = op_norm(difference_direct(f, p1, p2))
    dist = pair_distance(p1, p2)
    grid = max(32, 4 * (f.degree + 1))
    star = omega_star(omega, dist) if dist > 0 else 0.0
    return [Measurement("modulus", omega.kind, lhs, lambda_omega_seminorm(f, omega, grid) * star)]


def _make_schatten(rng, cfg, index, seed):
    x = _make_perturbation(rng, cfg, index, seed)
    x["p_values"] = [_p_label(p) for p in cfg.p_values if not math.isinf(_p(p))]
    x["alphas"] = [float(a) for a in cfg.alpha_values]
    return x


def _jordan_wielandt_values(M):
    """Singular values as the nonnegative eigenvalues of ``[[0, M], [M^*, 0]]``."""
    d = M.shape[0]
    H = np.zeros((2 * d, 2 * d), dtype=complex)
    H[:d, d:] = M
    H[d:, :d] = M.conj().T
    return np.sort(np.linalg.eigvalsh(H))[::-1][:d]


def _measure_schatten(x):
    f, p1, p2 = x["f"], x["pair1"], x["pair2"]
    diff = difference_direct(f, p1, p2)
    dT, dR = p1.T - p2.T, p1.R - p2.R
    out = []
    besov = None
    for p in x["p_values"]:
        pv = _p(p)
        lab = "p=%s" % _p_label(p)
        dist = max(schatten_norm(dT, pv), schatten_norm(dR, pv))
        if besov is None:
            besov = besov_norm(f, 1, np.inf, 1)
        out.append(Measurement("lipschitz_sp", lab, schatten_norm(diff, pv), besov * dist))
        for a in x["alphas"]:
            alab = "%s,alpha=%g" % (lab, a)
            if pv > 1:
                out.append(Measurement("holder_sp", alab, schatten_norm(diff, pv / a),
                                       holder_norm(f, a) * dist ** a))
            else:
                out.append(Measurement("decay", alab, decay_fit(singular_values(diff), a / pv), 1.0))
    s = singular_values(diff)
    oracle = _jordan_wielandt_values(diff)
    out.append(Measurement("spectrum", "", float(np.max(np.abs(s - oracle), initial=0.0)),
                           float(s[0]) if s.size else 0.0))
    return out


def _make_commutator(rng, cfg, index, seed):
    x = _make_perturbation(rng, cfg, index, seed)
    d = x["meta"]["dim"]
    pair1 = x["pair1"]
    mode = _pick(rng, ["random", "identity", "near_commuting", "same_pair"])
    if mode == "identity":
        Q = np.eye(d, dtype=complex)
    elif mode == "near_commuting":
        g = random_bipoly(rng, 2, 2)
        G = apply(g, pair1)
        Q = G + 10.0 ** rng.uniform(-4, -1) * op_norm(G) * _random_q(rng, d)
        Q = Q / max(1.0, op_norm(Q))
    else:
        Q = _random_q(rng, d)
    if mode == "same_pair":
        x["pair2"] = pair1
    x["Q"] = Q
    x["meta"]["q_mode"] = mode
    x["p_values"] = [_p_label(p) for p in cfg.p_values if 1 < _p(p) < math.inf]
    x["alphas"] = [float(a) for a in cfg.alpha_values]
    return x


def _measure_commutator(x):
    f, p1, p2, Q = x["f"], x["pair1"], x["pair2"], x["Q"]
    qc = quasicommutator_direct(f, p1, p2, Q)
    cT = p1.T @ Q - Q @ p2.T
    cR = p1.R @ Q - Q @ p2.R
    qn = op_norm(Q)
    out = [Measurement("quasi_lipschitz", "", op_norm(qc),
                       besov_norm(f, 1, np.inf, 1) * max(op_norm(cT), op_norm(cR)))]
    for p in x["p_values"]:
        pv = _p(p)
        dist = max(schatten_norm(cT, pv), schatten_norm(cR, pv))
        for a in x["alphas"]:
            out.append(Measurement("quasi_holder_sp", "p=%s,alpha=%g" % (_p_label(p), a),
                                   schatten_norm(qc, pv / a),
                                   holder_norm(f, a) * dist ** a * qn ** (1 - a)))
    return out


@dataclass(frozen=True)
class Suite:
    name: str
    theorem: str
    make: object
    measure: object
    kinds: dict  # kind -> (score type, tolerance key)
    defaults: dict


def _ratio_kinds(names, key):
    return {n: ("ratio", key) for n in names}


SUITES = {}


def _register(suite):
    SUITES[suite.name] = suite


_register(Suite(
    "identity",
    "telescoping identities for f(T1,R1) - f(T2,R2) and f(T1,R1) Q - Q f(T2,R2)",
    _make_identity, _measure_identity,
    _ratio_kinds(["difference", "quasicommutator"], "identity"),
    {"trials": 1000, "dims": [1, 2, 4, 8, 12, 16], "degrees": [0, 1, 2, 3, 4, 5, 6, 7, 8],
     "epsilons": [1e-3, 1e-2, 1e-1, 0.5, 1.0]},
))
_register(Suite(
    "von_neumann",
    "von Neumann inequality ||f(T,R)|| <= max over the bidisk of |f|",
    _make_von_neumann, _measure_von_neumann,
    {"von_neumann": ("gap", "von_neumann")},
    {"trials": 1000, "dims": [1, 2, 4, 8, 12], "degrees": [0, 1, 2, 3, 4, 5, 6]},
))
_register(Suite(
    "opineq",
    "row/column Schatten bounds, transformer bound for sum A_j Q B_j, polynomial-family bilinear bound",
    _make_opineq, _measure_opineq,
    {"gram": ("excess", "opineq"), "row": ("excess", "opineq"), "col": ("excess", "opineq"),
     "transformer": ("excess", "opineq"), "bilinear_bound": ("excess", "opineq"),
     "factorized": ("ratio", "factorized")},
    {"trials": 500, "dims": [1, 2, 4, 6, 8, 10], "degrees": [0, 1, 2, 3, 4],
     "p_values": [1, 2, 4, "inf"]},
))
_register(Suite(
    "shift_square_sum",
    "square-function bound sum_j |(S*)^j f|^2 <= C n ||f||_inf^2 for backward shifts",
    _make_shift_square_sum, _measure_shift_square_sum,
    {"shift_square_sum": ("ratio", "shift_square_sum_cap")},
    {"trials": 10000, "degrees": list(range(1, 65))},
))
_register(Suite(
    "bernstein",
    "Bernstein-type bound ||f(T1,R1) - f(T2,R2)|| <= C n ||f||_inf dist",
    lambda rng, cfg, i, s: _make_perturbation(rng, cfg, i, s), _measure_bernstein,
    {"bernstein": ("ratio", "bernstein_cap")},
    {"trials": 500, "dims": [1, 2, 4, 8, 16], "degrees": [1, 2, 4, 8, 16, 32, 64]},
))
_register(Suite(
    "lipschitz",
    "operator Lipschitz bound with the Besov B^1_{inf,1} norm",
    lambda rng, cfg, i, s: _make_perturbation(rng, cfg, i, s), _measure_lipschitz,
    {"lipschitz": ("ratio", "lipschitz_cap")},
    {"trials": 500, "dims": [1, 2, 4, 8, 16], "degrees": [0, 1, 2, 4, 8, 16]},
))
_register(Suite(
    "holder",
    "operator Holder bound with the Holder-Zygmund Lambda_alpha norm",
    _make_holder, _measure_holder,
    {"holder": ("ratio", "holder_cap")},
    {"trials": 500, "dims": [1, 2, 4, 8, 16], "degrees": [0, 1, 2, 4, 8, 16]},
))
_register(Suite(
    "modulus",
    "operator modulus-of-continuity bound through omega_*",
    _make_modulus, _measure_modulus,
    {"modulus": ("ratio", "modulus_cap")},
    {"trials": 500, "dims": [1, 2, 4, 8, 16], "degrees": [0, 1, 2, 4, 8, 16]},
))
_register(Suite(
    "schatten",
    "Schatten-class Lipschitz and Holder bounds; singular-value decay of the difference",
    _make_schatten, _measure_schatten,
    {"lipschitz_sp": ("ratio", "schatten_cap"), "holder_sp": ("ratio", "schatten_cap"),
     "decay": ("value", "decay"), "spectrum": ("ratio", "spectrum")},
    {"trials": 500, "dims": [1, 2, 4, 8, 16], "degrees": [0, 1, 2, 4, 8, 16], "p_values": [1, 2, 4]},
))
_register(Suite(
    "commutator",
    "quasicommutator Lipschitz bound and Schatten Holder bound with the ||Q||^(1-alpha) factor",
    _make_commutator, _measure_commutator,
    {"quasi_lipschitz": ("ratio", "commutator_cap"), "quasi_holder_sp": ("ratio", "commutator_cap")},
    {"trials": 500, "dims": [1, 2, 4, 8, 16], "degrees": [0, 1, 2, 4, 8, 16], "p_values": [2, 4]},
))


# ---------------------------------------------------------------------------
# running


def default_config(suite, **overrides):
    if suite not in SUITES:
        raise ConfigError("unknown suite %r; known: %s" % (suite, ", ".join(SUITES)))
    params = dict(SUITES[suite].defaults)
    params.update(overrides)
    return SuiteConfig(suite=suite, **params)


def load_config(path_or_dict, **overrides):
    """Build a :class:`SuiteConfig` from a JSON file (or dict) plus overrides.

    Keys absent from the document take the suite's defaults.
    """
    if isinstance(path_or_dict, dict):
        doc = dict(path_or_dict)
    else:
        try:
            doc = json.loads(Path(path_or_dict).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("cannot read config %s: %s" % (path_or_dict, exc)) from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    doc.update({k: v for k, v in overrides.items() if v is not None})
    suite = doc.pop("suite", None)
    if suite is None:
        raise ConfigError("config names no suite")
    known = set(SuiteConfig.__dataclass_fields__) - {"suite"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError("unknown config keys: %s" % sorted(unknown))
    return default_config(suite, **doc)


def _score(score_type, lhs, rhs):
    if score_type == "ratio":
        return lhs / (FLOOR + rhs)
    if score_type == "gap":
        return lhs - rhs
    if score_type == "excess":
        return (lhs - rhs) / max(rhs, FLOOR)
    if score_type == "value":
        return lhs
    raise ValueError(score_type)


def run_suite(config, progress=None):
    """Execute all trials of ``config`` and aggregate per measurement kind."""
    suite = SUITES[config.suite]
    records = []
    agg = {}
    started = time.perf_counter()
    for i in range(config.trials):
        seed = trial_seed(config.seed, i)
        rng = np.random.default_rng(seed)
        inputs = suite.make(rng, config, i, seed)
        meta = inputs["meta"]
        for m in suite.measure(inputs):
            score_type, key = suite.kinds[m.kind]
            score = _score(score_type, m.lhs, m.rhs)
            degenerate = m.lhs == 0.0 and m.rhs <= FLOOR
            rec = {
                "trial": i, "seed": seed, "kind": m.kind, "label": m.label,
                "scheme": meta.get("scheme", ""), "dim": meta.get("dim", ""),
                "degree": meta.get("degree", ""), "p": meta.get("p", _label_part(m.label, "p")),
                "alpha": meta.get("alpha", _label_part(m.label, "alpha")),
                "epsilon": meta.get("epsilon", ""),
                "lhs": m.lhs, "rhs": m.rhs, "ratio": m.lhs / (FLOOR + m.rhs),
                "score": score, "degenerate": degenerate,
            }
            records.append(rec)
            a = agg.setdefault(m.kind, {
                "score_type": score_type, "threshold": config.tol(key),
                "count": 0, "degenerate": 0, "sum_score": 0.0, "max_score": -math.inf,
                "argmax_witness": None, "per_scheme": {},
            })
            if rec["scheme"]:
                prev = a["per_scheme"].get(rec["scheme"], -math.inf)
                a["per_scheme"][rec["scheme"]] = max(prev, score)
            a["count"] += 1
            a["degenerate"] += int(degenerate)
            a["sum_score"] += score if math.isfinite(score) else 0.0
            if score > a["max_score"] or not math.isfinite(score):
                a["max_score"] = score
                a["argmax_witness"] = {"suite": config.suite, "kind": m.kind, "label": m.label,
                                       "trial": i, "seed": seed, "lhs": m.lhs, "rhs": m.rhs,
                                       "score": score, "inputs": inputs}
        if progress is not None:
            progress(i + 1, config.trials)
    aggregates = {}
    passed = True
    for kind, a in agg.items():
        ok = math.isfinite(a["max_score"]) and a["max_score"] <= a["threshold"]
        passed &= ok
        aggregates[kind] = {
            "score_type": a["score_type"],
            "threshold": a["threshold"],
            "count": a["count"],
            "degenerate": a["degenerate"],
            "max_score": a["max_score"],
            "mean_score": a["sum_score"] / a["count"],
            "per_scheme_max": a["per_scheme"],
            "pass": ok,
            "argmax_witness": encode(a["argmax_witness"]),
        }
    return SuiteReport(config.suite, suite.theorem, _config_dict(config), records, aggregates,
                       bool(passed), time.perf_counter() - started)


def _label_part(label, name):
    for part in label.split(","):
        if part.startswith(name + "="):
            return part.split("=", 1)[1]
    return ""


def _config_dict(cfg):
    d = asdict(cfg)
    d["p_values"] = [_p_label(p) for p in cfg.p_values]
    d["tolerances"] = {k: cfg.tol(k) if math.isfinite(cfg.tol(k)) else "inf"
                       for k in DEFAULT_TOLERANCES}
    return d


def replay_witness(witness):
    """Recompute the score of an ``argmax_witness`` record from its stored inputs."""
    suite = SUITES[witness["suite"]]
    inputs = decode(witness["inputs"])
    for m in suite.measure(inputs):
        if m.kind == witness["kind"] and m.label == witness["label"]:
            return _score(suite.kinds[m.kind][0], m.lhs, m.rhs)
    raise ValueError("witness kind %r / label %r not produced on replay"
                     % (witness["kind"], witness["label"]))


def write_report(report, out_dir):
    """Write ``report.json`` and ``trials.csv`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.json", "w") as fh:
        json.dump(report.to_json(), fh, indent=1, default=_json_default)
    with open(out / "trials.csv", "w", newline="") as fh:
        fh.write("# %s\n" % CSV_SCHEMA)
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for rec in report.records:
            writer.writerow({k: _csv_cell(rec[k]) for k in CSV_COLUMNS})
    return out / "report.json", out / "trials.csv"


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError("not JSON serializable: %r" % type(o))
