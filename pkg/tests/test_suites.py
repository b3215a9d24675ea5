import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from bicontract.bipoly import BiPolynomial
from bicontract.cli import main
from bicontract.errors import ConfigError
from bicontract.funcalc import ContractionPair
from bicontract.pairs import PairScheme, gen_pair
from bicontract.suites import (CSV_COLUMNS, CSV_SCHEMA, REPORT_SCHEMA, SUITES, SuiteConfig, decode, default_config,
                               encode, load_config, replay_witness, run_suite, trial_seed, write_report)

SMALL = {"identity": 20, "von_neumann": 20, "opineq": 8, "shift_square_sum": 50, "bernstein": 20,
         "lipschitz": 20, "holder": 15, "modulus": 10, "schatten": 10, "commutator": 10}


def measure(suite, **inputs):
    return {m.kind + (":" + m.label if m.label else ""): (m.lhs, m.rhs) for m in SUITES[suite].measure(inputs)}


# ---- configuration

@pytest.mark.parametrize("bad", [
    {"suite": "nonexistent"},
    {"suite": "identity", "trials": 0},
    {"suite": "identity", "dims": []},
    {"suite": "identity", "schemes": ["hermitian"]},
    {"suite": "identity", "p_values": [0.5]},
    {"suite": "holder", "alpha_values": [1.0]},
    {"suite": "identity", "epsilons": [-1.0]},
    {"suite": "identity", "tolerances": {"bogus": 1.0}},
    {"suite": "identity", "colour": "red"},
    {"trials": 3},
])
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        load_config(bad)


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"suite": "bernstein", "trials": 7, "dims": [3]}))
    cfg = load_config(path, seed=5)
    assert (cfg.trials, cfg.dims, cfg.seed) == (7, [3], 5)
    assert cfg.degrees == SUITES["bernstein"].defaults["degrees"]
    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "broken.json")


def test_tolerance_override():
    cfg = default_config("bernstein", trials=5, tolerances={"bernstein_cap": 1e-6})
    assert cfg.tol("bernstein_cap") == 1e-6
    assert not run_suite(cfg).passed


def test_registry_names_distinct_inequalities():
    assert len(SUITES) == 10
    headers = [s.theorem for s in SUITES.values()]
    assert all(headers) and len(set(headers)) == len(headers)


# ---- seeds, determinism, monotone evidence

def test_trial_seed_is_order_free():
    seeds = [trial_seed(42, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert trial_seed(42, 17) == seeds[17]
    assert trial_seed(43, 17) != seeds[17]


def test_runs_are_deterministic():
    a = run_suite(default_config("lipschitz", trials=10))
    b = run_suite(default_config("lipschitz", trials=10))
    assert [r["score"] for r in a.records] == [r["score"] for r in b.records]


@pytest.mark.parametrize("suite", ["bernstein", "shift_square_sum", "holder"])
def test_more_trials_never_lower_the_max(suite):
    prev = -np.inf
    for n in (5, 10, 20, 40):
        rep = run_suite(default_config(suite, trials=n))
        assert rep.max_ratio >= prev
        prev = rep.max_ratio


# ---- reports and replay

@pytest.mark.parametrize("suite", list(SUITES))
def test_small_run_passes_and_replays(suite):
    rep = run_suite(default_config(suite, trials=SMALL[suite]))
    assert rep.passed, rep.aggregates
    for kind, agg in rep.aggregates.items():
        w = json.loads(json.dumps(agg["argmax_witness"]))
        score = replay_witness(w)
        assert abs(score - agg["max_score"]) <= 1e-10 * max(1.0, abs(agg["max_score"])), kind


def test_report_files(tmp_path):
    rep = run_suite(default_config("holder", trials=6))
    json_path, csv_path = write_report(rep, tmp_path)
    doc = json.loads(json_path.read_text())
    assert doc["header"]["schema"] == REPORT_SCHEMA
    assert doc["header"]["csv_schema"] == CSV_SCHEMA
    assert doc["header"]["theorem"] == SUITES["holder"].theorem
    assert doc["pass"] is rep.passed
    assert set(doc["aggregates"]["holder"]["per_scheme_max"]) <= {"diagonal", "poly_of_contraction", "triangular"}
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# " + CSV_SCHEMA
    rows = list(csv.DictReader(lines[1:]))
    assert list(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(rep.records) == 6 * 3
    # floats are written with repr, so the CSV preserves every score exactly
    assert [float(r["score"]) for r in rows] == [r["score"] for r in rep.records]


def test_encode_decode_round_trip():
    pair = gen_pair(PairScheme("triangular", 3, 0))
    f = BiPolynomial([[1.0, 2j], [0.5, 0.0]])
    back = decode(json.loads(json.dumps(encode({"pair": pair, "f": f, "x": float("inf")}))))
    assert np.array_equal(back["pair"].T, pair.T)
    assert np.array_equal(back["f"].coeffs, f.coeffs)
    assert back["x"] == float("inf")


# ---- trivial cases of the measurements

def test_identity_equal_pairs_and_scalar_monomial():
    pair = gen_pair(PairScheme("poly_of_contraction", 4, 3))
    out = measure("identity", f=BiPolynomial.monomial(2, 3), pair1=pair, pair2=pair, Q=np.eye(4))
    assert out["difference"] == (0.0, 0.0) and out["quasicommutator"] == (0.0, 0.0)
    p1, p2 = ContractionPair([[0.3j]], [[0.9]]), ContractionPair([[-0.2]], [[0.5 + 0.5j]])
    out = measure("identity", f=BiPolynomial.monomial(3, 2), pair1=p1, pair2=p2, Q=np.array([[0.7]]))
    assert out["difference"][0] <= 1e-15 * out["difference"][1]


def test_bernstein_trivial_cases():
    scheme = PairScheme("diagonal", 3, 0)
    p1, p2 = gen_pair(scheme), gen_pair(PairScheme("diagonal", 3, 1))
    lhs, rhs = measure("bernstein", f=BiPolynomial.constant(2.0), pair1=p1, pair2=p2)["bernstein"]
    assert lhs == 0.0
    q1, q2 = ContractionPair([[0.2]], [[0.1]]), ContractionPair([[0.6]], [[0.3j]])
    lhs, rhs = measure("bernstein", f=BiPolynomial.monomial(1, 0), pair1=q1, pair2=q2)["bernstein"]
    assert lhs / rhs <= 1.0 + 1e-15


def test_holder_and_commutator_trivial_cases():
    pair = gen_pair(PairScheme("triangular", 4, 2))
    f = BiPolynomial([[0.3, 1.0], [0.2j, 0.5]])
    out = measure("holder", f=f, pair1=pair, pair2=pair, alphas=[0.5])
    assert out["holder:alpha=0.5"][0] == 0.0
    other = gen_pair(PairScheme("triangular", 4, 3))
    out = measure("commutator", f=f, pair1=pair, pair2=other, Q=np.zeros((4, 4)), p_values=["2"], alphas=[0.5])
    assert all(lhs == 0.0 for lhs, _ in out.values())


def test_commutator_identity_q_reduces_to_lipschitz():
    scheme = PairScheme("diagonal", 3, 4)
    p1 = gen_pair(scheme)
    p2 = gen_pair(PairScheme("diagonal", 3, 5))
    f = BiPolynomial([[0.3, 1.0], [0.2j, 0.5]])
    q = measure("commutator", f=f, pair1=p1, pair2=p2, Q=np.eye(3), p_values=[], alphas=[])
    lip = measure("lipschitz", f=f, pair1=p1, pair2=p2)
    assert q["quasi_lipschitz"] == pytest.approx(lip["lipschitz"], rel=1e-12)


# ---- command line

def test_cli_list_suites(capsys):
    assert main(["--list-suites"]) == 0
    out = capsys.readouterr().out
    for name in SUITES:
        assert name in out


def test_cli_run_and_replay(tmp_path, capsys):
    assert main(["run", "--suite", "lipschitz", "--trials", "8", "--seed", "3", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "report.json").exists() and (tmp_path / "trials.csv").exists()
    assert json.loads((tmp_path / "report.json").read_text())["config"]["seed"] == 3
    assert main(["replay", str(tmp_path / "report.json")]) == 0
    assert "ok" in capsys.readouterr().out


def test_cli_suite_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "identity", "trials": 3}))
    assert main(["run", "--suite", "von_neumann", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    assert doc["header"]["suite"] == "von_neumann" and doc["trials"] == 3


def test_cli_failing_suite_exits_one(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "bernstein", "trials": 4, "tolerances": {"bernstein_cap": 1e-9}}))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1


@pytest.mark.parametrize("argv", [
    ["run", "--suite", "nope"],
    ["run"],
    ["run", "--config", "/nonexistent/config.json"],
])
def test_cli_config_errors_exit_two(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_cli_empty_list_is_config_error(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "identity", "dims": []}))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_cli_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bicontract.cli", "--list-suites"],
                         capture_output=True, text=True, check=True)
    assert "shift_square_sum" in res.stdout


def test_suite_config_direct_construction():
    cfg = SuiteConfig(suite="schatten", trials=2)
    assert cfg.tol("schatten_cap") == 10.0


@pytest.mark.parametrize("suite", list(SUITES))
def test_measurement_keys_unique_within_trial(suite):
    # replay locates a witness by (kind, label), so these must not repeat
    cfg = default_config(suite, trials=4)
    for i in range(4):
        seed = trial_seed(cfg.seed, i)
        x = SUITES[suite].make(np.random.default_rng(seed), cfg, i, seed)
        keys = [(m.kind, m.label) for m in SUITES[suite].measure(x)]
        assert len(keys) == len(set(keys))


def test_cli_replay_missing_report(tmp_path):
    assert main(["replay", str(tmp_path / "absent.json")]) == 2
