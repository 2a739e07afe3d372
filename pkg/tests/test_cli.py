import json

import pytest

from ttolab.cli import main, parse_alpha, parse_symbol, parse_theta
from ttolab.config import ConfigError
from ttolab.harmonic import unit_nodes

FAST_VERIFY = ["--set", "sweep.instances=3", "--set", "nehari.multistart=6",
               "--set", "nehari.grid_m=512"]


def run(argv):
    return main(argv)


# ------------------------------------------------------------ parsers

def test_parse_theta_shorthand():
    assert parse_theta("z").degree == 1
    assert parse_theta("z^4").degree == 4
    theta = parse_theta('{"zeros": [[0.3, 0.0], [0.0, -0.4]]}')
    assert theta.degree == 2


def test_parse_theta_from_file(tmp_path):
    path = tmp_path / "theta.json"
    path.write_text('{"zeros": [[0.5, 0.0]]}')
    assert parse_theta(str(path)).degree == 1


def test_parse_theta_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_theta("zz^bad")


def test_parse_symbol_shorthand():
    nodes = unit_nodes(8)
    import numpy as np

    assert np.allclose(parse_symbol("zbar")(nodes), np.conj(nodes))
    assert np.allclose(parse_symbol("z^2")(nodes), nodes**2)
    assert np.allclose(parse_symbol("1")(nodes), 1.0)
    mixed = parse_symbol('{"-1": [0.0, 1.0], "2": 2.0}')
    assert np.allclose(mixed(nodes), 1j * np.conj(nodes) + 2 * nodes**2)


def test_parse_alpha_normalizes():
    import numpy as np

    assert abs(parse_alpha("i") - 1j) < 1e-15
    assert abs(abs(parse_alpha("1+1i")) - 1.0) < 1e-15
    with pytest.raises(ConfigError):
        parse_alpha("0")


# ------------------------------------------------------------ commands

def test_verify_subset_passes(tmp_path):
    code = run(["verify", "--only", "basis-orthonormality,hankel-toeplitz-link",
                "--output-dir", str(tmp_path), *FAST_VERIFY])
    assert code == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] is True
    names = [r["name"] for r in report["suites"]]
    assert names == ["basis-orthonormality", "hankel-toeplitz-link"]


def test_verify_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["verify", "--only", "basis-orthonormality,rank-one-identity",
            *FAST_VERIFY]
    assert run(args + ["--output-dir", str(a)]) == 0
    assert run(args + ["--output-dir", str(b)]) == 0
    assert (a / "verify.json").read_bytes() == (b / "verify.json").read_bytes()


def test_verify_unattainable_tolerance_fails(tmp_path):
    code = run(["verify", "--only", "basis-orthonormality",
                "--set", "tolerances.identity=1e-20",
                "--output-dir", str(tmp_path), *FAST_VERIFY])
    assert code == 1
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] is False


def test_verify_seed_change_keeps_verdicts(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["verify", "--only", "cross-route-hankel,spectral-mapping",
            *FAST_VERIFY]
    assert run(args + ["--seed", "1", "--output-dir", str(a)]) == 0
    assert run(args + ["--seed", "2", "--output-dir", str(b)]) == 0
    ra = json.loads((a / "verify.json").read_text())
    rb = json.loads((b / "verify.json").read_text())
    assert [r["passed"] for r in ra["suites"]] == [r["passed"] for r in rb["suites"]]
    assert ra["seed"] != rb["seed"]


def test_unknown_suite_is_config_error(tmp_path):
    assert run(["verify", "--only", "bogus", "--output-dir", str(tmp_path)]) == 2


def test_bad_override_is_config_error(tmp_path):
    assert run(["verify", "--set", "sweep.instances=lots",
                "--output-dir", str(tmp_path)]) == 2
    assert run(["verify", "--set", "nope.key=1",
                "--output-dir", str(tmp_path)]) == 2


def test_basis_dump(tmp_path):
    assert run(["basis", "--theta", "z^3", "--output-dir", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "basis.json").read_text())
    assert payload["degree"] == 3
    assert payload["gram_defect"] < 1e-10


def test_op_matrix_dump(tmp_path):
    assert run(["op-matrix", "--theta", "z^2", "--symbol", "zbar",
                "--kind", "hankel", "--output-dir", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "op-matrix.json").read_text())
    assert payload["kind"] == "hankel"
    mat = payload["matrix"]
    assert len(mat["entries"]) == 2


def test_clark_dump(tmp_path):
    assert run(["clark", "--theta", "z^2", "--alpha", "1",
                "--output-dir", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "clark.json").read_text())
    assert abs(payload["mass"] - payload["expected_mass"]) < 1e-10
    assert payload["poisson_defect"] < 1e-8
    assert payload["unitarity_defect"] < 1e-10


def test_spectrum_dump(tmp_path):
    assert run(["spectrum", "--theta", "z^3", "--symbol", "z",
                "--p-list", "1,2", "--output-dir", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "spectrum.json").read_text())
    assert len(payload["eigenvalues"]) == 3
    assert "1" in payload["schatten"] or "1.0" in payload["schatten"]


def test_bad_theta_is_config_error(tmp_path):
    assert run(["basis", "--theta", "frog", "--output-dir", str(tmp_path)]) == 2


def test_output_dir_env_var(tmp_path, monkeypatch):
    target = tmp_path / "from-env"
    monkeypatch.setenv("TTOLAB_OUTPUT_DIR", str(target))
    assert run(["basis", "--theta", "z"]) == 0
    assert (target / "basis.json").exists()


def test_config_file_feeds_run(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"sweep": {"seed": 4242, "instances": 2}}))
    out = tmp_path / "out"
    assert run(["verify", "--only", "rank-one-identity", "--config", str(cfg),
                "--output-dir", str(out)]) == 0
    report = json.loads((out / "verify.json").read_text())
    assert report["seed"] == 4242


def test_lemma1_small_run(tmp_path):
    import csv

    code = run(["lemma1", "--set", "decay.n_max=6",
                "--set", "decay.threshold=0.5", "--output-dir", str(tmp_path)])
    assert code == 0
    payload = json.loads((tmp_path / "lemma1.json").read_text())
    assert payload["passed"] is True
    with open(tmp_path / "lemma1.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    # the table itself decays
    assert float(rows[-1]["ratio"]) < float(rows[0]["ratio"])


def test_essential_small_run(tmp_path):
    code = run(["essential", "--set", "essential.n_list=[2,4,6]",
                "--set", "essential.delta=0.9", "--output-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "essential.csv").exists()


def test_besov_command(tmp_path):
    assert run(["besov", "--set", "besov.degree=2",
                "--output-dir", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "besov.json").read_text())
    assert payload["modulus"] == sorted(payload["modulus"])


def test_nehari_command(tmp_path):
    code = run(["nehari", "--set", "nehari.instances=2",
                "--set", "nehari.multistart=6", "--set", "nehari.grid_m=512",
                "--set", "nehari.max_degree=2", "--output-dir", str(tmp_path)])
    assert code == 0
    payload = json.loads((tmp_path / "nehari.json").read_text())
    assert payload["violations"] == 0
    assert payload["empirical_constant"] >= 1.0 - 1e-6


def test_conjecture_command(tmp_path):
    code = run(["conjecture", "--set", "conjecture.degrees=[2]",
                "--set", "conjecture.corpus=2", "--output-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "conjecture.csv").exists()
    payload = json.loads((tmp_path / "conjecture.json").read_text())
    assert "exploratory" in payload["note"]
