import csv
import io
import json
import math

import pytest

from bayesinfo import cli

LN2 = math.log(2)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("argv,header", [
    (["linmodel"], "angle,z1,z2,n1,n2,parameter,predictive,joint"),
    (["design"], "kappa,lambda1,lambda2,v1,v2,optimal,orthogonal,gprior,feasible,binding_minimum"),
    (["design", "--mode", "sample"], "criterion,n1,n2,objective,feasible,binding_minimum,method"),
    (["tte"], "alpha,n,parameter,predictive,parameter_alpha_plus_one,residual,identity_holds"),
    (["tte", "--table", "censoring"], "alpha,n,r,param_loss,predictive_loss"),
    (["dep"], "family,eta,rho,n,parameter,predictive,joint"),
    (["dep", "--table", "joint"], "family,eta,n,rho,rho_squared,joint,rho0,min_joint"),
    (["dep", "--table", "minjoint"], "family,eta,n,rho0,min_joint,boundary"),
    (["dep", "--table", "samplesize"], "family,eta,rho,target,rule,n,reachable,value,supremum"),
    (["orderstats"], "alpha,n,r,parameter,markov,markov_mirror,joint,is_argmax"),
])
def test_every_subcommand_emits_csv(capsys, argv, header):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.splitlines()[0].startswith(header)
    assert "\r" not in out and out.endswith("\n")
    assert len(out.splitlines()) > 1


def test_linmodel_predictive_minimum_on_the_diagonal(capsys):
    _, out, _ = run(capsys, "linmodel", "--sweep", "21")
    table = rows(out)
    # flat under the D-optimal design; the per-direction optimum bottoms out on the diagonal
    flat = [float(r["predictive"]) for r in table]
    assert max(flat) - min(flat) <= 1e-14
    best = min(table, key=lambda r: float(r["predictive_opt"]))
    assert float(best["z1"]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert float(best["z2"]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert float(best["predictive_opt"]) == pytest.approx(float(best["predictive"]), abs=1e-12)
    assert all(float(r["predictive"]) <= float(r["parameter"]) for r in table)


def test_bits_divide_by_ln2(capsys):
    _, nats, _ = run(capsys, "tte")
    _, bits, _ = run(capsys, "tte", "--unit", "bits")
    for a, b in zip(rows(nats), rows(bits)):
        assert float(b["parameter"]) == pytest.approx(float(a["parameter"]) / LN2, rel=1e-15, abs=0)
        assert a["n"] == b["n"] and a["alpha"] == b["alpha"]


def test_empty_sweep_gives_header_only(capsys):
    code, out, _ = run(capsys, "linmodel", "--sweep", "0")
    assert code == 0
    assert out.count("\n") == 1 and out.startswith("angle,")


def test_tte_rows(capsys):
    _, out, _ = run(capsys, "tte", "--alphas", "1", "--n-max", "5")
    table = rows(out)
    assert all(r["identity_holds"] == "true" for r in table)
    assert float(table[0]["parameter"]) == 0.0 and float(table[0]["predictive"]) == 0.0
    assert float(table[1]["parameter"]) == pytest.approx(0.4228, abs=1e-4)


def test_design_rows(capsys):
    _, out, _ = run(capsys, "design")
    for r in rows(out):
        assert float(r["optimal"]) >= float(r["orthogonal"]) - 1e-12
        assert float(r["orthogonal"]) >= float(r["gprior"]) - 1e-12
    _, out, _ = run(capsys, "design", "--c", "0.5", "--kappa-max", "5", "--sweep", "3")
    assert any(r["feasible"] == "false" for r in rows(out))


def test_design_prop2_example(capsys):
    _, out, _ = run(capsys, "design", "--format", "json", "--eigenvalues", "1.6", "0.4")
    doc = json.loads(out)
    row = doc["rows"][0]
    assert (row["v1"], row["v2"]) == pytest.approx((50.9375, 49.0625), abs=1e-12)


def test_dep_sample_sizes(capsys):
    _, out, _ = run(capsys, "dep", "--table", "samplesize", "--families", "UC", "SC", "IC",
                    "--rhos", "0.5", "0.75")
    got = {(r["family"], r["rho"]): r for r in rows(out)}
    assert got["UC", "0.0"]["n"] == "3"
    assert got["SC", "0.75"]["n"] == "16"
    assert got["IC", "0.5"]["reachable"] == "false"
    assert float(got["IC", "0.5"]["supremum"]) == pytest.approx(0.5 * math.log(5))


def test_orderstats_table(capsys):
    code, out, _ = run(capsys, "orderstats", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["reported_r_star"] == 17
    table = [r for r in doc["rows"] if r["alpha"] == 0.5]
    assert [r["r"] for r in table if r["is_argmax"]] == [17]
    assert all(r["markov"] == pytest.approx(r["markov_mirror"], abs=1e-12) for r in table)
    assert max(table, key=lambda r: r["markov"])["r"] == 13


def test_json_is_strict(capsys):
    _, out, _ = run(capsys, "dep", "--table", "samplesize", "--format", "json")
    json.loads(out, parse_constant=lambda c: pytest.fail(f"non-standard constant {c}"))


def test_out_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "tte", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes().startswith(b"alpha,n,")


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alphas": [3.0], "n_max": 2, "unit": "bits"}))
    _, out, _ = run(capsys, "tte", "--config", str(cfg))
    table = rows(out)
    assert {r["alpha"] for r in table} == {"3.0"} and len(table) == 3
    _, out2, _ = run(capsys, "tte", "--config", str(cfg), "--n-max", "4", "--unit", "nats")
    table2 = rows(out2)
    assert len(table2) == 5
    assert float(table[2]["parameter"]) == pytest.approx(float(table2[2]["parameter"]) / LN2)


@pytest.mark.parametrize("argv", [
    ["tte", "--n-max", "-1"],
    ["dep", "--etas", "0"],
    ["dep", "--rhos", "1.0"],
    ["linmodel", "--eta", "-2"],
    ["verify", "--seed", "-3"],
])
def test_invalid_values_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_unknown_config_key_and_bad_files_exit_2(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alphas": [1.0], "colour": "red"}))
    assert run(capsys, "tte", "--config", str(cfg))[0] == 2
    cfg.write_text("{not json")
    assert run(capsys, "tte", "--config", str(cfg))[0] == 2
    cfg.write_text("[1, 2]")
    assert run(capsys, "tte", "--config", str(cfg))[0] == 2
    assert run(capsys, "tte", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["tte", "--format", "xml"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify", "--replications", "20000")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert doc["summary"]["fail"] == 0
    ids = {c["id"]: c for c in doc["checks"]}
    assert ids["depnormal.sample_size.IC.rho=0.5"]["status"] == "expected-mismatch"
    assert ids["depnormal.sample_size.IC.rho=0.5"]["supremum"] == pytest.approx(0.5 * math.log(5))
    assert ids["depnormal.table1.sc_determinant_entry"]["status"] == "expected-mismatch"


def test_verify_tight_exits_3(capsys):
    code, out, _ = run(capsys, "verify", "--tight", "--replications", "20000")
    doc = json.loads(out)
    assert code == 3 and not doc["ok"] and doc["summary"]["fail"] > 0


def test_verify_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", "--seed", "7", "--replications", "20000", "--out", str(a)]) == 0
    assert cli.main(["verify", "--seed", "7", "--replications", "20000", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
