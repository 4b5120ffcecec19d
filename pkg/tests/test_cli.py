import json
import re

import pytest

from divisorsums import arith, edf, means, moments, series
from divisorsums.cli import _build_parser, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dense_json_one_step(capsys):
    code, out, _ = call(capsys, "dense", "--target", "1", "--eps", "0.25", "--format", "json")
    assert code == 0
    cert = json.loads(out)
    assert [s["q"] for s in cert["steps"]] == ["7"]


def test_dense_csv(capsys):
    code, out, _ = call(capsys, "dense", "--target", "1", "--eps", "0.25", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["step,B,q,r,gap", "0,5,7,6/7,1/7"]


def test_sieve_csv(capsys):
    code, out, _ = call(capsys, "sieve", "--limit", "12", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 13
    row = dict(zip(lines[0].split(","), lines[-1].split(",")))
    assert row["n"] == "12" and row["S_s"] == "27"


def test_sieve_scientific_notation(capsys):
    code, out, _ = call(capsys, "sieve", "--limit", "1e2", "--lo", "99", "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][-1][0] == 100


def test_verify_roundtrip(tmp_path, capsys):
    path = tmp_path / "cert.json"
    assert run(["dense", "--target", "2718281828/1000000000", "--eps", "1e-6", "--out", str(path)]) == 0
    code, out, _ = call(capsys, "verify", "--cert", str(path))
    assert code == 0 and out == "ok\n"


def test_verify_rejects_tampered(tmp_path, capsys):
    path = tmp_path / "cert.json"
    run(["dense", "--target", "1", "--eps", "0.25", "--out", str(path)])
    obj = json.loads(path.read_text())
    obj["steps"][0]["q"] = "9"
    path.write_text(json.dumps(obj))
    code, _, err = call(capsys, "verify", "--cert", str(path))
    assert code == 1 and "q not prime" in err


def test_verify_malformed(tmp_path, capsys):
    path = tmp_path / "cert.json"
    path.write_text("{}")
    assert call(capsys, "verify", "--cert", str(path))[0] == 1
    assert call(capsys, "verify", "--cert", str(tmp_path / "missing.json"))[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["sieve"],
        ["sieve", "--limit", "10", "--unknown"],
        ["sieve", "--limit", "1.5"],
        ["dense", "--target", "x", "--eps", "0.1"],
        ["series"],
        ["series", "--function", "nope"],
        ["moments", "--k", "2", "--kmax", "5"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["dense", "--target", "1", "--eps", "0"],
        ["dense", "--target", "-1", "--eps", "0.1"],
        ["sieve", "--lo", "20", "--limit", "10"],
        ["moments", "--kmax", "3", "--limit", "100"],
    ],
)
def test_computation_errors(argv, capsys):
    assert run(argv) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["sieve", "--limit", "500"],
        ["edf", "--limit", "1000", "--grid", "0:2:0.1"],
        ["edf", "--limit", "1000", "--eps", "0.1,0.01"],
        ["dense", "--target", "10", "--eps", "1e-9"],
        ["mean", "--checkpoints", "10,100,1000"],
        ["moments", "--k", "2", "--euler-primes", "1000", "--limit", "1000"],
        ["moments", "--kmax", "4", "--limit", "1000"],
        ["series", "--function", "log_S_s", "--limit", "10000"],
        ["series", "--k", "2", "--j", "1", "--limit", "10000"],
    ],
)
def test_byte_identical_reruns(argv, capsys):
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first[0] == 0 and first == second


def _help(sub):
    parser = _build_parser()
    action = next(a for a in parser._actions if a.dest == "command")
    return action.choices[sub].format_help()


@pytest.mark.parametrize(
    "sub,argv,header",
    [
        ("sieve", ["sieve", "--limit", "5"], arith.CSV_HEADER),
        ("edf", ["edf", "--limit", "50", "--grid", "0:1:0.5"], edf.GRID_HEADER),
        ("edf", ["edf", "--limit", "50", "--eps", "0.1"], edf.CLUSTER_HEADER),
        ("mean", ["mean", "--limit", "100"], means.CSV_HEADER),
        ("moments", ["moments", "--kmax", "4", "--limit", "100"], moments.GROWTH_HEADER),
        ("series", ["series", "--function", "log_sigma", "--limit", "1000"], series.CSV_HEADER),
        ("dense", ["dense", "--target", "1", "--eps", "0.25", "--format", "csv"], ("step", "B", "q", "r", "gap")),
    ],
)
def test_help_documents_emitted_header(sub, argv, header, capsys):
    code, out, _ = call(capsys, *argv)
    emitted = out.splitlines()[0]
    assert code == 0 and emitted == ",".join(header)
    help_text = re.sub(r"\s+", "", _help(sub))
    assert emitted in help_text


def test_help_documents_json_fields(capsys):
    _, out, _ = call(capsys, "moments", "--k", "1", "--euler-primes", "100")
    obj = json.loads(out)
    help_text = _help("moments")
    for key in obj:
        assert key in help_text
    _, out, _ = call(capsys, "dense", "--target", "1", "--eps", "0.25")
    help_text = _help("dense")
    for key in json.loads(out):
        assert key in help_text
