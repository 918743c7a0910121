"""End-to-end command line behaviour (driven in-process)."""

import json

import pytest

from cglhash.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_hash_json_report(capsys):
    code, out = run(capsys, "hash", "-p", "10007", "--hex", "8fa3")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "hash"
    assert doc["p"] == 10007
    assert doc["modulus"] == "z^2+1"
    assert doc["walk_length"] == 16
    assert doc["convention"]["convention"] == "lex-walk-v1"
    assert doc["hash"] == "3340+4234*z"


def test_hash_human_mode(capsys):
    code, out = run(capsys, "hash", "-p", "23", "--hex", "8f", "--human")
    assert code == 0
    assert "hash j-invariant:" in out


def test_hash_from_file(tmp_path, capsys):
    path = tmp_path / "msg.bin"
    path.write_bytes(b"\x8f\xa3")
    code, out = run(capsys, "hash", "-p", "10007", "--file", str(path))
    assert code == 0
    assert json.loads(out)["hash"] == "3340+4234*z"


def test_hash_rejects_bad_hex(capsys):
    code = main(["hash", "-p", "23", "--hex", "zz"])
    capsys.readouterr()
    assert code == 2


def test_non_prime_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["hash", "-p", "24", "--hex", "00"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["analyze", "-p", "3"])


def test_graph_json_and_dot(capsys, tmp_path):
    code, out = run(capsys, "graph", "-p", "23")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["edges"]) == 9

    target = tmp_path / "g.dot"
    code, _ = run(capsys, "graph", "-p", "23", "--format", "dot", "--out", str(target))
    assert code == 0
    text = target.read_text()
    assert text.startswith("digraph ")
    assert text.count("->") == 9


def test_analyze_report(capsys):
    code, out = run(capsys, "analyze", "-p", "41")
    assert code == 0
    doc = json.loads(out)
    assert doc["nodes"] == 4
    assert doc["matches_theory"] is True
    assert doc["collision"] == "7/25"
    assert doc["deviation"] == "3/100"
    assert doc["deviation_sci"] == "3.00e-02"
    assert doc["node_distribution"]["0"] == "1/10"


def test_analyze_with_sampling(capsys):
    code, out = run(capsys, "analyze", "-p", "23", "--empirical", "20000",
                    "--bits", "64", "--seed", "5")
    assert code == 0
    doc = json.loads(out)
    emp = doc["empirical"]
    assert emp["samples"] == 20000 and emp["seed"] == 5
    assert emp["l1_distance"] < 0.05
    total = sum(int(v.split("/")[0]) / int(v.split("/")[1]) if "/" in v else float(v)
                for v in emp["distribution"].values())
    assert abs(total - 1) < 1e-9


def test_verify_small_range(capsys):
    code, out = run(capsys, "verify", "--primes", "5..23")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["primes"] == [5, 7, 11, 13, 17, 19, 23]
    by_p = {r["p"]: r for r in doc["results"]}
    assert by_p[23]["checks"]["reference_p23"] is True
    assert by_p[23]["checks"]["pair_aggregation"] is True
    assert by_p[5]["checks"]["collision_identity"] is True
    for r in doc["results"]:
        assert all(r["checks"].values())


def test_verify_comma_list_human(capsys):
    code, out = run(capsys, "verify", "--primes", "23,47", "--human")
    assert code == 0
    assert "p=23: ok" in out and "p=47: ok" in out
    assert "all 2 primes verified" in out


def test_verify_rejects_bad_specs(capsys):
    for bad in ("", "abc", "9", "4..4", "23,,47"):
        with pytest.raises(SystemExit) as info:
            main(["verify", "--primes", bad])
        capsys.readouterr()
        assert info.value.code == 2


def test_reports_go_to_files(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = run(capsys, "analyze", "-p", "23", "--out", str(target))
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["collision"] == "49/121"
