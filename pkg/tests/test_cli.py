"""End-to-end command line tests, run in-process through main().

The canonical-format golden strings below are frozen bytes. Each value
they contain is certified elsewhere: sphere ranks by the suspension
tests, cp-2 by the symmetric-algebra oracle comparison, the worked
minimal model by the filtered-complex tests. If one of these asserts
starts failing after an intentional output change, re-freeze from a run
that the rest of the suite certifies.
"""

import json

import pytest

from liemodel.cli import SUITES, main


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SPHERE2_N5 = ('{"kind":"algebra","max_degree":5,"max_length":8,'
              '"mixed":true,"pi":{"2":{"-2":1},"3":{"-4":1},"4":{},"5":{}},'
              '"pi1":{},"simply_connected":true,"source":"sphere-2",'
              '"uncertified":[],"violations":[]}')

CP2_DEFAULT = ('{"kind":"algebra","max_degree":6,"max_length":8,'
               '"mixed":true,"pi":{"2":{"-2":1},"3":{},"4":{},'
               '"5":{"-6":1},"6":{}},"pi1":{},"simply_connected":true,'
               '"source":"cp-2","uncertified":[],"violations":[]}')


def test_compute_canonical_golden_bytes(capsys):
    code, out, err = run_cli(capsys, "compute", "--builtin", "sphere-2",
                             "--max-degree", "5", "--format", "canonical")
    assert code == 0 and err == ""
    assert out == SPHERE2_N5 + "\n"
    code, out, err = run_cli(capsys, "compute", "--builtin", "cp-2",
                             "--format", "canonical")
    assert code == 0
    assert out == CP2_DEFAULT + "\n"


def test_compute_canonical_is_byte_stable(capsys):
    runs = set()
    for _ in range(3):
        code, out, err = run_cli(capsys, "compute", "--builtin", "torus-2",
                                 "--max-degree", "3", "--max-length", "5",
                                 "--format", "canonical")
        assert code == 0
        runs.add(out)
    assert len(runs) == 1


def test_compute_human_output(capsys):
    code, out, err = run_cli(capsys, "compute", "--builtin", "sphere-2",
                             "--max-degree", "5")
    assert code == 0
    assert "pi_2: 1 @ w=-2" in out
    assert "pi_3: 1 @ w=-4" in out
    assert "inside the pure-projective windows" in out


def test_compute_first_page_input(capsys):
    code, out, err = run_cli(capsys, "compute", "--builtin", "gm",
                             "--format", "canonical")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "e1"
    assert doc["simply_connected"] is False
    assert doc["pi1"] == {"1": {"-2": 1}}
    assert doc["mixed"] is True


def test_compute_mode_rejects_fundamental_group(capsys):
    code, out, err = run_cli(capsys, "compute", "--builtin", "gm",
                             "--mode", "simply-connected-only")
    assert code == 2
    assert out == ""
    assert err.startswith("error[input-error]:")


def test_compute_flag_validation(capsys):
    code, out, err = run_cli(capsys, "compute", "--builtin", "sphere-2",
                             "--max-degree", "0")
    assert code == 2 and "max-degree" in err
    code, out, err = run_cli(capsys, "compute", "--builtin", "sphere-2",
                             "--input", "also.json")
    assert code == 2 and "exactly one" in err
    code, out, err = run_cli(capsys, "compute")
    assert code == 2 and "exactly one" in err


def test_compute_resource_bound_exit(capsys):
    code, out, err = run_cli(capsys, "compute", "--builtin", "genus-3-curve",
                             "--max-degree", "1", "--max-length", "7")
    assert code == 4
    assert out == ""
    assert err.startswith("error[resource-bound-exceeded]:")
    assert "block cap" in err


def test_validate_builtin_and_file(capsys, tmp_path):
    code, out, err = run_cli(capsys, "validate", "--builtin", "elliptic-curve",
                             "--format", "canonical")
    assert code == 0
    assert json.loads(out) == {"valid": True, "name": "elliptic-curve",
                               "kind": "algebra", "classes": 4}
    path = tmp_path / "filtered.json"
    path.write_text(json.dumps({
        "kind": "filtered-complex", "name": "demo",
        "terms": {"0": [{"label": "e", "filtration": 1}],
                  "1": [{"label": "g", "filtration": 0},
                        {"label": "f", "filtration": 1}],
                  "2": [{"label": "h", "filtration": 1}]},
        "differential": {"0": [[0, 0, "1"]], "1": [[0, 1, "1"]]}}))
    code, out, err = run_cli(capsys, "validate", "--input", str(path))
    assert code == 0
    assert "filtered-complex" in out


def test_validate_names_the_failing_law(capsys, tmp_path):
    # commutative but (x*x)*w = p while x*(x*w) = 2p, validation points
    # at the triple
    bad = {"kind": "algebra", "name": "broken",
           "classes": [{"id": "1", "degree": 0}, {"id": "x", "degree": 2},
                       {"id": "w", "degree": 2}, {"id": "y", "degree": 4},
                       {"id": "q", "degree": 4}, {"id": "p", "degree": 6}],
           "products": [["x", "x", "y", "1"],
                        ["x", "w", "q", "1"], ["w", "x", "q", "1"],
                        ["y", "w", "p", "1"], ["w", "y", "p", "1"],
                        ["x", "q", "p", "2"], ["q", "x", "p", "2"]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, err = run_cli(capsys, "validate", "--input", str(path))
    assert code == 2
    assert out == ""
    assert "associativity fails at" in err

    # a differential that does not square to zero is named as well
    bad = {"kind": "e1", "name": "dsq",
           "classes": [{"id": "1", "degree": [0, 0]},
                       {"id": "a", "degree": [0, 2]},
                       {"id": "b", "degree": [2, 1]},
                       {"id": "c", "degree": [4, 0]}],
           "delta": [["a", "b", "1"], ["b", "c", "1"]]}
    path.write_text(json.dumps(bad))
    code, out, err = run_cli(capsys, "validate", "--input", str(path))
    assert code == 2
    assert "delta squared is nonzero on a" in err


def test_unreadable_and_malformed_inputs(capsys, tmp_path):
    code, out, err = run_cli(capsys, "compute", "--input",
                             str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    path = tmp_path / "phony.json"
    path.write_text("{not json")
    code, out, err = run_cli(capsys, "compute", "--input", str(path))
    assert code == 2 and "not valid JSON" in err
    path.write_text('["a", "list"]')
    code, out, err = run_cli(capsys, "compute", "--input", str(path))
    assert code == 2 and "JSON object" in err
    assert out == ""


MM_GOLDEN = ('{"e1":{"-1,1":1,"0,1":1},"inclusion":{"0":[[0,0,"1"]],'
             '"1":[[0,0,"1"]]},"model":{"differential":{"0":[[0,0,"1"]]},'
             '"kind":"filtered-complex","name":"minimal(demo)",'
             '"terms":{"0":[{"filtration":1,"label":"m0_0","weight":0}],'
             '"1":[{"filtration":0,"label":"m1_0","weight":0}]}}}')


def test_minimal_model_command(capsys, tmp_path):
    doc = {"kind": "filtered-complex", "name": "demo",
           "terms": {"0": [{"label": "e", "filtration": 1}],
                     "1": [{"label": "g", "filtration": 0},
                           {"label": "f", "filtration": 1}],
                     "2": [{"label": "h", "filtration": 1}]},
           "differential": {"0": [[0, 0, "1"]], "1": [[0, 1, "1"]]}}
    path = tmp_path / "demo.json"
    path.write_text(json.dumps(doc))
    code, out, err = run_cli(capsys, "minimal-model", "--input", str(path),
                             "--format", "canonical")
    assert code == 0
    assert out == MM_GOLDEN + "\n"
    code, out, err = run_cli(capsys, "minimal-model", "--input", str(path))
    assert code == 0
    assert "total dimension 2" in out
    assert "E1^(-1,1) = 1" in out

    code, out, err = run_cli(capsys, "minimal-model", "--builtin", "sphere-2")
    assert code == 2
    assert "filtered-complex documents" in err


def test_examples_listing(capsys):
    code, out, err = run_cli(capsys, "examples", "--format", "canonical")
    assert code == 0
    rows = json.loads(out)["examples"]
    names = [r["name"] for r in rows]
    assert "sphere-2" in names and "p1-minus-3-points" in names
    assert len(names) == len(set(names))
    code, human, err = run_cli(capsys, "examples")
    assert code == 0
    assert len(human.strip().splitlines()) == len(rows)


def test_selftest_all_suites_pass(capsys):
    code, out, err = run_cli(capsys, "selftest")
    assert code == 0 and err == ""
    lines = out.strip().splitlines()
    assert len(lines) == len(SUITES)
    assert all("pass" in line for line in lines)
    # order is the declaration order, regardless of how suites ran
    assert [line.split()[0] for line in lines] == [n for n, _ in SUITES]


def test_selftest_suite_filter(capsys):
    code, out, err = run_cli(capsys, "selftest", "--suite", "witt")
    assert code == 0
    assert out.strip().splitlines()[0].startswith("witt")
    assert len(out.strip().splitlines()) == 1
    code, out, err = run_cli(capsys, "selftest", "--suite", "bogus")
    assert code == 2 and "unknown suite" in err


def test_selftest_fault_injection_negative_control(capsys):
    code, out, err = run_cli(capsys, "selftest", "--inject-fault=cobar-sign")
    assert code == 3
    assert "FAIL" in out
    assert "dsq" in out
    assert err.startswith("error[assertion-failure]: selftest:")
    # the hook is cleared afterwards, a normal run stays green
    code, out, err = run_cli(capsys, "selftest", "--suite", "dsq")
    assert code == 0, out + err
    code, out, err = run_cli(capsys, "selftest", "--inject-fault=bogus")
    assert code == 2 and "unknown fault" in err


def test_selftest_canonical_format(capsys):
    code, out, err = run_cli(capsys, "selftest", "--suite", "minimal",
                             "--format", "canonical")
    assert code == 0
    doc = json.loads(out)
    assert doc == {"suites": [{"name": "minimal", "pass": True,
                               "failures": []}]}


def test_selftest_worker_pool(capsys, monkeypatch):
    monkeypatch.setenv("LIEMODEL_WORKERS", "4")
    code, out, err = run_cli(capsys, "selftest")
    assert code == 0
    lines = out.strip().splitlines()
    assert [line.split()[0] for line in lines] == [n for n, _ in SUITES]
    monkeypatch.setenv("LIEMODEL_WORKERS", "0")
    code, out, err = run_cli(capsys, "selftest")
    assert code == 2 and "LIEMODEL_WORKERS" in err
    monkeypatch.setenv("LIEMODEL_WORKERS", "three")
    code, out, err = run_cli(capsys, "selftest")
    assert code == 2 and "not an integer" in err
