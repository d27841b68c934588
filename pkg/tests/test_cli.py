import json

import pytest

from loopgroup import cli
from loopgroup.core_matrix import PeriodicBandMatrix, whirl
from loopgroup.cylnet import example_network

EX2 = {"n": 3, "d_lo": -1, "d_hi": 2, "rows": [[2, 3, 1, 0], [1, 2, 1, 1], [0, 1, 1, 0]]}
EX3 = {"n": 2, "d_lo": -2, "d_hi": 3, "rows": [[0, 3, 3, 5, 2, 1], [1, 1, 7, 4, 2, 0]]}
CURLS = {"n": 2, "atoms": [{"kind": "curl", "values": ["1", "1"]}, {"kind": "curl", "values": ["1", "2"]}]}


def run(*argv):
    code, out, _ = cli.run([str(a) for a in argv])
    assert out["schema"] == "loopgroup-tnn/1"
    return code, out


def j(obj):
    return json.dumps(obj)


def test_tnn_certifies_example(tmp_path):
    path = tmp_path / "ex2.json"
    path.write_text(j(EX2))
    code, out = run("tnn", "--in", path)
    assert code == 0 and out["status"] == "CERTIFIED" and out["certificate"]


def test_tnn_refutes():
    bad = dict(EX2, rows=[[2, 3, 1, 0], [1, 2, -1, 1], [0, 1, 1, 0]])
    code, out = run("tnn", "--in", j(bad))
    assert code == 0 and out["status"] == "REFUTED"


def test_eta_example():
    code, out = run("eta", "--a", "[1,1]", "--b", "[1,2]")
    assert code == 0
    assert out["b_prime"] == ["4/3", "3/2"] and out["a_prime"] == ["2/3", "3/2"]


def test_eta_word_and_theta():
    code, out = run("eta", "--word", "[1]", "--params", '[[1,1],[1,2]]', "--kind", "curl")
    assert code == 0 and out["params"] == [["4/3", "3/2"], ["2/3", "3/2"]]
    code, out = run("theta", "--a", "[1,2]", "--b", "[3,4]", "--power", "2")
    assert code == 0 and out["result"] == [["1", "2"], ["3", "4"]]
    code, out = run("theta", "--a", "[1,2]", "--b", "[3,4]")
    assert code == 0 and sorted(out) == ["a_prime", "b_prime", "schema"]


def test_float_literal_is_malformed():
    code, out = run("eta", "--a", "[1.5,1]", "--b", "[1,2]")
    assert code == 1 and out["error"]["code"] == "MALFORMED_INPUT"


def test_domain_error_exit_code():
    code, out = run("eta", "--a", "[0,1]", "--b", "[0,1]")
    assert code == 2 and "error" in out


def test_unknown_subcommand_is_malformed():
    code, out = run("frobnicate")
    assert code == 1


def test_mul_with_identity_echoes_input():
    ident = {"n": 2, "d_lo": 0, "d_hi": 0, "rows": [[1], [1]]}
    code, out = run("mul", "--in", j(ident), "--in", j(EX3))
    assert code == 0 and PeriodicBandMatrix.from_json(out["matrix"]) == PeriodicBandMatrix.from_json(EX3)


def test_fold_unfold_minor():
    code, out = run("fold", "--in", j(EX3))
    assert code == 0 and out["det"]["terms"] == [{"deg": 0, "coef": "6"}, {"deg": 1, "coef": "-1"}]
    code, back = run("unfold", "--in", j(out))
    assert PeriodicBandMatrix.from_json(back["matrix"]) == PeriodicBandMatrix.from_json(EX3)
    code, out = run("minor", "--in", j(CURLS), "--window", 8, "--rows", "[1,2]", "--cols", "[2,3]")
    assert code == 0 and out["value"] == "1"


def test_factor_reduce_extract():
    code, out = run("factor", "--in", j(EX3))
    assert code == 0 and out["exact"]
    code, out = run("reduce", "--in", j(EX3))
    assert code == 0 and out["k"] == 0
    code, ext = run("whirl-extract", "--in", j(out["Y"]))
    assert code == 0 and ext["whirl"] == ["23/30", "5/23"]


def test_curl_commands():
    code, out = run("asw-sort", "--params", "[[1,1],[1,2]]")
    assert out["params"] == [["4/3", "3/2"], ["2/3", "3/2"]]
    code, out = run("epsilon", "--in", j(CURLS))
    assert code == 0 and out["epsilon"]["values"] == ["4/3", "3/2"] and out["radius"] == "1/2"
    code, out = run("asw-step", "--in", j(CURLS), "--window", 10)
    assert code == 0 and out["curl"] == ["4/3", "3/2"]
    code, out = run("tp", "--in", j(CURLS), "--window", 8)
    assert code == 0 and out["status"] == "REFUTED_TP" and len(out["witness"]["rows"]) == 3


def test_estimated_epsilon_from_matrix():
    code, out = run("epsilon", "--in", j(dict(CURLS, atoms=CURLS["atoms"] + [{"kind": "whirl", "values": ["0", "0"]}])),
                    "--window", 20)
    assert code == 0 and out["epsilon"]["mode"] == "ESTIMATED"
    assert isinstance(out["radius"], list)


def test_absorb_and_schur():
    code, out = run("absorb", "--kind", "whirl", "--k", 1, "--a", "1", "--params", "[[1,2]]")
    assert out["params"] == [["2", "1"]] and out["residual"] == {"k": 2, "a": "1"}
    code, out = run("schur", "--params", '[["4/3","3/2"],["2/3","3/2"]]', "--shape",
                    j({"outer": [4, 4], "inner": [4, 2], "n": 2}))
    assert code == 0 and out["value"] == "5"
    code, out = run("schur", "--params", "[[1,2],[3,1]]", "--I", "[1,2]", "--J", "[3,5]")
    assert code == 0 and out["jacobi_trudi"] == out["tableaux"]


def test_ratio_limit_and_recover():
    code, out = run("ratio-limit", "--params", '[["4/3","3/2"],["2/3","3/2"]]', "--I", "[1,4]", "--i", 2,
                    "--k", 2, "--hmax", 40, "--tolerance", "1/1000000")
    assert code == 0 and out["target"] == "5" and out["monotone"] and out["within_tolerance"]
    code, out = run("recover", "--params", "[[1,1],[1,2]]", "--kmax", 2)
    assert code == 0 and out["converged"]


def test_network_commands(tmp_path):
    net = j(example_network().to_json())
    code, out = run("net-eval", "--in", net)
    assert PeriodicBandMatrix.from_json(out["matrix"]) == PeriodicBandMatrix.from_json(EX3)
    code, out = run("net-minor", "--in", net, "--rows", "[1,2]", "--cols", "[3,4]")
    assert out["agree"]
    code, out = run("net-det", "--in", net)
    assert out["agree"]
    code, out = run("net-build", "--kind", "whirl", "--params", "[1,2]", "--diagram")
    assert code == 0 and out["diagram"][0].startswith("n=2")
    code, out = run("net-build", "--kind", "e", "--n", 2, "--k", 1, "--params", "3")
    assert code == 0
    code, out = run("net-build")
    assert code == 1


def test_main_writes_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    assert cli.main(["eta", "--a", "[1,1]", "--b", "[1,2]", "--out", str(target)]) == 0
    assert json.loads(target.read_text())["b_prime"] == ["4/3", "3/2"]
    assert cli.main(["eta", "--a", "[1,1]", "--b", "[1,2]"]) == 0
    assert json.loads(capsys.readouterr().out)["a_prime"] == ["2/3", "3/2"]


@pytest.mark.parametrize("threads", ["0", "-1"])
def test_threads_must_be_positive(threads):
    code, _ = run("eta", "--a", "[1]", "--b", "[2]", "--threads", threads)
    assert code == 1
