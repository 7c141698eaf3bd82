import json

import pytest

from malcevlab import corpus
from malcevlab.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from malcevlab.operators import LinearMap


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_pass_and_fail(capsys):
    code, out, _ = run(capsys, "check", "--input", "corpus:malcev7", "--identity", "sagle,malcev")
    assert code == EXIT_PASS and "sagle: PASS (2401 tuples)" in out
    code, out, _ = run(capsys, "check", "--input", "corpus:malcev7_corrupt", "--identity", "sagle")
    assert code == EXIT_FAIL and "FAIL" in out


def test_check_json_witnesses(capsys):
    code, out, _ = run(capsys, "check", "--input", "corpus:malcev7_corrupt", "--identity", "sagle",
                       "--format", "json", "--max-witnesses", "2")
    data = json.loads(out)
    rep = data["reports"][0]
    assert code == EXIT_FAIL and data["passed"] is False
    assert rep["failing"] == 280 and len(rep["witnesses"]) == 2
    assert rep["witnesses"][0]["indices"] == [1, 2, 3, 5]


def test_check_group_and_assign(capsys):
    code, out, _ = run(capsys, "check", "--input", "corpus:rb7_param", "--identity", "malcev_rep")
    assert code == EXIT_PASS
    code, out, _ = run(capsys, "check", "--input", "corpus:malcev7_adjoint", "--identity", "a_module_malcev")
    assert code == EXIT_PASS and "a_module_malcev: PASS" in out
    code, out, _ = run(capsys, "check", "--input", "corpus:printed_curly", "--identity", "sagle", "--assign", "lam=-1")
    assert code == EXIT_PASS
    code, out, _ = run(capsys, "check", "--input", "corpus:mat2", "--identity", "alternative")
    assert code == EXIT_PASS and "alternative_left" in out and "alternative_right" in out


def test_usage_errors(capsys):
    code, _, err = run(capsys, "check", "--input", "/nonexistent.json", "--identity", "sagle")
    assert code == EXIT_USAGE and err.startswith("error:")
    code, _, err = run(capsys, "check", "--input", "corpus:sl2", "--identity", "bogus")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "check", "--input", "corpus:sl2", "--identity", "jacobi", "--bind", "B=mul")
    assert code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == EXIT_USAGE


def test_verify_operator(tmp_path, capsys):
    path = str(tmp_path / "p.json")
    corpus.save(LinearMap([[0, 0], [0, -1]]), path)
    code, out, _ = run(capsys, "verify-operator", "--kind", "rb", "--input", "corpus:aff2", "--map", path,
                       "--weight", "1")
    assert code == EXIT_PASS
    code, _, _ = run(capsys, "verify-operator", "--kind", "rb", "--input", "corpus:aff2", "--map", path,
                     "--weight", "2")
    assert code == EXIT_FAIL
    code, out, _ = run(capsys, "verify-operator", "--kind", "nijenhuis", "--input", "corpus:sl2_triangular")
    assert code == EXIT_PASS and "nijenhuis: PASS" in out


def test_parametric_rb7(capsys):
    code, out, _ = run(capsys, "verify-operator", "--kind", "rb", "--input", "corpus:rb7_param", "--weight", "-1",
                       "--format", "json")
    rep = json.loads(out)["reports"][0]
    assert code == EXIT_PASS and rep["tuples_checked"] == 49


def test_lift_then_mybe(tmp_path, capsys):
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "build", "--construction", "lift-tensor", "--input", "corpus:sl2_triangular",
                       "--out", str(out_path))
    assert code == EXIT_PASS
    alg_path = tmp_path / "r.algebra.json"
    assert alg_path.exists()
    code, out, _ = run(capsys, "mybe", "--algebra", str(alg_path), "--tensor", str(out_path), "--operator-form")
    assert code == EXIT_PASS and "mybe_operator_form: PASS" in out


def test_build_post_and_derived(tmp_path, capsys):
    post = str(tmp_path / "post.json")
    code, out, _ = run(capsys, "build", "--construction", "post-from-oop", "--input", "corpus:sl2_triangular",
                       "--out", post)
    assert code == EXIT_PASS
    for construction in ("subadjacent", "double", "modified", "admissible"):
        target = str(tmp_path / f"{construction}.json")
        code, _, _ = run(capsys, "build", "--construction", construction, "--input", post, "--out", target)
        assert code == EXIT_PASS, construction
    code, out, _ = run(capsys, "check", "--input", str(tmp_path / "double.json"), "--identity", "sagle")
    assert code == EXIT_PASS
    code, out, _ = run(capsys, "check", "--input", post, "--identity", "post_malcev")
    assert code == EXIT_PASS


def test_build_refuses_failing_operator(tmp_path, capsys):
    path = str(tmp_path / "id.json")
    corpus.save(LinearMap.identity(2), path)
    code, out, _ = run(capsys, "build", "--construction", "post-from-rb", "--input", "corpus:aff2", "--map", path,
                       "--weight", "0", "--out", str(tmp_path / "x.json"))
    assert code == EXIT_FAIL and out.startswith("failed:")
    assert not (tmp_path / "x.json").exists()


def test_semidirect_build(tmp_path, capsys):
    target = str(tmp_path / "s.json")
    code, _, _ = run(capsys, "build", "--construction", "semidirect", "--input", "corpus:malcev7_adjoint",
                     "--out", target)
    assert code == EXIT_PASS and corpus.load(target).dim == 14


def test_diff(capsys):
    code, out, _ = run(capsys, "diff", "--left", "corpus:gl2", "--right", "corpus:gl2")
    assert code == EXIT_PASS and "tables agree" in out
    code, out, _ = run(capsys, "diff", "--left", "corpus:sl2", "--right", "corpus:so3")
    assert code == EXIT_FAIL and "differing cells" in out


def test_corpus_command(tmp_path, capsys):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == EXIT_PASS and "malcev7" in out and "printed_rhd" in out
    target = tmp_path / "o.json"
    code, _, _ = run(capsys, "corpus", "emit", "octonions", "--out", str(target))
    assert code == EXIT_PASS and json.loads(target.read_text())["dim"] == 8
    code, _, err = run(capsys, "corpus", "emit", "nope")
    assert code == EXIT_USAGE


def test_suite_command(tmp_path, capsys):
    code, out, _ = run(capsys, "suite", "--name", "corrupted", "--no-timing")
    assert code == EXIT_PASS
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"checks": [{"name": "x", "input": "corpus:sl2", "identity": "jacobi",
                                           "expect": "fail"}]}))
    code, out, _ = run(capsys, "suite", "--config", str(cfg), "--no-timing")
    assert code == EXIT_FAIL
