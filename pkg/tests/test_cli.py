import subprocess
import sys

import pytest

from supercech.cli import main

from conftest import corpus_path


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_pass(capsys):
    code, out, _ = run_cli(capsys, "verify", "--input", str(corpus_path("split_p1.model")))
    assert code == 0
    assert "gluing.ok: True" in out


def test_verify_fail_names_witness(capsys):
    code, out, _ = run_cli(capsys, "verify", "--input", str(corpus_path("corrupt_sign.model")))
    assert code == 1
    assert "('U0', 'U1')" in out and "theta_1" in out


def test_unknown_command_rejected_before_reading():
    with pytest.raises(SystemExit):
        main(["frobnicate", "--input", "nonexistent.model"])


def test_missing_file_is_input_error(capsys):
    code = main(["verify", "--input", "/nonexistent/x.model"])
    assert code == 2


def test_splitting_type_and_fiber(capsys):
    path = str(corpus_path("nonsplit_p1.model"))
    code, out, _ = run_cli(capsys, "splitting-type", "--input", path)
    assert code == 0 and "splitting_type: 2" in out


def test_obstruction_structured(capsys):
    path = str(corpus_path("nonsplit_p1.model"))
    code, out, _ = run_cli(capsys, "obstruction", "--input", path,
                           "--format", "structured")
    assert code == 0
    assert "trivial=False" in out
    assert "canonical=U0|U1 -> (-x^-1)" in out


def test_attempt_split_reports(capsys):
    code, out, _ = run_cli(capsys, "attempt-split", "--input",
                           str(corpus_path("nonsplit_p1.model")))
    assert code == 0 and "fatal_level: 2" in out


def test_rothstein_round_trip(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "rothstein", "--input",
                           str(corpus_path("nonsplit_p1.model")))
    assert code == 0
    emitted = tmp_path / "family.model"
    emitted.write_text(out)
    code, out2, _ = run_cli(capsys, "splitting-type", "--input", str(emitted),
                            "--at", "t=0")
    assert code == 0 and "infinity" in out2
    code, out3, _ = run_cli(capsys, "splitting-type", "--input", str(emitted),
                            "--at", "t=3")
    assert code == 0 and "splitting_type: 2" in out3


def test_scale_emits_scaled_data(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "scale", "--input",
                           str(corpus_path("nonsplit_p1.model")), "--lambda", "2")
    assert code == 0
    emitted = tmp_path / "scaled.model"
    emitted.write_text(out)
    code, out2, _ = run_cli(capsys, "obstruction", "--input", str(emitted))
    assert "-4*x^-1" in out2


def test_glue_p1(capsys):
    code, out, _ = run_cli(capsys, "glue-p1", "--input",
                           str(corpus_path("nonsplit_p1.model")))
    assert code == 0 and "witness_ok: True" in out


def test_a1_check(capsys):
    code, out, _ = run_cli(capsys, "a1-check", "--input",
                           str(corpus_path("gt_model_p1.model")), "--level", "2")
    assert code == 0 and "b=2.ok: True" in out


def test_report_all_deterministic(capsys):
    path = str(corpus_path("two_parameter_family.model"))
    code1, out1, _ = run_cli(capsys, "report-all", "--input", path,
                             "--seed", "5", "--format", "structured")
    code2, out2, _ = run_cli(capsys, "report-all", "--input", path,
                             "--seed", "5", "--format", "structured")
    assert code1 == code2 == 0
    assert out1 == out2


def test_window_cap_gives_undecidable_exit(tmp_path):
    # a deviation with a huge exponent pushes the derived window past the
    # cap; without explicit window flags the decision is refused (exit 3)
    text = """format 1

chart U0
  fiber x
  odd 2

chart U1
  fiber y
  odd 2

overlap U0 U1
overlap U1 U0

transition U0 U1
  y = 1/x + x^-70*theta_1*theta_2
  theta_1 = x^-2*theta_1
  theta_2 = x^-2*theta_2

transition U1 U0
  x = 1/y + y^64*theta_1*theta_2
  theta_1 = y^-2*theta_1
  theta_2 = y^-2*theta_2
"""
    path = tmp_path / "huge.model"
    path.write_text(text)
    code = main(["obstruction", "--input", str(path)])
    assert code == 3


def test_entry_point_subprocess():
    # the module is runnable as a script
    path = str(corpus_path("split_p1.model"))
    proc = subprocess.run([sys.executable, "-m", "supercech.cli", "verify",
                           "--input", path], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "gluing.ok" in proc.stdout
