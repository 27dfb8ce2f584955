"""CLI surface: JSON envelopes, CSV plots, exit codes, determinism."""

import json
import math
import re

import pytest

from tmahler.cli import run

LOG = math.log
TOL = 1e-9


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def invoke_json(capsys, *argv):
    code, out = invoke(capsys, *argv)
    return code, json.loads(out)


def test_mt_envelope(capsys):
    code, env = invoke_json(capsys, "mt", "4/3", "--t", "2")
    assert code == 0
    assert env["schema_version"] == "1"
    assert env["command"]["verb"] == "mt"
    r = env["result"]
    assert abs(r["value"] ** 2 - (LOG(3) ** 2 + LOG(2) ** 2)) < TOL
    assert r["witness"]["factors"] == ["2/3", "2"]
    assert "timing_ms" in env


def test_mt_surd_and_inf_token(capsys):
    code, env = invoke_json(capsys, "mt-surd", "30", "2", "--t", "inf")
    assert code == 0
    r = env["result"]
    assert r["t"] == "inf"
    assert abs(r["value"] - LOG(5)) < TOL
    assert r["witness"] == ["5^(1/2)", "3^(1/2)", "2^(1/2)"]


def test_attainment_false_for_30(capsys):
    code, env = invoke_json(capsys, "attainment", "30", "--t", "2")
    assert code == 0
    r = env["result"]
    assert r["attained"] is False
    assert r["witness"] is None
    assert r["certificate"]["candidates"] == []
    assert r["primes"] == [5, 3, 2]


def test_attainment_witness_for_42(capsys):
    code, env = invoke_json(capsys, "attainment", "42", "--t", "2")
    assert code == 0
    r = env["result"]
    assert r["attained"] is True
    assert r["witness"] == ["(7/6)^(1/2)", "3", "2"]
    assert abs(tcost(r["witness_measures"], 2) - r["value"]) < TOL


def tcost(measures, t):
    return sum(m**t for m in measures) ** (1 / t)


def test_measure_quadratic(capsys):
    code, env = invoke_json(capsys, "measure", "--quadratic", "1,-7,7")
    assert code == 0
    r = env["result"]
    assert abs(r["mahler"] - LOG(7)) < TOL
    assert r["stability"] == "stable_outside"
    assert r["norm"] == "7"
    assert r["minimal_polynomial"] == "x^2 - 7x + 7"


def test_measure_rational_and_surd(capsys):
    _, env = invoke_json(capsys, "measure", "-7/6")
    assert abs(env["result"]["mahler"] - LOG(7)) < TOL
    _, env = invoke_json(capsys, "measure", "--surd", "(7/3)^(1/2)")
    assert env["result"]["norm"] == "-7/3"
    assert env["result"]["degree"] == 2


def test_measure_log_base_display(capsys):
    _, env = invoke_json(capsys, "measure", "8", "--log-base", "2")
    assert abs(env["result"]["mahler"] - 3.0) < TOL


def test_plot_csv(capsys):
    code, out = invoke(capsys, "plot", "6", "--t-min", "1", "--t-max", "3",
                       "--step", "1", "--include-infinity")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,value"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["1", "2", "3", "inf"]
    values = [float(ln.split(",")[1]) for ln in lines[1:]]
    assert abs(values[0] - LOG(6)) < TOL
    assert abs(values[-1] - LOG(3)) < TOL
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_plot_unit_is_zero_column(capsys):
    _, out = invoke(capsys, "plot", "1", "--t-min", "1", "--t-max", "2", "--step", "0.5")
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert all(float(ln.split(",")[1]) == 0.0 for ln in lines[1:])


def test_plot_surd_single_row(capsys):
    _, out = invoke(capsys, "plot", "--surd", "30", "2", "--t-min", "2",
                    "--t-max", "2", "--step", "1")
    lines = out.strip().splitlines()
    assert len(lines) == 2
    t2 = (LOG(5) ** 2 + LOG(3) ** 2 + LOG(2) ** 2) ** 0.5
    assert abs(float(lines[1].split(",")[1]) - t2) < TOL


def test_oracle_check(capsys):
    code, env = invoke_json(capsys, "oracle-check", "360/7", "--t", "1.5")
    assert code == 0
    assert env["result"]["agree"] is True
    assert env["result"]["abs_diff"] <= 1e-9


def test_small_quadratics(capsys):
    code, env = invoke_json(capsys, "small-quadratics", "21")
    assert code == 0
    polys = {c["coefficients"] for c in env["result"]["candidates"]}
    assert {"1,7,7,+", "1,-7,7,+", "3,0,-7,+"} <= polys


def test_certify(capsys):
    code, env = invoke_json(capsys, "certify", "30", "--t", "2")
    assert code == 0
    assert env["result"]["empty"] is True


def test_verify_paper_all_pass(capsys):
    code, env = invoke_json(capsys, "verify-paper")
    assert code == 0
    assert env["result"]["all_pass"] is True
    assert env["result"]["failed"] == 0


def test_domain_errors_exit_1_with_code(capsys):
    cases = [
        (("attainment", "12", "--t", "2"), "NotSquarefree"),
        (("mt", "6", "--t", "0.5"), "InvalidT"),
        (("attainment", "21", "--t", "1"), "TOutOfRange"),
        (("certify", "21", "--t", "2"), "WrongRegime"),
        (("mt", "0", "--t", "2"), "InvalidInput"),
        (("oracle-check", "2048", "--t", "2"), "TooLarge"),
    ]
    for argv, code_name in cases:
        code, env = invoke_json(capsys, *argv)
        assert code == 1, argv
        assert env["error"]["code"] == code_name
        assert "result" not in env


def test_usage_errors_exit_2(capsys):
    for argv in (["mt", "x/y", "--t", "2"], ["mt"], ["no-such-verb"], []):
        with pytest.raises(SystemExit) as exc:
            run(argv)
        assert exc.value.code == 2
        capsys.readouterr()


def test_output_deterministic_modulo_timing(capsys):
    def strip_timing(text):
        return re.sub(r'"timing_ms": [0-9.]+', '"timing_ms": X', text)

    _, out1 = invoke(capsys, "mt", "360/7", "--t", "1.5")
    _, out2 = invoke(capsys, "mt", "360/7", "--t", "1.5")
    assert strip_timing(out1) == strip_timing(out2)
    _, csv1 = invoke(capsys, "plot", "42", "--t-min", "1", "--t-max", "4",
                     "--step", "0.5", "--include-infinity")
    _, csv2 = invoke(capsys, "plot", "42", "--t-min", "1", "--t-max", "4",
                     "--step", "0.5", "--include-infinity")
    assert csv1 == csv2


def test_fifteen_significant_digits(capsys):
    _, env = invoke_json(capsys, "mt-surd", "30", "2", "--t", "2")
    # round-tripping through 15 significant digits is the identity on output
    v = env["result"]["value"]
    assert v == float(f"{v:.15g}")
