"""End-to-end checks of the command line front end."""

import json
import math
from pathlib import Path

import pytest

from coupon_bne import cli

CONFIGS = Path(__file__).parent / "configs"
ALL_CONFIGS = (
    "privacy.json",
    "scoring_quadratic.json",
    "scoring_asymmetric.json",
    "identity.json",
    "identity_uniform.json",
    "optout.json",
)


def run(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def write_json(path: Path, doc) -> str:
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# solve


def test_solve_scoring_text_reports_ln3(capsys):
    rc, out, _ = run(
        capsys, "solve", "--config", str(CONFIGS / "scoring_quadratic.json")
    )
    assert rc == 0
    assert "case: Interior" in out
    assert "b: p=0.875 q=0.5625" in out
    assert "a: x0=0.25 x1=0.75" in out
    eps_line = next(l for l in out.splitlines() if l.startswith("epsilon: "))
    assert float(eps_line.split(": ")[1]) == pytest.approx(math.log(3.0), abs=1e-12)


def test_solve_privacy_json_matches_closed_form(capsys):
    rc, out, _ = run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / "privacy.json"),
        "--format",
        "json",
    )
    assert rc == 0
    doc = json.loads(out)
    p_star = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 / 100.0))
    assert doc["case"] == "Interior"
    assert doc["b"]["p"] == pytest.approx(p_star, abs=1e-14)
    assert doc["b"]["q"] == pytest.approx(p_star, abs=1e-14)
    assert doc["unique"] is True


def test_solve_identity_interval_note(capsys):
    rc, out, _ = run(capsys, "solve", "--config", str(CONFIGS / "identity.json"))
    assert rc == 0
    assert "case: Rho0Greater" in out
    assert "b: p=1.0 q=0.0" in out
    assert "unique: false" in out
    assert "note: y interval: [0.5, 0.8]" in out


def test_solve_continuous_uniform_threshold(capsys):
    rc, out, _ = run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / "identity_uniform.json"),
        "--format",
        "json",
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["case"] == "Threshold"
    assert abs(doc["a"]["y"] - 0.3) <= 1e-10
    assert doc["epsilon"] == pytest.approx(math.log(7.0 / 3.0), abs=1e-10)


def test_solve_optout_case6(capsys):
    rc, out, _ = run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / "optout.json"),
        "--format",
        "json",
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["case"] == "Case6"
    assert doc["a"]["x0"] == pytest.approx(0.28, abs=1e-12)
    assert doc["a"]["y1"] == pytest.approx(0.36, abs=1e-12)
    assert doc["epsilon"] == pytest.approx(math.log(math.sqrt(6.0)), abs=1e-10)


def test_solve_infeasible_optout_names_inequality(capsys, tmp_path):
    cfg = write_json(
        tmp_path / "bad.json",
        {
            "game": "optout",
            "d0": 0.5,
            "rho0": 1.0,
            "rho1": 1.0,
            "m00": 3.0,
            "m01": 1.0,
            "m10": 2.0,
            "m11": 1.0,
        },
    )
    rc, _, err = run(capsys, "solve", "--config", cfg)
    assert rc == 3
    assert "m00*D0 < m01*D1 fails" in err


def test_solve_csv_emits_utility_surface(capsys):
    rc, out, _ = run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / "identity.json"),
        "--format",
        "csv",
        "--grid",
        "0.5",
    )
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "p,q,u_b0,u_b1,u_a"
    assert len(lines) == 1 + 9


def test_solve_output_is_byte_stable(capsys):
    args = ("solve", "--config", str(CONFIGS / "optout.json"), "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


# ---------------------------------------------------------------------------
# verify


@pytest.mark.parametrize("name", ALL_CONFIGS)
def test_round_trip_solve_then_verify(capsys, tmp_path, name):
    profile = tmp_path / "solved.json"
    rc, _, _ = run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / name),
        "--format",
        "json",
        "--out",
        str(profile),
    )
    assert rc == 0
    rc, out, _ = run(
        capsys,
        "verify",
        "--config",
        str(CONFIGS / name),
        "--profile",
        str(profile),
    )
    assert rc == 0, out
    assert "PASS" in out


def test_verify_perturbed_profile_fails(capsys, tmp_path):
    profile = tmp_path / "solved.json"
    run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / "optout.json"),
        "--format",
        "json",
        "--out",
        str(profile),
    )
    doc = json.loads(profile.read_text(encoding="utf-8"))
    doc["b"]["p"] += 0.2
    perturbed = write_json(tmp_path / "perturbed.json", doc)
    rc, out, _ = run(
        capsys,
        "verify",
        "--config",
        str(CONFIGS / "optout.json"),
        "--profile",
        perturbed,
    )
    assert rc == 1
    assert "FAIL" in out
    assert "deviation:" in out


def test_verify_empty_profile_is_usage_error(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("", encoding="utf-8")
    rc, _, err = run(
        capsys,
        "verify",
        "--config",
        str(CONFIGS / "identity.json"),
        "--profile",
        str(empty),
    )
    assert rc == 2
    assert "error:" in err


# ---------------------------------------------------------------------------
# sweep


def sweep_config(tmp_path, doc):
    return write_json(tmp_path / "sweep.json", doc)


def test_sweep_quadratic_epsilon_closed_form(capsys, tmp_path):
    cfg = sweep_config(
        tmp_path,
        {
            "game": "scoring",
            "d0": 0.5,
            "rule": "quadratic",
            "sweep": {"axis": "rho", "start": 0.2, "stop": 1.8, "steps": 9},
        },
    )
    rc, out, _ = run(capsys, "sweep", "--config", cfg)
    assert rc == 0
    lines = out.strip().split("\n")
    header = lines[0].split(",")
    assert header[:3] == ["step", "rho", "case"]
    eps_col = header.index("epsilon")
    assert len(lines) == 10
    for line in lines[1:]:
        cells = line.split(",")
        rho = float(cells[1])
        assert float(cells[eps_col]) == pytest.approx(
            math.log((2.0 + rho) / (2.0 - rho)), abs=1e-10
        )


def test_sweep_log_rule_epsilon_is_rho(capsys, tmp_path):
    cfg = sweep_config(
        tmp_path,
        {
            "game": "scoring",
            "d0": 0.55,
            "rule": "logarithmic",
            "sweep": {"axis": "rho", "start": 0.3, "stop": 3.0, "steps": 10},
        },
    )
    rc, out, _ = run(capsys, "sweep", "--config", cfg)
    assert rc == 0
    for line in out.strip().split("\n")[1:]:
        cells = line.split(",")
        assert float(cells[7]) == pytest.approx(float(cells[1]), abs=1e-10)


def test_sweep_identity_case_switch(capsys, tmp_path):
    cfg = sweep_config(
        tmp_path,
        {
            "game": "identity",
            "d0": 0.6,
            "rho0": 0.0,
            "rho1": 0.5,
            "sweep": {"axis": "rho0", "start": 0.3, "stop": 0.7, "steps": 5},
        },
    )
    rc, out, _ = run(capsys, "sweep", "--config", cfg)
    assert rc == 0
    cases = [line.split(",")[2] for line in out.strip().split("\n")[1:]]
    assert cases == [
        "Rho1Greater",
        "Rho1Greater",
        "RhoEqual",
        "Rho0Greater",
        "Rho0Greater",
    ]


def test_sweep_infeasible_step_exits_3_unless_skipped(capsys, tmp_path):
    doc = {
        "game": "optout",
        "d0": 0.55,
        "rho0": 1.0,
        "rho1": 1.2,
        "m00": 1.0,
        "m01": 3.0,
        "m10": 2.0,
        "m11": 1.0,
        "sweep": {"axis": "d0", "start": 0.55, "stop": 0.85, "steps": 4},
    }
    cfg = sweep_config(tmp_path, doc)
    rc, _, err = run(capsys, "sweep", "--config", cfg)
    assert rc == 3
    assert "infeasible" in err
    rc, out, _ = run(capsys, "sweep", "--config", cfg, "--skip-infeasible")
    assert rc == 0
    lines = out.strip().split("\n")
    assert len(lines) == 3  # header + the two feasible steps
    assert [line.split(",")[0] for line in lines[1:]] == ["0", "1"]


def test_sweep_output_is_byte_stable(capsys, tmp_path):
    cfg = sweep_config(
        tmp_path,
        {
            "game": "privacy_aware",
            "d0": 0.5,
            "rho": 10.0,
            "v": 0.0,
            "sweep": {"axis": "v", "start": 0.25, "stop": 2.5, "steps": 6},
        },
    )
    _, first, _ = run(capsys, "sweep", "--config", cfg)
    _, second, _ = run(capsys, "sweep", "--config", cfg)
    assert first == second
    assert first.startswith("step,v,case,p,q,epsilon,u_b\n")


# ---------------------------------------------------------------------------
# cases


def test_cases_counts_and_determinism(capsys, tmp_path):
    cfg = write_json(
        tmp_path / "cases.json", {"cases": {"count": 300, "margin": 1e-6}}
    )
    rc, first, _ = run(capsys, "cases", "--config", cfg, "--seed", "11")
    assert rc == 0
    assert "samples: 300" in first
    assert "inconsistencies: 0" in first
    rc, second, _ = run(capsys, "cases", "--config", cfg, "--seed", "11")
    assert first == second
    rc, other, _ = run(capsys, "cases", "--config", cfg, "--seed", "12")
    assert other != first


def test_cases_require_case6(capsys, tmp_path):
    cfg = write_json(
        tmp_path / "cases.json",
        {"cases": {"count": 40, "require_case": "Case6"}},
    )
    rc, out, _ = run(capsys, "cases", "--config", cfg, "--seed", "7", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["counts"] == {"Case6": 40}
    assert doc["inconsistencies"] == 0


# ---------------------------------------------------------------------------
# epsilon


def test_epsilon_randomized_response(capsys):
    rc, out, _ = run(capsys, "epsilon", "--p", "0.9", "--q", "0.9")
    assert rc == 0
    assert "X: 9.0" in out
    assert f"epsilon: {math.log(9.0)!r}" in out
    assert "randomized_response: true" in out


def test_epsilon_uninformative_corner(capsys):
    rc, out, _ = run(capsys, "epsilon", "--p", "1.0", "--q", "0.0", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["X"] == 1.0
    assert doc["epsilon"] == 0.0
    assert doc["randomized_response"] is False


def test_epsilon_revealing_channel_encodes_inf(capsys):
    rc, out, _ = run(capsys, "epsilon", "--p", "1.0", "--q", "1.0", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["X"] == "inf"
    assert doc["epsilon"] == "inf"


def test_epsilon_out_of_range_is_usage_error(capsys):
    rc, _, err = run(capsys, "epsilon", "--p", "1.2", "--q", "0.5")
    assert rc == 2
    assert "error:" in err


# ---------------------------------------------------------------------------
# usage errors


def test_unknown_game_exits_2(capsys, tmp_path):
    cfg = write_json(tmp_path / "odd.json", {"game": "poker", "d0": 0.5})
    rc, _, err = run(capsys, "solve", "--config", cfg)
    assert rc == 2
    assert "game" in err


def test_negative_grid_exits_2(capsys):
    rc, _, err = run(
        capsys,
        "solve",
        "--config",
        str(CONFIGS / "identity.json"),
        "--grid",
        "-0.1",
    )
    assert rc == 2
    assert "--grid" in err


def test_missing_config_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_negative_seed_exits_2(capsys):
    rc, _, err = run(
        capsys,
        "cases",
        "--config",
        str(CONFIGS / "identity.json"),
        "--seed",
        "-1",
    )
    assert rc == 2
    assert "seed" in err
