import json
import shlex

import pytest
from click.testing import CliRunner
from hypothesis import given, settings
from hypothesis import strategies as st

from core import export
from core.settings import OUTPUT_FORMATS, TAU_RULE_NAMES, RunConfig
from core.topology import ArchitectureKind
from ui import cli as cli_module
from ui.cli import cli, main, parse_run_config


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.setattr(cli_module.console, "width", 200)
    return CliRunner()


def test_list(runner):
    result = runner.invoke(cli, ["list"])
    assert result.exit_code == 0
    for kind in ArchitectureKind:
        assert kind.value in result.output


def test_simulate_prints_csv(runner):
    result = runner.invoke(cli, ["simulate", "--arch", "P", "--steps", "3"])
    assert result.exit_code == 0
    lines = result.output.strip().split("\n")
    assert lines[0] == "t,x1,x2,x3,x4,x5"
    assert len(lines) == 5
    assert lines[1].startswith("0,0.2")


def test_simulate_short_horizon(runner):
    result = runner.invoke(cli, ["simulate", "--arch", "PDC", "--steps", "5"])
    assert result.exit_code == 0
    assert len(result.output.strip().split("\n")) == 7


def test_simulate_short_horizon_svg(runner, tmp_path):
    out = tmp_path / "short.svg"
    result = runner.invoke(cli, ["simulate", "--arch", "SNO", "--steps", "2", "--format", "svg",
                                 "--out", str(out)])
    assert result.exit_code == 0
    svg = out.read_text(encoding="utf-8")
    assert 'id="agent-1"' in svg
    assert 'id="tau"' not in svg


def test_simulate_writes_csv(runner, tmp_path):
    out = tmp_path / "traj.csv"
    result = runner.invoke(cli, ["simulate", "--arch", "SDO", "--steps", "10", "--out", str(out)])
    assert result.exit_code == 0
    assert export.read_trajectory(out).shape == (11, 5)


def test_simulate_all_into_directory(runner, tmp_path):
    result = runner.invoke(cli, ["simulate", "--steps", "30", "--out", str(tmp_path)])
    assert result.exit_code == 0
    assert len(list(tmp_path.glob("traj_*.csv"))) == 11


def test_metrics_table(runner):
    result = runner.invoke(cli, ["metrics", "--arch", "SDO", "--s", "0.1", "--f", "0.8"])
    assert result.exit_code == 0
    assert "SDO@B" in result.output
    assert "0.4451" in result.output


def test_metrics_sorted_csv(runner, tmp_path):
    out = tmp_path / "metrics.csv"
    result = runner.invoke(cli, ["metrics", "--s", "0.1", "--f", "0.8", "--sort", "total_work",
                                 "--out", str(out)])
    assert result.exit_code == 0
    rows = export.read_metrics(out)
    assert [row["arch"] for row in rows[:3]] == ["P", "PDO", "SDO"]


def test_suite_command(runner, tmp_path):
    result = runner.invoke(cli, ["suite", "--out", str(tmp_path)])
    assert result.exit_code == 0
    assert (tmp_path / "metrics.csv").exists()
    assert (tmp_path / "pca.csv").exists()
    assert "Pareto front" in result.output


def test_pca_command_svg(runner, tmp_path):
    out = tmp_path / "pca.svg"
    result = runner.invoke(cli, ["pca", "--format", "svg", "--out", str(out)])
    assert result.exit_code == 0
    assert "explained" in result.output
    assert 'id="pc-SDO-B"' in out.read_text(encoding="utf-8")


@pytest.mark.parametrize("kind,gid", [("trajectory", 'id="agent-1"'), ("work", 'id="bar-SA-1"')])
def test_plot_command(runner, tmp_path, kind, gid):
    out = tmp_path / f"{kind}.svg"
    result = runner.invoke(cli, ["plot", "--arch", "SA", "--s", "0.3", "--f", "0.6",
                                 "--kind", kind, "--out", str(out)])
    assert result.exit_code == 0
    assert gid in out.read_text(encoding="utf-8")


def test_dump_config(runner):
    result = runner.invoke(cli, ["simulate", "--arch", "SDO", "--s", "0.1", "--f", "0.8",
                                 "--dump-config"])
    assert result.exit_code == 0
    flags = shlex.split(result.output)
    assert parse_run_config(flags) == RunConfig(arch="SDO", s=0.1, f=0.8)


def test_config_file_then_flags(runner, tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"arch": "SNC", "s": 0.1, "f": 0.8, "steps": 40}), encoding="utf-8")
    assert parse_run_config(["--config", str(path)]) == RunConfig(arch="SNC", s=0.1, f=0.8, steps=40)
    assert parse_run_config(["--config", str(path), "--steps", "60"]).steps == 60


def test_save_config_round_trip(runner, tmp_path):
    path = tmp_path / "saved.json"
    result = runner.invoke(cli, ["simulate", "--arch", "SDC", "--s", "0.1", "--f", "0.8",
                                 "--steps", "30", "--save-config", str(path), "--dump-config"])
    assert result.exit_code == 0
    assert parse_run_config(["--config", str(path)]) == RunConfig(arch="SDC", s=0.1, f=0.8, steps=30)


@pytest.mark.parametrize("text", ["{not json", '{"arch": "SDO", "steps": "40"}'])
def test_bad_config_file_exit_code(tmp_path, capsys, text):
    path = tmp_path / "settings.json"
    path.write_text(text, encoding="utf-8")
    assert main(["metrics", "--arch", "SDO", "--config", str(path)]) == 1
    assert "--config" in capsys.readouterr().err


@settings(max_examples=20, deadline=None)
@given(arch=st.sampled_from(["ALL"] + [kind.value for kind in ArchitectureKind]),
       n_agents=st.integers(min_value=2, max_value=12),
       s=st.floats(min_value=0.0, max_value=1.0),
       f=st.floats(min_value=0.0, max_value=1.0),
       b=st.floats(min_value=1e-3, max_value=1e3),
       steps=st.integers(min_value=1, max_value=1000),
       threshold=st.floats(min_value=0.01, max_value=0.99),
       out=st.text(alphabet="abc xyz_./", max_size=12),
       fmt=st.sampled_from(OUTPUT_FORMATS),
       tau_rule=st.sampled_from(TAU_RULE_NAMES))
def test_flags_round_trip(arch, n_agents, s, f, b, steps, threshold, out, fmt, tau_rule):
    config = RunConfig(arch=arch, n_agents=n_agents, s=s, f=f, b=b, steps=steps,
                       threshold=threshold, out=out, format=fmt, tau_rule=tau_rule)
    assert parse_run_config(shlex.split(shlex.join(config.to_flags()))) == config


@pytest.mark.parametrize("argv", [
    ["simulate", "--arch", "XYZ"],
    ["metrics", "--arch", "P", "--s", "0.8", "--f", "0.3"],
    ["metrics", "--arch", "PDC", "--s", "0.5", "--f", "0.5"],
    ["simulate", "--arch", "PDC", "--steps", "0"],
    ["plot", "--arch", "P"],
    ["bogus"],
    ["simulate", "--format", "png"],
])
def test_validation_exit_code(argv):
    assert main(argv) == 1


def test_error_names_flag(capsys):
    assert main(["metrics", "--arch", "P", "--s", "0.8", "--f", "0.3"]) == 1
    err = capsys.readouterr().err
    assert "Error: fractions exceed unity" in err
    assert "--f" in err


def test_io_exit_code(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    assert main(["simulate", "--arch", "P", "--out", str(blocker / "traj.csv")]) == 2


def test_help_exit_code():
    assert main(["--help"]) == 0


def test_success_exit_code(tmp_path):
    assert main(["metrics", "--arch", "SA", "--out", str(tmp_path / "m.csv")]) == 0


def test_plot_dark_theme(runner, tmp_path):
    out = tmp_path / "dark.svg"
    result = runner.invoke(cli, ["plot", "--arch", "PDC", "--theme", "dark", "--out", str(out)])
    assert result.exit_code == 0
    assert "#1e1e1e" in out.read_text(encoding="utf-8")
