import csv
import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosserat_shell import cli
from cosserat_shell.config import dump_config, parse_config, parse_config_text
from cosserat_shell.energy import identify_coeffs
from cosserat_shell.errors import ConfigError
from cosserat_shell.fem import assembly

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

MINIMAL = """\
[chart]
kind = plane

[material]
mu = 1.0
lambda = 1.0
muc = 0.3
Lc = 0.1
b1 = 1.0
b2 = 1.0
b3 = 1.0

[model]
order = H5
h = 0.1
"""


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def line_of(text, needle):
    return next(i for i, line in enumerate(text.splitlines(), 1) if needle in line)


# --- parsing ---------------------------------------------------------------------


def test_minimal_config_parses():
    cfg = parse_config_text(MINIMAL)
    assert cfg.chart.kind == "plane"
    assert cfg.material.lam == 1.0 and cfg.material.muc == 0.3
    assert cfg.model.order == "H5" and cfg.model.h == 0.1


def test_negative_muc_reported_on_its_line():
    text = MINIMAL.replace("muc = 0.3", "muc = -1")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert (line_of(text, "muc = -1"), "μ_c ≥ 0 violated") in exc.value.errors


def test_unknown_model_order_is_a_parse_error():
    text = MINIMAL.replace("order = H5", "order = H7")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert [ln for ln, _ in exc.value.errors] == [line_of(text, "order = H7")]


def test_missing_keys_are_listed():
    text = MINIMAL.replace("Lc = 0.1\n", "").replace("h = 0.1\n", "")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    msgs = " ".join(m for _, m in exc.value.errors)
    assert "'Lc'" in msgs and "'h'" in msgs


def test_unknown_key_and_bad_number():
    text = MINIMAL.replace("b3 = 1.0", "b3 = one\nb4 = 2")
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert {ln for ln, _ in exc.value.errors} == {line_of(text, "b3 = one"),
                                                  line_of(text, "b4 = 2")}


def test_unreadable_file():
    with pytest.raises(ConfigError):
        parse_config("/nonexistent/run.cfg")


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.cfg")), ids=lambda p: p.stem)
def test_shipped_configs_round_trip(path):
    cfg = parse_config(path)
    assert parse_config_text(dump_config(cfg)) == cfg


@given(st.floats(0.01, 5.0), st.floats(-0.4, 5.0), st.floats(0.0, 3.0),
       st.floats(0.001, 1.0), st.sampled_from(["H3", "H5"]), st.integers(1, 64),
       st.sampled_from(["plane", "cylinder", "sphere", "saddle"]))
def test_dump_round_trip(mu, lam_ratio, muc, h, order, n, kind):
    text = (MINIMAL.replace("kind = plane", f"kind = {kind}")
            .replace("mu = 1.0", f"mu = {mu!r}")
            .replace("lambda = 1.0", f"lambda = {lam_ratio * mu!r}")
            .replace("muc = 0.3", f"muc = {muc!r}")
            .replace("order = H5", f"order = {order}")
            .replace("h = 0.1", f"h = {h!r}")) + f"\n[mesh]\nnx = {n}\nny = {n}\n"
    cfg = parse_config_text(text)
    assert parse_config_text(dump_config(cfg)) == cfg


# --- command line ----------------------------------------------------------------


def test_check_sphere_thin_enough(tmp_path, capsys):
    assert cli.main(["check", "--config", str(CONFIGS / "check_sphere_h05.cfg"),
                     "--out", str(tmp_path)]) == 0
    assert "h5_ok=true" in capsys.readouterr().out
    assert "h5_ok=true" in (tmp_path / "check.txt").read_text()


def test_check_inadmissible_exits_3(tmp_path):
    text = (CONFIGS / "check_sphere_h05.cfg").read_text().replace("h = 0.5", "h = 1.5")
    assert cli.main(["check", "--config", str(write(tmp_path, text))]) == 3


def test_solve_inadmissible_exits_3(tmp_path, capsys):
    text = (CONFIGS / "check_sphere_h05.cfg").read_text().replace("h = 0.5", "h = 1.5")
    assert cli.main(["solve", "--config", str(write(tmp_path, text))]) == 3
    assert "inadmissible" in capsys.readouterr().err


def test_config_error_exits_2_with_line(tmp_path, capsys):
    text = MINIMAL.replace("muc = 0.3", "muc = -1")
    path = write(tmp_path, text)
    assert cli.main(["check", "--config", str(path)]) == 2
    assert f"{path}:{line_of(text, 'muc = -1')}: μ_c ≥ 0 violated" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path):
    assert cli.main(["check", "--config", str(tmp_path / "absent.cfg")]) == 2


def test_solve_with_zero_load(tmp_path):
    path = write(tmp_path, MINIMAL + "\n[mesh]\nnx = 4\nny = 4\n")
    assert cli.main(["solve", "--config", str(path), "--out", str(tmp_path)]) == 0
    summary = dict(line.split("=") for line in (tmp_path / "summary.txt").read_text().split())
    assert float(summary["energy"]) == 0.0
    with open(tmp_path / "solution.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 25
    assert all(float(r[k]) == 0.0 for r in rows for k in ("v1", "v2", "v3", "t1", "t2", "t3"))
    assert (tmp_path / "effective_config.txt").exists()


def test_solve_outputs_are_deterministic(tmp_path, monkeypatch):
    cfg = CONFIGS / "cylinder.cfg"
    outputs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("COSSERAT_SHELL_THREADS", threads)
        out = tmp_path / threads
        assert cli.main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
        outputs.append({n: (out / n).read_text() for n in ("solution.csv", "deformed.csv")})
    assert outputs[0] == outputs[1]


def test_solve_plane_pressure_deflects_up(tmp_path):
    assert cli.main(["solve", "--config", str(CONFIGS / "plane.cfg"), "--out",
                     str(tmp_path)]) == 0
    sol = np.loadtxt(tmp_path / "solution.csv", delimiter=",", skiprows=1)
    assert sol[:, 5].max() > 0 and np.allclose(sol[:, 3:5], 0, atol=1e-12 * sol[:, 5].max())


def test_identify_matches_library(tmp_path):
    path = write(tmp_path, MINIMAL)
    assert cli.main(["identify", "--config", str(path), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "identify.csv").read_text() == identify_coeffs(
        parse_config(path).material, 0.1, 0.0).to_csv()


def test_identities_and_korn(tmp_path):
    path = write(tmp_path, MINIMAL.replace("kind = plane", "kind = saddle")
                 + "\n[mesh]\nnx = 4\nny = 4\n")
    assert cli.main(["identities", "--config", str(path), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "identities.csv").read_text().count("\n") == 13
    assert cli.main(["korn", "--config", str(path), "--out", str(tmp_path)]) == 0
    assert float((tmp_path / "korn.txt").read_text().split()[0].split("=")[1]) > 0


def test_convergence_command(tmp_path):
    text = (CONFIGS / "convergence.cfg").read_text().replace("levels = 4", "levels = 3")
    assert cli.main(["convergence", "--config", str(write(tmp_path, text)), "--out",
                     str(tmp_path)]) == 0
    lines = (tmp_path / "convergence.csv").read_text().splitlines()
    assert lines[0] == "level,n,ndofs,energy,rate" and len(lines) == 4
    assert 1.5 <= float(lines[-1].split(",")[-1]) <= 2.5


@pytest.mark.parametrize("value, expected", [("1", 1), ("3", 3), ("0", 1), ("junk", 1)])
def test_thread_cap(monkeypatch, value, expected):
    monkeypatch.setenv("COSSERAT_SHELL_THREADS", value)
    assert assembly.worker_count() == min(expected, assembly.os.cpu_count() or 1)


@pytest.mark.skipif(shutil.which("cosserat-shell") is None, reason="console script not installed")
def test_console_script(tmp_path):
    res = subprocess.run(["cosserat-shell", "check", "--config",
                          str(CONFIGS / "check_sphere_h05.cfg")], capture_output=True, text=True)
    assert res.returncode == 0 and "h5_ok=true" in res.stdout
    res = subprocess.run(["cosserat-shell", "bogus", "--config", "x"], capture_output=True)
    assert res.returncode == 2
