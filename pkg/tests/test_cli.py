import json
import math

import numpy as np
import pytest

from condtail.cli import main, parse_t_grid
from condtail.errors import CondTailError
from condtail.io import read_table, write_dataset
from condtail.model import Dataset
from condtail.simulate import generate_conditional, lattice_design, uniform_margin
from condtail.model import SimSpec


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def pareto_csv(tmp_path_factory):
    spec = SimSpec(gamma_fn=lambda x: 0.5, design=lattice_design(100_000, 1, [uniform_margin()]), seed=2)
    path = tmp_path_factory.mktemp("data") / "pareto.csv"
    write_dataset(generate_conditional(spec), path)
    return path


def test_parse_t_grid(tmp_path):
    assert len(parse_t_grid("0:1:5")) == 5
    g = parse_t_grid("0:1:3;10,20")
    assert [p.tolist() for p in g][:2] == [[0.0, 10.0], [0.0, 20.0]]
    assert len(parse_t_grid("chelmer")) == 444
    f = tmp_path / "grid.csv"
    f.write_text("t1,t2\n0.1,0.2\n0.3,0.4\n")
    assert [p.tolist() for p in parse_t_grid(str(f))] == [[0.1, 0.2], [0.3, 0.4]]
    for empty in ("", ";", "0:1:0"):
        with pytest.raises(CondTailError, match="empty t-grid"):
            parse_t_grid(empty)


def test_estimate_empty_grid(capsys, pareto_csv, tmp_path):
    code, _, err = run(capsys, "estimate", "--data", pareto_csv, "--t-grid", "", "--h", 0.1,
                       "--k", 10, "--out", tmp_path / "o.csv")
    assert code == 2 and "empty t-grid" in err


def test_estimate_pareto(capsys, pareto_csv, tmp_path):
    out = tmp_path / "est.csv"
    code, msg, _ = run(capsys, "estimate", "--data", pareto_csv, "--t-grid", "0.1:0.9:5",
                       "--h", 0.05, "--k", 500, "--scheme", "hill", "--ci", 0.95,
                       "--diagnostics", "--out", out)
    assert code == 0 and "wrote 5 rows" in msg
    rows = read_table(out)
    assert len(rows) == 5
    for r in rows:
        assert abs(r["gamma_hat"] - 0.5) < 0.1
        assert r["ci_lower"] < r["gamma_hat"] < r["ci_upper"]
        assert 0 <= r["chi2_p"] <= 1
        assert r["m_t"] > 500
    manifest = json.loads((tmp_path / "est.manifest.json").read_text())
    assert manifest["command"] == "estimate" and manifest["args"]["k"] == 500


def test_estimate_infeasible(capsys, tmp_path):
    data = tmp_path / "small.csv"
    write_dataset(Dataset(np.linspace(0, 1, 11).reshape(-1, 1), np.arange(1, 12.0)), data)
    code, _, err = run(capsys, "estimate", "--data", data, "--t-grid", "0.5,2.0", "--h", 0.25,
                       "--k", 3, "--out", tmp_path / "o.csv")
    assert code == 2 and "infeasible grid point t=[2.0]" in err
    code, msg, _ = run(capsys, "estimate", "--data", data, "--t-grid", "0.5,2.0", "--h", 0.25,
                       "--k", 3, "--skip-infeasible", "--out", tmp_path / "o.csv")
    assert code == 0 and "1 infeasible" in msg
    assert len(read_table(tmp_path / "o.csv")) == 1


def test_select(capsys, tmp_path, rng):
    from conftest import random_dataset
    from condtail.selection import select_h_k

    ds = random_dataset(rng, 500, 1, gamma=0.4)
    data = tmp_path / "r.csv"
    write_dataset(ds, data)
    out = tmp_path / "sel.csv"
    code, msg, _ = run(capsys, "select", "--data", data, "--t-grid", "0.3,0.5,0.7",
                       "--h-grid", 0.1, 0.2, 0.3, "--k-grid", 5, 10, 20, 40, "--out", out)
    assert code == 0
    rows = read_table(out)
    assert len(rows) == 12
    best = min((r for r in rows if r["feasible"] == 1), key=lambda r: (r["objective"], r["h"], r["k"]))
    assert f"h={best['h']!r} k={int(best['k'])}" in msg
    res = select_h_k(ds, [[0.3], [0.5], [0.7]], [0.1, 0.2, 0.3], [5, 10, 20, 40])
    assert (res.h, res.k) == (best["h"], best["k"])


def test_select_equal_spacings(capsys, tmp_path):
    m = 40
    tau = np.cumsum((1.0 / np.arange(1, m + 1))[::-1])[::-1]
    data = tmp_path / "g.csv"
    write_dataset(Dataset(np.zeros((m, 1)), np.exp(0.3 * tau)), data)
    code, msg, _ = run(capsys, "select", "--data", data, "--t-grid", "0", "--h-grid", 0.5, 0.2,
                       "--k-grid", 9, 4, "--out", tmp_path / "s.csv")
    assert code == 0 and "selected h=0.2 k=4" in msg


SPEC = {"family": "burr", "gamma": 0.3, "rho": -1.0, "seed": 5,
        "design": {"type": "explicit", "points": [[0.0]] * 2000},
        "monte_carlo": {"t": [0.0], "h": 1.0, "k": 200, "reps": 200, "schemes": ["hill", "opt"],
                        "rho_star": -1.0}}


def test_simulate_deterministic(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(SPEC))
    outs = []
    for j in range(2):
        d, r = tmp_path / f"d{j}.csv", tmp_path / f"r{j}.csv"
        code, msg, _ = run(capsys, "simulate", "--spec", spec, "--out", d, "--report", r)
        assert code == 0
        outs.append((d.read_bytes(), r.read_bytes()))
    assert outs[0] == outs[1]
    rows = read_table(tmp_path / "r0.csv")
    assert [r["scheme"] for r in rows] == ["hill", "opt(-1)"]
    assert all(0.8 < r["z_std"] < 1.2 for r in rows)
    assert json.loads((tmp_path / "d0.manifest.json").read_text())["seed"] == 5


def test_simulate_invalid_rho(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({**SPEC, "rho": 0.2}))
    code, _, err = run(capsys, "simulate", "--spec", spec, "--out", tmp_path / "d.csv")
    assert code == 2 and err.startswith("error: rho:")


def test_regions(capsys, tmp_path):
    out = tmp_path / "reg.csv"
    code, msg, _ = run(capsys, "regions", "--rho-range", -1, -1, "--rho-star-range", -1, -1,
                       "--resolution", 1, 1, "--out", out)
    assert code == 0
    rows = read_table(out)
    assert len(rows) == 1
    assert (rows[0]["area"], rows[0]["half_plane"]) == ("E", "N")
    run(capsys, "regions", "--rho-range", -1, -1, "--rho-star-range", -1, -1,
        "--resolution", 1, 1, "--literal", "--out", out)
    assert read_table(out)[0]["area"] == "D"


def test_regions_default_grid(capsys, tmp_path):
    out = tmp_path / "reg.csv"
    code, msg, _ = run(capsys, "regions", "--resolution", 60, 60, "--out", out)
    rows = read_table(out)
    assert len(rows) == 3600
    assert all(r["area_agrees"] == 1 for r in rows if r["area"] != "uncovered")
    assert "0 disagree" in msg


def test_density(capsys, tmp_path):
    out = tmp_path / "dens.csv"
    code, msg, _ = run(capsys, "density", "--gamma", 0.3, "--rho", -1, "--rho-star", -5, -1,
                       "--with-hill-zipf", "--k", 500, "--b", -0.08, "--out", out)
    assert code == 0
    assert "hz(-5): mean=0.28400 std=0.02096" in msg
    rows = read_table(out)
    assert set(rows[0]) == {"x", "hill", "zipf", "hz(-5)", "hz(-1)"}


def test_figures(capsys, tmp_path, pareto_csv):
    fig = tmp_path / "est.png"
    code, _, _ = run(capsys, "estimate", "--data", pareto_csv, "--t-grid", "0.2:0.8:4", "--h", 0.05,
                     "--k", 200, "--diagnostics", "--out", tmp_path / "est.csv", "--figure", fig)
    assert code == 0
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert (tmp_path / "est_chi2.png").exists()
    code, _, _ = run(capsys, "regions", "--resolution", 20, 20, "--out", tmp_path / "r.csv",
                     "--figure", tmp_path / "r.png")
    assert code == 0 and (tmp_path / "r.png").exists()


def test_prepare_chelmer(capsys, tmp_path):
    raw = tmp_path / "raw.csv"
    raw.write_text("1990-01-01,2.5\n1992-02-29,3\n1992-12-31,1.25\n")
    code, msg, _ = run(capsys, "prepare-chelmer", "--raw", raw, "--out", tmp_path / "c.csv")
    assert code == 0 and "wrote 2 rows" in msg
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "x1,x2,y"
