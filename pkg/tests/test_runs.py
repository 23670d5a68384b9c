import json
import math

import numpy as np
import pytest

from dce_ladder import cli, runs


@pytest.fixture
def ini(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[model]\nn_max = 3\nOmega_cav = 0.05\n\n"
        "[baths]\ngamma_eg = 0.02\n\n"
        "[sweep]\nsweep_start = 0.2\nsweep_stop = 0.6\nsweep_count = 3\n"
        "spectra = 0.7:cav, 2:fe\nomega_grid = 0:2:0.01\n\n"
        "[output]\nout_dir = somewhere\n"
    )
    return path


def test_defaults_reproduce_reference_parameters():
    c = runs.RunConfig()
    assert (c.Omega_cav, c.gamma_eg, c.gamma_fe, c.gamma_cav) == (0.1, 0.01, 1e-3, 1e-3)
    assert c.n_max == 8 and c.sweep_count == 101
    assert np.allclose(c.sweep_values[[0, -1]], [0.0, 2.5])
    p = c.params(0.7)
    assert (p.omega_g, p.omega_e, p.omega_f) == (-10.0, 0.0, 1.0)


def test_load_config_file(ini):
    c = runs.load_config(ini)
    assert c.n_max == 3 and c.Omega_cav == 0.05 and c.gamma_eg == 0.02
    assert c.spectra == ((0.7, "cav"), (2.0, "fe"))
    assert c.omega_grid == (0.0, 2.0, 0.01)
    assert c.out_dir == "somewhere"


def test_overrides_win_over_file(ini):
    c = runs.load_config(ini, n_max=5, out_dir=None)
    assert c.n_max == 5
    assert c.out_dir == "somewhere"


@pytest.mark.parametrize(
    "changes",
    [
        dict(sweep_count=1),
        dict(sweep_start=1.0, sweep_stop=1.0),
        dict(n_max=-1),
        dict(omega_grid=(0.0, 1.0, 0.0)),
        dict(spectra=((0.7, "eg"),)),
        dict(gamma_cav=-1.0),
        dict(omega_edge=30.0),
    ],
)
def test_config_validation(changes):
    with pytest.raises(runs.ConfigError):
        runs.RunConfig(**changes)


def test_bad_config_files(tmp_path):
    bad_section = tmp_path / "a.ini"
    bad_section.write_text("[nonsense]\nx = 1\n")
    bad_key = tmp_path / "b.ini"
    bad_key.write_text("[model]\nfoo = 1\n")
    bad_value = tmp_path / "c.ini"
    bad_value.write_text("[model]\nn_max = many\n")
    for path in (bad_section, bad_key, bad_value, tmp_path / "missing.ini"):
        with pytest.raises(runs.ConfigError):
            runs.load_config(path)
    with pytest.raises(runs.ConfigError):
        runs.parse_grid("0:1")


def test_dataset_roundtrip(tmp_path):
    ds = runs.Dataset("demo", ["x", "status"], [(0.5, "ok"), (float("nan"), "error: boom")], {"a": np.float64(1.5)})
    path = runs.write_dataset(ds, tmp_path)
    back = runs.read_dataset(path)
    assert back.name == "demo" and back.columns == ["x", "status"]
    assert back.rows[0] == (0.5, "ok")
    assert math.isnan(back.rows[1][0])
    assert back.metadata == {"a": 1.5}
    assert back.failed == 1
    sidecar = json.loads((tmp_path / "demo.json").read_text())
    assert sidecar["rows"] == 2 and sidecar["a"] == 1.5


def test_sweep_rows_and_determinism():
    config = runs.RunConfig(n_max=3, max_n_max=3, sweep_start=0.5, sweep_stop=0.9, sweep_count=3)
    a = runs.run_intensity_sweep(config)
    b = runs.run_intensity_sweep(config)
    assert runs.dataset_text(a) == runs.dataset_text(b)
    assert a.columns[:4] == ["Omega_eg", "I_cav", "I_fe", "R_eg"]
    assert len(a.rows) == 3
    assert np.all(a.column("residual") <= 1e-10)
    meta = a.metadata
    assert meta["config"]["n_max"] == 3 and "version" in meta


def test_parallel_sweep_matches_serial():
    config = runs.RunConfig(n_max=2, max_n_max=2, sweep_start=0.3, sweep_stop=1.2, sweep_count=4)
    serial = runs.run_intensity_sweep(config)
    parallel = runs.run_intensity_sweep(config.with_(workers=2))
    text = lambda ds: runs.dataset_text(runs.Dataset(ds.name, ds.columns, ds.rows))
    assert text(serial) == text(parallel)


def test_adaptive_truncation_and_flags():
    config = runs.RunConfig(n_max=2, max_n_max=6, p_tol=1e-12)
    row = dict(zip(runs.SWEEP_COLUMNS, runs.solve_point(config, 1.0)))
    assert row["n_max_used"] == 6
    assert row["status"] == "truncation"
    relaxed = dict(zip(runs.SWEEP_COLUMNS, runs.solve_point(config.with_(p_tol=1.0), 1.0)))
    assert relaxed["n_max_used"] == 2 and relaxed["status"] == "ok"


def test_convergence_guard_flags_coarse_truncation():
    config = runs.RunConfig(n_max=1, max_n_max=1, p_tol=1.0, convergence_check=True)
    row = dict(zip(runs.SWEEP_COLUMNS, runs.solve_point(config, 1.0)))
    assert row["convergence_change"] >= 0.01
    assert row["status"] == "unconverged"


def test_solver_failure_is_recorded():
    config = runs.RunConfig(n_max=1, max_n_max=1, gamma_eg=0.0, gamma_fe=0.0, gamma_cav=0.0)
    row = dict(zip(runs.SWEEP_COLUMNS, runs.solve_point(config, 0.5)))
    assert row["status"].startswith("error:")
    assert math.isnan(row["I_cav"])


def test_two_level_mode_has_no_fe_channel():
    config = runs.RunConfig(n_max=2, max_n_max=2, two_level=True)
    system = config.system(0.7)
    assert system.space.dim == 6
    row = dict(zip(runs.SWEEP_COLUMNS, runs.solve_point(config, 0.7)))
    assert math.isnan(row["I_fe"]) and row["status"] == "ok"


def test_rwa_mode_sweep_is_dark():
    config = runs.RunConfig(n_max=3, max_n_max=3, rwa=True)
    ds = runs.run_intensity_sweep(config, [0.5, 1.0, 2.0])
    assert np.all(np.abs(ds.column("I_cav")) <= 1e-8)
    assert np.all(np.abs(ds.column("I_fe")) <= 1e-8)


def test_levels_flag_mixed_pair():
    # here (|g>+|e>)/sqrt2 sits at +Omega, so it is the + partner that meets |f1> at Omega = 2
    ds = runs.run_levels(runs.RunConfig(n_max=3), 2.0)
    rows = {r[1]: r for r in ds.rows}
    assert rows["|f1>"][4] == 1
    assert rows["|g0>+|e0>"][4] == 1
    assert rows["|g0>-|e0>"][4] == 0
    assert rows["|f1>"][0] - rows["|g0>+|e0>"][0] == pytest.approx(np.sqrt(2) * 0.1, rel=0.05)


def test_levels_ordering_at_07():
    ds = runs.run_levels(runs.RunConfig(n_max=3), 0.7)
    labels = [r[1] for r in ds.rows[:6]]
    energies = [r[0] for r in ds.rows[:6]]
    assert labels == ["|g0>-|e0>", "|g1>-|e1>", "|g0>+|e0>", "|f0>", "|g2>-|e2>", "|g1>+|e1>"]
    assert np.allclose(energies, [-0.7, 0.3, 0.7, 1.0, 1.3, 1.7], atol=0.03)
    assert not any(r[4] for r in ds.rows[:6])


def test_uncoupled_f_levels_exact():
    ds = runs.run_levels(runs.RunConfig(n_max=3, omega_cav_zero=True, level_ceiling=10.0), 0.7)
    for energy, label, *_ in ds.rows:
        if label.startswith("|f"):
            n = int(label[2:-1])
            assert energy == pytest.approx(n + 1, abs=1e-12)


def test_spectrum_dataset_metadata():
    config = runs.RunConfig(n_max=3, omega_grid=(0.0, 2.0, 0.01))
    ds = runs.run_spectrum(config, 0.7, "cav")
    assert ds.columns == ["omega", "G"]
    assert ds.metadata["coherent_weight"] >= 0
    assert len(ds.metadata["peaks"]) >= 3
    with pytest.raises(runs.ConfigError):
        runs.run_spectrum(config, 0.7, "eg")


def test_steady_datasets():
    dist, dm = runs.run_steady(runs.RunConfig(n_max=2), 0.0)
    assert dist.column("p")[0] == pytest.approx(1.0, abs=1e-10)
    assert len(dm.rows) == 81


# command line


def test_cli_sweep(tmp_path, capsys):
    code = cli.main(
        ["sweep", "--n-max", "2", "--start", "0.4", "--stop", "0.8", "--count", "2", "--out", str(tmp_path)]
    )
    assert code == 0
    assert (tmp_path / "sweep.csv").exists() and (tmp_path / "sweep.json").exists()
    ds = runs.read_dataset(tmp_path / "sweep.csv")
    assert len(ds.rows) == 2
    assert str(tmp_path / "sweep.csv") in capsys.readouterr().out


def test_cli_is_byte_deterministic(tmp_path):
    argv = ["spectrum", "--omega-eg", "0.7", "--n-max", "2", "--omega-grid", "0:2:0.01", "--out", str(tmp_path)]
    names = ("spectrum_cav_0.7.csv", "spectrum_cav_0.7.json")
    assert cli.main(argv) == 0
    first = [(tmp_path / n).read_bytes() for n in names]
    assert cli.main(argv) == 0
    assert first == [(tmp_path / n).read_bytes() for n in names]


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--omega-eg", "0.7", "--n-max", "2", "--channel", "fe", "--omega-grid", "0:2:0.01"],
        ["steady", "--omega-eg", "1.0", "--n-max", "2", "--two-level"],
        ["levels", "--omega-eg", "2.0", "--n-max", "2", "--no-cavity-coupling", "--ceiling", "4"],
        ["spectrum", "--omega-eg", "0.7", "--n-max", "2", "--rwa", "--omega-grid", "0:2:0.01"],
    ],
)
def test_cli_subcommands(tmp_path, argv):
    assert cli.main(argv + ["--out", str(tmp_path)]) == 0
    assert list(tmp_path.glob("*.csv"))


def test_cli_config_file_and_flag_precedence(tmp_path, ini):
    out = tmp_path / "o"
    assert cli.main(["sweep", "--config", str(ini), "--count", "2", "--n-max", "2", "--out", str(out)]) == 0
    ds = runs.read_dataset(out / "sweep.csv")
    assert ds.metadata["config"]["n_max"] == 2
    assert ds.metadata["config"]["Omega_cav"] == 0.05
    assert len(ds.rows) == 2


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["sweep", "--count", "1", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert cli.main(["spectrum", "--omega-eg", "1", "--omega-grid", "bad", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    bad = tmp_path / "zero.ini"
    bad.write_text("[baths]\ngamma_eg = 0\ngamma_fe = 0\ngamma_cav = 0\n")
    assert cli.main(["steady", "--config", str(bad), "--omega-eg", "0.5", "--n-max", "1", "--out", str(tmp_path)]) == cli.EXIT_SOLVER
    code = cli.main(
        ["sweep", "--config", str(bad), "--n-max", "1", "--start", "0.1", "--stop", "0.2", "--count", "2", "--out", str(tmp_path)]
    )
    assert code == cli.EXIT_SOLVER
    assert "failed" in capsys.readouterr().err
