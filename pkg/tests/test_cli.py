"""Config parsing, CSV contract, exit codes, and the verify surface."""

import json
import math

import numpy as np
import pytest

import dickesim.hamiltonians as hamiltonians
from dickesim.cli import (
    PRESETS,
    ConfigError,
    build_schedule,
    main,
    parse_config_text,
    resolve_config,
)
from dickesim.verify import run_checks

FAST_CONFIG = """
# small, fast run
model = dicke
n_qubits = 1
fock_cutoff = 5
n_trotter = 3
gt_max = 0.5
coupling = 0.8
qubit_freq = 0.05
kappa = 0.01
gamma_s = 0.005
gamma_d = 0.005
dt = 0.005
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def test_parse_flat_config_with_comments():
    data = parse_config_text("a = 1  # trailing\n# full line\n\nb = x,y\n")
    assert data == {"a": "1", "b": "x,y"}


def test_parse_json_config():
    data = parse_config_text(json.dumps({"model": "dicke", "n_qubits": 2}))
    assert data["n_qubits"] == 2


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="unknown config keys"):
        resolve_config({"modle": "dicke"})


def test_bad_value_rejected():
    with pytest.raises(ConfigError, match="n_trotter"):
        resolve_config({"n_trotter": "three"})
    with pytest.raises(ConfigError, match="coupling"):
        resolve_config({"coupling": "0"})
    with pytest.raises(ConfigError, match="model"):
        resolve_config({"model": "ising"})


def test_qubit_freqs_length_checked():
    with pytest.raises(ConfigError, match="qubit_freqs"):
        resolve_config({"n_qubits": "2", "qubit_freqs": "0.9,1.1,1.3"})


def test_presets_resolve_and_compile():
    for name in PRESETS:
        config = resolve_config(None, preset=name)
        sched = build_schedule(config)
        assert sched.n_steps == config["n_trotter"]


def test_dimension_cap_is_config_error():
    with pytest.raises(ConfigError, match="cap"):
        build_schedule(resolve_config({"n_qubits": "8", "fock_cutoff": "63"}))


def test_config_file_overrides_preset():
    config = resolve_config({"n_trotter": "9"}, preset="dicke-dsc-fidelity")
    assert config["n_trotter"] == 9
    assert config["coupling"] == 1.5


# ---------------------------------------------------------------------------
# run subcommand
# ---------------------------------------------------------------------------


def test_run_writes_csv_with_schema(tmp_path, capsys):
    cfg = _write(tmp_path, "run.cfg", FAST_CONFIG)
    out = str(tmp_path / "out.csv")
    rc = main(["run", "--config", cfg, "--output", out, "--reproducible"])
    assert rc == 0
    lines = (tmp_path / "out.csv").read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    assert any("config: model = dicke" in l for l in comments)
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert lines[header_idx] == (
        "t_sim,g_t,fidelity,n_photon_trotter,n_photon_ideal,survival,leakage,trace_error"
    )
    rows = lines[header_idx + 1 :]
    assert len(rows) == 4  # n_trotter + 1 points
    first = [float(v) for v in rows[0].split(",")]
    assert first[0] == 0.0 and first[2] == pytest.approx(1.0)
    assert "final fidelity" in capsys.readouterr().out


def test_run_reproducible_is_byte_identical(tmp_path):
    cfg = _write(tmp_path, "run.cfg", FAST_CONFIG)
    out_a = str(tmp_path / "a.csv")
    out_b = str(tmp_path / "b.csv")
    assert main(["run", "--config", cfg, "--output", out_a, "--reproducible"]) == 0
    assert main(["run", "--config", cfg, "--output", out_b, "--reproducible"]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_run_without_config_or_preset_exits_2(capsys):
    assert main(["run"]) == 2
    assert "config error" in capsys.readouterr().err


def test_run_with_bad_config_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "bad.cfg", "model = dicke\nbogus_key = 1\n")
    assert main(["run", "--config", cfg]) == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_run_numeric_failure_exits_3(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "unstable.cfg",
        FAST_CONFIG + "\nkappa = 2000\ndt = 0.05\ngt_max = 4\n",
    )
    rc = main(["run", "--config", cfg, "--output", str(tmp_path / "x.csv")])
    assert rc == 3
    assert "numeric failure" in capsys.readouterr().err


def test_run_warns_on_truncation_leakage(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "leaky.cfg",
        "model = dicke\nn_qubits = 1\nfock_cutoff = 2\nn_trotter = 4\n"
        "gt_max = 1.0\ncoupling = 1.5\ndt = 0.002\n",
    )
    rc = main(["run", "--config", cfg, "--output", str(tmp_path / "l.csv"), "--reproducible"])
    assert rc == 0
    assert "raise fock_cutoff" in capsys.readouterr().err


def test_run_json_config(tmp_path):
    cfg = _write(
        tmp_path,
        "run.json",
        json.dumps(
            {
                "model": "fermi_bose_analog",
                "n_qubits": 2,
                "qubit_freqs": [0.9, 1.1],
                "fock_cutoff": 4,
                "n_trotter": 2,
                "gt_max": 0.3,
                "coupling": 0.2,
                "dt": 0.005,
            }
        ),
    )
    assert main(["run", "--config", cfg, "--output", str(tmp_path / "o.csv"), "--reproducible"]) == 0


# ---------------------------------------------------------------------------
# sweep subcommand
# ---------------------------------------------------------------------------


def test_sweep_over_steps(tmp_path):
    cfg = _write(tmp_path, "run.cfg", FAST_CONFIG + "\nkappa = 0\ngamma_s = 0\ngamma_d = 0\n")
    out = str(tmp_path / "sweep.csv")
    rc = main(
        [
            "sweep",
            "--config",
            cfg,
            "--axis",
            "n_trotter",
            "--values",
            "2,4",
            "--output",
            out,
            "--reproducible",
        ]
    )
    assert rc == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert lines[header_idx] == "axis_value,final_fidelity,measured_error,error_bound,max_leakage"
    rows = [l.split(",") for l in lines[header_idx + 1 :]]
    assert [float(r[0]) for r in rows] == [2.0, 4.0]
    # digital error shrinks with more steps; the bound column is populated
    assert float(rows[1][2]) < float(rows[0][2])
    for r in rows:
        assert float(r[3]) > 0.0


def test_sweep_over_qubit_number_and_coupling(tmp_path):
    cfg = _write(
        tmp_path,
        "run.cfg",
        "model = dicke\nfock_cutoff = 4\nn_trotter = 2\ngt_max = 0.3\n"
        "coupling = 0.5\ndt = 0.005\n",
    )
    out = str(tmp_path / "sweep_n.csv")
    rc = main(
        ["sweep", "--config", cfg, "--axis", "N", "--values", "1,2", "--output", out,
         "--reproducible"]
    )
    assert rc == 0
    rows = [
        l for l in (tmp_path / "sweep_n.csv").read_text().splitlines()
        if l and not l.startswith(("#", "axis_value"))
    ]
    assert len(rows) == 2
    out2 = str(tmp_path / "sweep_g.csv")
    rc = main(
        ["sweep", "--config", cfg, "--axis", "coupling", "--values", "0.3,0.6",
         "--output", out2, "--reproducible"]
    )
    assert rc == 0
    rows2 = [
        l for l in (tmp_path / "sweep_g.csv").read_text().splitlines()
        if l and not l.startswith(("#", "axis_value"))
    ]
    # stronger coupling gives larger digital error
    assert float(rows2[1].split(",")[2]) > float(rows2[0].split(",")[2])


def test_sweep_parallel_workers_match_serial(tmp_path, monkeypatch):
    cfg = _write(
        tmp_path,
        "run.cfg",
        "model = dicke\nfock_cutoff = 4\nn_trotter = 2\ngt_max = 0.3\n"
        "coupling = 0.5\ndt = 0.005\n",
    )
    serial = str(tmp_path / "serial.csv")
    assert main(
        ["sweep", "--config", cfg, "--axis", "n_trotter", "--values", "2,3",
         "--output", serial, "--reproducible"]
    ) == 0
    monkeypatch.setenv("DICKESIM_WORKERS", "2")
    parallel = str(tmp_path / "parallel.csv")
    assert main(
        ["sweep", "--config", cfg, "--axis", "n_trotter", "--values", "2,3",
         "--output", parallel, "--reproducible"]
    ) == 0
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()


def test_sweep_empty_values_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "run.cfg", FAST_CONFIG)
    assert main(["sweep", "--config", cfg, "--axis", "n_trotter", "--values", ","]) == 2


def test_sweep_bad_axis_exits_2(tmp_path):
    cfg = _write(tmp_path, "run.cfg", FAST_CONFIG)
    assert main(["sweep", "--config", cfg, "--axis", "nonsense", "--values", "1"]) == 2


# ---------------------------------------------------------------------------
# verify subcommand
# ---------------------------------------------------------------------------


def test_verify_filter_passes(capsys):
    assert main(["verify", "--filter", "observables"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] observables.fidelity_symmetry" in out


def test_verify_unknown_filter_fails(capsys):
    assert main(["verify", "--filter", "nope"]) == 4


def test_verify_detects_injected_sign_flip(monkeypatch):
    original = hamiltonians.anti_tavis_cummings

    def flipped(space, qubit_detunings, mode_detuning, g):
        if np.isscalar(qubit_detunings):
            qubit_detunings = -float(qubit_detunings)
        else:
            qubit_detunings = [-float(v) for v in qubit_detunings]
        return original(space, qubit_detunings, mode_detuning, g)

    monkeypatch.setattr(hamiltonians, "anti_tavis_cummings", flipped)
    results = run_checks(module_filter="hamiltonians")
    by_name = {r.name: r for r in results}
    assert not by_name["collective_flip_conjugation"].passed


# ---------------------------------------------------------------------------
# schedule-dump subcommand
# ---------------------------------------------------------------------------


def test_schedule_dump_lists_segments(tmp_path, capsys):
    cfg = _write(tmp_path, "run.cfg", FAST_CONFIG)
    assert main(["schedule-dump", "--config", cfg]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert len(lines) == 4 * 3  # 4 segments per step, 3 steps
    assert any("TC(g=0.8" in l for l in lines)
    assert any("Rx(theta=+pi)" in l for l in lines)
