import pytest

from mcg.__main__ import main
from mcg.services.model import study_params
from mcg.storage.params_file import dump_params

SHORT_SETTINGS = "t_end = 60\nt_skip = 10\nstride = 2\nlce_time = 20\nlce_transient = 5\n"


def _config(tmp_path, text, name="run.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _values(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line and "," not in line)


def test_eigen_table(capsys):
    assert main(["eigen"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "alpha,lambda1,re_lambda23,im_lambda23,discriminant,classification"
    assert len(lines) == 1 + 12 + 1
    assert lines[1].startswith("0.5,") and lines[1].endswith(",SaddleFocus")
    assert lines[-2].endswith(",SaddleNode")
    assert float(lines[-1].split("=")[1]) == pytest.approx(5.4222, abs=1e-4)


def test_fit_thermistor(capsys, tmp_path):
    assert main(["fit-thermistor", "--t0", "290", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    values = _values(out)
    assert values["T0"] == "290"
    assert 0.0 < float(values["r2"]) < 1.0
    assert "t0,r2" in out.splitlines()
    assert (tmp_path / "thermistor.csv").exists()
    assert (tmp_path / "thermistor.svg").exists()


def test_fit_thermistor_reads_config(capsys, tmp_path):
    path = _config(tmp_path, "R0 = 100\nbeta = 3500\nT0 = 295\n")
    assert main(["fit-thermistor", "--config", path, "--out", str(tmp_path)]) == 0
    values = _values(capsys.readouterr().out)
    assert values["R0"] == "100" and values["beta"] == "3500" and values["T0"] == "295"


def test_missing_key_exits_with_diagnostic(capsys, tmp_path):
    text = dump_params(study_params(0.5)).replace("eta = 12.2\n", "")
    path = _config(tmp_path, text)
    assert main(["simulate", "--config", path, "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert err[-1].startswith("❌") and "eta" in err[-1]


def test_unreadable_config_exits_with_diagnostic(capsys, tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "none.txt")]) == 1
    assert "none.txt" in capsys.readouterr().err


def test_empty_alpha_range(capsys, tmp_path):
    assert main(["sweep", "--alpha-min", "0.5", "--alpha-max", "0.4", "--out", str(tmp_path)]) == 1
    assert "alpha" in capsys.readouterr().err
    assert main(["eigen", "--alpha-step", "0"]) == 1


def test_unknown_analysis(capsys, tmp_path):
    assert main(["sweep", "--analyses", "maxima,fft", "--out", str(tmp_path)]) == 1
    assert "fft" in capsys.readouterr().err


def test_simulate_short_run(capsys, tmp_path):
    path = _config(tmp_path, dump_params(study_params(0.5)) + SHORT_SETTINGS)
    assert main(["simulate", "--config", path, "--alpha", "0.6", "--out", str(tmp_path / "out")]) == 0
    values = _values(capsys.readouterr().out)
    assert values["alpha"] == "0.59999999999999998"
    assert values["fixed_point"] == "SaddleFocus"
    assert "class" in values and "ky_dim" in values
    assert (tmp_path / "out" / "trajectory.csv").exists()


def test_sweep_short_run(capsys, tmp_path):
    path = _config(tmp_path, dump_params(study_params()) + SHORT_SETTINGS)
    argv = ["sweep", "--config", path, "--alpha-min", "0.2", "--alpha-max", "0.22", "--alpha-step", "0.01",
            "--workers", "1", "--out", str(tmp_path)]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "alphas=3" in out.splitlines()
    assert "diverged=0" in out.splitlines()
    assert (tmp_path / "bifurcation.csv").exists()


@pytest.mark.slow
def test_simulate_study_point(capsys, tmp_path):
    assert main(["simulate", "--alpha", "0.5", "--out", str(tmp_path)]) == 0
    values = _values(capsys.readouterr().out)
    assert values["class"] == "Chaos"
    assert 2.1 <= float(values["ky_dim"]) <= 2.3
    assert float(values["l1"]) > 0.02
