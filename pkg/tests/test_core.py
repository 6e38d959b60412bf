import os

import pytest

from mcg.commands import cmd_simulate, cmd_table
from mcg.core import MCGCore
from mcg.errors import ConfigError
from mcg.services.analysis import REFERENCE_REGIMES, AttractorKind
from mcg.services.integrator import loop_maxima
from mcg.services.model import study_params
from mcg.storage.csv_store import read_analysis_csv, read_bifurcation_csv
from mcg.storage.params_file import RunConfig, save_params

SHORT = {"t_end": 60.0, "t_skip": 10.0, "stride": 2, "lce_time": 20.0, "lce_transient": 5.0}


@pytest.fixture
def core():
    return MCGCore(SHORT)


def test_defaults_come_from_schema():
    core = MCGCore()
    assert core.config["step"] == 0.005
    assert core.config["stride"] == 4
    assert core.output_dir == "output"
    assert core.initial_state() == (0.1, 0.1, 0.1)


def test_invalid_host_value_is_named():
    with pytest.raises(ConfigError, match="stride"):
        MCGCore({"stride": "many"})


def test_with_overrides(core):
    assert core.with_overrides({}) is core
    derived = core.with_overrides({"t_end": "80", "x0": 0.3})
    assert derived.integration_settings().t_end == 80.0
    assert derived.initial_state()[0] == 0.3
    assert core.integration_settings().t_end == 60.0


def test_eigen_table(core):
    reports = core.eigen_table(study_params(), [0.5, 1.0, 6.0])
    assert [rep.alpha for rep in reports] == [0.5, 1.0, 6.0]
    assert reports[0].classification.value == "SaddleFocus"
    assert reports[-1].classification.value == "SaddleNode"


def test_simulate_writes_outputs(core, tmp_path):
    report = core.simulate(RunConfig(model=study_params(0.5)), str(tmp_path))
    names = sorted(os.path.basename(path) for path in report.files)
    assert names == ["analysis.csv", "phase_xy.svg", "phase_xz.svg", "phase_yz.svg", "series_z.svg",
                     "trajectory.csv"]
    (row,) = read_analysis_csv(str(tmp_path / "analysis.csv"))
    assert float(row["alpha"]) == 0.5
    assert row["class"] == report.attractor.label
    assert report.spectrum.exponents[0] >= report.spectrum.exponents[2]
    assert report.maxima == tuple(v for _, v in loop_maxima(report.trajectory))


def test_simulate_without_files(core, tmp_path):
    report = core.simulate(RunConfig(model=study_params(0.5)), str(tmp_path), write_files=False)
    assert report.files == ()
    assert list(tmp_path.iterdir()) == []


def test_run_config_overrides_apply(core, tmp_path):
    report = core.simulate(RunConfig(model=study_params(0.5), overrides={"t_end": 40.0}), write_files=False)
    assert report.trajectory.times[-1] == pytest.approx(40.0)


def test_run_single_reads_file(core, tmp_path):
    path = tmp_path / "study.txt"
    save_params(str(path), study_params(0.7))
    report = core.run_single(str(path), str(tmp_path / "out"))
    assert report.params.alpha == 0.7
    assert (tmp_path / "out" / "trajectory.csv").exists()


def test_physical_config_echoes_mapping(core, tmp_path, physical):
    path = tmp_path / "physical.txt"
    save_params(str(path), physical)
    lines = cmd_simulate(core, str(path), out_dir=str(tmp_path), write_files=False)
    assert lines[0].startswith("mapped alpha=0.5 eta=12.199999999999999")
    assert "theta=" in lines[0] and "epsilon=" in lines[0]
    assert lines[1] == "alpha=0.5"


def test_sweep_writes_files(core, tmp_path):
    rows, files = core.sweep(study_params(), 0.2, 0.3, 0.05, ("maxima", "lce"), 1, str(tmp_path))
    assert [row.alpha for row in rows] == [0.2, 0.25, 0.3]
    assert sorted(os.path.basename(path) for path in files) == ["analysis.csv", "bifurcation.csv",
                                                                "bifurcation.svg"]
    parsed = read_bifurcation_csv(str(tmp_path / "bifurcation.csv"))
    assert len(parsed) == sum(len(row.maxima) for row in rows)
    assert len(read_analysis_csv(str(tmp_path / "analysis.csv"))) == 3


def test_sweep_maxima_only_skips_analysis(core, tmp_path):
    _, files = core.sweep(study_params(), 0.2, 0.3, 0.1, ("maxima",), 1, str(tmp_path))
    assert not (tmp_path / "analysis.csv").exists()
    assert len(files) == 2


def test_fit_thermistor(core, tmp_path):
    report = core.fit_thermistor(out_dir=str(tmp_path))
    assert report.physical.t0 == 298.15
    assert 0.0 < report.fit.r2 < 1.0
    assert len(report.scan) == 51
    assert sorted(os.path.basename(path) for path in report.files) == ["thermistor.csv", "thermistor.svg"]
    assert core.fit_thermistor(t0=280.0, write_files=False).files == ()


def test_reference_table_subset(core):
    regimes = REFERENCE_REGIMES[:2]
    checks = core.reference_table(study_params(), regimes)
    assert [check.regime for check in checks] == list(regimes)
    for check in checks:
        assert check.error == ""
        assert len(check.spectrum.exponents) == 3
        assert isinstance(check.attractor.kind, AttractorKind)


def test_table_command_lists_every_regime(core):
    lines = cmd_table(core)
    assert lines[0].startswith("alpha_range,alpha,l1")
    assert len(lines) == 1 + len(REFERENCE_REGIMES)
    for line, regime in zip(lines[1:], REFERENCE_REGIMES):
        assert line.startswith(f"[{regime.alpha_low:g};{regime.alpha_high:g}],")
        assert line.endswith(f",{regime.signs},{regime.description},{regime.dimension:g}")
