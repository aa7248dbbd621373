import json
import math

import numpy as np
import pytest

from spinstar import cli
from spinstar.analysis import TimeSeries


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_evolve_default_csv(capsys):
    code, out, _ = run(capsys, "evolve", "--steps", "5", "--tmax", str(math.pi))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,c_ucp_l,c_l_l"
    assert len(lines) == 6
    assert lines[3].split(",")[1:] == ["0.5", "0.5"]  # t = pi/2 is a W state


def test_evolve_lops_defaults(capsys):
    code, out, _ = run(capsys, "evolve", "--scenario", "lops", "--steps", "3")
    assert code == 0
    assert out.splitlines()[0] == "t,c_cp_ul,c_cp_nul,c_ul_nul,c_nul_nul"


def test_evolve_json_round_trip(capsys, tmp_path):
    target = tmp_path / "run.json"
    code, _, _ = run(capsys, "evolve", "--scenario", "lops", "--steps", "41", "--format", "json",
                     "-o", str(target), "--quantities", "c_cp_ul,p_ul,szsz_cp_nul")
    assert code == 0
    ts = TimeSeries.from_dict(json.loads(target.read_text()))
    assert ts.names == ["c_cp_ul", "p_ul", "szsz_cp_nul"]
    assert ts["p_ul"][0] == pytest.approx(1.0)


def test_evolve_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(capsys, "evolve", "--scenario", "lops", "--quantities", "c_cp_ul,sxsx_ul_nul",
                   "-o", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"\r" not in paths[0].read_bytes()


def test_gnuplot_script(capsys, tmp_path):
    target = tmp_path / "w.csv"
    code, _, _ = run(capsys, "evolve", "--steps", "11", "-o", str(target), "--gnuplot")
    assert code == 0
    script = (tmp_path / "w.gp").read_text()
    assert "set datafile separator ','" in script
    assert "'w.csv' using 1:2 with lines" in script and "using 1:3" in script


def test_gnuplot_needs_csv_file(capsys):
    code, _, err = run(capsys, "evolve", "--steps", "3", "--gnuplot")
    assert code == 2 and "--gnuplot" in err


def test_custom_amplitudes(capsys):
    code, out, _ = run(capsys, "evolve", "--scenario", "custom-amplitudes",
                       "--amps", "0.5,-0.5,-0.5,-0.5", "--steps", "2", "--tmax", "1")
    assert code == 0
    header, first = out.splitlines()[:2]
    assert header == "t,sum_c,spread,w_fidelity"
    np.testing.assert_allclose([float(x) for x in first.split(",")], [0, 3, 0, 1], atol=1e-12)


def test_custom_amplitudes_complex_and_ligand_count(capsys):
    amp = 1 / math.sqrt(2)
    code, out, _ = run(capsys, "evolve", "--scenario", "custom-amplitudes",
                       "--amps", f"{amp},{amp}j", "--steps", "2", "--quantities", "c_0_1")
    assert code == 0
    assert out.splitlines()[1] == "0,1"


@pytest.mark.parametrize("argv", [
    ["evolve", "--scenario", "custom-amplitudes"],
    ["evolve", "--scenario", "custom-amplitudes", "--amps", "1,1"],
    ["evolve", "--scenario", "custom-amplitudes", "--amps", "1,zz"],
    ["evolve", "--scenario", "custom-amplitudes", "--amps", "1,0", "--ligands", "3"],
    ["evolve", "--scenario", "lops", "--excited", "4"],
    ["evolve", "--quantities", "c_bogus"],
    ["evolve", "--steps", "1"],
    ["evolve", "--tmax", "-1"],
    ["evolve", "--ligands", "0"],
    ["evolve", "--coupling", "nan"],
    ["events", "--detector", "magic"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("spinstar: error:")


def test_size_cap(capsys, monkeypatch):
    monkeypatch.setenv("SPINSTAR_MAX_QUBITS", "4")
    code, _, _ = run(capsys, "evolve", "--ligands", "4", "--steps", "2")
    assert code == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["evolve", "--scenario", "nope"])
    assert exc.value.code == 2


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "evolve", "--steps", "2", "-o", str(tmp_path / "missing" / "x.csv"))
    assert code == 3 and "I/O error" in err


def test_missing_config_is_io_error(capsys, tmp_path):
    code, _, _ = run(capsys, "evolve", "--config", str(tmp_path / "none.cfg"))
    assert code == 3


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "star.cfg"
    cfg.write_text("# two ligands\nligand_count = 2\ncoupling = 2.0\n")
    code, out, _ = run(capsys, "evolve", "--config", str(cfg), "--steps", "3", "--tmax", "1",
                       "--quantities", "c_0_2")
    assert code == 0
    code2, out2, _ = run(capsys, "evolve", "--ligands", "2", "--coupling", "2", "--steps", "3",
                         "--tmax", "1", "--quantities", "c_0_2")
    assert out == out2


def test_events_tws(capsys):
    code, out, _ = run(capsys, "events", "--detector", "tws")
    assert code == 0
    doc = json.loads(out)
    assert doc["detectors"] == ["tws"]
    times = [e["t"] for e in doc["events"]]
    np.testing.assert_allclose(times, [math.pi * (2 * n - 1) / 2 for n in range(1, 5)], atol=1e-6)


def test_events_lops_pstws_and_crossings(capsys):
    code, out, _ = run(capsys, "events", "--scenario", "lops", "--detector", "pstws,crossings")
    assert code == 0
    kinds = {e["kind"] for e in json.loads(out)["events"]}
    assert kinds == {"PSTWS", "crossing"}


def test_events_peaks_and_disentangle(capsys):
    code, out, _ = run(capsys, "events", "--detector", "peaks,disentangle", "--quantities", "c_ucp_l")
    doc = json.loads(out)
    kinds = [e["kind"] for e in doc["events"]]
    assert code == 0 and kinds.count("peak") == 8 and kinds.count("disentangle") == 5


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--steps", "801")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("all ") and "FAIL" not in out


def test_verify_other_ligand_count(capsys):
    code, out, _ = run(capsys, "verify", "--ligands", "5")
    assert code == 0 and "skipped" in out


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--tolerance", "1e-18", "--steps", "101")
    assert code == 1 and "FAILED" in out


def test_quantities_listing(capsys):
    code, out, _ = run(capsys, "quantities")
    assert code == 0 and "c_ucp_l" in out.split()
