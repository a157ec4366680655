import json
import subprocess
import sys

import pytest

from porousfloat.cli import main
from porousfloat.film_dynamics import build_preset


@pytest.fixture
def run(tmp_path, capsys):
    def _run(*argv):
        code = main([*argv, "--output-dir", str(tmp_path)])
        out = capsys.readouterr()
        return code, out.out, out.err

    return _run


class TestDesign:
    def test_ubot(self, run, tmp_path):
        code, out, _ = run("design", "--robot-size", "0.092", "--workspace", "1.0")
        assert code == 0
        doc = json.loads((tmp_path / "design.json").read_text())
        assert doc["glass"]["size"] == 0.08
        assert doc["plate"]["thickness"] == 0.03
        assert doc["plate"]["hole_spacing"] >= 0.03
        assert "80 mm" in out

    def test_generic(self, run, tmp_path):
        assert run("design", "--preset", "generic")[0] == 0
        plate = json.loads((tmp_path / "design.json").read_text())["plate"]
        assert (plate["plan_width"], plate["thickness"], plate["hole_spacing"]) == (2.0, 0.03, 0.01)

    def test_rectangular_workspace(self, run, tmp_path):
        assert run("design", "--robot-size", "0.092", "--workspace", "1.2", "0.6")[0] == 0
        plate = json.loads((tmp_path / "design.json").read_text())["plate"]
        assert (plate["plan_width"], plate["plan_depth"]) == (1.2, 0.6)

    @pytest.mark.parametrize("args", [
        ["--robot-size", "-1"],
        ["--robot-size", "nan"],
        ["--robot-size", "0.09", "--workspace", "0"],
        ["--robot-size", "0.09", "--module-count", "0"],
        [],
    ])
    def test_bad_arguments(self, run, args):
        code, _, err = run("design", *args)
        assert code == 2 and err

    def test_infeasible(self, run, tmp_path):
        code, _, err = run("design", "--robot-size", "0.092", "--module-mass", "50")
        assert code == 1
        assert "load_capacity" in err
        assert not (tmp_path / "design.json").exists()

    def test_json_to_stdout(self, run):
        code, out, _ = run("design", "--robot-size", "0.092", "--out", "-", "--units")
        assert code == 0
        assert len(json.loads(out)["supply_units"]["units"]) == 289


class TestFlow:
    def test_curve(self, run, tmp_path):
        assert run("flow", "--thickness", "0.015", "--max-x", "0.06", "--step", "0.001")[0] == 0
        lines = (tmp_path / "flow.csv").read_text().splitlines()
        assert lines[0] == "x_m,v_ratio"
        assert len(lines) == 62
        assert "0.015,0.5" in lines

    @pytest.mark.parametrize("args", [
        ["--thickness", "0"],
        ["--thickness", "0.015", "--step", "0.1", "--max-x", "0.05"],
        ["--thickness", "0.015", "--holes", "hexagons"],
    ])
    def test_bad_arguments(self, run, args):
        assert run("flow", *args)[0] == 2

    def test_field_smoother_for_thicker_plate(self, run, tmp_path):
        ripple = {}
        for h in ("0.015", "0.030"):
            code, out, _ = run("flow", "--thickness", h, "--holes", "30mm-grid", "--extent", "0.3")
            assert code == 0
            ripple[h] = float(out.strip().splitlines()[-1].split(":")[1])
        assert ripple["0.030"] < ripple["0.015"]
        rows = (tmp_path / "flow_field.csv").read_text().splitlines()
        assert rows[0] == "x_m,y_m,v_ratio"
        assert len(rows) == 1 + 101 * 101

    def test_stdout(self, run):
        code, out, _ = run("flow", "--thickness", "0.015", "--max-x", "0.03", "--step", "0.015", "--out", "-")
        assert code == 0
        assert out == "x_m,v_ratio\n0.0,1.0\n0.015,0.5\n0.03,0.2\n"


class TestSim:
    def test_magnet_separation(self, run, tmp_path):
        code, out, _ = run("sim", "--preset", "magnet_separation", "--dt", "1e-3", "--t-end", "20")
        assert code == 0
        assert "[PASS] speeds equal and opposite" in out
        rows = (tmp_path / "diagnostics.csv").read_text().splitlines()
        assert rows[0] == "t,px,py,L,ke"
        assert all(abs(float(r.split(",")[1])) <= 1e-9 for r in rows[1:])
        traj = (tmp_path / "trajectory.csv").read_text().splitlines()
        last_l, last_r = traj[-2].split(","), traj[-1].split(",")
        assert float(last_l[5]) == -float(last_r[5]) == -0.02

    def test_outputs_byte_identical(self, run, tmp_path):
        run("sim", "--preset", "self_rotation_floating")
        first = (tmp_path / "trajectory.csv").read_bytes(), (tmp_path / "diagnostics.csv").read_bytes()
        run("sim", "--preset", "self_rotation_floating")
        assert first == ((tmp_path / "trajectory.csv").read_bytes(), (tmp_path / "diagnostics.csv").read_bytes())

    def test_empty_scenario(self, run, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"platform": {"bounds": [0, 0, 1, 1]},
                                    "bodies": [{"id": "a", "mass": 1, "inertia": 1, "pose": [0.5, 0.5, 0]}],
                                    "t_end": 0.05}))
        assert run("sim", "--scenario", str(path))[0] == 0
        rows = (tmp_path / "trajectory.csv").read_text().splitlines()[1:]
        assert len(rows) == 6
        assert len({r.split(",", 1)[1] for r in rows}) == 1

    def test_save_scenario_round_trip(self, run, tmp_path):
        saved = tmp_path / "glide.json"
        assert run("sim", "--preset", "film_boundary_glide", "--save-scenario", str(saved))[0] == 0
        first = (tmp_path / "trajectory.csv").read_bytes()
        assert run("sim", "--scenario", str(saved))[0] == 0
        assert (tmp_path / "trajectory.csv").read_bytes() == first

    @pytest.mark.parametrize("text, where", [
        ('{"platform": {"bounds": [0, 0, 1]}, "bodies": []}', "platform/bounds"),
        ('{"platform": {"bounds": [0, 0, 1, 1]},\n "bodies": [}', "line 2"),
        ('{"platform": {"bounds": [0, 0, 1, 1]}, "bodies": [], "gravity": 9.8}', "gravity"),
    ])
    def test_malformed_scenario(self, run, tmp_path, text, where):
        path = tmp_path / "bad.json"
        path.write_text(text)
        code, _, err = run("sim", "--scenario", str(path))
        assert code == 2
        assert where in err

    def test_missing_file(self, run, tmp_path):
        assert run("sim", "--scenario", str(tmp_path / "absent.json"))[0] == 2

    def test_unknown_preset(self, run):
        assert run("sim", "--preset", "hover")[0] == 2

    def test_blow_up_exits_one(self, run, tmp_path):
        doc = {
            "platform": {"bounds": [-1, -1, 1, 1]},
            "bodies": [{"id": "a", "mass": 1, "inertia": 1e-300}],
            "couples": [{"body": "a", "torque": {"kind": "pulse", "torque": 1e300, "start": 0, "duration": 1}}],
            "t_end": 0.01,
        }
        path = tmp_path / "boom.json"
        path.write_text(json.dumps(doc))
        code, _, err = run("sim", "--scenario", str(path))
        assert code == 1 and "'a'" in err


class TestVerify:
    def test_subset(self, run):
        code, out, _ = run("verify", "--only", "conservation")
        assert code == 0
        assert "conservation" in out and "capacity" not in out

    def test_json_matches_table(self, run, tmp_path):
        report_path = tmp_path / "report.json"
        code, out, _ = run("verify", "--only", "capacity,covering", "--json", str(report_path))
        assert code == 0
        doc = json.loads(report_path.read_text())
        assert doc["overall"] == "PASS"
        names = [c["name"] for c in doc["checks"]]
        assert "load capacity, 80 mm glass at 0.02 MPa" in names
        for c in doc["checks"]:
            assert f"{c['status']}    {c['group']}" in out

    def test_unknown_filter(self, run):
        assert run("verify", "--only", "teleport")[0] == 2


def test_module_entry_point(tmp_path):
    scenario = tmp_path / "s.json"
    scenario.write_text(build_preset("magnet_separation", t_end=0.5).to_json())
    proc = subprocess.run([sys.executable, "-m", "porousfloat", "sim", "--scenario", str(scenario),
                           "--output-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "trajectory.csv").exists()


def test_env_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("POROUSFLOAT_OUTPUT_DIR", str(tmp_path))
    assert main(["flow", "--thickness", "0.01", "--max-x", "0.02", "--step", "0.01"]) == 0
    assert (tmp_path / "flow.csv").exists()


def test_help_and_missing_command(capsys):
    assert main(["--help"]) == 0
    assert main([]) == 2
