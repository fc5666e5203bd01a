"""Scene files, result documents, OBJ export, and the command line."""

import json
import subprocess
import sys

import numpy as np
import pytest

from fold3d import (
    ParseError,
    Plane3,
    Point3,
    ValidationError,
    load_scene,
    residual,
    scene_to_dict,
    write_scene,
)
from fold3d.cli import main
from fold3d.scene import ResultDocument

I1_SCENE = """
{
  "points": {"P": [0, 0, 0], "Q": [0, 0, 2]},
  "constraints": [{"type": "I1", "args": {"point": "P", "point2": "Q"}}]
}
"""

I5_I6_SCENE = """
{
  "points": {"P": [0, 0, 1], "Q": [0.3, -0.4, 0.2]},
  "lines": {"m": {"point": [0, 0, -1], "dir": [0, 1, 0]}},
  "planes": {"pi": {"coeffs": [0.25, 0.55, 0.75, 0.35]}},
  "constraints": [
    {"type": "I5", "args": {"point": "P", "line": "m"}},
    {"type": "I6", "args": {"point": "Q", "plane": "pi"}}
  ]
}
"""

I5_I9_SKEW_SCENE = """
{
  "points": {"P": [0, 0, 1]},
  "lines": {
    "m": {"point": [0, 0, -1], "dir": [0, 1, 0]},
    "n": {"point": [1, 1, 1], "dir": [1, 0, 0]}
  },
  "constraints": [
    {"type": "I5", "args": {"point": "P", "line": "m"}},
    {"type": "I9", "args": {"line": "n"}}
  ]
}
"""


class TestSceneLoading:
    def test_minimal_scene(self):
        scene = load_scene('{"points": {"P": [1, 2, 3]}}')
        assert len(scene.points) == 1
        assert scene.points["P"] == Point3(1, 2, 3)

    def test_full_scene(self):
        scene = load_scene(I5_I6_SCENE)
        assert set(scene.points) == {"P", "Q"}
        assert [sc.kind.value for sc in scene.constraints] == ["I5", "I6"]

    def test_malformed_vector(self):
        with pytest.raises(ParseError, match="expected 3 numbers"):
            load_scene('{"points": {"P": [1, 2]}}')

    def test_not_json(self):
        with pytest.raises(ParseError, match="not valid JSON"):
            load_scene("{nope")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="not found"):
            load_scene(tmp_path / "absent.json")

    def test_unknown_reference(self):
        bad = '{"points": {"P": [0,0,0]}, "constraints": [{"type": "I8", "args": {"point": "X"}}]}'
        with pytest.raises(ValidationError, match="no point named 'X'"):
            load_scene(bad)

    def test_precondition_violation_names_the_rule(self):
        bad = """
        {
          "points": {"P": [0, 5, -1]},
          "lines": {"m": {"point": [0, 0, -1], "dir": [0, 1, 0]}},
          "constraints": [{"type": "I5", "args": {"point": "P", "line": "m"}}]
        }
        """
        with pytest.raises(ValidationError, match="P not in m"):
            load_scene(bad)

    def test_i7_contained_line_rejected_at_load(self):
        bad = """
        {
          "lines": {"m": {"point": [0, 1, 0], "dir": [1, 0, 0]}},
          "planes": {"pi": {"normal": [0, 0, 1], "offset": 0}},
          "constraints": [{"type": "I7", "args": {"line": "m", "plane": "pi"}}]
        }
        """
        with pytest.raises(ValidationError, match="m not in pi"):
            load_scene(bad)

    def test_duplicate_names_across_sections(self):
        bad = """
        {
          "points": {"P": [0, 0, 0]},
          "lines": {"P": {"point": [0, 0, 0], "dir": [1, 0, 0]}}
        }
        """
        with pytest.raises(ValidationError, match="unique"):
            load_scene(bad)

    def test_plane_coeffs_form(self):
        scene = load_scene('{"planes": {"pi": {"coeffs": [0, 0, 2, -2]}}}')
        assert scene.planes["pi"] == Plane3((0, 0, 1), 1.0)

    def test_round_trip_is_exact(self):
        scene = load_scene(I5_I6_SCENE)
        text = write_scene(scene)
        again = load_scene(text)
        assert scene_to_dict(again) == scene_to_dict(scene)
        assert again.points["P"] == scene.points["P"]
        assert again.lines["m"] == scene.lines["m"]
        assert again.planes["pi"] == scene.planes["pi"]


class TestResultDocument:
    def test_planes_reverifiable(self):
        scene = load_scene(I5_I6_SCENE)
        from fold3d import solve_operation

        sol = solve_operation(scene.constraint_list())
        doc = ResultDocument.from_solution("I5+I6", scene.constraints, sol, 1e-9)
        assert doc.outcome == "finite"
        for plane_rec in doc.planes:
            plane = Plane3.from_coeffs(*plane_rec["coeffs"])
            for sc in scene.constraints:
                assert residual(sc.constraint, plane) < 1e-9
            for entry in plane_rec["residuals"]:
                assert entry["residual"] < 1e-9

    def test_exit_codes(self):
        doc = ResultDocument("I1", 1e-9, "finite", "dedicated", False)
        assert doc.exit_code == 0
        assert ResultDocument("I1", 1e-9, "no_solution", "dedicated", False).exit_code == 2
        assert ResultDocument("I1", 1e-9, "infinite", "dedicated", False).exit_code == 3
        assert ResultDocument("I1", 1e-9, "ill_posed", "dedicated", False).exit_code == 3


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestCli:
    def test_solve_i1(self, tmp_path, capsys):
        path = _write(tmp_path, "s.json", I1_SCENE)
        code = main(["solve", path, "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["outcome"] == "finite"
        assert len(out["planes"]) == 1
        assert out["planes"][0]["residuals"][0]["residual"] < 1e-9

    def test_solve_spec_mismatch(self, tmp_path, capsys):
        path = _write(tmp_path, "s.json", I1_SCENE)
        code = main(["solve", path, "--spec", "I5+I6"])
        assert code == 1
        assert "form I1" in capsys.readouterr().err

    def test_solve_invalid_combination(self, tmp_path, capsys):
        scene = """
        {
          "planes": {"a": {"coeffs": [1,0,0,0]}, "b": {"coeffs": [0,1,0,0]},
                     "c": {"coeffs": [0,0,1,0]}},
          "constraints": [
            {"type": "I11", "args": {"plane": "a"}},
            {"type": "I11", "args": {"plane": "b"}},
            {"type": "I11", "args": {"plane": "c"}}
          ]
        }
        """
        path = _write(tmp_path, "s.json", scene)
        code = main(["solve", path])
        assert code == 1
        assert "invalid combination" in capsys.readouterr().err

    def test_solve_no_solution_exit_2(self, tmp_path, capsys):
        path = _write(tmp_path, "s.json", I5_I9_SKEW_SCENE)
        code = main(["solve", path])
        capsys.readouterr()
        assert code == 2

    def test_solve_infinite_exit_3(self, tmp_path, capsys):
        scene = """
        {
          "points": {"P": [0, 0, 1], "Q": [0, 0, 1]},
          "lines": {"m": {"point": [0, 0, -1], "dir": [0, 1, 0]}},
          "planes": {"pi": {"normal": [0, 0, 1], "offset": -1}},
          "constraints": [
            {"type": "I5", "args": {"point": "P", "line": "m"}},
            {"type": "I6", "args": {"point": "Q", "plane": "pi"}}
          ]
        }
        """
        path = _write(tmp_path, "s.json", scene)
        code = main(["solve", path, "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == 3
        assert out["outcome"] == "infinite"
        assert out["family"]["dimension"] == 1

    def test_enumerate_json(self, capsys):
        code = main(["enumerate", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert len(out["valid"]) == 47
        assert len(out["rejected"]) == 3

    def test_enumerate_text(self, capsys):
        main(["enumerate"])
        text = capsys.readouterr().out
        assert "47 valid operations" in text
        assert text.count("rejected") >= 3

    def test_oracle_i1(self, tmp_path, capsys):
        path = _write(tmp_path, "s.json", I1_SCENE)
        code = main(["oracle", path, "--resolution", "24", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["solver"] == "oracle"
        assert len(out["planes"]) == 1

    def test_verify_pass_and_fail(self, tmp_path, capsys):
        path = _write(tmp_path, "s.json", I1_SCENE)
        assert main(["verify", path, "--plane", "0,0,1,-1"]) == 0
        capsys.readouterr()
        code = main(["verify", path, "--plane", "0,0,1,-1.1", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == 1
        assert out["checks"][0]["residual"] == pytest.approx(0.2, abs=1e-12)

    def test_verify_wrong_constraint_plane(self, tmp_path, capsys):
        path = _write(tmp_path, "s.json", I1_SCENE)
        code = main(["verify", path, "--plane", "1,0,0,0"])
        capsys.readouterr()
        assert code == 1

    def test_envelope_export(self, tmp_path, capsys):
        scene = """
        {
          "points": {"P": [0, 0, 1]},
          "planes": {"pi": {"normal": [0, 0, 1], "offset": -1}},
          "constraints": [{"type": "I6", "args": {"point": "P", "plane": "pi"}}]
        }
        """
        path = _write(tmp_path, "s.json", scene)
        out_path = tmp_path / "envelope.obj"
        code = main([
            "envelope", path, "--incidence", "I6",
            "--tangent-planes", "3", "--out", str(out_path),
        ])
        capsys.readouterr()
        assert code == 0
        text = out_path.read_text()
        assert text.count("o ") == 4  # envelope + 3 fold planes
        # every envelope vertex satisfies x^2 + y^2 - 4z = 0
        verts = []
        section = None
        for line in text.splitlines():
            if line.startswith("o "):
                section = line[2:]
            elif line.startswith("v ") and section == "envelope":
                verts.append([float(v) for v in line.split()[1:]])
        verts = np.array(verts)
        defect = verts[:, 0] ** 2 + verts[:, 1] ** 2 - 4 * verts[:, 2]
        assert np.max(np.abs(defect)) < 1e-6

    def test_envelope_contained_line_error(self, tmp_path, capsys):
        scene = """
        {
          "lines": {"m": {"point": [0, 1, 0], "dir": [1, 0, 0]}},
          "planes": {"pi": {"normal": [0, 0, 1], "offset": 0}},
          "constraints": [{"type": "I10", "args": {"line": "m"}}]
        }
        """
        path = _write(tmp_path, "s.json", scene)
        code = main(["envelope", path, "--incidence", "I7"])
        err = capsys.readouterr().err
        assert code == 1
        assert "no I7 constraint" in err

    def test_env_var_sets_default_tol(self, tmp_path):
        # the CLI module reads FOLD3D_TOL at import; run a subprocess
        path = _write(tmp_path, "s.json", I1_SCENE)
        proc = subprocess.run(
            [sys.executable, "-m", "fold3d.cli", "verify", path, "--plane",
             "0,0,1,-1.0000001"],
            capture_output=True, text=True,
            env={"PATH": "", "FOLD3D_TOL": "1e-3",
                 "PYTHONPATH": ":".join(sys.path)},
        )
        assert proc.returncode == 0, proc.stderr

    def test_console_entry_subprocess(self, tmp_path):
        path = _write(tmp_path, "s.json", I1_SCENE)
        proc = subprocess.run(
            [sys.executable, "-m", "fold3d.cli", "solve", path],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "outcome:    finite" in proc.stdout
