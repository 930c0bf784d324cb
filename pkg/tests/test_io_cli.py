import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given

from sdlab import companion as cp
from sdlab import matrix_io as mio
from sdlab.cli import main
from sdlab.linalg import jordan_block

from strategies import complex_matrices


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def companion_obj(spec):
    return mio.companion_spec_to_obj(spec)


class TestMatrixIO:
    @given(complex_matrices(max_n=4))
    def test_round_trip(self, M):
        text = mio.dumps_matrix(M)
        back = mio.matrix_from_obj(json.loads(text))
        np.testing.assert_array_equal(back, M)
        assert mio.dumps_matrix(back) == text

    def test_nested_list(self):
        np.testing.assert_array_equal(mio.matrix_from_obj([[1, 2], [3, 4]]), [[1, 2], [3, 4]])

    @pytest.mark.parametrize(
        "obj",
        [
            {"rows": 2, "cols": 2, "data": [[1, 0]] * 3},
            {"rows": 1, "cols": 1, "data": [["1", 0]]},
            {"rows": 1, "cols": 1, "data": [[1, 0, 0]]},
            {"rows": 0, "cols": 1, "data": []},
            {"cols": 1, "data": [[1, 0]]},
            [[1, 2], [3]],
            "matrix",
        ],
    )
    def test_malformed(self, obj):
        with pytest.raises(mio.ParseError):
            mio.matrix_from_obj(obj)

    def test_companion_spec_round_trip(self, rng):
        spec = cp.random_spec(4, 2, rng)
        back = mio.companion_spec_from_obj(json.loads(json.dumps(companion_obj(spec))))
        np.testing.assert_array_equal(cp.build(back), cp.build(spec))

    def test_kind(self):
        assert mio.kind_of({"m": 3, "A": [[1]]}) == "kms"
        assert mio.kind_of({"diag_blocks": []}) == "companion"
        assert mio.kind_of([[1]]) == "matrix"

    def test_svg_single_polyline(self):
        from sdlab.numrange import boundary

        svg = mio.boundary_svg(boundary(jordan_block(2), 16))
        assert svg.count("<polyline") == 1 and svg.startswith("<svg")


class TestZdiCommand:
    def test_zero(self, capsys, tmp_path):
        f = write(tmp_path / "z.json", mio.matrix_to_obj(np.zeros((3, 3))))
        code, out, _ = run(capsys, "zdi", f)
        assert code == 0 and out.splitlines()[0] == "d = 3"

    def test_companion_z4(self, capsys, tmp_path):
        f = write(tmp_path / "c.json", mio.matrix_to_obj(cp.build(cp.GeneralizedCompanionSpec.scalar([0, 0, 0, 0]))))
        code, out, _ = run(capsys, "zdi", f)
        assert code == 0 and "d = 2" in out

    def test_kms_spec(self, capsys, tmp_path):
        f = write(tmp_path / "k.json", {"m": 3, "A": mio.matrix_to_obj([[1.0]])})
        code, out, _ = run(capsys, "zdi", f)
        assert code == 0 and out.startswith("d = 1\n")

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run(capsys, "zdi", str(bad))[0] == 2

    def test_dimension_error(self, capsys, tmp_path):
        f = write(tmp_path / "r.json", mio.matrix_to_obj(np.ones((2, 3))))
        assert run(capsys, "zdi", f)[0] == 3

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "zdi", str(tmp_path / "nope.json"))[0] == 5


class TestCompanionCommand:
    def test_bounds_even(self, capsys):
        code, out, _ = run(capsys, "companion", "bounds", "--m", "4", "--n", "3", "--seed", "5")
        assert code == 0 and out.strip() == "exact d = 6, oracle agrees"

    def test_interp(self, capsys):
        code, out, _ = run(capsys, "companion", "interp", "--m", "3", "--n", "2", "--k", "1")
        assert code == 0 and out.strip() == "expected 3, oracle 3"

    def test_det(self, capsys, tmp_path):
        spec = cp.GeneralizedCompanionSpec(2, 1, (np.ones((1, 1)),), (np.zeros((1, 1)), np.zeros((1, 1))))
        f = write(tmp_path / "s.json", companion_obj(spec))
        code, out, _ = run(capsys, "companion", "det", "--spec", f)
        assert code == 0 and "closed form -0.25, direct -0.25" in out

    def test_build(self, capsys, tmp_path):
        out_file = tmp_path / "C.json"
        code, _, _ = run(capsys, "companion", "build", "--m", "3", "--n", "2", "--out", str(out_file))
        assert code == 0
        assert mio.matrix_from_obj(json.loads(out_file.read_text())).shape == (6, 6)

    def test_singular_block(self, capsys, tmp_path):
        one, zero = np.ones((1, 1)), np.zeros((1, 1))
        spec = cp.GeneralizedCompanionSpec(4, 1, (one, zero, one), (one,) * 4)
        f = write(tmp_path / "sing.json", companion_obj(spec))
        code, _, err = run(capsys, "companion", "bounds", "--spec", f)
        assert code == 4 and "singular" in err


class TestKmsCommand:
    J3_0 = "[[0,1,0,0],[0,0,1,0],[0,0,0,0],[0,0,0,0]]"

    def test_nk(self, capsys):
        code, out, _ = run(capsys, "kms", "nk", "--m", "5", "--a", self.J3_0)
        assert code == 0 and out.strip() == "N = [7, 2, 3, 0, 0]"

    def test_similar(self, capsys):
        code, out, _ = run(capsys, "kms", "similar", "--m", "3", "--a", "[[0,1],[0,0]]", "--b", "[[1,0],[0,0]]")
        assert code == 0 and out.strip() == "not similar (N_3: 0 vs 1)"

    def test_usim(self, capsys):
        code, out, _ = run(capsys, "kms", "usim", "--m", "3", "--a", "[[1]]", "--b", "[[2]]")
        assert code == 0 and out.startswith("distinguished by word st")

    def test_zdi(self, capsys):
        code, out, _ = run(capsys, "kms", "zdi", "--m", "5", "--a", "[[0.5]]")
        assert code == 0 and out.strip() == "d = 2, oracle agrees"

    def test_build(self, capsys):
        code, out, _ = run(capsys, "kms", "build", "--m", "3", "--a", "[[1]]")
        assert code == 0
        np.testing.assert_array_equal(mio.matrix_from_obj(json.loads(out)).real, [[0, 1, 1], [0, 0, 1], [0, 0, 0]])

    def test_size_mismatch(self, capsys):
        assert run(capsys, "kms", "similar", "--m", "3", "--a", "[[1]]", "--b", "[[1,0],[0,1]]")[0] == 3

    def test_unstable_rank_warns(self, capsys):
        code, _, err = run(capsys, "kms", "nk", "--m", "3", "--a", "[[1,0],[0,1e-8]]")
        assert code == 0 and "warning" in err


class TestNumrangeCommand:
    def test_k2_disk(self, capsys, tmp_path):
        f = write(tmp_path / "k.json", {"m": 2, "A": [[2.0]]})
        code, out, _ = run(capsys, "numrange", f, "--out", str(tmp_path / "w"), "--samples", "90")
        assert code == 0 and "CircularDisk" in out
        rows = (tmp_path / "w.csv").read_text().splitlines()
        assert rows[0] == "theta,support,re,im" and len(rows) == 91
        assert all(abs(float(r.split(",")[1]) - 1.0) <= 1e-9 for r in rows[1:])
        assert (tmp_path / "w.svg").read_text().count("<polyline") == 1

    def test_k3_not_circular(self, capsys, tmp_path):
        f = write(tmp_path / "k.json", {"m": 3, "A": [[1.0]]})
        code, out, _ = run(capsys, "numrange", f, "--out", str(tmp_path / "w"))
        assert code == 0 and "NotCircular" in out

    def test_hermitian_segment(self, capsys, tmp_path):
        code, out, _ = run(capsys, "numrange", "[[1,2],[2,-1]]")
        rows = out.splitlines()[1:]
        assert all(abs(float(r.split(",")[3])) <= 1e-9 for r in rows)

    def test_unwritable(self, capsys, tmp_path):
        assert run(capsys, "numrange", "[[1]]", "--out", str(tmp_path / "no" / "dir" / "w"))[0] == 5


class TestVerifyCommand:
    def test_kms_suite(self, capsys, tmp_path):
        report = tmp_path / "kms.json"
        code, out, _ = run(capsys, "verify", "kms", "--seed", "7", "--out", str(report))
        assert code == 0 and "FAIL" not in out
        doc = json.loads(report.read_text())
        assert doc["passed"] and len(doc["checks"]) == 7

    def test_injected_singular_spec(self, capsys, tmp_path):
        one, zero = np.ones((1, 1)), np.zeros((1, 1))
        spec = cp.GeneralizedCompanionSpec(4, 1, (one, zero, one), (one,) * 4)
        f = write(tmp_path / "sing.json", companion_obj(spec))
        report = tmp_path / "r.json"
        code, out, _ = run(capsys, "verify", "companion", "--extra-spec", f, "--out", str(report))
        assert code == 1
        doc = json.loads(report.read_text())
        extra = [c for c in doc["checks"] if c["criterion"] == "x"]
        assert len(extra) == 1 and not extra[0]["passed"] and "rejected" in extra[0]["details"]
        assert all(c["passed"] for c in doc["checks"] if c["criterion"] != "x")

    def test_reports_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(capsys, "verify", "numrange", "--seed", "3", "--out", str(a))[0] == 0
        assert run(capsys, "verify", "numrange", "--seed", "3", "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_from_environment(self, capsys, tmp_path, monkeypatch):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        monkeypatch.setenv("SDLAB_SEED", "11")
        run(capsys, "verify", "numrange", "--out", str(a))
        assert json.loads(a.read_text())["seed"] == 11
        run(capsys, "verify", "numrange", "--seed", "4", "--out", str(b))
        assert json.loads(b.read_text())["seed"] == 4

    def test_unknown_suite(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "everything"])
        assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "sdlab", "kms", "nk", "--m", "2", "--a", "[[0,1,0,0],[0,0,1,0],[0,0,0,0],[0,0,0,0]]"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and res.stdout.strip() == "N = [4, 2]"
