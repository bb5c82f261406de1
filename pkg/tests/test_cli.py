import json
import subprocess
import sys

import numpy as np
import pytest

from rankcorr.cli import main, read_pairs, InputError
from rankcorr.dgp import DgpSpec, simulate
from rankcorr.inference import analyze


@pytest.fixture
def write(tmp_path):
    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


class TestReader:
    @pytest.mark.parametrize("sep", [",", ";", "\t"])
    def test_delimiters(self, sep):
        x, y = read_pairs(f"a{sep}b\n1{sep}2\n3{sep}4.5\n")
        assert x.tolist() == [1, 3] and y.tolist() == [2, 4.5]

    def test_headerless(self):
        x, y = read_pairs("1,2\n\n3,4\n")
        assert x.tolist() == [1, 3]

    def test_bad_cell_names_line(self):
        with pytest.raises(InputError, match="line 3"):
            read_pairs("x,y\n1,2\n3,abc\n")

    @pytest.mark.parametrize("cell", ["nan", "", "inf"])
    def test_missing(self, cell):
        with pytest.raises(InputError, match="line 2"):
            read_pairs(f"1,2\n3,{cell}\n")

    def test_column_count(self):
        with pytest.raises(InputError, match="2 columns"):
            read_pairs("1,2,3\n4,5,6\n")


class TestCorrelate:
    def test_comonotone(self, write, capsys):
        path = write("x,y\n1,10\n2,20\n3,30\n4,40\n")
        assert main(["correlate", path, "--coefficient", "tau", "--mode", "iid"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["coefficient"] == "tau" and doc["estimate"] == 1.0
        assert set(doc) == {"coefficient", "n", "estimate", "variance", "variance_mode", "ci",
                            "test_general", "test_independence"}

    def test_non_numeric(self, write, capsys):
        path = write("x,y\n1,2\n2,oops\n")
        assert main(["correlate", path]) == 2
        assert "line 3" in capsys.readouterr().err

    def test_constant_margin(self, write, capsys):
        path = write("5,1\n5,2\n5,3\n")
        assert main(["correlate", path, "--coefficient", "gamma"]) == 1
        assert "degenerate margin x" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["correlate", str(tmp_path / "absent.csv")]) == 2

    @pytest.mark.parametrize(
        "flags",
        [["--level", "1.5"], ["--mode", "block"], ["--coefficient", "kappa"], ["--bandwidth", "0"],
         ["--format", "xml"], ["--null", "nan"]],
    )
    def test_invalid_flags(self, write, flags):
        assert main(["correlate", write("1,2\n2,3\n3,1\n")] + flags) == 3

    def test_bandwidth_too_large(self, write):
        assert main(["correlate", write("1,2\n2,3\n3,1\n"), "--mode", "ts", "--bandwidth", "5"]) == 3

    def test_no_subcommand(self):
        assert main([]) == 3

    def test_several_coefficients_and_formats(self, write, capsys, tmp_path):
        path = write("1,2\n2,1\n3,4\n4,3\n5,6\n6,5\n")
        assert main(["correlate", path, "--coefficient", "tau", "--coefficient", "rho_b", "--no-fisher"]) == 0
        docs = json.loads(capsys.readouterr().out)
        assert [d["coefficient"] for d in docs] == ["tau", "rho_b"]
        assert docs[0]["ci"]["fisher"] is False
        out = tmp_path / "o.csv"
        assert main(["correlate", path, "--format", "csv", "--out", str(out)]) == 0
        assert out.read_text().startswith("coefficient,n,estimate")
        assert main(["correlate", path, "--format", "table", "--mode", "ts"]) == 0
        assert "variance_mode" in capsys.readouterr().out


class TestSimulate:
    def test_round_trip(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        argv = ["simulate", "--dgp", "GaussAr", "--alpha", "0.4", "--n", "150", "--seed", "9", "--out", str(out)]
        assert main(argv) == 0
        x, y = read_pairs(out.read_text())
        sample = simulate(DgpSpec("GaussAr", 0.4, 150, 9))
        np.testing.assert_array_equal(x, sample.x)
        np.testing.assert_array_equal(y, sample.y)
        assert main(["correlate", str(out), "--coefficient", "rho", "--mode", "ts"]) == 0
        doc = json.loads(capsys.readouterr().out)
        direct = analyze(sample.x, sample.y, "rho", mode="ts").to_dict()
        assert doc == json.loads(json.dumps(direct))

    def test_seed_determines_output(self, capsys):
        argv = ["simulate", "--dgp", "PoisInar", "--alpha", "0.3", "--n", "20", "--seed", "4"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first
        assert first.splitlines()[0] == "x,y" and len(first.splitlines()) == 21

    def test_invalid_alpha(self):
        assert main(["simulate", "--dgp", "PoisIid", "--alpha", "-0.5"]) == 3

    def test_target(self, capsys):
        assert main(["simulate", "--dgp", "GaussIid", "--target", "tau=0.4", "--n", "5"]) == 0
        assert main(["simulate", "--dgp", "GaussIid", "--target", "tau=1.4", "--n", "5"]) == 1


class TestStudy:
    def test_csv(self, capsys):
        argv = ["study", "--dgp", "GaussIid", "--n", "30", "--mc", "20", "--coefficient", "tau", "--seed", "2"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert first.splitlines()[0] == "dgp,coefficient,n,target,rate,se,mc,errors"
        main(argv)
        assert capsys.readouterr().out == first

    def test_table_and_coverage(self, capsys):
        argv = ["study", "--dgp", "GaussAr", "--n", "40", "--mc", "10", "--task", "coverage", "--mode", "ts",
                "--format", "table"]
        assert main(argv) == 0
        assert "coverage" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("1;1\n2;3\n3;2\n4;4\n")
    proc = subprocess.run([sys.executable, "-m", "rankcorr", "correlate", str(path), "--no-fisher"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["estimate"] == pytest.approx(2 / 3)
