import json

import numpy as np
import pytest

from depthdegen import cli, csvio
from depthdegen.core import mu, sigma_sq


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out


def rows(path):
    return csvio.read_csv(path.read_text())


class TestPredict:
    def test_all_methods(self, tmp_path):
        code, out = run(tmp_path, "predict", "--widths", "256x30", "--input-dim", "256",
                        "--theta0", "0.1")
        assert code == 0
        data = rows(out / "predict.csv")
        assert len(data) == 31
        assert float(data[1]["x_finite-full"]) == pytest.approx(mu(0.1, 256), rel=1e-15)
        assert float(data[1]["sigma_sq_finite-full"]) == pytest.approx(sigma_sq(0.1, 256), rel=1e-15)
        for r in data[1:]:
            assert float(r["x_finite-full"]) < float(r["x_infinite"])
        assert (out / "predict.svg").exists()
        assert json.loads((out / "manifest.json").read_text())["command"] == "predict"

    def test_single_method_columns(self, tmp_path):
        code, out = run(tmp_path, "predict", "--widths", "20,30", "--method", "infinite", "--no-svg")
        assert code == 0
        text = (out / "predict.csv").read_bytes().decode()
        assert text.startswith("layer,theta,x,sigma_sq\r\n")
        assert not (out / "predict.svg").exists()

    def test_catalog_entry(self, tmp_path):
        code, out = run(tmp_path, "predict", "--catalog", "17", "--method", "finite-full")
        assert code == 0
        assert len(rows(out / "predict_17.csv")) == 11

    def test_collinear_start(self, tmp_path, capsys):
        code, out = run(tmp_path, "predict", "--widths", "50x3", "--theta0", "0")
        assert code == 0
        assert "warning" in capsys.readouterr().err
        data = rows(out / "predict.csv")
        assert all(r["x_finite-full"] == "-inf" for r in data)

    @pytest.mark.parametrize("args", [
        ["--widths", "50,1"],
        ["--widths", "abc"],
        ["--catalog", "99"],
        ["--widths", "50", "--theta0", "2.0"],
    ])
    def test_validation_errors(self, tmp_path, capsys, args):
        code, _ = run(tmp_path, "predict", *args)
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_missing_spec_file(self, tmp_path):
        code, _ = run(tmp_path, "predict", "--spec", str(tmp_path / "nope.spec"))
        assert code == 2


class TestSimulate:
    ARGS = ("simulate", "--widths", "64x6", "--input-dim", "32", "--theta0", "0.3",
            "--replicas", "600", "--seed", "4")

    def test_outputs(self, tmp_path):
        code, out = run(tmp_path, *self.ARGS)
        assert code == 0
        data = rows(out / "simulate.csv")
        assert len(data) == 7
        assert float(data[0]["mc_mean"]) == pytest.approx(np.log(np.sin(0.3) ** 2), rel=1e-12)
        samples = rows(out / "samples.csv")
        assert len(samples) == 600 and len(samples[0]) == 8
        assert (out / "simulate.svg").read_text().startswith("<svg")

    def test_thread_count_irrelevant(self, tmp_path):
        _, a = run(tmp_path, *self.ARGS, "--threads", "1", name="a")
        _, b = run(tmp_path, *self.ARGS, "--threads", "3", name="b")
        for f in ("simulate.csv", "samples.csv", "simulate.svg"):
            assert (a / f).read_bytes() == (b / f).read_bytes()

    @pytest.mark.invariant
    def test_replay(self, tmp_path):
        _, a = run(tmp_path, *self.ARGS, name="a")
        manifest = json.loads((a / "manifest.json").read_text())
        assert manifest["seed"] == 4 and "--out" not in manifest["argv"]
        b = tmp_path / "b"
        b.mkdir()
        (b / "manifest.json").write_text(json.dumps(manifest))
        assert cli.main(["replay", str(b / "manifest.json")]) == 0
        for f in ("simulate.csv", "samples.csv"):
            assert (a / f).read_bytes() == (b / f).read_bytes()

    def test_bad_threads(self, tmp_path):
        code, _ = run(tmp_path, *self.ARGS, "--threads", "0")
        assert code == 2


class TestCompare:
    def test_builtin(self, tmp_path):
        code, out = run(tmp_path, "compare")
        assert code == 0
        data = rows(out / "report.csv")
        assert len(data) == 45
        assert all(float(r["x_final_finite"]) < float(r["x_final_infinite"]) for r in data)
        for name in ("mnist", "fmnist", "cifar10"):
            assert (out / f"scatter_{name}.svg").exists()
        assert (out / "finite_vs_infinite.svg").exists()

    def test_spec_file(self, tmp_path, capsys):
        spec = tmp_path / "nets.spec"
        spec.write_text("a; 784; 20,30\nb; 784; 40x5,20x3\n")
        code, out = run(tmp_path, "compare", "--spec", str(spec))
        assert code == 0
        data = rows(out / "report.csv")
        assert [r["id"] for r in data] == ["a", "b"]
        assert data[0]["acc_mnist_mean"] == ""
        assert not list(out.glob("scatter_*.svg"))
        assert "CSV only" in capsys.readouterr().err

    def test_bad_spec_line(self, tmp_path, capsys):
        spec = tmp_path / "nets.spec"
        spec.write_text("a; 784; 20\nb; 784; 20,1\n")
        code, _ = run(tmp_path, "compare", "--spec", str(spec))
        assert code == 2
        assert "line 2" in capsys.readouterr().err


class TestDensity:
    def test_first_layer_exact_normal(self, tmp_path):
        code, out = run(tmp_path, "density", "--widths", "256x30", "--input-dim", "256",
                        "--theta0", "0.1", "--layer", "1", "--replicas", "2000")
        assert code == 0
        data = rows(out / "density_layer1.csv")
        x = np.array([float(r["x"]) for r in data])
        pred = np.array([float(r["predicted_density"]) for r in data])
        m, s = mu(0.1, 256), np.sqrt(sigma_sq(0.1, 256))
        ref = np.exp(-0.5 * ((x - m) / s) ** 2) / (s * np.sqrt(2 * np.pi))
        assert np.allclose(pred, ref, rtol=1e-12)

    @pytest.mark.slow
    def test_total_variation_at_layer_5(self, tmp_path):
        code, out = run(tmp_path, "density", "--widths", "256x30", "--input-dim", "256",
                        "--theta0", "0.1", "--layer", "5", "--replicas", "5000", "--seed", "2")
        assert code == 0
        data = rows(out / "density_layer5.csv")
        x = np.array([float(r["x"]) for r in data])
        mc = np.array([float(r["mc_density"]) for r in data])
        pred = np.array([float(r["predicted_density"]) for r in data])
        width = x[1] - x[0]
        assert 0.5 * np.sum(np.abs(mc - pred)) * width <= 0.15

    @pytest.mark.invariant
    def test_deterministic_svg(self, tmp_path):
        args = ("density", "--widths", "64x3", "--input-dim", "16", "--theta0", "0.2",
                "--layer", "1,3", "--replicas", "400", "--samples", "2000")
        _, a = run(tmp_path, *args, name="a")
        _, b = run(tmp_path, *args, "--threads", "2", name="b")
        for f in ("density_layer1.csv", "density_layer3.csv", "density_layer3.svg"):
            assert (a / f).read_bytes() == (b / f).read_bytes()

    def test_layer_out_of_range(self, tmp_path):
        code, _ = run(tmp_path, "density", "--widths", "64x3", "--layer", "4")
        assert code == 2


class TestSweep:
    def test_permutations(self, tmp_path):
        code, out = run(tmp_path, "sweep", "--widths", "20,40,80,160", "--permutations", "6")
        assert code == 0
        data = rows(out / "sweep.csv")
        assert len(data) == 7
        for r in data:
            assert sorted(map(int, r["widths"].split())) == [20, 40, 80, 160]


def test_csv_format():
    text = csvio.to_csv(["a", "b", "c", "d"], [[1, 0.1, -np.inf, np.nan]])
    assert text == "a,b,c,d\r\n1,0.10000000000000001,-inf,\r\n"
    assert float(csvio.read_csv(text)[0]["b"]) == 0.1


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "depthdegen", "predict", "--widths", "30x2",
                          "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "predict.csv").exists()
