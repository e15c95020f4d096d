import numpy as np
import pytest

from famdimpute import csvio, simgen
from famdimpute.cli import main
from famdimpute.data_model import Column, Kind, MixedDataset
from famdimpute.metrics import nrmse

from conftest import random_mixed


@pytest.fixture
def toy_files(tmp_path):
    assert main(["simulate", "--scenario", "toy", "--n", "60", "--fraction", "0.1",
                 "--seed", "3", "--out-dir", str(tmp_path / "sim")]) == 0
    return tmp_path / "sim"


def test_csv_roundtrip(tmp_path, rng):
    ds = random_mixed(rng, n=20, missing=0.2)
    path = tmp_path / "d.csv"
    csvio.write_dataset(ds, path)
    assert csvio.read_dataset(path).equals(ds)


def test_parse_errors_carry_location(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,z\ncont,cat\n1.0,a\nfoo,b\n")
    with pytest.raises(csvio.ParseError, match="row 4"):
        csvio.read_dataset(bad)
    bad.write_text("x,z\ncont,num\n1.0,a\n")
    with pytest.raises(csvio.ParseError, match="kind"):
        csvio.read_dataset(bad)


def test_custom_na_token(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("x,z\ncont,cat\n1,a\n?,b\n3,?\n4,a\n")
    ds = csvio.read_dataset(p, na="?")
    assert ds.missing_mask().sum() == 2


def test_impute_complete_is_identity(tmp_path, rng):
    ds = random_mixed(rng, n=30)
    src, out = tmp_path / "in.csv", tmp_path / "out.csv"
    csvio.write_dataset(ds, src)
    assert main(["impute", str(src), "--out", str(out)]) == 0
    assert out.read_bytes() == src.read_bytes()
    man = csvio.read_manifest(f"{out}.manifest")
    assert man["iterations"] == "1" and man["ncp"] == "2" and man["kernels"] in ("python", "cython")


def test_impute_and_score(toy_files, tmp_path, capsys):
    out = tmp_path / "imp.csv"
    assert main(["impute", str(toy_files / "masked.csv"), "--out", str(out),
                 "--fuzzy-out", str(tmp_path / "fuzzy.csv")]) == 0
    assert main(["score", "--truth", str(toy_files / "complete.csv"), "--imputed", str(out),
                 "--mask", str(toy_files / "mask.csv")]) == 0
    text = capsys.readouterr().out
    vals = dict(line.split("=") for line in text.split())
    assert 0 < float(vals["nrmse"]) < 1 and 0 <= float(vals["pfc"]) < 0.66
    header = (tmp_path / "fuzzy.csv").read_text().splitlines()[0]
    assert "z1.a" in header


def test_score_truth_against_itself(toy_files, capsys):
    assert main(["score", "--truth", str(toy_files / "complete.csv"),
                 "--imputed", str(toy_files / "complete.csv"),
                 "--incomplete", str(toy_files / "masked.csv")]) == 0
    out = capsys.readouterr().out
    assert "nrmse=0\n" in out and "pfc=0\n" in out


def test_plain_matches_default_on_noiseless_low_rank(tmp_path):
    rng = np.random.default_rng(4)
    n = 60
    x = rng.standard_normal((n, 2)) @ rng.standard_normal((2, 5))
    truth = MixedDataset(tuple(Column(f"x{k + 1}", Kind.CONTINUOUS, x[:, k], np.zeros(n, bool)) for k in range(5)))
    data = simgen.mcar_mask(truth, simgen.MaskSpec(0.05, 1))
    src = tmp_path / "in.csv"
    csvio.write_dataset(data, src)
    for flag, name in (([], "reg.csv"), (["--plain"], "plain.csv")):
        assert main(["impute", str(src), "--ncp", "2", "--eps", "1e-20", "--max-iter", "5000",
                     "--out", str(tmp_path / name)] + flag) == 0
    a = csvio.read_dataset(tmp_path / "reg.csv")
    b = csvio.read_dataset(tmp_path / "plain.csv")
    for ca, cb in zip(a.columns, b.columns):
        np.testing.assert_allclose(ca.values, cb.values, atol=1e-8)
    assert nrmse(truth, b, data.missing_mask()) < 1e-4


def test_simulate_is_reproducible(tmp_path):
    for d in ("a", "b"):
        assert main(["simulate", "--scenario", "rare", "--n", "100", "--seed", "5",
                     "--out-dir", str(tmp_path / d)]) == 0
    for name in ("complete.csv", "masked.csv", "mask.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_analyze_reports_total_inertia(toy_files, tmp_path, capsys):
    out = tmp_path / "eig.csv"
    assert main(["analyze", str(toy_files / "complete.csv"), "--out", str(out)]) == 0
    # 4 continuous + 4 four-level variables: 4 + 4 * 3
    assert "total_inertia=16" in capsys.readouterr().err
    rows = out.read_text().splitlines()
    assert rows[0] == "dimension,eigenvalue,percent,cumulative"
    assert float(rows[-1].split(",")[3]) == pytest.approx(100.0)


def test_cv_command(toy_files, capsys):
    assert main(["cv", str(toy_files / "masked.csv"), "--grid", "1-3", "--folds", "2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1].startswith("chosen_s=")


def test_impute_auto_ncp(toy_files, tmp_path):
    out = tmp_path / "auto.csv"
    assert main(["impute", str(toy_files / "masked.csv"), "--ncp", "auto", "--grid", "1-3",
                 "--folds", "2", "--out", str(out)]) == 0
    man = csvio.read_manifest(f"{out}.manifest")
    assert man["ncp_mode"] == "auto" and man["cv_grid"] == "1,2,3"


def test_bench_command(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--scenario", "rare", "--replicates", "3", "--n", "100", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("row,scenario")
    assert sum(line.startswith("replicate,") for line in lines) == 3
    assert sum(line.startswith("aggregate,") for line in lines) == 1


def test_exit_codes(tmp_path, capsys):
    assert main([]) == 1
    assert main(["impute", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "o.csv")]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("x\ncont\n1\nzz\n")
    assert main(["impute", str(bad), "--out", str(tmp_path / "o.csv")]) == 1
    ok = tmp_path / "ok.csv"
    ok.write_text("x,y\ncont,cont\n1,2\n2,1\n3,5\n")
    assert main(["impute", str(ok), "--ncp", "two", "--out", str(tmp_path / "o.csv")]) == 1
    assert main(["impute", str(ok), "--ncp", "9", "--out", str(tmp_path / "o.csv")]) == 1
    assert main(["--version"]) == 0
