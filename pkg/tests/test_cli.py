import json
from importlib import resources

from camsparse import cli

DATA = resources.files("camsparse").joinpath("data")


def data_path(name: str) -> str:
    return str(DATA / name)


def parse_csv(text):
    """Split a report into (comment-config dict, list of row dicts)."""
    config = {}
    rows = []
    header = None
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            config[key] = value
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(dict(zip(header, line.split(","))))
    return config, rows


def run_cli(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestInfo:
    def test_identity_summary(self, capsys):
        rc, out, _ = run_cli(capsys, "info", data_path("ident8.mtx"))
        assert rc == 0
        assert "n_rows: 8" in out
        assert "nnz: 8" in out
        assert "max_nzr: 1" in out
        assert "required_w: 3" in out

    def test_generated_matrix_round_trip(self, capsys, tmp_path):
        import io

        from camsparse import gen_random_csr, write_matrix_market

        m = gen_random_csr(100, 100, 0.05, seed=123)
        p = tmp_path / "g.mtx"
        with open(p, "w") as f:
            write_matrix_market(m, f)
        rc, out, _ = run_cli(capsys, "info", str(p))
        assert rc == 0
        assert f"nnz: {m.nnz}" in out

    def test_malformed_banner_fails_with_diagnostic(self, capsys, tmp_path):
        p = tmp_path / "bad.mtx"
        p.write_text("%%MatrixMarket matrix array real general\n")
        rc, _, err = run_cli(capsys, "info", str(p))
        assert rc == cli.EXIT_PARSE
        assert "line 1" in err


class TestRun:
    def test_single_row_fixture(self, capsys):
        rc, out, _ = run_cli(
            capsys, "run", data_path("onerow32.mtx"),
            "--vector", data_path("onerow32_vec.mtx"), "--k", "4", "--h", "8")
        assert rc == 0
        config, rows = parse_csv(out)
        assert len(rows) == 1
        row = rows[0]
        assert row["oracle_match"] == "true"
        assert row["nnz"] == "4"
        assert row["vec_nnz"] == "3"
        assert row["cycles"] == "7"  # pipeline fill + one group of four
        assert config["kernel_backend"] in ("cython", "python")

    def test_report_embeds_all_constants(self, capsys):
        rc, out, _ = run_cli(capsys, "run", data_path("ident8.mtx"))
        assert rc == 0
        config, _ = parse_csv(out)
        for key in ("e_compare_bit", "e_mul", "e_mem_byte", "feature_nm",
                    "clock_hz", "pipeline_depth", "k", "h", "w", "seed"):
            assert key in config

    def test_same_seed_is_byte_identical(self, capsys):
        args = ("run", data_path("rand50.mtx"), "--seed", "7", "--reps", "2")
        rc1, out1, _ = run_cli(capsys, *args)
        rc2, out2, _ = run_cli(capsys, *args)
        assert rc1 == rc2 == 0
        assert out1 == out2

    def test_generated_source(self, capsys):
        rc, out, _ = run_cli(capsys, "run", "--gen", "60:0.05", "--seed", "3")
        assert rc == 0
        _, rows = parse_csv(out)
        assert rows[0]["matrix"] == "gen:60:0.05"
        assert rows[0]["oracle_match"] == "true"

    def test_every_numeric_column_is_finite(self, capsys):
        rc, out, _ = run_cli(capsys, "run", "--bundled", "--seed", "1")
        assert rc == 0
        _, rows = parse_csv(out)
        numeric = set(cli.RUN_COLUMNS) - {"matrix", "vec_source", "oracle_match"}
        for row in rows:
            for col in numeric:
                assert float(row[col]) == float(row[col])  # parses, not NaN
                assert abs(float(row[col])) != float("inf")

    def test_vector_dimension_mismatch(self, capsys):
        rc, _, err = run_cli(
            capsys, "run", data_path("ident8.mtx"),
            "--vector", data_path("onerow32_vec.mtx"))
        assert rc == cli.EXIT_DIMENSION
        assert "length" in err

    def test_oracle_mismatch_aborts(self, capsys, monkeypatch, tmp_path):
        from camsparse import SparseVector

        def broken_oracle(A, B):
            return SparseVector.from_pairs(A.n_rows, [(0, 123.456)])

        monkeypatch.setattr(cli, "oracle_spmspv", broken_oracle)
        rc, _, err = run_cli(capsys, "run", data_path("tband12.mtx"))
        assert rc == cli.EXIT_ORACLE
        assert "oracle" in err

    def test_json_mirrors_csv(self, capsys):
        rc, out_csv, _ = run_cli(capsys, "run", data_path("grid25.mtx"), "--seed", "5")
        rc2, out_json, _ = run_cli(
            capsys, "run", data_path("grid25.mtx"), "--seed", "5", "--format", "json")
        assert rc == rc2 == 0
        _, csv_rows = parse_csv(out_csv)
        doc = json.loads(out_json)
        assert doc["columns"] == cli.RUN_COLUMNS
        assert len(doc["rows"]) == len(csv_rows)
        assert doc["rows"][0]["cycles"] == int(csv_rows[0]["cycles"])
        assert "e_compare_bit" in doc["config"]

    def test_out_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.csv"
        rc, out, _ = run_cli(
            capsys, "run", data_path("ident8.mtx"), "--out", str(out_path))
        assert rc == 0
        assert out == ""
        _, rows = parse_csv(out_path.read_text())
        assert rows[0]["oracle_match"] == "true"

    def test_no_sources_is_an_error(self, capsys):
        rc, _, err = run_cli(capsys, "run")
        assert rc == 1
        assert "no matrix sources" in err


class TestBench:
    def test_all_rows_match_oracle_and_stay_cool(self, capsys):
        rc, out, _ = run_cli(capsys, "bench", "--bundled", "--k", "15", "--h", "512")
        assert rc == 0
        _, rows = parse_csv(out)
        per_matrix = [r for r in rows if not r["matrix"].startswith(("summary_", "baseline_"))]
        assert len(per_matrix) >= 10
        assert all(r["oracle_match"] == "true" for r in per_matrix)
        assert all(float(r["w_accelerator"]) <= 0.3 for r in per_matrix)

    def test_throughput_spread_below_peak(self, capsys):
        rc, out, _ = run_cli(capsys, "bench", "--bundled", "--k", "15", "--h", "512")
        assert rc == 0
        _, rows = parse_csv(out)
        per_matrix = [r for r in rows if not r["matrix"].startswith(("summary_", "baseline_"))]
        gflops = [float(r["gflops"]) for r in per_matrix]
        assert len(set(gflops)) > 1          # utilization varies with row shape
        assert max(gflops) <= 60.0 + 1e-9    # bounded by peak for k=15 at 2 GHz

    def test_summary_and_baseline_rows(self, capsys):
        rc, out, _ = run_cli(capsys, "bench", "--bundled")
        assert rc == 0
        _, rows = parse_csv(out)
        labels = {r["matrix"] for r in rows}
        assert {"summary_min", "summary_median", "summary_max"} <= labels
        assert {"baseline_gpu_spmv_low", "baseline_gpu_spmv_high",
                "baseline_multicore_spmv"} <= labels
        gpu = next(r for r in rows if r["matrix"] == "baseline_gpu_spmv_high")
        assert float(gpu["gflops_per_w"]) == 0.5


class TestDse:
    def test_default_range_contains_design_point(self, capsys):
        rc, out, _ = run_cli(capsys, "dse", "--h", str(2**20))
        assert rc == 0
        _, rows = parse_csv(out)
        hit = [r for r in rows if float(r["bandwidth_bytes_per_s"]) == 250e9]
        assert len(hit) == 1
        assert hit[0]["k"] == "15"
        assert float(hit[0]["peak_flops_per_s"]) == 6.0e10

    def test_area_columns_at_full_height(self, capsys):
        rc, out, _ = run_cli(capsys, "dse", "--bw", "250", "--h", str(2**20))
        assert rc == 0
        _, rows = parse_csv(out)
        assert len(rows) == 1
        assert float(rows[0]["area_ratio"]) >= 25.0

    def test_single_bandwidth(self, capsys):
        rc, out, _ = run_cli(capsys, "dse", "--bw", "128")
        assert rc == 0
        _, rows = parse_csv(out)
        assert len(rows) == 1
        assert rows[0]["k"] == "8"

    def test_empty_range_rejected(self, capsys):
        rc, _, err = run_cli(capsys, "dse", "--bw-min", "100", "--bw-max", "50")
        assert rc == 1
        assert "range" in err


class TestDefaults:
    def test_prints_constants(self, capsys):
        rc, out, _ = run_cli(capsys, "defaults")
        assert rc == 0
        assert "e_compare_bit=1e-16" in out
        assert "feature_nm=22.0" in out
        assert "baseline gpu_spmv_high = 0.5" in out

    def test_energy_config_override(self, capsys, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("e_mul=9e-12\n")
        rc, out, _ = run_cli(capsys, "defaults", "--energy-config", str(p))
        assert rc == 0
        assert "e_mul=9e-12" in out

    def test_run_honors_energy_config(self, capsys, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("e_mul=0.0\ne_add=0.0\n")
        rc, out, _ = run_cli(
            capsys, "run", data_path("tband12.mtx"), "--energy-config", str(p))
        assert rc == 0
        _, rows = parse_csv(out)
        assert float(rows[0]["w_multiply"]) == 0.0
        assert float(rows[0]["w_accumulate"]) == 0.0
        assert float(rows[0]["w_compare"]) > 0.0
