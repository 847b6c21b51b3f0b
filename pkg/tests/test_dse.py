import pytest

from camsparse import (
    AcceleratorConfig,
    CMOS,
    ConfigError,
    CsrMatrix,
    EnergyConstants,
    LITERATURE_BASELINES,
    RESISTIVE,
    SparseVector,
    TechParams,
    ValidationError,
    area_estimate,
    area_from_dims,
    bandwidth_sweep,
    constants_text,
    load_constants,
    modules_from_bandwidth,
    parse_constants,
    peak_performance,
    power_estimate,
    spmspv,
)
from conftest import full_utilization_workload

TECH = TechParams()


def cfg(k=15, h=512, w=32, **kw):
    return AcceleratorConfig(modules=k, array_height=h, index_bits=w, **kw)


class TestModulesFromBandwidth:
    def test_high_end_point(self):
        assert modules_from_bandwidth(250e9, 2e9, 32, 32) == 15

    def test_formula(self):
        assert modules_from_bandwidth(128e9, 2e9, 32, 32) == 8

    def test_starved_bandwidth_gives_zero(self):
        assert modules_from_bandwidth(1e9, 2e9, 32, 32) == 0

    def test_rejects_nonpositive(self):
        for args in [(0, 2e9, 32, 32), (1e9, 0, 32, 32), (1e9, 2e9, 0, 32), (1e9, 2e9, 32, -1)]:
            with pytest.raises(ValidationError):
                modules_from_bandwidth(*args)

    def test_monotone_in_bandwidth(self):
        ks = [modules_from_bandwidth(bw * 1e9, 2e9, 32, 32) for bw in range(1, 400, 7)]
        assert all(a <= b for a, b in zip(ks, ks[1:]))

    def test_non_increasing_in_clock_and_width(self):
        assert modules_from_bandwidth(250e9, 4e9, 32, 32) <= modules_from_bandwidth(250e9, 2e9, 32, 32)
        assert modules_from_bandwidth(250e9, 2e9, 64, 32) <= modules_from_bandwidth(250e9, 2e9, 32, 32)


class TestPeakPerformance:
    def test_flops_point(self):
        flops, _ = peak_performance(15, 2**20, 2e9)
        assert flops == 6.0e10

    def test_index_ops_point(self):
        _, index_ops = peak_performance(15, 2**20, 2e9)
        assert abs(index_ops - 3.0e16) <= 0.05 * 3.0e16

    def test_unit_case(self):
        assert peak_performance(1, 1, 1.0) == (2.0, 1.0)

    def test_degenerate_zero_modules(self):
        assert peak_performance(0, 512, 2e9) == (0.0, 0.0)

    def test_linear_scaling(self):
        f1, i1 = peak_performance(3, 128, 1e9)
        f2, i2 = peak_performance(6, 128, 1e9)
        f3, i3 = peak_performance(3, 256, 1e9)
        f4, i4 = peak_performance(3, 128, 2e9)
        assert (f2, i2) == (2 * f1, 2 * i1)
        assert (f3, i3) == (f1, 2 * i1)
        assert (f4, i4) == (2 * f1, 2 * i1)

    def test_rejects_bad_height(self):
        with pytest.raises(ValidationError):
            peak_performance(1, 0, 1e9)


class TestArea:
    def full_cfg(self):
        return cfg(k=15, h=2**20, w=32)

    def test_cmos_calibration(self):
        area = area_estimate(self.full_cfg(), TECH, CMOS)
        assert 90.0 * 0.8 <= area <= 90.0 * 1.2

    def test_resistive_calibration(self):
        area = area_estimate(self.full_cfg(), TECH, RESISTIVE)
        assert 3.0 * 0.8 <= area <= 3.0 * 1.2

    def test_resistive_to_cmos_ratio(self):
        c = area_estimate(self.full_cfg(), TECH, CMOS)
        r = area_estimate(self.full_cfg(), TECH, RESISTIVE)
        assert c / r >= 25.0

    def test_degenerate_no_modules(self):
        assert area_from_dims(0, 512, 32, 32, TECH, CMOS) == TECH.accumulator_area_mm2

    @pytest.mark.parametrize("k,h,w", [(1, 8, 4), (3, 64, 16), (15, 512, 32), (40, 2**18, 24)])
    def test_resistive_always_smaller(self, k, h, w):
        assert area_from_dims(k, h, w, 32, TECH, RESISTIVE) < area_from_dims(k, h, w, 32, TECH, CMOS)

    def test_stacked_layers_shrink_cam(self):
        tall = TechParams(recam_layers=4)
        assert (area_from_dims(4, 512, 32, 32, tall, RESISTIVE)
                < area_from_dims(4, 512, 32, 32, TECH, RESISTIVE))

    def test_unknown_style(self):
        with pytest.raises(ConfigError):
            area_estimate(self.full_cfg(), TECH, "finfet")


class TestPower:
    def test_full_utilization_stays_under_calibration_point(self):
        A, B = full_utilization_workload()
        c = cfg(k=15, h=512, w=32)
        _, metrics = spmspv(A, B, c)
        power = power_estimate(c, metrics)
        assert power.accelerator_w <= 0.3
        # the datapath (multiply + accumulate) dominates the on-chip total
        assert power.multiply_w + power.accumulate_w > 0.5 * power.accelerator_w

    def test_power_efficiency_beats_gpu_baseline(self):
        A, B = full_utilization_workload()
        c = cfg(k=15, h=512, w=32)
        _, metrics = spmspv(A, B, c)
        power = power_estimate(c, metrics)
        gflops = metrics.flops / metrics.wall_seconds(c.clock_hz) / 1e9
        assert gflops / power.accelerator_w >= 10 * LITERATURE_BASELINES["gpu_spmv_high"]

    def test_empty_workload_draws_nothing(self):
        c = cfg()
        _, metrics = spmspv(CsrMatrix.empty(4, 8), SparseVector(8), c)
        power = power_estimate(c, metrics)
        assert power.total_w == 0.0
        assert power.compare_w == power.ram_read_w == power.write_w == 0.0
        assert power.multiply_w == power.accumulate_w == power.memory_w == 0.0

    def test_doubling_height_doubles_compare_power(self):
        A, B = full_utilization_workload()
        low = cfg(k=15, h=512, w=32)
        high = cfg(k=15, h=1024, w=32)
        _, m_low = spmspv(A, B, low)
        _, m_high = spmspv(A, B, high)
        assert m_low.cycles == m_high.cycles  # same utilization, single pass each
        p_low = power_estimate(low, m_low)
        p_high = power_estimate(high, m_high)
        assert p_high.compare_w == pytest.approx(2 * p_low.compare_w)

    def test_categories_sum_to_total(self):
        A, B = full_utilization_workload(lanes=4, n_rows=8, groups_per_row=5, n_cols=64)
        c = cfg(k=4, h=32, w=6)
        _, metrics = spmspv(A, B, c)
        p = power_estimate(c, metrics)
        parts = [p.compare_w, p.ram_read_w, p.write_w, p.multiply_w, p.accumulate_w, p.memory_w]
        assert all(x >= 0 for x in parts)
        assert p.total_w == pytest.approx(sum(parts))
        assert p.accelerator_w == pytest.approx(sum(parts[:-1]))

    def test_rejects_zero_wall_time(self):
        c = cfg()
        _, metrics = spmspv(CsrMatrix.empty(2, 4), SparseVector(4), c)
        with pytest.raises(ValidationError):
            power_estimate(c, metrics, wall_seconds=0.0)


class TestBandwidthSweep:
    def test_contains_design_point(self):
        points = bandwidth_sweep([bw * 1e9 for bw in range(10, 501, 10)], cfg(h=2**20))
        hit = [p for p in points if p.bandwidth_bytes_per_s == 250e9]
        assert len(hit) == 1
        assert hit[0].modules == 15
        assert hit[0].peak_flops_per_s == 6.0e10

    def test_stair_steps_by_at_most_one(self):
        points = bandwidth_sweep([bw * 1e9 for bw in range(10, 501, 10)], cfg())
        deltas = {b.modules - a.modules for a, b in zip(points, points[1:])}
        assert deltas <= {0, 1}

    def test_modules_non_decreasing(self):
        points = bandwidth_sweep([bw * 1e9 for bw in range(1, 400, 13)], cfg())
        ks = [p.modules for p in points]
        assert ks == sorted(ks)

    def test_single_point(self):
        points = bandwidth_sweep([64e9], cfg())
        assert len(points) == 1
        assert points[0].modules == modules_from_bandwidth(64e9, 2e9, 32, 32)

    def test_empty_range_rejected(self):
        with pytest.raises(ValidationError):
            bandwidth_sweep([], cfg())


class TestConstantsFile:
    def test_round_trip(self, tmp_path):
        defaults = (EnergyConstants(), TechParams())
        energy, tech = load_constants_from_text(tmp_path, constants_text(*defaults))
        assert energy == defaults[0]
        assert tech == defaults[1]

    def test_overrides_and_comments(self, tmp_path):
        text = "# calibration overrides\ne_mul = 2.5e-12\nfeature_nm=16\nrecam_layers=2\n"
        energy, tech = load_constants_from_text(tmp_path, text)
        assert energy.e_mul == 2.5e-12
        assert energy.e_add == 1e-12  # untouched default
        assert tech.feature_nm == 16.0
        assert tech.recam_layers == 2

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_constants("voltage=1.2")

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            parse_constants("e_mul=three")

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            parse_constants("e_mul 3e-12")


def load_constants_from_text(tmp_path, text):
    path = tmp_path / "constants.cfg"
    path.write_text(text)
    return load_constants(path)
