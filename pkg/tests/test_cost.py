import numpy as np
import pytest

from helpers import TABLE_SHAPES, random_quantized_model, shaped_model
from seqsvm.archsim import ArchConfig, register_census
from seqsvm.cost import (
    CostReport,
    TechConfig,
    calibrate_power,
    compare_parallel,
    compare_storage,
    estimate,
    format_report_table,
    load_tech,
    save_tech,
)
from seqsvm.ddag import build_ddag

# Published measurements of five printed sequential SVM designs:
# (area cm^2, power mW), used to calibrate the default power density.
CALIBRATION_POINTS = [(3.1, 3.6), (4.9, 5.3), (7.8, 8.7), (3.1, 3.5), (3.4, 3.9)]


class TestEstimate:
    @pytest.mark.parametrize("name", sorted(TABLE_SHAPES))
    def test_latency_law(self, name):
        qm, dag, _ = shaped_model(name)
        n, m = TABLE_SHAPES[name]
        for arch in (ArchConfig("mux"), ArchConfig("rom", 1)):
            rep = estimate(qm, dag, arch)
            assert rep.latency_cycles == (n - 1) * (m + 1)

    @pytest.mark.parametrize("name", sorted(TABLE_SHAPES))
    def test_register_bits_match_census(self, name):
        qm, dag, _ = shaped_model(name)
        rep = estimate(qm, dag)
        assert rep.register_bits == register_census(qm, dag)["total"]

    def test_power_is_area_times_density(self):
        qm, dag, _ = shaped_model("cardio")
        tech = TechConfig(power_per_area=2.5)
        rep = estimate(qm, dag, tech=tech)
        assert rep.power_mw == rep.area_cm2 * 2.5

    def test_rom_slots_charge_latency(self):
        qm, dag, _ = shaped_model("pendigits")  # 8-bit words
        tech = TechConfig()
        one = estimate(qm, dag, ArchConfig("rom", 4), tech)
        four = estimate(qm, dag, ArchConfig("rom", 1), tech)
        assert one.access_slots == 1 and four.access_slots == 4
        assert four.latency_seconds == 4 * one.latency_seconds
        assert one.latency_cycles == four.latency_cycles

    def test_monotone_in_param_bits(self):
        lo, _ = random_quantized_model(4, 9, 4, seed=0)
        hi, _ = random_quantized_model(4, 9, 8, seed=0)
        hi.acc_width = lo.acc_width  # isolate the param_bits effect
        dag = build_ddag(4)
        for arch in (ArchConfig("mux"), ArchConfig("rom", 2)):
            a = estimate(lo, dag, arch)
            b = estimate(hi, dag, arch)
            for block in ("storage", "engine", "fsm", "registers", "total"):
                assert b.gate_equivalents[block] >= a.gate_equivalents[block]
            assert b.area_cm2 >= a.area_cm2

    def test_strictly_increasing_in_acc_width(self):
        qm, _ = random_quantized_model(3, 5, 5, seed=1)
        dag = build_ddag(3)
        base = estimate(qm, dag)
        qm.acc_width += 3
        wider = estimate(qm, dag)
        assert wider.gate_equivalents["engine"] > base.gate_equivalents["engine"]
        assert wider.gate_equivalents["registers"] > base.gate_equivalents["registers"]

    def test_unprofiled_rejected(self):
        qm, _ = random_quantized_model(2, 2, 4, seed=0)
        qm.acc_width = 0
        with pytest.raises(ValueError):
            estimate(qm, build_ddag(2))


class TestStorageTradeoff:
    def test_pendigits_rom_beats_mux(self, capsys):
        qm, dag, _ = shaped_model("pendigits")
        both = compare_storage(qm, dag)
        assert both["rom"].area_cm2 < both["mux"].area_cm2
        print(
            f"storage ratio rom/mux = "
            f"{both['rom'].gate_equivalents['storage'] / both['mux'].gate_equivalents['storage']:.2f} "
            f"(published example: 2.4 vs 5.0 cm^2)"
        )

    def test_one_row_model_prefers_mux(self):
        qm, _ = random_quantized_model(2, 1, 4, seed=0)
        both = compare_storage(qm, build_ddag(2))
        assert both["mux"].area_cm2 <= both["rom"].area_cm2  # ADC floor dominates

    def test_identical_latency_when_words_fit_the_adcs(self):
        qm, dag, _ = shaped_model("pendigits")  # 8-bit words, 4 ADCs
        both = compare_storage(qm, dag, adc_count=4)
        assert both["mux"].latency_seconds == both["rom"].latency_seconds
        assert both["mux"].latency_cycles == both["rom"].latency_cycles


class TestParallelBaseline:
    @pytest.mark.parametrize("name", sorted(TABLE_SHAPES))
    def test_parallel_exceeds_sequential(self, name):
        qm, dag, _ = shaped_model(name)
        seq = estimate(qm, dag)
        par = compare_parallel(qm)
        assert par.area_cm2 > seq.area_cm2

    def test_ratio_grows_with_model_size(self):
        small, _ = random_quantized_model(3, 5, 6, seed=2)
        big, _ = random_quantized_model(6, 20, 6, seed=2)
        big.acc_width = small.acc_width
        r_small = compare_parallel(small).area_cm2 / estimate(small, build_ddag(3)).area_cm2
        r_big = compare_parallel(big).area_cm2 / estimate(big, build_ddag(6)).area_cm2
        assert r_big > r_small

    def test_tiny_model_may_prefer_parallel(self, capsys):
        qm, _ = random_quantized_model(2, 1, 4, seed=0)
        seq = estimate(qm, build_ddag(2))
        par = compare_parallel(qm)
        print(f"n=2,m=1: parallel {par.area_cm2:.3f} vs sequential {seq.area_cm2:.3f} cm^2")
        assert par.latency_cycles == 1
        assert par.register_bits == 0


class TestCalibration:
    def test_duplicated_point(self):
        slope = calibrate_power([(3.1, 3.6), (3.1, 3.6)])
        assert slope == pytest.approx(3.6 / 3.1)
        assert round(slope, 3) == 1.161

    def test_five_points_near_default(self):
        slope = calibrate_power(CALIBRATION_POINTS)
        # independent oracle: numpy least squares on the same through-origin fit
        a = np.array([[x] for x, _ in CALIBRATION_POINTS])
        p = np.array([y for _, y in CALIBRATION_POINTS])
        oracle = float(np.linalg.lstsq(a, p, rcond=None)[0][0])
        assert slope == pytest.approx(oracle)
        assert abs(slope - 1.13) <= 0.05

    def test_default_density_within_ten_percent(self):
        density = TechConfig().power_per_area
        for area, power in CALIBRATION_POINTS:
            assert abs(density * area - power) / power <= 0.10

    def test_single_point_rejected(self):
        with pytest.raises(ValueError):
            calibrate_power([(3.1, 3.6)])

    def test_zero_area_rejected(self):
        with pytest.raises(ValueError):
            calibrate_power([(0.0, 1.0), (1.0, 1.0)])


class TestTechConfig:
    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            TechConfig(f_clk=0.0)
        with pytest.raises(ValueError):
            TechConfig(rom_cell_cost=-1.0)

    def test_file_roundtrip(self, tmp_path):
        tech = TechConfig(f_clk=15.0, power_per_area=1.2)
        path = tmp_path / "tech.cfg"
        save_tech(tech, path)
        assert load_tech(path) == tech

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "tech.cfg"
        path.write_text("frobnication=3\n")
        with pytest.raises(ValueError, match="unknown key"):
            load_tech(path)

    def test_comments_and_blanks_ignored(self, tmp_path):
        path = tmp_path / "tech.cfg"
        path.write_text("# comment\n\nf_clk=12.5\n")
        assert load_tech(path).f_clk == 12.5

    def test_bad_line_rejected(self, tmp_path):
        path = tmp_path / "tech.cfg"
        path.write_text("f_clk\n")
        with pytest.raises(ValueError, match="key=value"):
            load_tech(path)


def test_report_table_layout():
    qm, dag, _ = shaped_model("redwine")
    table = format_report_table([("seq", estimate(qm, dag)), ("par", compare_parallel(qm))])
    lines = table.strip().split("\n")
    assert len(lines) == 4  # header, rule, two rows
    assert lines[0].startswith("Design")
    assert lines[2].startswith("seq") and lines[3].startswith("par")
