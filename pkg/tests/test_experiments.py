import json
import math

import pytest

from cavity_ramsey.config import PhysicalConfig
from cavity_ramsey.experiments import (
    OBSERVED_REFERENCE_VISIBILITY,
    ScanReport,
    run_fig4,
    run_selftest,
    run_setup1,
    run_setup2,
    run_velocity_scan,
)

CFG = PhysicalConfig()


@pytest.fixture(scope="module")
def setup1_report():
    return run_setup1(config=CFG)


@pytest.fixture(scope="module")
def setup2_report():
    return run_setup2(CFG)


@pytest.fixture(scope="module")
def velocity_report():
    return run_velocity_scan(config=CFG)


class TestScanReport:
    def test_csv_has_header_and_fixed_formatting(self):
        report = ScanReport("demo", ("a", "b"), ((1.0, 1.0 / 3.0),))
        lines = report.to_csv().strip().split("\n")
        assert lines[0] == "a,b"
        assert lines[1] == "1,0.333333333333"

    def test_json_roundtrip(self):
        report = ScanReport("demo", ("a",), ((0.5,),), {"k": 2.0})
        data = json.loads(report.to_json())
        assert data["scenario"] == "demo"
        assert data["rows"] == [[0.5]]
        assert data["meta"]["k"] == 2.0

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            ScanReport("demo", ("a",), ()).render("xml")

    def test_column_accessor(self):
        report = ScanReport("demo", ("a", "b"), ((1.0, 2.0), (3.0, 4.0)))
        assert report.column("b") == [2.0, 4.0]


class TestSetup1:
    def test_vacuum_visibility_exactly_zero(self, setup1_report):
        report = setup1_report
        assert report.rows[0][0] == 0.0
        assert report.rows[0][2] == 0.0

    def test_visibility_non_decreasing(self, setup1_report):
        report = setup1_report
        vs = report.column("visibility")
        assert vs == sorted(vs)

    def test_eta_column_is_scaled_raw(self, setup1_report):
        report = setup1_report
        for row in report.rows:
            assert row[3] == pytest.approx(CFG.eta * row[2], abs=1e-12)

    def test_fringe_attached_for_largest_n(self, setup1_report):
        report = setup1_report
        fringe = report.meta["fringe"]
        assert fringe["n_mean"] == 20.0
        assert abs(fringe["visibility"] - report.rows[-1][2]) < 1e-8

    def test_rejects_negative_n(self):
        with pytest.raises(ValueError):
            run_setup1([-1.0], CFG)


class TestSetup2:
    def test_meta_carries_raw_and_eta_pairs(self, setup2_report):
        report = setup2_report
        m = report.meta
        for key in ("visibility_fringe", "visibility_closed_form",
                    "visibility_thermal", "visibility_zero_temp_oracle"):
            assert key in m and key + "_eta" in m
            assert m[key + "_eta"] == pytest.approx(CFG.eta * m[key], abs=1e-12)

    def test_fringe_probabilities_physical(self, setup2_report):
        report = setup2_report
        p = report.column("p_g")
        assert min(p) >= 0.0 and max(p) <= 1.0

    def test_undamped_limit_is_cos_squared(self):
        cfg = PhysicalConfig(tau_s=1e-12)
        report = run_setup2(cfg, phi_points=17)
        for phi, p in report.rows:
            assert p == pytest.approx(math.cos(phi / 2.0) ** 2, abs=1e-6)

    def test_phi_points_floor(self):
        with pytest.raises(ValueError):
            run_setup2(CFG, phi_points=8)


class TestFig4:
    def test_columns_and_determinism(self):
        grid = [0.0, 0.25, 0.5]
        r1 = run_fig4(grid, CFG)
        r2 = run_fig4(grid, CFG)
        assert r1.columns == ("T", "v_zero_temp", "v_zero_temp_oracle", "v_thermal")
        assert r1.to_csv() == r2.to_csv()
        assert r1.to_json() == r2.to_json()

    def test_zero_temp_above_thermal(self):
        report = run_fig4([0.1, 0.5, 1.0], CFG)
        for _, v_zero, v_oracle, v_thermal in report.rows:
            assert v_zero > v_thermal
            assert v_oracle > v_thermal

    def test_rejects_negative_wait(self):
        with pytest.raises(ValueError):
            run_fig4([-0.1], CFG)


class TestVelocityScan:
    def test_reference_fixed_point_exact(self, velocity_report):
        report = velocity_report
        row = next(r for r in report.rows if r[0] == CFG.v_ref_mps)
        assert row[3] == OBSERVED_REFERENCE_VISIBILITY

    def test_wait_scales_inversely(self, velocity_report):
        report = velocity_report
        for v, T, *_ in report.rows:
            assert T == pytest.approx(CFG.T * CFG.v_ref_mps / v, abs=1e-15)

    def test_predictions_monotone_in_velocity(self, velocity_report):
        report = velocity_report
        rows = sorted(report.rows, key=lambda r: r[0])
        preds = [r[3] for r in rows]
        assert preds == sorted(preds)

    def test_renormalization_factor_reported(self, velocity_report):
        report = velocity_report
        r = report.meta["renormalization_r"]
        assert r == pytest.approx(
            OBSERVED_REFERENCE_VISIBILITY / report.rows[0][2], abs=1e-12)

    def test_rejects_nonpositive_velocity(self):
        with pytest.raises(ValueError):
            run_velocity_scan([0.0], CFG)


class TestSelftest:
    def test_all_checks_pass(self):
        report = run_selftest(CFG)
        assert report.meta["all_pass"]
        assert all(row[-1] == "pass" for row in report.rows)
        assert len(report.rows) >= 5
