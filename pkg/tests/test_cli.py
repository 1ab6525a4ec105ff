"""Tests for the command-line interface."""

import json
import math

import pytest
from unittest.mock import patch

from wedgecasimir.cli import build_parser, main, parse_length, parse_p_values, parse_values
from wedgecasimir.errors import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, UsageError
from wedgecasimir.geometry import UnitSystem
from wedgecasimir.validate import CheckResult


@pytest.fixture(autouse=True)
def tmp_config_dir(tmp_path):
    with patch("wedgecasimir.config.CONFIG_DIR", tmp_path), \
         patch("wedgecasimir.config.CONFIG_FILE", tmp_path / "config.json"):
        yield tmp_path


def _json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

class TestParseLength:
    def test_bare_number(self):
        assert parse_length("2.5", UnitSystem.NATURAL) == 2.5

    def test_suffix_in_cgs(self):
        assert parse_length("3mm", UnitSystem.CGS) == pytest.approx(0.3)
        assert parse_length("1cm", UnitSystem.CGS) == pytest.approx(1.0)
        assert parse_length("2um", UnitSystem.SI) == pytest.approx(2e-6)
        assert parse_length("5nm", UnitSystem.SI) == pytest.approx(5e-9)

    def test_suffix_needs_dimensional_units(self):
        with pytest.raises(UsageError):
            parse_length("1cm", UnitSystem.NATURAL)

    @pytest.mark.parametrize("text", ["abc", "inf", "cm"])
    def test_rejects_garbage(self, text):
        with pytest.raises(UsageError):
            parse_length(text, UnitSystem.CGS)


class TestParseValues:
    def test_list(self):
        assert parse_values("0.5,1,2") == [0.5, 1.0, 2.0]

    def test_range_is_inclusive(self):
        assert parse_values("1:2:3") == [1.0, 1.5, 2.0]

    @pytest.mark.parametrize("text", ["1:2", "1:2:x", "1:2:0", ",", "", "2,1", "1,1", "2:1:3"])
    def test_bad_range(self, text):
        with pytest.raises(UsageError):
            parse_values(text)

    def test_p_values_must_be_integral(self):
        assert parse_p_values("2:6:5") == [2, 3, 4, 5, 6]
        with pytest.raises(UsageError):
            parse_p_values("2,2.5")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

class TestTensorCommand:
    def test_closed_form_json(self, capsys):
        code, doc = _json(capsys, "tensor", "--p", "3", "--r", "1")
        assert code == EXIT_OK
        row = doc["rows"][0]
        c = 20 * 8 / (720 * math.pi ** 2)
        assert row["rr"] == pytest.approx(c, rel=1e-11)
        assert row["thetatheta"] == pytest.approx(-3 * c, rel=1e-11)
        assert doc["meta"]["route"] == "closed"
        assert doc["meta"]["schema"] == "wedgecasimir/1"

    def test_images_oracle_reports_both_and_deviation(self, capsys):
        code, doc = _json(capsys, "tensor", "--p", "2", "--r", "1", "--oracle", "images")
        assert code == EXIT_OK
        row = doc["rows"][0]
        c = 15 * 3 / (720 * math.pi ** 2)
        assert row["thetatheta"] == pytest.approx(-3 * c, rel=1e-11)
        assert row["oracle_thetatheta"] == pytest.approx(-3 * c, rel=1e-6)
        assert {"oracle_rr", "oracle_zz", "oracle_w", "oracle_trace"} <= set(row)
        assert 0.0 <= row["max_rel_deviation"] < 1e-6

    def test_closed_form_has_no_oracle_columns(self, capsys):
        _, doc = _json(capsys, "tensor", "--p", "2", "--r", "1")
        assert "max_rel_deviation" not in doc["rows"][0]

    def test_medium_flags(self, capsys):
        _, doc = _json(capsys, "tensor", "--p", "2", "--r", "1", "--eps", "4")
        c = 15 * 3 / (720 * math.pi ** 2)
        assert doc["rows"][0]["rr"] == pytest.approx(c / 2, rel=1e-11)
        assert doc["meta"]["eps"] == 4.0

    def test_table_is_default(self, capsys):
        assert main(["tensor", "--p", "2", "--r", "1"]) == EXIT_OK
        assert "thetatheta" in capsys.readouterr().out.splitlines()[0]

    def test_alpha_rejected_for_oracle(self, capsys):
        code = main(["tensor", "--alpha", "0.5", "--r", "1", "--oracle", "images"])
        assert code == EXIT_USAGE
        assert "--alpha" in capsys.readouterr().err

    def test_p_above_p_max_rejected_for_oracle(self, tmp_config_dir):
        (tmp_config_dir / "config.json").write_text(json.dumps({"p_max": 4}))
        assert main(["tensor", "--p", "5", "--r", "1", "--oracle", "images"]) == EXIT_USAGE

    def test_bad_p(self):
        assert main(["tensor", "--p", "0", "--r", "1"]) == EXIT_USAGE


class TestForceCommand:
    def test_narrow_wedge_in_cgs(self, capsys):
        code, doc = _json(capsys, "force", "--alpha", "1e-4", "--r", "1cm", "--units", "cgs")
        assert code == EXIT_OK
        row = doc["rows"][0]
        assert row["sigma"] == pytest.approx(0.0043, rel=0.05)
        assert row["unit"] == "dyn/cm^2"

    def test_azimuthal_normalization(self, capsys):
        _, plain = _json(capsys, "force", "--p", "4", "--r", "1")
        _, azimuthal = _json(capsys, "force", "--p", "4", "--r", "1", "--normalization", "azimuthal")
        assert azimuthal["rows"][0]["sigma"] == pytest.approx(3 * plain["rows"][0]["sigma"])

    def test_csv(self, capsys):
        assert main(["force", "--p", "2", "--r", "1", "--format", "csv"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == "p,r,sigma,unit"

    @pytest.mark.parametrize("p", [2, 3, 6])
    def test_azimuthal_force_is_minus_thetatheta(self, capsys, p):
        _, force = _json(capsys, "force", "--p", str(p), "--r", "1", "--normalization", "azimuthal")
        _, tensor = _json(capsys, "tensor", "--p", str(p), "--r", "1")
        assert force["rows"][0]["sigma"] == pytest.approx(-tensor["rows"][0]["thetatheta"], rel=1e-11)

    def test_meta_carries_skin_depth_caveat(self, capsys):
        _, doc = _json(capsys, "force", "--p", "2", "--r", "1")
        assert "skin depth" in doc["meta"]["note"]


class TestPolderCommand:
    def test_closed_form_single_plate(self, capsys):
        code, doc = _json(capsys, "polder", "--p", "1", "--r", "2", "--theta-fraction", "0.5")
        assert code == EXIT_OK
        expected = -3.0 / (32 * math.pi ** 2 * 2.0 ** 4)
        assert doc["rows"][0]["u"] == pytest.approx(expected, rel=1e-11)

    def test_point_on_wall(self, capsys):
        assert main(["polder", "--p", "2", "--r", "1", "--theta", "0"]) == EXIT_USAGE

    def test_r_theta_grid_in_input_order(self, capsys):
        code, doc = _json(capsys, "polder", "--p", "2", "--r", "1,2", "--theta-fraction", "0.25,0.5")
        assert code == EXIT_OK
        alpha = math.pi / 2
        assert [row["r"] for row in doc["rows"]] == [1, 1, 2, 2]
        thetas = [row["theta"] for row in doc["rows"]]
        assert thetas == pytest.approx([0.25 * alpha, 0.5 * alpha] * 2)
        assert doc["rows"][2]["u"] == pytest.approx(doc["rows"][0]["u"] / 16, rel=1e-11)

    def test_midplane_has_no_transverse_force(self, capsys):
        _, doc = _json(capsys, "polder", "--p", "3", "--r", "1", "--theta-fraction", "0.3,0.5")
        off, mid = doc["rows"]
        assert mid["force_theta"] == pytest.approx(0.0, abs=1e-12)
        assert abs(off["force_theta"]) > 1e-3

    def test_theta_range_in_radians(self, capsys):
        _, doc = _json(capsys, "polder", "--p", "2", "--r", "1", "--theta", "0.2:1.2:3")
        assert [row["theta"] for row in doc["rows"]] == pytest.approx([0.2, 0.7, 1.2])

    def test_oracle_reports_both_and_deviation(self, capsys):
        code, doc = _json(capsys, "polder", "--p", "2", "--r", "1", "--oracle", "images")
        assert code == EXIT_OK
        row = doc["rows"][0]
        assert row["u_oracle"] == pytest.approx(row["u"], rel=1e-6)
        assert 0.0 <= row["max_rel_deviation"] < 1e-6


class TestStringCommand:
    def test_from_g_mu(self, capsys):
        code, doc = _json(capsys, "string", "--g-mu", "0.125", "--r", "1")
        assert code == EXIT_OK
        assert doc["rows"][0]["beta"] == pytest.approx(2.0)

    def test_integral_beta_compared_with_wedge(self, capsys):
        code, doc = _json(capsys, "string", "--beta", "3", "--r", "1")
        assert code == EXIT_OK
        row = doc["rows"][0]
        c = 20 * 8 / (720 * math.pi ** 2)
        assert row["wedge_thetatheta"] == pytest.approx(-3 * c, rel=1e-11)
        assert row["wedge_thetatheta"] == pytest.approx(row["thetatheta"], rel=1e-11)
        assert row["max_rel_deviation"] <= 1e-11
        assert doc["meta"]["wedge_p"] == 3

    def test_wedge_in_medium_scaled_by_index(self, capsys):
        _, doc = _json(capsys, "string", "--beta", "2", "--r", "1", "--eps", "4")
        assert doc["rows"][0]["max_rel_deviation"] <= 1e-11

    def test_fractional_beta_has_no_comparison(self, capsys):
        _, doc = _json(capsys, "string", "--beta", "2.5", "--r", "1")
        assert "max_rel_deviation" not in doc["rows"][0]
        assert "wedge_p" not in doc["meta"]

    def test_needs_exactly_one_parameter(self):
        assert main(["string", "--r", "1"]) == EXIT_USAGE
        assert main(["string", "--beta", "2", "--g-mu", "0.1", "--r", "1"]) == EXIT_USAGE


class TestSweepCommand:
    def test_rows_in_grid_order(self, capsys):
        code, doc = _json(capsys, "sweep", "force", "--p", "2:4:3", "--r", "1,2", "--workers", "3")
        assert code == EXIT_OK
        points = [(row["p"], row["r"]) for row in doc["rows"]]
        assert points == [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2)]

    def test_force_has_no_oracle(self):
        assert main(["sweep", "force", "--p", "2", "--r", "1", "--oracle", "images"]) == EXIT_USAGE

    def test_tensor_oracle_sweep(self, capsys):
        code, doc = _json(capsys, "sweep", "tensor", "--p", "2,3", "--r", "1", "--oracle", "images")
        assert code == EXIT_OK
        assert len(doc["rows"]) == 2
        assert all(row["max_rel_deviation"] < 1e-6 for row in doc["rows"])

    def test_polder_sweep_covers_angles(self, capsys):
        code, doc = _json(capsys, "sweep", "polder", "--p", "2,3", "--r", "1",
                          "--theta-fraction", "0.25,0.5")
        assert code == EXIT_OK
        assert [row["p"] for row in doc["rows"]] == [2, 2, 3, 3]
        thetas = [row["theta"] for row in doc["rows"]]
        assert thetas == pytest.approx([math.pi / 8, math.pi / 4, math.pi / 12, math.pi / 6])


class TestValidateCommand:
    def test_selected_checks_pass(self, capsys):
        code, doc = _json(capsys, "validate", "--only", "wall_force", "--only", "trig_sums")
        assert code == EXIT_OK
        assert [row["name"] for row in doc["rows"]] == ["wall_force", "trig_sums"]
        assert all(row["passed"] for row in doc["rows"])
        assert doc["meta"]["failed"] == 0

    def test_failed_check_exits_numerical(self, capsys):
        failing = CheckResult("wall_force", 1.0, 0.05, False)
        with patch("wedgecasimir.cli.run_checks", return_value=[failing]):
            code = main(["validate", "--only", "wall_force"])
        assert code == EXIT_NUMERICAL
        assert "false" in capsys.readouterr().out


class TestUsage:
    def test_missing_subcommand(self, capsys):
        assert main([]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_missing_required_option(self):
        assert main(["tensor", "--p", "2"]) == EXIT_USAGE

    def test_unknown_format(self):
        assert main(["tensor", "--p", "2", "--r", "1", "--format", "xml"]) == EXIT_USAGE

    def test_bad_config_file(self, tmp_config_dir):
        (tmp_config_dir / "config.json").write_text("{")
        assert main(["tensor", "--p", "2", "--r", "1"]) == EXIT_USAGE

    def test_empty_r_list(self):
        assert main(["sweep", "force", "--p", "2", "--r", ","]) == EXIT_USAGE

    def test_decreasing_r_list(self):
        assert main(["polder", "--p", "2", "--r", "2,1"]) == EXIT_USAGE

    def test_workers_must_be_positive(self):
        assert main(["sweep", "force", "--p", "2", "--r", "1", "--workers", "0"]) == EXIT_USAGE

    def test_epilog_lists_exit_codes(self):
        epilog = build_parser().epilog
        assert f"{EXIT_USAGE} usage or configuration error" in epilog
        assert f"{EXIT_NUMERICAL} numerical failure" in epilog

    def test_logging_hook_receives_level(self):
        seen = []
        main(["tensor", "--p", "2", "--r", "1", "--loglevel", "DEBUG"], setup_logging=seen.append)
        assert seen == ["DEBUG"]
