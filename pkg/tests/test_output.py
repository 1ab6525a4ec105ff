"""Tests for the result formatters."""

import json

import pytest
from wedgecasimir.output import (
    SCHEMA, ResultTable, fmt_csv, fmt_json, fmt_table, fmt_value, render,
)


def _table():
    table = ResultTable(("p", "r", "thetatheta", "unit"), meta={"command": "tensor"})
    table.add(2.0, 1.0, -0.0063325739389396521, "length^-4")
    table.add(3.0, 0.5, -0.36023943195839424, "length^-4")
    return table


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

class TestFmtValue:
    def test_float_digits(self):
        assert fmt_value(1.0 / 3.0) == "0.333333333333"
        assert fmt_value(1.0 / 3.0, 4) == "0.3333"

    def test_bool_lowercase(self):
        assert fmt_value(True) == "true"
        assert fmt_value(False) == "false"

    def test_int_and_text_unchanged(self):
        assert fmt_value(7) == "7"
        assert fmt_value("dyn/cm^2") == "dyn/cm^2"


class TestResultTable:
    def test_add_checks_width(self):
        table = ResultTable(("a", "b"))
        with pytest.raises(ValueError):
            table.add(1.0)

    def test_records(self):
        assert _table().records()[0]["p"] == 2.0


# ---------------------------------------------------------------------------
# Formatters
# ---------------------------------------------------------------------------

class TestFmtCsv:
    def test_header_and_rows(self):
        lines = fmt_csv(_table()).splitlines()
        assert lines[0] == "p,r,thetatheta,unit"
        assert lines[1] == "2,1,-0.00633257393894,length^-4"
        assert len(lines) == 3

    def test_deterministic(self):
        assert fmt_csv(_table()) == fmt_csv(_table())


class TestFmtJson:
    def test_schema_and_rows(self):
        doc = json.loads(fmt_json(_table()))
        assert doc["meta"]["schema"] == SCHEMA
        assert doc["meta"]["command"] == "tensor"
        assert doc["rows"][1]["thetatheta"] == pytest.approx(-0.360239431958, rel=1e-12)

    def test_keys_sorted_and_newline_terminated(self):
        text = fmt_json(_table())
        assert text.endswith("}\n")
        assert text.index('"meta"') < text.index('"rows"')

    def test_nested_meta_rounded(self):
        table = ResultTable(("x",), meta={"splittings": [0.1 + 0.2]})
        doc = json.loads(fmt_json(table))
        assert doc["meta"]["splittings"] == [0.3]


class TestFmtTable:
    def test_aligned_columns(self):
        lines = fmt_table(_table()).splitlines()
        assert len(lines) == 4
        assert set(lines[1]) <= {"-", " "}
        assert len({len(line) for line in lines}) == 1

    def test_four_digits(self):
        assert "-0.006333" in fmt_table(_table())


class TestRender:
    @pytest.mark.parametrize("fmt", ["csv", "json", "table"])
    def test_known_formats(self, fmt):
        assert render(_table(), fmt)

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="unknown output format"):
            render(_table(), "xml")
