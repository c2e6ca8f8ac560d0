import json

import pytest

from cptgen.elicit import AnchorSet, build_diagonal_compatibility
from cptgen.engine import generate_cpt
from cptgen.export import export_cpt, import_cpt
from cptgen.model import Distribution, NetworkSpec, ParentSpec, ParentalConfiguration
from support import ANCHOR_ROWS


@pytest.fixture(scope="module")
def efficiency_result(efficiency_doc):
    return generate_cpt(efficiency_doc.spec, efficiency_doc.anchor_set)


def tiny_result():
    spec = NetworkSpec("C", ["no", "yes"], [ParentSpec("Y1", ["a", "b"], 1.0)])
    compat = build_diagonal_compatibility(spec)
    anchors = {
        ParentalConfiguration({"Y1": 0}): Distribution([0.7, 0.3]),
        ParentalConfiguration({"Y1": 1}): Distribution([0.2, 0.8]),
    }
    return spec, generate_cpt(spec, AnchorSet(compat, anchors))


class TestCsv:
    def test_full_table_shape(self, efficiency_result):
        text = export_cpt(efficiency_result, "csv").decode()
        lines = text.strip().split("\n")
        assert len(lines) == 126
        assert lines[0] == "PM,PT,ME,vl,l,a,h,vh"
        assert all(len(line.split(",")) == 8 for line in lines)

    def test_first_row_is_the_low_anchor(self, efficiency_result):
        lines = export_cpt(efficiency_result, "csv").decode().strip().split("\n")
        assert lines[1] == "vl,vl,vl,0.8,0.15,0.03,0.015,0.005"

    def test_single_parent_rows_equal_anchors(self):
        _, result = tiny_result()
        lines = export_cpt(result, "csv").decode().strip().split("\n")
        assert lines == ["Y1,no,yes", "a,0.7,0.3", "b,0.2,0.8"]


class TestJson:
    def test_round_trip_is_byte_identical(self, efficiency_result):
        first = export_cpt(efficiency_result, "json")
        again = export_cpt(import_cpt(first), "json")
        assert first == again

    def test_payload_mirrors_the_table(self, efficiency_result):
        payload = json.loads(export_cpt(efficiency_result, "json"))
        assert payload["child"]["states"] == ["vl", "l", "a", "h", "vh"]
        assert [p["name"] for p in payload["parents"]] == ["PM", "PT", "ME"]
        assert len(payload["rows"]) == 125
        assert payload["rows"][0]["configuration"] == {
            "PM": "vl", "PT": "vl", "ME": "vl"}
        assert tuple(payload["rows"][0]["distribution"]) == ANCHOR_ROWS["vl"]


class TestXmlbif:
    def test_definition_fragment_structure(self, efficiency_result):
        text = export_cpt(efficiency_result, "xmlbif").decode()
        assert text.startswith("<DEFINITION>")
        assert "<FOR>E</FOR>" in text
        assert text.count("<GIVEN>") == 3
        table = text.split("<TABLE>")[1].split("</TABLE>")[0].strip().split("\n")
        assert len(table) == 125
        assert table[0].strip() == "0.8 0.15 0.03 0.015 0.005"

    def test_accepts_long_format_name(self, efficiency_result):
        assert export_cpt(efficiency_result, "xmlbif-fragment") == export_cpt(
            efficiency_result, "xmlbif")


def test_unknown_format_rejected(efficiency_result):
    with pytest.raises(ValueError, match="unknown export format"):
        export_cpt(efficiency_result, "yaml")
