"""
Worked Example Tests
Data-centre scenario recomputed against its published figures
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from core.scenario_parser import load_scenario
from core.worked_example import example_document, format_comparison, run_worked_example


@pytest.fixture(scope="module")
def rows():
    return {row.quantity: row for row in run_worked_example()}


class TestWorkedExample:
    def test_embedded_scenario_parses(self):
        doc = example_document()
        asset = doc.assets[0]
        assert asset.id == "datacentre"
        assert asset.M0 == 1e7
        assert asset.capability_value == 2.5e8
        assert asset.model.r_eq == pytest.approx(5.7078e-5, rel=1e-4)
        assert doc.process.kind == "retaliation"

    def test_matches_fixture_file(self, fixtures_dir):
        embedded = example_document()
        on_disk = load_scenario(str(fixtures_dir / 'worked_datacentre.yaml'))
        assert on_disk.assets == embedded.assets
        assert on_disk.shocks == embedded.shocks

    @pytest.mark.parametrize("quantity", [
        "r_eq hourly",
        "r(1 h)",
        "dM(1 h)",
        "capability value over TK",
        "hourly annuity",
        "VA recovery threshold",
        "t_half (VA = 0)",
        "simulated t_half at dt=0.001 h",
    ])
    def test_reproduced_figures(self, rows, quantity):
        assert rows[quantity].status == "MATCH"

    def test_first_hour_values(self, rows):
        assert rows["r(1 h)"].computed == 1.0
        assert rows["dM(1 h)"].computed == pytest.approx(9999524.0, rel=1e-12)
        assert rows["hourly annuity"].computed == pytest.approx(115740.74, abs=0.01)
        assert rows["t_half (VA = 0)"].computed == pytest.approx(0.5 / 1.2)
        assert rows["VA recovery threshold"].computed == pytest.approx(1.2 * 2160.0)

    def test_investment_gap_reported(self, rows):
        assert rows["dK(1 h), annuity K(0)"].status == "DISCREPANCY"
        assert rows["dK(1 h), total-value K(0)"].status == "DISCREPANCY"
        assert rows["K(0) V Beta_K S reading"].status == "NOTE"
        assert rows["Beta_K"].computed == pytest.approx(2030.17, rel=1e-5)

    def test_table_format(self):
        table = format_comparison(run_worked_example())
        lines = table.splitlines()
        assert lines[0].startswith("quantity")
        assert any("MATCH" in line for line in lines[2:])
        assert any("DISCREPANCY" in line for line in lines[2:])
        assert table.endswith("\n")
