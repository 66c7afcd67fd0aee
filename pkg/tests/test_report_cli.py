import json
import math

import jsonschema
import pytest
from click.testing import CliRunner

from nctorus.cli import main
from nctorus.report import CATALOG_SCHEMA, REPORT_SCHEMA, Check, ScenarioReport
from nctorus.scenarios import REGISTRY, ScenarioConfig, UnknownScenarioError, list_scenarios, run_scenario

SCENARIOS = {
    "gb-conformal-2t", "gb-diag-ef1-commuting", "series-telescoping", "gb-nondiag-t-sweep", "gb-hermitian-alpha",
    "eh-4t-conformal", "eh-4t-partial-diag", "eh-fk-functional", "eh-gradient-check", "curvature-modular-vs-direct",
    "dilaton-curvature", "identities-suite", "gb-failure-order4", "powers-rieffel-obstruction",
}


def test_registry_is_complete():
    assert set(REGISTRY) == SCENARIOS
    catalog = list_scenarios()
    jsonschema.validate(catalog, CATALOG_SCHEMA)
    assert all(entry["anchor"] for entry in catalog)


def test_check_json_spells_out_non_finite():
    obj = Check("x", math.inf, math.nan, False, "anchor").to_json_obj()
    assert obj["value"] == "inf" and obj["tolerance"] == "nan"


def test_empty_report_does_not_pass():
    assert not ScenarioReport("s", "d", "a", {}, {}).passed


@pytest.mark.parametrize("name", ["series-telescoping", "powers-rieffel-obstruction"])
def test_report_schema_and_digest_determinism(name):
    first = run_scenario(ScenarioConfig(name))
    second = run_scenario(ScenarioConfig(name))
    jsonschema.validate(json.loads(first.to_json()), REPORT_SCHEMA)
    assert first.digest() == second.digest()
    assert json.loads(first.to_json())["digest"] == first.digest()
    assert first.to_csv().splitlines()[0].startswith("scenario,name,value")


def test_config_validation():
    with pytest.raises(UnknownScenarioError):
        ScenarioConfig("no-such-scenario")
    with pytest.raises(ValueError):
        ScenarioConfig("series-telescoping", theta=1.5)
    with pytest.raises(ValueError):
        ScenarioConfig("series-telescoping", derivation_scale="3pi")


def test_cli_list():
    result = CliRunner().invoke(main, ["list"])
    assert result.exit_code == 0
    names = {line.split()[0] for line in result.output.splitlines() if line and not line.startswith(" ")}
    assert names == SCENARIOS
    as_json = CliRunner().invoke(main, ["list", "--json"])
    assert len(json.loads(as_json.output)) == 14


def test_cli_unknown_scenario():
    result = CliRunner().invoke(main, ["run", "nope"])
    assert result.exit_code == 2
    assert "unknown scenario" in result.output


def test_cli_bad_theta():
    result = CliRunner().invoke(main, ["run", "series-telescoping", "--theta", "2"])
    assert result.exit_code == 2


def test_cli_run_writes_reports(tmp_path):
    out, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
    result = CliRunner().invoke(main, ["run", "powers-rieffel-obstruction", "--out", str(out), "--csv", str(csv_path)])
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["passed"] and report["environment"]["config"]["scenario"] == "powers-rieffel-obstruction"
    assert csv_path.read_text().count("\n") == len(report["checks"]) + 1


def test_cli_exit_status_reflects_failures():
    # the printed value for U+U^-1+V+V^-1 disagrees with the computed obstruction
    result = CliRunner().invoke(main, ["run", "gb-failure-order4"])
    assert result.exit_code == 1
    assert "FAIL" in result.output


def test_cli_two_pi_scale(tmp_path):
    out = tmp_path / "r.json"
    result = CliRunner().invoke(main, ["run", "series-telescoping", "--scale", "2pi", "--out", str(out)])
    assert result.exit_code == 0
    assert json.loads(out.read_text())["environment"]["conventions"]["derivation_scale"]
