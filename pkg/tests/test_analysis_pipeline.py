"""Pipeline staging, rule findings, and artifact construction."""

import json

import pytest

from conftest import RULES
from disreqc.analysis_pipeline import (
    AssociationTable,
    FormalizationRow,
    FormalizationTable,
    ValidationFinding,
    finding_to_json,
    finding_to_text,
    run_pipeline,
)
from disreqc.goal_model import SourceLocation
from disreqc.requirements_dsl import parse

STAGES = (
    "DiagnosisSID",
    "RecenseBesomsSID",
    "AssocieButStra-ButTact",
    "AssocieButTact-ButInfo",
    "FormaliseButInfo",
)

# fixture stem -> (finding code, number of stages that get to run)
RULE_CASES = {
    "e000": ("E000", 1),
    "e002": ("E002", 2),
    "e003": ("E003", 2),
    "e004": ("E004", 3),
    "e005": ("E005", 4),
    "e006": ("E006", 4),
    "e007": ("E007", 3),
    "e008": ("E008", 5),
    "e009": ("E009", 5),
    "e011": ("E011", 3),
    "w001": ("W001", 5),
    "w002": ("W002", 5),
    "w003": ("W003", 5),
}


def run_fixture(stem):
    path = RULES / f"{stem}.dis"
    result = parse(path.read_text(encoding="utf-8"), filename=str(path))
    assert result.model is not None, stem
    return run_pipeline(result.model)


def test_retail_runs_clean(retail_outcome):
    assert retail_outcome.stages_run == STAGES
    assert retail_outcome.findings == ()
    assert retail_outcome.ok
    assert retail_outcome.errors() == ()
    assert retail_outcome.warnings() == ()


def test_retail_artifacts_present(retail_outcome, retail_model):
    assert retail_outcome.diagnosis == retail_model.diagnosis
    assert retail_outcome.usecase is not None
    assert retail_outcome.assoc_st is not None
    assert retail_outcome.assoc_ti is not None
    assert retail_outcome.formalization is not None


def test_retail_usecase_edges(retail_outcome):
    edges = retail_outcome.usecase.edges
    assert edges == tuple(sorted(edges))
    assert ("Sales director", "increase_revenue") in edges
    assert ("Operations manager", "monthly_amount") in edges
    assert len(edges) == 10
    assert all(actor != "Decision platform" for actor, _ in edges)


def test_retail_association_strategic_tactical(retail_outcome):
    assert retail_outcome.assoc_st == (
        AssociationTable(
            activity="Marketing",
            context="Campaigns",
            level="strategic-tactical",
            rows=(("improve_campaigns", ("campaign_tracking",)),),
        ),
        AssociationTable(
            activity="Sales",
            context="In-store sales",
            level="strategic-tactical",
            rows=(("increase_revenue", ("sales_by_season", "sales_by_store")),),
        ),
    )


def test_retail_association_tactical_informational(retail_outcome):
    assert retail_outcome.assoc_ti == (
        AssociationTable(
            activity="Marketing",
            context="Campaigns",
            level="tactical-informational",
            rows=(("campaign_tracking", ("campaign_cost", "campaign_reach")),),
            strategic_goal="improve_campaigns",
        ),
        AssociationTable(
            activity="Sales",
            context="In-store sales",
            level="tactical-informational",
            rows=(
                ("sales_by_season", ("seasonal_amount",)),
                ("sales_by_store", ("monthly_amount", "monthly_quantity")),
            ),
            strategic_goal="increase_revenue",
        ),
    )


def test_retail_formalization_tables(retail_outcome):
    tables = retail_outcome.formalization
    assert [t.tactical_goal for t in tables] == [
        "campaign_tracking",
        "sales_by_season",
        "sales_by_store",
    ]
    assert tables[2] == FormalizationTable(
        activity="Sales",
        context="In-store sales",
        strategic_goal="increase_revenue",
        tactical_goal="sales_by_store",
        rows=(
            FormalizationRow(
                goal_id="monthly_amount",
                verb="analyze",
                fact_params=("amount",),
                dimension_params=("store", "month"),
            ),
            FormalizationRow(
                goal_id="monthly_quantity",
                verb="examine",
                fact_params=("quantity",),
                dimension_params=("store", "month", "product"),
            ),
        ),
    )


@pytest.mark.parametrize(("stem", "expected"), sorted(RULE_CASES.items()))
def test_rule_fixture_triggers_single_code(stem, expected):
    code, stage_count = expected
    outcome = run_fixture(stem)
    assert [f.code for f in outcome.findings] == [code]
    finding = outcome.findings[0]
    severity = "warning" if code.startswith("W") else "error"
    assert finding.severity == severity
    assert finding.stage in STAGES
    assert outcome.stages_run == STAGES[:stage_count]
    assert outcome.ok is (severity == "warning")


def test_error_stage_drops_its_artifact():
    outcome = run_fixture("e004")
    assert outcome.stages_run == STAGES[:3]
    assert outcome.diagnosis is not None
    assert outcome.usecase is not None
    assert outcome.assoc_st is None
    assert outcome.assoc_ti is None
    assert outcome.formalization is None


def test_warning_keeps_artifacts():
    outcome = run_fixture("w001")
    assert outcome.ok
    assert outcome.formalization is not None
    assert len(outcome.warnings()) == 1


def test_cycle_message_anchored_at_smallest_id():
    outcome = run_fixture("e011")
    finding = outcome.findings[0]
    assert finding.code == "E011"
    assert finding.subject == "t1"
    assert finding.message == "refinement cycle: t1 -> t2 -> t1"


def test_findings_carry_source_locations():
    outcome = run_fixture("e004")
    finding = outcome.findings[0]
    assert finding.location is not None
    assert finding.location.line > 0
    assert finding.location.column == 1


def test_finding_to_text_format():
    finding = ValidationFinding(
        severity="error",
        code="E004",
        message='tactical goal "t1" does not refine any strategic goal',
        subject="t1",
        stage="AssocieButStra-ButTact",
        location=SourceLocation(line=13, column=1),
    )
    assert finding_to_text(finding, "model.dis") == (
        "model.dis:13:1: error E004 [AssocieButStra-ButTact] t1:"
        ' tactical goal "t1" does not refine any strategic goal'
    )
    assert finding_to_text(finding).startswith("-:13:1: error")


def test_finding_to_text_without_location():
    finding = ValidationFinding(
        severity="warning",
        code="W002",
        message="x",
        subject="Returns",
        stage="DiagnosisSID",
    )
    assert finding_to_text(finding, "m.dis") == (
        "m.dis: warning W002 [DiagnosisSID] Returns: x"
    )


def test_finding_to_json_shape():
    finding = ValidationFinding(
        severity="error",
        code="E002",
        message="m",
        subject="i1",
        stage="RecenseBesomsSID",
        location=SourceLocation(line=4, column=2),
    )
    payload = json.loads(finding_to_json(finding))
    assert payload == {
        "severity": "error",
        "code": "E002",
        "subject": "i1",
        "stage": "RecenseBesomsSID",
        "message": "m",
        "line": 4,
        "column": 2,
    }
    assert list(payload) == [
        "severity",
        "code",
        "subject",
        "stage",
        "message",
        "line",
        "column",
    ]


def test_finding_to_json_null_location():
    finding = ValidationFinding(
        severity="error", code="E000", message="m", subject="business",
        stage="DiagnosisSID",
    )
    payload = json.loads(finding_to_json(finding))
    assert payload["line"] is None and payload["column"] is None


def test_multiple_findings_within_stage_all_reported():
    text = (
        'business "B" { activity "A" { context "C" } }\n'
        'actor strategic "D"\nactor tactical "M"\n'
        'goal strategic s1 "x" actor "D" activity "A" context "C"\n'
        'goal tactical t1 "x" actor "M" activity "A" context "C"\n'
        'goal tactical t2 "x" actor "M" activity "A" context "C"\n'
    )
    model = parse(text).model
    outcome = run_pipeline(model)
    assert [f.code for f in outcome.findings] == ["E004", "E004"]
    assert [f.subject for f in outcome.findings] == ["t1", "t2"]


def test_cycle_suppresses_other_parent_checks():
    text = (
        'business "B" { activity "A" { context "C" } }\n'
        'actor tactical "M"\n'
        'goal tactical t1 "x" actor "M" activity "A" context "C" refines t2\n'
        'goal tactical t2 "x" actor "M" activity "A" context "C" refines t1\n'
    )
    model = parse(text).model
    outcome = run_pipeline(model)
    codes = [f.code for f in outcome.findings]
    assert codes.count("E011") == 1
    assert "E004" not in codes and "E006" not in codes
