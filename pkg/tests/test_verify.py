import pytest

from divcodes.feasibility import known_length_status
from divcodes.verify import STEPS, ProofStepReport, StepFailed, verify59


def allowing(*lengths):
    def status(r, n, q=2):
        return "exists" if n in lengths else known_length_status(r, n, q)

    return status


def test_all_steps_hold():
    reports = verify59()
    assert [r.step for r in reports] == list(range(1, 10)) == list(range(1, len(STEPS) + 1))
    assert all(r.holds for r in reports)


def test_recomputed_values():
    reports = {r.step: r for r in verify59()}
    assert reports[1].inputs["allowed"] == [8, 16, 24, 32, 40]
    assert reports[2].inputs["y_min"] == 768 and reports[2].inputs["k_min"] == 10
    assert reports[3].inputs["k_max"] == 10
    assert reports[4].inputs["classes"] == 3
    assert reports[5].inputs["nonzero_words_min"] == 1029
    assert reports[6].inputs["A8_A16_min"] == 3
    assert reports[7].inputs["A8_max"] == -4
    assert reports[8].inputs["distribution"] == "(0^1 16^2 24^312 32^709)"
    assert reports[8].inputs["B3"] == 93
    assert reports[9].inputs["dim_restriction_min"] == 9


def test_trusted_inputs_are_labelled():
    for rep in verify59():
        assert set(rep.provenance) == set(rep.inputs)
        for label in rep.provenance.values():
            assert label == "recomputed" or label.startswith("axiom: ")
    labels = {r.step: r.provenance for r in verify59()}
    assert labels[6]["dim_residual"].startswith("axiom: ")
    assert labels[2]["y_min"] == "recomputed"


def test_allowing_length_11_breaks_weight_confinement():
    with pytest.raises(StepFailed) as info:
        verify59(length_status=allowing(11))
    assert info.value.report.step == 1
    assert 48 in info.value.report.inputs["allowed"]


def test_doubling_y_breaks_the_weight_40_exclusion():
    with pytest.raises(StepFailed) as info:
        verify59(y=2048)
    assert info.value.report.step == 6
    assert [r.step for r in info.value.reports] == [1, 2, 3, 4, 5, 6]


def test_without_halting_every_step_reports():
    reports = verify59(y=2048, halt=False)
    assert len(reports) == 9
    assert not reports[5].holds


def test_step_selection_and_validation():
    assert [r.step for r in verify59(steps=[2, 8])] == [2, 8]
    with pytest.raises(ValueError):
        verify59(y=1000)


def test_report_rendering():
    rep = ProofStepReport(3, "demo", "a statement", {"x": [1, 2]}, {"x": "axiom: trust"}, "fails")
    assert not rep.holds
    assert rep.line() == "step=3 verdict=fails name=demo x=1,2"
    assert "x = 1,2  (axiom: trust)" in rep.text()
