import csv
import json
from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import WORKED, curve
from scaler.analysis import (
    Ranking,
    ScoredCase,
    emit_report,
    parse_tsv_plot,
    rank_parameters,
    summarize,
    variation_report,
)
from scaler.engine import adapt
from scaler.errors import InvalidArgument
from scaler.files import load_cases, load_curves
from scaler.metrics import MeasuredCurve, ScoreBreakdown, scalability_score
from scaler.simulator import SimExecutor, builtin_model

DATA = resources.files("scaler") / "data"


class TestRanking:
    def test_two_params(self):
        r = rank_parameters([ScoredCase("c", "P1", 0.5, 0.6), ScoredCase("c", "P2", 0.5, 0.9)])
        assert [(e.parameter_id, e.rank) for e in r.entries] == [("P2", 1), ("P1", 2)]
        assert r.entries[0].impact == pytest.approx(0.4)

    def test_ties_by_id(self):
        r = rank_parameters([ScoredCase("c", p, 0.5, 0.75) for p in ("P10", "P3", "P2")])
        assert [e.parameter_id for e in r.entries] == ["P2", "P3", "P10"]

    def test_filter_excludes_with_warning(self):
        cases = [ScoredCase("NB/KDD", "P1", 0.1, 0.3), ScoredCase("RF/KDD", "P2", 0.1, 0.2)]
        r = rank_parameters(cases, lambda c: c.case_id.startswith("NB"))
        assert [e.parameter_id for e in r.entries] == ["P1"]
        assert r.excluded == ("P2",)
        assert "P2" in r.to_dict()["warnings"][0]

    def test_impact_spot_check(self):
        cases = load_cases(DATA / "impact_cases.csv")
        kdd = rank_parameters(cases, lambda c: c.case_id.endswith("/KDD"))
        p1 = next(e for e in kdd.entries if e.parameter_id == "P1")
        # |−0.14−0.31|, |0.53−0.51|, |0.09−0.25|, |0.24−0.31|
        assert p1.impact == pytest.approx(0.175, abs=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidArgument):
            ScoredCase("c", "P1", float("nan"), 0.1)


@given(st.lists(st.tuples(st.sampled_from([f"P{i}" for i in range(1, 12)]),
                          st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=40))
def test_ranking_properties(rows):
    r = rank_parameters([ScoredCase("c", p, d, m) for p, d, m in rows])
    assert sorted(e.rank for e in r.entries) == list(range(1, len(r.entries) + 1))
    impacts = [e.impact for e in r.entries]
    assert impacts == sorted(impacts, reverse=True)


class TestVariations:
    def test_nine_of_twelve(self):
        rep = variation_report(load_curves(DATA / "variation_cases.csv"))
        t = {(x.from_node, x.to_node): x for x in rep.transitions}
        assert (t[(2, 4)].count, t[(2, 4)].total, t[(2, 4)].percent) == (9, 12, 75.0)
        assert t[(1, 2)].count == 0

    def test_decreasing_and_flat(self):
        rep = variation_report([("a", curve([8, 4, 2, 1.5, 1])), ("b", curve([5] * 5))])
        assert [x.count for x in rep.transitions] == [0, 0, 0, 0]

    def test_mixed_schedules(self):
        with pytest.raises(InvalidArgument):
            variation_report([("a", curve([8, 4, 2, 1.5, 1])), ("b", curve([2, 1], (1, 2)))])

    def test_worked_curves(self):
        rep = variation_report(load_curves(DATA / "worked_curves.csv"))
        per = dict(rep.per_curve)
        assert per["scenario6"] == ((2, 4), (6, 8))
        assert per["scenario5"] == ((2, 4), (6, 8))


@given(st.lists(st.lists(st.floats(0.1, 100), min_size=4, max_size=4), min_size=1, max_size=20))
def test_variation_percentages_exact(rows):
    rep = variation_report([(str(i), curve(r, (1, 2, 4, 8))) for i, r in enumerate(rows)])
    for t in rep.transitions:
        assert t.total == len(rows)
        assert t.percent == 100.0 * t.count / t.total


class TestSummary:
    def test_dataset_means(self):
        s = summarize([0.31, 0.39, 0.53, 0.52])
        assert s.mean == pytest.approx(0.4375, abs=1e-12)
        assert s.mean_deviation == pytest.approx(56.25, abs=1e-9)
        assert (s.min, s.max, s.median) == (0.31, 0.53, pytest.approx(0.455))

    def test_algorithm_means(self):
        assert summarize([("nb", 0.24), ("rf", 0.70), ("svm", 0.36), ("mlp", 0.32)]).mean == pytest.approx(0.405)

    def test_single(self):
        assert summarize([1.0]).mean_deviation == 0.0

    def test_empty(self):
        with pytest.raises(InvalidArgument):
            summarize([])


class TestEmit:
    def test_json_roundtrip(self, scenario1):
        b = scalability_score(scenario1)
        assert ScoreBreakdown.from_dict(json.loads(emit_report(b, "json"))) == b

    def test_tsv_plot(self, scenario1):
        blocks = parse_tsv_plot(emit_report(scenario1, "tsv-plot"))
        assert [t for _, t in blocks["curve achieved"]] == [10, 11, 6, 4, 3]
        assert [t for _, t in blocks["curve ideal"]] == pytest.approx([10, 5, 2.5, 10 / 6, 1.25], abs=1e-15)

    def test_ranking_csv(self):
        r = rank_parameters([ScoredCase("c", "P1", 0.5, 0.6), ScoredCase("c", "P2", 0.5, 0.9)])
        rows = list(csv.DictReader(emit_report(r, "csv").splitlines()))
        assert [(row["rank"], row["parameter_id"]) for row in rows] == [("1", "P2"), ("2", "P1")]
        assert [float(row["impact"]) for row in rows] == [e.impact for e in r.entries]

    def test_csv_numbers_lossless(self, scenario1):
        b = scalability_score(scenario1)
        rows = list(csv.DictReader(emit_report(b, "csv").splitlines()))
        vals = {r["metric"]: float(r["value"]) for r in rows if r["metric"] != "gap_at"}
        assert vals["score"] == b.score and vals["trend"] == b.trend

    def test_result_formats(self, space9):
        r = adapt(SimExecutor(builtin_model("family_e")), space9)
        d = json.loads(emit_report(r, "json"))
        assert d["optimal_score"] == r.optimal_score and len(d["trials"]) == len(r.trials)
        assert len(emit_report(r, "csv").splitlines()) == len(r.trials) + 1

    def test_summary_and_variations_json(self):
        s = summarize([0.31, 0.39])
        assert json.loads(emit_report(s, "json"))["mean"] == s.mean
        rep = variation_report([("a", curve(WORKED["scenario6"][0]))])
        assert json.loads(emit_report(rep, "json"))["curves"][0]["unexpected"] == [[2, 4], [6, 8]]

    def test_unknown_format(self, scenario1):
        with pytest.raises(InvalidArgument):
            emit_report(scalability_score(scenario1), "xml")
        with pytest.raises(InvalidArgument):
            emit_report(Ranking(()), "tsv-plot")


@given(st.lists(st.floats(1e-3, 1e6), min_size=2, max_size=6))
def test_curve_json_lossless(times):
    c = MeasuredCurve(tuple(range(1, len(times) + 1)), tuple(times))
    back = json.loads(emit_report(c, "json"))[0]
    assert tuple(back["time_sec"]) == c.times
