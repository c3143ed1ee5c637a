"""Ratio reports, worst-order search, bound checking, and exports."""
from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import permutations

import pytest

from conftest import random_instance
from listsched.families import gen_class1, gen_class2, gen_faigle, gen_graham_tight
from listsched.harness import (
    BoundViolation,
    REPORT_COLUMNS,
    competitive_ratio,
    export_long_csv,
    export_report,
    greedy_bound,
    instance_digest,
    table2,
    verify_bound,
    worst_order_search,
)
from listsched.model import ArrivalOrder, Instance, Time
from listsched.online import Lsa, OnlinePolicy, run_online
from listsched.oracle import OPT_CERTIFIED

TABLE2_EXPECTED = {
    2: ("1.0000", "1.2500"),
    3: ("1.3333", "1.2222"),
    4: ("1.5000", "1.1875"),
    5: ("1.6000", "1.1600"),
    10: ("1.8000", "1.0900"),
    50: ("1.9600", "1.0196"),
    100: ("1.9800", "1.0099"),
}


class StackFirst(OnlinePolicy):
    name = "stack-first"

    def choose(self, loads, job=None):
        return 1


def test_ratio_report_class1_m4():
    fam = gen_class1(4)
    report = competitive_ratio(fam.instance, fam.worst_order, family_tag="class1")
    assert report.label == "class1"
    assert report.m == 4
    assert report.policy == "LSA"
    assert report.alg_makespan == Time(6)
    assert report.opt.value == Time(4)
    assert report.opt.kind == OPT_CERTIFIED
    assert report.ratio == Fraction(3, 2)
    assert report.ratio_4dp == "1.5000"
    assert report.ratio_exact == "6/4"
    assert report.bound_2_minus_1_over_m == "1.7500"
    assert report.bound_satisfied is True


def test_ratio_report_more_examples():
    graham2 = gen_graham_tight(2)
    big_first = ArrivalOrder((3, 1, 2))
    report = competitive_ratio(graham2.instance, big_first)
    assert report.ratio == 1
    assert report.ratio_4dp == "1.0000"

    fam = gen_class2(10)
    report = competitive_ratio(fam.instance, fam.worst_order, family_tag="class2")
    assert report.ratio == Fraction(109, 100)
    assert report.ratio_4dp == "1.0900"

    fam = gen_faigle(4)
    report = competitive_ratio(fam.instance, fam.worst_order, family_tag=fam.family_tag)
    assert report.ratio == Time(1, Fraction(1, 2))
    assert report.ratio_exact == "(4+3r2)/(2+2r2)"
    assert report.ratio_4dp == "1.7071"
    assert report.bound_satisfied is True


def test_untagged_report_uses_digest_label():
    inst = Instance.from_sizes([1, 1, 2], 2)
    report = competitive_ratio(inst)
    assert report.label == instance_digest(inst)
    assert len(report.label) == 12
    assert all(c in "0123456789abcdef" for c in report.label)
    assert instance_digest(inst) == instance_digest(Instance.from_sizes([1, 1, 2], 2))
    assert instance_digest(inst) != instance_digest(Instance.from_sizes([1, 2, 2], 2))


def test_lower_bound_only_reports_are_flagged():
    inst = Instance.from_sizes([5, 7, 11, 13, 17, 19, 23], 3)
    report = competitive_ratio(inst, node_budget=3)
    assert report.opt.kind == "lower-bound-only"
    assert report.bound_satisfied is None
    assert report.ratio >= 1  # against a lower bound the estimate can only grow


def test_worst_order_search_confirms_family_orders():
    fam = gen_class1(3)
    result = worst_order_search(fam.instance)
    assert result.worst_makespan == Time(4)
    assert result.orders_examined == 5
    assert result.exhaustive
    assert result.best_order == fam.worst_order

    fam = gen_class2(2)
    result = worst_order_search(fam.instance)
    assert result.worst_makespan == Time(5)
    assert result.orders_examined == 3
    assert result.exhaustive
    assert result.best_order.permutation[-1] == 3  # big job arrives last


def test_worst_order_search_single_job():
    inst = Instance.from_sizes([5], 3)
    result = worst_order_search(inst)
    assert result.best_order.permutation == (1,)
    assert result.worst_makespan == Time(5)
    assert result.orders_examined == 1
    assert result.exhaustive


def test_worst_order_search_breaks_ties_lexicographically():
    # orders (1,2,3) and (2,1,3) both reach makespan 4; the smaller wins
    inst = Instance.from_sizes([1, 2, 3], 2)
    result = worst_order_search(inst)
    assert result.worst_makespan == Time(4)
    assert result.best_order.permutation == (1, 2, 3)


def test_worst_order_search_matches_brute_force():
    rng = random.Random(21)
    for _ in range(20):
        inst = random_instance(rng, max_n=6, max_m=3)
        result = worst_order_search(inst)
        best_value = None
        best_perm = None
        for perm in permutations(inst.job_ids):
            sched, _ = run_online(inst, ArrivalOrder(perm))
            if (
                best_value is None
                or best_value < sched.makespan
                or (sched.makespan == best_value and perm < best_perm)
            ):
                best_value = sched.makespan
                best_perm = perm
        assert result.exhaustive
        assert result.worst_makespan == best_value
        assert result.best_order.permutation == best_perm


def test_worst_order_search_sampling_fallback():
    inst = Instance.from_sizes([1, 2, 3, 4, 5, 6], 3)  # 720 distinct orders
    exhaustive = worst_order_search(inst)
    assert exhaustive.exhaustive
    assert exhaustive.orders_examined == 720

    sampled = worst_order_search(inst, enumeration_cap=50, seed=4)
    assert not sampled.exhaustive
    assert sampled.orders_examined == 50
    assert sampled.worst_makespan <= exhaustive.worst_makespan
    again = worst_order_search(inst, enumeration_cap=50, seed=4)
    assert again == sampled

    with pytest.raises(ValueError):
        worst_order_search(inst, enumeration_cap=0)


def test_worst_order_search_with_custom_policy():
    inst = Instance.from_sizes([1, 1, 2], 2)
    result = worst_order_search(inst, policy=StackFirst())
    assert result.worst_makespan == Time(4)  # total; every order stacks up
    assert result.best_order.permutation == (1, 2, 3)
    assert result.exhaustive


def test_worst_order_search_tie_break_variant():
    fam = gen_class2(3)
    low = worst_order_search(fam.instance)
    high = worst_order_search(fam.instance, policy=Lsa("high"))
    assert low.worst_makespan == high.worst_makespan == Time(11)


def test_table2_golden_values():
    rows = table2(sorted(TABLE2_EXPECTED))
    assert len(rows) == 7
    for row in rows:
        want = TABLE2_EXPECTED[row.m]
        assert (row.class1_ratio, row.class2_ratio) == want
    with pytest.raises(ValueError):
        table2([2, 1])


def test_ratio_monotonicity_across_machine_counts():
    class1_ratios = []
    class2_ratios = []
    for m in range(2, 101):
        fam1 = gen_class1(m)
        sched1, _ = run_online(fam1.instance, fam1.worst_order)
        r1 = (sched1.makespan / fam1.predicted_opt).as_fraction()
        assert r1 == Fraction(2 * m - 2, m)
        class1_ratios.append(r1)

        fam2 = gen_class2(m)
        sched2, _ = run_online(fam2.instance, fam2.worst_order)
        r2 = (sched2.makespan / fam2.predicted_opt).as_fraction()
        assert r2 == Fraction(m * m + m - 1, m * m)
        class2_ratios.append(r2)
    assert all(a < b for a, b in zip(class1_ratios, class1_ratios[1:]))
    assert all(a > b for a, b in zip(class2_ratios, class2_ratios[1:]))


def test_verify_bound_summary():
    summary = verify_bound(200, seed=42)
    assert summary.trials == 200
    assert summary.violations == 0
    assert summary.max_ratio <= greedy_bound(summary.witness_report.m)
    assert summary.max_ratio_4dp == summary.max_ratio.decimal(4)
    assert summary.witness_report.bound_satisfied is True
    assert summary.witness_order.covers(summary.witness_instance)


def test_verify_bound_single_job_instances():
    summary = verify_bound(25, max_n=1, seed=7)
    assert summary.max_ratio == 1


def test_verify_bound_parameter_validation():
    with pytest.raises(ValueError):
        verify_bound(0)
    with pytest.raises(ValueError):
        verify_bound(1, max_n=13)
    with pytest.raises(ValueError):
        verify_bound(1, max_m=5)
    with pytest.raises(ValueError):
        verify_bound(1, size_range=(0, 5))
    with pytest.raises(ValueError):
        verify_bound(1, size_range=(5, 2))


def test_verify_bound_catches_a_bad_policy():
    with pytest.raises(BoundViolation) as excinfo:
        verify_bound(20, max_n=6, max_m=3, seed=0, policy=StackFirst())
    message = str(excinfo.value)
    assert "exceeds bound" in message
    assert "m=" in message
    assert "order:" in message
    assert "instance:" in message
    assert excinfo.value.report.bound_satisfied is False


def test_export_report_csv():
    fam = gen_faigle(4)
    report = competitive_ratio(fam.instance, fam.worst_order, family_tag=fam.family_tag)
    text = export_report([report])
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert lines[1] == "4,faigle_sqrt2,4+3r2,2+2r2,(4+3r2)/(2+2r2),1.7071,1.7500,true"
    assert export_report([]) == ",".join(REPORT_COLUMNS) + "\n"


def test_export_report_json():
    fam = gen_class1(4)
    report = competitive_ratio(fam.instance, fam.worst_order, family_tag="class1")
    payload = json.loads(export_report([report], format="json"))
    entry = payload[0]
    assert entry["m"] == 4
    assert entry["family"] == "class1"
    assert entry["ratio_exact"] == "6/4"
    assert entry["ratio_4dp"] == "1.5000"
    assert entry["satisfied"] is True
    assert entry["opt_kind"] == OPT_CERTIFIED
    assert entry["policy"] == "LSA"
    with pytest.raises(ValueError):
        export_report([report], format="yaml")


def test_export_report_is_deterministic_and_atomic(tmp_path):
    fam = gen_class2(3)
    report = competitive_ratio(fam.instance, fam.worst_order, family_tag="class2")
    a = export_report([report])
    b = export_report([report])
    assert a == b

    out = tmp_path / "report.csv"
    export_report([report], destination=out)
    assert out.read_text() == a

    missing_dir = tmp_path / "nope" / "report.csv"
    with pytest.raises(OSError):
        export_report([report], destination=missing_dir)
    assert not missing_dir.exists()
    assert not list(tmp_path.glob("*.tmp"))


def test_export_long_csv(tmp_path):
    reports = []
    for m in (2, 3):
        fam = gen_class1(m)
        reports.append(
            competitive_ratio(fam.instance, fam.worst_order, family_tag="class1")
        )
    text = export_long_csv(reports)
    assert text.split("\n")[0] == "m,family,ratio"
    assert "2,class1,1.0000" in text
    assert "3,class1,1.3333" in text
    out = tmp_path / "long.csv"
    export_long_csv(reports, destination=out)
    assert out.read_text() == text
