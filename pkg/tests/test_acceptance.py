"""One pass/fail line per acceptance criterion, at the required tolerances.

Run ``pytest tests/test_acceptance.py -v -s`` to also see every sub-check.
"""
import pytest

from thermogap import verification

IDS = {
    1: "01_analytic_vs_bruteforce_oracle",
    2: "02_pointb_closed_forms",
    3: "03_kraus_channel_synthesis",
    4: "04_dense_vs_inner_product_channel",
    5: "05_optimal_pointb_unitary",
    6: "06_svd_normal_form",
    7: "07_forced_singular_values",
    8: "08_gap_bounds",
    9: "09_reachability_oracles_agree",
    10: "10_cone_figure_reproduction",
}


@pytest.mark.parametrize("number", list(IDS), ids=list(IDS.values()))
def test_criterion(number):
    [result] = verification.run([number])
    print()
    print(result.line())
    for label, ok, detail in result.checks:
        print(f"    {'ok  ' if ok else 'FAIL'} {label}: {detail}")
    assert result.passed, "; ".join(result.failures())
