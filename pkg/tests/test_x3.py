import pytest

from k3fib.fibrations import run_surface
from k3fib.kodaira import classify
from k3fib.x3 import (TABLE4, classify_x3, intersect, k_intersection,
                      pushforward_pairing, pushforward_table,
                      sigma5_configuration, sigma5_type3_check,
                      x3_configuration)

CFG = x3_configuration()


def test_configuration_shape():
    assert len(CFG.names) == 18 + 6 + 1
    assert len(CFG.blowup_points) == 9
    assert sum(len(p) == 2 for p in CFG.blowup_points) == 6
    assert sum(len(p) == 3 for p in CFG.blowup_points) == 3
    assert CFG.pairing("Theta0", "Theta1") == 1
    assert CFG.pairing("Theta0", "Theta17") == 1
    assert CFG.pairing("Theta0", "Theta2") == 0
    assert CFG.pairing("Sigma0", "Theta0") == 1
    assert CFG.pairing("Sigma0", "Sigma3") == 1
    assert CFG.pairing("Sigma0", "Sigma1") == 0
    assert CFG.pairing("Fa", "Sigma4") == 1
    assert CFG.pairing("Fa", "Theta7") == 0


def test_intersect_and_errors():
    l4 = {f"Theta{i}": 1 for i in range(18)}
    assert intersect(CFG, l4, l4) == 0
    assert intersect(CFG, TABLE4[1][0], TABLE4[1][1]) == 1
    with pytest.raises(ValueError, match="unknown curve"):
        intersect(CFG, {"Theta99": 1}, l4)


@pytest.mark.parametrize("i", sorted(TABLE4))
def test_fibration_pairs(i):
    ell, m = TABLE4[i]
    assert intersect(CFG, ell, ell) == 0
    assert intersect(CFG, m, m) == -2
    assert intersect(CFG, ell, m) == 1


def test_k_intersections():
    values = {i: k_intersection(CFG, TABLE4[i][0]) for i in TABLE4}
    assert values == {1: -6, 2: 0, 3: 0, 4: 0, 5: -6, 6: 0}
    with pytest.raises(ValueError, match="not a fibre class"):
        k_intersection(CFG, TABLE4[1][1])


def test_quotient_self_intersections():
    pairing = pushforward_pairing(CFG)
    for name in ("Et1", "Et2", "Et3", "lt1", "lt2", "lt3"):
        assert pairing[(name, name)] == -6
    for k in range(1, 13):
        assert pairing[(f"S{k}", f"S{k}")] == -1
    for k in range(1, 7):
        assert pairing[(f"Ht{k}", f"Ht{k}")] == -1
        assert pairing[(f"R{k}", f"R{k}")] == -3
    for k in range(1, 4):
        assert pairing[(f"rt{k}", f"rt{k}")] == -3
        assert pairing[("EO", f"rt{k}")] == 1
    assert pairing[("EO", "EO")] == -1


def _times(k, div):
    return {name: k * c for name, c in div.items()}


def test_pushforward_printed_rows():
    row1 = _times(3, {"S11": 2, "R6": 2, "S12": 4, "Et1": 2, "Ht4": 3,
                      "rt1": 1, "S1": 5, "R1": 3, "S2": 4, "lt3": 1,
                      "S3": 2, "R2": 1, "S4": 1})
    assert pushforward_table(CFG, TABLE4[1][0]) == row1

    row2 = {"R6": 1, "S12": 3, "rt1": 1, "Ht4": 3, "Et1": 2, "S1": 6,
            "R1": 4, "S2": 6, "lt3": 2, "S3": 6, "R2": 4, "S4": 6,
            "Et2": 2, "S5": 6, "R3": 4, "S6": 6, "lt1": 2, "S7": 6,
            "R4": 4, "S8": 6, "Et3": 2, "Ht6": 3, "rt3": 1, "S9": 3,
            "R5": 1}
    assert pushforward_table(CFG, TABLE4[2][0]) == row2

    row5 = _times(3, {"Et1": 1, "S1": 2, "R1": 1, "S2": 1, "S12": 2,
                      "R6": 1, "S11": 1, "Ht4": 2, "rt1": 1, "Ht1": 1})
    assert pushforward_table(CFG, TABLE4[5][0]) == row5

    row4 = {**{f"Et{k}": 1 for k in (1, 2, 3)},
            **{f"lt{k}": 1 for k in (1, 2, 3)},
            **{f"S{k}": 3 for k in range(1, 13)},
            **{f"R{k}": 2 for k in range(1, 7)}}
    assert pushforward_table(CFG, TABLE4[4][0]) == row4


def test_pushforward_away_from_blowups():
    down = pushforward_table(CFG, {"Theta0": 1})
    assert down == {"Et1": 1}


def test_classification():
    assert classify_x3(1) == "Type1"
    assert classify_x3(5) == "Type1"
    for i in (2, 3, 4, 6):
        assert classify_x3(i) == "Type2"
    with pytest.raises(ValueError):
        classify_x3(7)


def test_classification_agrees_with_frame_analysis():
    rows = {row.row_id: row for row in run_surface(10)}
    for i in range(1, 7):
        row = rows[f"10.{i}"]
        verdict = classify(row.ade, row.mw_rank, row.mw_torsion)
        admits_type1 = verdict in ("Type1Only", "Both")
        assert (classify_x3(i) == "Type1") == admits_type1
        if classify_x3(i) == "Type2":
            assert verdict == "Type2Only"


def test_sigma5_example():
    cfg5 = sigma5_configuration()
    ell = {"sigma0": 1, "Sigma1": 1, "Theta0_a1": 2, "Theta3_a1": 3,
           "Theta6_a1": 4, "Theta5_a1": 2, "Theta4_a1": 3, "Theta1_a1": 2}
    assert intersect(cfg5, ell, ell) == 0
    assert sigma5_type3_check(cfg5) == 4
    assert sigma5_type3_check(sigma5_configuration(zero_meets_torsion=1)) == 6
