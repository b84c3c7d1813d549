import os
from fractions import Fraction
from pathlib import Path

import pytest

import qmc

DATA = Path(os.environ.get("QMC_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def text(rel):
    return (DATA / rel).read_text()


def test_numerics():
    assert qmc.ext_add("1/2", "1/3") == "5/6"
    assert qmc.ext_mul("0", "inf") == "0"
    assert qmc.scale_interval("(0,1]", "-1") == "[-1,0)"
    assert qmc.interval_contains("[0,inf)", "1000000000")
    assert not qmc.interval_contains("(0,1)", "0")


def test_formulae():
    assert qmc.parse_formula("mu X. (<> X | (y0 & P))") == qmc.parse_formula(
        qmc.parse_formula("mu X. (<> X | (y0 & P))"))
    assert qmc.alternation_depth("nu Y. mu X.(<> X | [] Y)") == 2
    assert qmc.to_nnf("~~P") == "P"
    with pytest.raises(qmc.QmcError):
        qmc.parse_formula("mu X. ~X")


def test_systems():
    burner = text("systems/burner.json")
    assert qmc.validate_initialised(burner) == []
    assert qmc.normalise_system(qmc.normalise_system(burner)) == qmc.normalise_system(burner)
    assert qmc.validate_initialised(text("systems/burner_rates.json"))
    with pytest.raises(qmc.QmcError) as err:
        qmc.approximate(text("systems/burner_rates.json"), "P", "v0")
    assert err.value.args[1] == "NotInitialised"


def test_split_choice_game():
    rep = qmc.approximate_game(text("games/split_choice.json"), "v0", n=4)
    assert rep["kind"] == "approx"
    assert abs(Fraction(rep["value"]) + Fraction(1, 2)) <= Fraction(1, 4)


def test_pumping_counter_reset():
    res = qmc.solve_counter_reset(text("games/pumping.json"), "v0")
    assert res["exact"]
    assert res["lo"] == "-inf"


def test_crosscheck():
    rep = qmc.crosscheck(text("systems/toy_cycle.json"), text("formulae/invariant.mu"), "a")
    assert rep["agree"]
    rep = qmc.crosscheck(text("systems/toy_two.json"), "nu X. X", "s")
    assert rep["kind"] == "+inf"
    assert rep["direct"] == "inf"


def test_discrete():
    assert qmc.di("9/4") == "1/4"
    assert qmc.di("11/4") == "-1/4"
    assert qmc.di("5/2") == "-1/2"
    assert qmc.dstar(["7/8", "9/8"]) == "1/4"
    assert qmc.equivalent(["1/5", "4/5"], ["3/10", "7/10"])
    assert not qmc.equivalent(["1", "2"], ["3/2", "5/2"])


def test_oracle():
    game = qmc.mc_game(text("systems/toy_cycle.json"), "<> P")
    # From a the only successor is b, where P = 2.
    assert qmc.oracle(game, "<>P @ a", 8) == ("2", "2")
    assert qmc.normalise_game(game) == game
