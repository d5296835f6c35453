import pathlib

import numpy as np
import pytest

import closedecon as ce

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def fixture(name):
    return str(FIXTURES / name)


def test_soap_truth_point():
    econ = ce.load_scenario(fixture("soap.json")).base
    r = ce.solve(econ)
    assert r.found
    np.testing.assert_allclose(r.point.quantities, [10, 7.5, 8.125], atol=1e-12)
    np.testing.assert_allclose(ce.payoff(econ, r.point), [2.125, 0.75, 0.125], atol=1e-9)
    assert r.data.canonical() == "I{1,2,3}|J{1,2,3}|F{(1,1),(2,1),(2,2),(3,2),(3,3)}"
    assert ce.verify(econ, r.point)


def test_economy_from_arrays():
    econ = ce.Economy(np.array([1.0, 10.0]), np.array([[1.0, 0.0], [5.0, 10.0]]), np.ones((2, 2)))
    assert (econ.m, econ.n) == (2, 2)
    assert ce.solve(econ).found


def test_soap_game_nash():
    fam = ce.load_scenario(fixture("soap.json"))
    table = ce.sweep(fam, [[1, 1.5, 3], [1, 2, 3]])
    assert all(table.solved)
    assert ce.pure_nash(table) == [[0, 0]]


def test_tatonnement_cycle():
    econ = ce.load_scenario(fixture("taton_cycle.json")).base
    trace = ce.tatonnement(econ, np.ones(3))
    assert trace.status == "cycle"
    assert trace.cycle_period == 2


def test_two_by_two_closed_form():
    fam = ce.load_scenario(fixture("two_by_two.json"))
    r = ce.classify_2x2(fam.instantiate([1.0, 0.5]), 1.0, 0.5)
    assert r.forest == "Forest-1"
    np.testing.assert_allclose(r.payoffs, [4, 6], atol=1e-9)


def test_reconstruct_boutique():
    forest = ce.load_forest(fixture("boutique_forest.json"))
    assert ce.reconstruct(ce.load_scenario(fixture("boutique.json")).base, forest) is None
    assert ce.reconstruct(ce.load_scenario(fixture("boutique_yb.json")).base, forest) is not None


def test_errors_and_cli():
    with pytest.raises(ce.ClosedEconError):
        ce.parse_scenario('{"labor_classes": []}')
    code, out, _ = ce.run_cli(["solve", fixture("soap.json")])
    assert code == 0 and out.startswith("kind,row,col,value")
    assert ce.run_cli(["solve", "/nonexistent.json"])[0] == 2
