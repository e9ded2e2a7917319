import pytest

import qsys

S7 = [1, 1, 1, 1, -2, -1, -1]


def test_validate_and_modulus():
    assert qsys.validate([1, 1, -1, -1]) == ([1, 1, -1, -1], 4)
    assert qsys.modulus([1, 1, -1, -1], 10) == 83
    with pytest.raises(qsys.QsysError):
        qsys.validate([1, 1, -2])


def test_count_oracles_agree():
    brute = qsys.count([1, 1, -1, -1], 5, list(range(1, 6)), "brute")
    mitm = qsys.count([1, 1, -1, -1], 5, list(range(1, 6)))
    assert brute["total"] == mitm["total"] == 45
    assert brute["nontrivial"] == mitm["nontrivial"] == 0


def test_witness():
    w = qsys.find_solution([1, 1, 1, -1, -1, -1], 7, list(range(1, 8)))
    assert w == [1, 5, 6, 2, 3, 7]
    assert qsys.find_solution([1, 1, -1, -1], 10, list(range(1, 11))) is None


def test_moments_and_recurrence():
    assert qsys.moment_V(10, 4) == 190
    assert qsys.moment_V(2, 6) == 20
    r = qsys.quadratic_recurrence(["1/7"], 7)
    assert r["q"] == 7 and r["achieved"] == "0"
    d = qsys.dirichlet(["1/3", "1/4"], 12)
    assert d["q"] == 12


def test_eval_S_singleton():
    v = qsys.eval_S([1.0], [1, 1, -1, -1], 0, 0)
    assert abs(v - 1 / qsys.modulus([1, 1, -1, -1], 1)) < 1e-12


def test_fourier_identity():
    rep = qsys.fourier_identity([1, 1, -1, -1], 6, [[1.0] * 6] * 4, 1e-9)
    assert rep["passed"]


def test_generate_energy_linearize_run():
    evens = qsys.generate_set(S7, 16, "evens")
    assert evens == list(range(2, 17, 2))
    e = qsys.energy(S7, 16, evens)
    assert e["R"] >= 1
    fam = qsys.linearize(S7, 64, [(0, 0)])
    assert fam["certificate"]["certified"]
    trace = qsys.run(S7, 20, list(range(1, 21)), max_steps=4)
    assert trace["final_verdict"] == "solution-found"
    with pytest.raises(qsys.QsysError):
        qsys.energy(S7, 16, list(range(1, 17)))
