import json
import math

import numpy as np
import pytest

import hdx


def test_complete_complex_structure():
    c = hdx.complete(6, 4)
    assert c.dimension == 4
    assert c.face_counts() == [1, 6, 15, 20, 15]
    assert c.faces(1)[0] == [0]
    pi = hdx.level_distribution(c, 2)
    assert pi.shape == (15,)
    assert pi.sum() == pytest.approx(1.0)


def test_walk_matrices_are_stochastic():
    c = hdx.random_complex(7, 3, density=0.6, seed=3)
    for k in range(1, c.dimension + 1):
        w = hdx.down_up(c, k)
        assert np.allclose(w.matrix.sum(axis=1), 1.0)
        assert np.allclose(w.stationary @ w.matrix, w.stationary)
        assert hdx.spectrum(w)[0] == pytest.approx(1.0)


def test_spectral_profile_of_complete_complex():
    a = hdx.spectral_profile(hdx.complete(6, 4))
    assert a == pytest.approx([-1 / 5, -1 / 4, -1 / 3], abs=1e-9)


def test_bounds_on_zero_profile():
    sol = hdx.solve_profile([0.0, 0.0, 0.0])
    for k, (ours, al) in enumerate(zip(sol["our_bounds"], sol["al_bounds"]), start=2):
        assert ours == pytest.approx(1 - 1 / k, abs=1e-12)
        assert al == pytest.approx(1 - 1 / k, abs=1e-12)
    assert hdx.our_bound([0.0, 0.0, 0.0], 4) == pytest.approx(0.75)


def test_trickling_profile_reaches_one_over_k_squared():
    d = 5
    profile = hdx.trickling_down_propagate(1 / d, d)
    for k in range(2, d + 1):
        assert hdx.our_bound(profile, k) == pytest.approx(1 - 1 / k**2, abs=1e-12)


def test_entropy_of_constant_is_zero():
    pi = np.full(4, 0.25)
    assert hdx.relative_entropy(pi, np.full(4, 3.0)) == 0.0
    f = np.array([1.0, 2.0, 3.0, 4.0])
    expected = float(np.sum(pi * f * np.log(f / f.mean())))
    assert hdx.relative_entropy(pi, f) == pytest.approx(expected, rel=1e-12)


def test_mlsi_estimate_is_positive():
    c = hdx.complete(5, 3)
    rho = hdx.estimate_mlsi(hdx.down_up(c, 2), restarts=8)
    assert 0.0 < rho < math.inf


def test_errors_carry_their_kind():
    with pytest.raises(hdx.HdxError, match="PurityError"):
        hdx.from_top_faces(3, [[0, 1, 2], [2, 3]])
    with pytest.raises(hdx.HdxError, match="LevelOutOfRangeError"):
        hdx.our_bound([0.0], 5)


def test_round_trip_through_json():
    c = hdx.from_top_faces(2, [[0, 1], [1, 2], [0, 2]], weights=[1.0, 2.0, 3.0])
    back = hdx.parse(c.to_json())
    assert back.weights(2) == c.weights(2)
    assert c.weight([1]) == pytest.approx(3.0)


def test_analyze_report():
    c = hdx.generate("matroid:edges=0-1;1-2;0-2;2-3")
    report = hdx.analyze(c, checks="structure,walks,bounds", functions=50, timing=False)
    assert report["schema"] == 1
    statuses = {check["status"] for check in report["checks"]}
    assert "fail" not in statuses
    again = hdx.analyze(c, checks="structure,walks,bounds", functions=50, timing=False)
    assert json.dumps(report, sort_keys=True) == json.dumps(again, sort_keys=True)
