import json
import math

import numpy as np
import pytest

import ampsim


def test_shift_and_orbits():
    assert ampsim.shift_index(5, 3) == 6
    assert ampsim.shift_digits("11000") == "01100"
    d = ampsim.decompose_orbits(3)
    assert d.orbit_count == 2
    assert d.orbit(1) == [1, 2, 4]
    with pytest.raises(ampsim.NonPrimeOrder):
        ampsim.decompose_orbits(4)


def test_ming_block_exponentiates_to_shift():
    a = ampsim.ming_block(5, 1.0)
    assert np.allclose(a + a.conj().T, 0)
    assert ampsim.verify_exponential(a, 1.0) < 1e-9
    bad = a.copy()
    bad[0, 1] += 0.1
    assert ampsim.verify_exponential(bad, 1.0) > 1e-2
    u = ampsim.propagator_matrix(5, 0.5)
    assert np.allclose(u @ u, ampsim.propagator_matrix(5, 1.0))


def test_born_weights():
    a = ampsim.BranchAmplitudes(0.6, 0.8j)
    assert ampsim.time_average(a, 7).mean == pytest.approx(0.64 * (1 - 1 / 7), abs=1e-12)
    assert ampsim.orbit_compressed_average(a, 1009).mean == pytest.approx(0.64 * (1 - 1 / 1009), abs=1e-12)
    rows = ampsim.born_limit_sweep(a, [5, 7, 101])
    assert [r.path for r in rows] == ["dense", "dense", "orbit_compressed"]
    report = ampsim.compare_limit(a, ampsim.born_limit_sweep(a, [5, 101, 1009]), 1e-3)
    assert report.pass_
    assert report.fitted_intercept == pytest.approx(0.64)


def test_pointer_observable():
    c = ampsim.CockedSet(5, 0.0)
    r = 1 / math.sqrt(2)
    assert c.contains_digits("11000")
    assert ampsim.f_n({3: 1.0}, {6: 1.0}, r, r, c) == pytest.approx(0.5)
    with pytest.raises(ampsim.NotNormalized):
        ampsim.f_n({3: 1.0}, {6: 1.0}, 1.0, 1.0, c)


def test_fkm_curves():
    chain = ampsim.HarmonicChain.scaled_ring(8, beta=2.0)
    grid = ampsim.uniform_grid(5.0, 21)
    exact = ampsim.phase_autocorrelation(chain, grid)
    assert exact.values[0] == 0.5
    mc = ampsim.phase_autocorrelation_mc(chain, grid, 20000, seed=1)
    z = np.abs(np.array(mc.values) - exact.values) / np.array(mc.standard_errors)
    assert z.max() < 5
    tau = np.linspace(0, 4, 50)
    fit = ampsim.ou_fit(tau.tolist(), np.exp(-1.5 * tau).tolist())
    assert fit.gamma == pytest.approx(1.5)


def test_run_config():
    code, out, err = ampsim.run(json.dumps({"command": "born sweep", "params": {"n": [5, 7]}}))
    assert code == 0
    assert out.splitlines()[0] == "n,mean,born_weight,abs_error"
    code, out, err = ampsim.run(json.dumps({"command": "born sweep", "params": {"n": [4]}}))
    assert code == 2
    assert "n must be prime" in err
