"""Constants in the entropy/gamma and triple-product relations, measured against direct evaluation."""

import numpy as np
import pytest

from conftest import random_states
from fts_entangle import invariants as inv


def test_measured_constants_are_state_independent():
    s = random_states(500, 10)
    r = inv.calibration_ratios(s)
    assert np.allclose(r["c1"], float(inv.ENTROPY_GAMMA_C1), rtol=1e-10)
    assert np.allclose(r["c2"], float(inv.ENTROPY_GAMMA_C2), rtol=1e-10)
    assert np.allclose(r["kappa"], float(inv.TRIPLE_PRODUCT_KAPPA), rtol=1e-10)


def test_printed_constants_leave_residuals():
    s = random_states(50, 11)
    rel = inv.entropy_gamma_relations(s)
    for v in rel["residual"].values():
        assert np.allclose(v, 0, atol=1e-10)
    for v in rel["residual_printed"].values():
        assert np.min(np.abs(v)) > 1e-3


def test_t_norm_relation_measured_fit():
    s = random_states(200, 12)
    rep = inv.t_kempe_relation(s)
    assert np.allclose(rep.t_norm_sq, rep.rhs_measured, rtol=1e-10)
    assert not np.allclose(rep.t_norm_sq, rep.rhs_printed)


def test_t_norm_relation_at_ghz():
    ghz = inv.representative("GHZ") / np.sqrt(2)
    rep = inv.t_kempe_relation(ghz)
    assert rep.t_norm_sq == pytest.approx(0.25)
    assert rep.rhs_printed == pytest.approx(-31 / 48)
    assert rep.rhs_measured == pytest.approx(0.25)
    assert rep.t_symplectic == pytest.approx(0)


def test_exact_calibration(rng):
    from conftest import random_exact_state

    s = random_exact_state(rng)
    rel = inv.entropy_gamma_relations(s)
    assert all(v == 0 for v in rel["residual"].values())
