import numpy as np
import pytest

from conftest import random_exact_state, random_states
from fts_entangle import fts, invariants as inv, slocc


def normed(s):
    return s / np.linalg.norm(s)


def test_dictionary_roundtrip():
    s = random_states(10, 1)
    assert np.allclose(inv.from_fts(inv.to_fts(s)), s)
    x = inv.to_fts(inv.ket("111"))
    assert (x.alpha, x.beta) == (1, 0)
    x = inv.to_fts(inv.ket("000"))
    assert (x.alpha, x.beta) == (0, 1)


def test_as_state_validates():
    with pytest.raises(ValueError):
        inv.as_state([1, 2, 3])
    with pytest.raises(ValueError):
        inv.as_state([])


def test_representatives_table():
    w = normed(inv.representative("W"))
    assert np.allclose(inv.local_entropies(w), [8 / 9] * 3)
    assert inv.three_tangle(w) == pytest.approx(0)
    ghz = normed(inv.representative("GHZ"))
    assert inv.three_tangle(ghz) == pytest.approx(1)
    assert np.allclose(inv.local_entropies(ghz), [1, 1, 1])
    prod = inv.ket("000")
    rep = inv.invariant_report(prod)
    assert rep.norm_sq == 1 and rep.kempe == pytest.approx(1)
    assert rep.s_a == rep.s_b == rep.s_c == 0 and rep.tangle == 0


def test_q_chain():
    s = random_states(200, 2)
    q = inv.quartic_norm(s)
    for g in inv.gamma_matrices(s):
        assert np.allclose(q, 2 * inv.det2(g))
    assert np.allclose(q, -2 * inv.hyperdet_oracle(s))
    assert np.allclose(q, fts.quartic_norm(inv.to_fts(s)))


def test_kempe_forms_agree():
    s = random_states(200, 3)
    ref = inv.kempe(s, "AB")
    assert np.allclose(inv.kempe(s, "BC"), ref)
    assert np.allclose(inv.kempe(s, "CA"), ref)
    # the unit-weight expression is not symmetric under party exchange
    assert not np.allclose(inv.kempe(s, "BC", weight=1), inv.kempe(s, "AB", weight=1))


def test_printed_kempe_values():
    assert inv.kempe(normed(inv.representative("GHZ")), weight=1) == pytest.approx(-0.25)
    assert inv.kempe(normed(inv.representative("GHZ"))) == pytest.approx(0.25)
    assert inv.kempe(inv.ket("000"), weight=1) == pytest.approx(-1)


def test_t_forms_agree():
    s = random_states(100, 4)
    ref = inv.t_cubic_fts(s)
    for form in "ABC":
        assert np.allclose(inv.t_cubic_fast(s, form), ref)


def test_gamma_covariance():
    s = random_states(1, 5)[0]
    g = slocc.random_slocc(9)
    moved = inv.gamma_matrices(slocc.apply_slocc(g, s))
    for m, new, old in zip(g.stacked(), moved, inv.gamma_matrices(s)):
        assert np.allclose(new, m @ old @ m.T)


def test_permute_parties_cycles_entropies():
    s = random_states(1, 6)[0]
    sa, sb, sc = inv.local_entropies(s)
    p = inv.permute_parties(s, (1, 2, 0))
    assert sorted(np.round(inv.local_entropies(p), 10)) == sorted(np.round([sa, sb, sc], 10))
    assert inv.quartic_norm(p) == pytest.approx(inv.quartic_norm(s))


def test_reduced_density_properties():
    s = normed(random_states(1, 7)[0])
    for keep in ("A", "B", "C", "AB", "BC", "CA"):
        r = inv.reduced_density(s, keep)
        assert np.allclose(r, r.conj().T) if r.ndim == 2 else True
        assert np.trace(r.reshape(r.shape[0] if r.ndim == 2 else 4, -1)).real == pytest.approx(1)


def test_exact_mode(rng):
    ghz = inv.representative("GHZ", exact=True)
    assert inv.quartic_norm(ghz) == -2
    assert inv.hyperdet(ghz) == 1
    assert inv.hyperdet_oracle(ghz) == 1
    s = random_exact_state(rng)
    for g in inv.gamma_matrices(s):
        assert inv.quartic_norm(s) == 2 * inv.det2(g)
