import numpy as np
import pytest

from conftest import random_states
from fts_entangle import classifier as clf
from fts_entangle import invariants as inv
from fts_entangle import slocc
from fts_entangle.classifier import EntanglementClass as EC
from fts_entangle.classifier import FtsRank as R

EXPECTED = {
    "Null": (R.RANK_0, EC.NULL),
    "A-B-C": (R.RANK_1, EC.SEPARABLE),
    "A-BC": (R.RANK_2A, EC.A_BC),
    "B-CA": (R.RANK_2B, EC.B_CA),
    "C-AB": (R.RANK_2C, EC.C_AB),
    "W": (R.RANK_3, EC.W),
    "GHZ": (R.RANK_4, EC.GHZ),
}


def real_ket(signs):
    s = np.zeros(8)
    for label, v in signs.items():
        s[int(label, 2)] = v
    return s


@pytest.mark.parametrize("name", EXPECTED)
@pytest.mark.parametrize("exact", [False, True])
def test_representatives(name, exact):
    s = inv.representative(name, exact=exact)
    assert clf.classify_fts(s) == EXPECTED[name]
    assert clf.classify_conventional(s) == EXPECTED[name][1]


def test_rank_class_correspondence():
    for rank, cls in clf.CLASS_OF.items():
        assert clf.RANK_OF[cls] is rank


def test_separable_non_basis_state():
    s = np.kron(np.kron([1, 2j], [3, -1]), [0.5, 1])
    assert clf.classify_fts(s) == (R.RANK_1, EC.SEPARABLE)


def test_slocc_image_of_ghz():
    s = slocc.apply_slocc(slocc.random_slocc(5), inv.representative("GHZ"))
    assert clf.classify_conventional(s) is EC.GHZ


def test_triality_equivariance():
    s = inv.representative("A-BC")
    assert clf.classify_fts(inv.permute_parties(s, (1, 2, 0)))[1] in (EC.B_CA, EC.C_AB)
    images = {clf.classify_fts(inv.permute_parties(s, p))[1] for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]}
    assert images == {EC.A_BC, EC.B_CA, EC.C_AB}
    for name in ("W", "GHZ", "A-B-C"):
        assert clf.classify_fts(inv.permute_parties(inv.representative(name), (2, 0, 1)))[1] is EXPECTED[name][1]


def test_ambiguity_diagnostic():
    d = 1e-5
    s = inv.representative("A-BC") + d * inv.ket("100") + d * inv.ket("111")
    with pytest.raises(clf.ToleranceAmbiguityError):
        clf.classify_fts(s, clf.ToleranceConfig(epsilon=8e-6))
    assert clf.classify_fts_batch(s[None], clf.ToleranceConfig(epsilon=8e-6)).codes[0] == clf.AMBIGUOUS


def test_marginal_flag():
    t = 2e-3  # normalised q is about -8e-6
    s = inv.ket("000") + t * inv.ket("111")
    res = clf.classify(s, clf.ToleranceConfig(epsilon=2e-6))
    assert res.cls is EC.GHZ and res.marginal and "tolerance-marginal" in res.flags
    assert not clf.classify(inv.representative("GHZ")).marginal


def test_conventional_pattern_mismatch():
    # a threshold between the two largest entropies leaves exactly one above it
    s = random_states(1, 21)[0]
    ent = np.sort(inv.local_entropies(s / np.linalg.norm(s)))
    tol = clf.ToleranceConfig(epsilon=float(ent[1] + ent[2]) / 2)
    with pytest.raises(clf.InconsistencyError):
        clf.classify_conventional(s, tol)
    assert clf.classify_conventional_batch(s[None], tol)[0] == clf.INCONSISTENT


def test_tolerance_config(monkeypatch):
    with pytest.raises(ValueError):
        clf.ToleranceConfig(epsilon=0)
    monkeypatch.setenv(clf.EPSILON_ENV, "1e-6")
    assert clf.ToleranceConfig.from_env().epsilon == 1e-6
    assert clf.ToleranceConfig.from_env(epsilon=1e-3).epsilon == 1e-3


def test_rank1_witness():
    assert clf.rank1_witness(inv.ket("111")).is_rank1
    assert clf.rank1_witness(np.zeros(8)).is_rank1
    w = clf.rank1_witness(inv.representative("A-BC"))
    assert not w.is_rank1 and w.basis_label is not None and w.magnitude > 0
    exact = clf.rank1_witness(inv.representative("A-BC", exact=True))
    assert not exact.is_rank1 and exact.basis_index is not None
    ok, idx = clf.rank1_witness_batch(np.stack([inv.ket("010"), inv.representative("W")]))
    assert list(ok) == [True, False] and idx[0] == -1 and idx[1] >= 0


def test_classify_real_examples():
    _, _, tag = clf.classify_real(inv.representative("GHZ").real)
    assert tag.q_sign == "negative" and tag.orbit_label == "SO(1,1)^2"
    _, _, tag = clf.classify_real(real_ket({"000": 1, "011": -1, "101": 1, "110": 1}))
    assert tag.q_sign == "positive"
    assert tag.gamma_signatures == ("negative-definite", "positive-definite", "positive-definite")
    _, _, tag = clf.classify_real(real_ket({"000": 1, "011": 1, "101": 1, "110": -1}))
    assert tag.signature_key == "++-" and tag.family == "one-negative"
    _, _, tag = clf.classify_real(real_ket({"000": 1, "011": -1, "101": -1, "110": -1}))
    assert tag.signature_key == "---" and tag.family == "all-negative"
    assert clf.classify_real(inv.representative("W").real)[2] is None


def test_classify_real_rejects_complex():
    with pytest.raises(ValueError):
        clf.classify_real(inv.representative("GHZ") * 1j)


def test_real_signatures_match_eigenvalues():
    s = random_states(200, 20, real=True)
    for state in s:
        rank, _, tag = clf.classify_real(state)
        if tag is None or tag.q_sign != "positive":
            continue
        unit = state / np.linalg.norm(state)
        for m, sig in zip(inv.gamma_matrices(unit), tag.gamma_signatures):
            ev = np.linalg.eigvalsh(m.real)
            assert sig == ("positive-definite" if ev.min() > 0 else "negative-definite")
            assert np.sign(ev[0]) == np.sign(ev[1])


def test_exact_real_tag():
    s = inv.as_state([1, 0, 0, -1, 0, 1, 1, 0], exact=True)
    _, _, tag = clf.classify_real(s)
    assert tag.signature_key == "-++"


def test_hierarchy_export():
    text = clf.hierarchy_export()
    edges = {tuple(line.split(" -> ")) for line in text.splitlines() if not line.startswith("#")}
    assert ("GHZ", "A-BC") in edges and ("W", "A-BC") in edges
    assert ("GHZ", "W") not in edges and ("W", "GHZ") not in edges
    assert ("GHZ", "Null") not in edges
    assert len(edges) == 10


def test_batch_agrees_with_single():
    reps = np.stack([inv.representative(n) for n in EXPECTED])
    ops = slocc.random_slocc_batch(3, 70)
    imgs = slocc.apply_slocc_batch(ops, np.repeat(reps, 10, axis=0))
    codes = clf.classify_fts_batch(imgs).codes
    assert list(codes) == list(np.repeat(np.arange(7), 10))
    assert [clf.classify_fts(s)[1] for s in imgs[::7]] == [clf.CLASS_ORDER[c] for c in codes[::7]]
