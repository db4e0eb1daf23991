"""SLOCC classification of three-qubit states.

Two independent routes are provided: the FTS rank cascade (q, then T, then the
gammas, then the rank-1 test) and the conventional test on the local entropies
and the hyperdeterminant. In float mode every state is first scaled to unit
norm, so the degree-scaled zero tests ``|cov| <= eps * |psi|^k`` become plain
``|cov| <= eps``. Exact mode compares against zero.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels, fts
from . import invariants as inv
from .scalars import is_exact


class EntanglementClass(str, Enum):
    NULL = "Null"
    SEPARABLE = "A-B-C"
    A_BC = "A-BC"
    B_CA = "B-CA"
    C_AB = "C-AB"
    W = "W"
    GHZ = "GHZ"


class FtsRank(str, Enum):
    RANK_0 = "0"
    RANK_1 = "1"
    RANK_2A = "2a"
    RANK_2B = "2b"
    RANK_2C = "2c"
    RANK_3 = "3"
    RANK_4 = "4"


# index i of CLASS_ORDER is the integer code used by the batch functions
CLASS_ORDER = tuple(EntanglementClass)
RANK_ORDER = tuple(FtsRank)
RANK_OF = dict(zip(CLASS_ORDER, RANK_ORDER))
CLASS_OF = dict(zip(RANK_ORDER, CLASS_ORDER))

AMBIGUOUS = -1
INCONSISTENT = -2

DEFAULT_EPSILON = 1e-9
EPSILON_ENV = "FTS_ENTANGLE_EPSILON"


class ClassificationError(Exception):
    pass


class ToleranceAmbiguityError(ClassificationError):
    """More than one gamma is above threshold while T vanishes; the state is numerically marginal."""


class InconsistencyError(ClassificationError):
    """An internal cross-check failed (rank-1 test, entropy-table pattern, or dual-route mismatch)."""


@dataclass(frozen=True)
class ToleranceConfig:
    epsilon: float = DEFAULT_EPSILON
    null_floor: float = 1e-30
    exact: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.null_floor < 0:
            raise ValueError("null_floor must be non-negative")

    @classmethod
    def from_env(cls, **overrides) -> "ToleranceConfig":
        """Default config with epsilon taken from ``FTS_ENTANGLE_EPSILON`` when set."""
        env = os.environ.get(EPSILON_ENV)
        if env is not None and "epsilon" not in overrides:
            overrides["epsilon"] = float(env)
        return cls(**overrides)


@dataclass(frozen=True)
class RealOrbitTag:
    q_sign: str
    gamma_signatures: tuple[str, str, str]
    orbit_label: str

    @property
    def signature_key(self) -> str:
        """Compact sign triple, e.g. ``"-++"``; distinguishes SL(2,R)^3 orbits at fixed q."""
        sym = {"positive-definite": "+", "negative-definite": "-", "indefinite": "i", "degenerate": "0"}
        return "".join(sym[s] for s in self.gamma_signatures)

    @property
    def family(self) -> str:
        return signature_family(self.gamma_signatures) if self.q_sign == "positive" else self.orbit_label


@dataclass
class Classification:
    rank: FtsRank
    cls: EntanglementClass
    q: object
    marginal: bool = False
    flags: list[str] = field(default_factory=list)
    real_tag: Optional[RealOrbitTag] = None


class Rank1Witness(NamedTuple):
    is_rank1: bool
    basis_index: Optional[int]
    basis_label: Optional[str]
    magnitude: float


# --- float covariant measures ----------------------------------------------------------


@dataclass
class _Measures:
    null: np.ndarray
    scale: np.ndarray
    unit: np.ndarray
    q: np.ndarray
    q_mag: np.ndarray
    t_mag: np.ndarray
    g_mag: np.ndarray


def _measures(states: np.ndarray, tol: ToleranceConfig) -> _Measures:
    s = np.asarray(states, dtype=np.complex128).reshape(-1, 8)
    norm = np.sqrt(inv.norm_sq(s))
    null = norm <= tol.null_floor
    scale = np.where(null, 1.0, norm)
    unit = s / scale[:, None]
    q, t, g = _kernels.covariants(unit)
    return _Measures(
        null=null,
        scale=scale,
        unit=unit,
        q=q * scale**4,
        q_mag=np.abs(q),
        t_mag=np.max(np.abs(t), axis=-1),
        g_mag=np.max(np.abs(g), axis=(-2, -1)),
    )


def _near(x, eps):
    return (x > eps / 10) & (x < eps * 10)


def _upsilon_magnitudes(unit: np.ndarray) -> np.ndarray:
    """(N, 8) max-modulus of Upsilon(psi, e_k) over the FTS basis."""
    psi = inv.to_fts(unit)
    cols = [fts.max_abs(fts.upsilon(psi, e)) for e in fts.basis()]
    return np.stack([np.broadcast_to(c, unit.shape[:1]) for c in cols], axis=-1)


@dataclass
class BatchResult:
    codes: np.ndarray
    marginal: np.ndarray
    q: np.ndarray

    def classes(self) -> list:
        return [CLASS_ORDER[c] if c >= 0 else None for c in self.codes]


def classify_fts_batch(states, tol: ToleranceConfig | None = None, check_rank1: bool = True) -> BatchResult:
    """Vectorised FTS rank cascade over a ``(N, 8)`` float batch.

    ``codes`` index :data:`CLASS_ORDER`; :data:`AMBIGUOUS` marks several gammas
    above threshold, :data:`INCONSISTENT` a separable verdict that fails the
    rank-1 test.
    """
    tol = tol or ToleranceConfig.from_env()
    m = _measures(states, tol)
    eps = tol.epsilon
    n = m.null.shape[0]
    codes = np.full(n, 1, dtype=np.int64)
    ghz = ~m.null & (m.q_mag > eps)
    w = ~m.null & ~ghz & (m.t_mag > eps)
    rest = ~m.null & ~ghz & ~w
    above = m.g_mag > eps
    count = above.sum(axis=-1)
    codes[rest & (count == 1)] = 2 + np.argmax(above, axis=-1)[rest & (count == 1)]
    codes[rest & (count > 1)] = AMBIGUOUS
    codes[w] = 5
    codes[ghz] = 6
    codes[m.null] = 0

    marginal = ~m.null & _near(m.q_mag, eps)
    marginal |= (~m.null & ~ghz) & _near(m.t_mag, eps)
    marginal |= rest & np.any(_near(m.g_mag, eps), axis=-1)

    sep = np.flatnonzero(codes == 1)
    if check_rank1 and sep.size:
        ups = _upsilon_magnitudes(m.unit[sep])
        codes[sep[np.max(ups, axis=-1) > eps]] = INCONSISTENT
    return BatchResult(codes=codes, marginal=marginal, q=m.q)


def _exact_cascade(s) -> int:
    if inv.norm_sq(s) == 0:
        return 0
    if inv.quartic_norm(s) != 0:
        return 6
    if any(v != 0 for v in inv.t_cubic_fast(s)):
        return 5
    g = inv.gamma_matrices(s)
    nonzero = [any(v != 0 for v in m.ravel()) for m in g]
    if sum(nonzero) > 1:
        raise InconsistencyError("exact state with T = 0 has more than one nonzero gamma")
    if sum(nonzero) == 1:
        return 2 + nonzero.index(True)
    if not rank1_witness(s, ToleranceConfig(exact=True)).is_rank1:
        raise InconsistencyError("all gammas vanish but the rank-1 test fails")
    return 1


def _single(s):
    s = np.asarray(s)
    if s.shape != (8,):
        raise ValueError(f"expected a single state of 8 amplitudes, got shape {s.shape}")
    return s


def _raise_for(code: int):
    if code == AMBIGUOUS:
        raise ToleranceAmbiguityError("several gammas are above threshold although T vanishes")
    if code == INCONSISTENT:
        raise InconsistencyError("all gammas vanish but the rank-1 test fails")


def classify_fts(s, tol: ToleranceConfig | None = None) -> tuple[FtsRank, EntanglementClass]:
    """FTS rank and class of one state."""
    tol = tol or ToleranceConfig.from_env()
    s = _single(s)
    if tol.exact or is_exact(s):
        code = _exact_cascade(inv.as_state(s, exact=True))
    else:
        code = int(classify_fts_batch(s[None, :], tol).codes[0])
        _raise_for(code)
    return RANK_ORDER[code], CLASS_ORDER[code]


# --- conventional route ------------------------------------------------------------------

# (S_A, S_B, S_C, Det a) nonvanishing pattern -> class code, for nonzero states
_ENTROPY_TABLE = {
    (False, False, False, False): 1,
    (False, True, True, False): 2,
    (True, False, True, False): 3,
    (True, True, False, False): 4,
    (True, True, True, False): 5,
    (True, True, True, True): 6,
}


def classify_conventional_batch(states, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Table-of-vanishing-invariants classification; INCONSISTENT where no row matches."""
    tol = tol or ToleranceConfig.from_env()
    s = np.asarray(states, dtype=np.complex128).reshape(-1, 8)
    norm = np.sqrt(inv.norm_sq(s))
    null = norm <= tol.null_floor
    unit = s / np.where(null, 1.0, norm)[:, None]
    sa, sb, sc = inv.local_entropies(unit)
    det = np.abs(inv.hyperdet(unit))
    eps = tol.epsilon
    pattern = np.stack([sa > eps, sb > eps, sc > eps, det > eps], axis=-1)
    weights = np.array([8, 4, 2, 1])
    lookup = np.full(16, INCONSISTENT, dtype=np.int64)
    for key, code in _ENTROPY_TABLE.items():
        lookup[int(np.dot(np.array(key, dtype=int), weights))] = code
    codes = lookup[pattern.astype(int) @ weights]
    codes[null] = 0
    return codes


def classify_conventional(s, tol: ToleranceConfig | None = None) -> EntanglementClass:
    tol = tol or ToleranceConfig.from_env()
    s = _single(s)
    if tol.exact or is_exact(s):
        s = inv.as_state(s, exact=True)
        if inv.norm_sq(s) == 0:
            return EntanglementClass.NULL
        key = tuple(bool(v != 0) for v in inv.local_entropies(s)) + (inv.hyperdet(s) != 0,)
        code = _ENTROPY_TABLE.get(key, INCONSISTENT)
    else:
        code = int(classify_conventional_batch(s[None, :], tol)[0])
    if code == INCONSISTENT:
        raise InconsistencyError("invariant pattern matches no row of the conventional table")
    return CLASS_ORDER[code]


# --- rank-1 test ---------------------------------------------------------------------------


def rank1_witness(s, tol: ToleranceConfig | None = None) -> Rank1Witness:
    """Whether Upsilon(psi, e) vanishes on all 8 basis elements (hence for all phi).

    On failure the basis element with the largest Upsilon is returned as witness.
    """
    tol = tol or ToleranceConfig.from_env()
    s = _single(s)
    if tol.exact or is_exact(s):
        s = inv.as_state(s, exact=True)
        psi = inv.to_fts(s)
        best, best_mag = None, 0.0
        for k, e in enumerate(fts.basis()):
            comps = fts.upsilon(psi, e).components()
            if any(c != 0 for c in comps):
                mag = max(abs(complex(c)) for c in comps)
                if mag > best_mag:
                    best, best_mag = k, mag
        if best is None:
            return Rank1Witness(True, None, None, 0.0)
        return Rank1Witness(False, best, fts.BASIS_LABELS[best], best_mag)
    norm = float(np.sqrt(inv.norm_sq(s.astype(np.complex128))))
    if norm <= tol.null_floor:
        return Rank1Witness(True, None, None, 0.0)
    ups = _upsilon_magnitudes((s / norm)[None, :].astype(np.complex128))[0]
    k = int(np.argmax(ups))
    if ups[k] <= tol.epsilon:
        return Rank1Witness(True, None, None, float(ups[k]))
    return Rank1Witness(False, k, fts.BASIS_LABELS[k], float(ups[k]))


def rank1_witness_batch(states, tol: ToleranceConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(is_rank1, witness_index) arrays; witness_index is -1 where the test passes."""
    tol = tol or ToleranceConfig.from_env()
    s = np.asarray(states, dtype=np.complex128).reshape(-1, 8)
    norm = np.sqrt(inv.norm_sq(s))
    null = norm <= tol.null_floor
    ups = _upsilon_magnitudes(s / np.where(null, 1.0, norm)[:, None])
    ok = null | (np.max(ups, axis=-1) <= tol.epsilon)
    return ok, np.where(ok, -1, np.argmax(ups, axis=-1))


# --- real states ---------------------------------------------------------------------------


def _signatures(q_positive: bool, gammas) -> tuple[str, str, str]:
    # det gamma^X = q/2 for every X, so at rank 4 no gamma is degenerate and
    # only the trace sign is left to read off (|tr| >= 2 sqrt(det) when definite)
    if not q_positive:
        return ("indefinite",) * 3
    out = []
    for m in gammas:
        tr = m[0, 0] + m[1, 1]
        out.append("positive-definite" if tr.real > 0 else "negative-definite")
    return tuple(out)


def real_orbit_label(q_sign: str, signatures: tuple[str, str, str]) -> str:
    """Orbit tag of a real GHZ-class state.

    q < 0 is a single SL(2,R)^3 orbit per q value. For q > 0 the tag carries
    the full gamma signature triple, e.g. ``"U(1)^2[-++]"``; each gamma is
    definite and the triple is preserved by SL(2,R)^3 congruence.
    """
    if q_sign == "negative":
        return "SO(1,1)^2"
    if q_sign == "positive":
        sym = {"positive-definite": "+", "negative-definite": "-", "indefinite": "i", "degenerate": "0"}
        return "U(1)^2[" + "".join(sym[s] for s in signatures) + "]"
    return "none"


def signature_family(signatures: tuple[str, str, str]) -> str:
    """Coarse grouping of q > 0 triples: one negative-definite gamma vs all three.

    Permuting the parties maps the three one-negative triples into each other.
    """
    negatives = sum(s == "negative-definite" for s in signatures)
    return {1: "one-negative", 3: "all-negative"}.get(negatives, f"{negatives}-negative")


def classify_real(s, tol: ToleranceConfig | None = None):
    """(rank, class, tag) for a real-amplitude state; tag is None below rank 4."""
    tol = tol or ToleranceConfig.from_env()
    s = _single(s)
    exact = tol.exact or is_exact(s)
    if exact:
        s = inv.as_state(s, exact=True)
        if any(v.imag != 0 for v in s):
            raise ValueError("classify_real needs real amplitudes")
    else:
        s = np.asarray(s, dtype=np.complex128)
        if np.any(s.imag != 0):
            raise ValueError("classify_real needs real amplitudes")
    rank, cls = classify_fts(s, tol)
    if cls is not EntanglementClass.GHZ:
        return rank, cls, None
    if exact:
        q_positive = inv.quartic_norm(s).real > 0
        gammas = inv.gamma_matrices(s)
    else:
        unit = s / np.sqrt(inv.norm_sq(s))
        q_positive = float(np.real(inv.quartic_norm(unit))) > 0
        gammas = inv.gamma_matrices(unit)
    q_sign = "positive" if q_positive else "negative"
    sigs = _signatures(q_positive, gammas)
    return rank, cls, RealOrbitTag(q_sign, sigs, real_orbit_label(q_sign, sigs))


# --- full record -----------------------------------------------------------------------------


def classify(s, tol: ToleranceConfig | None = None, real: bool = False) -> Classification:
    """Classification with q, marginality flags and (optionally) the real-orbit tag."""
    tol = tol or ToleranceConfig.from_env()
    s = _single(s)
    exact = tol.exact or is_exact(s)
    flags: list[str] = []
    tag = None
    if real:
        rank, cls, tag = classify_real(s, tol)
    else:
        rank, cls = classify_fts(s, tol)
    if exact:
        q = inv.quartic_norm(inv.as_state(s, exact=True))
        marginal = False
    else:
        res = classify_fts_batch(np.asarray(s, dtype=np.complex128)[None, :], tol, check_rank1=False)
        q = complex(res.q[0])
        marginal = bool(res.marginal[0])
        if marginal:
            flags.append("tolerance-marginal")
    return Classification(rank=rank, cls=cls, q=q, marginal=marginal, flags=flags, real_tag=tag)


# --- hierarchy -------------------------------------------------------------------------------

HIERARCHY_EDGES = (
    ("GHZ", "A-BC"),
    ("GHZ", "B-CA"),
    ("GHZ", "C-AB"),
    ("W", "A-BC"),
    ("W", "B-CA"),
    ("W", "C-AB"),
    ("A-BC", "A-B-C"),
    ("B-CA", "A-B-C"),
    ("C-AB", "A-B-C"),
    ("A-B-C", "Null"),
)


def hierarchy_export() -> str:
    """Covering relations of the non-invertible SLOCC order, one ``source -> target`` per line.

    Lines starting with ``#`` are comments. Only covering edges are listed; the
    order is their transitive closure. GHZ and W are incomparable.
    """
    lines = [
        "# three-qubit SLOCC entanglement hierarchy",
        "# format: <source> -> <target>  (non-invertible SLOCC map exists; transitive edges omitted)",
    ]
    lines += [f"{a} -> {b}" for a, b in HIERARCHY_EDGES]
    return "\n".join(lines) + "\n"
