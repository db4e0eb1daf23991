"""SL(2)^3 action on three-qubit states, its Lie algebra, and orbit dimensions.

The algebra sl(2)^3 is parametrised two ways: three traceless 2x2 matrices
(basis H, E, F per party, parties in order A, B, C), and the FTS triple
``(C, X, Y)`` of Jordan elements acting on ``(alpha, beta, A, B)``. Orbit and
stabiliser dimensions come from the numerical rank of the tangent map at a
state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import classifier, jordan
from . import invariants as inv
from .fts import FtsElement
from .jordan import JordanElement
from .scalars import is_exact

DET_TOL = 1e-10
SINGULAR_DRAW = 1e-6
MAX_CONDITION = 1e3
RANK_EPSILON = 1e-8
MIN_GAP = 1e3


class IndeterminateRankError(ValueError):
    """The singular values show no clear gap at the rank threshold."""


class SpanMismatchError(RuntimeError):
    """The two algebra parametrisations span different tangent spaces."""


# --- group action -------------------------------------------------------------------


@dataclass(frozen=True)
class LocalOperator:
    op_a: np.ndarray
    op_b: np.ndarray
    op_c: np.ndarray

    def __post_init__(self):
        for name in ("op_a", "op_b", "op_c"):
            m = getattr(self, name)
            if np.shape(m) != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if is_exact(np.asarray(m)):
                if det != 1:
                    raise ValueError(f"{name} has determinant {det}, not 1")
            elif abs(complex(det) - 1) > DET_TOL:
                raise ValueError(f"{name} has determinant {complex(det)}, not 1")

    def stacked(self) -> np.ndarray:
        return np.stack([self.op_a, self.op_b, self.op_c])

    def condition(self) -> float:
        """Condition number of op_a x op_b x op_c acting on the 8-dim state space."""
        return float(np.prod([np.linalg.cond(np.asarray(m, dtype=complex)) for m in (self.op_a, self.op_b, self.op_c)]))

    @classmethod
    def identity(cls) -> "LocalOperator":
        return cls(np.eye(2, dtype=complex), np.eye(2, dtype=complex), np.eye(2, dtype=complex))


def _contract(ma, mb, mc, s):
    t = s.reshape(s.shape[:-1] + (2, 2, 2))
    out = np.einsum("...ia,...jb,...kc,...abc->...ijk", ma, mb, mc, t)
    return out.reshape(s.shape)


def apply_slocc(g: LocalOperator, s) -> np.ndarray:
    """a'_{ijk} = (op_a)_{ia} (op_b)_{jb} (op_c)_{kc} a_{abc}; broadcasts over a batch of states."""
    s = np.asarray(s)
    return _contract(g.op_a, g.op_b, g.op_c, s)


def apply_slocc_batch(ops: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Apply ``ops[n]`` (shape ``(N, 3, 2, 2)``) to ``states[n]``."""
    return _contract(ops[:, 0], ops[:, 1], ops[:, 2], np.asarray(states))


def _draw_triples(rng, n, spread, real, max_condition):
    dtype = np.float64 if real else np.complex128
    out = np.empty((0, 3, 2, 2), dtype=dtype)
    while out.shape[0] < n:
        k = 2 * (n - out.shape[0]) + 8
        m = rng.uniform(-spread, spread, (k, 3, 2, 2))
        if not real:
            m = m + 1j * rng.uniform(-spread, spread, (k, 3, 2, 2))
        det = np.linalg.det(m)
        keep = np.all(np.abs(det) >= SINGULAR_DRAW, axis=-1)
        m, det = m[keep], det[keep]
        if real:
            # flip the first row of negative-determinant draws into SL(2,R)
            flip = det < 0
            m[..., 0, :] = np.where(flip[..., None], -m[..., 0, :], m[..., 0, :])
            det = np.abs(det)
        m = m / np.sqrt(det)[..., None, None]
        m = m[np.prod(np.linalg.cond(m), axis=-1) <= max_condition]
        out = np.concatenate([out, m])
    return out[:n]


def random_slocc_batch(
    seed: int, n: int, spread: float = 1.0, real: bool = False, max_condition: float = MAX_CONDITION
) -> np.ndarray:
    """``(n, 3, 2, 2)`` seeded draws from SL(2)^3 with entries in ``[-spread, spread]`` before scaling.

    Draws with a near-singular factor (|det| < 1e-6) are resampled, as are
    operators whose condition number on state space (the product of the three
    factor condition numbers) exceeds ``max_condition``.
    """
    if not spread > 0:
        raise ValueError("spread must be positive")
    rng = np.random.default_rng(seed)
    return _draw_triples(rng, n, spread, real, max_condition)


def random_slocc(
    seed: int, spread: float = 1.0, real: bool = False, max_condition: float = MAX_CONDITION
) -> LocalOperator:
    m = random_slocc_batch(seed, 1, spread, real, max_condition)[0]
    return LocalOperator(m[0], m[1], m[2])


# --- Lie algebra, standard coordinates -------------------------------------------------

SL2_LABELS = ("H", "E", "F")
SL2_BASIS = (
    np.array([[1, 0], [0, -1]]),
    np.array([[0, 1], [0, 0]]),
    np.array([[0, 0], [1, 0]]),
)


@dataclass(frozen=True)
class AlgebraElementStd:
    e_a: np.ndarray
    e_b: np.ndarray
    e_c: np.ndarray

    def __post_init__(self):
        for name in ("e_a", "e_b", "e_c"):
            m = np.asarray(getattr(self, name))
            if m.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            tr = m[0, 0] + m[1, 1]
            if (tr != 0) if is_exact(m) else abs(complex(tr)) > DET_TOL:
                raise ValueError(f"{name} is not traceless")


def std_algebra_basis() -> tuple[AlgebraElementStd, ...]:
    """Nine basis elements ordered (A:H,E,F), (B:H,E,F), (C:H,E,F)."""
    zero = np.zeros((2, 2), dtype=np.int64)
    out = []
    for party in range(3):
        for m in SL2_BASIS:
            mats = [zero, zero, zero]
            mats[party] = m
            out.append(AlgebraElementStd(*mats))
    return tuple(out)


def std_algebra_action(e: AlgebraElementStd, s) -> np.ndarray:
    """(e_A x 1 x 1 + 1 x e_B x 1 + 1 x 1 x e_C) a."""
    s = np.asarray(s)
    t = s.reshape(s.shape[:-1] + (2, 2, 2))
    out = (
        np.einsum("ia,...ajk->...ijk", e.e_a, t)
        + np.einsum("jb,...ibk->...ijk", e.e_b, t)
        + np.einsum("kc,...ijc->...ijk", e.e_c, t)
    )
    return out.reshape(s.shape)


# --- Lie algebra, FTS coordinates ------------------------------------------------------


@dataclass(frozen=True)
class AlgebraElementFts:
    c: JordanElement
    x: JordanElement
    y: JordanElement


def fts_algebra_basis() -> tuple[AlgebraElementFts, ...]:
    """Nine basis elements: C = e_i, then X = e_i, then Y = e_i."""
    z = jordan.zero()
    out = [AlgebraElementFts(jordan.unit(i), z, z) for i in range(3)]
    out += [AlgebraElementFts(z, jordan.unit(i), z) for i in range(3)]
    out += [AlgebraElementFts(z, z, jordan.unit(i)) for i in range(3)]
    return tuple(out)


def fts_algebra_action(e: AlgebraElementFts, x: FtsElement) -> FtsElement:
    """Infinitesimal action with generators L_C (Jordan multiplication by C), X and Y."""
    tr_c = jordan.trace(e.c)
    alpha = -x.alpha * tr_c + jordan.trace_form(e.x, x.b)
    beta = x.beta * tr_c + jordan.trace_form(e.y, x.a)
    a = jordan.jordan_product(e.c, x.a) + x.beta * e.x + jordan.cross(e.y, x.b)
    b = -jordan.jordan_product(e.c, x.b) + x.alpha * e.y + jordan.cross(e.x, x.a)
    return FtsElement(alpha, beta, a, b)


# --- tangent maps and numerical rank -----------------------------------------------------


def tangent_matrix(s) -> np.ndarray:
    """8x9 matrix whose columns are the standard action of each basis element on ``s``."""
    s = np.asarray(s, dtype=np.complex128)
    return np.stack([std_algebra_action(e, s) for e in std_algebra_basis()], axis=-1)


def tangent_matrix_fts(s) -> np.ndarray:
    """8x9 matrix of the FTS-coordinate action, mapped back to amplitudes."""
    x = inv.to_fts(np.asarray(s, dtype=np.complex128))
    return np.stack([inv.from_fts(fts_algebra_action(e, x)) for e in fts_algebra_basis()], axis=-1)


class RankResult(NamedTuple):
    rank: int
    gap: float
    singular_values: np.ndarray


def numerical_rank(m: np.ndarray, epsilon: float = RANK_EPSILON, min_gap: float = MIN_GAP) -> RankResult:
    """Count singular values above ``epsilon * sigma_max``; demand a gap ratio of at least ``min_gap``."""
    sv = np.linalg.svd(np.asarray(m), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return RankResult(0, np.inf, sv)
    rank = int(np.sum(sv > epsilon * sv[0]))
    gap = np.inf if rank == sv.size or sv[rank] == 0 else float(sv[rank - 1] / sv[rank])
    if gap < min_gap:
        raise IndeterminateRankError(f"rank {rank} has singular-value gap {gap:.3g} < {min_gap:g}: {sv}")
    return RankResult(rank, gap, sv)


def orbit_rank(s) -> RankResult:
    return numerical_rank(tangent_matrix(s))


def orbit_dimension(s) -> int:
    """Complex dimension of the SL(2,C)^3 orbit through ``s``."""
    return orbit_rank(s).rank


def stabilizer_dimension(s) -> int:
    return 9 - orbit_dimension(s)


def projective_orbit_rank(s) -> RankResult:
    s = np.asarray(s, dtype=np.complex128)
    if not np.any(s):
        raise ValueError("the zero state has no projective orbit")
    return numerical_rank(np.column_stack([tangent_matrix(s), s]))


def projective_orbit_dimension(s) -> int:
    """Orbit dimension in projective space: rank of the tangent span plus ``s``, minus one."""
    return projective_orbit_rank(s).rank - 1


def real_orbit_rank(s) -> RankResult:
    s = np.asarray(s)
    if np.iscomplexobj(s):
        if np.any(s.imag != 0):
            raise ValueError("real_orbit_dimension needs real amplitudes")
        s = s.real
    return numerical_rank(tangent_matrix(s.astype(np.float64)).real)


def real_orbit_dimension(s) -> int:
    """Real dimension of the SL(2,R)^3 orbit through a real state."""
    return real_orbit_rank(s).rank


# --- cross-checks ----------------------------------------------------------------------


class SpanReport(NamedTuple):
    rank_std: int
    rank_fts: int
    residual: float


def _column_basis(m, rank):
    u, _, _ = np.linalg.svd(m)
    return u[:, :rank]


def action_span_compare(s, tol: float = 1e-9) -> SpanReport:
    """Compare the tangent spans of the two parametrisations at ``s``.

    ``residual`` is the largest relative component of either span's columns
    outside the other span. Raises :class:`SpanMismatchError` on disagreement.
    """
    m_std, m_fts = tangent_matrix(s), tangent_matrix_fts(s)
    r_std, r_fts = numerical_rank(m_std).rank, numerical_rank(m_fts).rank
    residual = 0.0
    if r_std == r_fts and r_std > 0:
        for m, other in ((m_std, m_fts), (m_fts, m_std)):
            q = _column_basis(other, r_std)
            scale = max(np.linalg.norm(m), np.finfo(float).tiny)
            residual = max(residual, float(np.linalg.norm(m - q @ (q.conj().T @ m)) / scale))
    report = SpanReport(r_std, r_fts, residual)
    if r_std != r_fts or residual > tol:
        raise SpanMismatchError(f"tangent spans disagree: {report}")
    return report


def fts_stabilizer_kernel(s) -> np.ndarray:
    """Orthonormal basis (rows, in :func:`fts_algebra_basis` coordinates) of the annihilator of ``s``."""
    m = tangent_matrix_fts(s)
    rank = numerical_rank(m).rank
    _, _, vh = np.linalg.svd(m)
    return vh[rank:].conj()


# --- real GHZ survey ---------------------------------------------------------------------


def real_signature_survey(
    seed: int, samples: int, moves: int = 20, min_q: float = 1e-2, max_condition: float = 10.0, tol=None
) -> dict:
    """Sample real q > 0 states and tally their gamma signature triples.

    Gaussian states are kept when q of the normalised state exceeds ``min_q``.
    Each one is then moved by ``moves`` random SL(2,R)^3 elements; ``changed``
    counts moves that altered the triple (expected 0, since the group is
    connected and each gamma transforms by congruence). The condition bound
    keeps the moved q well above the zero threshold.
    """
    tol = tol or classifier.ToleranceConfig.from_env()
    rng = np.random.default_rng(seed)
    ops = random_slocc_batch(seed + 1, max(samples * moves, 1), real=True, max_condition=max_condition)
    counts: dict[str, int] = {}
    families: dict[str, int] = {}
    changed = 0
    found = 0
    while found < samples:
        s = rng.standard_normal(8)
        if inv.quartic_norm(s / np.linalg.norm(s)) <= min_q:
            continue
        tag = classifier.classify_real(s, tol)[2]
        counts[tag.signature_key] = counts.get(tag.signature_key, 0) + 1
        families[tag.family] = families.get(tag.family, 0) + 1
        for g in ops[found * moves : (found + 1) * moves]:
            moved = classifier.classify_real(_contract(g[0], g[1], g[2], s), tol)[2]
            changed += moved is None or moved.signature_key != tag.signature_key
        found += 1
    return {"samples": samples, "triples": dict(sorted(counts.items())), "families": families, "changed": changed}
