"""Three-qubit states, their FTS image, and the local-unitary invariants.

A state is an array of 8 amplitudes ``a[4*A + 2*B + C]`` (so index 0 is
``|000>`` and 7 is ``|111>``), either ``complex128`` or an object array of
:class:`~fts_entangle.scalars.GaussianRational`. Leading axes are treated as a
batch by every function here.

Measured normalisation constants
--------------------------------
With ``S_X = 4 det rho_X`` and the explicit gamma matrices, direct evaluation
gives, for every state (normalised or not)::

    S_A          = 1   * (tr gB^+ gB + tr gC^+ gC)
    tr gA^+ gA   = 1/2 * (S_B + S_C - S_A)
    <T|T>        = 2/3 (K - |psi|^6) + 1/4 |psi|^2 (S_A + S_B + S_C)

where ``K`` is the Kempe invariant with mixed-trace weight 3 (see
:func:`kempe`). Commonly printed versions of these relations carry the factors
4, 1/8 and 1/16 instead; those are kept as ``PRINTED_*`` constants so the
discrepancy can be reported. The gamma-contraction route to T(psi, psi, psi)
agrees with the FTS triple product with proportionality constant 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels, fts
from .fts import FtsElement
from .jordan import JordanElement
from .scalars import GaussianRational, exact_array, is_exact, rational, to_complex

# measured by brute-force evaluation over random states; see tests/test_calibration.py
ENTROPY_GAMMA_C1 = Fraction(1)
ENTROPY_GAMMA_C2 = Fraction(1, 2)
TRIPLE_PRODUCT_KAPPA = Fraction(1)
T_NORM_ENTROPY_COEFF = Fraction(1, 4)
KEMPE_WEIGHT = 3

PRINTED_ENTROPY_GAMMA_C1 = Fraction(4)
PRINTED_ENTROPY_GAMMA_C2 = Fraction(1, 8)
PRINTED_T_NORM_ENTROPY_COEFF = Fraction(1, 16)
PRINTED_KEMPE_WEIGHT = 1

PARTIES = ("A", "B", "C")
_KEEP = ("A", "B", "C", "AB", "BC", "CA")


def ket(*labels: str, exact: bool = False) -> np.ndarray:
    """Sum of computational basis kets, e.g. ``ket("010", "001")``."""
    amps = [0] * 8
    for label in labels:
        if len(label) != 3 or set(label) - {"0", "1"}:
            raise ValueError(f"bad basis label {label!r}")
        amps[int(label, 2)] += 1
    return as_state(amps, exact=exact)


# Representatives of the seven SLOCC classes, keyed by class name.
REPRESENTATIVE_KETS = {
    "Null": (),
    "A-B-C": ("000",),
    "A-BC": ("010", "001"),
    "B-CA": ("100", "001"),
    "C-AB": ("010", "100"),
    "W": ("100", "010", "001"),
    "GHZ": ("000", "111"),
}


def representative(name: str, exact: bool = False) -> np.ndarray:
    return ket(*REPRESENTATIVE_KETS[name], exact=exact)


def as_state(values, exact: bool = False) -> np.ndarray:
    """Validate and convert amplitudes to a ``(..., 8)`` array."""
    if exact:
        arr = values if is_exact(values) else exact_array(values)
    else:
        arr = np.asarray(values)
        arr = arr.astype(np.complex128) if arr.dtype != object else np.asarray(
            np.vectorize(complex, otypes=[np.complex128])(arr)
        )
    if arr.ndim == 0 or arr.shape[-1] != 8:
        raise ValueError(f"a three-qubit state needs 8 amplitudes, got shape {np.shape(values)}")
    return arr


def _const(value: Fraction, like):
    if is_exact(like) or isinstance(like, GaussianRational):
        return rational(value)
    return float(value)


def _real(x):
    """Real part, elementwise; exact values give rationals."""
    if isinstance(x, np.ndarray) and x.dtype == object:
        return np.vectorize(lambda z: z.real if isinstance(z, GaussianRational) else z, otypes=[object])(x)
    if isinstance(x, GaussianRational):
        return x.real
    return np.real(x)


# --- FTS dictionary ---------------------------------------------------------------


def to_fts(s) -> FtsElement:
    """alpha=a111, beta=a000, A=(a001, a010, a100), B=(a110, a101, a011)."""
    return FtsElement(
        s[..., 7], s[..., 0],
        JordanElement(s[..., 1], s[..., 2], s[..., 4]),
        JordanElement(s[..., 6], s[..., 5], s[..., 3]),
    )


def from_fts(x: FtsElement) -> np.ndarray:
    comps = [x.beta, x.a.a1, x.a.a2, x.b.a3, x.a.a3, x.b.a2, x.b.a1, x.alpha]
    exact = any(isinstance(c, GaussianRational) or is_exact(c) for c in comps)
    if exact:
        parts = [np.asarray(c, dtype=object) for c in comps]
        parts = np.broadcast_arrays(*parts)
        out = np.empty(parts[0].shape + (8,), dtype=object)
        for i, p in enumerate(parts):
            out[..., i] = p
        for idx, v in np.ndenumerate(out):
            out[idx] = GaussianRational.coerce(v)
        return out
    return np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=np.complex128) for c in comps]), axis=-1)


# --- basic invariants ---------------------------------------------------------------


def norm_sq(s):
    if is_exact(s):
        return np.sum(np.vectorize(lambda z: z.abs2(), otypes=[object])(s), axis=-1)
    return np.sum(s.real**2 + s.imag**2, axis=-1)


def quartic_norm(s):
    """q(psi) of the FTS image of the state."""
    return fts.quartic_norm(to_fts(s))


class GammaTriple(NamedTuple):
    gamma_a: np.ndarray
    gamma_b: np.ndarray
    gamma_c: np.ndarray


def gamma_matrices(s) -> GammaTriple:
    g = _kernels.gammas_numpy(s)
    return GammaTriple(g[..., 0, :, :], g[..., 1, :, :], g[..., 2, :, :])


def det2(m):
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def _tensor(s):
    return s.reshape(s.shape[:-1] + (2, 2, 2))


def reduced_density(s, keep: str) -> np.ndarray:
    """Partial trace of |psi><psi| keeping the named parties.

    ``keep`` is one of ``A, B, C, AB, BC, CA``; two-party matrices are 4x4 with
    the first-named party as the major index.
    """
    if keep not in _KEEP:
        raise ValueError(f"keep must be one of {_KEEP}, got {keep!r}")
    t = _tensor(s)
    tc = np.conjugate(t)
    if keep == "A":
        return np.einsum("...abc,...dbc->...ad", t, tc)
    if keep == "B":
        return np.einsum("...abc,...adc->...bd", t, tc)
    if keep == "C":
        return np.einsum("...abc,...abd->...cd", t, tc)
    if keep == "AB":
        r = np.einsum("...abc,...dec->...abde", t, tc)
    elif keep == "BC":
        r = np.einsum("...abc,...ade->...bcde", t, tc)
    else:
        r = np.einsum("...abc,...dbe->...caed", t, tc)
    return r.reshape(r.shape[:-4] + (4, 4))


def local_entropies(s):
    """(S_A, S_B, S_C) with S_X = 4 det rho_X."""
    return tuple(_real(4 * det2(reduced_density(s, p))) for p in PARTIES)


def _trace_cube(r):
    return np.einsum("...ij,...jk,...ki->...", r, r, r)


def kempe(s, form: str = "AB", weight: int = KEMPE_WEIGHT):
    """Kempe invariant ``weight * tr[(rho_X x rho_Y) rho_XY] - tr rho_X^3 - tr rho_Y^3``.

    ``form`` picks the pair (AB, BC or CA). With the default weight 3 the three
    forms coincide; ``weight=1`` reproduces the commonly printed expression,
    whose three cyclic forms do not agree.
    """
    pairs = {"AB": ("A", "B"), "BC": ("B", "C"), "CA": ("C", "A")}
    if form not in pairs:
        raise ValueError(f"form must be one of {tuple(pairs)}, got {form!r}")
    x, y = pairs[form]
    rx, ry = reduced_density(s, x), reduced_density(s, y)
    rxy = reduced_density(s, form)
    rxy4 = rxy.reshape(rxy.shape[:-2] + (2, 2, 2, 2))
    mixed = np.einsum("...ij,...kl,...jlik->...", rx, ry, rxy4)
    return _real(weight * mixed - _trace_cube(rx) - _trace_cube(ry))


def hyperdet(s):
    """Cayley hyperdeterminant as -q/2."""
    return -quartic_norm(s) / 2


def hyperdet_oracle(s):
    """Cayley hyperdeterminant by direct epsilon contraction over all 12 indices."""
    if is_exact(s):
        return _kernels.hyperdet_oracle_numpy(s)
    return _kernels.hyperdet_oracle(np.asarray(s, dtype=np.complex128))


def three_tangle(s):
    """4 |Det a|, as a float even for exact input (the modulus is irrational in general)."""
    return 4 * np.abs(to_complex(hyperdet(s)))


def t_cubic_fast(s, form: str = "A") -> np.ndarray:
    """T(psi, psi, psi) through a gamma contraction; ``form`` picks A, B or C."""
    return _kernels.t_cubic_numpy(s, form)


def t_cubic_fts(s) -> np.ndarray:
    """T(psi, psi, psi) through the FTS triple product (symplectic inversion)."""
    x = to_fts(s)
    return from_fts(fts.triple_product(x, x, x))


def permute_parties(s, perm: tuple[int, int, int]) -> np.ndarray:
    """Relabel parties: new party ``k`` is old party ``perm[k]``."""
    t = _tensor(s)
    lead = t.ndim - 3
    axes = tuple(range(lead)) + tuple(lead + p for p in perm)
    return np.transpose(t, axes).reshape(s.shape)


# --- normalisation diagnostics ------------------------------------------------------


def _herm_sq(m):
    return _real(np.einsum("...ij,...ij->...", np.conjugate(m), m))


def entropy_gamma_relations(s) -> dict:
    """Both sides of the entropy/gamma relations and their residuals.

    Residuals use the measured constants (expected zero) and the printed
    constants (nonzero in general).
    """
    sa, sb, sc = local_entropies(s)
    g = gamma_matrices(s)
    ga, gb, gc = (_herm_sq(m) for m in g)
    entropies = {"A": sa, "B": sb, "C": sc}
    gsq = {"A": ga, "B": gb, "C": gc}
    out = {"entropies": entropies, "gamma_sq": gsq, "residual": {}, "residual_printed": {}}
    for x, y, z in (("A", "B", "C"), ("B", "C", "A"), ("C", "A", "B")):
        lhs1, rhs1 = entropies[x], gsq[y] + gsq[z]
        lhs2, rhs2 = gsq[x], entropies[y] + entropies[z] - entropies[x]
        out["residual"][f"S_{x}"] = lhs1 - _const(ENTROPY_GAMMA_C1, s) * rhs1
        out["residual"][f"gamma_{x}"] = lhs2 - _const(ENTROPY_GAMMA_C2, s) * rhs2
        out["residual_printed"][f"S_{x}"] = lhs1 - _const(PRINTED_ENTROPY_GAMMA_C1, s) * rhs1
        out["residual_printed"][f"gamma_{x}"] = lhs2 - _const(PRINTED_ENTROPY_GAMMA_C2, s) * rhs2
    return out


@dataclass
class TKempeReport:
    """Candidate readings of <T> against the printed and measured right-hand sides."""

    t_norm_sq: object
    psi_t_overlap: object
    t_symplectic: object
    rhs_printed: object
    rhs_printed_kempe3: object
    rhs_measured: object

    def residuals(self) -> dict:
        rows = {}
        for lhs_name in ("t_norm_sq", "psi_t_overlap", "t_symplectic"):
            for rhs_name in ("rhs_printed", "rhs_printed_kempe3", "rhs_measured"):
                rows[(lhs_name, rhs_name)] = getattr(self, lhs_name) - getattr(self, rhs_name)
        return rows


def t_kempe_relation(s) -> TKempeReport:
    t = t_cubic_fast(s)
    n2 = norm_sq(s)
    n6 = n2 * n2 * n2
    ssum = sum(local_entropies(s))
    k1 = kempe(s, weight=PRINTED_KEMPE_WEIGHT)
    k3 = kempe(s, weight=KEMPE_WEIGHT)
    two_thirds = _const(Fraction(2, 3), s)
    printed = _const(PRINTED_T_NORM_ENTROPY_COEFF, s)
    measured = _const(T_NORM_ENTROPY_COEFF, s)
    return TKempeReport(
        t_norm_sq=norm_sq(t),
        psi_t_overlap=np.sum(np.conjugate(s) * t, axis=-1),
        t_symplectic=fts.symplectic_form(to_fts(t), to_fts(t)),
        rhs_printed=two_thirds * (k1 - n6) + printed * n2 * ssum,
        rhs_printed_kempe3=two_thirds * (k3 - n6) + printed * n2 * ssum,
        rhs_measured=two_thirds * (k3 - n6) + measured * n2 * ssum,
    )


def calibration_ratios(s) -> dict:
    """Per-state ratios that determine c1, c2 and kappa; float states only."""
    s = np.asarray(s, dtype=np.complex128)
    rel = entropy_gamma_relations(s)
    e, g = rel["entropies"], rel["gamma_sq"]
    t_fast = t_cubic_fast(s)
    t_fts = t_cubic_fts(s)
    kappa = np.sum(np.conjugate(t_fast) * t_fts, axis=-1) / np.sum(np.abs(t_fast) ** 2, axis=-1)
    return {
        "c1": e["A"] / (g["B"] + g["C"]),
        "c2": g["A"] / (e["B"] + e["C"] - e["A"]),
        "kappa": kappa,
    }


# --- report -------------------------------------------------------------------------


@dataclass
class InvariantReport:
    norm_sq: object
    s_a: object
    s_b: object
    s_c: object
    kempe: object
    tangle: object
    hyperdet: object
    q: object


def invariant_report(s) -> InvariantReport:
    sa, sb, sc = local_entropies(s)
    return InvariantReport(
        norm_sq=norm_sq(s),
        s_a=sa,
        s_b=sb,
        s_c=sc,
        kempe=kempe(s),
        tangle=three_tangle(s),
        hyperdet=hyperdet(s),
        q=quartic_norm(s),
    )
