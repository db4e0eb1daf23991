"""Freudenthal triple system over C+C+C.

An element is the "2x2 matrix" ``(alpha, A; B, beta)`` with scalar corners and
Jordan-algebra off-diagonal entries. Components can be exact scalars, complex
floats, or numpy arrays holding a batch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import jordan
from .jordan import JordanElement


@dataclass(frozen=True)
class FtsElement:
    alpha: Any
    beta: Any
    a: JordanElement
    b: JordanElement

    __array_ufunc__ = None

    def __add__(self, other: "FtsElement") -> "FtsElement":
        return FtsElement(self.alpha + other.alpha, self.beta + other.beta, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "FtsElement") -> "FtsElement":
        return FtsElement(self.alpha - other.alpha, self.beta - other.beta, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "FtsElement":
        return FtsElement(-self.alpha, -self.beta, -self.a, -self.b)

    def __mul__(self, scalar) -> "FtsElement":
        return FtsElement(self.alpha * scalar, self.beta * scalar, self.a * scalar, self.b * scalar)

    def __rmul__(self, scalar) -> "FtsElement":
        return FtsElement(scalar * self.alpha, scalar * self.beta, scalar * self.a, scalar * self.b)

    def components(self) -> tuple:
        """The 8 coordinates in basis order ``alpha, beta, A1..A3, B1..B3``."""
        return (self.alpha, self.beta, *self.a, *self.b)

    @classmethod
    def from_components(cls, comps) -> "FtsElement":
        c = list(comps)
        if len(c) != 8:
            raise ValueError(f"an FTS element has 8 components, got {len(c)}")
        return cls(c[0], c[1], JordanElement(c[2], c[3], c[4]), JordanElement(c[5], c[6], c[7]))


BASIS_LABELS = ("alpha", "beta", "A1", "A2", "A3", "B1", "B2", "B3")


def zero_element() -> FtsElement:
    return FtsElement.from_components([0] * 8)


def basis() -> tuple[FtsElement, ...]:
    """Canonical basis e_alpha, e_beta, e_A1..e_A3, e_B1..e_B3."""
    out = []
    for k in range(8):
        comps = [0] * 8
        comps[k] = 1
        out.append(FtsElement.from_components(comps))
    return tuple(out)


def symplectic_form(x: FtsElement, y: FtsElement):
    """{x, y} = alpha*delta - beta*gamma + Tr(A, D) - Tr(B, C)."""
    return x.alpha * y.beta - x.beta * y.alpha + jordan.trace_form(x.a, y.b) - jordan.trace_form(x.b, y.a)


def gram_matrix() -> np.ndarray:
    """Integer matrix of the symplectic form on :func:`basis`."""
    e = basis()
    return np.array([[symplectic_form(ei, ej) for ej in e] for ei in e], dtype=np.int64)


def _symplectic_dual_basis() -> tuple[tuple[int, ...], ...]:
    # row k holds the coordinates of d_k with {d_k, e_j} = delta_kj
    gram = gram_matrix()
    inv = np.linalg.inv(gram.astype(float))
    coeffs = np.rint(inv.T).astype(np.int64)
    if not np.array_equal(coeffs.T @ gram, np.eye(8, dtype=np.int64)):
        raise RuntimeError("symplectic Gram matrix is not unimodular")
    return tuple(tuple(int(v) for v in coeffs[:, k]) for k in range(8))


_DUAL = _symplectic_dual_basis()


def quartic_norm(x: FtsElement):
    """q(x) = -2[alpha beta - Tr(A,B)]^2 - 8[alpha N(A) + beta N(B) - Tr(A#, B#)]."""
    inner = x.alpha * x.beta - jordan.trace_form(x.a, x.b)
    cubic = (
        x.alpha * jordan.cubic_norm(x.a)
        + x.beta * jordan.cubic_norm(x.b)
        - jordan.trace_form(jordan.sharp(x.a), jordan.sharp(x.b))
    )
    return -2 * (inner * inner) - 8 * cubic


_SUBSETS = tuple(
    (s, (-1) ** (4 - len(s))) for r in range(1, 5) for s in itertools.combinations(range(4), r)
)


def quartic_linearized(x: FtsElement, y: FtsElement, w: FtsElement, z: FtsElement):
    """Symmetric 4-linear form with q(x, x, x, x) = q(x), by 15-term polarisation."""
    args = (x, y, w, z)
    total = 0
    for subset, sign in _SUBSETS:
        acc = args[subset[0]]
        for k in subset[1:]:
            acc = acc + args[k]
        value = quartic_norm(acc)
        total = total + value if sign > 0 else total - value
    return total / 24


def triple_product(x: FtsElement, y: FtsElement, w: FtsElement) -> FtsElement:
    """T(x, y, w), the unique element with {T(x, y, w), z} = q(x, y, w, z) for all z."""
    e = basis()
    pairing = [quartic_linearized(x, y, w, ek) for ek in e]
    comps = []
    for i in range(8):
        acc = 0
        for k in range(8):
            c = _DUAL[k][i]
            if c:
                acc = acc + c * pairing[k]
        comps.append(acc)
    return FtsElement.from_components(comps)


def upsilon(psi: FtsElement, phi: FtsElement) -> FtsElement:
    """3 T(psi, psi, phi) + {psi, phi} psi; vanishes for every phi iff rank(psi) <= 1."""
    return 3 * triple_product(psi, psi, phi) + symplectic_form(psi, phi) * psi


def max_abs(x: FtsElement):
    """Largest component modulus (elementwise over a batch)."""
    mags = [np.abs(np.asarray(c, dtype=complex)) for c in x.components()]
    return np.max(np.stack(np.broadcast_arrays(*mags)), axis=0)
