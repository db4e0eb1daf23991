"""The cubic Jordan algebra C+C+C built from its cubic norm.

Elements are triples of scalars of any supported field; components may also
be numpy arrays, in which case every operation acts elementwise on a batch.

The Springer maps (``trace``, ``s_quadratic``, ``s_bilinear``) are evaluated
literally from the linearised norm with base point ``c = (1, 1, 1)``. The
trace form, adjoint and Jordan product use their closed forms on this
algebra; the test suite checks they agree with the Springer definitions.

``cross`` is the polarisation ``(A+B)# - A# - B#``. Expanded in terms of the
Jordan product it reads::

    A x B = 2 A.B - Tr(A) B - Tr(B) A + (Tr(A) Tr(B) - Tr(A, B)) 1

This is twice the half-coefficient expansion sometimes quoted, with the sign
of ``Tr(A, B)`` reversed; the half-coefficient form is wrong on this algebra
(e.g. ``(1,0,0) x (0,1,0) = (0,0,1)``, not ``(0,0,1/2)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class JordanElement:
    a1: Any
    a2: Any
    a3: Any

    __array_ufunc__ = None  # make ndarray * element defer to __rmul__

    def __iter__(self):
        yield self.a1
        yield self.a2
        yield self.a3

    def __add__(self, other: "JordanElement") -> "JordanElement":
        return JordanElement(self.a1 + other.a1, self.a2 + other.a2, self.a3 + other.a3)

    def __sub__(self, other: "JordanElement") -> "JordanElement":
        return JordanElement(self.a1 - other.a1, self.a2 - other.a2, self.a3 - other.a3)

    def __neg__(self) -> "JordanElement":
        return JordanElement(-self.a1, -self.a2, -self.a3)

    def __mul__(self, scalar) -> "JordanElement":
        return JordanElement(self.a1 * scalar, self.a2 * scalar, self.a3 * scalar)

    def __rmul__(self, scalar) -> "JordanElement":
        return JordanElement(scalar * self.a1, scalar * self.a2, scalar * self.a3)


def identity() -> JordanElement:
    """The base point / unit element ``(1, 1, 1)``."""
    return JordanElement(1, 1, 1)


def zero() -> JordanElement:
    return JordanElement(0, 0, 0)


def unit(i: int) -> JordanElement:
    """Standard basis vector ``e_i`` (0-based)."""
    comps = [0, 0, 0]
    comps[i] = 1
    return JordanElement(*comps)


def cubic_norm(a: JordanElement):
    return a.a1 * a.a2 * a.a3


def linearized_norm(a: JordanElement, b: JordanElement, c: JordanElement):
    """Full linearisation N(A, B, C) by inclusion-exclusion, so N(A, A, A) = N(A)."""
    total = (
        cubic_norm(a + b + c)
        - cubic_norm(a + b)
        - cubic_norm(a + c)
        - cubic_norm(b + c)
        + cubic_norm(a)
        + cubic_norm(b)
        + cubic_norm(c)
    )
    return total / 6


def trace(a: JordanElement):
    """Tr(A) = 3 N(c, c, A)."""
    c = identity()
    return 3 * linearized_norm(c, c, a)


def s_quadratic(a: JordanElement):
    """S(A) = 3 N(A, A, c)."""
    return 3 * linearized_norm(a, a, identity())


def s_bilinear(a: JordanElement, b: JordanElement):
    """S(A, B) = 6 N(A, B, c)."""
    return 6 * linearized_norm(a, b, identity())


def trace_form(a: JordanElement, b: JordanElement):
    return a.a1 * b.a1 + a.a2 * b.a2 + a.a3 * b.a3


def springer_trace_form(a: JordanElement, b: JordanElement):
    """Tr(A, B) = Tr(A) Tr(B) - S(A, B), straight from the Springer construction."""
    return trace(a) * trace(b) - s_bilinear(a, b)


def sharp(a: JordanElement) -> JordanElement:
    """Quadratic adjoint, fixed by Tr(A#, B) = 3 N(A, A, B)."""
    return JordanElement(a.a2 * a.a3, a.a1 * a.a3, a.a1 * a.a2)


def cross(a: JordanElement, b: JordanElement) -> JordanElement:
    """Freudenthal product A x B = (A + B)# - A# - B#."""
    return sharp(a + b) - sharp(a) - sharp(b)


def jordan_product(a: JordanElement, b: JordanElement) -> JordanElement:
    return JordanElement(a.a1 * b.a1, a.a2 * b.a2, a.a3 * b.a3)


def springer_product(a: JordanElement, b: JordanElement) -> JordanElement:
    """A.B = 1/2 (A x B + Tr(A) B + Tr(B) A - S(A, B) 1)."""
    s = s_bilinear(a, b)
    total = cross(a, b) + trace(a) * b + trace(b) * a - s * identity()
    return JordanElement(total.a1 / 2, total.a2 / 2, total.a3 / 2)


def cross_expansion(x: JordanElement, a: JordanElement) -> JordanElement:
    """Right-hand side of the verified expansion of X x A in terms of the Jordan product."""
    tx, ta = trace(x), trace(a)
    return 2 * jordan_product(x, a) - (tx * a + ta * x) + (tx * ta - trace_form(x, a)) * identity()

