"""Batch kernels over amplitude arrays of shape ``(..., 8)``.

Each kernel has a pure-numpy implementation that also accepts object arrays
of exact scalars, and a numba implementation for ``complex128`` batches.
The numba path is used when numba imports, the environment variable
``FTS_ENTANGLE_NUMBA`` is not ``0``, and the batch holds at least
``NUMBA_MIN_BATCH`` states (below that, JIT dispatch costs more than it saves).
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_MIN_BATCH = 256


def _numba_requested() -> bool:
    return os.environ.get("FTS_ENTANGLE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _numba_requested():
        raise ImportError("disabled by FTS_ENTANGLE_NUMBA")
    import numba

    NUMBA_AVAILABLE = True
except ImportError:
    numba = None
    NUMBA_AVAILABLE = False


# --- scalar formulas shared by both paths -------------------------------------------
# amplitude index i = 4*A + 2*B + C


def _gamma_entries(a0, a1, a2, a3, a4, a5, a6, a7):
    ga00 = 2 * (a0 * a3 - a1 * a2)
    ga01 = a0 * a7 - a1 * a6 + a4 * a3 - a5 * a2
    ga11 = 2 * (a4 * a7 - a5 * a6)
    gb00 = 2 * (a0 * a5 - a4 * a1)
    gb01 = a0 * a7 - a4 * a3 + a2 * a5 - a6 * a1
    gb11 = 2 * (a2 * a7 - a6 * a3)
    gc00 = 2 * (a0 * a6 - a2 * a4)
    gc01 = a0 * a7 - a2 * a5 + a1 * a6 - a3 * a4
    gc11 = 2 * (a1 * a7 - a3 * a5)
    return ga00, ga01, ga11, gb00, gb01, gb11, gc00, gc01, gc11


def _quartic_scalar(a0, a1, a2, a3, a4, a5, a6, a7):
    # FTS coordinates: alpha=a7, beta=a0, A=(a1,a2,a4), B=(a6,a5,a3)
    inner = a7 * a0 - (a1 * a6 + a2 * a5 + a4 * a3)
    sharp_pair = (a2 * a4) * (a5 * a3) + (a1 * a4) * (a6 * a3) + (a1 * a2) * (a6 * a5)
    cubic = a7 * (a1 * a2 * a4) + a0 * (a6 * a5 * a3) - sharp_pair
    return -2 * (inner * inner) - 8 * cubic


# --- numpy implementations ----------------------------------------------------------


def _split(a):
    return [a[..., i] for i in range(8)]


def gammas_numpy(a):
    """(..., 3, 2, 2) stack of gamma^A, gamma^B, gamma^C."""
    ga00, ga01, ga11, gb00, gb01, gb11, gc00, gc01, gc11 = _gamma_entries(*_split(a))
    rows = [[[ga00, ga01], [ga01, ga11]], [[gb00, gb01], [gb01, gb11]], [[gc00, gc01], [gc01, gc11]]]
    out = np.empty(a.shape[:-1] + (3, 2, 2), dtype=a.dtype)
    for x in range(3):
        for i in range(2):
            for j in range(2):
                out[..., x, i, j] = rows[x][i][j]
    return out


def quartic_numpy(a):
    return _quartic_scalar(*_split(a))


def t_cubic_numpy(a, form: str = "A"):
    """T(psi, psi, psi) as amplitudes, from one of the three gamma contractions."""
    t = a.reshape(a.shape[:-1] + (2, 2, 2))
    g = gammas_numpy(a)
    if form == "A":
        ga = g[..., 0, :, :]
        out = t[..., 0:1, :, :] * ga[..., 1, :, None, None] - t[..., 1:2, :, :] * ga[..., 0, :, None, None]
    elif form == "B":
        gb = g[..., 1, :, :]
        out = t[..., :, 0:1, :] * gb[..., None, 1, :, None] - t[..., :, 1:2, :] * gb[..., None, 0, :, None]
    elif form == "C":
        gc = g[..., 2, :, :]
        out = t[..., :, :, 0:1] * gc[..., None, None, 1, :] - t[..., :, :, 1:2] * gc[..., None, None, 0, :]
    else:
        raise ValueError(f"form must be 'A', 'B' or 'C', not {form!r}")
    return out.reshape(a.shape)


_EPS = np.array([[0, 1], [-1, 0]], dtype=np.int64)


def hyperdet_oracle_numpy(a):
    """Cayley hyperdeterminant by literal contraction with six epsilon tensors."""
    t = a.reshape(a.shape[:-1] + (2, 2, 2))
    eps = _EPS.astype(object) if a.dtype == object else _EPS.astype(a.dtype)
    # A1=a A2=b B1=c B2=d A3=e A4=f B3=g B4=h C1=i C4=p C2=j C3=k
    total = np.einsum(
        "ab,cd,ef,gh,ip,jk,...aci,...bdj,...egk,...fhp->...",
        eps, eps, eps, eps, eps, eps, t, t, t, t,
        optimize=False,
    )
    return -total / 2


def covariants_numpy(a):
    return quartic_numpy(a), t_cubic_numpy(a), gammas_numpy(a)


# --- numba implementations ----------------------------------------------------------

if NUMBA_AVAILABLE:
    _gamma_entries_jit = numba.njit(cache=True)(_gamma_entries)
    _quartic_scalar_jit = numba.njit(cache=True)(_quartic_scalar)

    @numba.njit(cache=True)
    def _covariants_kernel(a, q, t, g):
        for n in range(a.shape[0]):
            a0, a1, a2, a3, a4, a5, a6, a7 = a[n, 0], a[n, 1], a[n, 2], a[n, 3], a[n, 4], a[n, 5], a[n, 6], a[n, 7]
            e = _gamma_entries_jit(a0, a1, a2, a3, a4, a5, a6, a7)
            for x in range(3):
                g[n, x, 0, 0] = e[3 * x]
                g[n, x, 0, 1] = e[3 * x + 1]
                g[n, x, 1, 0] = e[3 * x + 1]
                g[n, x, 1, 1] = e[3 * x + 2]
            q[n] = _quartic_scalar_jit(a0, a1, a2, a3, a4, a5, a6, a7)
            # T[A3, B, C] = a[0, B, C] gA[1, A3] - a[1, B, C] gA[0, A3]
            for a3_ in range(2):
                for bc in range(4):
                    t[n, 4 * a3_ + bc] = a[n, bc] * g[n, 0, 1, a3_] - a[n, 4 + bc] * g[n, 0, 0, a3_]

    @numba.njit(cache=True)
    def _hyperdet_kernel(a, out):
        eps = np.array([[0.0, 1.0], [-1.0, 0.0]])
        for n in range(a.shape[0]):
            acc = 0.0 + 0.0j
            for idx in range(4096):
                A1 = (idx >> 11) & 1
                A2 = (idx >> 10) & 1
                B1 = (idx >> 9) & 1
                B2 = (idx >> 8) & 1
                A3 = (idx >> 7) & 1
                A4 = (idx >> 6) & 1
                B3 = (idx >> 5) & 1
                B4 = (idx >> 4) & 1
                C1 = (idx >> 3) & 1
                C4 = (idx >> 2) & 1
                C2 = (idx >> 1) & 1
                C3 = idx & 1
                w = eps[A1, A2] * eps[B1, B2] * eps[A3, A4] * eps[B3, B4] * eps[C1, C4] * eps[C2, C3]
                if w != 0.0:
                    acc += (
                        w
                        * a[n, 4 * A1 + 2 * B1 + C1]
                        * a[n, 4 * A2 + 2 * B2 + C2]
                        * a[n, 4 * A3 + 2 * B3 + C3]
                        * a[n, 4 * A4 + 2 * B4 + C4]
                    )
            out[n] = -0.5 * acc


def covariants_numba(a):
    flat = np.ascontiguousarray(a.reshape(-1, 8), dtype=np.complex128)
    n = flat.shape[0]
    q = np.empty(n, dtype=np.complex128)
    t = np.empty((n, 8), dtype=np.complex128)
    g = np.empty((n, 3, 2, 2), dtype=np.complex128)
    _covariants_kernel(flat, q, t, g)
    lead = a.shape[:-1]
    return q.reshape(lead), t.reshape(lead + (8,)), g.reshape(lead + (3, 2, 2))


def hyperdet_oracle_numba(a):
    flat = np.ascontiguousarray(a.reshape(-1, 8), dtype=np.complex128)
    out = np.empty(flat.shape[0], dtype=np.complex128)
    _hyperdet_kernel(flat, out)
    return out.reshape(a.shape[:-1])


# --- dispatch ------------------------------------------------------------------------


def _use_numba(a) -> bool:
    return (
        NUMBA_AVAILABLE
        and a.dtype == np.complex128
        and a.ndim >= 2
        and int(np.prod(a.shape[:-1])) >= NUMBA_MIN_BATCH
    )


def covariants(a):
    """(q, T(psi,psi,psi), gammas) for a batch of amplitude vectors."""
    if _use_numba(a):
        return covariants_numba(a)
    return covariants_numpy(a)


def hyperdet_oracle(a):
    if _use_numba(a):
        return hyperdet_oracle_numba(a)
    return hyperdet_oracle_numpy(a)


def backend_name() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"
