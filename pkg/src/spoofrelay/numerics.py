"""Small complex linear-algebra and root-finding kernel.

Vectors are 1-D complex ``numpy`` arrays and matrices are 2-D complex
arrays; nothing here wraps them in custom container types.
"""

import numpy as np

__all__ = ["hermitian_inner", "null_space_basis", "bisect_root",
           "poly_roots_real_in_unit", "RANK_RTOL", "BISECT_TOL"]

#: singular values below ``RANK_RTOL * s_max`` are treated as zero
RANK_RTOL = 1e-12
#: default absolute tolerance on the power-splitting axis
BISECT_TOL = 1e-12


def hermitian_inner(a, b):
    """Return ``a^H b`` for two complex vectors of equal length."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def null_space_basis(H, rtol=RANK_RTOL):
    """
    Orthonormal basis of the (right) null space of ``H``.

    Parameters
    ----------
    H : array_like, shape (M, N)
        Matrix whose null space is wanted.
    rtol : float
        Relative singular-value threshold used to decide the rank.

    Returns
    -------
    V0 : ndarray, shape (N, N - rank(H))
        Columns span ``{x : H x = 0}``. ``V0^H V0 = I``. When ``H`` has full
        column rank the result has zero columns.
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    n = H.shape[1]
    if n < 1:
        raise ValueError("H must have at least one column")
    # full_matrices=True so that Vh spans C^N even when M < N
    _, s, vh = np.linalg.svd(H, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.count_nonzero(s > rtol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T.copy()


def bisect_root(f, lo, hi, tol=BISECT_TOL, maxiter=200):
    """
    Root of a monotone-decreasing function by bisection.

    Requires ``f(lo) >= 0 >= f(hi)``. The returned point is the lower end of
    the final bracket, so ``f(x) >= 0`` always holds at the result (unless an
    exact zero is hit first, which is returned as is).
    """
    lo = float(lo)
    hi = float(hi)
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if not (flo > 0.0 > fhi):
        raise ValueError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if fmid > 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def _polish(coeffs, x):
    # one Newton step; skipped where the derivative vanishes (double roots)
    d = np.polyder(coeffs)
    fx = np.polyval(coeffs, x)
    dx = np.polyval(d, x)
    if dx != 0.0 and np.isfinite(fx / dx):
        step = x - fx / dx
        if abs(np.polyval(coeffs, step)) <= abs(fx):
            return step
    return x


def poly_roots_real_in_unit(coeffs, imag_tol=1e-7, dedup_tol=1e-9, edge_tol=1e-12):
    """
    Real roots in ``[0, 1]`` of a polynomial of degree at most four.

    ``coeffs`` are ordered from the highest power down, as in
    :func:`numpy.polyval`. Candidate roots come from the companion-matrix
    eigenvalues (:func:`numpy.roots`) and are each refined by one Newton step.
    The result is sorted and deduplicated.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if c.size == 0:
        raise ValueError("all-zero polynomial")
    if c.size > 5:
        raise ValueError("degree must not exceed 4")
    if c.size == 1:
        return []
    scale = np.max(np.abs(c))
    c = c / scale
    out = []
    for r in np.roots(c):
        if abs(r.imag) > imag_tol * max(1.0, abs(r)):
            continue
        x = _polish(c, float(r.real))
        if -edge_tol <= x <= 1.0 + edge_tol:
            out.append(min(max(x, 0.0), 1.0))
    out.sort()
    roots = []
    for x in out:
        if not roots or x - roots[-1] > dedup_tol:
            roots.append(x)
    return roots
