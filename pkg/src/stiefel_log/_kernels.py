"""Quasi-triangular Sylvester back-substitution.

Solves ``T @ Y + Y @ U = D`` where ``T`` and ``U`` are upper quasi-triangular
(real Schur form: 1x1 and 2x2 diagonal blocks). Two implementations of the
same block recurrence live here:

* ``trsyl_loops``  - explicit scalar loops, compiled by numba when available;
* ``trsyl_numpy``  - column-block sweep with the coupling sums done as
  slice matmuls, for environments without numba.

Both return ``(Y, status)`` with ``status == 0`` on success and ``1`` when a
diagonal block system is numerically singular (overlapping spectra).
"""
import numpy as np

from ._accel import numba_enabled, optional_njit


@optional_njit(cache=True)
def block_sizes(t):
    """Size (1 or 2) of the diagonal block starting at each row, 0 inside."""
    m = t.shape[0]
    sizes = np.zeros(m, dtype=np.int64)
    i = 0
    while i < m:
        if i + 1 < m and t[i + 1, i] != 0.0:
            sizes[i] = 2
            i += 2
        else:
            sizes[i] = 1
            i += 1
    return sizes


@optional_njit(cache=True)
def solve_block(t, u, r, tol):
    """Solve the tiny Sylvester system ``t @ y + y @ u = r``.

    ``t`` is a x a and ``u`` is b x b with a, b in {1, 2}; the Kronecker form
    has at most 4 unknowns and is solved by Gaussian elimination with
    complete pivoting. Returns ``(y, status)``.
    """
    a = t.shape[0]
    b = u.shape[0]
    nv = a * b
    mat = np.zeros((nv, nv))
    rhs = np.zeros(nv)
    # column-major vec: Y[i, j] -> j * a + i
    for j in range(b):
        for i in range(a):
            row = j * a + i
            rhs[row] = r[i, j]
            for k in range(a):
                mat[row, j * a + k] += t[i, k]
            for l in range(b):
                mat[row, l * a + i] += u[l, j]

    perm = np.arange(nv)
    for step in range(nv):
        best = 0.0
        pr = step
        pc = step
        for i in range(step, nv):
            for j in range(step, nv):
                v = abs(mat[i, j])
                if v > best:
                    best = v
                    pr = i
                    pc = j
        if best <= tol:
            return np.zeros((a, b)), 1
        if pr != step:
            for j in range(nv):
                tmp = mat[step, j]
                mat[step, j] = mat[pr, j]
                mat[pr, j] = tmp
            tmp = rhs[step]
            rhs[step] = rhs[pr]
            rhs[pr] = tmp
        if pc != step:
            for i in range(nv):
                tmp = mat[i, step]
                mat[i, step] = mat[i, pc]
                mat[i, pc] = tmp
            ti = perm[step]
            perm[step] = perm[pc]
            perm[pc] = ti
        piv = mat[step, step]
        for i in range(step + 1, nv):
            f = mat[i, step] / piv
            if f != 0.0:
                for j in range(step, nv):
                    mat[i, j] -= f * mat[step, j]
                rhs[i] -= f * rhs[step]

    sol = np.zeros(nv)
    for i in range(nv - 1, -1, -1):
        acc = rhs[i]
        for j in range(i + 1, nv):
            acc -= mat[i, j] * sol[j]
        sol[i] = acc / mat[i, i]

    y = np.zeros((a, b))
    for idx in range(nv):
        v = perm[idx]
        y[v % a, v // a] = sol[idx]
    return y, 0


@optional_njit(cache=True)
def trsyl_loops(t, u, d, tol):
    m = t.shape[0]
    q = u.shape[0]
    tsz = block_sizes(t)
    usz = block_sizes(u)
    y = np.zeros((m, q))
    r = np.zeros((2, 2))

    j0 = 0
    while j0 < q:
        jb = usz[j0]
        i0 = m - 1
        if i0 > 0 and tsz[i0] == 0:
            i0 -= 1
        while i0 >= 0:
            ib = tsz[i0]
            for ii in range(ib):
                for jj in range(jb):
                    row = i0 + ii
                    col = j0 + jj
                    acc = d[row, col]
                    for k in range(i0 + ib, m):
                        acc -= t[row, k] * y[k, col]
                    for l in range(j0):
                        acc -= y[row, l] * u[l, col]
                    r[ii, jj] = acc
            blk, status = solve_block(t[i0:i0 + ib, i0:i0 + ib],
                                      u[j0:j0 + jb, j0:j0 + jb],
                                      r[:ib, :jb], tol)
            if status != 0:
                return y, status
            for ii in range(ib):
                for jj in range(jb):
                    y[i0 + ii, j0 + jj] = blk[ii, jj]
            # step to the start of the block above
            i0 -= 1
            if i0 > 0 and tsz[i0] == 0:
                i0 -= 1
        j0 += jb
    return y, 0


def trsyl_numpy(t, u, d, tol):
    m = t.shape[0]
    q = u.shape[0]
    tsz = block_sizes.py_func(t)
    usz = block_sizes.py_func(u)
    starts = [i for i in range(m) if tsz[i]]
    y = np.zeros((m, q))
    small = solve_block.py_func

    j0 = 0
    while j0 < q:
        j1 = j0 + usz[j0]
        rhs = d[:, j0:j1] - y[:, :j0] @ u[:j0, j0:j1]
        for i0 in reversed(starts):
            i1 = i0 + tsz[i0]
            r = rhs[i0:i1] - t[i0:i1, i1:] @ y[i1:, j0:j1]
            blk, status = small(t[i0:i1, i0:i1], u[j0:j1, j0:j1], r, tol)
            if status != 0:
                return y, status
            y[i0:i1, j0:j1] = blk
        j0 = j1
    return y, 0


def trsyl(t, u, d, tol):
    """Dispatch to the numba kernel or the numpy fallback."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    d = np.ascontiguousarray(d, dtype=np.float64)
    if numba_enabled():
        return trsyl_loops(t, u, d, float(tol))
    return trsyl_numpy(t, u, d, float(tol))
