# cython: language_level=3
# cython: boundscheck=True
"""Compiled exact elimination kernels.

Algorithm-identical twin of _core_py.py (see that module for the shared
conventions).  Values stay Python ints (arbitrary precision); Cython buys
speed on loop and container overhead only, so results match the pure
backend entry for entry.
"""

from math import gcd

BACKEND_NAME = "compiled"


cdef _gcd_reduce_dict(dict row):
    cdef object g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for j in row:
            row[j] //= g
    return row


cdef _gcd_reduce_list(list row, Py_ssize_t start):
    cdef object g = 0
    cdef Py_ssize_t j
    cdef Py_ssize_t n = len(row)
    for j in range(start, n):
        v = row[j]
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        for j in range(start, n):
            if row[j]:
                row[j] //= g
    return row


def echelon(Py_ssize_t nrows, Py_ssize_t ncols, rows):
    """See _core_py.echelon; same contract, same pivot rule."""
    cdef list active = []
    cdef list nnzs = []
    cdef bint dense = False
    cdef list pivot_cols = []
    cdef list pivot_rows = []
    cdef Py_ssize_t col, i, j, best, n, width
    cdef object total, pv, v, w, a, bnnz, babs
    for r in rows:
        if r:
            d = dict(r)
            active.append(d)
            nnzs.append(len(d))
    total = 0
    for i in range(len(nnzs)):
        total += nnzs[i]
    for col in range(ncols):
        if not active:
            break
        best = -1
        bnnz = 0
        babs = 0
        for i in range(len(active)):
            if dense:
                v = (<list>active[i])[col]
            else:
                v = (<dict>active[i]).get(col, 0)
            if v:
                a = -v if v < 0 else v
                if best < 0 or (nnzs[i], a) < (bnnz, babs):
                    best = i
                    bnnz = nnzs[i]
                    babs = a
        if best < 0:
            continue
        prow = active.pop(best)
        pn = nnzs.pop(best)
        total -= pn
        pv = prow[col]
        pivot_cols.append(col)
        if dense:
            pivot_rows.append({j: (<list>prow)[j] for j in range(col, ncols) if (<list>prow)[j]})
        else:
            pivot_rows.append(prow)
        for i in range(len(active)):
            r = active[i]
            if dense:
                v = (<list>r)[col]
                if not v:
                    continue
                for j in range(col, ncols):
                    (<list>r)[j] = pv * (<list>r)[j] - v * (<list>prow)[j]
                _gcd_reduce_list(<list>r, col + 1)
                n = 0
                for j in range(col + 1, ncols):
                    if (<list>r)[j]:
                        n += 1
                total += n - nnzs[i]
                nnzs[i] = n
            else:
                v = (<dict>r).get(col, 0)
                if not v:
                    continue
                nd = {}
                for j2, rv in (<dict>r).items():
                    nd[j2] = pv * rv
                for j2, pj in (<dict>prow).items():
                    w = nd.get(j2, 0) - v * pj
                    if w:
                        nd[j2] = w
                    elif j2 in nd:
                        del nd[j2]
                _gcd_reduce_dict(nd)
                total += len(nd) - nnzs[i]
                active[i] = nd
                nnzs[i] = len(nd)
        if dense:
            keep = [i for i in range(len(active)) if nnzs[i]]
        else:
            keep = [i for i in range(len(active)) if active[i]]
        if len(keep) != len(active):
            active = [active[i] for i in keep]
            nnzs = [nnzs[i] for i in keep]
        if not dense and active:
            width = ncols - col - 1
            if width > 0 and 2 * total > len(active) * width:
                dense = True
                conv = []
                for r in active:
                    row = [0] * ncols
                    for j2, v2 in (<dict>r).items():
                        row[j2] = v2
                    conv.append(row)
                active = conv
    return pivot_cols, pivot_rows


def snf(Py_ssize_t nrows, Py_ssize_t ncols, rows):
    """See _core_py.snf; same contract, same pivot rule."""
    cdef list m = [list(r) for r in rows]
    cdef list factors = []
    cdef Py_ssize_t t = 0
    cdef Py_ssize_t bi, bj, i, j, k
    cdef bint restart, fixed
    cdef object bv, v, a, p, q
    while t < nrows and t < ncols:
        bi = -1
        bj = -1
        bv = 0
        for i in range(t, nrows):
            ri = m[i]
            for j in range(t, ncols):
                v = (<list>ri)[j]
                if v:
                    a = -v if v < 0 else v
                    if bi < 0 or a < bv:
                        bi, bj, bv = i, j, a
        if bi < 0:
            break
        if bi != t:
            m[bi], m[t] = m[t], m[bi]
        if bj != t:
            for i in range(t, nrows):
                ri = m[i]
                tmp = (<list>ri)[bj]
                (<list>ri)[bj] = (<list>ri)[t]
                (<list>ri)[t] = tmp
        if m[t][t] < 0:
            m[t] = [-v for v in m[t]]
        while True:
            p = m[t][t]
            restart = False
            for i in range(t + 1, nrows):
                v = (<list>m[i])[t]
                if v:
                    q = v // p
                    if q:
                        mi = m[i]
                        mt = m[t]
                        for j in range(t, ncols):
                            (<list>mi)[j] -= q * (<list>mt)[j]
                    if (<list>m[i])[t]:
                        m[i], m[t] = m[t], m[i]
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, ncols):
                v = (<list>m[t])[j]
                if v:
                    q = v // p
                    if q:
                        for i in range(t, nrows):
                            (<list>m[i])[j] -= q * (<list>m[i])[t]
                    if (<list>m[t])[j]:
                        for i in range(t, nrows):
                            ri = m[i]
                            tmp = (<list>ri)[j]
                            (<list>ri)[j] = (<list>ri)[t]
                            (<list>ri)[t] = tmp
                        restart = True
                        break
            if restart:
                continue
            p = m[t][t]
            fixed = True
            for i in range(t + 1, nrows):
                ri = m[i]
                for j in range(t + 1, ncols):
                    if (<list>ri)[j] % p:
                        mt = m[t]
                        for k in range(t, ncols):
                            (<list>mt)[k] += (<list>ri)[k]
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        factors.append(m[t][t])
        t += 1
    return factors
