"""Pure-Python exact elimination kernels.

This is the reference backend for steinberg.linalg.  A compiled twin of the
same routines lives in _core.pyx; the two must stay in algorithmic lockstep
so that results are identical entry for entry regardless of which backend an
installation picked up.

All kernels work over arbitrary-precision integers.  Rational input is scaled
row-wise to integers by the caller (row scaling does not change ranks, row
spaces up to scale, or null spaces).

Conventions shared by both backends:

* A sparse row is a dict mapping column index to a nonzero int.
* `echelon` processes columns left to right.  The pivot row for a column is
  the active row with the fewest nonzeros, ties broken by smallest absolute
  pivot entry, then by position in the current active list.  Updates use the
  cross-multiplication rule new = pivot_entry * row - row_entry * pivot_row
  followed by division of the row by the gcd of its entries, which keeps
  entry growth controlled without leaving exact integer arithmetic.
* When fill-in exceeds half of the active block the kernel switches to a
  dense row representation and continues with the same pivot rule, so the
  output does not depend on the switch point.
"""

from math import gcd

BACKEND_NAME = "python"


def _gcd_reduce_dict(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for j in row:
            row[j] //= g
    return row


def _gcd_reduce_list(row, start):
    g = 0
    for j in range(start, len(row)):
        v = row[j]
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        for j in range(start, len(row)):
            if row[j]:
                row[j] //= g
    return row


def echelon(nrows, ncols, rows):
    """Reduce integer rows to (unnormalized) row echelon form.

    Args:
        nrows: number of rows of the matrix (unused except for sanity).
        ncols: number of columns.
        rows: iterable of sparse rows ({col: int}); consumed by copy.

    Returns:
        (pivot_cols, pivot_rows): pivot columns in increasing order and the
        corresponding eliminated rows as sparse dicts.  len(pivot_cols) is
        the rank.  Each pivot row has its leading nonzero at its pivot
        column and support strictly to the right elsewhere; rows are
        gcd-reduced but not sign- or pivot-normalized.
    """
    active = []
    nnzs = []
    for r in rows:
        if r:
            d = dict(r)
            active.append(d)
            nnzs.append(len(d))
    dense = False
    pivot_cols = []
    pivot_rows = []
    total = sum(nnzs)
    for col in range(ncols):
        if not active:
            break
        # Deterministic pivot choice: fewest nonzeros, then smallest
        # |entry|, then first in current order.
        best = -1
        bnnz = 0
        babs = 0
        for i in range(len(active)):
            if dense:
                v = active[i][col]
            else:
                v = active[i].get(col, 0)
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
        if dense:
            pv = prow[col]
        else:
            pv = prow[col]
        pivot_cols.append(col)
        if dense:
            pivot_rows.append({j: prow[j] for j in range(col, ncols) if prow[j]})
        else:
            pivot_rows.append(prow)
        # Eliminate the pivot column from every remaining active row.
        for i in range(len(active)):
            r = active[i]
            if dense:
                v = r[col]
                if not v:
                    continue
                for j in range(col, ncols):
                    r[j] = pv * r[j] - v * prow[j]
                _gcd_reduce_list(r, col + 1)
                n = 0
                for j in range(col + 1, ncols):
                    if r[j]:
                        n += 1
                total += n - nnzs[i]
                nnzs[i] = n
            else:
                v = r.get(col, 0)
                if not v:
                    continue
                nd = {}
                for j, rv in r.items():
                    nd[j] = pv * rv
                for j, pj in prow.items():
                    w = nd.get(j, 0) - v * pj
                    if w:
                        nd[j] = w
                    elif j in nd:
                        del nd[j]
                _gcd_reduce_dict(nd)
                total += len(nd) - nnzs[i]
                active[i] = nd
                nnzs[i] = len(nd)
        # Drop rows that became zero.
        if dense:
            keep = [i for i in range(len(active)) if nnzs[i]]
        else:
            keep = [i for i in range(len(active)) if active[i]]
        if len(keep) != len(active):
            active = [active[i] for i in keep]
            nnzs = [nnzs[i] for i in keep]
        # Dense fallback once fill-in passes half of the active block.
        if not dense and active:
            width = ncols - col - 1
            if width > 0 and 2 * total > len(active) * width:
                dense = True
                conv = []
                for r in active:
                    row = [0] * ncols
                    for j, v in r.items():
                        row[j] = v
                    conv.append(row)
                active = conv
    return pivot_cols, pivot_rows


def snf(nrows, ncols, rows):
    """Invariant factors of an integer matrix by gcd pivoting.

    Args:
        nrows, ncols: matrix shape.
        rows: dense rows (list of int lists); consumed by copy.

    Returns:
        List of positive invariant factors d_1 | d_2 | ... (zeros omitted).

    Pivot choice is the minimal-|value| nonzero entry of the remaining
    block, ties by lowest (row, col).  Row/column elimination by integer
    division; a nonzero remainder becomes the new, strictly smaller pivot,
    so the loop terminates.  A final divisibility sweep folds any entry not
    divisible by the pivot into the pivot row and retries.
    """
    m = [list(r) for r in rows]
    factors = []
    t = 0
    while t < nrows and t < ncols:
        # Locate the minimal nonzero entry of the trailing block.
        bi = -1
        bj = -1
        bv = 0
        for i in range(t, nrows):
            ri = m[i]
            for j in range(t, ncols):
                v = ri[j]
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
                ri[bj], ri[t] = ri[t], ri[bj]
        if m[t][t] < 0:
            m[t] = [-v for v in m[t]]
        while True:
            p = m[t][t]
            # Clear column t.
            restart = False
            for i in range(t + 1, nrows):
                v = m[i][t]
                if v:
                    q = v // p
                    if q:
                        mi = m[i]
                        mt = m[t]
                        for j in range(t, ncols):
                            mi[j] -= q * mt[j]
                    if m[i][t]:
                        # Remainder smaller than p: promote it to pivot.
                        m[i], m[t] = m[t], m[i]
                        restart = True
                        break
            if restart:
                continue
            # Clear row t.
            for j in range(t + 1, ncols):
                v = m[t][j]
                if v:
                    q = v // p
                    if q:
                        for i in range(t, nrows):
                            m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for i in range(t, nrows):
                            ri = m[i]
                            ri[j], ri[t] = ri[t], ri[j]
                        restart = True
                        break
            if restart:
                continue
            # Divisibility sweep over the trailing block.
            p = m[t][t]
            fixed = True
            for i in range(t + 1, nrows):
                ri = m[i]
                for j in range(t + 1, ncols):
                    if ri[j] % p:
                        mt = m[t]
                        for k in range(t, ncols):
                            mt[k] += ri[k]
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        factors.append(m[t][t])
        t += 1
    return factors
