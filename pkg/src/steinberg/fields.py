"""Finite field arithmetic for small q, with subspace canonicalization.

Prime fields use machine modular arithmetic.  The prime-power fields with
q <= 9 (4, 8, 9) use explicit multiplication tables generated from a fixed
irreducible polynomial; elements are integers 0..q-1 whose base-p digits
are the polynomial coefficients, so 0 and 1 are the field's 0 and 1.

Subspaces of F_q^n are canonicalized by reduced row echelon form: the RREF
basis of a subspace is unique, so equal subspaces get equal keys.
"""

from __future__ import annotations

# Irreducible polynomials used for the non-prime fields, low degree first:
# q=4: x^2+x+1 over F_2, q=8: x^3+x+1 over F_2, q=9: x^2+1 over F_3.
_IRREDUCIBLE = {
    4: (2, (1, 1, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (1, 0, 1)),
}

_PRIMES = {2, 3, 5, 7}


def _digits(x, p, length):
    out = []
    for _ in range(length):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p):
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


class FiniteField:
    """F_q for q prime in {2,3,5,7} or q in {4,8,9}."""

    def __init__(self, q: int):
        if q in _PRIMES:
            self.q = q
            self.p = q
            self.degree = 1
            self._mul = None
            self._inv = [0] * q
            for a in range(1, q):
                self._inv[a] = pow(a, q - 2, q)
        elif q in _IRREDUCIBLE:
            p, poly = _IRREDUCIBLE[q]
            self.q = q
            self.p = p
            self.degree = len(poly) - 1
            self._build_tables(p, poly)
        else:
            raise ValueError(f"unsupported field size {q} (need a prime power <= 9)")

    def _build_tables(self, p, poly):
        deg = self.degree
        q = self.q
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            da = _digits(a, p, deg)
            for b in range(q):
                db = _digits(b, p, deg)
                conv = [0] * (2 * deg - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            conv[i + j] = (conv[i + j] + x * y) % p
                # Reduce modulo the defining polynomial (monic, degree deg).
                for i in range(len(conv) - 1, deg - 1, -1):
                    c = conv[i]
                    if c:
                        conv[i] = 0
                        for j in range(deg):
                            conv[i - deg + j] = (conv[i - deg + j] - c * poly[j]) % p
                mul[a][b] = _undigits(conv[:deg], p)
        self._mul = mul
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
            else:
                raise AssertionError("polynomial not irreducible")
        self._inv = inv

    def add(self, a, b):
        if self.degree == 1:
            return (a + b) % self.p
        p = self.p
        da = _digits(a, p, self.degree)
        db = _digits(b, p, self.degree)
        return _undigits([(x + y) % p for x, y in zip(da, db)], p)

    def neg(self, a):
        if self.degree == 1:
            return (-a) % self.p
        p = self.p
        return _undigits([(-x) % p for x in _digits(a, p, self.degree)], p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.degree == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def elements(self):
        return range(self.q)


_FIELD_CACHE: dict = {}


def finite_field(q: int) -> FiniteField:
    if q not in _FIELD_CACHE:
        _FIELD_CACHE[q] = FiniteField(q)
    return _FIELD_CACHE[q]


def vec_add(field, u, v):
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_scale(field, c, v):
    return tuple(field.mul(c, a) for a in v)


def mat_vec(field, m, v):
    out = []
    for row in m:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return tuple(out)


def mat_mul(field, a, b):
    bt = list(zip(*b))
    return tuple(tuple(_dot(field, row, col) for col in bt) for row in a)


def _dot(field, u, v):
    acc = 0
    for x, y in zip(u, v):
        if x and y:
            acc = field.add(acc, field.mul(x, y))
    return acc


def rref(field, rows):
    """Canonical reduced row echelon form; zero rows dropped.

    Returns a tuple of tuples.  RREF is unique per row space, so this is a
    canonical key for the subspace spanned by the input rows.
    """
    work = [list(r) for r in rows]
    if not work:
        return ()
    ncols = len(work[0])
    if any(len(r) != ncols for r in work):
        raise ValueError("rows must share one length")
    pivot_rows = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.inv(work[r][col])
        work[r] = [field.mul(inv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col]:
                c = work[i][col]
                work[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(work[i], work[r])]
        pivot_rows.append(col)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r])


def subspace_key(field, vectors):
    return rref(field, vectors)


def matrix_rank(field, rows) -> int:
    return len(rref(field, rows))


def is_invertible(field, m) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and matrix_rank(field, m) == n


def subspace_contains(field, key, vector) -> bool:
    """Membership test against an RREF key."""
    stacked = rref(field, list(key) + [list(vector)])
    return len(stacked) == len(key)


def all_subspaces(field, n, dim):
    """All dim-dimensional subspaces of F_q^n as RREF keys, lexicographic.

    Enumerates RREF matrices directly: choose pivot columns, then fill the
    free positions (entries right of each pivot in non-pivot columns) with
    arbitrary field elements.
    """
    from itertools import combinations, product

    out = []
    for pivots in combinations(range(n), dim):
        free_pos = []
        for r, pc in enumerate(pivots):
            for c in range(pc + 1, n):
                if c not in pivots:
                    free_pos.append((r, c))
        for fill in product(field.elements(), repeat=len(free_pos)):
            m = [[0] * n for _ in range(dim)]
            for r, pc in enumerate(pivots):
                m[r][pc] = 1
            for (r, c), val in zip(free_pos, fill):
                m[r][c] = val
            out.append(tuple(tuple(row) for row in m))
    return out


def subspace_image(field, key, g):
    """Canonical key of g . V for a subspace key V and matrix g.

    Vectors are columns; a subspace stored as RREF rows r maps to the row
    space of r @ g^T, and (r @ g^T)_j = sum_k g_jk r_k = (g r)_j.
    """
    rows = [mat_vec(field, g, row) for row in key]
    return rref(field, rows)
