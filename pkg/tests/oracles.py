"""Independent reference implementations for cross-checking the library.

Written from scratch against textbook definitions and sharing no code
with the package: Fraction-based Gaussian elimination, determinantal
divisor Smith forms, Leibniz determinants, a vectorized brute-force
search for the smallest unit of a real quadratic order, and class
numbers via Minkowski-bounded ideal enumeration (continued-fraction
cycle tags for real orders, bounded principality searches for imaginary
ones).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np


def rank_fraction(rows) -> int:
    """Row reduce over Fraction, first-nonzero pivoting."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat or not mat[0]:
        return 0
    ncols = len(mat[0])
    rank = 0
    col = 0
    while rank < len(mat) and col < ncols:
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def nullspace_fraction(rows, ncols):
    """Kernel basis via full RREF; one vector per free column."""
    mat = [[Fraction(x) for x in r] for r in rows if any(r)]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        mat[r] = [x / mat[r][col] for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for rr, pc in enumerate(pivots):
            vec[pc] = -mat[rr][fc]
        basis.append(tuple(vec))
    return basis


def det_leibniz(rows) -> Fraction:
    """Signed permutation expansion; fine for n <= 6."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Fraction(sign)
        for i in range(n):
            term *= Fraction(rows[i][perm[i]])
        total += term
    return total


def invariant_factors_minors(rows):
    """Smith invariant factors from gcds of k x k minors (small inputs)."""
    m, n = len(rows), len(rows[0]) if rows else 0
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rsel in combinations(range(m), k):
            for csel in combinations(range(n), k):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                g = math.gcd(g, int(det_leibniz(sub)))
        if g == 0:
            break
        divisors.append(g)
    return tuple(
        divisors[k] // divisors[k - 1] for k in range(1, len(divisors))
    )


def gaussian_binomial(n, k, q) -> int:
    """Number of k-dimensional subspaces of an n-space over F_q."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    assert num % den == 0
    return num // den


def flag_count(n, q, dims) -> int:
    """Number of subspace chains with the given strictly increasing dims."""
    total = 1
    upper = n
    for dim in sorted(dims, reverse=True):
        total *= gaussian_binomial(upper, dim, q)
        upper = dim
    return total


def pell_min_unit_search(d, cap=300_000, batch=50_000):
    """Smallest unit > 1 of the quadratic order of d by direct search.

    Scans the sqrt coefficient q upward and tests p^2 = d q^2 +- t^2 for
    perfect squares (t = 2 exactly when d = 1 mod 4, with p = q mod 2).
    Returns {"a", "b", "denom", "norm"} or None if nothing shows up by
    the cap; the smallest q wins, and at equal q the norm -1 solution is
    smaller.
    """
    t = 2 if d % 4 == 1 else 1
    tt = t * t
    for start in range(1, cap + 1, batch):
        stop = min(start + batch, cap + 1)
        qs = np.arange(start, stop, dtype=np.int64)
        base = d * qs * qs
        found = []
        for sgn in (-1, 1):
            vals = base + sgn * tt
            ok = vals > 0
            roots = np.sqrt(vals.astype(np.float64), where=ok, out=np.zeros_like(vals, dtype=np.float64)).astype(np.int64)
            for delta in (-1, 0, 1):
                cand = roots + delta
                hits = ok & (cand >= 0) & (cand * cand == vals)
                for idx in np.nonzero(hits)[0]:
                    p = int(cand[idx])
                    q = int(qs[idx])
                    if t == 2 and (p - q) % 2 != 0:
                        continue
                    found.append((q, p, sgn))
        if found:
            q, p, sgn = min(found)
            return {"a": p, "b": q, "denom": t, "norm": sgn}
    return None


def _omega_params(d):
    """(trace, norm, discriminant) of the module generator omega."""
    if d % 4 == 1:
        return 1, (1 - d) // 4, d
    return 0, -d, 4 * d


def enumerate_ideals(d):
    """Primitive ideals (a, b) = aZ + (b + omega)Z within the class bound.

    Every ideal class contains one of these; extra ideals past the exact
    bound are harmless for counting classes.
    """
    t, nw, D = _omega_params(d)
    if D > 0:
        a_max = math.isqrt(D) // 2 + 1
    else:
        a_max = int(2 * math.sqrt(abs(D)) / math.pi) + 2
    out = []
    for a in range(1, a_max + 1):
        for b in range(a):
            if (b * b + t * b + nw) % a == 0:
                out.append((a, b))
    return out


def conjugate_ideal(d, ideal):
    t, _, _ = _omega_params(d)
    a, b = ideal
    return (a, (-b - t) % a)


def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    return old_r, old_s, old_t


def ideal_product(d, one, two):
    """Product of primitive ideals in (g, a, b) form via a 2-column HNF."""
    t, nw, _ = _omega_params(d)
    a1, b1 = one
    a2, b2 = two
    gens = [
        (a1 * a2, 0),
        (a1 * b2, a1),
        (b1 * a2, a2),
        (b1 * b2 - nw, b1 + b2 + t),
    ]
    vx, vy = 0, 0
    for x, y in gens:
        if y == 0:
            continue
        if vy == 0:
            vx, vy = x, y
        else:
            g, s, u = _ext_gcd(vy, y)
            vx, vy = s * vx + u * x, g
    if vy < 0:
        vx, vy = -vx, -vy
    assert vy > 0, "product lost its omega component"
    alpha = 0
    for x, y in gens:
        assert y % vy == 0
        alpha = math.gcd(alpha, x - (y // vy) * vx)
    assert alpha > 0, "product has no integer part"
    assert alpha % vy == 0 and vx % vy == 0, "product is not an ideal"
    g = vy
    a = alpha // vy
    b = (vx // vy) % a
    return g, a, b


def _floor_surd(P, Q, sD):
    if Q > 0:
        return (P + sD) // Q
    return -((P + sD) // (-Q)) - 1


def surd_cycle_tag(d, ideal, cap=100_000):
    """Canonical tag of the continued-fraction cycle of (b + omega)/a.

    Two ideals of a real order lie in the same (wide) class exactly when
    their surds share an eventual continued-fraction cycle; the tag is
    the lexicographically least (Q, P) state on that cycle.
    """
    t, _, D = _omega_params(d)
    assert D > 0
    sD = math.isqrt(D)
    assert sD * sD != D
    a, b = ideal
    P, Q = 2 * b + t, 2 * a
    seen = {}
    for step in range(cap):
        if (P, Q) in seen:
            cycle_start = seen[(P, Q)]
            states = [s for s, i in seen.items() if i >= cycle_start]
            return min((q, p) for p, q in states)
        seen[(P, Q)] = step
        m = _floor_surd(P, Q, sD)
        P2 = m * Q - P
        assert (D - P2 * P2) % Q == 0
        P, Q = P2, (D - P2 * P2) // Q
    raise AssertionError("continued fraction failed to cycle")


def is_principal_imaginary(d, ideal):
    """Bounded search for a generator; exact for definite norm forms."""
    t, nw, D = _omega_params(d)
    assert D < 0
    a, b = ideal
    y = 0
    while abs(D) * y * y <= 4 * a:
        disc = D * y * y + 4 * a
        s = math.isqrt(disc)
        if s * s == disc:
            for x2 in (-t * y + s, -t * y - s):
                if x2 % 2 == 0:
                    x = x2 // 2
                    if (x - y * b) % a == 0 and x * x + t * x * y + nw * y * y == a:
                        return True
        y += 1
    return False


def class_number_by_ideals(d) -> int:
    """Wide class number by classifying the Minkowski-bounded ideals."""
    _, _, D = _omega_params(d)
    ideals = enumerate_ideals(d)
    if D > 0:
        tags = {surd_cycle_tag(d, ideal) for ideal in ideals}
        return len(tags)
    parent = {ideal: ideal for ideal in ideals}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, one in enumerate(ideals):
        for two in ideals[i + 1 :]:
            if find(one) == find(two):
                continue
            _, a, b = ideal_product(d, one, conjugate_ideal(d, two))
            if is_principal_imaginary(d, (a, b)):
                parent[find(one)] = find(two)
    return len({find(ideal) for ideal in ideals})


def matmod(x, y, p):
    n = len(x)
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(n)) % p for j in range(n))
        for i in range(n)
    )


def mulclose(gens, p, cap=100_000):
    """Closure of integer matrices under multiplication mod a prime p."""
    gens = [tuple(tuple(v % p for v in row) for row in g) for g in gens]
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = matmod(m, g, p)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
                    if len(seen) > cap:
                        raise AssertionError("closure exceeded cap")
        frontier = nxt
    return seen
