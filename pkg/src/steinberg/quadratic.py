"""Quadratic orders: exact elements, units, class groups, characters.

Orders are the maximal orders Z[omega] of Q(sqrt(d)) for squarefree d.
Elements are stored as (a + b sqrt(d)) / denom with a uniform denominator:
2 when d = 1 mod 4 (with a = b mod 2), otherwise 1.  All element
arithmetic, norms, and unit tests are exact integer arithmetic.

The fundamental unit comes from the continued fraction of sqrt(d)
(d = 2, 3 mod 4) or (1 + sqrt(d))/2 (d = 1 mod 4): convergents p_k/q_k are
scanned and the first element p_k - q_k * conj(omega) of norm +-1 is the
fundamental unit; the negative-Pell verdict is its norm sign.  Class
numbers come from reduced binary quadratic forms of the field discriminant
(counted directly for D < 0; counted as reduction cycles for D > 0, then
converted from narrow to wide using the unit norm).

The d-absent integer specialization (the ring Z, signature (1,0)) is
provided for the rational case; its norm is the identity, so -1 is a unit
of norm -1 and the determinant-norm character is the determinant sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from mpmath import mp, mpf, log as _mplog

from .linalg import ExactMatrix, determinant

CF_STEP_CAP = 10**6


def is_squarefree(d: int) -> bool:
    if d in (0, 1):
        return False
    n = abs(d)
    if n % 4 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingElement:
    """(a + b sqrt(d)) / denom, with denom fixed by d mod 4."""

    d: int
    a: int
    b: int

    def __post_init__(self):
        if self.d % 4 == 1 and (self.a - self.b) % 2:
            raise ValueError("a and b must share parity when d = 1 mod 4")

    @property
    def denom(self) -> int:
        return 2 if self.d % 4 == 1 else 1

    def _make(self, a, b):
        return RingElement(self.d, a, b)

    def __add__(self, other):
        other = self._coerce(other)
        return self._make(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._coerce(other)
        return self._make(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return self._make(-self.a, -self.b)

    def __mul__(self, other):
        other = self._coerce(other)
        num_a = self.a * other.a + self.d * self.b * other.b
        num_b = self.a * other.b + self.b * other.a
        if self.denom == 2:
            # Product of two half-integer elements: both components are
            # even (parity argument with d odd), so the result is exact.
            if num_a % 2 or num_b % 2:
                raise AssertionError("parity violated in product")
            return self._make(num_a // 2, num_b // 2)
        return self._make(num_a, num_b)

    __radd__ = __add__
    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.d != self.d:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, int):
            return from_int(self.d, other)
        raise TypeError(f"cannot combine RingElement with {type(other).__name__}")

    def conjugate(self):
        return self._make(self.a, -self.b)

    def norm(self) -> int:
        num = self.a * self.a - self.d * self.b * self.b
        if self.denom == 2:
            if num % 4:
                raise AssertionError("norm not integral")
            return num // 4
        return num

    def trace(self) -> int:
        if self.denom == 2:
            return self.a
        return 2 * self.a

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse(self):
        n = self.norm()
        if abs(n) != 1:
            raise ValueError("not a unit")
        c = self.conjugate()
        return c if n == 1 else -c

    def divexact(self, other):
        """Exact division in the order; raises if not divisible."""
        other = self._coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        w = self * other.conjugate()
        if w.a % abs(n) or w.b % abs(n):
            raise ValueError("not divisible in the order")
        q = self._make(w.a // n, w.b // n) if n > 0 else self._make(-(w.a // -n), -(w.b // -n))
        # Normalize via exact multiplication check.
        if q * other != self:
            raise ValueError("not divisible in the order")
        return q

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = from_int(self.d, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self):
        if self.denom == 2:
            return f"({self.a} + {self.b}*sqrt({self.d}))/2"
        return f"{self.a} + {self.b}*sqrt({self.d})"


def from_int(d: int, n: int) -> RingElement:
    if d % 4 == 1:
        return RingElement(d, 2 * n, 0)
    return RingElement(d, n, 0)


def sqrt_element(d: int) -> RingElement:
    if d % 4 == 1:
        return RingElement(d, 0, 2)
    return RingElement(d, 0, 1)


@dataclass(frozen=True)
class QuadraticOrder:
    """Maximal order of Q(sqrt(d)) for squarefree d not in {0, 1}."""

    d: int

    def __post_init__(self):
        if not is_squarefree(self.d):
            raise ValueError(f"d={self.d} must be squarefree and not 0 or 1")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def signature(self):
        return (2, 0) if self.d > 0 else (0, 1)

    @property
    def is_real(self) -> bool:
        return self.d > 0

    def element(self, a, b) -> RingElement:
        return RingElement(self.d, a, b)

    def integer(self, n) -> RingElement:
        return from_int(self.d, n)


class RationalIntegers:
    """The ring Z (the d-absent specialization): norm is the identity."""

    d = None
    discriminant = 1
    signature = (1, 0)
    is_real = True

    def __repr__(self):
        return "RationalIntegers()"


ZZ = RationalIntegers()


def make_order(d: int) -> QuadraticOrder:
    return QuadraticOrder(d)


def _cf_surd_step(P, Q, d, s):
    # One continued-fraction step for (P + sqrt(d))/Q with Q | d - P^2.
    a = (P + s) // Q
    P2 = a * Q - P
    Q2 = (d - P2 * P2) // Q
    return a, P2, Q2


def fundamental_unit(order: QuadraticOrder) -> RingElement:
    """Smallest unit greater than 1, by continued-fraction convergents.

    Raises ValueError for imaginary orders (unit rank 0) and RuntimeError
    if the expansion exceeds the step cap.
    """
    d = order.d
    if d < 0:
        raise ValueError("imaginary quadratic orders have no fundamental unit")
    s = isqrt(d)
    if d % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    # Convergents of omega; u_k = p_k - q_k * conj(omega) lies in the order
    # and |N(u_k)| = 1 exactly at period boundaries.
    p_prev, q_prev = 1, 0
    p, q = None, None
    for _ in range(CF_STEP_CAP):
        if Q <= 0:
            raise AssertionError("continued fraction left the reduced range")
        a, P, Q = _cf_surd_step(P, Q, d, s)
        if p is None:
            p, q = a, 1
        else:
            p, q, p_prev, q_prev = a * p + p_prev, a * q + q_prev, p, q
        if d % 4 == 1:
            # u = p - q*(1 - sqrt(d))/2 = ((2p - q) + q sqrt(d)) / 2
            u = RingElement(d, 2 * p - q, q)
        else:
            u = RingElement(d, p, q)
        if abs(u.norm()) == 1:
            return u
    raise RuntimeError("continued fraction period exceeds step cap")


def has_norm_minus_one_unit(order) -> bool:
    """Whether some unit has norm -1 (the negative-Pell verdict)."""
    if isinstance(order, RationalIntegers):
        return True
    if order.d < 0:
        return False
    return fundamental_unit(order).norm() == -1


# ---------------------------------------------------------------------------
# Binary quadratic forms and class numbers.


def _reduced_definite_forms(D: int):
    # Primitive reduced positive definite forms: |b| <= a <= c with
    # b >= 0 when |b| == a or a == c.
    out = []
    amax = isqrt(-D // 3) if D < -3 else 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            out.append((a, b, c))
    return sorted(out)


def _is_reduced_indefinite(a, b, c, D, s):
    # 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, all exact.
    if b <= 0 or b * b >= D:
        return False
    t = 2 * abs(a)
    if t - b >= 0 and (t - b) * (t - b) >= D:
        return False
    if (t + b) * (t + b) <= D:
        return False
    return True


def _reduced_indefinite_forms(D: int):
    s = isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (D - b * b) % 4:
            continue
        m = (D - b * b) // 4
        if m <= 0:
            continue
        f = 1
        while f * f <= m:
            if m % f == 0:
                for aa in {f, m // f}:
                    for a in (aa, -aa):
                        c = -m // a
                        if _is_reduced_indefinite(a, b, c, D, s):
                            if gcd(gcd(abs(a), b), abs(c)) == 1:
                                out.append((a, b, c))
            f += 1
    return sorted(out)


def _rho(form, D, s):
    # Reduction neighbor: (a, b, c) -> (c, b', (b'^2 - D) / 4c) with
    # b' = -b mod 2|c| chosen maximal below sqrt(D).
    a, b, c = form
    tc = 2 * abs(c)
    k = (s + b) // tc
    b2 = -b + tc * k
    # Largest b2 = -b mod 2|c| with b2 <= s.
    while b2 > s:
        b2 -= tc
    while b2 + tc <= s:
        b2 += tc
    c2 = (b2 * b2 - D) // (4 * c)
    return (c, b2, c2)


@dataclass(frozen=True)
class ClassGroupData:
    """Wide and narrow class numbers with reduced form representatives."""

    d: int
    discriminant: int
    h: int
    h_narrow: int
    representatives: tuple


def class_group(order: QuadraticOrder) -> ClassGroupData:
    """Class numbers from reduced binary quadratic forms of discriminant D.

    D < 0: reduced primitive positive definite forms biject with the class
    group; the narrow and wide class numbers agree.  D > 0: cycles of
    reduced indefinite forms under the reduction step biject with the
    narrow class group; the wide count divides by 2 exactly when the
    fundamental unit has norm +1.
    """
    D = order.discriminant
    if D < 0:
        forms = _reduced_definite_forms(D)
        reps = tuple(forms)
        h = len(forms)
        return ClassGroupData(order.d, D, h, h, reps)
    s = isqrt(D)
    forms = _reduced_indefinite_forms(D)
    form_set = set(forms)
    seen = set()
    reps = []
    for f in forms:
        if f in seen:
            continue
        cycle = []
        g = f
        while g not in seen:
            seen.add(g)
            cycle.append(g)
            g = _rho(g, D, s)
            if g not in form_set:
                raise AssertionError(f"reduction left the reduced set: {g}")
        reps.append(min(cycle))
    h_narrow = len(reps)
    if has_norm_minus_one_unit(order):
        h = h_narrow
    else:
        if h_narrow % 2:
            raise AssertionError("narrow class number must be even here")
        h = h_narrow // 2
    return ClassGroupData(order.d, D, h, h_narrow, tuple(sorted(reps)))


# ---------------------------------------------------------------------------
# Characters and embeddings.


def chi(order, matrix) -> int:
    """Sign of the norm of the determinant for a matrix invertible over O.

    matrix entries: RingElement over the order's d, or plain ints.  For the
    integer specialization the norm is the identity, so this is the sign
    of the determinant.  Raises ValueError when the determinant is not a
    unit of the order.
    """
    if isinstance(order, RationalIntegers):
        m = ExactMatrix.from_dense(matrix)
        det = determinant(m)
        if det not in (1, -1):
            raise ValueError("matrix is not invertible over Z")
        return 1 if det == 1 else -1
    d = order.d
    n = len(matrix)
    rows = []
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix must be square")
        conv = []
        for x in row:
            if isinstance(x, RingElement):
                if x.d != d:
                    raise ValueError("entry from a different field")
                conv.append(x)
            else:
                conv.append(from_int(d, int(x)))
        rows.append(conv)
    det = _ring_determinant(order, rows)
    nrm = det.norm()
    if abs(nrm) != 1:
        raise ValueError("determinant is not a unit of the order")
    return 1 if nrm == 1 else -1


def _ring_determinant(order, rows):
    """Fraction-free (Bareiss) determinant over the order."""
    n = len(rows)
    if n == 0:
        return from_int(order.d, 1)
    m = [list(r) for r in rows]
    zero = from_int(order.d, 0)
    sign = 1
    prev = from_int(order.d, 1)
    for k in range(n - 1):
        if m[k][k] == zero:
            swap = next((i for i in range(k + 1, n) if m[i][k] != zero), None)
            if swap is None:
                return zero
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = zero
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return out if sign == 1 else -out


def log_embedding(order: QuadraticOrder, u: RingElement):
    """Dirichlet log vector of a unit, one coordinate per infinite place.

    Real orders: (log|u|, log|u'|) for the two real embeddings.  Imaginary
    orders: (2 log|u|,) with the doubled complex coordinate.  Computed at
    50 decimal digits and returned as floats; the coordinates of a unit
    sum to 0 up to that precision.
    """
    if not isinstance(u, RingElement) or u.d != order.d:
        raise ValueError("element does not belong to the order")
    if not u.is_unit():
        raise ValueError("log embedding defined here for units only")
    old = mp.dps
    mp.dps = 50
    try:
        rt = mp.sqrt(abs(order.d))
        den = mpf(u.denom)
        if order.d > 0:
            s1 = (mpf(u.a) + mpf(u.b) * rt) / den
            s2 = (mpf(u.a) - mpf(u.b) * rt) / den
            out = (float(_mplog(abs(s1))), float(_mplog(abs(s2))))
        else:
            modulus_sq = (mpf(u.a) ** 2 + mpf(u.b) ** 2 * abs(order.d)) / den**2
            out = (float(_mplog(modulus_sq)),)
    finally:
        mp.dps = old
    return out


def order_descriptor(order) -> dict:
    """JSON-ready descriptor of an order and its computed invariants."""
    if isinstance(order, RationalIntegers):
        return {
            "d": None,
            "D": 1,
            "signature": [1, 0],
            "fundamental_unit": None,
            "h": 1,
            "h_narrow": 1,
            "norm_minus_one": True,
        }
    cg = class_group(order)
    unit = None
    if order.d > 0:
        u = fundamental_unit(order)
        unit = {"a": u.a, "b": u.b, "denom": u.denom, "norm": u.norm()}
    return {
        "d": order.d,
        "D": order.discriminant,
        "signature": list(order.signature),
        "fundamental_unit": unit,
        "h": cg.h,
        "h_narrow": cg.h_narrow,
        "norm_minus_one": has_norm_minus_one_unit(order),
    }
