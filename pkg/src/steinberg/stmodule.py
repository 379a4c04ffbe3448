"""Steinberg modules, apartment classes, coinvariants, and duality data.

The Steinberg module of GL_n(F_q) is realized concretely as the cycle
space in the top degree (n-2) of the reduced chain complex of the
building: every top chain with zero boundary.  Its canonical basis comes
from the reduced echelon kernel construction, whose vectors are supported
so that coordinates in the basis can be read off at the free columns.

Apartment classes: a frame of n independent lines L_1..L_n spans one
apartment, the barycentric (n-2)-sphere on the proper nonempty index
subsets I (vertex = span of L_i, i in I).  Its fundamental cycle is the
signed sum over maximal chains of subsets, one chain per permutation,
weighted by the permutation sign; vertices inside each flag are ordered by
subset size.  Swapping two frame lines negates the class.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations

from . import fields as ff
from .complexes import SemisimplicialSet, chain_complex, group_action, tits_building
from .errors import DEFAULT_SIMPLEX_BUDGET
from .linalg import ExactMatrix, determinant, kernel_basis, rank
from .quadratic import RationalIntegers, has_norm_minus_one_unit


@dataclass(frozen=True)
class LinearAction:
    """A list of exact square matrices acting on a space of dimension dim."""

    dim: int
    matrices: tuple


@dataclass(frozen=True)
class CharacterTwist:
    """Signs (+1/-1), one per generator, defining a sign character twist."""

    signs: tuple

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("twist signs must be +1 or -1")


class SteinbergModule:
    """Top cycle space of the reduced building chain complex."""

    def __init__(self, n, q, budget=DEFAULT_SIMPLEX_BUDGET):
        self.n = n
        self.q = q
        self.building = tits_building(n, q, budget=budget)
        self.chain = chain_complex(self.building, reduced=True)
        self.top = n - 2
        boundary = self.chain.boundaries[self.top]
        basis = kernel_basis(boundary)
        self.basis = basis
        self.dim = len(basis)
        # Free-column structure of the canonical kernel basis: column f_j
        # carries 1 in basis vector j and 0 in all others.
        free_cols = []
        for j, vec in enumerate(basis):
            col = next(
                i
                for i, v in enumerate(vec)
                if v == 1 and all(basis[k][i] == 0 for k in range(len(basis)) if k != j)
            )
            free_cols.append(col)
        self._free_cols = tuple(free_cols)

    def _coords(self, chain_vec):
        """Coordinates of a cycle in the canonical basis (exact, verified)."""
        coords = tuple(chain_vec[f] for f in self._free_cols)
        recon = [Fraction(0)] * len(chain_vec)
        for c, bvec in zip(coords, self.basis):
            if c:
                for i, v in enumerate(bvec):
                    if v:
                        recon[i] += c * v
        if tuple(recon) != tuple(Fraction(x) for x in chain_vec):
            raise ValueError("chain is not in the cycle space")
        return coords

    def action(self, generators) -> LinearAction:
        """Exact matrices of the generators acting on the cycle space.

        Generators act by permuting top simplices (flags map to flags with
        preserved dimension order, so no signs appear); each permuted basis
        cycle is re-expressed in the canonical basis.
        """
        act = group_action(self.building, self.q, generators)
        mats = []
        for g in range(len(act.generators)):
            perm = act.perms[g][self.top]
            cols = []
            for bvec in self.basis:
                image = [Fraction(0)] * len(bvec)
                for s, v in enumerate(bvec):
                    if v:
                        image[perm[s]] = v
                cols.append(self._coords(image))
            mats.append(ExactMatrix.from_columns(cols, rows=self.dim))
        return LinearAction(self.dim, tuple(mats))


def steinberg_module(n, q, budget=DEFAULT_SIMPLEX_BUDGET) -> SteinbergModule:
    return SteinbergModule(n, q, budget=budget)


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def apartment_class(module: SteinbergModule, frame_lines):
    """Fundamental cycle of the apartment spanned by n independent lines.

    frame_lines: n vectors over F_q (or line keys).  Returns the exact
    coefficient vector over the top-degree flags; guaranteed to lie in the
    kernel of the top boundary.  Reordering the frame by an odd
    permutation negates the class.
    """
    n, q = module.n, module.q
    field = ff.finite_field(q)
    gens = []
    for line in frame_lines:
        if isinstance(line, tuple) and line and isinstance(line[0], tuple):
            key = ff.rref(field, [list(line[0])] if len(line) == 1 else list(line))
        else:
            key = ff.rref(field, [list(line)])
        if len(key) != 1:
            raise ValueError("frame entries must be lines")
        gens.append(list(key[0]))
    if len(gens) != n:
        raise ValueError(f"frame needs exactly {n} lines")
    if ff.matrix_rank(field, gens) != n:
        raise ValueError("frame lines are not independent")
    X = module.building
    #

    # Vertex index for the span of each nonempty proper index subset.
    subset_vertex = {}
    for size in range(1, n):
        for idxs in combinations(range(n), size):
            key = ff.rref(field, [gens[i] for i in idxs])
            vi = X.label_index.get(key)
            if vi is None:
                raise ValueError("apartment vertex missing from building")
            subset_vertex[idxs] = vi
    coeffs = [0] * module.chain.dims[module.top]
    for perm in permutations(range(n)):
        flag = []
        acc = []
        for k in range(n - 1):
            acc.append(perm[k])
            flag.append(subset_vertex[tuple(sorted(acc))])
        simplex = tuple(flag)
        si = X.index[module.top].get(simplex)
        if si is None:
            raise ValueError("apartment flag missing from building")
        coeffs[si] += _perm_sign(perm)
    boundary = module.chain.boundaries[module.top]
    if any(boundary.mul_vector(coeffs)):
        raise AssertionError("apartment class has nonzero boundary")
    return tuple(coeffs)


def apartment_span_rank(module: SteinbergModule) -> int:
    """Rank of the span of all apartment classes (one per unordered frame).

    Frames are enumerated as unordered sets of lines (sorted key order
    fixes the representative ordering) and each contributes one class.
    """
    field = ff.finite_field(module.q)
    lines = ff.all_subspaces(field, module.n, 1)
    vectors = []
    for combo in combinations(lines, module.n):
        gens = [list(k[0]) for k in combo]
        if ff.matrix_rank(field, gens) != module.n:
            continue
        vectors.append(apartment_class(module, gens))
    if not vectors:
        return 0
    return rank(ExactMatrix.from_rows(vectors, cols=module.chain.dims[module.top]))


def coinvariants_dim(action: LinearAction, twist: CharacterTwist | None = None) -> int:
    """Dimension of the (possibly sign-twisted) coinvariant quotient.

    Quotient of the module by the span of eps(g) g m - m over generators g
    and module elements m; generators suffice because the relation span is
    closed under multiplying words.
    """
    if twist is not None and len(twist.signs) != len(action.matrices):
        raise ValueError("twist length does not match generator count")
    dim = action.dim
    if dim == 0:
        return 0
    cols = []
    ident = ExactMatrix.identity(dim)
    for gi, mat in enumerate(action.matrices):
        if (mat.rows, mat.cols) != (dim, dim):
            raise ValueError("action matrix shape mismatch")
        eps = twist.signs[gi] if twist is not None else 1
        diff = mat.scale(eps) + ident.scale(-1)
        dense = diff.to_dense()
        for j in range(dim):
            col = tuple(dense[i][j] for i in range(dim))
            if any(col):
                cols.append(col)
    if not cols:
        return dim
    return dim - rank(ExactMatrix.from_rows(cols, cols=dim))


class DualizingType(Enum):
    STEINBERG = "Steinberg"
    STEINBERG_TWISTED = "SteinbergTwisted"


def dualizing_module_type(n: int, order) -> DualizingType:
    """Dichotomy verdict for the duality module of GL_n over the order.

    Twisted exactly when n is even and the order has a unit of norm -1;
    imaginary quadratic orders never do, so they always land on the plain
    Steinberg side.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if has_norm_minus_one_unit(order) and n % 2 == 0:
        return DualizingType.STEINBERG_TWISTED
    return DualizingType.STEINBERG


def orientation_character_det(n: int) -> int:
    """Sign of diag(-1,1,...,1) acting on gl_n modulo antisymmetric matrices.

    The quotient has basis the cosets of the matrix units E_ij with
    i <= j; conjugation by the reflection fixes or negates each coset.  The
    determinant is computed from the exact induced matrix and equals
    (-1)^(n-1): exactly the cosets E_1j with j >= 2 are negated.
    """
    if n < 1:
        raise ValueError("n must be positive")
    basis = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {b: k for k, b in enumerate(basis)}
    dim = len(basis)
    sgn = [-1] + [1] * (n - 1)
    cols = []
    for (i, j) in basis:
        # Conjugate the representative E_ij by diag(-1,1,...,1) and project
        # back to coset coordinates: M -> coords c_kk = M_kk, c_kl = M_kl + M_lk.
        mat = [[0] * n for _ in range(n)]
        mat[i][j] = 1
        conj = [[sgn[r] * sgn[c] * mat[r][c] for c in range(n)] for r in range(n)]
        col = [0] * dim
        for r in range(n):
            for c in range(r, n):
                v = conj[r][c] if r == c else conj[r][c] + conj[c][r]
                if v:
                    col[pos[(r, c)]] += v
        cols.append(col)
    t = ExactMatrix.from_columns(cols, rows=dim)
    det = determinant(t)
    if det not in (1, -1):
        raise AssertionError("orientation determinant must be a sign")
    return 1 if det == 1 else -1


# Standard generator sets for the finite general and special linear groups.


def _primitive_element(field):
    q = field.q
    for a in range(2, q):
        x = a
        order = 1
        while x != 1:
            x = field.mul(x, a)
            order += 1
        if order == q - 1:
            return a
    raise AssertionError("no primitive element found")


def gl_generators(n: int, q: int):
    """Generators of GL_n(F_q): a transvection, an n-cycle, a diagonal.

    For q = 2 the diagonal is omitted (trivial); for non-prime q the
    transvection appears for both basis scalars of the field.
    """
    field = ff.finite_field(q)
    gens = []
    e12 = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    e12[0][1] = 1
    gens.append(tuple(tuple(r) for r in e12))
    if field.degree > 1:
        alt = [list(r) for r in e12]
        alt[0][1] = _primitive_element(field)
        gens.append(tuple(tuple(r) for r in alt))
    cyc = [[0] * n for _ in range(n)]
    for i in range(n):
        cyc[(i + 1) % n][i] = 1
    gens.append(tuple(tuple(r) for r in cyc))
    if q > 2:
        a = _primitive_element(field)
        dia = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        dia[0][0] = a
        gens.append(tuple(tuple(r) for r in dia))
    return gens


def sl_generators(n: int, q: int):
    """Elementary transvections E_ij(c) generating SL_n(F_q)."""
    field = ff.finite_field(q)
    scalars = [1]
    if field.degree > 1:
        scalars.append(_primitive_element(field))
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for c in scalars:
                    m = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
                    m[i][j] = c
                    gens.append(tuple(tuple(r) for r in m))
    return gens


def trivial_generators(n: int):
    return [tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))]
