"""Semisimplicial sets, chain complexes, and Tits buildings.

A semisimplicial set is stored by dimension: vertices carry arbitrary
hashable labels, and a k-simplex is a (k+1)-tuple of vertex label indices.
Face maps drop one position.  Both the semisimplicial identities
d_i d_j = d_{j-1} d_i (i < j) and closure under faces are checked
exhaustively on every built instance.

The building of GL_n(F_q) has one vertex per proper nonzero subspace of
F_q^n and one k-simplex per flag V_0 < ... < V_k of such subspaces,
ordered by increasing dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import fields as ff
from .errors import DEFAULT_SIMPLEX_BUDGET, BudgetExceededError
from .linalg import ExactMatrix, matrix_to_json, rank


class SemisimplicialSet:
    """Simplices by dimension over an indexed vertex label set.

    cells[k] lists the k-simplices as (k+1)-tuples of indices into labels;
    faces[k][s][i] is the index (in cells[k-1]) of the i-th face of simplex
    s, the tuple with position i dropped.
    """

    def __init__(self, labels, cells, budget=DEFAULT_SIMPLEX_BUDGET):
        self.labels = tuple(labels)
        self.label_index = {lbl: i for i, lbl in enumerate(self.labels)}
        if len(self.label_index) != len(self.labels):
            raise ValueError("duplicate vertex labels")
        total = sum(len(c) for c in cells)
        if budget is not None and total > budget:
            raise BudgetExceededError(f"{total} simplices exceed budget {budget}")
        self.cells = [list(c) for c in cells]
        while self.cells and not self.cells[-1]:
            self.cells.pop()
        self.index = [{s: i for i, s in enumerate(c)} for c in self.cells]
        for k, c in enumerate(self.cells):
            if len(self.index[k]) != len(c):
                raise ValueError(f"duplicate {k}-simplex")
            for s in c:
                if len(s) != k + 1:
                    raise ValueError(f"{k}-simplex of arity {len(s)}")
        self.faces = [None]
        for k in range(1, len(self.cells)):
            level = []
            for s in self.cells[k]:
                row = []
                for i in range(k + 1):
                    f = s[:i] + s[i + 1 :]
                    fi = self.index[k - 1].get(f)
                    if fi is None:
                        raise ValueError(f"face {f} of {s} missing (closure violated)")
                    row.append(fi)
                level.append(tuple(row))
            self.faces.append(level)
        self._check_identities()

    def _check_identities(self):
        # d_i d_j = d_{j-1} d_i for i < j, checked on every simplex.
        for k in range(2, len(self.cells)):
            lower = self.faces[k - 1]
            for row in self.faces[k]:
                for j in range(1, k + 1):
                    dj = lower[row[j]]
                    for i in range(j):
                        if dj[i] != lower[row[i]][j - 1]:
                            raise ValueError("semisimplicial identity violated")

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, k) -> int:
        if 0 <= k < len(self.cells):
            return len(self.cells[k])
        return 0

    def total_cells(self) -> int:
        return sum(len(c) for c in self.cells)


@dataclass(frozen=True)
class ChainComplex:
    """Chain groups and integer boundary matrices of a semisimplicial set.

    boundaries[k] maps degree-k chains to degree k-1 for 1 <= k <= top.
    When reduced, boundaries[0] is the 1 x n_0 augmentation and the report
    of homology in degree 0 is reduced homology.
    """

    dims: tuple
    boundaries: tuple
    reduced: bool

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def boundary(self, k) -> ExactMatrix:
        return self.boundaries[k]

    def validate(self):
        for k in range(1, len(self.boundaries)):
            prod = self.boundaries[k - 1] @ self.boundaries[k]
            if not prod.is_zero():
                raise ValueError(f"boundary composite nonzero in degree {k}")
        return True


def chain_complex(X: SemisimplicialSet, reduced: bool = True) -> ChainComplex:
    """Boundary matrices of X with alternating-sign face sums."""
    dims = tuple(len(c) for c in X.cells)
    mats = []
    if reduced:
        mats.append(
            ExactMatrix.from_entries(1, dims[0], [(0, j, 1) for j in range(dims[0])])
        )
    else:
        mats.append(ExactMatrix.zero(0, dims[0]))
    for k in range(1, len(X.cells)):
        items = {}
        for col, row in enumerate(X.faces[k]):
            for i, f in enumerate(row):
                key = (f, col)
                items[key] = items.get(key, 0) + (1 if i % 2 == 0 else -1)
        mats.append(
            ExactMatrix.from_entries(
                dims[k - 1], dims[k], [(i, j, v) for (i, j), v in items.items() if v]
            )
        )
    cc = ChainComplex(dims, tuple(mats), reduced)
    cc.validate()
    return cc


def reduced_homology_ranks(X: SemisimplicialSet) -> dict:
    """Reduced rational Betti numbers by degree, computed exactly."""
    cc = chain_complex(X, reduced=True)
    ranks = {}
    bnd_rank = [rank(m) for m in cc.boundaries]
    for k in range(len(cc.dims)):
        out_rank = bnd_rank[k]
        in_rank = bnd_rank[k + 1] if k + 1 < len(cc.boundaries) else 0
        ranks[k] = cc.dims[k] - out_rank - in_rank
    return ranks


def tits_building(n: int, q: int, budget=DEFAULT_SIMPLEX_BUDGET) -> SemisimplicialSet:
    """Flag complex of proper nonzero subspaces of F_q^n.

    Vertices are RREF subspace keys grouped by dimension 1..n-1 in
    enumeration order; k-simplices are flags of k+1 nested subspaces listed
    by increasing dimension.  For n=2 the building is the discrete set of
    the q+1 lines.
    """
    if n < 2:
        raise ValueError("building needs n >= 2")
    field = ff.finite_field(q)
    labels = []
    for d in range(1, n):
        labels.extend(ff.all_subspaces(field, n, d))
    nv = len(labels)
    if nv > budget:
        raise BudgetExceededError(f"{nv} vertices exceed budget {budget}")
    # Successor lists: all strictly larger subspaces containing V_i.
    succ = [[] for _ in range(nv)]
    for i, ki in enumerate(labels):
        for j, kj in enumerate(labels):
            if len(kj) > len(ki):
                stacked = ff.rref(field, list(kj) + list(ki))
                if len(stacked) == len(kj):
                    succ[i].append(j)
    cells = [[(i,) for i in range(nv)]]
    total = nv
    while True:
        prev = cells[-1]
        nxt = []
        for s in prev:
            for j in succ[s[-1]]:
                nxt.append(s + (j,))
                total += 1
                if total > budget:
                    raise BudgetExceededError(
                        f"flag enumeration exceeds budget {budget}"
                    )
        if not nxt:
            break
        cells.append(nxt)
    return SemisimplicialSet(labels, cells, budget=budget)


@dataclass(frozen=True)
class ComplexAction:
    """Simplicial action of a list of invertible matrices on a complex.

    perms[g][k][s] is the image index of k-simplex s under generator g.
    Verified to be a bijection commuting with every face map.
    """

    complex: SemisimplicialSet
    generators: tuple
    perms: tuple

    def permutation_matrix(self, gen: int, k: int) -> ExactMatrix:
        p = self.perms[gen][k]
        return ExactMatrix.from_entries(len(p), len(p), [(p[s], s, 1) for s in range(len(p))])


def group_action(X: SemisimplicialSet, q: int, generators) -> ComplexAction:
    """Action of invertible matrices over F_q on a subspace-labelled complex.

    Each generator must be invertible; vertex labels must be RREF subspace
    keys (as produced by tits_building or the finite-field line complexes).
    Raises ValueError if a generator is singular or fails to permute the
    simplices.
    """
    field = ff.finite_field(q)
    gens = tuple(tuple(tuple(int(x) % q for x in row) for row in g) for g in generators)
    perms = []
    for g in gens:
        if not ff.is_invertible(field, g):
            raise ValueError("generator is not invertible")
        vmap = []
        for lbl in X.labels:
            img = ff.subspace_image(field, lbl, g)
            tgt = X.label_index.get(img)
            if tgt is None:
                raise ValueError("generator image leaves the complex")
            vmap.append(tgt)
        if len(set(vmap)) != len(vmap):
            raise ValueError("generator does not permute vertices")
        levels = []
        for k, cell in enumerate(X.cells):
            level = []
            for s in cell:
                img = tuple(vmap[i] for i in s)
                tgt = X.index[k].get(img)
                if tgt is None:
                    raise ValueError("generator does not permute simplices")
                level.append(tgt)
            if len(set(level)) != len(level):
                raise ValueError("generator not bijective on simplices")
            levels.append(tuple(level))
        perms.append(tuple(levels))
    action = ComplexAction(X, gens, tuple(perms))
    # Face-commutation check: perm(d_i s) == d_i(perm s).
    for levels in action.perms:
        for k in range(1, len(X.cells)):
            for s, row in enumerate(X.faces[k]):
                timg = levels[k][s]
                for i, f in enumerate(row):
                    if levels[k - 1][f] != X.faces[k][timg][i]:
                        raise ValueError("action does not commute with faces")
    return action


def complex_to_json(cc: ChainComplex) -> str:
    """Exchange format: {dims: [...], boundaries: [matrix payloads]}.

    Simplex indices follow construction order (vertices grouped by
    subspace dimension, flags in extension order), matching the column
    order of each boundary matrix.
    """
    return json.dumps(
        {
            "dims": list(cc.dims),
            "reduced": cc.reduced,
            "boundaries": [json.loads(matrix_to_json(b)) for b in cc.boundaries],
        }
    )


def euler_characteristic(X: SemisimplicialSet, reduced=True) -> int:
    total = -1 if reduced else 0
    for k, c in enumerate(X.cells):
        total += len(c) if k % 2 == 0 else -len(c)
    return total


def chain_from_coefficients(X: SemisimplicialSet, k: int, coeffs):
    """Dense coefficient vector (tuple of Fractions) on cells[k]."""
    coeffs = list(coeffs)
    if len(coeffs) != X.n_cells(k):
        raise ValueError("coefficient length mismatch")
    return tuple(Fraction(c) for c in coeffs)
