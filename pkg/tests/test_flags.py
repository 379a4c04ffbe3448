"""Integer flags, line complexes, and truncated basis complexes."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from steinberg.errors import BudgetExceededError
from steinberg.flags import (
    b_complex_truncated,
    case1_retraction,
    completion_witness,
    connectivity_probe,
    integer_flag,
    lines_complex_fq,
    probe_report,
    projective_splitting,
)
from steinberg.linalg.lattices import in_row_lattice, snf_transform


def test_flag_validation():
    with pytest.raises(ValueError):
        integer_flag(2, [[(1, 0)], [(1, 0)]])  # not strictly increasing
    with pytest.raises(ValueError):
        integer_flag(2, [[(2, 0)]])  # not saturated
    with pytest.raises(ValueError):
        integer_flag(2, [[(1, 0), (0, 1)]])  # full rank is not proper
    with pytest.raises(ValueError):
        integer_flag(3, [[(0, 0, 1)], [(1, 0, 0)]])  # steps not nested


def test_splitting_of_a_two_step_flag():
    flag = integer_flag(3, [[(1, 2, 3)], [(1, 2, 3), (0, 1, 1)]])
    parts = projective_splitting(flag)
    assert len(parts) == 3
    assert [len(p) for p in parts] == [1, 1, 1]
    assert parts[0] == ((1, 2, 3),)


def test_splitting_of_empty_flag():
    parts = projective_splitting(integer_flag(3, []))
    assert len(parts) == 1
    st_ = snf_transform([list(r) for r in parts[0]])
    assert st_.rank == 3 and all(f == 1 for f in st_.factors)


def unimodular_matrices(n, seed_ints):
    # build unimodular matrices as products of shears applied to a permuted
    # identity; determinant stays +-1 by construction
    def build(seed):
        rng = random.Random(seed)
        m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        rng.shuffle(m)
        for _ in range(6):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            c = rng.randint(-3, 3)
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        return m

    return st.builds(build, seed_ints)


@given(
    unimodular_matrices(4, st.integers(0, 10**6)),
    st.sets(st.integers(1, 3), min_size=1, max_size=3),
)
@settings(max_examples=60, deadline=None)
def test_splitting_random_flags(mat, sizes):
    # prefixes of a unimodular matrix give saturated nested steps
    steps = [[tuple(r) for r in mat[:k]] for k in sorted(sizes)]
    flag = integer_flag(4, steps)
    parts = projective_splitting(flag)
    ranks = [len(p) for p in parts]
    boundaries = sorted(sizes) + [4]
    assert ranks == [boundaries[0]] + [
        b - a for a, b in zip(boundaries, boundaries[1:])
    ]
    # each prefix of summands spans the matching step exactly
    prefix = []
    for part, step in zip(parts, steps):
        prefix.extend(list(p) for p in part)
        assert all(in_row_lattice(prefix, list(r)) for r in step)


@pytest.mark.parametrize(
    "n,q,counts",
    [(1, 5, [1]), (2, 2, [3, 6]), (2, 3, [4, 12]), (3, 2, [7, 42, 168])],
)
def test_lines_complex_counts(n, q, counts):
    X = lines_complex_fq(n, q)
    assert [X.n_cells(k) for k in range(X.dimension + 1)] == counts


def test_lines_complex_budget():
    with pytest.raises(BudgetExceededError):
        lines_complex_fq(3, 3, budget=100)


def test_completion_witness_decisions():
    # not a vertex: completion of (2, 0) forces 2x = +-1 mod 5
    assert completion_witness([(2, 0)], 2, 5) is None
    # genuine vertex with the last coordinate 1
    wit = completion_witness([(3, 1)], 2, 5)
    assert wit is not None
    # non-primitive rows can never extend
    assert completion_witness([(2, 0)], 2, 2) is None
    # two 1-vertices: rejected in unique mode, fine relaxed
    pair = [(1, 1, 1), (0, 1, 1)]
    assert completion_witness(pair, 3, 2, unique=True) is None
    assert completion_witness(pair, 3, 2, unique=False) is not None
    # full-size input needs exactly one 1 in unique mode
    assert completion_witness([(1, 0), (0, 1)], 2, 3) is not None
    assert completion_witness([(0, 1), (1, 0)], 2, 3) is not None
    assert completion_witness([(1, 2), (0, 3)], 2, 3) is None
    # a bad last coordinate disqualifies immediately
    assert completion_witness([(1, 2)], 2, 5) is None


def certify_unique(vectors, n, m):
    wit = completion_witness(vectors, n, m, unique=True)
    if wit is None:
        return False
    full = [list(v) for v in vectors] + [list(w) for w in wit]
    st_ = snf_transform(full)
    assert st_.rank == n and all(f == 1 for f in st_.factors)
    lasts = [r[-1] % m for r in full]
    assert sum(1 for c in lasts if c == 1) == 1
    assert all(c in (0, 1) for c in lasts)
    return True


@given(
    st.integers(2, 3),
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(-6, 6), min_size=2, max_size=3),
)
@settings(max_examples=120, deadline=None)
def test_witness_certificates_verify(n, m, vec):
    vec = vec[:n]
    if len(vec) < n:
        return
    certify_unique([tuple(vec)], n, m)


@pytest.mark.parametrize(
    "n,m,height,counts",
    [(2, 2, 1, [8, 24]), (2, 2, 2, [16, 72]), (2, 2, 3, [32, 152]), (2, 3, 1, [5, 12])],
)
def test_b_complex_cell_counts(n, m, height, counts):
    bx = b_complex_truncated(n, m, height)
    X = bx.complex
    assert [X.n_cells(k) for k in range(X.dimension + 1)] == counts
    assert bx.witness_failures == 0
    assert bx.verify_witnesses() is True


def test_b_complex_input_validation():
    with pytest.raises(ValueError):
        b_complex_truncated(0, 2, 1)
    with pytest.raises(ValueError):
        b_complex_truncated(2, 1, 1)
    with pytest.raises(ValueError):
        b_complex_truncated(2, 2, 0)


def test_b_complex_vertices_height_one():
    # every nonzero {-1,0,1} vector is primitive with last coordinate 0 or 1
    # mod 2, and each one extends, so all eight survive as vertices
    bx = b_complex_truncated(2, 2, 1)
    expected = {
        (x, y)
        for x in (-1, 0, 1)
        for y in (-1, 0, 1)
        if (x, y) != (0, 0)
    }
    assert set(bx.complex.labels) == expected


def test_connectivity_probe_and_report():
    bx = b_complex_truncated(2, 2, 2)
    probe = connectivity_probe(bx.complex, 0)
    assert probe == {0: 0}
    report = probe_report(2, 2, 3)
    assert report["minimal_connected_H"] == 1
    assert report["ranks"] == [0]
    assert report["witnesses_failed"] == 0


def test_case1_retraction_on_small_link():
    bx = b_complex_truncated(2, 2, 3)
    ret = case1_retraction(bx, (0, 1))
    assert ret.degenerate_images == 0
    assert len(ret.mapping) == 14
    moved = [v for v, img in ret.mapping.items() if img != v]
    assert all(v[-1] % 2 == 1 for v in moved)
    assert all(img[-1] % 2 == 0 for img in ret.mapping.values())
    # idempotent: applying the defining rule to an image changes nothing
    for img in ret.mapping.values():
        if img in ret.mapping:
            assert ret.mapping[img] == img
    assert ret.out_of_height == ((-1, -4), (1, -4))


def test_case1_retraction_rejects_bad_center():
    bx = b_complex_truncated(2, 2, 2)
    with pytest.raises(ValueError):
        case1_retraction(bx, (9, 9))
    with pytest.raises(ValueError):
        case1_retraction(bx, (1, 0))  # stored vertex but last coordinate 0


def test_case1_retraction_rank_three():
    bx = b_complex_truncated(3, 2, 1)
    ret = case1_retraction(bx, (0, 0, 1))
    assert ret.simplices_checked > 0
    assert ret.degenerate_images == 0
    assert all(v[-1] % 2 == 0 for v in ret.mapping.values())
