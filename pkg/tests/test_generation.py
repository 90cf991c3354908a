import random

import pytest

from matgen.domains import ZZ, PrimeField, field_of_order
from matgen.generation import (
    ClosureDeficient,
    ConjugatePair,
    common_eigenline,
    closure_generates,
    det_commutator_generates,
    generates_single,
    lattice_generates_MnZ,
    mat_tuple,
    shape_of,
    tuple_criterion_generates,
    flatten_det,
)
from matgen.linalg import (
    ALL_LINES,
    Mat,
    commutator,
    det,
    identity,
    madd,
    mat,
    smul,
    unit_mat,
)

F2 = PrimeField(2)
F3 = PrimeField(3)

E11 = unit_mat(F2, 2, 0, 0)
E12 = unit_mat(F2, 2, 0, 1)
E21 = unit_mat(F2, 2, 1, 0)
SWAP = mat(F2, [[0, 1], [1, 0]])
ONES = mat(F2, [[1, 1], [1, 1]])
FIB = mat(F2, [[0, 1], [1, 1]])


def rand_mat(field, n, rng):
    elems = list(field.elements())
    return Mat(field, n, tuple(tuple(rng.choice(elems) for _ in range(n))
                               for _ in range(n)))


# --- closure ----------------------------------------------------------------

def test_closure_standard_pair_n3():
    from matgen.construct import standard_xy

    X, Y = standard_xy(3, F2)
    rep = closure_generates([(X,), (Y,)], shape_of(3))
    assert rep.verdict and rep.closure_dim == 9


def test_closure_identity_alone_fails():
    rep = closure_generates([(identity(F3, 2),)], shape_of(2))
    assert not rep.verdict and rep.closure_dim == 1
    assert isinstance(rep.failed_condition, ClosureDeficient)


def test_closure_e12_e21():
    rep = closure_generates([(E12,), (E21,)], shape_of(2),
                            include_identity=False)
    assert rep.verdict and rep.closure_dim == 4


def test_closure_empty_set():
    rep = closure_generates([], shape_of(2), include_identity=False, field=F2)
    assert not rep.verdict and rep.closure_dim == 0


def test_identity_irrelevance():
    # adjoining 1 never changes the verdict when every block size is >= 2
    rng = random.Random(11)
    for q, copies in ((2, 1), (2, 2), (3, 1)):
        field = PrimeField(q)
        shape = shape_of(2, copies)
        for _ in range(40):
            S = [tuple(rand_mat(field, 2, rng) for _ in range(copies))
                 for _ in range(2)]
            with_id = closure_generates(S, shape, include_identity=True)
            without = closure_generates(S, shape, include_identity=False)
            assert with_id.verdict == without.verdict


# --- the tuple criterion ----------------------------------------------------

def test_th1_table_row_pair():
    # two generators of M_2(F_2)^2 whose cross-sections are the first two
    # entries of the embedded 16-pair table, reduced mod 2
    g1 = mat_tuple([E11, E11])
    g2 = mat_tuple([SWAP, ONES])
    rep = tuple_criterion_generates([g1, g2])
    assert rep.verdict and rep.closure_dim == 8


def test_th1_identical_cross_sections():
    g1 = mat_tuple([E11, E11])
    g2 = mat_tuple([SWAP, SWAP])
    rep = tuple_criterion_generates([g1, g2])
    assert not rep.verdict
    assert isinstance(rep.failed_condition, ConjugatePair)
    assert rep.failed_condition.i == 0 and rep.failed_condition.j == 1
    assert rep.failed_condition.witness.rows == identity(F2, 2).rows


def test_th1_failing_cross_section_carries_eigenline():
    # both columns share the eigenvector (1,0): condition 1 fails
    g1 = mat_tuple([E11, E11])
    g2 = mat_tuple([E12, madd(E11, E12)])
    rep = tuple_criterion_generates([g1, g2])
    assert not rep.verdict
    assert rep.failed_condition is not None
    assert rep.eigen_witness is not None


def test_th1_single_copy_reduces_to_closure():
    rng = random.Random(12)
    for _ in range(30):
        mats = [rand_mat(F3, 2, rng) for _ in range(2)]
        rep = tuple_criterion_generates([mat_tuple([a]) for a in mats])
        direct = generates_single(mats)
        assert rep.verdict == direct.verdict


# --- common eigenlines -------------------------------------------------------

def test_common_eigenline_examples():
    assert common_eigenline([E12, E21]) is None
    line = common_eigenline([unit_mat(F3, 2, 0, 0), unit_mat(F3, 2, 0, 1)])
    assert line is not None and line is not ALL_LINES
    assert common_eigenline([FIB, E11]) is None
    assert common_eigenline([]) is ALL_LINES
    assert common_eigenline([identity(F2, 2), smul(1, identity(F2, 2))]) is ALL_LINES


@pytest.mark.parametrize("q", [2, 3, 4])
def test_oracle_agreement_closure_eigenline_detcomm(q):
    field = field_of_order(q)
    rng = random.Random(q * 7)
    for _ in range(150):
        a, b = rand_mat(field, 2, rng), rand_mat(field, 2, rng)
        by_closure = generates_single([a, b]).verdict
        by_line = common_eigenline([a, b]) is None
        by_det = det_commutator_generates(a, b)
        assert by_closure == by_line == by_det


# --- the 4x4 determinant ----------------------------------------------------

def test_flatten_det_point_values():
    assert flatten_det(unit_mat(ZZ, 2, 0, 1), unit_mat(ZZ, 2, 1, 0)) == -1


def test_flatten_det_first_specialization():
    # A = [[a11, 0], [1, 0]], B = [[0, 1], [b21, 0]] gives b21*a11^2 - 1
    for a11 in range(-3, 4):
        for b21 in range(-3, 4):
            A = mat(ZZ, [[a11, 0], [1, 0]])
            B = mat(ZZ, [[0, 1], [b21, 0]])
            assert flatten_det(A, B) == -1 + b21 * a11 * a11


def test_flatten_det_second_specialization():
    # A = [[0, a12], [1, 0]], B = [[0, 1], [b21, 0]] gives -(a12*b21 - 1)^2
    for a12 in range(-3, 4):
        for b21 in range(-3, 4):
            A = mat(ZZ, [[0, a12], [1, 0]])
            B = mat(ZZ, [[0, 1], [b21, 0]])
            assert flatten_det(A, B) == -((a12 * b21 - 1) ** 2)


def test_flatten_det_equals_commutator_det_random_integers():
    rng = random.Random(13)
    for _ in range(1000):
        A = mat(ZZ, [[rng.randrange(-5, 6) for _ in range(2)] for _ in range(2)])
        B = mat(ZZ, [[rng.randrange(-5, 6) for _ in range(2)] for _ in range(2)])
        assert flatten_det(A, B) == det(commutator(A, B))


def test_commutator_det_shift_invariance():
    rng = random.Random(14)
    for _ in range(100):
        A = mat(ZZ, [[rng.randrange(-4, 5) for _ in range(2)] for _ in range(2)])
        B = mat(ZZ, [[rng.randrange(-4, 5) for _ in range(2)] for _ in range(2)])
        s, t = rng.randrange(-3, 4), rng.randrange(-3, 4)
        shifted_a = madd(A, smul(-s, identity(ZZ, 2)))
        shifted_b = madd(B, smul(-t, identity(ZZ, 2)))
        assert det(commutator(A, B)) == det(commutator(shifted_a, shifted_b))


def test_det_commutator_examples():
    E11z, SWAPz = unit_mat(ZZ, 2, 0, 0), mat(ZZ, [[0, 1], [1, 0]])
    assert det(commutator(E11z, SWAPz)) == 1
    assert det_commutator_generates(E11z, SWAPz)
    assert not det_commutator_generates(E11z, E11z)
    ONESz = mat(ZZ, [[1, 1], [1, 1]])
    assert det(commutator(E11z, ONESz)) == 1
    assert det_commutator_generates(E11z, ONESz)


# --- integer lattice closure -------------------------------------------------

def test_lattice_standard_pair():
    from matgen.construct import standard_xy

    X, Y = standard_xy(2, ZZ)
    ok, lat = lattice_generates_MnZ([X, Y], 2)
    assert ok and lat.is_full


def test_lattice_doubled_units_fail_with_index_8():
    twos = [smul(2, unit_mat(ZZ, 2, i, j)) for i in range(2) for j in range(2)]
    ok, lat = lattice_generates_MnZ(twos, 2)
    assert not ok
    assert lat.index_in_full() == 8  # identity adjoined halves the index 16


def test_lattice_agrees_with_det_commutator():
    E11z, SWAPz = unit_mat(ZZ, 2, 0, 0), mat(ZZ, [[0, 1], [1, 0]])
    ok, _ = lattice_generates_MnZ([E11z, SWAPz], 2)
    assert ok and det_commutator_generates(E11z, SWAPz)


def test_lattice_true_implies_modp_closure():
    rng = random.Random(15)
    hits = 0
    for _ in range(150):
        mats = [mat(ZZ, [[rng.randrange(-2, 3) for _ in range(2)]
                         for _ in range(2)]) for _ in range(2)]
        ok, _ = lattice_generates_MnZ(mats, 2)
        if not ok:
            continue
        hits += 1
        for p in (2, 3, 5):
            f = PrimeField(p)
            reduced = [mat(f, [[x for x in row] for row in a.rows]) for a in mats]
            assert generates_single(reduced).verdict
    # the standard pair is in scope even if the random sample is thin
    from matgen.construct import standard_xy

    X, Y = standard_xy(2, ZZ)
    assert lattice_generates_MnZ([X, Y], 2)[0]
    assert hits >= 3  # the sample must actually exercise the implication
