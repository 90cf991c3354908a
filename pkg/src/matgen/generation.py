"""Generation tests for direct sums of matrix algebras.

Span closure over fields, the tuple criterion (cross-sections generate and
are pairwise non-conjugate), the common-eigenline test for n = 2, the
det-commutator criterion, and the integer lattice-closure test for M_n(Z).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import conjugacy
from .domains import DomainError, quadratic_extension
from .linalg import (
    ALL_LINES,
    Mat,
    commutator,
    det,
    identity,
    is_scalar_mat,
    lattice_from_rows,
    line_is_invariant,
    mmul,
    quadratic_eigvecs,
    unvectorize,
    vectorize,
)


@dataclass(frozen=True)
class DirectSumShape:
    """Direct sum of m_i copies of M_{n_i}, one (n_i, m_i) pair per block."""

    blocks: tuple

    def __post_init__(self):
        for n_i, m_i in self.blocks:
            if n_i < 2:
                raise DomainError("block sizes must be >= 2")
            if m_i < 1:
                raise DomainError("block multiplicities must be >= 1")

    @property
    def copy_sizes(self) -> tuple:
        return tuple(n_i for n_i, m_i in self.blocks for _ in range(m_i))

    @property
    def total_dim(self) -> int:
        return sum(m_i * n_i * n_i for n_i, m_i in self.blocks)


def shape_of(n: int, copies: int = 1) -> DirectSumShape:
    return DirectSumShape(((n, copies),))


@dataclass(frozen=True)
class MatTuple:
    """Ordered m-tuple of n x n matrices over one domain."""

    domain: object
    n: int
    m: int
    mats: tuple

    def __post_init__(self):
        if len(self.mats) != self.m or self.m < 1:
            raise DomainError("tuple length mismatch")
        for a in self.mats:
            if a.n != self.n or a.domain != self.domain:
                raise DomainError("tuple entries must share size and domain")


def mat_tuple(mats: Sequence[Mat]) -> MatTuple:
    mats = tuple(mats)
    return MatTuple(mats[0].domain, mats[0].n, len(mats), mats)


@dataclass(frozen=True)
class ClosureDeficient:
    pass


@dataclass(frozen=True)
class CrossSectionFails:
    index: int


@dataclass(frozen=True)
class ConjugatePair:
    i: int
    j: int
    witness: Mat


@dataclass(frozen=True)
class GenReport:
    verdict: bool
    closure_dim: int
    ambient_dim: int
    failed_condition: object = None
    eigen_witness: object = None


class _Span:
    """Incremental echelonized span of vectors over a field."""

    def __init__(self, field, width: int):
        self.field = field
        self.width = width
        self.rows = {}  # pivot index -> normalized row (list)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def insert(self, vec) -> bool:
        """Reduce vec against the span; add it if independent."""
        f = self.field
        v = list(vec)
        rows = self.rows
        for piv in range(self.width):
            x = v[piv]
            if f.is_zero(x):
                continue
            row = rows.get(piv)
            if row is None:
                inv = f.inv(x)
                norm = [f.mul(inv, y) for y in v]
                for other_piv, other in rows.items():
                    c = other[piv]
                    if not f.is_zero(c):
                        rows[other_piv] = [f.sub(a, f.mul(c, b))
                                           for a, b in zip(other, norm)]
                rows[piv] = norm
                return True
            v = [f.sub(a, f.mul(x, b)) for a, b in zip(v, row)]
        return False


def _element_vector(elem) -> tuple:
    out = []
    for a in elem:
        out.extend(vectorize(a))
    return tuple(out)


def _element_mul(x, y) -> tuple:
    return tuple(mmul(a, b) for a, b in zip(x, y))


def _validate_elements(S, shape: DirectSumShape, field):
    sizes = shape.copy_sizes
    for elem in S:
        if len(elem) != len(sizes):
            raise DomainError("element does not match the shape")
        for a, n_i in zip(elem, sizes):
            if a.n != n_i:
                raise DomainError("component size does not match the shape")
            if a.domain != field:
                raise DomainError("mixed domains in one generating set")


def closure_generates(S, shape: DirectSumShape, include_identity: bool = True,
                      field=None) -> GenReport:
    """Span closure of S inside the direct-sum algebra described by shape.

    S is a sequence of elements, each a sequence of Mat matching the shape's
    copies.  The span of all products of elements of S (plus the identity if
    requested) is grown until it stabilizes; the verdict compares its
    dimension with the ambient dimension.
    """
    S = [tuple(elem) for elem in S]
    if field is None:
        if not S:
            raise DomainError("empty S needs an explicit field")
        field = S[0][0].domain
    if not field.is_field:
        raise DomainError("closure_generates requires a field domain")
    _validate_elements(S, shape, field)
    ambient = shape.total_dim
    span = _Span(field, ambient)
    frontier = []
    if include_identity:
        ident = tuple(identity(field, n_i) for n_i in shape.copy_sizes)
        span.insert(_element_vector(ident))
    for elem in S:
        if span.insert(_element_vector(elem)):
            frontier.append(elem)
    while frontier and span.dim < ambient:
        new_frontier = []
        for e in frontier:
            if span.dim == ambient:
                break
            for g in S:
                for prod in (_element_mul(e, g), _element_mul(g, e)):
                    if span.insert(_element_vector(prod)):
                        new_frontier.append(prod)
        frontier = new_frontier
    dim = span.dim
    ok = dim == ambient
    return GenReport(
        verdict=ok,
        closure_dim=dim,
        ambient_dim=ambient,
        failed_condition=None if ok else ClosureDeficient(),
    )


def generates_single(mats: Sequence[Mat], include_identity: bool = True) -> GenReport:
    """Do these matrices generate the full M_n over their (field) domain?"""
    mats = list(mats)
    n = mats[0].n
    return closure_generates([(a,) for a in mats], shape_of(n),
                             include_identity=include_identity)


def tuple_criterion_generates(tuples: Sequence[MatTuple], copies: Optional[int] = None) -> GenReport:
    """Do k m-tuples generate M_n(F)^m?

    True exactly when every vertical cross-section generates M_n(F) and no
    two cross-sections are simultaneously conjugate.  The direct span
    closure is run as well and must agree with the criterion.
    """
    tuples = list(tuples)
    if not tuples:
        raise DomainError("need at least one generator tuple")
    m = tuples[0].m
    n = tuples[0].n
    field = tuples[0].domain
    if copies is not None and copies != m:
        raise DomainError("copies does not match tuple length")
    for t in tuples:
        if t.m != m or t.n != n or t.domain != field:
            raise DomainError("mismatched tuple shapes")
    if not field.is_field:
        raise DomainError("tuple_criterion_generates requires a field domain")

    shape = shape_of(n, m)
    elements = [tuple(t.mats) for t in tuples]
    closure = closure_generates(elements, shape)

    failed = None
    witness_line = None
    cross_sections = [mat_tuple([t.mats[i] for t in tuples]) for i in range(m)]
    for i, cs in enumerate(cross_sections):
        if not generates_single(cs.mats).verdict:
            failed = CrossSectionFails(i)
            if n == 2:
                witness_line = common_eigenline(cs.mats)
            break
    if failed is None:
        for i in range(m):
            for j in range(i + 1, m):
                w = conjugacy.simultaneously_conjugate(cross_sections[i],
                                                       cross_sections[j])
                if w is not None:
                    failed = ConjugatePair(i, j, w)
                    break
            if failed is not None:
                break

    verdict = failed is None
    if verdict != closure.verdict:
        raise RuntimeError(
            "tuple criterion disagrees with span closure; this is a bug")
    return GenReport(
        verdict=verdict,
        closure_dim=closure.closure_dim,
        ambient_dim=closure.ambient_dim,
        failed_condition=failed,
        eigen_witness=witness_line,
    )


def common_eigenline(S: Sequence[Mat]):
    """Common eigenline of 2x2 matrices over F_{q^2}, if any.

    Returns ALL_LINES when S is empty or consists of scalar matrices, a
    projective vector over the quadratic extension when a common eigenline
    exists, and None otherwise.  None is equivalent to generation.
    """
    S = list(S)
    if not S:
        return ALL_LINES
    field = S[0].domain
    for a in S:
        if a.n != 2:
            raise DomainError("common_eigenline handles n = 2 only")
        if a.domain != field:
            raise DomainError("mixed domains")
    first = next((a for a in S if not is_scalar_mat(a)), None)
    if first is None:
        return ALL_LINES
    E, embed = quadratic_extension(field)
    for line in quadratic_eigvecs(first):
        if all(line_is_invariant(line, a, E, embed) for a in S):
            return line
    return None


def flatten_det(a: Mat, b: Mat):
    """4x4 determinant of the flattened rows I, A, B, AB.

    Equal to det(AB - BA) as a polynomial identity; over a commutative ring
    its invertibility decides generation of M_2.
    """
    if a.n != 2 or b.n != 2:
        raise DomainError("flatten_det is defined for 2x2 matrices")
    if a.domain != b.domain:
        raise DomainError("mixed domains")
    d = a.domain
    rows = (
        vectorize(identity(d, 2)),
        vectorize(a),
        vectorize(b),
        vectorize(mmul(a, b)),
    )
    return det(Mat(d, 4, rows))


def det_commutator_generates(a: Mat, b: Mat) -> bool:
    """Do A, B generate M_2 over a field or Z?  det[A,B] must be a unit."""
    if a.n != 2 or b.n != 2:
        raise DomainError("det-commutator criterion is for 2x2 matrices")
    if a.domain != b.domain:
        raise DomainError("mixed domains")
    return a.domain.is_unit(det(commutator(a, b)))


def lattice_generates_MnZ(S: Sequence[Mat], n: int, max_rounds: int = 64):
    """Does S generate M_n(Z) as a ring?  (identity adjoined throughout)

    Iterates the HNF closure of the Z-span of S, I_n and pairwise products
    of the current lattice basis until it stabilizes; generation means the
    closure is the full lattice Z^{n^2}.
    """
    S = list(S)
    for a in S:
        if a.n != n:
            raise DomainError("size mismatch")
        if a.domain.kind != "integers":
            raise DomainError("lattice test requires integer matrices")
    from .domains import ZZ

    base_rows = [vectorize(a) for a in S]
    base_rows.append(vectorize(identity(ZZ, n)))
    lattice = lattice_from_rows(base_rows, n * n)
    for _ in range(max_rounds):
        basis_mats = [unvectorize(ZZ, n, row) for row in lattice.basis]
        rows = list(base_rows)
        rows.extend(lattice.basis)
        for x in basis_mats:
            for y in basis_mats:
                rows.append(vectorize(mmul(x, y)))
        new_lattice = lattice_from_rows(rows, n * n)
        if new_lattice.basis == lattice.basis:
            return lattice.is_full, lattice
        lattice = new_lattice
    raise RuntimeError(
        f"lattice closure did not stabilize within {max_rounds} rounds; "
        "this should be impossible for an ascending chain in Z^(n^2)")
