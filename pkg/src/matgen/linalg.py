"""Exact dense linear algebra shared by every module.

Echelon forms and kernels over fields, determinants and characteristic
polynomials over any coefficient domain, Hermite/Smith normal forms over Z,
and eigenline computation for 2x2 matrices in the quadratic extension.
Vectorization is row-major everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .domains import DomainError, quadratic_extension

ALL_LINES = "all-lines"


@dataclass(frozen=True)
class Mat:
    """Square matrix over a coefficient domain; rows is a tuple of tuples."""

    domain: object
    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise DomainError("matrix shape mismatch")
        for row in self.rows:
            if len(row) != self.n:
                raise DomainError("matrix shape mismatch")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for row in self.rows:
            yield from row


def mat(domain, rows) -> Mat:
    """Build a Mat, converting plain ints (or Fractions) into the domain."""
    conv = domain.convert
    return Mat(domain, len(rows), tuple(tuple(conv(x) for x in row) for row in rows))


def identity(domain, n: int) -> Mat:
    one, zero = domain.one(), domain.zero()
    return Mat(domain, n, tuple(tuple(one if i == j else zero for j in range(n))
                                for i in range(n)))


def zero_mat(domain, n: int) -> Mat:
    z = domain.zero()
    return Mat(domain, n, ((z,) * n,) * n)


def unit_mat(domain, n: int, i: int, j: int) -> Mat:
    """The matrix unit E_{ij} (1-based would be unpythonic; i, j are 0-based)."""
    one, zero = domain.one(), domain.zero()
    return Mat(domain, n, tuple(tuple(one if (r, c) == (i, j) else zero
                                      for c in range(n)) for r in range(n)))


def madd(a: Mat, b: Mat) -> Mat:
    d = a.domain
    return Mat(d, a.n, tuple(tuple(d.add(x, y) for x, y in zip(ra, rb))
                             for ra, rb in zip(a.rows, b.rows)))


def msub(a: Mat, b: Mat) -> Mat:
    d = a.domain
    return Mat(d, a.n, tuple(tuple(d.sub(x, y) for x, y in zip(ra, rb))
                             for ra, rb in zip(a.rows, b.rows)))


def mmul(a: Mat, b: Mat) -> Mat:
    d = a.domain
    n = a.n
    bt = tuple(zip(*b.rows))
    out = []
    for ra in a.rows:
        row = []
        for cb in bt:
            acc = d.mul(ra[0], cb[0])
            for x, y in zip(ra[1:], cb[1:]):
                acc = d.add(acc, d.mul(x, y))
            row.append(acc)
        out.append(tuple(row))
    return Mat(d, n, tuple(out))


def smul(c, a: Mat) -> Mat:
    d = a.domain
    return Mat(d, a.n, tuple(tuple(d.mul(c, x) for x in row) for row in a.rows))


def mneg(a: Mat) -> Mat:
    d = a.domain
    return Mat(d, a.n, tuple(tuple(d.neg(x) for x in row) for row in a.rows))


def mat_pow(a: Mat, e: int) -> Mat:
    out = identity(a.domain, a.n)
    for _ in range(e):
        out = mmul(out, a)
    return out


def is_zero_mat(a: Mat) -> bool:
    return all(a.domain.is_zero(x) for x in a.entries())


def is_scalar_mat(a: Mat) -> bool:
    d = a.domain
    diag = a.rows[0][0]
    for i in range(a.n):
        for j in range(a.n):
            want = diag if i == j else d.zero()
            if a.rows[i][j] != want:
                return False
    return True


def vectorize(a: Mat) -> tuple:
    """Row-major flattening; the fixed order used by spans, kernels and the
    4x4 generation determinant."""
    return tuple(x for row in a.rows for x in row)


def unvectorize(domain, n: int, vec: Sequence) -> Mat:
    return Mat(domain, n, tuple(tuple(vec[i * n + j] for j in range(n))
                                for i in range(n)))


def commutator(a: Mat, b: Mat) -> Mat:
    return msub(mmul(a, b), mmul(b, a))


def det(a: Mat):
    """Determinant over any commutative domain (Laplace; n stays tiny)."""
    return _det_rows([list(r) for r in a.rows], a.domain)


def _det_rows(rows, d):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return d.sub(d.mul(rows[0][0], rows[1][1]), d.mul(rows[0][1], rows[1][0]))
    acc = d.zero()
    for j in range(n):
        if d.is_zero(rows[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = d.mul(rows[0][j], _det_rows(minor, d))
        acc = d.add(acc, term) if j % 2 == 0 else d.sub(acc, term)
    return acc


def trace(a: Mat):
    d = a.domain
    acc = d.zero()
    for i in range(a.n):
        acc = d.add(acc, a.rows[i][i])
    return acc


# ---------------------------------------------------------------------------
# echelon forms and kernels over a field


def rref(rows, field):
    """Reduced row echelon form.

    Returns (basis, rank): the nonzero echelonized rows spanning the same
    subspace, pivots normalized to 1.
    """
    work = [list(r) for r in rows]
    if not work:
        return [], 0
    ncols = len(work[0])
    for row in work:
        if len(row) != ncols:
            raise DomainError("ragged rows")
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if not field.is_zero(work[i][c]):
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.inv(work[r][c])
        work[r] = [field.mul(inv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and not field.is_zero(work[i][c]):
                f = work[i][c]
                work[i] = [field.sub(x, field.mul(f, y))
                           for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    basis = [tuple(row) for row in work[:r]]
    return basis, r


def rank(rows, field) -> int:
    return rref(rows, field)[1]


def kernel_basis(rows, field, ncols: Optional[int] = None):
    """Basis of the right kernel {v : M v = 0} of the r x c matrix `rows`."""
    if not rows:
        if ncols is None:
            raise DomainError("kernel of an empty matrix needs ncols")
        one, zero = field.one(), field.zero()
        return [tuple(one if i == j else zero for j in range(ncols))
                for i in range(ncols)]
    c = len(rows[0])
    basis, r = rref(rows, field)
    pivots = []
    for row in basis:
        for j, x in enumerate(row):
            if not field.is_zero(x):
                pivots.append(j)
                break
    pivset = set(pivots)
    free = [j for j in range(c) if j not in pivset]
    out = []
    one, zero = field.one(), field.zero()
    for f in free:
        v = [zero] * c
        v[f] = one
        for row, pj in zip(basis, pivots):
            v[pj] = field.neg(row[f])
        out.append(tuple(v))
    return out


def solve_right(rows, rhs, field):
    """One solution x of M x = b, or None if inconsistent (free vars = 0)."""
    if not rows:
        return None
    c = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    basis, r = rref(aug, field)
    x = [field.zero()] * c
    for row in basis:
        piv = next(j for j, v in enumerate(row) if not field.is_zero(v))
        if piv == c:
            return None
        x[piv] = row[c]
    return tuple(x)


# ---------------------------------------------------------------------------
# characteristic polynomial (det(tI - A), exact over any domain)


def _cp_poly_add(a, b, d):
    n = max(len(a), len(b))
    a = a + [d.zero()] * (n - len(a))
    b = b + [d.zero()] * (n - len(b))
    return [d.add(x, y) for x, y in zip(a, b)]


def _cp_poly_mul(a, b, d):
    out = [d.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if d.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = d.add(out[i + j], d.mul(x, y))
    return out


def _cp_det(rows, d):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = [d.zero()]
    for j in range(n):
        entry = rows[0][j]
        if all(d.is_zero(c) for c in entry):
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = _cp_poly_mul(entry, _cp_det(minor, d), d)
        if j % 2:
            term = [d.neg(c) for c in term]
        acc = _cp_poly_add(acc, term, d)
    return acc


def char_poly(a: Mat) -> tuple:
    """Coefficients of det(tI - A), lowest degree first, monic of degree n."""
    d = a.domain
    if not d.is_field:
        raise DomainError("char_poly requires a field domain")
    n = a.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            const = d.neg(a.rows[i][j])
            lin = d.one() if i == j else d.zero()
            row.append([const, lin])
        rows.append(row)
    coeffs = _cp_det(rows, d)
    coeffs = coeffs + [d.zero()] * (n + 1 - len(coeffs))
    return tuple(coeffs)


def poly_eval_mat(coeffs, a: Mat) -> Mat:
    """Evaluate a polynomial (lowest degree first) at a matrix."""
    d = a.domain
    out = zero_mat(d, a.n)
    for c in reversed(coeffs):
        out = madd(mmul(out, a), smul(c, identity(d, a.n)))
    return out


# ---------------------------------------------------------------------------
# eigenlines of 2x2 matrices over the quadratic extension


def quadratic_eigvecs(a: Mat):
    """All eigenlines of a 2x2 matrix over F_{q^2}.

    Returns ALL_LINES for scalar matrices, otherwise a list of projective
    vectors with coordinates in the quadratic extension, first nonzero
    coordinate normalized to 1.
    """
    if a.n != 2:
        raise DomainError("quadratic_eigvecs is defined for 2x2 matrices")
    field = a.domain
    if not field.is_field or field.char == 0:
        raise DomainError("quadratic_eigvecs requires a finite field")
    if is_scalar_mat(a):
        return ALL_LINES
    E, embed = quadratic_extension(field)
    cp = char_poly(a)
    c0, c1 = embed(cp[0]), embed(cp[1])
    lines = []
    for lam in E.elements():
        val = E.add(E.add(E.mul(lam, lam), E.mul(c1, lam)), c0)
        if not E.is_zero(val):
            continue
        aa = E.sub(embed(a.rows[0][0]), lam)
        bb = embed(a.rows[0][1])
        cc = embed(a.rows[1][0])
        dd = E.sub(embed(a.rows[1][1]), lam)
        if not (E.is_zero(aa) and E.is_zero(bb)):
            v = (E.neg(bb), aa)
        else:
            v = (E.neg(dd), cc)
        lines.append(_normalize_line(v, E))
    # a repeated eigenvalue yields the same line once
    seen, out = set(), []
    for v in lines:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _normalize_line(v, E):
    for x in v:
        if not E.is_zero(x):
            inv = E.inv(x)
            return tuple(E.mul(inv, y) for y in v)
    raise DomainError("zero vector is not a line")


def line_is_invariant(v, a: Mat, E, embed) -> bool:
    """Does the 2x2 matrix `a` map the E-line spanned by v into itself?"""
    rows = [[embed(x) for x in row] for row in a.rows]
    w0 = E.add(E.mul(rows[0][0], v[0]), E.mul(rows[0][1], v[1]))
    w1 = E.add(E.mul(rows[1][0], v[0]), E.mul(rows[1][1], v[1]))
    cross = E.sub(E.mul(w0, v[1]), E.mul(w1, v[0]))
    return E.is_zero(cross)


# ---------------------------------------------------------------------------
# integer lattices: Hermite and Smith normal forms


@dataclass(frozen=True)
class IntLattice:
    """Row lattice in Z^ambient, basis in canonical HNF (no zero rows)."""

    ambient_dim: int
    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        if self.rank != self.ambient_dim:
            return False
        return all(row[i] == 1 and all(x == 0 for j, x in enumerate(row) if j != i)
                   for i, row in enumerate(self.basis))

    def index_in_full(self):
        """Lattice index [Z^d : L] (product of pivots), or None if not full rank."""
        if self.rank != self.ambient_dim:
            return None
        prod = 1
        for i, row in enumerate(self.basis):
            prod *= row[i] if i < len(row) else 0
        return prod


def hnf(rows):
    """Row-style Hermite normal form with a unimodular transform.

    Returns (H, U) with U * rows == H, det(U) = +-1; H keeps the input row
    count (zero rows at the bottom), pivots positive, entries above each
    pivot reduced into [0, pivot).
    """
    m = len(rows)
    if m == 0:
        return [], []
    ncols = len(rows[0])
    H = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            r += 1
            if r == m:
                break
    return [tuple(x) for x in H], [tuple(x) for x in U]


def lattice_from_rows(rows, ambient_dim: int) -> IntLattice:
    if not rows:
        return IntLattice(ambient_dim, ())
    H, _ = hnf(rows)
    basis = tuple(row for row in H if any(row))
    return IntLattice(ambient_dim, basis)


def snf(rows) -> tuple:
    """Elementary divisors d_1 | d_2 | ... (nonnegative, zeros trailing)."""
    if not rows:
        return ()
    A = [list(r) for r in rows]
    m, n = len(A), len(A[0])
    divisors = []
    top = 0
    while top < min(m, n):
        # find the smallest nonzero entry in the remaining block
        best = None
        for i in range(top, m):
            for j in range(top, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        A[top], A[bi] = A[bi], A[top]
        for row in A:
            row[top], row[bj] = row[bj], row[top]
        # clear row and column `top`; restart if a remainder shrinks the pivot
        dirty = False
        for i in range(top + 1, m):
            if A[i][top]:
                q = A[i][top] // A[top][top]
                A[i] = [x - q * y for x, y in zip(A[i], A[top])]
                if A[i][top]:
                    dirty = True
        for j in range(top + 1, n):
            if A[top][j]:
                q = A[top][j] // A[top][top]
                for i in range(m):
                    A[i][j] -= q * A[i][top]
                if A[top][j]:
                    dirty = True
        if dirty:
            continue
        # force divisibility of the remaining block by the pivot
        pivot = A[top][top]
        offender = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if A[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            A[top] = [x + y for x, y in zip(A[top], A[offender])]
            continue
        divisors.append(abs(pivot))
        top += 1
    divisors += [0] * (min(m, n) - len(divisors))
    return tuple(divisors)


def integer_kernel_saturated(rows, ncols: int):
    """Primitive basis of {v in Z^ncols : M v = 0} (saturated by construction)."""
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    T = [tuple(r[i] for r in rows) for i in range(ncols)]  # transpose, ncols x m
    H, U = hnf(T)
    return [u for h, u in zip(H, U) if not any(h)]


def subspace_intersection(basis_u, basis_w, field):
    """Basis of the intersection of two row spans over a field."""
    if not basis_u or not basis_w:
        return []
    stacked = list(basis_u) + list(basis_w)
    left_null = kernel_basis([tuple(col) for col in zip(*stacked)], field,
                             ncols=len(stacked))
    out = []
    d = field
    width = len(basis_u[0])
    for vec in left_null:
        comb = [d.zero()] * width
        for c, row in zip(vec[:len(basis_u)], basis_u):
            comb = [d.add(x, d.mul(c, y)) for x, y in zip(comb, row)]
        out.append(tuple(comb))
    basis, _ = rref(out, field)
    return basis
