"""Brute-force censuses and closed-form evaluators.

Exhaustive counting of generating m-tuples of n x n matrices over F_q,
PGL-orbit counting by canonical representatives, the maximal-subalgebra
catalog of M_2(F_q) with the complement-count oracle, and exact evaluators
for every closed formula and bound used downstream.

The enumeration engine packs matrices into integer ids over a table-driven
field so the desk-scale censuses stay fast; tuples over F_2 are plain bit
masks with a precomputed 16x16 multiplication table.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .domains import DomainError, field_of_order
from .linalg import kernel_basis, rref, subspace_intersection

DEFAULT_ENUMERATION_CAP = 2**26


# ---------------------------------------------------------------------------
# table-driven finite field (q <= 16)


class SmallField:
    """F_q with elements 0..q-1 and full operation tables.

    Index 0 is zero and index 1 is one; for extensions the index is the
    base-p value of the coefficient vector (lowest degree first).  Exposes
    the same method API as the domain classes, so the generic linear algebra
    works on int vectors directly.
    """

    is_field = True

    def __init__(self, q: int):
        dom = field_of_order(q)
        self.q = q
        self.domain = dom
        self.char = dom.char
        if dom.kind == "prime_field":
            self.values = list(range(q))
            index = {v: v for v in self.values}
        else:
            p, k = dom.p, dom.k
            self.values = [tuple((i // p**j) % p for j in range(k))
                           for i in range(q)]
            index = {v: i for i, v in enumerate(self.values)}
        self.add_t = tuple(
            tuple(index[dom.add(self.values[a], self.values[b])] for b in range(q))
            for a in range(q))
        self.sub_t = tuple(
            tuple(index[dom.sub(self.values[a], self.values[b])] for b in range(q))
            for a in range(q))
        self.mul_t = tuple(
            tuple(index[dom.mul(self.values[a], self.values[b])] for b in range(q))
            for a in range(q))
        self.neg_t = tuple(index[dom.neg(self.values[a])] for a in range(q))
        self.inv_t = (None,) + tuple(index[dom.inv(self.values[a])]
                                     for a in range(1, q))

    @property
    def size(self) -> int:
        return self.q

    def zero(self):
        return 0

    def one(self):
        return 1

    def convert(self, n: int):
        # constants embed as index n mod p under the base-p value convention
        return n % self.char

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.sub_t[a][b]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def neg(self, a):
        return self.neg_t[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.inv_t[a]

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        return a != 0

    def elements(self):
        return range(self.q)

    def to_domain_value(self, a):
        return self.values[a]

    def __repr__(self):
        return f"SmallField({self.q})"


@lru_cache(maxsize=None)
def small_field(q: int) -> SmallField:
    return SmallField(q)


@lru_cache(maxsize=None)
def _all_mats(q: int, n: int):
    """All n x n matrices over F_q as entry tuples, in lexicographic order."""
    return tuple(itertools.product(range(q), repeat=n * n))


def _matmul(x, y, n, add, mul):
    out = []
    for i in range(n):
        for j in range(n):
            acc = mul[x[i * n]][y[j]]
            for k in range(1, n):
                acc = add[acc][mul[x[i * n + k]][y[k * n + j]]]
            out.append(acc)
    return tuple(out)


def _generates(mats, n, F: SmallField) -> bool:
    """Span closure of an m-tuple inside M_n(F_q); True iff it is everything."""
    add, sub, mul, inv = F.add_t, F.sub_t, F.mul_t, F.inv_t
    dim2 = n * n
    rows = [None] * dim2
    dim = 0

    def insert(v):
        nonlocal dim
        v = list(v)
        for i in range(dim2):
            x = v[i]
            if x:
                row = rows[i]
                if row is None:
                    iv = inv[x]
                    rows[i] = tuple(mul[iv][c] for c in v)
                    dim += 1
                    return True
                mr = mul[x]
                srow = sub
                v = [srow[a][mr[b]] for a, b in zip(v, row)]
        return False

    frontier = [m for m in mats if insert(m)]
    while frontier and dim < dim2:
        nxt = []
        for e in frontier:
            if dim == dim2:
                break
            for g in mats:
                prod = _matmul(e, g, n, add, mul)
                if insert(prod):
                    nxt.append(prod)
                prod = _matmul(g, e, n, add, mul)
                if insert(prod):
                    nxt.append(prod)
        frontier = nxt
    return dim == dim2


# F_2, n = 2: matrices are 4-bit masks, vector = matrix, span via XOR basis.

MUL2 = tuple(
    tuple(
        (((x >> 3 & 1) & (y >> 3 & 1)) ^ ((x >> 2 & 1) & (y >> 1 & 1))) << 3
        | (((x >> 3 & 1) & (y >> 2 & 1)) ^ ((x >> 2 & 1) & (y & 1))) << 2
        | (((x >> 1 & 1) & (y >> 3 & 1)) ^ ((x & 1) & (y >> 1 & 1))) << 1
        | (((x >> 1 & 1) & (y >> 2 & 1)) ^ ((x & 1) & (y & 1)))
        for y in range(16)
    )
    for x in range(16)
)


def _generates_f2(mats) -> bool:
    slots = [0, 0, 0, 0]
    dim = 0

    def insert(v):
        nonlocal dim
        while v:
            hb = v.bit_length() - 1
            r = slots[hb]
            if r:
                v ^= r
            else:
                slots[hb] = v
                dim += 1
                return True
        return False

    frontier = [m for m in mats if insert(m)]
    while frontier and dim < 4:
        nxt = []
        for e in frontier:
            row = MUL2[e]
            for g in mats:
                if insert(row[g]):
                    nxt.append(row[g])
                p = MUL2[g][e]
                if insert(p):
                    nxt.append(p)
        frontier = nxt
    return dim == 4


def _count_range(q: int, n: int, m: int, lo: int, hi: int) -> int:
    """Generating tuples whose first component id lies in [lo, hi)."""
    if q == 2 and n == 2:
        ids = range(16)
        count = 0
        for first in range(lo, hi):
            for rest in itertools.product(ids, repeat=m - 1):
                if _generates_f2((first,) + rest):
                    count += 1
        return count
    F = small_field(q)
    mats = _all_mats(q, n)
    count = 0
    for first in range(lo, hi):
        head = mats[first]
        for rest in itertools.product(mats, repeat=m - 1):
            if _generates((head,) + rest, n, F):
                count += 1
    return count


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("MATGEN_THREADS")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1
    return max(1, int(threads))


@dataclass(frozen=True)
class CensusResult:
    q: int
    n: int
    m: int
    ambient_count: int
    generating_count: int
    pgl_order: int
    gen_value: int
    elapsed: float

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "q": self.q,
            "n": self.n,
            "m": self.m,
            "ambient_count": self.ambient_count,
            "generating_count": self.generating_count,
            "pgl_order": self.pgl_order,
            "gen_value": self.gen_value,
            "elapsed": self.elapsed,
        }


def pgl_order(q: int, n: int) -> int:
    """|PGL_n(F_q)| = (q-1)^{-1} prod_{i<n} (q^n - q^i)."""
    prod = 1
    for i in range(n):
        prod *= q**n - q**i
    assert prod % (q - 1) == 0
    return prod // (q - 1)


def count_generating_bruteforce(q: int, n: int, m: int,
                                threads: Optional[int] = 1,
                                cap: int = DEFAULT_ENUMERATION_CAP) -> CensusResult:
    """Exact count of generating m-tuples in M_n(F_q)^m by enumeration.

    Deterministic partitioned enumeration (by first component); the result
    does not depend on the worker count.
    """
    if n < 2:
        raise DomainError("use n1_census_report for 1x1 censuses")
    if m < 0:
        raise DomainError("m must be >= 0")
    ambient = q ** (m * n * n)
    if ambient > cap:
        raise DomainError(f"ambient count {ambient} exceeds cap {cap}")
    start = time.perf_counter()
    pgl = pgl_order(q, n)
    if m == 0:
        return CensusResult(q, n, m, ambient, 0, pgl, 0,
                            time.perf_counter() - start)
    N = q ** (n * n)
    workers = _resolve_threads(threads)
    if workers == 1:
        total = _count_range(q, n, m, 0, N)
    else:
        nchunks = min(N, workers * 4)
        bounds = [(N * i) // nchunks for i in range(nchunks + 1)]
        jobs = [(q, n, m, bounds[i], bounds[i + 1]) for i in range(nchunks)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(_count_worker, jobs))
    elapsed = time.perf_counter() - start
    if m >= 1 and total % pgl != 0:
        raise RuntimeError("free PGL action violated; bug in the census")
    return CensusResult(q, n, m, ambient, total, pgl, total // pgl, elapsed)


def _count_worker(args):
    return _count_range(*args)


# ---------------------------------------------------------------------------
# orbits


def _det_small(x, n, F: SmallField):
    if n == 2:
        return F.sub_t[F.mul_t[x[0]][x[3]]][F.mul_t[x[1]][x[2]]]
    rows = [list(x[i * n:(i + 1) * n]) for i in range(n)]
    return _det_small_rows(rows, F)


def _det_small_rows(rows, F):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = F.mul_t[rows[0][j]][_det_small_rows(minor, F)]
        acc = F.add_t[acc][term] if j % 2 == 0 else F.sub_t[acc][term]
    return acc


def _inv_small(x, n, F: SmallField):
    aug = [list(x[i * n:(i + 1) * n]) + [1 if j == i else 0 for j in range(n)]
           for i in range(n)]
    basis, r = rref(aug, F)
    if r < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(basis[i][n + j] for i in range(n) for j in range(n))


@lru_cache(maxsize=None)
def _pgl_conj_perms(q: int, n: int):
    """Permutations of matrix ids induced by PGL conjugation M -> g^-1 M g."""
    F = small_field(q)
    mats = _all_mats(q, n)
    index = {mm: i for i, mm in enumerate(mats)}
    reps = {}
    for mm in mats:
        if _det_small(mm, n, F) == 0:
            continue
        lead = next(c for c in mm if c)
        ivl = F.inv_t[lead]
        canon = tuple(F.mul_t[ivl][c] for c in mm)
        if canon not in reps:
            reps[canon] = mm
    perms = []
    for g in reps:
        gi = _inv_small(g, n, F)
        perm = [0] * len(mats)
        for i, mm in enumerate(mats):
            conj = _matmul(_matmul(gi, mm, n, F.add_t, F.mul_t), g, n,
                           F.add_t, F.mul_t)
            perm[i] = index[conj]
        perms.append(tuple(perm))
    assert len(perms) == pgl_order(q, n)
    return tuple(perms)


def orbit_count(q: int, n: int, m: int, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Number of PGL-conjugation orbits on the generating m-tuples.

    Counts lexicographically-least orbit representatives; the free action
    makes this generating_count / pgl_order, which is asserted.
    """
    if n < 2:
        raise DomainError("orbit census needs n >= 2")
    ambient = q ** (m * n * n)
    if ambient > cap:
        raise DomainError(f"ambient count {ambient} exceeds cap {cap}")
    F = small_field(q)
    mats = _all_mats(q, n)
    perms = _pgl_conj_perms(q, n)
    N = len(mats)
    use_f2 = q == 2 and n == 2
    canonical = 0
    generating = 0
    for tup in itertools.product(range(N), repeat=m):
        if use_f2:
            ok = _generates_f2(tup)
        else:
            ok = _generates(tuple(mats[i] for i in tup), n, F)
        if not ok:
            continue
        generating += 1
        if all(tuple(p[i] for i in tup) >= tup for p in perms):
            canonical += 1
    if canonical * pgl_order(q, n) != generating:
        raise RuntimeError("orbit sizes disagree with the free action; bug")
    return canonical


# ---------------------------------------------------------------------------
# closed formulas


def gen_value_2x2(q: int, m: int) -> int:
    """Largest k such that M_2(F_q)^k admits m generators.

    Closed form (q^{4m-1} + q^{2m} - q^{3m} - q^{3m-1}) / (q^2 - 1); equals
    the m-tuple census divided by |PGL_2(F_q)|.
    """
    if m < 2:
        raise DomainError("formula holds for m >= 2")
    num = q ** (4 * m - 1) + q ** (2 * m) - q ** (3 * m) - q ** (3 * m - 1)
    den = q * q - 1
    assert num % den == 0
    return num // den


def gen_numerator_2x2(q: int, m: int) -> int:
    """Number of generating m-tuples of 2x2 matrices over F_q.

    Inclusion-exclusion over the maximal subalgebras:
    q^{4m} - q^m - (q+1)(q^{3m} - q^m) + q(q^{2m} - q^m).
    """
    if m < 2:
        raise DomainError("formula holds for m >= 2")
    return (q ** (4 * m) - q**m
            - (q + 1) * (q ** (3 * m) - q**m)
            + q * (q ** (2 * m) - q**m))


def gen_value_1x1(q: int, m: int, convention: str = "projective") -> int:
    """n = 1 values under the three conventions (see the census report)."""
    if convention == "projective":
        num = q**m - 1
        assert num % (q - 1) == 0
        return num // (q - 1)
    if convention == "unital":
        return q**m
    if convention == "nonunital":
        return q**m - 1
    raise DomainError(f"unknown convention {convention!r}")


def asymptotic_upper_bound(q: int, n: int, m: int) -> Fraction:
    """(q-1) q^{(m-1)n^2} prod_{k=1..n} (1 - q^{-k})^{-1}, exact."""
    out = Fraction(q - 1) * Fraction(q) ** ((m - 1) * n * n)
    for k in range(1, n + 1):
        out *= Fraction(q**k, q**k - 1)
    return out


def euler_partial(x, terms: int):
    """Alternating bracket for prod_{k>=1} (1 - x^k) via the pentagonal series.

    Returns (lower, upper) from the two consecutive partial sums with
    `terms` and `terms + 1` series terms.
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(1), Fraction(1)
    if not 0 < x < 1:
        raise DomainError("series requires 0 <= x < 1")

    def partial(N):
        s = Fraction(1)
        for k in range(1, N + 1):
            term = x ** ((3 * k * k - k) // 2) + x ** ((3 * k * k + k) // 2)
            s += term if k % 2 == 0 else -term
        return s

    a, b = partial(terms), partial(terms + 1)
    return (a, b) if a <= b else (b, a)


def generating_series_check(q: int, upto_m: int) -> bool:
    """Power-series identity for the two-generator values.

    gen_value_2x2(q, 2) / ((1-zq^2)(1-zq^3)(1-zq^4)) must expand with the
    coefficient of z^{m-2} equal to gen_value_2x2(q, m).
    """
    order = upto_m - 2
    if order < 0:
        raise DomainError("upto_m must be >= 2")
    series = [1] + [0] * order
    for a in (2, 3, 4):
        geo = [q ** (a * i) for i in range(order + 1)]
        series = [sum(series[i] * geo[j - i] for i in range(j + 1))
                  for j in range(order + 1)]
    g22 = gen_value_2x2(q, 2)
    for m in range(2, upto_m + 1):
        if g22 * series[m - 2] != gen_value_2x2(q, m):
            return False
    return True


def min_generators_M2Z(k: int) -> int:
    """Smallest number of generators of the ring M_2(Z)^k."""
    if k < 1:
        raise DomainError("k must be >= 1")
    m = 2
    while integer_gen_formula(m) < k:
        m += 1
    return m


def integer_gen_formula(m: int) -> int:
    """Largest k such that M_2(Z)^k admits m generators:
    (16^m - 3*8^m + 2*4^m) / 6, the q = 2 value of the field formula."""
    num = 16**m - 3 * 8**m + 2 * 4**m
    assert num % 6 == 0
    return num // 6


def gap_monotonicity_check(q: int, n: int, m_max: int) -> bool:
    """One more generator at least doubles the reachable copy count, and
    the count grows strictly in m, on 2 <= m <= m_max."""
    if n != 2:
        raise DomainError("closed formula available for n = 2 only")
    for m in range(2, m_max):
        g, g1 = gen_value_2x2(q, m), gen_value_2x2(q, m + 1)
        if g1 < 2 * g or g1 <= g:
            return False
    return True


# ---------------------------------------------------------------------------
# maximal subalgebras of M_2(F_q) and the complement count


@dataclass(frozen=True)
class SubalgebraCatalog:
    q: int
    noncommutative: tuple  # (projective point, 3-row basis) per point
    commutative: tuple     # 2-row basis per subalgebra
    scalars: tuple         # 1-row basis

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "q": self.q,
            "noncommutative": [
                {"point": list(pt), "basis": [list(r) for r in basis]}
                for pt, basis in self.noncommutative
            ],
            "commutative": [[list(r) for r in basis] for basis in self.commutative],
            "counts": {
                "noncommutative": len(self.noncommutative),
                "commutative": len(self.commutative),
            },
        }


def enumerate_maximal_subalgebras(q: int) -> SubalgebraCatalog:
    """Classify the maximal subalgebras of M_2(F_q), q <= 16.

    Noncommutative: stabilizers of the q+1 projective lines.  Commutative:
    the planes spanned by I and a matrix with irreducible characteristic
    polynomial, deduplicated by their reduced row echelon basis.  The
    catalog invariants are checked before returning.
    """
    if q > 16:
        raise DomainError("catalog enumeration is capped at q = 16")
    F = small_field(q)
    mul, sub, neg = F.mul_t, F.sub_t, F.neg_t
    points = [(1, s) for s in range(q)] + [(0, 1)]
    noncomm = []
    for v0, v1 in points:
        row = (mul[v0][v1], mul[v1][v1], neg[mul[v0][v0]], neg[mul[v0][v1]])
        basis, _ = rref(kernel_basis([row], F, ncols=4), F)
        noncomm.append(((v0, v1), tuple(basis)))

    ident = (1, 0, 0, 1)
    comm = {}
    irr_count = 0
    for mm in _all_mats(q, 2):
        tr = F.add_t[mm[0]][mm[3]]
        dt = _det_small(mm, 2, F)
        # t^2 - tr*t + det has no roots in F_q
        if any(F.add_t[F.sub_t[mul[x][x]][mul[tr][x]]][dt] == 0
               for x in range(q)):
            continue
        irr_count += 1
        basis, _ = rref([ident, mm], F)
        comm.setdefault(tuple(basis), 0)
        comm[tuple(basis)] += 1
    # (q^2-q)/2 irreducible quadratics, q^2-q matrices per polynomial,
    # and q^2-q matrices inside each plane spanned with the identity
    assert irr_count == (q * q - q) ** 2 // 2
    assert all(c == q * q - q for c in comm.values())

    scal_basis, _ = rref([ident], F)
    catalog = SubalgebraCatalog(
        q=q,
        noncommutative=tuple(noncomm),
        commutative=tuple(sorted(comm)),
        scalars=tuple(scal_basis),
    )
    _check_catalog(catalog, F)
    return catalog


def _check_catalog(cat: SubalgebraCatalog, F: SmallField):
    q = cat.q
    if len(cat.noncommutative) != q + 1:
        raise RuntimeError("wrong noncommutative count")
    if len(cat.commutative) != (q * q - q) // 2:
        raise RuntimeError("wrong commutative count")
    nbases = [b for _, b in cat.noncommutative]
    for basis in nbases:
        if len(basis) != 3:
            raise RuntimeError("noncommutative subalgebra must have dimension 3")
    pairwise = set()
    for i in range(len(nbases)):
        for j in range(i + 1, len(nbases)):
            inter = subspace_intersection(nbases[i], nbases[j], F)
            if len(inter) != 2:
                raise RuntimeError("noncommutative pairwise intersection must be 2-dim")
            pairwise.add(tuple(inter))
    if len(pairwise) != (q + 1) * q // 2:
        raise RuntimeError("pairwise intersections must be pairwise distinct")
    for i in range(len(nbases)):
        for j in range(i + 1, len(nbases)):
            for k in range(j + 1, len(nbases)):
                inter = subspace_intersection(
                    subspace_intersection(nbases[i], nbases[j], F), nbases[k], F)
                if tuple(inter) != cat.scalars:
                    raise RuntimeError("triple intersections must be the scalars")
    cbases = list(cat.commutative)
    for i in range(len(cbases)):
        for j in range(i + 1, len(cbases)):
            if tuple(subspace_intersection(cbases[i], cbases[j], F)) != cat.scalars:
                raise RuntimeError("distinct commutative subalgebras meet in scalars")
        for basis in nbases:
            if tuple(subspace_intersection(cbases[i], basis, F)) != cat.scalars:
                raise RuntimeError("mixed intersections must be the scalars")


def _span_members(basis, F: SmallField):
    """All matrix ids in the span of echelonized basis rows."""
    mats_index = {mm: i for i, mm in enumerate(_all_mats(F.q, 2))}
    members = set()
    for coeffs in itertools.product(range(F.q), repeat=len(basis)):
        vec = [0, 0, 0, 0]
        for c, row in zip(coeffs, basis):
            if c:
                vec = [F.add_t[x][F.mul_t[c][y]] for x, y in zip(vec, row)]
        members.add(mats_index[tuple(vec)])
    return members


def count_via_complement(q: int, m: int) -> int:
    """#G_{m,2}(F_q) as ambient minus the union of A^m over the catalog.

    Membership of every tuple in every maximal subalgebra is tested
    explicitly; this is an oracle independent of span closures and of the
    closed formulas.
    """
    if q > 5:
        raise DomainError("complement count is capped at q = 5")
    cat = enumerate_maximal_subalgebras(q)
    F = small_field(q)
    subalgebras = [b for _, b in cat.noncommutative] + list(cat.commutative)
    N = q**4
    masks = [0] * N
    for s, basis in enumerate(subalgebras):
        bit = 1 << s
        for idx in _span_members(basis, F):
            masks[idx] |= bit
    nongen = 0
    for tup in itertools.product(masks, repeat=m):
        acc = tup[0]
        for x in tup[1:]:
            acc &= x
            if not acc:
                break
        if acc:
            nongen += 1
    return N**m - nongen


# ---------------------------------------------------------------------------
# sampling and the n = 1 report


def sample_generation_probability(q: int, n: int, m: int,
                                  samples: Optional[int] = None,
                                  seed: int = 0) -> Fraction:
    """Probability that a uniform m-tuple generates M_n(F_q).

    samples=None computes the exact value from the census; otherwise a
    seeded, reproducible sample estimate is returned.
    """
    if m == 0:
        return Fraction(0)
    if samples is None:
        res = count_generating_bruteforce(q, n, m)
        return Fraction(res.generating_count, res.ambient_count)
    import random

    rng = random.Random(seed)
    F = small_field(q)
    mats = _all_mats(q, n)
    N = len(mats)
    hits = 0
    for _ in range(samples):
        tup = tuple(mats[rng.randrange(N)] for _ in range(m))
        if _generates(tup, n, F):
            hits += 1
    return Fraction(hits, samples)


def n1_census_report(q: int, m: int) -> dict:
    """Side-by-side n = 1 counts: unital and non-unital brute force next to
    the closed formula; the conventions disagree for q > 2 (open question)."""
    unital = 0
    nonunital = 0
    for tup in itertools.product(range(q), repeat=m):
        # F_q is one-dimensional: the spanned subalgebra is everything
        # exactly when some generator (or the adjoined 1) is a unit
        if any(x != 0 for x in (1,) + tup):
            unital += 1
        if any(x != 0 for x in tup):
            nonunital += 1
    return {
        "schema_version": 1,
        "q": q,
        "m": m,
        "unital": unital,
        "nonunital": nonunital,
        "up_to_scaling": gen_value_1x1(q, m, "projective"),
        "agree_at": "q=2 (projective count equals non-unital); unital exceeds by the zero tuple",
    }
