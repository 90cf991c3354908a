"""Coefficient domains: prime fields F_p, extension fields F_{p^k}, Z and Q.

Elements are plain hashable Python values in a canonical form, with all
arithmetic carried by the domain object:

* prime field   -- int residue in [0, p)
* ext field     -- tuple of k residues, lowest-degree coefficient first
* integers      -- int (arbitrary precision)
* rationals     -- fractions.Fraction (auto-reduced, positive denominator)
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class DomainError(ValueError):
    """Invalid domain construction or element outside its domain."""


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient lists, lowest degree first)

def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(num, den, p):
    """Remainder of num modulo den over F_p; den must be monic."""
    num = _poly_trim([x % p for x in num])
    dn = len(den) - 1
    while len(num) - 1 >= dn:
        k = len(num) - 1 - dn
        lead = num[-1]
        for i, d in enumerate(den):
            num[k + i] = (num[k + i] - lead * d) % p
        num = _poly_trim(num)
    return num


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_eval(c, x, p):
    acc = 0
    for coef in reversed(c):
        acc = (acc * x + coef) % p
    return acc


def _is_irreducible(coeffs, p) -> bool:
    """Irreducibility of a monic polynomial of degree <= 4 over F_p."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    if any(_poly_eval(coeffs, x, p) == 0 for x in range(p)):
        return False
    if deg <= 3:
        return True
    if deg == 4:
        # no roots: only possible factorization is into two monic quadratics
        for b in range(p):
            for c in range(p):
                quad = [c, b, 1]
                if any(_poly_eval(quad, x, p) == 0 for x in range(p)):
                    continue
                if not _poly_mod(coeffs, quad, p):
                    return False
        return True
    raise DomainError(f"extension degree {deg} out of scope (max 4)")


# ---------------------------------------------------------------------------


class PrimeField:
    """F_p with elements as int residues in [0, p)."""

    kind = "prime_field"
    is_field = True

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p

    @property
    def char(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def convert(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def elements(self):
        return range(self.p)

    def format_elem(self, a) -> str:
        return str(a)

    def parse_elem(self, s: str):
        return int(s) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime_field", self.p))

    def __repr__(self):
        return f"F{self.p}"


class ExtField:
    """F_{p^k} as F_p[t]/(modulus), elements as length-k coefficient tuples."""

    kind = "ext_field"
    is_field = True

    __slots__ = ("p", "k", "modulus")

    def __init__(self, p: int, k: int, modulus):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if k < 2:
            raise DomainError("extension degree must be >= 2 (use PrimeField)")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise DomainError("modulus must be monic of degree k")
        if not _is_irreducible(list(modulus), p):
            raise DomainError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus

    @property
    def char(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p**self.k

    def zero(self):
        return (0,) * self.k

    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def gen(self):
        """The class of t, a root of the modulus."""
        return (0, 1) + (0,) * (self.k - 2)

    def convert(self, n: int):
        return (n % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        prod = _poly_mod(_poly_mul(list(a), list(b), self.p), self.modulus, self.p)
        return tuple(prod) + (0,) * (self.k - len(prod))

    def inv(self, a):
        # extended Euclid in F_p[t]
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of 0")
        p = self.p
        r0, r1 = list(self.modulus), _poly_trim(list(a))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q = [0] * (len(r0) - len(r1) + 1) if len(r0) >= len(r1) else []
            rem = list(r0)
            lead_inv = pow(r1[-1], p - 2, p)
            while len(rem) >= len(r1) and rem:
                shift = len(rem) - len(r1)
                coef = (rem[-1] * lead_inv) % p
                q[shift] = coef
                for i, c in enumerate(r1):
                    rem[shift + i] = (rem[shift + i] - coef * c) % p
                rem = _poly_trim(rem)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(
                [
                    (x - y) % p
                    for x, y in itertools.zip_longest(
                        s0, _poly_mul(q, s1, p), fillvalue=0
                    )
                ]
            )
        # r0 = gcd (a nonzero constant since modulus is irreducible)
        c_inv = pow(r0[0], p - 2, p)
        s0 = _poly_mod([x * c_inv % p for x in s0], self.modulus, p)
        return tuple(s0) + (0,) * (self.k - len(s0))

    def is_zero(self, a) -> bool:
        return all(c == 0 for c in a)

    def is_unit(self, a) -> bool:
        return not self.is_zero(a)

    def elements(self):
        for digits in itertools.product(range(self.p), repeat=self.k):
            yield digits

    def format_elem(self, a) -> str:
        return ",".join(str(c) for c in a)

    def parse_elem(self, s: str):
        coeffs = tuple(int(c) % self.p for c in s.split(","))
        if len(coeffs) != self.k:
            raise DomainError(f"expected {self.k} coefficients, got {s!r}")
        return coeffs

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.p == self.p
            and other.k == self.k
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ext_field", self.p, self.k, self.modulus))

    def __repr__(self):
        return f"F{self.p}^{self.k}"


class IntegerRing:
    kind = "integers"
    is_field = False

    @property
    def char(self) -> int:
        return 0

    def zero(self):
        return 0

    def one(self):
        return 1

    def convert(self, n: int):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def format_elem(self, a) -> str:
        return str(a)

    def parse_elem(self, s: str):
        return int(s)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("integers")

    def __repr__(self):
        return "Z"


class RationalField:
    kind = "rationals"
    is_field = True

    @property
    def char(self) -> int:
        return 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def convert(self, n) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        return a != 0

    def format_elem(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def parse_elem(self, s: str) -> Fraction:
        return Fraction(s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rationals")

    def __repr__(self):
        return "Q"


ZZ = IntegerRing()
QQ = RationalField()


@lru_cache(maxsize=None)
def build_ext_field(p: int, k: int):
    """F_{p^k} with the lexicographically least monic irreducible modulus.

    Lexicographic order is on the coefficient vector below the leading 1,
    most significant coefficient first; degree 1 yields the prime field.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if not 1 <= k <= 4:
        raise DomainError("extension degree must be in 1..4")
    if k == 1:
        return PrimeField(p)
    for high in itertools.product(range(p), repeat=k):
        # high = (a_{k-1}, ..., a_0); stored lowest-first below
        coeffs = list(reversed(high)) + [1]
        if _is_irreducible(coeffs, p):
            return ExtField(p, k, tuple(coeffs))
    raise DomainError(f"no irreducible modulus of degree {k} over F_{p}")  # unreachable


@lru_cache(maxsize=None)
def field_of_order(q: int):
    """The field with q = p^k elements (deterministic modulus)."""
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            k = 0
            n = q
            while n > 1:
                if n % p:
                    raise DomainError(f"{q} is not a prime power")
                n //= p
                k += 1
            return build_ext_field(p, k)
    raise DomainError(f"{q} is not a prime power")


@lru_cache(maxsize=None)
def quadratic_extension(field):
    """(E, embed) with E of order q^2 and embed: field -> E.

    The embedding sends the field generator to a fixed root of the field's
    modulus in E (the first root in element-enumeration order).
    """
    if isinstance(field, PrimeField):
        E = build_ext_field(field.p, 2)
        return E, lambda a: E.convert(a)
    if not isinstance(field, ExtField):
        raise DomainError("quadratic extension requires a finite field")
    E = build_ext_field(field.p, 2 * field.k)
    root = None
    for x in E.elements():
        acc = E.zero()
        for c in reversed(field.modulus):
            acc = E.add(E.mul(acc, x), E.convert(c))
        if E.is_zero(acc):
            root = x
            break
    if root is None:
        raise DomainError("modulus has no root in the quadratic extension")  # unreachable

    def embed(a, _E=E, _root=root):
        acc = _E.zero()
        for c in reversed(a):
            acc = _E.add(_E.mul(acc, _root), _E.convert(c))
        return acc

    return E, embed


def domain_to_json(domain) -> dict:
    if isinstance(domain, PrimeField):
        return {"kind": "prime_field", "p": domain.p}
    if isinstance(domain, ExtField):
        return {"kind": "ext_field", "p": domain.p, "deg": domain.k,
                "modulus": list(domain.modulus)}
    if isinstance(domain, IntegerRing):
        return {"kind": "integers"}
    if isinstance(domain, RationalField):
        return {"kind": "rationals"}
    raise DomainError(f"unknown domain {domain!r}")


def domain_from_json(data: dict):
    kind = data.get("kind")
    if kind == "prime_field":
        return PrimeField(data["p"])
    if kind == "ext_field":
        return ExtField(data["p"], data["deg"], tuple(data["modulus"]))
    if kind == "integers":
        return ZZ
    if kind == "rationals":
        return QQ
    raise DomainError(f"unknown coefficient kind {kind!r}")
