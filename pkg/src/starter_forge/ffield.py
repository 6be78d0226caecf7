"""Exact arithmetic in F_q, q = p^m with p an odd prime.

Elements are canonical integers in [0, q): the coefficients (c_0, ..., c_{m-1})
of the representative polynomial packed as sum(c_i * p**i). Scalar operations
take and return those integers; :class:`FieldElement` wraps one for operator
use. Bulk operations on numpy arrays (``*_array``) broadcast like numpy ufuncs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import FieldError, FieldMismatchError

# Trial-division factoring of q - 1 stays fast below this bound.
MAX_ORDER = 2**40


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for d in (2, 3):
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
    d = 5
    while d * d <= n:
        for c in (d, d + 2):
            while n % c == 0:
                out[c] = out.get(c, 0) + 1
                n //= c
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p**m, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    f = factorize(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, m),) = f.items()
    return p, m


# -- polynomials over F_p: coefficient lists, constant term first ----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quo[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return _trim(quo), a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def is_irreducible(poly: list[int] | tuple[int, ...], p: int) -> bool:
    """Ben-Or test: f of degree m is irreducible iff gcd(f, x^(p^i) - x) = 1 for i <= m/2."""
    f = _trim(list(poly))
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(m // 2):
        # h <- h^p mod f
        r, base, e = [1], h, p
        while e:
            if e & 1:
                r = _poly_divmod(_poly_mul(r, base, p), f, p)[1]
            base = _poly_divmod(_poly_mul(base, base, p), f, p)[1]
            e >>= 1
        h = r
        if len(_poly_gcd(f, _poly_sub(h, x, p), p)) > 1:
            return False
    return True


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m; (c_0, ..., c_{m-1}) compared in order."""
    if m == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=m):
        poly = (*low, 1)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")


# -- the field -------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    q: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if self.q != self.p**self.m or len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise FieldError("inconsistent FieldSpec")

    def __repr__(self):
        return f"FieldSpec(q={self.q}, p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    # digit packing
    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def pack(self, coeffs) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.q:
                raise FieldError(f"{x} is not an element of F_{self.q}")

    # scalar arithmetic on encodings
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.m):
            a, ca = divmod(a, p)
            b, cb = divmod(b, p)
            out += (ca + cb) % p * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.m):
            a, c = divmod(a, p)
            out += (-c % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        p, m, mod = self.p, self.m, self.modulus
        prod = [0] * (2 * m - 1)
        da, db = self.digits(a), self.digits(b)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m):
                    prod[k - m + i] -= c * mod[i]
        return self.pack(c % p for c in prod[:m])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.m == 1:
            return pow(a, -1, self.p)
        # extended Euclid on polynomials: track s with s*a = r (mod modulus)
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.digits(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1, p), p)
        c = pow(r1[0], -1, p)
        return self.pack(x * c % p for x in s1)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent; use inv first")
        if self.m == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # vectorised arithmetic; arrays of encodings, numpy broadcasting rules
    def _split(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._powers) % self.p

    def _join(self, d: np.ndarray) -> np.ndarray:
        return d @ self._powers

    def add_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        return self._join((self._split(a) + self._split(b)) % self.p)

    def neg_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return -a % self.p
        return self._join(-self._split(a) % self.p)

    def sub_array(self, a, b) -> np.ndarray:
        return self.add_array(a, self.neg_array(b))

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.p
        p, m, mod = self.p, self.m, self.modulus
        da, db = np.broadcast_arrays(self._split(a), self._split(b))
        prod = np.zeros(da.shape[:-1] + (2 * m - 1,), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                prod[..., i + j] += da[..., i] * db[..., j]
        prod %= p
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[..., k]
            for i in range(m):
                prod[..., k - m + i] -= c * mod[i]
            prod %= p
        return self._join(prod[..., :m])

    def pow_array(self, a, e: int) -> np.ndarray:
        if e < 0:
            raise ValueError("negative exponent; use inv first")
        base = np.asarray(a, dtype=np.int64)
        result = np.ones_like(base)
        while e:
            if e & 1:
                result = self.mul_array(result, base)
            base = self.mul_array(base, base)
            e >>= 1
        return result

    def inv_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.pow_array(a, self.q - 2)

    # element wrapper
    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # derived data, computed once per field
    @cached_property
    def primitive_element(self) -> int:
        order = self.q - 1
        cofactors = [order // r for r in factorize(order)] if order > 1 else []
        for g in range(1, self.q):
            if all(self.pow(g, c) != 1 for c in cofactors):
                return g
        raise AssertionError("multiplicative group has no generator")

    @cached_property
    def qr_powers(self) -> tuple[int, ...]:
        """alpha, alpha^2, ..., alpha^((q-1)/2) = 1 for alpha the square of the least primitive element."""
        alpha = self.mul(self.primitive_element, self.primitive_element)
        out, x = [], 1
        for _ in range((self.q - 1) // 2):
            x = self.mul(x, alpha)
            out.append(x)
        return tuple(out)

    @cached_property
    def residue_table(self) -> np.ndarray:
        """int8 table indexed by encoding: 1 for QR, -1 for NQR, 0 at zero."""
        table = np.full(self.q, -1, dtype=np.int8)
        table[0] = 0
        table[list(self.qr_powers)] = 1
        return table

    @cached_property
    def inverse_table(self) -> np.ndarray:
        """Multiplicative inverses indexed by encoding; entry 0 is 0."""
        table = np.zeros(self.q, dtype=np.int64)
        table[1:] = self.inv_array(np.arange(1, self.q))
        return table


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec = field(repr=False)
    value: int

    def __post_init__(self):
        if not isinstance(self.value, (int, np.integer)):
            raise TypeError(f"field elements are integers, got {type(self.value).__name__}")
        object.__setattr__(self, "value", int(self.value))
        self.field._check(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine elements of F_{self.field.q} and F_{other.field.q}")
            return other.value
        if isinstance(other, int):
            # an integer n acts as n * 1, i.e. lands in the prime subfield
            return other % self.field.p
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(self.field, v)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __pow__(self, e: int):
        if e < 0:
            return self._wrap(self.field.pow(self.field.inv(self.value), -e))
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0


def make_field(p: int, m: int = 1) -> FieldSpec:
    """Build F_{p^m} with the lexicographically least monic irreducible modulus."""
    if not isinstance(p, int) or not isinstance(m, int):
        raise FieldError("p and m must be integers")
    if m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m}")
    if p == 2:
        raise FieldError("characteristic 2 is not supported")
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    q = p**m
    if q > MAX_ORDER:
        raise FieldError(f"q = {p}^{m} exceeds the supported bound {MAX_ORDER}")
    return FieldSpec(p, m, q, least_irreducible(p, m))


def field_of_order(q: int) -> FieldSpec:
    p, m = prime_power(q)
    return make_field(p, m)


def least_primitive_element(F: FieldSpec) -> int:
    return F.primitive_element


def is_quadratic_residue(F: FieldSpec, x: int) -> bool:
    """Euler's criterion."""
    F._check(x)
    if x == 0:
        raise FieldError("0 is neither a residue nor a non-residue")
    r = F.pow(x, (F.q - 1) // 2)
    if r == 1:
        return True
    if r == F.neg(1):
        return False
    raise AssertionError(f"Euler criterion gave {r} for {x}")


def residue_sets(F: FieldSpec) -> tuple[frozenset[int], frozenset[int]]:
    """(QR, NQR) as sets of encodings; QR is the set of even powers of the least primitive element."""
    table = F.residue_table
    qr = frozenset(np.flatnonzero(table == 1).tolist())
    nqr = frozenset(np.flatnonzero(table == -1).tolist())
    return qr, nqr
