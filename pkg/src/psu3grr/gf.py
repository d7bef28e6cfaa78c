"""Exact arithmetic in the field tower GF(p) < GF(q) < GF(q^2), q = p^f.

Only the top field GF(q^2) is materialised.  Its elements are residues of
polynomials over GF(p) modulo a fixed monic irreducible polynomial of degree
2f, stored as coefficient vectors (c0, c1, ..., c_{2f-1}) low degree first.
The subfield GF(q) is the fixed field of the Frobenius power x -> x^(p^f);
membership is tested, never represented separately.

Determinism rules used throughout the package:
  * the modulus is the lexicographically smallest monic irreducible
    polynomial of degree 2f, comparing coefficient vectors low degree first;
  * elements are enumerated in lexicographic order of their coefficient
    vectors, again comparing the constant coefficient first.  The element
    index is the rank in that order, so "first element satisfying X" always
    means "smallest index satisfying X".

Fields with at most TABLE_LIMIT elements (every field this package needs)
get full addition/multiplication lookup tables plus discrete log/antilog
tables, so arithmetic is O(1) dictionary-free indexing.  Larger fields fall
back to direct polynomial arithmetic and stay usable, just slower.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

# Full size^2 lookup tables below this many elements; covers q <= 32.
TABLE_LIMIT = 1100
# Hard ceiling on |GF(q^2)|; beyond this we refuse to build the field.
SIZE_LIMIT = 1 << 20


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


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (n is small here)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(p).  Polynomials are lists of ints in
# [0, p), low degree first, with trailing zeros trimmed ([] is zero).
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * mi) % p
        _trim(a)
    return a


def _poly_mulmod(a, b, m, p):
    return _poly_mod(_poly_mul(a, b, p), m, p)


def _poly_powmod(a, e, m, p):
    result = [1]
    base = _poly_mod(list(a), m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _is_irreducible(poly, p):
    """Deterministic irreducibility test for a monic poly over GF(p).

    poly is irreducible of degree d iff x^(p^d) == x (mod poly) and
    gcd(x^(p^(d/r)) - x, poly) = 1 for every prime r dividing d.
    """
    d = len(poly) - 1
    if d < 1 or poly[0] == 0:
        return d == 1 and poly[0] != 0 or False
    x = [0, 1]
    xq = _poly_powmod(x, p ** d, poly, p)
    diff = _trim([(a - b) % p for a, b in itertools.zip_longest(xq, x, fillvalue=0)])
    if diff:
        return False
    for r in factorize(d):
        xr = _poly_powmod(x, p ** (d // r), poly, p)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(xr, x, fillvalue=0)])
        g = _poly_gcd(poly, diff, p)
        if len(g) - 1 > 0:
            return False
    return True


def smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of the given degree.

    Coefficient vectors (c0, ..., c_{degree-1}) are compared low degree
    first; the leading coefficient is fixed to 1.  Returns the full
    coefficient tuple (c0, ..., c_{degree-1}, 1).
    """
    for tail in itertools.product(range(p), repeat=degree):
        poly = list(tail) + [1]
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@functools.lru_cache(maxsize=None)
def field(p: int, f: int) -> "Field":
    """Cached field constructor; the canonical way to obtain a Field."""
    return Field(p, f)


class Field:
    """GF(p^(2f)) with its distinguished GF(p^f) subfield.

    Do not instantiate directly in normal use; go through field(p, f) so
    that element operations between equal fields share one object.
    """

    def __init__(self, p: int, f: int, build_tables: bool | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if f < 1:
            raise ValueError(f"f = {f} must be a positive integer")
        self.p = p
        self.f = f
        self.q = p ** f
        self.ext_degree = 2 * f
        self.size = p ** (2 * f)
        if self.size > SIZE_LIMIT:
            raise ValueError(
                f"GF({p}^{2 * f}) has {self.size} elements, above the "
                f"supported bound {SIZE_LIMIT}")
        self.modulus = smallest_irreducible(p, 2 * f)
        # place value of coefficient i in the element index (c0 weighs most,
        # making index order equal to lexicographic coefficient order)
        self._place = tuple(p ** (2 * f - 1 - i) for i in range(2 * f))
        self._mult_order = self.size - 1
        self._order_factors = factorize(self._mult_order)

        if build_tables is None:
            build_tables = self.size <= TABLE_LIMIT
        self.has_tables = build_tables
        if build_tables:
            self._build_tables()
            self.add_index = self._add_index_table
            self.mul_index = self._mul_index_table
            self.neg_index = self._neg_index_table
            self.inv_index = self._inv_index_table
        else:
            self.add_index = self._add_index_poly
            self.mul_index = self._mul_index_poly
            self.neg_index = self._neg_index_poly
            self.inv_index = self._inv_index_poly

        self.zero = FieldElem(self, 0)
        self.one = self.from_int(1)

    # -- encoding ----------------------------------------------------------

    def encode(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.ext_degree:
            raise ValueError("coefficient vector too long")
        coeffs += [0] * (self.ext_degree - len(coeffs))
        return sum((c % self.p) * w for c, w in zip(coeffs, self._place))

    def decode(self, index: int) -> tuple[int, ...]:
        out = []
        for w in self._place:
            out.append(index // w)
            index %= w
        return tuple(out)

    # -- constructors ------------------------------------------------------

    def from_index(self, index: int) -> "FieldElem":
        if not 0 <= index < self.size:
            raise ValueError("element index out of range")
        return FieldElem(self, index)

    def from_coeffs(self, coeffs) -> "FieldElem":
        return FieldElem(self, self.encode(coeffs))

    def from_int(self, n: int) -> "FieldElem":
        """Image of the integer n under the prime-field embedding."""
        return self.from_coeffs([n % self.p])

    def from_str(self, s: str) -> "FieldElem":
        return self.from_coeffs([int(c) for c in s.split(",")])

    def elements(self):
        """All elements in enumeration order."""
        for i in range(self.size):
            yield FieldElem(self, i)

    def nonzero_elements(self):
        for i in range(1, self.size):
            yield FieldElem(self, i)

    # -- table construction --------------------------------------------------

    def _build_tables(self):
        p, n, size = self.p, self._mult_order, self.size
        # digit matrix: row i = coefficient vector of element index i
        idx = np.arange(size, dtype=np.int64)
        digits = np.empty((size, self.ext_degree), dtype=np.int64)
        for i, w in enumerate(self._place):
            digits[:, i] = (idx // w) % p

        gen_idx = self._find_generator()
        exp = np.empty(n, dtype=np.int64)
        exp[0] = self.encode([1])
        g_poly = list(self.decode(gen_idx))
        cur = [1]
        modulus = list(self.modulus)
        for k in range(1, n):
            cur = _poly_mulmod(cur, g_poly, modulus, p)
            exp[k] = self.encode(cur)
        log = np.full(size, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)

        place = np.array(self._place, dtype=np.int64)
        add_rows = []
        mul_rows = []
        zero_row = [0] * size
        for i in range(size):
            add_rows.append((((digits[i] + digits) % p) @ place).tolist())
            if i == 0:
                mul_rows.append(list(zero_row))
            else:
                row = exp[(log[i] + log[1:]) % n]
                mul_rows.append([0] + row.tolist())
        self._add = add_rows
        self._mul = mul_rows
        self._neg = (((-digits) % p) @ place).tolist()
        inv = np.zeros(size, dtype=np.int64)
        inv[exp] = exp[(-np.arange(n)) % n]
        self._inv = inv.tolist()
        self._log = log.tolist()
        self._exp = exp.tolist()
        # numpy copies for vectorised users (point actions in grouporder)
        self.add_np = np.array(add_rows, dtype=np.int32)
        self.mul_np = np.array(mul_rows, dtype=np.int32)
        self.inv_np = inv.astype(np.int32)
        powq = np.zeros(size, dtype=np.int64)
        powq[exp] = exp[(np.arange(n) * self.q) % n]
        powq[self.encode([1])] = self.encode([1])
        self.powq_np = powq.astype(np.int32)
        self._powq = powq.tolist()

    def _find_generator(self) -> int:
        """Index of the first multiplicative generator in enumeration order."""
        n = self._mult_order
        checks = [n // r for r in self._order_factors]
        modulus = list(self.modulus)
        for i in range(1, self.size):
            a = list(self.decode(i))
            if all(_poly_powmod(a, e, modulus, self.p) != [1] for e in checks):
                return i
        raise AssertionError("no multiplicative generator found")  # unreachable

    # -- index arithmetic (table tier) --------------------------------------

    def _add_index_table(self, i, j):
        return self._add[i][j]

    def _mul_index_table(self, i, j):
        return self._mul[i][j]

    def _neg_index_table(self, i):
        return self._neg[i]

    def _inv_index_table(self, i):
        if i == 0:
            raise ZeroDivisionError("inversion of the zero field element")
        return self._inv[i]

    # -- index arithmetic (polynomial tier) ----------------------------------

    def _add_index_poly(self, i, j):
        p = self.p
        a, b = self.decode(i), self.decode(j)
        return self.encode([(x + y) % p for x, y in zip(a, b)])

    def _mul_index_poly(self, i, j):
        if i == 0 or j == 0:
            return 0
        prod = _poly_mulmod(list(self.decode(i)), list(self.decode(j)),
                            list(self.modulus), self.p)
        return self.encode(prod)

    def _neg_index_poly(self, i):
        return self.encode([(-c) % self.p for c in self.decode(i)])

    def _inv_index_poly(self, i):
        if i == 0:
            raise ZeroDivisionError("inversion of the zero field element")
        return self.pow_index(i, self._mult_order - 1)

    # -- shared index helpers ------------------------------------------------

    def pow_index(self, i, e):
        if i == 0:
            if e == 0:
                return self.encode([1])
            if e < 0:
                raise ZeroDivisionError("inversion of the zero field element")
            return 0
        if self.has_tables:
            k = (self._log[i] * e) % self._mult_order
            return self._exp[k]
        if e < 0:
            i = self.inv_index(i)
            e = -e
        result = _poly_powmod(list(self.decode(i)), e, list(self.modulus), self.p)
        return self.encode(result)

    def frob_index(self, i, e):
        """Index of x^(p^e) for x of index i."""
        return self.pow_index(i, self.p ** (e % self.ext_degree))

    def order_index(self, i):
        if i == 0:
            raise ValueError("the zero element has no multiplicative order")
        n = self._mult_order
        if self.has_tables:
            from math import gcd
            return n // gcd(n, self._log[i])
        order = n
        for r, mult in self._order_factors.items():
            for _ in range(mult):
                if self.pow_index(i, order // r) == self.encode([1]):
                    order //= r
                else:
                    break
        return order

    # -- serialization -------------------------------------------------------

    def params_str(self) -> str:
        """Serialize as "p,f,m0,m1,...,m_{2f}" (modulus low degree first)."""
        return ",".join(str(v) for v in (self.p, self.f, *self.modulus))

    def __repr__(self):
        return f"Field(GF({self.p}^{self.ext_degree}), q={self.q})"


def field_from_params_str(s: str) -> Field:
    """Inverse of Field.params_str; the modulus is validated, not trusted."""
    vals = [int(v) for v in s.split(",")]
    p, f, modulus = vals[0], vals[1], tuple(vals[2:])
    fld = field(p, f)
    if fld.modulus != modulus:
        raise ValueError("modulus mismatch: not the canonical field modulus")
    return fld


class FieldElem:
    """Immutable element of a Field, identified by its enumeration index."""

    __slots__ = ("field", "index")

    def __init__(self, field: Field, index: int):
        self.field = field
        self.index = index

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.decode(self.index)

    def _check(self, other):
        if self.field is not other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.add_index(self.index, other.index))

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.add_index(
            self.index, self.field.neg_index(other.index)))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.mul_index(self.index, other.index))

    def __truediv__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.mul_index(
            self.index, self.field.inv_index(other.index)))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_index(self.index))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow_index(self.index, e))

    def inv(self):
        return FieldElem(self.field, self.field.inv_index(self.index))

    def frobenius(self, e: int):
        """x -> x^(p^e); e is taken modulo 2f."""
        return FieldElem(self.field, self.field.frob_index(self.index, e))

    def order(self) -> int:
        """Least n >= 1 with x^n = 1; divides q^2 - 1."""
        return self.field.order_index(self.index)

    def norm_trace(self):
        """(x * x^q, x + x^q): norm and trace down to the GF(q) subfield."""
        conj = self.frobenius(self.field.f)
        return self * conj, self + conj

    def in_subfield(self) -> bool:
        """True iff the element lies in GF(q), the fixed field of x -> x^q."""
        return self.field.frob_index(self.index, self.field.f) == self.index

    def is_zero(self) -> bool:
        return self.index == 0

    def __bool__(self):
        return self.index != 0

    def __eq__(self, other):
        return (isinstance(other, FieldElem) and self.field is other.field
                and self.index == other.index)

    def __hash__(self):
        return hash((id(self.field), self.index))

    def __lt__(self, other):
        self._check(other)
        return self.index < other.index

    def to_str(self) -> str:
        """Serialize as "c0,c1,...,c_{2f-1}" (low degree first)."""
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self):
        return f"<{self.to_str()} in GF({self.field.p}^{self.field.ext_degree})>"


def norm_trace_q(x: FieldElem):
    """Module-level alias for FieldElem.norm_trace."""
    return x.norm_trace()
