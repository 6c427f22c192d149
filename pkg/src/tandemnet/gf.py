"""Finite field GF(q) arithmetic on canonical integer element labels.

Elements of GF(q) are represented by the integers 0..q-1.  For a prime
field this is plain modular arithmetic.  For q = p^m the integer j is
read base p, and its digits (low first) are the coefficients of a
polynomial over GF(p); multiplication reduces modulo a fixed irreducible
polynomial from IRREDUCIBLE_POLYS, so element labels are stable across
runs and machines.

The canonical element ordering is by integer label: the j-th element
(1-indexed) is the integer j-1.  In particular element 0 is the additive
identity and element 1 the multiplicative identity.
"""

from __future__ import annotations

from functools import lru_cache

# Smallest monic irreducible polynomial of degree m over GF(p), encoded as
# sum_k c_k p^k (including the leading coefficient 1).  Covers all prime
# powers p^m <= 4096 with m >= 2.
IRREDUCIBLE_POLYS = {
    (2, 2): 7,
    (2, 3): 11,
    (2, 4): 19,
    (2, 5): 37,
    (2, 6): 67,
    (2, 7): 131,
    (2, 8): 283,
    (2, 9): 515,
    (2, 10): 1033,
    (2, 11): 2053,
    (2, 12): 4105,
    (3, 2): 10,
    (3, 3): 34,
    (3, 4): 86,
    (3, 5): 250,
    (3, 6): 734,
    (3, 7): 2198,
    (5, 2): 27,
    (5, 3): 131,
    (5, 4): 627,
    (5, 5): 3146,
    (7, 2): 50,
    (7, 3): 345,
    (7, 4): 2409,
    (11, 2): 122,
    (11, 3): 1346,
    (13, 2): 171,
    (13, 3): 2199,
    (17, 2): 292,
    (19, 2): 362,
    (23, 2): 530,
    (29, 2): 843,
    (31, 2): 962,
    (37, 2): 1371,
    (41, 2): 1684,
    (43, 2): 1850,
    (47, 2): 2210,
    (53, 2): 2811,
    (59, 2): 3482,
    (61, 2): 3723,
}

# Cutoff below which exp/log tables are built for O(1) multiplication.
_TABLE_LIMIT = 4096


def _factor_prime_power(q: int):
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    p = None
    for cand in range(2, q + 1):
        if q % cand == 0:
            p = cand
            break
    m = 0
    n = q
    while n % p == 0:
        n //= p
        m += 1
    if n != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


class Field:
    """The finite field with q elements, q a prime power."""

    def __init__(self, q: int):
        p, m = _factor_prime_power(q)
        self.order = q
        self.char = p
        self.degree = m
        if m > 1:
            try:
                self._modulus = IRREDUCIBLE_POLYS[(p, m)]
            except KeyError:
                raise ValueError(
                    f"no irreducible polynomial on record for GF({p}^{m})"
                ) from None
        else:
            self._modulus = None
        self._exp = None
        self._log = None
        if m > 1 and q <= _TABLE_LIMIT:
            self._build_tables()

    # -- representation helpers ------------------------------------------

    def _digits(self, a: int):
        p = self.char
        out = []
        for _ in range(self.degree):
            out.append(a % p)
            a //= p
        return out

    def _undigits(self, ds):
        out = 0
        for c in reversed(ds):
            out = out * self.char + c
        return out

    def _check(self, a: int):
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of GF({self.order})")
        return a

    @property
    def elements(self):
        return range(self.order)

    def element(self, j: int) -> int:
        """The j-th element (1-indexed) under the canonical ordering."""
        if not 1 <= j <= self.order:
            raise ValueError(f"element index {j} out of range for GF({self.order})")
        return j - 1

    # -- arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        self._check(a), self._check(b)
        if self.degree == 1:
            return (a + b) % self.char
        p = self.char
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        self._check(a)
        if self.degree == 1:
            return (-a) % self.char
        p = self.char
        return self._undigits([(-x) % p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a), self._check(b)
        if self.degree == 1:
            return (a * b) % self.char
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._polymul(a, b)

    def _polymul(self, a: int, b: int) -> int:
        p, m = self.char, self.degree
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce modulo the irreducible polynomial
        mod = []
        e = self._modulus
        while e:
            mod.append(e % p)
            e //= p
        for i in range(len(prod) - 1, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(m + 1):
                    k = i - m + j
                    prod[k] = (prod[k] - c * mod[j]) % p
        return self._undigits(prod[:m])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.order})")
        if self._exp is not None and self.degree > 1:
            return self._exp[(self.order - 1) - self._log[a]]
        if self.degree == 1:
            return pow(a, self.char - 2, self.char)
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- multiplicative tables -------------------------------------------

    def _raw_mul(self, a, b):
        if self.degree == 1:
            return (a * b) % self.char
        return self._polymul(a, b)

    def _build_tables(self):
        q = self.order
        for g in range(2, q):
            seen = [False] * q
            cur = 1
            exp = []
            ok = True
            for _ in range(q - 1):
                if seen[cur]:
                    ok = False
                    break
                seen[cur] = True
                exp.append(cur)
                cur = self._raw_mul(cur, g)
            if ok and cur == 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                self._exp = exp + exp  # avoid a mod in mul
                self._log = log
                self.generator = g
                return
        raise AssertionError(f"no primitive element found in GF({q})")

    def __eq__(self, other):
        return isinstance(other, Field) and other.order == self.order

    def __hash__(self):
        return hash(("Field", self.order))

    def __repr__(self):
        return f"Field({self.order})"


@lru_cache(maxsize=None)
def field(q: int) -> Field:
    """Cached Field constructor."""
    return Field(q)
