"""Exact coefficient fields: arbitrary-precision rationals and prime fields.

A :class:`FieldSpec` names the field a computation runs over and provides
element-level arithmetic.  Rational elements are :class:`fractions.Fraction`
(plain ``int`` accepted everywhere), prime-field elements are ints in
``[0, p)``.  Primes are capped so the vectorised elimination kernel can
multiply two residues inside int64 without overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import BadPrimeError, FieldError

# (p - 1)^2 must stay below 2^63 for the int64 row updates.
MAX_PRIME = 3037000500

# Primes >= 2^31 used for the default dual-prime cross-check of large runs.
DEFAULT_CHECK_PRIMES = (2147483659, 2147483693)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for everything below 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n += 1 + (n % 2 == 1)
    if n <= 2:
        return 2
    while not is_prime(n):
        n += 2
    return n


def prime_pool(start: int = 2 ** 31):
    """Deterministic stream of word-size primes for internal certification."""
    p = start - 1
    while True:
        p = next_prime(p)
        if p > MAX_PRIME:
            p = next_prime(5)  # wrap; never reached in practice
        yield p


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field of a computation.

    ``prime is None`` means the rationals; otherwise arithmetic is modulo
    ``prime``.  Primes must exceed 3 (family coefficients carry powers of 2
    and 3 in denominators) and fit the elimination kernel's overflow bound.
    """

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None:
            p = self.prime
            if not isinstance(p, int) or p <= 3:
                raise FieldError(f"prime must be an integer > 3, got {p!r}")
            if p > MAX_PRIME:
                raise FieldError(f"prime {p} exceeds the supported bound {MAX_PRIME}")
            if not is_prime(p):
                raise FieldError(f"{p} is not prime")

    @property
    def is_rationals(self) -> bool:
        return self.prime is None

    @property
    def kind(self) -> str:
        return "rationals" if self.prime is None else "prime_field"

    def __str__(self):
        return "QQ" if self.prime is None else f"GF({self.prime})"

    # -- element arithmetic -------------------------------------------------

    def zero(self):
        return 0 if self.prime else Fraction(0)

    def one(self):
        return 1 if self.prime else Fraction(1)

    def from_int(self, n: int):
        return n % self.prime if self.prime else Fraction(n)

    def from_fraction(self, q) -> "Fraction | int":
        """Coerce a rational into this field; bad primes are rejected."""
        q = Fraction(q)
        if self.prime is None:
            return q
        p = self.prime
        den = q.denominator % p
        if den == 0:
            raise BadPrimeError(f"prime {p} divides denominator of {q}")
        return q.numerator % p * pow(den, p - 2, p) % p

    def add(self, a, b):
        return (a + b) % self.prime if self.prime else a + b

    def sub(self, a, b):
        return (a - b) % self.prime if self.prime else a - b

    def mul(self, a, b):
        return a * b % self.prime if self.prime else a * b

    def neg(self, a):
        return -a % self.prime if self.prime else -a

    def inv(self, a):
        if self.prime:
            if a % self.prime == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, self.prime - 2, self.prime)
        return 1 / Fraction(a)

    def mul_int(self, a, n: int):
        """a times a plain integer (derivative exponents etc.)."""
        return a * n % self.prime if self.prime else a * n

    def is_zero(self, a) -> bool:
        return (a % self.prime == 0) if self.prime else a == 0


RATIONALS = FieldSpec()


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(prime=p)


def parse_field_flag(text: str) -> FieldSpec:
    """CLI field flag: ``rat`` or ``fp:<prime>``."""
    if text == "rat":
        return RATIONALS
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise FieldError(f"malformed field flag {text!r}") from None
        return prime_field(p)
    raise FieldError(f"unknown field flag {text!r}; expected 'rat' or 'fp:<prime>'")


# -- modular reconstruction helpers ----------------------------------------


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Residue mod m1*m2 matching r1 mod m1 and r2 mod m2 (coprime moduli)."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return (r1 + m1 * t) % (m1 * m2)


def rational_reconstruct(u: int, m: int) -> Fraction | None:
    """Unique n/d with u*d = n mod m, |n| <= B, 0 < d <= B for B = sqrt(m/2).

    Returns None when no such fraction exists (modulus still too small).
    """
    u %= m
    bound = isqrt(m // 2)
    if u <= bound:
        return Fraction(u)
    r0, r1 = m, u
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    d = abs(s1)
    if d == 0 or d > bound or gcd(r1, d) != 1:
        return None
    num = r1 if s1 > 0 else -r1
    if gcd(d, m) != 1:
        return None
    return Fraction(num, d)
