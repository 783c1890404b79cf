"""Exact rational scalars.

Everything in this package computes over an exact characteristic-zero
field; the default (and only shipped) field is the rationals.  gmpy2's
mpq is used when available because the large elimination jobs are an
order of magnitude faster with it; plain fractions.Fraction is a
drop-in fallback.

Rationals are serialized as canonical strings "p" or "p/q" with q > 0;
no floating point value ever enters or leaves this layer.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq, mpz as _mpz

    def Q(a=0, b=None):
        """Build an exact rational from ints, strings or another rational."""
        if b is None:
            return _mpq(a)
        return _mpq(a, b)

    def is_rational(x) -> bool:
        return isinstance(x, type(_mpq(0)))

    def numer(x):
        return int(x.numerator)

    def denom(x):
        return int(x.denominator)

    _BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _mpq

    def Q(a=0, b=None):
        if b is None:
            if isinstance(a, str):
                return _mpq(a)
            return _mpq(a)
        return _mpq(a, b)

    def is_rational(x) -> bool:
        return isinstance(x, _mpq)

    def numer(x):
        return x.numerator

    def denom(x):
        return x.denominator

    _BACKEND = "fractions"

QZERO = Q(0)
QONE = Q(1)


def rat_str(x) -> str:
    """Canonical string form: "p" for integers, "p/q" otherwise, q > 0."""
    x = Q(x)
    n, d = numer(x), denom(x)
    if d == 1:
        return str(n)
    return "%d/%d" % (n, d)


def parse_rat(s):
    """Parse "p" or "p/q" (whitespace tolerated).  Raises ValueError on junk."""
    if isinstance(s, int):
        return Q(s)
    if not isinstance(s, str):
        raise ValueError("rational must be an int or a 'p/q' string, got %r" % (s,))
    t = s.strip()
    if "/" in t:
        p, q = t.split("/", 1)
        num, den = int(p.strip()), int(q.strip())
        if den == 0:
            raise ValueError("zero denominator in %r" % s)
        return Q(num, den)
    return Q(int(t))


def sign(x) -> int:
    """-1, 0 or +1.  Requires the ordered-field structure of the rationals."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = int(n) ** 0 if n == 0 else None
    import math

    r = math.isqrt(int(n))
    return r if r * r == n else None


def sqrt_exact(x):
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Q(x)
    if x < 0:
        return None
    rn = _isqrt_exact(numer(x))
    if rn is None:
        return None
    rd = _isqrt_exact(denom(x))
    if rd is None:
        return None
    return Q(rn, rd)
