"""Exact rational scalars.

Everything in this package computes over exact rationals; there is no
floating point anywhere. gmpy2.mpq is used when available (markedly faster
in the elimination and series kernels), with fractions.Fraction as the
drop-in fallback. Both normalize to lowest terms with positive denominator
and print identically, so all results and serializations agree bit for bit
across the two backends.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Q

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def rational(value) -> "Q":
    """Coerce an int, string like '-3/4', or rational to the scalar type."""
    if isinstance(value, str):
        return Q(value.strip())
    return Q(value)


def format_rational(q) -> str:
    """Canonical text form: 'p' or 'p/q' in lowest terms."""
    return str(q)
