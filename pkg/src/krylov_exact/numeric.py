"""Scalar modes, tolerance policy, and elementary special values.

Two numeric modes cover everything in the package:

* ``exact``   -- rational arithmetic (gmpy2.mpq when available, otherwise
  fractions.Fraction).  Closed under field operations with no rounding,
  so equality tests are exact and zero detection is literal.
* ``bigreal`` -- arbitrary-precision floating point via mpmath, correctly
  rounded at the configured number of decimal digits (at least 30).

A :class:`Context` fixes the mode once; every public operation receives
values created through its context.  Values of foreign modes raise
:class:`~krylov_exact.errors.ModeError` instead of being promoted
silently (a machine float is always foreign).
"""

from __future__ import annotations

import numbers
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ModeError

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _rational = Fraction

EXACT = "exact"
BIGREAL = "bigreal"

#: Default number of decimal digits for bigreal contexts.  The q-system
#: moments reach dynamic ranges near 1e30 at desk scale, so 50 digits
#: keeps at least 20 guard digits.
DEFAULT_PRECISION = 50


def rational(p, q=1):
    """Exact rational from integers, a Fraction, or a 'p/q'/decimal string."""
    if isinstance(p, str):
        p = Fraction(p)
    if isinstance(p, Fraction):
        return _rational(p.numerator, p.denominator) * _rational(1, q)
    return _rational(p, q)


def exact_sqrt(x):
    """Rational square root of ``x`` if one exists, else None.

    Negative input raises ValueError; callers decide which domain error
    that maps to.
    """
    if x < 0:
        raise ValueError("square root of negative value")
    r = rational(x)
    num, den = int(r.numerator), int(r.denominator)
    sn = _isqrt(num)
    sd = _isqrt(den)
    if sn * sn == num and sd * sd == den:
        return rational(sn, sd)
    return None


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


@dataclass(frozen=True)
class Tolerance:
    """Zero-declaration and relative comparison thresholds.

    In exact mode both are exactly 0.  In bigreal mode the defaults scale
    as ``10**(-precision + 10)``: the absolute ``zero_eps`` feeds chain
    stop detection, the relative ``rel_eps`` feeds value comparisons.
    """

    zero_eps: object
    rel_eps: object

    @classmethod
    def for_mode(cls, mode: str, precision: int = DEFAULT_PRECISION) -> "Tolerance":
        if mode == EXACT:
            return cls(0, 0)
        with mp.workdps(precision):
            eps = mp.mpf(10) ** (-precision + 10)
        return cls(eps, eps)


@dataclass(frozen=True)
class Context:
    """Fixes the numeric mode (and precision) for one computation."""

    mode: str = EXACT
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.mode not in (EXACT, BIGREAL):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == BIGREAL:
            if self.precision < 30:
                raise ValueError("bigreal precision must be at least 30 digits")
            # mpmath rounds at the *global* working precision, so keep it
            # at least as high as any live context; explicit work() scopes
            # still pin exact printing and tolerance computations.
            if mp.dps < self.precision + 5:
                mp.dps = self.precision + 5

    # -- construction -------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.mode == EXACT

    def work(self):
        """mpmath working-precision scope; a no-op in exact mode.

        Bigreal computations run with five guard digits beyond the
        configured precision (the same floor applied globally), so every
        value in one context carries a single uniform precision and the
        decimal round trip is lossless.
        """
        if self.is_exact:
            return _null_scope()
        return mp.workdps(self.precision + 5)

    def num(self, v):
        """Coerce an int, rational, or string to this context's scalar type."""
        if isinstance(v, bool):
            raise ModeError("booleans are not scalars")
        if isinstance(v, float):
            raise ModeError(
                "machine floats are rejected; pass a string or rational instead"
            )
        if self.is_exact:
            if isinstance(v, (mpmath.mpf, mpmath.mpc)):
                raise ModeError("bigreal value in exact context")
            if isinstance(v, str):
                return rational(v)
            # plain ints are normalised to the rational type so that
            # int/int can never fall back to float division
            if isinstance(v, (int, numbers.Rational)):
                return rational(v.numerator, v.denominator)
            raise ModeError(f"cannot interpret {type(v).__name__} as exact rational")
        with self.work():
            if isinstance(v, str):
                return self._parse_big(v)
            if isinstance(v, int):
                return mp.mpf(v)
            if isinstance(v, numbers.Rational):
                return mp.mpf(v.numerator) / mp.mpf(v.denominator)
            if isinstance(v, (mpmath.mpf, mpmath.mpc)):
                return v
        raise ModeError(f"cannot interpret {type(v).__name__} as bigreal")

    def _parse_big(self, s: str):
        s = s.strip()
        if "/" in s:
            p, q = s.split("/")
            return mp.mpf(int(p)) / mp.mpf(int(q))
        return mp.mpf(s)

    def parse(self, s: str):
        """Parse 'p/q' (exact) or decimal/'p/q' (bigreal) string."""
        return self.num(s)

    def frac(self, p, q=1):
        """Literal fraction p/q in this context's type."""
        if self.is_exact:
            return rational(p, q)
        with self.work():
            return mp.mpf(p) / mp.mpf(q)

    @property
    def zero(self):
        return self.num(0)

    @property
    def one(self):
        return self.num(1)

    def fmt(self, x) -> str:
        """Print a scalar so that re-parsing recovers the value exactly."""
        if self.is_exact:
            r = rational(x)
            if r.denominator == 1:
                return str(r.numerator)
            return f"{r.numerator}/{r.denominator}"
        with self.work():
            if isinstance(x, mpmath.mpc):
                return f"({self.fmt(x.real)} {self.fmt(x.imag)}j)"
            # repr_dps digits guarantee a lossless decimal round trip
            digits = mpmath.libmp.repr_dps(mp.prec)
            return mp.nstr(mp.mpf(x), digits)

    def ensure(self, x):
        """Validate that ``x`` belongs to this context; return it unchanged."""
        if isinstance(x, bool) or isinstance(x, float):
            raise ModeError(f"foreign scalar {x!r}")
        if self.is_exact:
            if not isinstance(x, (int, numbers.Rational)):
                raise ModeError(f"{type(x).__name__} value in exact context")
        else:
            if not isinstance(x, (int, mpmath.mpf, mpmath.mpc, numbers.Rational)):
                raise ModeError(f"{type(x).__name__} value in bigreal context")
            if isinstance(x, numbers.Rational) and not isinstance(x, int):
                raise ModeError("exact rational value in bigreal context")
        return x

    # -- elementary functions -----------------------------------------

    def exp(self, x):
        """e**x; in exact mode only x = 0 is representable."""
        if self.is_exact:
            if x == 0:
                return self.one
            raise ModeError("exp of a nonzero argument is irrational; use bigreal")
        with self.work():
            return mp.exp(x)

    def sqrt(self, x):
        if self.is_exact:
            root = exact_sqrt(x)
            if root is None:
                raise ModeError(f"sqrt({x}) is irrational; use bigreal")
            return root
        with self.work():
            return mp.sqrt(x)

    def expj(self, x):
        """e**(i*x) as a complex value (bigreal only)."""
        if self.is_exact:
            raise ModeError("complex exponentials require bigreal mode")
        with self.work():
            return mp.exp(mp.mpc(0, 1) * x)

    # -- comparisons ---------------------------------------------------

    def default_tolerance(self) -> Tolerance:
        return Tolerance.for_mode(self.mode, self.precision)

    def is_zero(self, x, tol: Tolerance | None = None) -> bool:
        """Zero test: literal in exact mode, |x| <= zero_eps in bigreal."""
        if self.is_exact:
            return x == 0
        tol = tol or self.default_tolerance()
        with self.work():
            return abs(x) <= tol.zero_eps

    def close(self, x, y, tol: Tolerance | None = None) -> bool:
        """Equality up to rel_eps (relative to the larger magnitude)."""
        if self.is_exact:
            return x == y
        tol = tol or self.default_tolerance()
        with self.work():
            diff = abs(x - y)
            scale = max(abs(x), abs(y), mp.mpf(1))
            return diff <= tol.rel_eps * scale


def scalar_exp(ctx: Context, x):
    """Exponential through the context; see :meth:`Context.exp`."""
    return ctx.exp(x)


def is_zero(ctx: Context, x, tol: Tolerance | None = None) -> bool:
    """Zero test through the context; see :meth:`Context.is_zero`."""
    return ctx.is_zero(x, tol)


@contextmanager
def _null_scope():
    yield
