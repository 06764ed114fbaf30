"""Shared test data: valid rational parameter samples for every system.

The finite-system samples depend on N because several parameter ranges
do (Racah needs a > N + d, the q-Krawtchouk variants bound p by powers
of q).  Everything is kept as exact strings so both numeric modes parse
them without rounding.
"""

from fractions import Fraction

from krylov_exact import SystemKind

FINITE_KINDS = [k for k in SystemKind if k.is_finite]
THERMAL_KINDS = [k for k in SystemKind if not k.is_finite]


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def param_samples(kind: SystemKind, N: int) -> list[dict]:
    """Three valid exact parameter sets for the given finite system."""
    q = Fraction
    if kind is SystemKind.KRAWTCHOUK:
        return [{"p": "1/3"}, {"p": "1/2"}, {"p": "4/5"}]
    if kind is SystemKind.HAHN:
        return [{"a": "1", "b": "1"}, {"a": "1/2", "b": "2"}, {"a": "3", "b": "5/2"}]
    if kind is SystemKind.DUAL_HAHN:
        return [{"a": "1", "b": "2"}, {"a": "1/2", "b": "3"}, {"a": "2", "b": "2"}]
    if kind is SystemKind.RACAH:
        return [
            {"d": "1", "a": str(N + 2), "b": "3/2"},
            {"d": "1/2", "a": str(N + 1), "b": "5/4"},
            {"d": "2", "a": str(N + 3), "b": "5/2"},
        ]
    if kind is SystemKind.QUANTUM_Q_KRAWTCHOUK:
        return [
            {"q": "1/2", "p": _frac(q(3, 2) * q(1, 2) ** -N)},
            {"q": "1/3", "p": _frac(2 * q(1, 3) ** -N)},
            {"q": "2/5", "p": _frac(3 * q(2, 5) ** -N)},
        ]
    if kind is SystemKind.Q_KRAWTCHOUK:
        return [
            {"q": "1/2", "p": "2/3"},
            {"q": "1/3", "p": "1"},
            {"q": "3/5", "p": "5/2"},
        ]
    if kind is SystemKind.AFFINE_Q_KRAWTCHOUK:
        return [
            {"q": "1/2", "p": "3/2"},
            {"q": "1/3", "p": "2"},
            {"q": "2/5", "p": "1"},
        ]
    if kind in (SystemKind.Q_HAHN, SystemKind.DUAL_Q_HAHN):
        return [
            {"q": "1/2", "a": "1/2", "b": "1/3"},
            {"q": "1/3", "a": "1/4", "b": "1/2"},
            {"q": "2/5", "a": "2/3", "b": "1/5"},
        ]
    if kind is SystemKind.Q_RACAH:
        return [
            {"q": "1/2", "d": "1/2", "b": "1/2", "a": _frac(q(1, 2) ** (N + 2))},
            {"q": "1/2", "d": "1/2", "b": "3/4", "a": _frac(q(1, 2) ** (N + 1) / 3)},
            {"q": "2/5", "d": "1/2", "b": "1/2", "a": _frac(q(2, 5) ** N / 4)},
        ]
    raise ValueError(f"no samples for {kind}")
