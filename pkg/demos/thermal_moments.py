"""Boltzmann-weighted moments of the six unbounded systems.

The thermal inner product makes the traces of the unbounded systems
finite.  The script shows three classic outcomes at 50-digit precision:
the harmonic oscillator's moments are the pure powers 2^(2m) at every
temperature, Meixner/Charlier moments are constant in m, and the
radial oscillator's moments form the geometric sequence 16^(m-1) mu_2.
Each series is truncated by the certified geometric tail rule.

Usage:
    python3 demos/thermal_moments.py
"""

import mpmath

from krylov_exact import Context, make_system, moments_closed_thermal

ctx = Context("bigreal", 50)

print("=" * 72)
print("harmonic oscillator: mu_2m = 2^(2m), independent of temperature")
print("=" * 72)
spec = make_system("hermite", None, {}, ctx)
for beta in ("1/2", "1", "2"):
    t = moments_closed_thermal(spec, K=6, beta=beta, tail_tol="1e-38")
    devs = max(abs(t.mu(2 * m) - 4**m) / 4**m for m in range(1, 7))
    print(
        f"beta = {beta:>3s}: n_max = {t.truncation.n_max:3d}, "
        f"certified tail < {mpmath.nstr(t.truncation.tail_bound, 3)}, "
        f"max |mu_2m/4^m - 1| = {mpmath.nstr(devs, 3)}"
    )

print()
print("=" * 72)
print("Meixner and Charlier: all even moments equal")
print("=" * 72)
for name, params in (("meixner", {"c": "1/2", "b": "1"}), ("charlier", {"a": "1"})):
    spec = make_system(name, None, params, ctx)
    t = moments_closed_thermal(spec, K=6, beta="1")
    ratios = [mpmath.nstr(t.mu(2 * m) / t.mu(2), 12) for m in range(1, 7)]
    print(f"{name:10s} mu_2m / mu_2 = {ratios}")

print()
print("=" * 72)
print("radial oscillator: geometric moments 16^(m-1) mu_2")
print("=" * 72)
spec = make_system("laguerre", None, {"g": "3/2"}, ctx)
t = moments_closed_thermal(spec, K=6, beta="1")
for m in range(1, 7):
    print(f"m = {m}: mu_2m / (16^(m-1) mu_2) = {mpmath.nstr(t.mu(2*m) / t.mu(2) / 16**(m-1), 20)}")
