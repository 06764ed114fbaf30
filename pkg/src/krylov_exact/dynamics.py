"""Closed-form Heisenberg dynamics and the Krylov complexity profile.

Everything here rests on the closure relation

    [H, [H, eta]] = eta R_0(H) + [H, eta] R_1(H) + R_{-1}(H)

with polynomial R_i of degree at most 2, 1, 2.  The catalog supplies
R_0 and R_1; R_{-1} is never tabulated and is reconstructed from the
matrix residual, then cross-checked against the diagonal identity
<n|eta|n> = -R_{-1}(E(n)) / R_0(E(n)).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import mpmath
import numpy as np

from .catalog import SystemSpec
from .errors import (
    ClosureViolated,
    ComplexAmplitude,
    DegenerateFrequencies,
    ModeError,
    R0Vanishing,
)
from .numeric import Context, Tolerance, exact_sqrt
from .operators import (
    InnerProduct,
    OperatorChain,
    OperatorPair,
    eig_symmetric,
    inner,
    liouville,
    matrix_exponential_conjugate,
    max_abs,
    solve_consistent,
    zeros,
    identity,
)


@dataclass
class ClosureData:
    """Closure polynomials plus the reconstructed R_{-1} diagonal."""

    r0: tuple
    r1: tuple
    rm1: tuple
    rm1_diag: list
    residual: object

    def r0_at(self, e):
        return _polyval(self.r0, e)

    def r1_at(self, e):
        return _polyval(self.r1, e)

    def rm1_at(self, e):
        return _polyval(self.rm1, e)


def _polyval(coeffs, e):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * e + c
    return acc


def _poly_of_h(coeffs, h, ctx: Context):
    """Evaluate a coefficient tuple on the Hamiltonian (1-D or matrix)."""
    if h.ndim == 1:
        out = np.empty(h.shape[0], dtype=object)
        for i, e in enumerate(h):
            out[i] = _polyval(coeffs, e)
        return out
    acc = zeros(h.shape[0], ctx)
    for i in range(h.shape[0]):
        acc[i, i] = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc @ h
        for i in range(h.shape[0]):
            acc[i, i] = acc[i, i] + c
    return acc


def _right_mul(v: np.ndarray, f, ctx: Context):
    """V * f(H) where f is diagonal (1-D) or a dense matrix."""
    if f.ndim == 1:
        out = np.empty_like(v)
        for b in range(v.shape[1]):
            out[:, b] = v[:, b] * f[b]
        return out
    return v @ f


def _add_diag(v: np.ndarray, d, ctx: Context, sign=1):
    out = np.array(v, dtype=object)
    if d.ndim == 1:
        for i in range(out.shape[0]):
            out[i, i] = out[i, i] + sign * d[i]
        return out
    return out + sign * d


def verify_closure(pair: OperatorPair, spec: SystemSpec | None = None, tol: Tolerance | None = None) -> ClosureData:
    """Reconstruct R_{-1} from the double-commutator residual.

    Computes M = L^2 eta - eta R_0(H) - (L eta) R_1(H), demands that it
    commute with H, fits it as a polynomial of H of degree at most 2,
    and returns the fitted diagonal.  A residual that fails either test
    raises :class:`~krylov_exact.errors.ClosureViolated`.
    """
    spec = spec or pair.spec
    if spec is None:
        raise ClosureViolated("closure data needs the system's R_0, R_1")
    ctx = pair.ctx
    tol = tol or ctx.default_tolerance()
    with ctx.work():
        r0 = tuple(spec.r0_coeffs)
        r1 = tuple(spec.r1_coeffs)
        l1 = liouville(pair.h, pair.eta)
        l2 = liouville(pair.h, l1)
        m = (
            l2
            - _right_mul(pair.eta, _poly_of_h(r0, pair.h, ctx), ctx)
            - _right_mul(l1, _poly_of_h(r1, pair.h, ctx), ctx)
        )
        dim = m.shape[0]
        scale = max(max_abs(m), ctx.one)
        comm = liouville(pair.h, m)
        worst = max_abs(comm)
        if (ctx.is_exact and worst != 0) or (not ctx.is_exact and worst > tol.rel_eps * scale * 10):
            raise ClosureViolated(f"residual does not commute with H (defect {ctx.fmt(worst)})")

        if pair.h.ndim == 1:
            # off-diagonal part must vanish; diagonal is R_{-1}(E(n))
            off = ctx.zero
            diag = []
            for i in range(dim):
                diag.append(m[i, i])
                for j in range(dim):
                    if i != j and abs(m[i, j]) > off:
                        off = abs(m[i, j])
            if (ctx.is_exact and off != 0) or (not ctx.is_exact and off > tol.rel_eps * scale * 10):
                raise ClosureViolated(f"residual off-diagonal {ctx.fmt(off)}")
            energies = list(pair.h)
        else:
            energies = [spec.energy(n) for n in range(dim)]
            diag = None

        # fit M = c0 + c1 H + c2 H^2
        if pair.h.ndim == 1:
            cols = []
            for k in range(3):
                col = np.array([e**k for e in energies], dtype=object)
                cols.append(col)
            coeffs = solve_consistent(cols, np.array(diag, dtype=object), ctx, tol)
        else:
            h2 = pair.h @ pair.h
            cols = [identity(dim, ctx), pair.h, h2]
            coeffs = solve_consistent(cols, m, ctx, tol)
        if coeffs is None:
            raise ClosureViolated("residual is not a degree-<=2 polynomial of H")
        rm1 = tuple(coeffs)
        rm1_diag = [_polyval(rm1, e) for e in energies]
        residual = worst
        return ClosureData(r0=r0, r1=r1, rm1=rm1, rm1_diag=rm1_diag, residual=residual)


def closure_diagonal_identity(closure: ClosureData, spec: SystemSpec, n: int, ctx: Context) -> bool:
    """Check -R_{-1}(E(n)) / R_0(E(n)) against the recurrence diagonal."""
    e = spec.energy(n)
    r0val = closure.r0_at(e)
    if r0val == 0:
        raise R0Vanishing(f"R_0(E({n})) = 0")
    return ctx.close(-closure.rm1_at(e) / r0val, spec.eta_diag(n))


def _alpha_at(closure: ClosureData, e, ctx: Context):
    """Roots of a^2 - R_1(e) a - R_0(e) = 0 with alpha_plus >= alpha_minus."""
    r1 = closure.r1_at(e)
    disc = r1 * r1 + 4 * closure.r0_at(e)
    if ctx.is_exact:
        root = exact_sqrt(disc) if disc >= 0 else None
        if root is None:
            raise ModeError("frequency discriminant is not a perfect square")
    else:
        if disc < 0:
            raise DegenerateFrequencies("negative discriminant on the spectrum")
        root = ctx.sqrt(disc)
    half = ctx.frac(1, 2)
    return (r1 + root) * half, (r1 - root) * half


def apply_liouville_power(pair: OperatorPair, closure: ClosureData, m: int) -> np.ndarray:
    """L^m eta through the closure coefficients, no commutators.

    In the energy basis the frequency power formulas are used literally;
    with a dense Hamiltonian the equivalent polynomial recurrence
    (division free) evaluates the same three coefficient functions.
    """
    ctx = pair.ctx
    if m == 0:
        return np.array(pair.eta, dtype=object)
    l1 = liouville(pair.h, pair.eta)
    if m == 1:
        return l1
    with ctx.work():
        if pair.h.ndim == 1:
            dim = pair.h.shape[0]
            a_m = np.empty(dim, dtype=object)
            b_m = np.empty(dim, dtype=object)
            c_m = np.empty(dim, dtype=object)
            for i, e in enumerate(pair.h):
                ap, am = _alpha_at(closure, e, ctx)
                diff = ap - am
                if diff == 0:
                    raise DegenerateFrequencies(f"alpha_+ = alpha_- at level {i}")
                powm1 = (ap ** (m - 1) - am ** (m - 1)) / diff
                powm = (ap**m - am**m) / diff
                a_m[i] = closure.r0_at(e) * powm1
                b_m[i] = powm
                c_m[i] = closure.rm1_at(e) * powm1
            out = _right_mul(pair.eta, a_m, ctx) + _right_mul(l1, b_m, ctx)
            return _add_diag(out, c_m, ctx)
        # dense H: A_{k+1} = R0 B_k, B_{k+1} = A_k + R1 B_k, C_{k+1} = Rm1 B_k
        dim = pair.h.shape[0]
        r0m = _poly_of_h(closure.r0, pair.h, ctx)
        r1m = _poly_of_h(closure.r1, pair.h, ctx)
        rm1m = _poly_of_h(closure.rm1, pair.h, ctx)
        a_k = identity(dim, ctx)
        b_k = zeros(dim, ctx)
        c_k = zeros(dim, ctx)
        for _ in range(m):
            a_next = r0m @ b_k
            b_next = a_k + r1m @ b_k
            c_next = rm1m @ b_k
            a_k, b_k, c_k = a_next, b_next, c_next
        return pair.eta @ a_k + l1 @ b_k + c_k


def heisenberg_closed_form(pair: OperatorPair, closure: ClosureData, t) -> np.ndarray:
    """The exact Heisenberg operator exp(iHt) eta exp(-iHt), closed form.

    Evaluates, with every operator-valued function acting from the
    right,

        L eta * (e^{i a+ t} - e^{i a- t}) / (a+ - a-)
        - R^{-}(H) + (eta + R^{-}(H)) * (-a- e^{i a+ t} + a+ e^{i a- t}) / (a+ - a-)

    where a+- = alpha_+-(H) and R^- = R_{-1}(H)/R_0(H).  Bigreal only.
    """
    ctx = pair.ctx
    if ctx.is_exact:
        raise ModeError("Heisenberg evolution needs bigreal mode")
    tol = ctx.default_tolerance()
    with ctx.work():
        t = ctx.num(t)
        if pair.h.ndim == 1:
            energies = list(pair.h)
            to_matrix = None
        else:
            evals, q = eig_symmetric(pair.h, ctx)
            energies = list(evals)

            def to_matrix(vals):
                d = np.empty((len(energies), len(energies)), dtype=object)
                zero = ctx.num(0)
                for i in range(len(energies)):
                    for j in range(len(energies)):
                        d[i, j] = zero
                    d[i, i] = vals[i]
                return q @ d @ q.T

        gvals, fvals, rhovals = [], [], []
        for i, e in enumerate(energies):
            ap, am = _alpha_at(closure, e, ctx)
            diff = ap - am
            if abs(diff) <= tol.zero_eps:
                raise DegenerateFrequencies(f"alpha_+ = alpha_- at level {i}")
            r0val = closure.r0_at(e)
            if ctx.is_zero(r0val, tol):
                raise R0Vanishing(f"R_0 vanishes at spectral point {i}")
            ep = ctx.expj(ap * t)
            em = ctx.expj(am * t)
            gvals.append((ep - em) / diff)
            fvals.append((-am * ep + ap * em) / diff)
            rhovals.append(closure.rm1_at(e) / r0val)

        l1 = liouville(pair.h, pair.eta)
        if pair.h.ndim == 1:
            g = np.array(gvals, dtype=object)
            f = np.array(fvals, dtype=object)
            rho = np.array(rhovals, dtype=object)
            shifted = _add_diag(pair.eta, rho, ctx)
            out = _right_mul(l1, g, ctx) + _right_mul(shifted, f, ctx)
            return _add_diag(out, rho, ctx, sign=-1)
        g = to_matrix(gvals)
        f = to_matrix(fvals)
        rho = to_matrix(rhovals)
        return l1 @ g + (pair.eta + rho) @ f - rho


@dataclass
class KrylovProfile:
    """Amplitudes phi_n(t) on a time grid and the complexity K(t)."""

    times: list
    phi: list  # phi[i][n] at times[i]
    complexity: list
    ctx: Context
    meta: dict | None = None

    def sum_rule_defect(self, i: int):
        """|sum_n phi_n(t_i)^2 - 1|."""
        total = self.ctx.zero
        for v in self.phi[i]:
            total = total + v * v
        return abs(total - 1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        k = len(self.phi[0]) if self.phi else 0
        w.writerow(["t", "K"] + [f"phi_{n}" for n in range(k)])
        for t, ph, c in zip(self.times, self.phi, self.complexity):
            w.writerow(
                [self.ctx.fmt(t), self.ctx.fmt(c)] + [self.ctx.fmt(v) for v in ph]
            )
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "meta": self.meta or {},
            "times": [self.ctx.fmt(t) for t in self.times],
            "complexity": [self.ctx.fmt(c) for c in self.complexity],
            "phi": [[self.ctx.fmt(v) for v in row] for row in self.phi],
        }


def krylov_profile(
    chain: OperatorChain,
    pair: OperatorPair,
    ip: InnerProduct,
    times,
    meta: dict | None = None,
) -> KrylovProfile:
    """Amplitudes phi_n(t) = (i^n O_n, O(t)) and K(t) = sum n phi_n^2.

    O(t) is the exponential-conjugation oracle applied to O_0.  Each
    amplitude must be real up to tolerance; a larger imaginary residue
    signals a chain/inner-product mismatch and raises
    :class:`~krylov_exact.errors.ComplexAmplitude`.
    """
    ctx = pair.ctx
    if ctx.is_exact:
        raise ModeError("profiles need bigreal mode")
    tol = ctx.default_tolerance()
    with ctx.work():
        o0 = chain.ops[0]
        # (-i)**n cycles with period four and is exact
        one = ctx.one
        phases = [
            mpmath.mpc(one, 0),
            mpmath.mpc(0, -one),
            mpmath.mpc(-one, 0),
            mpmath.mpc(0, one),
        ]
        times = [ctx.num(t) for t in times]

        if pair.h.ndim == 1:
            # gathered evaluation on the eta support: O(t) is an
            # elementwise phase twist there, so each amplitude is a short
            # weighted sum sum_S c_S exp(i freq_S t)
            from .operators import SupportBasis

            support = SupportBasis(pair, ip)
            o0g = support.gather(o0)
            coeff = [support.weight * support.gather(o_n) * o0g for o_n in chain.ops]

            def amplitudes(t):
                ph = np.array([ctx.expj(f * t) for f in support.freq], dtype=object)
                return [(c * ph).sum() for c in coeff]

        else:

            def amplitudes(t):
                ot = matrix_exponential_conjugate(pair.h, o0, t, ctx)
                return [inner(ip, o_n, ot) for o_n in chain.ops]

        phi_rows = []
        complexity = []
        for t in times:
            raw = amplitudes(t)
            row = []
            k_t = ctx.zero
            for n, val in enumerate(raw):
                val = val * phases[n % 4]
                if abs(val.imag) > tol.rel_eps * max(1, abs(val)) * 100:
                    raise ComplexAmplitude(
                        f"phi_{n} imaginary part {ctx.fmt(val.imag)}"
                    )
                phi = val.real
                row.append(phi)
                if n >= 1:
                    k_t = k_t + n * phi * phi
            phi_rows.append(row)
            complexity.append(k_t)
        return KrylovProfile(times=times, phi=phi_rows, complexity=complexity, ctx=ctx, meta=meta)


def profile_to_json(profile: KrylovProfile) -> str:
    return json.dumps(profile.to_json_dict(), sort_keys=True)
