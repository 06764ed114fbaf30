import random

import mpmath
import numpy as np
import pytest

from krylov_exact import (
    build_energy_rep,
    build_eta_position,
    build_hamiltonian,
    default_system,
    energy_pair,
    inner,
    liouville,
    make_system,
    matrix_exponential_conjugate,
    operator_lanczos,
    position_pair,
    trace_inner,
    wightman_inner,
)
from krylov_exact.errors import (
    BasisMismatch,
    DimensionMismatch,
    ModeError,
    NotFiniteSystem,
    TruncationTooSmall,
    ZeroEta,
)
from krylov_exact.operators import (
    eig_symmetric,
    hermiticity_defect,
    identity,
    max_abs,
    norm_sq,
    random_metric_hermitian,
)

from helpers import FINITE_KINDS, param_samples


def test_hamiltonian_krawtchouk_n1(ctx):
    spec = make_system("krawtchouk", 1, {"p": "1/2"}, ctx)
    h = build_hamiltonian(spec)
    half = ctx.frac(1, 2)
    assert h[0, 0] == half and h[1, 1] == half
    assert h[0, 1] == -half and h[1, 0] == -half


def test_hamiltonian_row0_boundary(ctx):
    for kind in FINITE_KINDS:
        spec = default_system(kind, ctx)
        pair = position_pair(spec)
        assert pair.h[0, 0] == spec.B(0)  # D(0) = 0


def test_hamiltonian_spectrum_matches_energies(bctx):
    spec = make_system("krawtchouk", 2, {"p": "1/3"}, bctx)
    h = build_hamiltonian(spec)
    evals, _ = eig_symmetric(h, bctx)
    tol = bctx.num(10) ** (-(bctx.precision - 15))
    for n in range(3):
        assert abs(evals[n] - n) < tol


@pytest.mark.parametrize("kind", FINITE_KINDS)
def test_eigenvalues_equal_catalog_energies(bctx, kind):
    spec = default_system(kind, bctx)
    pair = position_pair(spec)
    evals, _ = eig_symmetric(pair.h, bctx)
    tol = bctx.num(10) ** (-(bctx.precision - 15))
    scale = max(abs(spec.energy(spec.N)), 1)
    for n in range(spec.dim):
        assert abs(evals[n] - spec.energy(n)) <= tol * scale


def test_eta_position(ctx):
    spec = make_system("krawtchouk", 3, {"p": "1/2"}, ctx)
    eta = build_eta_position(spec)
    assert [eta[x, x] for x in range(4)] == [0, 1, 2, 3]
    assert eta[0, 0] == 0
    with pytest.raises(NotFiniteSystem):
        build_eta_position(make_system("hermite", None, {}, ctx))


def test_energy_rep_hermite(bctx):
    spec = make_system("hermite", None, {}, bctx)
    h, eta = build_energy_rep(spec, 2)
    assert [h[k] for k in range(3)] == [0, 2, 4]
    assert abs(eta[0, 1] - bctx.sqrt(bctx.frac(1, 2))) < bctx.num("1e-45")
    assert abs(eta[1, 2] - 1) < bctx.num("1e-45")
    assert all(eta[k, k] == 0 for k in range(3))


def test_energy_rep_krawtchouk_exact(ctx):
    spec = make_system("krawtchouk", 2, {"p": "1/2"}, ctx)
    # A_0 C_1 = 1/2 is not a perfect square, so the symmetric matrix is
    # not rational; the pair with metric carries the same inner products
    with pytest.raises(ModeError):
        build_energy_rep(spec, 2)
    pair = energy_pair(spec)
    ip = trace_inner(pair)
    assert norm_sq(ip, pair.eta) == spec.norm_eta_sq()


def test_energy_rep_charlier_diag(ctx):
    spec = make_system("charlier", None, {"a": "1"}, ctx)
    pair = energy_pair(spec, n_max=2)
    assert [pair.h[k] for k in range(3)] == [0, 1, 2]
    assert [pair.eta[k, k] for k in range(3)] == [1, 2, 3]  # a + n
    # off-diagonal squares are A_n C_{n+1} = a (n+1)
    up = [pair.eta[k, k + 1] for k in range(2)]
    lo = [pair.eta[k + 1, k] for k in range(2)]
    assert [u * l for u, l in zip(up, lo)] == [1, 2]


def test_truncation_guards(ctx):
    spec = make_system("charlier", None, {"a": "1"}, ctx)
    with pytest.raises(TruncationTooSmall):
        energy_pair(spec, n_max=1)
    with pytest.raises(TruncationTooSmall):
        energy_pair(spec)
    fin = make_system("krawtchouk", 3, {"p": "1/2"}, ctx)
    with pytest.raises(TruncationTooSmall):
        energy_pair(fin, n_max=5)


def test_liouville_basics(ctx):
    spec = make_system("krawtchouk", 1, {"p": "1/2"}, ctx)
    pair = position_pair(spec)
    h, eta = pair.h, pair.eta
    assert max_abs(liouville(h, h)) == 0
    assert max_abs(liouville(h, identity(2, ctx))) == 0
    l1 = liouville(h, eta)
    half = ctx.frac(1, 2)
    assert l1[0, 1] == -half and l1[1, 0] == half and l1[0, 0] == 0
    assert max_abs(l1 + l1.T) == 0  # antisymmetric
    with pytest.raises(DimensionMismatch):
        liouville(h, identity(3, ctx))


def test_trace_inner_identity(ctx):
    spec = make_system("krawtchouk", 3, {"p": "1/2"}, ctx)
    pair = position_pair(spec)
    ip = trace_inner(pair)
    assert inner(ip, identity(4, ctx), identity(4, ctx)) == 4


def _random_pair(pair, ip, rng):
    v = random_metric_hermitian(pair.dim, pair.ctx, rng, pair.metric)
    w = random_metric_hermitian(pair.dim, pair.ctx, rng, pair.metric)
    return v, w


def test_flip_property_trace(ctx):
    spec = default_system("racah", ctx)
    pair = position_pair(spec)
    ip = trace_inner(pair)
    rng = random.Random(7)
    for _ in range(100):
        v, w = _random_pair(pair, ip, rng)
        assert inner(ip, v, liouville(pair.h, w)) == inner(ip, liouville(pair.h, v), w)
        assert inner(ip, v, liouville(pair.h, v)) == 0


def test_flip_property_wightman(bctx):
    spec = make_system("meixner", None, {"c": "1/2", "b": "1"}, bctx)
    pair = energy_pair(spec, n_max=6)
    ip = wightman_inner(pair, bctx.num(1))
    rng = random.Random(11)
    tol = bctx.num("1e-40")
    for _ in range(100):
        v, w = _random_pair(pair, ip, rng)
        lhs = inner(ip, v, liouville(pair.h, w))
        rhs = inner(ip, liouville(pair.h, v), w)
        assert abs(lhs - rhs) <= tol * max(1, abs(lhs))
        assert abs(inner(ip, v, liouville(pair.h, v))) <= tol


def test_wightman_requires_energy_basis(bctx):
    spec = make_system("krawtchouk", 3, {"p": "1/2"}, bctx)
    pair = position_pair(spec)
    with pytest.raises(BasisMismatch):
        wightman_inner(pair, bctx.num(1))


def test_wightman_conjugate_symmetry(bctx):
    spec = make_system("charlier", None, {"a": "1"}, bctx)
    pair = energy_pair(spec, n_max=5)
    ip = wightman_inner(pair, bctx.num("3/2"))
    rng = random.Random(3)
    v, w = _random_pair(pair, ip, rng)
    assert abs(inner(ip, v, w) - inner(ip, w, v)) < bctx.num("1e-45")


def test_lanczos_krawtchouk_stops_at_two(ctx):
    spec = make_system("krawtchouk", 4, {"p": "1/2"}, ctx)
    pair = position_pair(spec)
    chain = operator_lanczos(pair)
    assert chain.stopped and chain.stop_index == 2
    assert len(chain.b_squared) == 2
    table_mu2 = ctx.frac(2, 1) * sum(spec.ac_product(n) for n in range(4)) / spec.norm_eta_sq()
    assert chain.b_squared[0] == table_mu2
    assert chain.b_squared[1] == 1 - table_mu2


@pytest.mark.parametrize("kind", FINITE_KINDS)
def test_lanczos_orthogonality_exact(ctx, kind):
    for N, sample_idx in ((6, 0), (8, 1)):
        spec = make_system(kind, N, param_samples(kind, N)[sample_idx], ctx)
        pair = position_pair(spec)
        ip = trace_inner(pair)
        chain = operator_lanczos(pair, ip, k_max=6)
        for j in range(len(chain.ops)):
            for l in range(j + 1, len(chain.ops)):
                assert inner(ip, chain.ops[j], chain.ops[l]) == 0
        # hermiticity ladder: i^n O_n hermitian, i.e. the real chain
        # alternates metric-symmetric / metric-antisymmetric
        for n, op in enumerate(chain.ops):
            sign = 1 if n % 2 == 0 else -1
            assert hermiticity_defect(op, pair.metric, sign) == 0


def test_lanczos_orthonormality_bigreal(bctx):
    spec = default_system("q-hahn", bctx)
    pair = position_pair(spec)
    ip = trace_inner(pair)
    chain = operator_lanczos(pair, ip, k_max=8)
    tol = bctx.default_tolerance()
    for j in range(len(chain.ops)):
        for l in range(j, len(chain.ops)):
            got = inner(ip, chain.ops[j], chain.ops[l])
            want = 1 if j == l else 0
            assert abs(got - want) < 10 * tol.rel_eps
    for n, op in enumerate(chain.ops):
        sign = 1 if n % 2 == 0 else -1
        assert hermiticity_defect(op, None, sign) < 10 * tol.rel_eps


def test_lanczos_hermite_b2_zero(bctx):
    spec = make_system("hermite", None, {}, bctx)
    pair = energy_pair(spec, n_max=24)
    ip = wightman_inner(pair, bctx.num("7/10"))
    chain = operator_lanczos(pair, ip)
    assert chain.stopped and chain.stop_index == 1
    assert abs(chain.b[0] - 2) < bctx.num("1e-45")


def test_lanczos_chain_bound(ctx):
    spec = make_system("krawtchouk", 2, {"p": "1/2"}, ctx)
    pair = position_pair(spec)
    chain = operator_lanczos(pair)
    assert len(chain.ops) <= pair.dim**2


def test_zero_eta_rejected(ctx):
    spec = make_system("krawtchouk", 2, {"p": "1/2"}, ctx)
    pair = position_pair(spec)
    pair.eta = pair.eta * ctx.zero
    with pytest.raises(ZeroEta):
        operator_lanczos(pair)


def test_exponential_conjugate_t0(bctx):
    spec = make_system("krawtchouk", 3, {"p": "1/3"}, bctx)
    pair = position_pair(spec)
    out = matrix_exponential_conjugate(pair.h, pair.eta, bctx.zero, bctx)
    assert max_abs(out - pair.eta) < bctx.num("1e-45")


def test_exponential_conjugate_norm_preserved(bctx):
    spec = make_system("krawtchouk", 3, {"p": "1/3"}, bctx)
    pair = position_pair(spec)
    ip = trace_inner(pair)
    o0 = pair.eta / bctx.sqrt(norm_sq(ip, pair.eta))
    ot = matrix_exponential_conjugate(pair.h, o0, bctx.num("7/10"), bctx)
    assert abs(inner(ip, ot, ot) - 1) < bctx.num("1e-45")


def test_exponential_conjugate_2x2_analytic(bctx):
    # two-level closed form: eigenvectors (1, +-1)/sqrt(2) give
    # diag entries (1 -+ cos t)/2 and off-diagonal -+(i/2) sin t
    spec = make_system("krawtchouk", 1, {"p": "1/2"}, bctx)
    pair = position_pair(spec)
    t = bctx.num("9/10")
    out = matrix_exponential_conjugate(pair.h, pair.eta, t, bctx)
    with bctx.work():
        c, s = mpmath.cos(t), mpmath.sin(t)
        half = bctx.frac(1, 2)
        expected = np.array(
            [
                [half * (1 - c), -mpmath.mpc(0, 1) * half * s],
                [mpmath.mpc(0, 1) * half * s, half * (1 + c)],
            ],
            dtype=object,
        )
    assert max_abs(out - expected) < bctx.num("1e-45")
    assert abs(abs(out[0, 1]) - half * abs(s)) < bctx.num("1e-45")


def test_exponential_conjugate_exact_rejected(ctx):
    spec = make_system("krawtchouk", 1, {"p": "1/2"}, ctx)
    pair = position_pair(spec)
    with pytest.raises(ModeError):
        matrix_exponential_conjugate(pair.h, pair.eta, ctx.one, ctx)


@pytest.mark.parametrize("kind", FINITE_KINDS)
def test_energy_position_moment_equivalence(ctx, kind):
    from krylov_exact import moments_oracle

    N = 4
    spec = make_system(kind, N, param_samples(kind, N)[0], ctx)
    mp_pos = moments_oracle(position_pair(spec), K=4)
    mp_en = moments_oracle(energy_pair(spec), K=4)
    assert mp_pos.values == mp_en.values


def test_operator_json_roundtrip(ctx, bctx):
    from krylov_exact.operators import operator_from_json, operator_to_json

    spec = make_system("q-hahn", 3, {"a": "1/2", "b": "1/3", "q": "1/2"}, ctx)
    pair = position_pair(spec)
    back = operator_from_json(operator_to_json(pair.h, ctx), ctx)
    assert (back == pair.h).all()
    bspec = make_system("q-hahn", 3, {"a": "1/2", "b": "1/3", "q": "1/2"}, bctx)
    bpair = position_pair(bspec)
    bback = operator_from_json(operator_to_json(bpair.h, bctx), bctx)
    assert max_abs(bback - bpair.h) == 0


def test_chain_json_dump(bctx):
    spec = make_system("krawtchouk", 3, {"p": "1/2"}, bctx)
    pair = position_pair(spec)
    chain = operator_lanczos(pair)
    doc = chain.to_json_dict()
    assert doc["stopped"] is True
    assert doc["stop_index"] == 2
    assert len(doc["b_squared"]) == 2
