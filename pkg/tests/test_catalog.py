import json

import pytest

from krylov_exact import (
    alpha_pm,
    default_system,
    make_system,
    spectrum_shift_relations,
    system_from_json,
    system_to_json,
)
from krylov_exact.errors import (
    IndexOutOfRange,
    MissingParameter,
    ParameterOutOfRange,
)
from krylov_exact.numeric import exact_sqrt

from helpers import FINITE_KINDS, THERMAL_KINDS, param_samples


def test_krawtchouk_data_block(ctx):
    spec = make_system("krawtchouk", 5, {"p": "1/2"}, ctx)
    assert spec.B(0) == ctx.frac(5, 2)
    assert spec.D(5) == ctx.frac(5, 2)
    assert spec.A(3) == -1
    assert spec.C(3) == ctx.frac(-3, 2)


def test_krawtchouk_out_of_range(ctx):
    with pytest.raises(ParameterOutOfRange):
        make_system("krawtchouk", 5, {"p": "3/2"}, ctx)


def test_missing_and_unknown_parameters(ctx):
    with pytest.raises(MissingParameter):
        make_system("hahn", 4, {"a": "1"}, ctx)
    with pytest.raises(MissingParameter):
        make_system("krawtchouk", 4, {"p": "1/2", "bogus": "1"}, ctx)
    with pytest.raises(ParameterOutOfRange):
        make_system("krawtchouk", None, {"p": "1/2"}, ctx)
    with pytest.raises(ParameterOutOfRange):
        make_system("meixner", 5, {"c": "1/2", "b": "1"}, ctx)


def test_hermite_data_block(ctx):
    spec = make_system("hermite", None, {}, ctx)
    assert [spec.energy(n) for n in range(4)] == [0, 2, 4, 6]
    assert spec.alpha_plus(3) == 2 and spec.alpha_minus(3) == -2
    assert spec.A(7) == ctx.frac(1, 2)
    assert spec.eta_diag(7) == 0
    assert spec.C(7) == 7


def test_alpha_pm_examples(ctx):
    k = make_system("krawtchouk", 4, {"p": "1/3"}, ctx)
    assert alpha_pm(k, 2) == (1, -1)

    g = make_system("gegenbauer", None, {"g": "2"}, ctx)
    assert alpha_pm(g, 3) == (11, -9)

    qh = make_system("q-hahn", 3, {"a": "1/2", "b": "1/2", "q": "1/2"}, ctx)
    ap, am = alpha_pm(qh, 0)
    assert ap == ctx.frac(3, 4)
    assert am == 0
    # cross-check the root relations against R_0, R_1
    e0 = qh.energy(0)
    assert ap + am == qh.r1_at(e0)
    assert ap * am == -qh.r0_at(e0)


def test_alpha_pm_index_check(ctx):
    k = make_system("krawtchouk", 4, {"p": "1/3"}, ctx)
    with pytest.raises(IndexOutOfRange):
        alpha_pm(k, 7)


def test_shift_relations_examples(ctx):
    k = make_system("krawtchouk", 5, {"p": "1/2"}, ctx)
    assert spectrum_shift_relations(k, 2)
    r = make_system("racah", 6, {"d": "1", "a": "8", "b": "3/2"}, ctx)
    assert spectrum_shift_relations(r, 3)
    qr = default_system("q-racah", ctx)
    assert spectrum_shift_relations(qr, 1)
    with pytest.raises(IndexOutOfRange):
        spectrum_shift_relations(k, 5)


@pytest.mark.parametrize("kind", FINITE_KINDS)
def test_finite_system_invariants(ctx, kind):
    for N in (2, 5):
        for params in param_samples(kind, N):
            spec = make_system(kind, N, params, ctx)
            assert spec.eta(0) == 0
            assert spec.energy(0) == 0
            assert spec.D(0) == 0 and spec.B(N) == 0
            assert spec.C(0) == 0 and spec.A(N) == 0
            for n in range(N):
                assert spec.ac_product(n) > 0
                # the frequency discriminant is a perfect rational square
                e = spec.energy(n)
                disc = spec.r1_at(e) ** 2 + 4 * spec.r0_at(e)
                root = exact_sqrt(disc)
                assert root is not None
                assert root == spec.alpha_plus(n) - spec.alpha_minus(n)
            for n in range(1, N):
                assert spectrum_shift_relations(spec, n)


@pytest.mark.parametrize("kind", THERMAL_KINDS)
def test_thermal_system_invariants(ctx, kind):
    spec = default_system(kind, ctx)
    assert spec.energy(0) == 0
    for n in range(12):
        assert spec.ac_product(n) > 0
        assert spec.energy(n + 1) > spec.energy(n)
    for n in range(1, 10):
        assert spectrum_shift_relations(spec, n)


def test_eta_values(ctx):
    k = make_system("krawtchouk", 3, {"p": "1/2"}, ctx)
    assert [k.eta(x) for x in range(4)] == [0, 1, 2, 3]
    dh = make_system("dual-hahn", 3, {"a": "1", "b": "2"}, ctx)
    assert dh.eta(1) == 1 * (1 + 1 + 2 - 1)
    dqh = make_system("dual-q-hahn", 3, {"a": "1/2", "b": "1/2", "q": "1/2"}, ctx)
    q, ab = ctx.frac(1, 2), ctx.frac(1, 4)
    assert dqh.eta(2) == (q**-2 - 1) * (1 - ab * q)


def test_eta_diag_conventions(ctx):
    # finite systems and Meixner/Charlier: -(A_n + C_n)
    m = make_system("meixner", None, {"c": "1/2", "b": "1"}, ctx)
    assert m.eta_diag(3) == -(m.A(3) + m.C(3))
    c = make_system("charlier", None, {"a": "1"}, ctx)
    assert c.eta_diag(1) == 2  # a + n
    # symmetric Jacobi: diagonal vanishes through the (h - g) factor
    j = make_system("jacobi", None, {"g": "2", "h": "2"}, ctx)
    assert j.eta_diag(0) == 0 and j.eta_diag(5) == 0
    j2 = make_system("jacobi", None, {"g": "2", "h": "3"}, ctx)
    assert j2.eta_diag(0) != 0


def test_positivity_violation_reports_index(ctx):
    # q-Racah with b at the boundary makes C_n vanish inside the range
    with pytest.raises((ParameterOutOfRange, Exception)):
        make_system("q-racah", 3, {"q": "1/2", "d": "1/2", "a": "1/64", "b": "1/4"}, ctx)


def test_json_roundtrip(ctx):
    spec = make_system("q-hahn", 4, {"a": "1/2", "b": "1/3", "q": "1/2"}, ctx)
    doc = system_to_json(spec)
    parsed = json.loads(doc)
    assert parsed["kind"] == "q-hahn"
    assert parsed["mode"] == "exact"
    spec2 = system_from_json(doc)
    assert spec2.kind == spec.kind and spec2.N == spec.N
    assert [spec2.energy(n) for n in range(5)] == [spec.energy(n) for n in range(5)]


def test_json_bigreal_roundtrip(bctx):
    spec = make_system("gegenbauer", None, {"g": "2"}, bctx)
    spec2 = system_from_json(system_to_json(spec))
    assert spec2.ctx.mode == "bigreal"
    assert spec2.ctx.precision == 50
    assert spec2.alpha_plus(3) == spec.alpha_plus(3)


def test_norm_eta_sq_closed_form_affine_qk(ctx):
    from krylov_exact.moments import affine_qk_norm_closed

    for N, q in [(3, "1/2"), (5, "1/3"), (8, "2/5")]:
        spec = make_system("affine-q-krawtchouk", N, {"q": q, "p": "1"}, ctx)
        assert spec.norm_eta_sq() == affine_qk_norm_closed(N, ctx.num(q), ctx)
