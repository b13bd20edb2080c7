import pytest

from pfisterdisc.fields import GF, QQ
from pfisterdisc import linalg
from pfisterdisc.algebras import (
    double_algebra,
    etale_quadratic_algebra,
    matrix_algebra,
    quaternion_algebra,
    tensor_product,
)
from pfisterdisc.involutions import (
    adjoint_diag_involution,
    canonical_etale2,
    canonical_quaternion,
    switch_involution,
    tensor_involution,
)
from pfisterdisc.pipeline import (
    Decision,
    PipelineError,
    discriminant_pfister,
    fold_count,
    main_theorem_decide,
    normalize_c,
    w_space,
)
from pfisterdisc.etale import find_neat_biquadratic
from pfisterdisc.quadforms import (
    diagonal_form,
    is_isometric,
    is_isotropic,
    tensor_bilinear,
)


def hamilton_cube(params=((-1, -1), (-1, -3), (-2, -5))):
    qs = [quaternion_algebra(QQ, a, b) for a, b in params]
    t12 = tensor_product(qs[0], qs[1])
    s12 = tensor_involution(t12, canonical_quaternion(qs[0]), canonical_quaternion(qs[1]))
    A = tensor_product(t12, qs[2])
    return A, tensor_involution(A, s12, canonical_quaternion(qs[2]))


def symplectic_with_orth_factor(beta, q_params):
    """(End V, ad_beta) tensor (Q, can): symplectic of degree 8."""
    M4 = matrix_algebra(QQ, 4)
    ad = adjoint_diag_involution(M4, beta)
    Q = quaternion_algebra(QQ, *q_params)
    A = tensor_product(M4, Q)
    return A, tensor_involution(A, ad, canonical_quaternion(Q))


def unitary_instance(beta, d):
    M4 = matrix_algebra(QQ, 4)
    ad = adjoint_diag_involution(M4, beta)
    Z = etale_quadratic_algebra(QQ, d)
    A = tensor_product(M4, Z)
    return A, tensor_involution(A, ad, canonical_etale2(Z))


def orthogonal_instance(beta):
    M4 = matrix_algebra(QQ, 4)
    return M4, adjoint_diag_involution(M4, beta)


def test_w_space_dimensions():
    # symplectic degree 8: dim W_i = 8; unitary degree 4: 4; orthogonal: 2
    _, s = hamilton_cube()
    L = find_neat_biquadratic(s, want=1)[0]
    for i in (1, 2, 3):
        assert len(w_space(s, L, i).basis) == 8

    _, su = unitary_instance([1, 1, 1, -1], -1)
    Lu = find_neat_biquadratic(su, want=1)[0]
    assert len(w_space(su, Lu, 1).basis) == 4

    _, so = orthogonal_instance([1, 1, 1, -1])
    Lo = find_neat_biquadratic(so, want=1)[0]
    assert len(w_space(so, Lo, 1).basis) == 2


def test_normalize_c_basis_grid():
    _, s = hamilton_cube()
    L = find_neat_biquadratic(s, want=1)[0]
    c, scales = normalize_c(L)
    assert not c.is_zero()
    assert scales[2] == c.inv()


def test_hamilton_cube_decides_decomposable():
    # totally decomposable by construction, so the Main Theorem forces a
    # hyperbolic discriminant Pfister form: a strong end-to-end self-test
    _, s = hamilton_cube()
    dec = main_theorem_decide(s)
    assert dec.verdict == "decomposable"
    assert dec.disc.hyperbolic
    assert dec.certificate is not None, dec.certificate_error
    assert fold_count(s) == 3
    assert dec.disc.q_forms[0].dim == 8


def test_indecomposable_witness_eight_squares():
    # (End V, ad_<1,1,1,-1>) (x) ((-1,-1), can): positive definite 8-dim form
    A, s = symplectic_with_orth_factor([1, 1, 1, -1], (-1, -1))
    dec = main_theorem_decide(s)
    assert dec.verdict == "indecomposable"
    target = tensor_bilinear([QQ(1), QQ(1)], diagonal_form(QQ, [1, 1, 1, 1]))
    assert is_isometric(dec.disc.pfister.form, target)
    inv_sig = dec.disc.pfister.form
    from pfisterdisc.quadforms import invariants

    assert invariants(inv_sig).signature == (8, 0)


def test_hyperbolic_symplectic_matrix_instance():
    # d = 1: <1,-1> (x) Nrd hyperbolic, decomposable
    A, s = symplectic_with_orth_factor([1, 1, 1, 1], (-1, -1))
    dec = main_theorem_decide(s)
    assert dec.verdict == "decomposable"


def test_unitary_instance_formula_shape():
    # ad_<1,1,1,-1> (x) (Q(i), can): P = <1,1> (x) <1,1> anisotropic
    A, s = unitary_instance([1, 1, 1, -1], -1)
    assert s.classify().type == "unitary"
    dec = main_theorem_decide(s)
    assert dec.verdict == "indecomposable"
    target = tensor_bilinear([QQ(1), QQ(1)], diagonal_form(QQ, [1, 1]))
    assert is_isometric(dec.disc.pfister.form, target)

    # ad_<1,1,1,1> (x) (Q(sqrt3), can): hyperbolic (d = 1)
    A2, s2 = unitary_instance([1, 1, 1, 1], 3)
    dec2 = main_theorem_decide(s2)
    assert dec2.verdict == "decomposable"


def test_orthogonal_case():
    _, s = orthogonal_instance([1, 1, 1, -1])
    dec = main_theorem_decide(s)
    assert dec.verdict == "indecomposable"
    assert is_isometric(dec.disc.pfister.form, diagonal_form(QQ, [1, 1]))
    _, s2 = orthogonal_instance([1, 1, 1, 1])
    assert main_theorem_decide(s2).verdict == "decomposable"


def test_unitary_inner_type():
    M4 = matrix_algebra(QQ, 4)
    D = double_algebra(M4)
    sw = switch_involution(D)
    dec = main_theorem_decide(sw)
    # M4 = M2 (x) M2 has exponent <= 2: decomposable, P hyperbolic
    assert dec.verdict == "decomposable"
    assert dec.disc.hyperbolic


def test_q_forms_pairwise_similar():
    _, s = hamilton_cube(((-1, -1), (-2, -3), (-1, -7)))
    disc = discriminant_pfister(s)
    from pfisterdisc.quadforms import is_similar

    ok12, _ = is_similar(disc.q_forms[0], disc.q_forms[1])
    ok13, _ = is_similar(disc.q_forms[0], disc.q_forms[2])
    assert ok12 and ok13


def test_l_independence_two_neat_subalgebras():
    _, s = hamilton_cube()
    hits = find_neat_biquadratic(s, want=2)
    assert len(hits) == 2
    d1 = discriminant_pfister(s, L=hits[0])
    d2 = discriminant_pfister(s, L=hits[1])
    assert is_isometric(d1.pfister.form, d2.pfister.form)


def test_capacity_gate():
    H = quaternion_algebra(QQ, -1, -1)
    with pytest.raises(PipelineError):
        discriminant_pfister(canonical_quaternion(H))


def test_char2_pipeline_gf2():
    F2 = GF(2)
    qs = [quaternion_algebra(F2, 1, 1) for _ in range(3)]
    t12 = tensor_product(qs[0], qs[1])
    s12 = tensor_involution(t12, canonical_quaternion(qs[0]), canonical_quaternion(qs[1]))
    A = tensor_product(t12, qs[2])
    s = tensor_involution(A, s12, canonical_quaternion(qs[2]))
    assert s.classify().type == "symplectic"
    dec = main_theorem_decide(s, want_certificate=True)
    # forms of dim >= 3 over finite fields are isotropic: always decomposable
    assert dec.verdict == "decomposable"
    assert dec.disc.c_value == F2.one()  # trace functionals force c = 1
    assert len(dec.disc.w_spaces[0].basis) == 8
    assert len(s.space("symd")) == 28


def test_char2_pipeline_gf4():
    F4 = GF(2, 2)
    g = F4.gen()
    qs = [quaternion_algebra(F4, 1, 1), quaternion_algebra(F4, g, 1),
          quaternion_algebra(F4, g, g)]
    t12 = tensor_product(qs[0], qs[1])
    s12 = tensor_involution(t12, canonical_quaternion(qs[0]), canonical_quaternion(qs[1]))
    A = tensor_product(t12, qs[2])
    s = tensor_involution(A, s12, canonical_quaternion(qs[2]))
    dec = main_theorem_decide(s, want_certificate=False)
    assert dec.verdict == "decomposable"
    assert dec.disc.c_value == F4.one()


def test_star_identity_degenerate_and_homogeneous():
    from pfisterdisc.pipeline import s_eval, star

    _, s = hamilton_cube()
    disc = discriminant_pfister(s)
    a = s.algebra
    L, ws, scales = disc.L, disc.w_spaces, disc.s_scales
    # x with x^2 = 0: both sides of the composition identity vanish
    q1 = ws[0].form
    from pfisterdisc.quadforms import isotropic_vector

    co = isotropic_vector(q1, 100)
    assert co is not None
    x = a.zero()
    for c, b in zip(co, ws[0].basis):
        x = linalg.vec_add(x, linalg.vec_scale(c, b))
    xsq = a.is_scalar(a.mul(x, x))
    if xsq is not None and xsq.is_zero():
        for y in ws[1].basis[:3]:
            z = star(a, x, y)
            assert s_eval(L, 3, a.mul(z, z), scales[2]).is_zero()
    # scaling x by lambda multiplies both sides by lambda^2
    lam = QQ(3)
    x0, y0 = ws[0].basis[0], ws[1].basis[1]
    z0 = star(a, x0, y0)
    z1 = star(a, linalg.vec_scale(lam, x0), y0)
    lhs0 = s_eval(L, 3, a.mul(z0, z0), scales[2])
    lhs1 = s_eval(L, 3, a.mul(z1, z1), scales[2])
    assert lhs1 == lam * lam * lhs0
