import random

import pytest

from pfisterdisc.fields import QQ
from pfisterdisc import linalg
from pfisterdisc.algebras import (
    matrix_algebra,
    quaternion_algebra,
    tensor_product,
)
from pfisterdisc.involutions import (
    adjoint_diag_involution,
    adjoint_involution,
    canonical_quaternion,
    tensor_involution,
)
from pfisterdisc.decomposition import (
    DecompositionCertificate,
    DecompositionError,
    IsotropyWitness,
    decompose_along_L,
    existmetabolic_construct,
    m2_metabolic_uv,
    metabolic_quat_from_uv,
    restricted_involution,
    verify_certificate,
    verify_hyperbolic_witness,
    verify_metabolic_witness,
)
from pfisterdisc.pipeline import discriminant_pfister, main_theorem_decide


def hamilton_cube():
    qs = [quaternion_algebra(QQ, -1, -1), quaternion_algebra(QQ, -1, -3),
          quaternion_algebra(QQ, -2, -5)]
    t12 = tensor_product(qs[0], qs[1])
    s12 = tensor_involution(t12, canonical_quaternion(qs[0]), canonical_quaternion(qs[1]))
    A = tensor_product(t12, qs[2])
    return A, tensor_involution(A, s12, canonical_quaternion(qs[2]))


def sigma_prime_m2():
    """(M_2, Int(u+v) o t) = adjoint of the Gram matrix (u+v)^{-1}."""
    M2 = matrix_algebra(QQ, 2)
    gram = [[-1, 1], [1, 0]]  # inverse of [[0,1],[1,1]]
    return M2, adjoint_involution(M2, gram)


def test_decompose_hamilton_cube_certificate():
    A, s = hamilton_cube()
    disc = discriminant_pfister(s)
    assert disc.hyperbolic
    cert = decompose_along_L(s, disc)
    assert cert is not None
    assert len(cert.quaternion_bases) == 2
    ok, detail = verify_certificate(s, cert)
    assert ok, detail


def test_certificate_mutation_rejected():
    A, s = hamilton_cube()
    disc = discriminant_pfister(s)
    cert = decompose_along_L(s, disc)
    rng = random.Random(99)
    rejected = 0
    for _ in range(25):
        k = rng.randrange(2)
        idx = rng.randrange(4)
        tampered = [list(map(tuple, b)) for b in cert.quaternion_bases]
        tampered[k][idx] = tuple(QQ(rng.randint(-3, 3)) for _ in range(A.dim))
        bad = DecompositionCertificate(quaternion_bases=tampered, l_basis=cert.l_basis)
        ok, _ = verify_certificate(s, bad)
        if not ok:
            rejected += 1
    assert rejected == 25


def test_certificate_noncommuting_quats_rejected():
    # two overlapping quaternions inside M4: independence must fail
    M4 = matrix_algebra(QQ, 4)
    ad = adjoint_diag_involution(M4, [1, 1, 1, 1])
    # span{e11+e22, e12+e21, ...}: build two copies sharing the 2x2 corner
    b1 = [M4.unit,
          M4.el([0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
          M4.el([1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
          M4.el([0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])]
    # the same block again: certainly not commuting with itself elementwise
    cert = DecompositionCertificate(quaternion_bases=[b1, b1], l_basis=[])
    ok, detail = verify_certificate(ad, cert)
    assert not ok
    assert "independence" in detail or "closure" in detail or "centre" in detail


def test_hyperbolic_and_metabolic_witnesses():
    M2, sp = sigma_prime_m2()
    u, v = m2_metabolic_uv(M2)
    # sigma'(u) = 1 - u + uv and friends: the five-relation witness
    q = metabolic_quat_from_uv(sp, u, v)
    # e = u is a metabolic witness for the restriction
    restr = restricted_involution(sp, q)
    assert verify_metabolic_witness(restr, restr.algebra.el(q.coords(u)))

    # e = e11 in (M2, transpose): sigma(e) = e != 1 - e: not hyperbolic
    t = adjoint_diag_involution(M2, [1, 1])
    assert not verify_hyperbolic_witness(t, M2.basis_vec(0))

    # e = (1+w)/2 with sigma(w) = -w, w^2 = 1 is hyperbolic: w = e12+e21 under ad_<1,-1>
    ad = adjoint_diag_involution(M2, [1, -1])
    w = M2.el([0, 1, 1, 0])
    assert ad.apply(w) == tuple(-c for c in w)
    from fractions import Fraction

    e = M2.el([Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)])
    assert verify_hyperbolic_witness(ad, e)


def test_metabolic_uv_bad_input():
    M2, sp = sigma_prime_m2()
    with pytest.raises(DecompositionError):
        metabolic_quat_from_uv(sp, M2.zero(), M2.zero())


def test_existmetabolic_on_matrix_instance():
    # (M4, ad of a hyperbolic form): sigma hyperbolic; K = Q(sqrt2) embedded
    # block-diagonally via the companion-style symmetric square root
    M4 = matrix_algebra(QQ, 4)
    ad = adjoint_diag_involution(M4, [1, -1, 1, -1])
    # hyperbolic idempotent for ad_<1,-1,1,-1>: e = (1+w)/2, w = e12+e21+e34+e43
    from fractions import Fraction

    w = M4.el([0, 1, 0, 0,
               1, 0, 0, 0,
               0, 0, 0, 1,
               0, 0, 1, 0])
    assert ad.apply(w) == tuple(-c for c in w)
    half = Fraction(1, 2)
    e = tuple(QQ(half) * (u + x) for u, x in zip([c.co[0] for c in M4.unit],
                                                 [c.co[0] for c in w]))
    e = M4.el([half * (1 if i % 5 == 0 else 0) + half * wc.co[0]
               for i, wc in enumerate(w)])
    assert verify_hyperbolic_witness(ad, e)
    # K = F[k], k = sqrt2-like symmetric: k swaps within blocks scaled by 2
    k = M4.el([0, 2, 0, 0,
               1, 0, 0, 0,
               0, 0, 0, 2,
               0, 0, 1, 0])
    # k is ad-symmetric? ad_beta(k) = beta^{-1} k^T beta with beta = <1,-1,1,-1>
    if ad.apply(k) != k:
        # symmetrize choice: use k' = e12*2? fall back to a clean symmetric root
        k = M4.el([0, 1, 0, 0,
                   -1, 0, 0, 0,
                   0, 0, 0, 1,
                   0, 0, -1, 0])
    assert ad.apply(k) == k
    sq = M4.is_scalar(M4.mul(k, k))
    assert sq is not None and not sq.is_zero()
    try:
        q = existmetabolic_construct(ad, k, e)
    except IsotropyWitness:
        pytest.skip("sigma|_C isotropic for this K: proof dichotomy branch")
    restr = restricted_involution(ad, q)
    assert restr.classify().type == "orthogonal"
    # (wv')^2 = 1 and sigma(wv') = -wv' were asserted inside; re-check metabolic
    wv = q.basis[2]
    assert M4.mul(wv, wv) == tuple(M4.unit)
    assert ad.apply(wv) == tuple(-c for c in wv)
    iso = M4.mul(ad.apply(linalg.vec_add(tuple(M4.unit), wv)),
                 linalg.vec_add(tuple(M4.unit), wv))
    assert linalg.vec_is_zero(iso)


def test_decide_attaches_verified_certificates():
    # matrix-model symplectic instance: hyperbolic, decomposable, certified
    M4 = matrix_algebra(QQ, 4)
    ad = adjoint_diag_involution(M4, [1, 1, 1, 1])
    Q = quaternion_algebra(QQ, -1, -1)
    A = tensor_product(M4, Q)
    s = tensor_involution(A, ad, canonical_quaternion(Q))
    dec = main_theorem_decide(s)
    assert dec.verdict == "decomposable"
    if dec.certificate is not None:
        ok, detail = verify_certificate(s, dec.certificate)
        assert ok, detail
