"""Constructive decomposition along a neat biquadratic subalgebra, the
hyperbolic/metabolic involution toolkit, and independent certificate
verification.

When the discriminant Pfister form is hyperbolic, an isotropic vector of q_1
yields x in W_1 with x^2 in F^x (after a hyperbolic-pair repair when the
found vector squares to zero); Q_2 = L^{gamma_2} + L^{gamma_2} x is a
sigma-stable quaternion subalgebra, and the second factor comes from the
twisted eigenspace of the centralizer.  Certificates carry plain bases and
are re-verified from scratch, with no trust in the producer.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .linalg import Vec
from .algebras import (
    AlgebraError,
    StructureAlgebra,
    Subalgebra,
    algebra_inverse,
    centralizer,
    inverse_or_kernel,
)
from .involutions import Involution
from .etale import BiquadraticL, normalize_quadratic_generator
from .quadforms import isotropic_vector
from .pipeline import DiscPfister


class DecompositionError(ValueError):
    pass


@dataclass
class DecompositionCertificate:
    """Bases of independent sigma-stable quaternion subalgebras aligned with L."""

    quaternion_bases: list[list[Vec]]
    l_basis: list[Vec]


class IsotropyWitness(Exception):
    """Structured failure carrying x with sigma(x) x = 0 (proof dichotomy)."""

    def __init__(self, witness: Vec):
        super().__init__("sigma restricted to the centralizer is isotropic")
        self.witness = witness


# -- decomposition along L ------------------------------------------------------------


def _element_from_coords(a: StructureAlgebra, basis: list[Vec], co) -> Vec:
    v = a.zero()
    for c, b in zip(co, basis):
        if not c.is_zero():
            v = linalg.vec_add(v, linalg.vec_scale(c, b))
    return v


def _square_unit_element(s: Involution, L: BiquadraticL, wsp, height_bound: int) -> Vec | None:
    """x in W_1 with x^2 in F^x, from an isotropic vector of q_1.

    If the found y has y^2 = 0, repair through a hyperbolic pair of the
    K-valued squaring form: with p = xz + zx invertible in K = L^{gamma_1},
    the element z + (1 - z^2) p^{-1} y squares to 1.
    """
    a = s.algebra
    ctx = a.ctx
    q1 = wsp.form
    co = isotropic_vector(q1, height_bound)
    if co is None:
        return None
    y = _element_from_coords(a, wsp.basis, co)
    ysq = a.is_scalar(a.mul(y, y))
    if ysq is None:
        raise DecompositionError("isotropic vector of q_1 does not square into F")
    if not ysq.is_zero():
        return y
    # repair: find z in the W_1 basis with p = yz + zy invertible in K
    for z in wsp.basis + [linalg.vec_add(wsp.basis[i], wsp.basis[j])
                          for i in range(len(wsp.basis))
                          for j in range(i + 1, len(wsp.basis))]:
        p = linalg.vec_add(a.mul(y, z), a.mul(z, y))
        pco = linalg.in_span(L.fixed_basis(1), p, ctx)
        if pco is None:
            raise DecompositionError("polar value leaves the fixed algebra")
        pinv = algebra_inverse(a, p)
        if pinv is None:
            continue
        zsq = a.mul(z, z)
        lam = a.mul(linalg.vec_sub(tuple(a.unit), zsq), pinv)
        x = linalg.vec_add(z, a.mul(lam, y))
        xsq = a.is_scalar(a.mul(x, x))
        if xsq is None or xsq.is_zero():
            continue
        if linalg.in_span(wsp.basis, x, ctx) is None:
            raise DecompositionError("repaired element left W_1")
        return x
    return None


def decompose_along_L(s: Involution, disc: DiscPfister, height_bound: int = 200,
                      seed: int = 0) -> DecompositionCertificate | None:
    """Certificate of decomposability along L, or None on search exhaustion.

    Requires the discriminant Pfister form to be hyperbolic.
    """
    if disc.hyperbolic is False:
        raise DecompositionError("discriminant Pfister form is anisotropic")
    a = s.algebra
    ctx = a.ctx
    L = disc.L
    x = _square_unit_element(s, L, disc.w_spaces[0], height_bound)
    if x is None:
        return None
    # Q_2 = L^{gamma_2} + L^{gamma_2} x
    u2 = L.fixed_gen(2)
    q2_basis = [tuple(a.unit), u2, x, a.mul(u2, x)]
    # second factor: K = L^{gamma_1} inside the centralizer of Q_2
    u1 = L.fixed_gen(1)
    aprime = centralizer(a, Subalgebra(a, q2_basis, verify=True))
    z_vec = _twisted_square_unit(s, a, aprime, u1, L, height_bound)
    if z_vec is None:
        return None
    q1_basis = [tuple(a.unit), u1, z_vec, a.mul(u1, z_vec)]
    cert = DecompositionCertificate(
        quaternion_bases=[q1_basis, q2_basis], l_basis=[tuple(b) for b in L.basis]
    )
    ok, detail = verify_certificate(s, cert)
    if not ok:
        raise DecompositionError(f"constructed certificate failed verification: {detail}")
    return cert


def _twisted_square_unit(s: Involution, a: StructureAlgebra, aprime: Subalgebra,
                         u1: Vec, L: BiquadraticL, height_bound: int) -> Vec | None:
    """z in Symd(sigma) inside A' with z u1 = gamma(u1) z and z^2 in F^x."""
    ctx = a.ctx
    if ctx.characteristic != 2:
        gu1 = tuple(-c for c in u1)
    else:
        gu1 = linalg.vec_add(u1, tuple(a.unit))
    symd = s.space("symd")
    # constraints: z in span(symd), z in span(aprime), u1 z = z gamma(u1)
    rows = []
    lu = a.lmul_matrix(u1)
    rg = a.rmul_matrix(gu1)
    diff = [[lu[r][c] - rg[r][c] for c in range(a.dim)] for r in range(a.dim)]
    cols = [linalg.mat_vec(diff, b) for b in symd]
    for r in range(a.dim):
        rows.append([cols[k][r] for k in range(len(symd))])
    # membership in A': the symd-combination must lie in span(aprime)
    rows.extend(_complement_constraints(a, aprime.basis, symd))
    coeffs = linalg.kernel(rows, ctx)
    cands = []
    for co in coeffs:
        z = _element_from_coords(a, symd, co)
        if not linalg.vec_is_zero(z):
            cands.append(z)
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            cands.append(linalg.vec_add(cands[i], cands[j]))
            if len(cands) > 24:
                break
        if len(cands) > 24:
            break
    for z in cands:
        sq = a.is_scalar(a.mul(z, z))
        if sq is not None and not sq.is_zero():
            return z
    return None


def _complement_constraints(a: StructureAlgebra, span_basis: list[Vec],
                            param_basis: list[Vec]):
    """Rows forcing a param_basis-combination to lie in span(span_basis)."""
    ctx = a.ctx
    rows = [list(v) for v in span_basis]
    red, piv = linalg.rref(rows)
    pivset = set(piv)
    out = []
    for r in range(a.dim):
        if r in pivset:
            continue
        # residual coordinate r after eliminating pivots
        row = []
        for b in param_basis:
            v = list(b)
            for k, pc in enumerate(piv):
                f = v[pc]
                if not f.is_zero():
                    v = [x - f * y for x, y in zip(v, red[k])]
            row.append(v[r])
        out.append(row)
    return out


# -- certificate verification -----------------------------------------------------------


def verify_certificate(s: Involution, cert: DecompositionCertificate):
    """Re-check every certificate claim from scratch; (ok, detail)."""
    a = s.algebra
    ctx = a.ctx
    quats = []
    for k, basis in enumerate(cert.quaternion_bases):
        if len(basis) != 4:
            return False, f"Q_{k + 1}: basis size"
        try:
            sub = Subalgebra(a, basis, verify=True)
        except AlgebraError as exc:
            return False, f"Q_{k + 1}: closure ({exc})"
        for b in basis:
            if linalg.in_span(basis, s.apply(b), ctx) is None:
                return False, f"Q_{k + 1}: not sigma-stable"
        alg = sub.as_algebra(verify=True)
        if len(alg.center()) != 1:
            return False, f"Q_{k + 1}: centre is not F"
        if not alg.trace_form_nondegenerate():
            return False, f"Q_{k + 1}: not separable (not central simple)"
        quats.append(sub)
    for i in range(len(quats)):
        for j in range(i + 1, len(quats)):
            for x in quats[i].basis:
                for y in quats[j].basis:
                    if a.mul(x, y) != a.mul(y, x):
                        return False, "independence: factors do not commute"
            prods = [a.mul(x, y) for x in quats[i].basis for y in quats[j].basis]
            if linalg.rank([list(p) for p in prods]) != 16:
                return False, "independence: product map is not injective"
    if cert.l_basis:
        lspan = [list(v) for v in cert.l_basis]
        if linalg.rank(lspan) != len(cert.l_basis):
            return False, "L basis dependent"
        for k, sub in enumerate(quats):
            inter = _intersection_dim(sub.basis, cert.l_basis)
            if inter != 2:
                return False, f"Q_{k + 1} cap L has dimension {inter}, not 2"
    return True, "ok"


def _intersection_dim(b1: list[Vec], b2: list[Vec]) -> int:
    r1 = linalg.rank([list(v) for v in b1])
    r2 = linalg.rank([list(v) for v in b2])
    rsum = linalg.rank([list(v) for v in list(b1) + list(b2)])
    return r1 + r2 - rsum


# -- hyperbolic / metabolic toolkit -------------------------------------------------------


def verify_hyperbolic_witness(s: Involution, e: Vec) -> bool:
    a = s.algebra
    e = a.el(e)
    if a.mul(e, e) != e:
        return False
    return s.apply(e) == linalg.vec_sub(tuple(a.unit), e)


def verify_metabolic_witness(s: Involution, e: Vec) -> bool:
    a = s.algebra
    e = a.el(e)
    if a.mul(e, e) != e:
        return False
    if not linalg.vec_is_zero(a.mul(s.apply(e), e)):
        return False
    lm = a.lmul_matrix(e)
    return 2 * linalg.rank(lm) == a.dim


def metabolic_quat_from_uv(s: Involution, u: Vec, v: Vec) -> Subalgebra:
    """The split quaternion span(1, u, v, uv) from the five-relation witness
    u^2 = u, v^2 = 1, uv + vu = v, sigma(u) = 1 - u + uv,
    sigma(v) = -1 + 2u + v - uv; sigma restricted is orthogonal metabolic."""
    a = s.algebra
    ctx = a.ctx
    u, v = a.el(u), a.el(v)
    one = tuple(a.unit)
    uv = a.mul(u, v)
    checks = [
        (a.mul(u, u), u, "u^2 = u"),
        (a.mul(v, v), one, "v^2 = 1"),
        (linalg.vec_add(a.mul(u, v), a.mul(v, u)), v, "uv + vu = v"),
        (s.apply(u), linalg.vec_add(linalg.vec_sub(one, u), uv), "sigma(u)"),
        (
            s.apply(v),
            linalg.vec_sub(
                linalg.vec_add(
                    linalg.vec_add(linalg.vec_scale(ctx(2), u), v),
                    tuple(-c for c in one),
                ),
                uv,
            ),
            "sigma(v)",
        ),
    ]
    for got, want, label in checks:
        if got != tuple(want):
            raise DecompositionError(f"relation {label} fails")
    basis = [one, u, v, uv]
    sub = Subalgebra(a, basis, verify=True)
    # sigma(u)u = 0 as in the metabolicity argument
    if not linalg.vec_is_zero(a.mul(s.apply(u), u)):
        raise DecompositionError("sigma(u) u != 0")
    restr = restricted_involution(s, sub)
    if restr.classify().type != "orthogonal":
        raise DecompositionError("restriction is not orthogonal")
    if not verify_metabolic_witness(restr, restr.algebra.el(sub.coords(u))):
        raise DecompositionError("restriction is not metabolic at e = u")
    return sub


def restricted_involution(s: Involution, sub: Subalgebra) -> Involution:
    """sigma restricted to a sigma-stable subalgebra, on its own basis."""
    a = s.algebra
    alg = sub.as_algebra(verify=False)
    cols = []
    for b in sub.basis:
        img = sub.coords(s.apply(b))
        if img is None:
            raise DecompositionError("subalgebra is not sigma-stable")
        cols.append(img)
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]
    return Involution(alg, matrix)


def existmetabolic_construct(s: Involution, k_gen: Vec, e: Vec) -> Subalgebra:
    """Split metabolic orthogonal quaternion containing K = F[k_gen].

    Follows the constructive proof: split A = C + C' by K-conjugation,
    write the hyperbolic idempotent e = v + w, invert v inside C, and return
    Q = K + K(w v').  If v is singular the kernel vector is an isotropy
    witness for sigma on C and is raised as IsotropyWitness.
    """
    a = s.algebra
    ctx = a.ctx
    if not verify_hyperbolic_witness(s, e):
        raise DecompositionError("e is not a hyperbolic idempotent witness")
    u, p = normalize_quadratic_generator(a, k_gen)
    if s.apply(u) != tuple(u):
        raise DecompositionError("K is not sigma-symmetric")
    if ctx.characteristic != 2:
        gu = tuple(-c for c in u)
    else:
        gu = linalg.vec_add(u, tuple(a.unit))
    ksub = Subalgebra(a, [tuple(a.unit), u], verify=True)
    c_sub = centralizer(a, ksub)
    # C' = {x : x k = gamma(k) x}
    lu = a.lmul_matrix(u)
    rg = a.rmul_matrix(u)
    # x u = gamma(u) x  <=>  R_u(x) - L_{gamma(u)}(x) = 0
    lg = a.lmul_matrix(gu)
    rows = [[rg[i][j] - lg[i][j] for j in range(a.dim)] for i in range(a.dim)]
    cprime = linalg.kernel(rows, ctx)
    if len(c_sub.basis) + len(cprime) != a.dim:
        raise DecompositionError("A != C + C' for the given K")
    co = linalg.in_span([*c_sub.basis, *cprime], a.el(e), ctx)
    if co is None:
        raise DecompositionError("hyperbolic idempotent does not decompose")
    v = _element_from_coords(a, list(c_sub.basis), co[: len(c_sub.basis)])
    w = _element_from_coords(a, list(cprime), co[len(c_sub.basis):])
    tag, res = inverse_or_kernel(a, v)
    if tag == "singular":
        # restrict the kernel to C: solve v * x = 0 with x in span(C)
        lmv = a.lmul_matrix(v)
        cols = [linalg.mat_vec(lmv, b) for b in c_sub.basis]
        rows = [[cols[k][i] for k in range(len(c_sub.basis))] for i in range(a.dim)]
        ker = linalg.kernel(rows, ctx)
        x = _element_from_coords(a, list(c_sub.basis), ker[0])
        if not linalg.vec_is_zero(a.mul(s.apply(x), x)):
            raise DecompositionError("singular v but sigma(x) x != 0: invalid state")
        raise IsotropyWitness(x)
    vprime = res
    wv = a.mul(w, vprime)
    if s.apply(wv) != tuple(-c for c in wv):
        raise DecompositionError("sigma(w v') != -w v'")
    if a.mul(wv, wv) != tuple(a.unit):
        raise DecompositionError("(w v')^2 != 1")
    basis = [tuple(a.unit), u, wv, a.mul(u, wv)]
    sub = Subalgebra(a, basis, verify=True)
    restr = restricted_involution(s, sub)
    if restr.classify().type != "orthogonal":
        raise DecompositionError("sigma restricted to Q is not orthogonal")
    # sigma(1 + wv')(1 + wv') = 1 - (wv')^2 = 0: isotropy, hence metabolic
    iso = a.mul(s.apply(linalg.vec_add(tuple(a.unit), wv)),
                linalg.vec_add(tuple(a.unit), wv))
    if not linalg.vec_is_zero(iso):
        raise DecompositionError("isotropy identity fails on 1 + wv'")
    if ctx.characteristic != 2:
        e_q = linalg.vec_scale(ctx(2).inv(), linalg.vec_add(tuple(a.unit), wv))
        if not verify_metabolic_witness(restr, restr.algebra.el(sub.coords(e_q))):
            raise DecompositionError("restriction is not metabolic")
    return sub


def m2_metabolic_uv(a: StructureAlgebra):
    """The explicit (u, v) = (e22, e12 + e21) pair of a 2x2 matrix algebra."""
    if a.provenance.kind != "matrix" or a.provenance.params[0] != 2:
        raise DecompositionError("explicit (u, v) lives on a 2x2 matrix algebra")
    u = a.basis_vec(3)
    v = linalg.vec_add(a.basis_vec(1), a.basis_vec(2))
    return u, v
