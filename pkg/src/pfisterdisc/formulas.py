"""Closed-form cross-checks for capacity-4 instances of recognized shape.

For an orthogonal degree-4 factor (B, tau) with discriminant class d:

  orthogonal (char != 2):      P = <1, -d>
  unitary  (B (x) (Z, can)):   P = <1, -d> (x) N_{Z/F}
  symplectic (B (x) (Q, can)): P = <1, -d> (x) Nrd_Q

plus the first-principles unitary variant through an invertible twisted
element w (P = <1, -Nrd(w)> (x) N_{N/F}), the norm-representation property of
neat quadratic subalgebras, and the 2-fold Pfister shape check with Arason
slot recovery.  Shape recognition is construction-provenance only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .linalg import Vec
from .algebras import (
    StructureAlgebra,
    algebra_inverse,
    reduced_norm,
    tensor_product,
)
from .involutions import Involution, orth_discriminant, tensor_involution
from .quadforms import (
    QuadForm,
    binary_block,
    diagonal_form,
    is_isometric,
    is_isotropic,
    orth_sum,
    pfister_slots,
    represent_value,
    tensor_bilinear,
)
from .pipeline import DiscPfister, discriminant_pfister
from .etale import normalize_quadratic_generator


class ShapeError(ValueError):
    pass


@dataclass
class Cap4Shape:
    """Provenance-recognized shape of a capacity-4 instance."""

    kind: str                       # orthogonal | unitary | symplectic | generic
    orth_factors: list              # [(algebra, involution)] forming (B, tau)
    cofactor: tuple | None          # (algebra, involution) of (Z, can) or (Q, can)


def _flatten(s: Involution):
    if s.hint and s.hint[0] == "tensor":
        return _flatten(s.hint[1]) + _flatten(s.hint[2])
    return [(s.algebra, s)]


def recognize_shape(s: Involution) -> Cap4Shape:
    """Split the factor list into the degree-4 orthogonal part and the
    canonical cofactor; raw input is reported as generic."""
    cls = s.classify()
    if cls.capacity != 4:
        raise ShapeError("shape recognition requires capacity 4")
    if s.hint[0] == "adjoint" and cls.type == "orthogonal":
        return Cap4Shape("orthogonal", [(s.algebra, s)], None)
    if s.hint[0] != "tensor":
        return Cap4Shape("generic", [], None)
    parts = _flatten(s)
    canon = [(a, i) for a, i in parts if i.hint[0] in ("canonical_quaternion",
                                                       "canonical_etale2")]
    rest = [(a, i) for a, i in parts if i.hint[0] not in ("canonical_quaternion",
                                                          "canonical_etale2")]
    if cls.type == "orthogonal":
        if all(i.classify().type == "orthogonal" for _, i in parts):
            return Cap4Shape("orthogonal", parts, None)
        return Cap4Shape("generic", [], None)
    if len(canon) != 1 or not rest:
        return Cap4Shape("generic", [], None)
    cof_alg, cof_inv = canon[0]
    kind = "unitary" if cof_inv.hint[0] == "canonical_etale2" else "symplectic"
    deg = 1
    for a, i in rest:
        if i.classify().type != "orthogonal":
            return Cap4Shape("generic", [], None)
        deg *= i.classify().degree
    if deg != 4:
        return Cap4Shape("generic", [], None)
    return Cap4Shape(kind, rest, canon[0])


def orth_part(shape: Cap4Shape):
    """(B, tau) rebuilt as a standalone algebra with involution."""
    if not shape.orth_factors:
        raise ShapeError("no orthogonal part recognized")
    alg, inv = shape.orth_factors[0]
    for a2, i2 in shape.orth_factors[1:]:
        t = tensor_product(alg, a2)
        inv = tensor_involution(t, inv, i2)
        alg = t
    return alg, inv


def formula_orthogonal(tau: Involution) -> QuadForm:
    """<1, -d> for an orthogonal capacity-4 involution, char != 2."""
    if tau.algebra.ctx.characteristic == 2:
        raise ShapeError("the orthogonal closed form needs characteristic != 2")
    d = orth_discriminant(tau)
    return diagonal_form(tau.algebra.ctx, [1, -d])


def _norm_form_etale2(z_alg: StructureAlgebra) -> QuadForm:
    """The binary norm form of a quadratic etale algebra from its parameter."""
    ctx = z_alg.ctx
    p = z_alg.provenance.params[0]
    if ctx.characteristic != 2:
        return diagonal_form(ctx, [ctx.one(), -p])
    return binary_block(ctx, 1, p)


def quaternion_norm_form(q_alg: StructureAlgebra) -> QuadForm:
    """The reduced norm form of a quaternion algebra from its parameters.

    char != 2: <1, -a, -b, ab>; characteristic 2 (u^2=a, v^2=b, uv+vu=1):
    [1, ab] perp [a, b] on the basis (1, uv, u, v).
    """
    ctx = q_alg.ctx
    if q_alg.provenance.kind != "quaternion":
        raise ShapeError("norm form needs quaternion provenance")
    a, b = q_alg.provenance.params
    if ctx.characteristic != 2:
        return diagonal_form(ctx, [ctx.one(), -a, -b, a * b])
    return orth_sum(binary_block(ctx, 1, a * b), binary_block(ctx, a, b))


def formula_unitary(s: Involution, shape: Cap4Shape) -> QuadForm:
    b_alg, tau = orth_part(shape)
    d = orth_discriminant(tau)
    nz = _norm_form_etale2(shape.cofactor[0])
    return tensor_bilinear([s.algebra.ctx(1), s.algebra.ctx(-d)], nz)


def formula_symplectic(s: Involution, shape: Cap4Shape) -> QuadForm:
    b_alg, tau = orth_part(shape)
    d = orth_discriminant(tau)
    nrd = quaternion_norm_form(shape.cofactor[0])
    return tensor_bilinear([s.algebra.ctx(1), s.algebra.ctx(-d)], nrd)


def unitary_w_variant(s: Involution, disc: DiscPfister, seed: int = 0) -> QuadForm:
    """First-principles unitary form <1, -Nrd(w)> (x) N_{N/F}.

    w is an invertible symmetric element with w l = gamma_1(l) w for l in L;
    N is the fixed algebra of gamma_1 (x) sigma|_Z inside L^{gamma_2} Z.
    """
    a = s.algebra
    ctx = a.ctx
    L = disc.L
    # twisted commutation is linear: solve it inside Symm(sigma)
    symm = s.space("symm")
    rows = []
    for y in (L.u1, L.u2):
        gy = L.gamma(1, y)
        # condition: w y = gamma_1(y) w, i.e. R_y(w) - L_{gamma_1(y)}(w) = 0
        ry = a.rmul_matrix(y)
        lg = a.lmul_matrix(gy)
        diff = [[ry[r][c] - lg[r][c] for c in range(a.dim)] for r in range(a.dim)]
        cols = [linalg.mat_vec(diff, b) for b in symm]
        for r in range(a.dim):
            rows.append([cols[k][r] for k in range(len(symm))])
    coeffs = linalg.kernel(rows, ctx)
    rng = random.Random(seed)
    cands = []
    for co in coeffs:
        v = a.zero()
        for c, b in zip(co, symm):
            v = linalg.vec_add(v, linalg.vec_scale(c, b))
        cands.append(v)
    for _ in range(60):
        v = a.zero()
        for co in coeffs:
            r = ctx(rng.randint(-2, 2))
            piece = a.zero()
            for c, b in zip(co, symm):
                piece = linalg.vec_add(piece, linalg.vec_scale(c, b))
            v = linalg.vec_add(v, linalg.vec_scale(r, piece))
        cands.append(v)
    w = next((v for v in cands if not linalg.vec_is_zero(v)
              and algebra_inverse(a, v) is not None), None)
    if w is None:
        raise ShapeError("no invertible twisted element w within the budget")
    d = reduced_norm(a, w)
    n_form = _fixed_norm_form(s, L)
    return tensor_bilinear([ctx.one(), -d], n_form)


def _fixed_norm_form(s: Involution, L) -> QuadForm:
    """Norm form of N = (L^{gamma_2} Z)^{gamma_1 (x) sigma|_Z}."""
    a = s.algebra
    ctx = a.ctx
    z = a.center()
    zgen = next(v for v in z if linalg.in_span([tuple(a.unit)], v, ctx) is None)
    u2 = L.fixed_gen(2)
    m_basis = [tuple(a.unit), u2, zgen, a.mul(u2, zgen)]
    if linalg.rank([list(v) for v in m_basis]) != 4:
        raise ShapeError("L^{gamma_2} Z is not 4-dimensional")
    # phi = gamma_1 on u2, sigma on the centre
    gu2 = L.gamma(1, u2)
    sz = s.apply(zgen)
    images = {0: tuple(a.unit), 1: gu2, 2: sz, 3: a.mul(gu2, sz)}
    rows = []
    diffs = [linalg.vec_sub(images[k], m_basis[k]) for k in range(4)]
    for r in range(a.dim):
        rows.append([diffs[k][r] for k in range(4)])
    ker = linalg.kernel(rows, ctx)
    if len(ker) != 2:
        raise ShapeError("fixed algebra N does not have dimension 2")
    vecs = []
    for co in ker:
        v = a.zero()
        for c, b in zip(co, m_basis):
            v = linalg.vec_add(v, linalg.vec_scale(c, b))
        vecs.append(v)
    t = next((v for v in vecs if linalg.in_span([tuple(a.unit)], v, ctx) is None), None)
    if t is None:
        t = linalg.vec_add(vecs[0], vecs[1])
    tn, param = normalize_quadratic_generator(a, t)
    if ctx.characteristic != 2:
        return diagonal_form(ctx, [ctx.one(), -param])
    return binary_block(ctx, 1, param)


def neat_norm_represents_disc(tau: Involution, e_gen: Vec) -> bool:
    """Is the discriminant represented by the norm form of E = F[e_gen]?

    Tested as isotropy of N_E perp <-d>.
    """
    a = tau.algebra
    ctx = a.ctx
    d = orth_discriminant(tau)
    u, p = normalize_quadratic_generator(a, e_gen)
    n_e = diagonal_form(ctx, [ctx.one(), -p])
    probe = orth_sum(n_e, diagonal_form(ctx, [-ctx(d)]))
    return is_isotropic(probe)


@dataclass
class TwoFoldReport:
    dim_ok: bool
    represents_one: bool
    slots: tuple | None


def unitary_two_fold_shape(disc: DiscPfister, height_bound: int = 40) -> TwoFoldReport:
    """The unitary discriminant Pfister form is a 2-fold form representing 1;
    report recovered quaternion slot parameters when the search succeeds."""
    pf = disc.pfister
    dim_ok = pf.form.dim == 4 and disc.n == 2
    rep1 = represent_value(pf.form, 1, height_bound) is not None
    slots = pf.slots
    if slots is None and pf.form.ctx.kind == "rational":
        slots = pfister_slots(pf, height_bound)
    return TwoFoldReport(dim_ok=dim_ok, represents_one=rep1, slots=slots)


def crosscheck(s: Involution, height_bound: int = 200, seed: int = 0) -> dict:
    """Compare the recognized closed form against the full pipeline output."""
    shape = recognize_shape(s)
    disc = discriminant_pfister(s, height_bound=height_bound, seed=seed)
    out = {"shape": shape.kind, "agree": None, "w_variant_agree": None}
    if shape.kind == "generic":
        return out
    if shape.kind == "orthogonal":
        formula = formula_orthogonal(s)
    elif shape.kind == "unitary":
        formula = formula_unitary(s, shape)
    else:
        formula = formula_symplectic(s, shape)
    out["formula_form"] = formula
    out["pipeline_form"] = disc.pfister.form
    out["agree"] = is_isometric(formula, disc.pfister.form)
    if shape.kind == "unitary":
        wform = unitary_w_variant(s, disc, seed=seed)
        out["w_variant_agree"] = is_isometric(wform, disc.pfister.form)
    return out
