"""Etale subalgebras: etaleness tests, Klein groups of biquadratic algebras,
neatness verification, and the search for neat biquadratic subalgebras.

Biquadratic algebras are handled through two normalized quadratic generators
(g^2 in F away from characteristic 2, g^2 + g in F in characteristic 2); the
three order-2 automorphisms act by sign flips / unit shifts on the
generators, and every produced Klein group is verified from scratch.

The neat-subalgebra search is provenance-first: products and sums of the
recorded quaternion / matrix-unit generators give the candidates the theory
promises on constructed instances; a bounded seeded quadric search over
2-planes is the fallback, and an empty result is an honest outcome (instances
may carry explicit generators instead).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .fields import FieldElem
from . import linalg
from .linalg import Vec
from .algebras import (
    AlgebraError,
    StructureAlgebra,
    Subalgebra,
    _min_poly,
    _qpoly_divmod,
    _qpoly_ext_gcd,
    _qpoly_mul,
    _rational_roots,
    tensor_embed_left,
    tensor_embed_right,
)
from .involutions import Involution, require_symd_one


class EtaleError(ValueError):
    pass


@dataclass
class EtaleSub:
    """A commutative etale subalgebra with optional generator provenance."""

    sub: Subalgebra
    generators: list[Vec] = dc_field(default_factory=list)

    @property
    def dim(self):
        return self.sub.dim


def is_etale(s: Subalgebra) -> bool:
    """Etaleness by nondegeneracy of the trace form of the regular representation."""
    if not s.is_commutative():
        raise EtaleError("etaleness test requires a commutative subalgebra")
    return s.as_algebra().trace_form_nondegenerate()


def normalize_quadratic_generator(a: StructureAlgebra, g: Vec) -> tuple[Vec, FieldElem]:
    """Normalize g (quadratic over F) to u with u^2 in F (char != 2) or
    u^2 + u in F (characteristic 2); returns (u, parameter)."""
    ctx = a.ctx
    g = tuple(g)
    gg = a.mul(g, g)
    span = [tuple(a.unit), g]
    co = linalg.in_span(span, gg, ctx)
    if co is None:
        raise EtaleError("element is not quadratic over the ground field")
    beta, alpha = co  # g^2 = beta + alpha g
    if ctx.characteristic != 2:
        u = linalg.vec_sub(g, linalg.vec_scale(alpha / ctx(2), tuple(a.unit)))
        d = a.is_scalar(a.mul(u, u))
        if d is None or d.is_zero():
            raise EtaleError("generator normalizes to a nilpotent: not etale")
        return u, d
    if alpha.is_zero():
        raise EtaleError("g^2 in F in characteristic 2: inseparable, not etale")
    u = linalg.vec_scale(alpha.inv(), g)
    c = a.is_scalar(linalg.vec_sub(a.mul(u, u), u))
    if c is None:
        raise EtaleError("Artin-Schreier normalization failed")
    return u, c


class BiquadraticL:
    """A biquadratic etale subalgebra with its Klein four-group.

    gamma_1 fixes u1, gamma_2 fixes u2, gamma_3 = gamma_1 gamma_2 fixes
    u3 = u1*u2 (u1 + u2 in characteristic 2).
    """

    def __init__(self, a: StructureAlgebra, g1: Vec, g2: Vec, verify: bool = True):
        self.algebra = a
        self.u1, self.p1 = normalize_quadratic_generator(a, g1)
        self.u2, self.p2 = normalize_quadratic_generator(a, g2)
        if a.mul(self.u1, self.u2) != a.mul(self.u2, self.u1):
            raise EtaleError("generators do not commute")
        self.u12 = a.mul(self.u1, self.u2)
        self.basis = [tuple(a.unit), self.u1, self.u2, self.u12]
        if linalg.rank([list(v) for v in self.basis]) != 4:
            raise EtaleError("generators span fewer than 4 dimensions")
        self.sub = Subalgebra(a, self.basis, verify=True)
        if a.ctx.characteristic != 2:
            self.u3 = self.u12
            self.p3 = self.p1 * self.p2
        else:
            self.u3 = linalg.vec_add(self.u1, self.u2)
            self.p3 = self.p1 + self.p2
        if verify:
            self.verify()

    def _gamma_gen_images(self, i: int) -> tuple[Vec, Vec]:
        a = self.algebra
        one = tuple(a.unit)
        if a.ctx.characteristic != 2:
            neg = lambda v: tuple(-c for c in v)
            return {
                1: (self.u1, neg(self.u2)),
                2: (neg(self.u1), self.u2),
                3: (neg(self.u1), neg(self.u2)),
            }[i]
        shift = lambda v: linalg.vec_add(v, one)
        return {
            1: (self.u1, shift(self.u2)),
            2: (shift(self.u1), self.u2),
            3: (shift(self.u1), shift(self.u2)),
        }[i]

    def gamma(self, i: int, x: Vec) -> Vec:
        """Apply gamma_i to an element of L (ambient coordinates)."""
        a = self.algebra
        co = linalg.in_span(self.basis, tuple(x), a.ctx)
        if co is None:
            raise EtaleError("gamma applied to an element outside L")
        im1, im2 = self._gamma_gen_images(i)
        img = linalg.vec_scale(co[0], tuple(a.unit))
        img = linalg.vec_add(img, linalg.vec_scale(co[1], im1))
        img = linalg.vec_add(img, linalg.vec_scale(co[2], im2))
        img = linalg.vec_add(img, linalg.vec_scale(co[3], a.mul(im1, im2)))
        return img

    def fixed_basis(self, i: int) -> list[Vec]:
        u = {1: self.u1, 2: self.u2, 3: self.u3}[i]
        return [tuple(self.algebra.unit), u]

    def fixed_gen(self, i: int) -> Vec:
        return {1: self.u1, 2: self.u2, 3: self.u3}[i]

    def fixed_param(self, i: int) -> FieldElem:
        """u_i^2 (char != 2) or u_i^2 + u_i (characteristic 2) in F."""
        return {1: self.p1, 2: self.p2, 3: self.p3}[i]

    def fixed_is_split(self, i: int) -> bool:
        ctx = self.algebra.ctx
        p = self.fixed_param(i)
        if ctx.characteristic != 2:
            return ctx.is_square(p)
        from .quadforms import _as_solve

        return _as_solve(ctx, p) is not None

    def fixed_idempotents(self, i: int) -> list[Vec]:
        """The two primitive idempotents of a split quadratic fixed algebra."""
        a = self.algebra
        ctx = a.ctx
        u = self.fixed_gen(i)
        one = tuple(a.unit)
        if ctx.characteristic != 2:
            r = ctx.sqrt(self.fixed_param(i))
            if r is None:
                raise EtaleError("fixed algebra is a field: no idempotents")
            half = ctx(2).inv()
            e = linalg.vec_scale(half, linalg.vec_add(one, linalg.vec_scale(r.inv(), u)))
        else:
            from .quadforms import _as_solve

            w = _as_solve(ctx, self.fixed_param(i))
            if w is None:
                raise EtaleError("fixed algebra is a field: no idempotents")
            e = linalg.vec_add(u, linalg.vec_scale(w, one))
        if a.mul(e, e) != e:
            raise EtaleError("idempotent construction failed")
        return [e, linalg.vec_sub(one, e)]

    def verify(self):
        a = self.algebra
        if not is_etale(self.sub):
            raise EtaleError("generated subalgebra is not etale")
        for i in (1, 2, 3):
            for x, y in itertools.product(self.basis, repeat=2):
                prod = a.mul(x, y)
                if self.gamma(i, prod) != a.mul(self.gamma(i, x), self.gamma(i, y)):
                    raise EtaleError(f"gamma_{i} is not multiplicative")
            for b in self.basis:
                if self.gamma(i, self.gamma(i, b)) != tuple(b):
                    raise EtaleError(f"gamma_{i} is not of order 2")
            if len(_fixed_coeff_space(self, [i])) != 2:
                raise EtaleError(f"fixed algebra of gamma_{i} is not quadratic")
            fsub = Subalgebra(a, self.fixed_basis(i), verify=True)
            if not is_etale(fsub):
                raise EtaleError(f"fixed algebra of gamma_{i} is not etale")
        for b in self.basis:
            if self.gamma(1, self.gamma(2, b)) != self.gamma(3, b):
                raise EtaleError("gamma_1 gamma_2 != gamma_3")
        if len(_fixed_coeff_space(self, [1, 2, 3])) != 1:
            raise EtaleError("fixed algebra of the full Klein group is not F")

    def contains(self, v: Vec) -> bool:
        return linalg.in_span(self.basis, tuple(v), self.algebra.ctx) is not None

    def same_subalgebra(self, other: "BiquadraticL") -> bool:
        return all(other.contains(b) for b in self.basis)


def _fixed_coeff_space(L: BiquadraticL, which: list[int]) -> list[Vec]:
    """Coefficient vectors c with sum c_j b_j fixed by the listed gammas."""
    rows = []
    for i in which:
        diffs = [linalg.vec_sub(L.gamma(i, b), b) for b in L.basis]
        for k in range(len(diffs[0])):
            rows.append([diffs[j][k] for j in range(4)])
    return linalg.kernel(rows, L.algebra.ctx)


# -- Klein group from a raw etale subalgebra -------------------------------------------


def galois_group_biquadratic(a: StructureAlgebra, L: EtaleSub,
                             seed: int = 0) -> BiquadraticL:
    """The Klein four-group of a biquadratic etale algebra of dimension 4.

    Generators come from provenance when present, else from idempotent
    combinations, else from a bounded quadratic-element scan; quartic fields
    that fail the scan are classified through the resolvent cubic of a
    primitive element, so cyclic quartics raise a clean error.
    """
    if L.dim != 4:
        raise EtaleError("biquadratic algebras have dimension 4")
    if L.generators:
        return BiquadraticL(a, L.generators[0], L.generators[1])
    if not is_etale(L.sub):
        raise EtaleError("subalgebra is not etale")
    pair = _generator_pair_from_idempotents(a, L, seed)
    if pair is None:
        pair = _generator_pair_scan(a, L, seed)
    if pair is None:
        if a.ctx.characteristic == 0 and not _klein_by_resolvent(a, L, seed):
            raise EtaleError(
                "etale quartic algebra is not biquadratic (resolvent cubic "
                "does not split: cyclic or non-normal)"
            )
        raise EtaleError("biquadratic generators not located within budget; "
                         "supply explicit generators")
    return BiquadraticL(a, pair[0], pair[1])


def _idempotents_of(a: StructureAlgebra, L: EtaleSub, seed: int) -> list[Vec]:
    """Bounded primitive-idempotent scan inside a small commutative subalgebra."""
    ctx = a.ctx
    rng = random.Random(seed)
    one = tuple(a.unit)
    sub_alg = L.sub.as_algebra()
    found: list[Vec] = []
    cands = [tuple(b) for b in L.sub.basis]
    for x, y in itertools.combinations(L.sub.basis, 2):
        cands.append(linalg.vec_add(x, y))
        cands.append(linalg.vec_sub(x, y))
    for _ in range(40):
        v = a.zero()
        for b in L.sub.basis:
            v = linalg.vec_add(v, linalg.vec_scale(ctx(rng.randint(-2, 2)), b))
        cands.append(v)
    for x in cands:
        if a.mul(x, x) == x and not linalg.vec_is_zero(x) and x != one:
            if x not in found:
                found.append(x)
        elif ctx.characteristic == 0:
            co = L.sub.coords(x)
            if co is None:
                continue
            try:
                m = _min_poly(sub_alg, co)
            except AlgebraError:
                continue
            for lam in _rational_roots(m):
                e = _poly_projection(a, x, m, lam)
                if e is not None and e != one and not linalg.vec_is_zero(e):
                    if e not in found:
                        found.append(e)
    return _refine_idempotents(a, found, one)


def _poly_projection(a: StructureAlgebra, x: Vec, m, lam) -> Vec | None:
    """Idempotent projecting onto the lam-generalized eigenspace of x."""
    f = [-lam, Fraction(1)]
    g, rem = _qpoly_divmod(list(m), f)
    if rem:
        return None
    while True:
        g2, rem2 = _qpoly_divmod(g, f)
        if rem2:
            break
        f = _qpoly_mul(f, [-lam, Fraction(1)])
        g = g2
    if len(g) <= 1:
        return None
    gg, s, t = _qpoly_ext_gcd(f, g)
    if len(gg) != 1:
        return None
    tg = _qpoly_mul([c / gg[0] for c in t], g)
    acc = a.zero()
    power = tuple(a.unit)
    for c in tg:
        acc = linalg.vec_add(acc, linalg.vec_scale(a.ctx(c), power))
        power = a.mul(power, x)
    return acc if a.mul(acc, acc) == acc else None


def _refine_idempotents(a: StructureAlgebra, pool, one) -> list[Vec]:
    prims = [one]
    for e in pool:
        new = []
        for p in prims:
            pe = a.mul(p, e)
            if linalg.vec_is_zero(pe) or pe == p:
                new.append(p)
            elif a.mul(pe, pe) == pe:
                new.append(pe)
                new.append(linalg.vec_sub(p, pe))
            else:
                new.append(p)
        prims = [p for p in new if not linalg.vec_is_zero(p)]
    return prims


def _generator_pair_from_idempotents(a: StructureAlgebra, L: EtaleSub, seed: int):
    ctx = a.ctx
    prims = _idempotents_of(a, L, seed)
    if len(prims) == 4:
        f1, f2, f3, f4 = prims
        if ctx.characteristic != 2:
            g1 = linalg.vec_sub(linalg.vec_add(f1, f2), linalg.vec_add(f3, f4))
            g2 = linalg.vec_sub(linalg.vec_add(f1, f3), linalg.vec_add(f2, f4))
        else:
            g1 = linalg.vec_add(f1, f2)
            g2 = linalg.vec_add(f1, f3)
        return g1, g2
    if len(prims) == 2:
        f1, f2 = prims
        b1 = linalg.span_basis([a.mul(f1, b) for b in L.sub.basis])
        b2 = linalg.span_basis([a.mul(f2, b) for b in L.sub.basis])
        if len(b1) != 2 or len(b2) != 2:
            return None
        t1 = _component_generator(a, f1, b1)
        t2 = _component_generator(a, f2, b2)
        if t1 is None or t2 is None:
            return None
        if ctx.characteristic != 2:
            (u1, al), (u2, be) = t1, t2
            c = ctx.sqrt(al / be)
            if c is None:
                return None  # components not isomorphic: not biquadratic
            g1 = linalg.vec_add(u1, linalg.vec_scale(c, u2))
            g2 = linalg.vec_sub(f1, f2)
            return g1, g2
        (u1, c1), (u2, c2) = t1, t2
        from .quadforms import _as_solve

        s = _as_solve(ctx, c1 + c2)
        if s is None:
            return None
        g1 = linalg.vec_add(u1, linalg.vec_add(u2, linalg.vec_scale(s, f2)))
        g2 = f1
        return g1, g2
    return None


def _component_generator(a: StructureAlgebra, f: Vec, comp_basis):
    """(t, param) with t in the component f*L: t^2 = param*f away from
    characteristic 2, t^2 + t = param*f in characteristic 2."""
    ctx = a.ctx
    other = next((b for b in comp_basis if linalg.in_span([f], b, ctx) is None), None)
    if other is None:
        return None
    co = linalg.in_span([tuple(f), tuple(other)], a.mul(other, other), ctx)
    if co is None:
        return None
    beta, alpha = co
    if ctx.characteristic != 2:
        t = linalg.vec_sub(other, linalg.vec_scale(alpha / ctx(2), f))
        val = linalg.in_span([tuple(f)], a.mul(t, t), ctx)
        if val is None or val[0].is_zero():
            return None
        return t, val[0]
    if alpha.is_zero():
        return None
    t = linalg.vec_scale(alpha.inv(), other)
    val = linalg.in_span([tuple(f)], linalg.vec_sub(a.mul(t, t), t), ctx)
    if val is None:
        return None
    return t, val[0]


def _generator_pair_scan(a: StructureAlgebra, L: EtaleSub, seed: int):
    """Bounded scan for two independent quadratic generators of L."""
    ctx = a.ctx
    rng = random.Random(seed)
    one = tuple(a.unit)
    cands = [tuple(b) for b in L.sub.basis]
    for x, y in itertools.combinations(L.sub.basis, 2):
        cands.append(linalg.vec_add(x, y))
        cands.append(linalg.vec_sub(x, y))
    for _ in range(60):
        v = a.zero()
        for b in L.sub.basis:
            v = linalg.vec_add(v, linalg.vec_scale(ctx(rng.randint(-3, 3)), b))
        cands.append(v)
    quads = []
    for x in cands:
        if linalg.in_span([one], x, ctx) is not None:
            continue
        try:
            u, _ = normalize_quadratic_generator(a, x)
        except EtaleError:
            continue
        if u not in quads:
            quads.append(u)
    for g1, g2 in itertools.combinations(quads, 2):
        if a.mul(g1, g2) != a.mul(g2, g1):
            continue
        if linalg.rank([list(one), list(g1), list(g2), list(a.mul(g1, g2))]) == 4:
            return g1, g2
    return None


def _shift_poly(m, s):
    """Coefficients (constant first) of m(x + s), exact synthetic expansion."""
    out = [Fraction(m[0])]
    cur = [Fraction(1)]  # coefficients of (x+s)^k
    for k in range(1, len(m)):
        nxt = [Fraction(0)] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i] += c * s
            nxt[i + 1] += c
        cur = nxt
        while len(out) < len(cur):
            out.append(Fraction(0))
        for i, c in enumerate(cur):
            out[i] += Fraction(m[k]) * c
    return out


def _klein_by_resolvent(a: StructureAlgebra, L: EtaleSub, seed: int) -> bool:
    """Does the quartic etale algebra have Klein Galois type?  Decided by the
    resolvent cubic of a primitive element (rational-side fields)."""
    rng = random.Random(seed)
    sub_alg = L.sub.as_algebra()
    for _ in range(60):
        co = [Fraction(rng.randint(-4, 4)) for _ in range(4)]
        x = tuple(a.ctx(c) for c in co)
        xco = L.sub.coords(_lin_comb(a, L.sub.basis, co))
        if xco is None:
            continue
        try:
            m = _min_poly(sub_alg, xco)
        except AlgebraError:
            continue
        if len(m) != 5:
            continue
        dep = _shift_poly(m, -m[3] / 4)  # depressed quartic y^4 + p y^2 + q y + r
        r, q, p = dep[0], dep[1], dep[2]
        resolvent = [4 * p * r - q * q, -4 * r, -p, Fraction(1)]
        return len(_rational_roots(resolvent)) >= 3
    raise EtaleError("no primitive element found for the resolvent test")


def _lin_comb(a: StructureAlgebra, basis, coeffs):
    v = a.zero()
    for c, b in zip(coeffs, basis):
        v = linalg.vec_add(v, linalg.vec_scale(a.ctx(c), b))
    return v


# -- neatness ---------------------------------------------------------------------------


def is_neat(s: Involution, S: EtaleSub) -> bool:
    """Neatness: etale, inside Symm(sigma), with A free as a left S-module.

    Freeness is tested per primitive idempotent e of S: the F-dimension of
    eA divided by the component degree [eS : F] must be constant.
    """
    a = s.algebra
    for b in S.sub.basis:
        if s.apply(b) != tuple(b):
            raise EtaleError("subalgebra is not contained in Symm(sigma)")
    if not is_etale(S.sub):
        return False
    prims = _primitive_idempotents(a, S)
    ranks = []
    for e in prims:
        comp_dim = len(linalg.span_basis([a.mul(e, b) for b in S.sub.basis]))
        # left multiplication by an idempotent is a projection onto eA,
        # so dim_F(eA) is its trace
        tr = a.trace(e)
        dim_eA = int(tr.co[0]) if a.ctx.characteristic == 0 else None
        if dim_eA is None:
            lme = a.lmul_matrix(e)
            dim_eA = linalg.rank(lme)
        if dim_eA % comp_dim:
            return False
        ranks.append(dim_eA // comp_dim)
    return len(set(ranks)) == 1


def _primitive_idempotents(a: StructureAlgebra, S: EtaleSub) -> list[Vec]:
    """Primitive idempotents of S; definitive when generators are recorded."""
    one = tuple(a.unit)
    ctx = a.ctx
    if S.generators:
        fams = []
        for g in S.generators:
            u, p = normalize_quadratic_generator(a, g)
            if ctx.characteristic != 2:
                r = ctx.sqrt(p)
                if r is None:
                    fams.append([one])
                    continue
                half = ctx(2).inv()
                e = linalg.vec_scale(half, linalg.vec_add(one, linalg.vec_scale(r.inv(), u)))
            else:
                from .quadforms import _as_solve

                w = _as_solve(ctx, p)
                if w is None:
                    fams.append([one])
                    continue
                e = linalg.vec_add(u, linalg.vec_scale(w, one))
            fams.append([e, linalg.vec_sub(one, e)])
        prims = [one]
        for fam in fams:
            prims = [a.mul(p, e) for p in prims for e in fam]
        prims = [p for p in prims if not linalg.vec_is_zero(p)]
        for p in prims:
            if a.mul(p, p) != p:
                raise EtaleError("idempotent family construction failed")
        return prims
    return _refine_idempotents(a, _idempotents_of(a, S, seed=0), one)


# -- neat biquadratic search --------------------------------------------------------------


def _leaf_candidates(a: StructureAlgebra) -> list[Vec]:
    """Distinguished elements from the construction tree, embedded in A."""
    prov = a.provenance
    if prov.kind == "quaternion":
        return [a.basis_vec(1), a.basis_vec(2), a.basis_vec(3)]
    if prov.kind == "matrix":
        n = prov.params[0]
        ctx = a.ctx
        out = [a.basis_vec(i * n + i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                eij, eji = a.basis_vec(i * n + j), a.basis_vec(j * n + i)
                eii, ejj = a.basis_vec(i * n + i), a.basis_vec(j * n + j)
                out.append(linalg.vec_add(eij, eji))
                out.append(linalg.vec_sub(eij, eji))
                out.append(linalg.vec_sub(eii, ejj))
        # sign vectors sum(+-e_ii), skipping the unit itself
        for mask in range(1, 1 << (n - 1)):
            v = a.zero()
            for i in range(n):
                sgn = -1 if (mask >> i) & 1 else 1
                v = linalg.vec_add(v, linalg.vec_scale(ctx(sgn), a.basis_vec(i * n + i)))
            out.append(v)
        return out
    if prov.kind == "etale2":
        return [a.basis_vec(1)]
    if prov.kind == "tensor":
        l, r = prov.factors
        lc = [tensor_embed_left(a, v) for v in _leaf_candidates(l)]
        rc = [tensor_embed_right(a, v) for v in _leaf_candidates(r)]
        out = lc + rc
        for lv in lc:
            for rv in rc:
                out.append(a.mul(lv, rv))
        return out
    if prov.kind == "double":
        a0 = prov.factors[0]
        return [tuple(v) + tuple(v) for v in _leaf_candidates(a0)]
    return [a.basis_vec(i) for i in range(a.dim)]


def find_neat_biquadratic(s: Involution, height_bound: int = 200, seed: int = 0,
                          want: int = 2) -> list[BiquadraticL]:
    """Search for neat biquadratic subalgebras of (A, sigma) of capacity 4.

    Provenance candidates first, then a bounded seeded quadric search over
    2-planes of Symd; returns up to `want` distinct verified hits.
    """
    a = s.algebra
    ctx = a.ctx
    cls = s.classify()
    if cls.capacity != 4:
        raise EtaleError("neat biquadratic search requires capacity 4")
    require_symd_one(s)
    cache = getattr(s, "_neat_cache", None)
    if cache is None:
        cache = s._neat_cache = {}
    ckey = (height_bound, seed, want)
    for (hb, sd, w), hits in cache.items():
        if sd == seed and hb == height_bound and w >= want:
            return hits[:want]
    if ckey in cache:
        return cache[ckey]

    one = tuple(a.unit)
    pool: list[Vec] = []
    seen: set = set()
    pool_cap = 48

    def consider(x: Vec):
        if len(pool) >= pool_cap or linalg.vec_is_zero(x):
            return
        sx = s.apply(x)
        if sx != tuple(x):
            x = linalg.vec_add(x, sx)
            if linalg.vec_is_zero(x):
                return
        key = tuple(c.co for c in x)
        if key in seen:
            return
        if a.is_scalar(x) is not None:
            return
        sq = a.mul(x, x)
        if ctx.characteristic != 2:
            ok = a.is_scalar(sq) is not None
        else:
            ok = linalg.in_span([one, tuple(x)], sq, ctx) is not None
        if ok:
            seen.add(key)
            pool.append(tuple(x))

    leaves = _leaf_candidates(a)
    for x in leaves:
        consider(x)
    for x, y in itertools.combinations(leaves, 2):
        if len(pool) >= pool_cap:
            break
        consider(a.mul(x, y))
        consider(linalg.vec_add(x, y))
        consider(linalg.vec_sub(x, y))

    hits: list[BiquadraticL] = []

    def try_pair(g1: Vec, g2: Vec):
        if len(hits) >= want:
            return
        if a.mul(g1, g2) != a.mul(g2, g1):
            return
        if linalg.rank([list(one), list(g1), list(g2), list(a.mul(g1, g2))]) != 4:
            return
        try:
            L = BiquadraticL(a, g1, g2)
        except (EtaleError, AlgebraError):
            return
        es = EtaleSub(L.sub, generators=[L.u1, L.u2])
        try:
            if not is_neat(s, es):
                return
        except EtaleError:
            return
        if any(h.same_subalgebra(L) for h in hits):
            return
        hits.append(L)

    for g1, g2 in itertools.combinations(pool, 2):
        try_pair(g1, g2)
        if len(hits) >= want:
            cache[ckey] = hits
            return hits

    rng = random.Random(seed)
    symd = s.space("symd")
    extra: list[Vec] = []
    for _ in range(120):
        if len(extra) >= 8:
            break
        p = _lin_comb(a, symd, [rng.randint(-2, 2) for _ in symd])
        q = _lin_comb(a, symd, [rng.randint(-2, 2) for _ in symd])
        hit = _plane_quadric_point(a, s, p, q)
        if hit is not None and hit not in extra:
            extra.append(hit)
    for g1, g2 in itertools.combinations(pool + extra, 2):
        try_pair(g1, g2)
        if len(hits) >= want:
            cache[ckey] = hits
            return hits
    cache[ckey] = hits
    return hits


def _plane_quadric_point(a: StructureAlgebra, s: Involution, p: Vec, q: Vec) -> Vec | None:
    """A nonzero x = alpha p + beta q with x^2 in F*1, solved exactly on the plane."""
    ctx = a.ctx
    one = tuple(a.unit)
    if linalg.vec_is_zero(p) or linalg.vec_is_zero(q):
        return None
    pp = a.mul(p, p)
    qq = a.mul(q, q)
    pq = linalg.vec_add(a.mul(p, q), a.mul(q, p))
    pivot = next(k for k in range(a.dim) if not one[k].is_zero())
    inv_piv = one[pivot].inv()

    def reduced(vec, k):
        return vec[k] - one[k] * inv_piv * vec[pivot]

    live = []
    for k in range(a.dim):
        if k == pivot:
            continue
        c0, c1, c2 = reduced(pp, k), reduced(pq, k), reduced(qq, k)
        if not (c0.is_zero() and c1.is_zero() and c2.is_zero()):
            live.append((c0, c1, c2))
    if not live:
        return p
    c0, c1, c2 = live[0]
    sols = []
    if c0.is_zero():
        sols.append((ctx.one(), ctx.zero()))
        if not c1.is_zero():
            sols.append((-c2 / c1, ctx.one()))
    elif ctx.characteristic != 2:
        disc = c1 * c1 - ctx(4) * c0 * c2
        r = ctx.sqrt(disc)
        if r is not None:
            for sgn in (r, -r):
                sols.append(((-c1 + sgn) / (ctx(2) * c0), ctx.one()))
    else:
        if c1.is_zero():
            r = ctx.sqrt(c2 / c0)
            if r is not None:
                sols.append((r, ctx.one()))
        else:
            from .quadforms import _as_solve

            tau = _as_solve(ctx, c0 * c2 / (c1 * c1))
            if tau is not None:
                for t in (tau, tau + ctx.one()):
                    sols.append((t * c1 / c0, ctx.one()))
    for al, be in sols:
        x = linalg.vec_add(linalg.vec_scale(al, p), linalg.vec_scale(be, q))
        if linalg.vec_is_zero(x):
            continue
        if all((al * al * a0 + al * be * a1 + be * be * a2).is_zero()
               for a0, a1, a2 in live):
            return x
    return None
