"""Finite-dimensional algebras by structure constants, with sparse products.

Multiplication tables are stored sparsely (mult[i][j] is a short list of
(index, coefficient) pairs), because every constructor in scope - quaternion
algebras in both characteristics, matrix algebras, tensor products, doubles -
produces monomial-like bases.  Constructors record provenance so that
splitting and reduced norms stay deterministic; a generic matrix-unit search
is the bounded fallback for raw input.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import factor
from .fields import FieldCtx, FieldElem, extend_scalars
from . import linalg
from .linalg import Vec


class AlgebraError(ValueError):
    pass


@dataclass
class Provenance:
    kind: str                     # quaternion | matrix | tensor | double | etale2 | raw | sub
    params: tuple = ()
    factors: tuple = ()           # child StructureAlgebras for tensor/double


class StructureAlgebra:
    """Associative unital algebra on basis e_0..e_{dim-1} over a FieldCtx."""

    def __init__(self, ctx: FieldCtx, mult, unit, labels=None,
                 provenance: Provenance | None = None, verify: bool = True):
        self.ctx = ctx
        self.dim = len(mult)
        self.mult = tuple(
            tuple(tuple((k, ctx(c)) for k, c in cell if not ctx(c).is_zero()) for cell in row)
            for row in mult
        )
        self.unit = tuple(ctx(c) for c in unit)
        self.labels = tuple(labels) if labels else None
        self.provenance = provenance or Provenance("raw")
        self._center = None
        self._trace_vec = None
        if verify:
            self.verify_axioms()

    # -- basic structure -------------------------------------------------------

    def el(self, coords) -> Vec:
        co = tuple(self.ctx(c) for c in coords)
        if len(co) != self.dim:
            raise AlgebraError("coordinate length mismatch")
        return co

    def zero(self) -> Vec:
        return (self.ctx.zero(),) * self.dim

    def scalar(self, c) -> Vec:
        c = self.ctx(c)
        return tuple(c * u for u in self.unit)

    def basis_vec(self, i: int) -> Vec:
        return linalg.unit_vec(self.ctx, self.dim, i)

    def mul(self, x: Vec, y: Vec) -> Vec:
        acc = [self.ctx.zero()] * self.dim
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            row = self.mult[i]
            for j, yj in enumerate(y):
                if yj.is_zero():
                    continue
                f = xi * yj
                for k, c in row[j]:
                    acc[k] = acc[k] + f * c
        return tuple(acc)

    def lmul_matrix(self, x: Vec):
        """Matrix of y -> x*y in the given basis (rows indexed by output)."""
        cols = [self.mul(x, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def rmul_matrix(self, x: Vec):
        cols = [self.mul(self.basis_vec(j), x) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def is_scalar(self, x: Vec) -> FieldElem | None:
        piv = getattr(self, "_unit_pivot", None)
        if piv is None:
            piv = next(i for i, u in enumerate(self.unit) if not u.is_zero())
            self._unit_pivot = piv
            self._unit_pivot_inv = self.unit[piv].inv()
        c = x[piv] * self._unit_pivot_inv
        cz = c.is_zero()
        for xk, uk in zip(x, self.unit):
            if uk.is_zero():
                if not xk.is_zero():
                    return None
            elif cz:
                if not xk.is_zero():
                    return None
            elif xk != c * uk:
                return None
        return c

    def commutes(self, x: Vec, y: Vec) -> bool:
        return self.mul(x, y) == self.mul(y, x)

    # -- verification -----------------------------------------------------------

    def verify_axioms(self):
        idx_unit = self.unit
        for i in range(self.dim):
            b = self.basis_vec(i)
            if self.mul(idx_unit, b) != b or self.mul(b, idx_unit) != b:
                raise AlgebraError(f"unit fails on basis vector {i}")
        if self.provenance.kind in ("tensor", "double"):
            return  # associativity inherited from verified factors
        for i in range(self.dim):
            for j in range(self.dim):
                left_partial = self.mult[i][j]
                for k in range(self.dim):
                    lhs: dict[int, FieldElem] = {}
                    for m, c in left_partial:
                        for l, c2 in self.mult[m][k]:
                            lhs[l] = lhs.get(l, self.ctx.zero()) + c * c2
                    rhs: dict[int, FieldElem] = {}
                    for m, c in self.mult[j][k]:
                        for l, c2 in self.mult[i][m]:
                            rhs[l] = rhs.get(l, self.ctx.zero()) + c * c2
                    for l in set(lhs) | set(rhs):
                        if lhs.get(l, self.ctx.zero()) != rhs.get(l, self.ctx.zero()):
                            raise AlgebraError(f"associativity fails at triple ({i},{j},{k})")

    def trace_vector(self):
        """tr of left multiplication by each basis vector."""
        if self._trace_vec is None:
            out = []
            for k in range(self.dim):
                t = self.ctx.zero()
                for m in range(self.dim):
                    for l, c in self.mult[k][m]:
                        if l == m:
                            t = t + c
                out.append(t)
            self._trace_vec = tuple(out)
        return self._trace_vec

    def trace(self, x: Vec) -> FieldElem:
        tv = self.trace_vector()
        return sum((xi * t for xi, t in zip(x, tv) if not xi.is_zero()), self.ctx.zero())

    def trace_form_nondegenerate(self) -> bool:
        tv = self.trace_vector()
        n = self.dim
        rows = []
        for i in range(n):
            row = [self.ctx.zero()] * n
            for j in range(n):
                for l, c in self.mult[i][j]:
                    row[j] = row[j] + c * tv[l]
            rows.append(row)
        return linalg.rank(rows) == n

    def generators(self) -> list[Vec]:
        """A small algebra generating set, from provenance when available."""
        prov = self.provenance
        if prov.kind == "quaternion":
            return [self.basis_vec(1), self.basis_vec(2)]
        if prov.kind == "matrix":
            n = prov.params[0]
            gens = []
            for r in range(n - 1):
                gens.append(self.basis_vec(r * n + (r + 1)))
                gens.append(self.basis_vec((r + 1) * n + r))
            return gens or [self.unit]
        if prov.kind == "etale2":
            return [self.basis_vec(1)]
        if prov.kind == "tensor":
            a, b = prov.factors
            out = [tensor_embed_left(self, g) for g in a.generators()]
            out += [tensor_embed_right(self, g) for g in b.generators()]
            return out
        if prov.kind == "double":
            a0 = prov.factors[0]
            d0 = a0.dim
            out = []
            for g in a0.generators():
                out.append(tuple(g) + tuple(self.ctx.zero() for _ in range(d0)))
                out.append(tuple(self.ctx.zero() for _ in range(d0)) + tuple(g))
            out.append(tuple(a0.unit) + tuple(self.ctx.zero() for _ in range(d0)))
            return out
        return [self.basis_vec(i) for i in range(self.dim)]

    def center(self) -> list[Vec]:
        if self._center is None:
            rows = []
            for g in self.generators():
                lm = self.lmul_matrix(g)
                rm = self.rmul_matrix(g)
                for rl, rr in zip(lm, rm):
                    rows.append([a - b for a, b in zip(rl, rr)])
            self._center = linalg.kernel(rows, self.ctx)
        return self._center

    def degree(self) -> int:
        zdim = len(self.center())
        d2 = self.dim // zdim
        d = 1
        while d * d < d2:
            d += 1
        if d * d != d2 or zdim not in (1, 2):
            raise AlgebraError("algebra shape is not central simple over its centre")
        return d

    def __repr__(self):
        return f"StructureAlgebra(dim={self.dim}, {self.ctx.short()}, {self.provenance.kind})"


# -- constructors -----------------------------------------------------------------


def quaternion_algebra(ctx: FieldCtx, a, b) -> StructureAlgebra:
    """Quaternion algebra on (1, u, v, uv).

    Characteristic != 2: u^2 = a, v^2 = b, uv = -vu.
    Characteristic 2:    u^2 = a, v^2 = b, uv + vu = 1.
    """
    a, b = ctx(a), ctx(b)
    if a.is_zero() or b.is_zero():
        raise AlgebraError("quaternion parameters must be nonzero")
    z, o = ctx.zero(), ctx.one()
    char2 = ctx.characteristic == 2
    t = {}
    t[0, 0] = [(0, o)]
    for i in (1, 2, 3):
        t[0, i] = [(i, o)]
        t[i, 0] = [(i, o)]
    t[1, 1] = [(0, a)]
    t[2, 2] = [(0, b)]
    t[1, 2] = [(3, o)]
    if not char2:
        t[2, 1] = [(3, -o)]
        t[1, 3] = [(2, a)]
        t[3, 1] = [(2, -a)]
        t[2, 3] = [(1, -b)]
        t[3, 2] = [(1, b)]
        t[3, 3] = [(0, -a * b)]
    else:
        # vu = 1 + uv drives the rest of the table
        t[2, 1] = [(0, o), (3, o)]
        t[1, 3] = [(2, a)]
        t[3, 1] = [(1, o), (2, a)]
        t[2, 3] = [(1, b), (2, o)]
        t[3, 2] = [(1, b)]
        t[3, 3] = [(0, a * b), (3, o)]
    mult = [[t[i, j] for j in range(4)] for i in range(4)]
    return StructureAlgebra(
        ctx, mult, [o, z, z, z], labels=("1", "u", "v", "uv"),
        provenance=Provenance("quaternion", params=(a, b)),
    )


def matrix_algebra(ctx: FieldCtx, n: int) -> StructureAlgebra:
    if n < 1:
        raise AlgebraError("matrix size must be at least 1")
    z, o = ctx.zero(), ctx.one()
    dim = n * n
    mult = [[[] for _ in range(dim)] for _ in range(dim)]
    for r in range(n):
        for c in range(n):
            for r2 in range(n):
                for c2 in range(n):
                    if c == r2:
                        mult[r * n + c][r2 * n + c2] = [(r * n + c2, o)]
    unit = [o if i % (n + 1) == 0 else z for i in range(dim)]
    labels = tuple(f"e{r + 1}{c + 1}" for r in range(n) for c in range(n))
    return StructureAlgebra(ctx, mult, unit, labels=labels,
                            provenance=Provenance("matrix", params=(n,)))


def etale_quadratic_algebra(ctx: FieldCtx, param) -> StructureAlgebra:
    """The quadratic etale algebra F[t] with t^2 = d (char != 2) or
    t^2 = t + c (characteristic 2, Artin-Schreier shape)."""
    z, o = ctx.zero(), ctx.one()
    p = ctx(param)
    if ctx.characteristic != 2:
        if p.is_zero():
            raise AlgebraError("discriminant parameter must be nonzero")
        tt = [(0, p)]
    else:
        tt = [(0, p), (1, o)]
    mult = [
        [[(0, o)], [(1, o)]],
        [[(1, o)], tt],
    ]
    return StructureAlgebra(ctx, mult, [o, z], labels=("1", "t"),
                            provenance=Provenance("etale2", params=(p,)))


def tensor_product(a: StructureAlgebra, b: StructureAlgebra) -> StructureAlgebra:
    if a.ctx != b.ctx:
        raise AlgebraError("tensor factors over different fields")
    ctx = a.ctx
    da, db = a.dim, b.dim
    dim = da * db
    mult = [[[] for _ in range(dim)] for _ in range(dim)]
    for i1 in range(da):
        for i2 in range(da):
            cell_a = a.mult[i1][i2]
            if not cell_a:
                continue
            for j1 in range(db):
                for j2 in range(db):
                    cell_b = b.mult[j1][j2]
                    if not cell_b:
                        continue
                    out = []
                    for k1, c1 in cell_a:
                        for k2, c2 in cell_b:
                            out.append((k1 * db + k2, c1 * c2))
                    mult[i1 * db + j1][i2 * db + j2] = out
    unit = [a.unit[i] * b.unit[j] for i in range(da) for j in range(db)]
    labels = None
    if a.labels and b.labels:
        labels = tuple(
            la if lb == "1" else (lb if la == "1" else f"{la}*{lb}")
            for la in a.labels
            for lb in b.labels
        )
    return StructureAlgebra(ctx, mult, unit, labels=labels,
                            provenance=Provenance("tensor", factors=(a, b)))


def tensor_embed_left(t: StructureAlgebra, x: Vec) -> Vec:
    a, b = t.provenance.factors
    out = [t.ctx.zero()] * t.dim
    for i, xi in enumerate(x):
        if not xi.is_zero():
            for j, uj in enumerate(b.unit):
                if not uj.is_zero():
                    out[i * b.dim + j] = xi * uj
    return tuple(out)


def tensor_embed_right(t: StructureAlgebra, y: Vec) -> Vec:
    a, b = t.provenance.factors
    out = [t.ctx.zero()] * t.dim
    for i, ui in enumerate(a.unit):
        if not ui.is_zero():
            for j, yj in enumerate(y):
                if not yj.is_zero():
                    out[i * b.dim + j] = ui * yj
    return tuple(out)


def double_algebra(a0: StructureAlgebra) -> StructureAlgebra:
    """a0 x a0^op with componentwise operations."""
    ctx = a0.ctx
    d0 = a0.dim
    dim = 2 * d0
    mult = [[[] for _ in range(dim)] for _ in range(dim)]
    for i in range(d0):
        for j in range(d0):
            mult[i][j] = list(a0.mult[i][j])
            mult[d0 + i][d0 + j] = [(d0 + k, c) for k, c in a0.mult[j][i]]
    unit = list(a0.unit) + list(a0.unit)
    labels = None
    if a0.labels:
        labels = tuple(f"({l},0)" for l in a0.labels) + tuple(f"(0,{l})" for l in a0.labels)
    return StructureAlgebra(ctx, mult, unit, labels=labels,
                            provenance=Provenance("double", factors=(a0,)))


# -- subalgebras --------------------------------------------------------------------


class Subalgebra:
    """A unital, multiplicatively closed subspace, with closure verified."""

    def __init__(self, parent: StructureAlgebra, basis: list[Vec], verify: bool = True):
        self.parent = parent
        self.basis = [parent.el(v) for v in basis]
        if verify:
            self.verify()

    @property
    def dim(self):
        return len(self.basis)

    def verify(self):
        ctx = self.parent.ctx
        if linalg.in_span(self.basis, self.parent.unit, ctx) is None:
            raise AlgebraError("subalgebra does not contain the unit")
        if linalg.rank([list(v) for v in self.basis]) != len(self.basis):
            raise AlgebraError("subalgebra basis is dependent")
        for x in self.basis:
            for y in self.basis:
                if linalg.in_span(self.basis, self.parent.mul(x, y), ctx) is None:
                    raise AlgebraError("subalgebra is not multiplicatively closed")

    def contains(self, v: Vec) -> bool:
        return linalg.in_span(self.basis, v, self.parent.ctx) is not None

    def coords(self, v: Vec) -> Vec | None:
        return linalg.in_span(self.basis, v, self.parent.ctx)

    def as_algebra(self, verify: bool = False) -> StructureAlgebra:
        """Structure constants of the subalgebra on its own basis."""
        ctx = self.parent.ctx
        n = self.dim
        mult = [[[] for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                co = self.coords(self.parent.mul(self.basis[i], self.basis[j]))
                mult[i][j] = [(k, c) for k, c in enumerate(co) if not c.is_zero()]
        unit = self.coords(self.parent.unit)
        return StructureAlgebra(ctx, mult, unit,
                                provenance=Provenance("sub"), verify=verify)

    def is_commutative(self) -> bool:
        return all(
            self.parent.mul(x, y) == self.parent.mul(y, x)
            for x, y in itertools.combinations(self.basis, 2)
        )


def centralizer(a: StructureAlgebra, s: Subalgebra | list[Vec]) -> Subalgebra:
    gens = s.basis if isinstance(s, Subalgebra) else list(s)
    rows = []
    for g in gens:
        lm = a.lmul_matrix(g)
        rm = a.rmul_matrix(g)
        for rl, rr in zip(lm, rm):
            rows.append([x - y for x, y in zip(rl, rr)])
    basis = linalg.kernel(rows, a.ctx)
    return Subalgebra(a, basis, verify=False)


def inverse_or_kernel(a: StructureAlgebra, x: Vec):
    """("inverse", y) with x*y = 1, else ("singular", k) with x*k = 0, k != 0."""
    lm = a.lmul_matrix(x)
    y = linalg.solve(lm, a.unit, a.ctx)
    if y is not None:
        if a.mul(y, x) != tuple(a.unit):
            raise AlgebraError("one-sided inverse in a finite-dimensional algebra")
        return "inverse", y
    ker = linalg.kernel(lm, a.ctx)
    return "singular", ker[0]


def algebra_inverse(a: StructureAlgebra, x: Vec) -> Vec | None:
    tag, v = inverse_or_kernel(a, x)
    return v if tag == "inverse" else None


# -- splitting and reduced norms ------------------------------------------------------


@dataclass
class SplitRep:
    """Explicit matrix representation(s) of A over a splitting extension.

    components is 1 for centre F, 2 for a quadratic etale centre; basis_images
    holds, per component, one deg x deg matrix over ext.ctx for each basis
    vector of A.
    """

    ext_ctx: FieldCtx
    embed: object            # FieldElem of base ctx -> FieldElem of ext_ctx
    deg: int
    components: int
    basis_images: list[list]


def _needed_radicands(a: StructureAlgebra) -> list[Fraction]:
    prov = a.provenance
    if prov.kind in ("quaternion", "etale2"):
        p = prov.params[0]
        if any(c != 0 for c in p.co[1:]):
            raise AlgebraError("splitting needs rational-valued construction parameters")
        return [Fraction(p.co[0])]
    if prov.kind == "tensor":
        l, r = prov.factors
        return _needed_radicands(l) + _needed_radicands(r)
    if prov.kind == "matrix":
        return []
    raise AlgebraError(f"no splitting provenance for kind {prov.kind!r}")


def _mat_kron(m1, m2, ctx):
    n1, n2 = len(m1), len(m2)
    out = []
    for i1 in range(n1):
        for i2 in range(n2):
            row = []
            for j1 in range(n1):
                for j2 in range(n2):
                    row.append(m1[i1][j1] * m2[i2][j2])
            out.append(row)
    return out


def _factor_images(a: StructureAlgebra, ectx: FieldCtx, emb):
    """Per-component lists of basis images in M_deg(ectx)."""
    prov = a.provenance
    if prov.kind == "matrix":
        n = prov.params[0]
        images = []
        for r in range(n):
            for c in range(n):
                m = linalg.zeros(ectx, n, n)
                m[r][c] = ectx.one()
                images.append(m)
        return 1, n, [images]
    if prov.kind == "quaternion":
        aa, bb = prov.params
        if a.ctx.characteristic == 2:
            raise AlgebraError("splitting characteristic-2 quaternions is out of scope here")
        s = ectx.sqrt(emb(aa))
        if s is None:
            raise AlgebraError("splitting field does not contain sqrt(a)")
        b_e = emb(bb)
        z, o = ectx.zero(), ectx.one()
        one = [[o, z], [z, o]]
        u = [[s, z], [z, -s]]
        v = [[z, o], [b_e, z]]
        uv = [[z, s], [-s * b_e, z]]
        return 1, 2, [[one, u, v, uv]]
    if prov.kind == "etale2":
        d = prov.params[0]
        s = ectx.sqrt(emb(d))
        if s is None:
            raise AlgebraError("splitting field does not split the centre")
        o = ectx.one()
        return 2, 1, [[[[o]], [[s]]], [[[o]], [[-s]]]]
    if prov.kind == "tensor":
        lfac, rfac = prov.factors
        lc, ln, limgs = _factor_images(lfac, ectx, emb)
        rc, rn, rimgs = _factor_images(rfac, ectx, emb)
        comps = []
        for li in limgs:
            for ri in rimgs:
                imgs = []
                for i in range(lfac.dim):
                    for j in range(rfac.dim):
                        imgs.append(_mat_kron(li[i], ri[j], ectx))
                comps.append(imgs)
        return lc * rc, ln * rn, comps
    raise AlgebraError(f"no splitting provenance for kind {prov.kind!r}")


def split_representation(a: StructureAlgebra) -> SplitRep:
    """Split A through its construction provenance.

    The splitting field adjoins square roots of the recorded quaternion
    parameters (and of the centre discriminant); images are Kronecker
    products of the per-factor 2x2 / matrix-unit models.
    """
    rads = _needed_radicands(a)
    ctx = a.ctx
    embeds = []
    cur = ctx
    for r in rads:
        ext = extend_scalars(cur, r)
        if not ext.trivial:
            embeds.append(ext)
            cur = ext.ctx

    def emb(x):
        v = x
        for e in embeds:
            v = e.embed(v)
        return v

    comps, deg, imgs = _factor_images(a, cur, emb)
    return SplitRep(ext_ctx=cur, embed=emb, deg=deg, components=comps, basis_images=imgs)


def _rep_matrix(rep: SplitRep, comp: int, x: Vec):
    ectx = rep.ext_ctx
    n = rep.deg
    out = linalg.zeros(ectx, n, n)
    for i, xi in enumerate(x):
        if xi.is_zero():
            continue
        xe = rep.embed(xi)
        img = rep.basis_images[comp][i]
        for r in range(n):
            for c in range(n):
                if not img[r][c].is_zero():
                    out[r][c] = out[r][c] + xe * img[r][c]
    return out


def reduced_norm(a: StructureAlgebra, x: Vec) -> FieldElem:
    """Reduced norm via an explicit splitting; the value must land in F.

    Centre F: one determinant.  Quadratic etale centre: the determinants of
    both split components must agree (true for sigma-symmetric arguments),
    and the common value is returned.
    """
    if a.ctx.characteristic == 2:
        raise AlgebraError("reduced norms are computed over rational-side fields")
    prov = a.provenance
    if prov.kind == "double":
        a0 = prov.factors[0]
        d0 = a0.dim
        x1, x2 = x[:d0], x[d0:]
        n1 = reduced_norm(a0, x1)
        n2 = reduced_norm(a0, x2)
        if n1 != n2:
            raise AlgebraError("reduced norm components differ; argument is not symmetric")
        return n1
    rep = split_representation(a)
    dets = [linalg.det(_rep_matrix(rep, c, x), rep.ext_ctx) for c in range(rep.components)]
    if any(d != dets[0] for d in dets[1:]):
        raise AlgebraError("reduced norm components differ; argument is not symmetric")
    d = dets[0]
    if rep.ext_ctx == a.ctx:
        return d
    if any(c != 0 for c in d.co[1:]):
        raise AlgebraError("reduced norm does not descend to the ground field")
    return a.ctx(d.co[0])


# -- generic matrix-unit search --------------------------------------------------------


def _min_poly(a: StructureAlgebra, x: Vec) -> list[Fraction]:
    """Monic minimal polynomial coefficients (constant first) over Q-side ctx."""
    ctx = a.ctx
    powers = [tuple(a.unit)]
    cur = tuple(a.unit)
    for _ in range(a.dim + 1):
        cur = a.mul(cur, x)
        co = linalg.in_span(powers, cur, ctx)
        if co is not None:
            return [-c.co[0] for c in co] + [Fraction(1)]
        powers.append(cur)
    raise AlgebraError("minimal polynomial not found (dimension overflow)")


def _qpoly_divmod(num, den):
    num = num[:]
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return q, num


def _qpoly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qpoly_ext_gcd(a, b):
    """(g, s, t) with s a + t b = g over Q[t]."""
    r0, r1 = a[:], b[:]
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _qpoly_divmod(r0, r1)
        r0, r1 = r1, r

        def sub(u, v):
            out = u[:] + [Fraction(0)] * max(0, len(v) - len(u))
            qv = _qpoly_mul(q, v) if v else []
            out += [Fraction(0)] * max(0, len(qv) - len(out))
            for i, c in enumerate(qv):
                out[i] -= c
            while out and out[-1] == 0:
                out.pop()
            return out

        s0, s1 = s1, sub(s0, s1)
        t0, t1 = t1, sub(t0, t1)
    return r0, s0, t0


def _rational_roots(poly) -> list[Fraction]:
    import math

    while poly and poly[-1] == 0:
        poly = poly[:-1]
    if not poly:
        return []
    k = 0
    while poly[k] == 0:
        k += 1
    roots = [Fraction(0)] if k else []
    poly = poly[k:]
    den = 1
    for c in poly:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ipoly = [int(c * den) for c in poly]
    c0, cl = abs(ipoly[0]), abs(ipoly[-1])
    num_divs = [d for d in range(1, c0 + 1) if c0 % d == 0] or [0]
    den_divs = [d for d in range(1, cl + 1) if cl % d == 0]
    for nd in num_divs:
        for dd in den_divs:
            for cand in (Fraction(nd, dd), Fraction(-nd, dd)):
                if sum(c * cand**i for i, c in enumerate(poly)) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def find_matrix_units(a: StructureAlgebra, seed: int = 0, attempts: int = 60):
    """Matrix units of a split central simple algebra over a rational-side field.

    Rank-one idempotents come from basis scans and minimal polynomials of
    seeded low-height elements; partners are found by linear solves.  Raises
    after the bounded budget: NOT a proof that the algebra is division.
    """
    ctx = a.ctx
    n = a.degree()
    rng = random.Random(seed)

    def corner(e: Vec) -> list[Vec]:
        lm = a.lmul_matrix(e)
        rm = a.rmul_matrix(e)
        prod = linalg.mat_mul(lm, rm)
        cols = [linalg.mat_vec(prod, a.basis_vec(j)) for j in range(a.dim)]
        return linalg.span_basis(cols)

    def refine(e: Vec) -> list[Vec]:
        """Split e into primitive orthogonal idempotents inside eAe."""
        sub = corner(e)
        if len(sub) == 1:
            return [e]
        cands = list(sub)
        for _ in range(attempts):
            x = a.zero()
            for b in sub:
                x = linalg.vec_add(x, linalg.vec_scale(ctx(rng.randint(-2, 2)), b))
            cands.append(x)
        for x in cands:
            f = _splitting_idempotent_in_corner(a, e, x)
            if f is not None:
                rest = linalg.vec_sub(e, f)
                return refine(f) + refine(rest)
        raise AlgebraError("matrix-unit search exhausted its budget (idempotents)")

    prim = refine(tuple(a.unit))
    if len(prim) != n:
        raise AlgebraError("idempotent refinement did not reach the full degree")
    e1 = prim[0]
    units = {}
    units[(0, 0)] = e1
    a_row = {0: e1}
    b_col = {0: e1}
    for j in range(1, n):
        ej = prim[j]
        basis_1j = _peirce(a, e1, ej)
        basis_j1 = _peirce(a, ej, e1)
        found = False
        for cand in basis_1j:
            # solve a linear system for partner in e_j A e_1 with cand * partner = e1
            lm = a.lmul_matrix(cand)
            cols = [linalg.mat_vec(lm, v) for v in basis_j1]
            rows = [[cols[k][i] for k in range(len(basis_j1))] for i in range(a.dim)]
            sol = linalg.solve(rows, e1, ctx)
            if sol is None:
                continue
            partner = a.zero()
            for c, v in zip(sol, basis_j1):
                partner = linalg.vec_add(partner, linalg.vec_scale(c, v))
            a_row[j] = cand
            b_col[j] = partner
            found = True
            break
        if not found:
            raise AlgebraError("matrix-unit search exhausted its budget (partners)")
    for i in range(n):
        for j in range(n):
            units[(i, j)] = a.mul(b_col[i], a_row[j])
    # verify the full relation table
    for (i, j) in units:
        for (k, l) in units:
            prod = a.mul(units[(i, j)], units[(k, l)])
            expect = units[(i, l)] if j == k else a.zero()
            if prod != expect:
                raise AlgebraError("matrix-unit relations failed verification")
    total = a.zero()
    for i in range(n):
        total = linalg.vec_add(total, units[(i, i)])
    if total != tuple(a.unit):
        raise AlgebraError("matrix units do not sum to the unit")
    return [units[(i, j)] for i in range(n) for j in range(n)]


def _peirce(a: StructureAlgebra, e: Vec, f: Vec) -> list[Vec]:
    cols = [a.mul(a.mul(e, a.basis_vec(k)), f) for k in range(a.dim)]
    return linalg.span_basis(cols)


def _splitting_idempotent_in_corner(a: StructureAlgebra, e: Vec, x: Vec) -> Vec | None:
    """An idempotent f with f = ef = fe strictly inside the corner eAe."""
    x = a.mul(a.mul(e, x), e)
    if linalg.vec_is_zero(x) or x == e:
        return None
    if a.mul(x, x) == x:
        return x
    # minimal polynomial of x within the corner (unit = e)
    ctx = a.ctx
    powers = [e]
    cur = e
    for _ in range(a.dim + 1):
        cur = a.mul(cur, x)
        co = linalg.in_span(powers, cur, ctx)
        if co is not None:
            m = [-c.co[0] for c in co] + [Fraction(1)]
            break
        powers.append(cur)
    else:
        return None
    for lam in _rational_roots(m):
        f_poly = [-lam, Fraction(1)]
        g, rem = _qpoly_divmod(m, f_poly)
        while True:
            g2, rem2 = _qpoly_divmod(g, f_poly)
            if rem2:
                break
            f_poly = _qpoly_mul(f_poly, [-lam, Fraction(1)])
            g = g2
        if len(g) <= 1:
            continue
        gg, s, t = _qpoly_ext_gcd(f_poly, g)
        if len(gg) != 1:
            continue
        tg = _qpoly_mul([c / gg[0] for c in t], g)
        # evaluate with corner unit e
        acc = a.zero()
        power = e
        for c in tg:
            acc = linalg.vec_add(acc, linalg.vec_scale(ctx(c), power))
            power = a.mul(power, x)
        f = acc
        if not linalg.vec_is_zero(f) and f != e and a.mul(f, f) == f:
            return f
    return None
