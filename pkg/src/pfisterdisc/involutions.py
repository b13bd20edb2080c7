"""Involutions as verified linear maps: symmetric spaces, classification,
canonical constructors, and the orthogonal discriminant.

Every involution is checked at construction: anti-automorphism on all basis
pairs, square equal to the identity, and F = Z(A) cap Symm(sigma).  The
kind/type/capacity classification is cached, read off the dimension of
Syms(sigma) against half the algebra dimension and cross-checked against the
d(d+1)/2 | d^2 | d(d-1)/2 table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .arith import square_free_part
from . import linalg
from .linalg import Mat, Vec
from .algebras import (
    StructureAlgebra,
    algebra_inverse,
    reduced_norm,
)


class InvolutionError(ValueError):
    pass


ORTHOGONAL = "orthogonal"
UNITARY = "unitary"
SYMPLECTIC = "symplectic"


@dataclass
class Classification:
    kind: str                 # "first" | "second"
    type: str                 # orthogonal | unitary | symplectic
    degree: int
    capacity: int
    center_dim: int


class Involution:
    """An F-linear anti-automorphism of order 2 on a StructureAlgebra."""

    def __init__(self, algebra: StructureAlgebra, matrix: Mat, verify: bool = True):
        self.algebra = algebra
        self.matrix = [list(row) for row in matrix]
        n = algebra.dim
        self._cols = [
            [(i, self.matrix[i][j]) for i in range(n) if not self.matrix[i][j].is_zero()]
            for j in range(n)
        ]
        self._spaces: dict[str, list[Vec]] = {}
        self._classification: Classification | None = None
        self.hint: tuple = ("raw",)
        if verify:
            self.verify_axioms()

    def apply(self, x: Vec) -> Vec:
        out = [self.algebra.ctx.zero()] * self.algebra.dim
        for j, xj in enumerate(x):
            if xj.is_zero():
                continue
            for i, c in self._cols[j]:
                out[i] = out[i] + c * xj
        return tuple(out)

    # -- verification ------------------------------------------------------------

    def verify_axioms(self):
        a = self.algebra
        n = a.dim
        for i in range(n):
            sq = self.apply(self.apply(a.basis_vec(i)))
            if sq != a.basis_vec(i):
                raise InvolutionError(f"sigma^2 != id on basis vector {i}")
        sig_basis = [self.apply(a.basis_vec(i)) for i in range(n)]
        for i in range(n):
            for j in range(n):
                lhs = self.apply(a.mul(a.basis_vec(i), a.basis_vec(j)))
                rhs = a.mul(sig_basis[j], sig_basis[i])
                if lhs != rhs:
                    raise InvolutionError(
                        f"anti-automorphism fails on basis pair ({i},{j})"
                    )
        if self.apply(tuple(a.unit)) != tuple(a.unit):
            raise InvolutionError("sigma does not fix the unit")
        # F = Z(A) cap Symm(sigma)
        z = a.center()
        rows = []
        for v in z:
            diff = linalg.vec_sub(self.apply(v), v)
            rows.append(list(diff))
        fixed_center = len(z) - linalg.rank(rows) if rows else 0
        if fixed_center != 1:
            raise InvolutionError("Z(A) cap Symm(sigma) is not the ground field")
        if a.provenance.kind == "raw" and not a.trace_form_nondegenerate():
            raise InvolutionError("raw algebra is not separable; pair invalid")

    # -- symmetric element spaces ---------------------------------------------------

    def space(self, name: str) -> list[Vec]:
        if name not in self._spaces:
            a = self.algebra
            n = a.dim
            ident = linalg.identity(a.ctx, n)
            m = self.matrix
            if name == "symm":
                rows = [[m[i][j] - ident[i][j] for j in range(n)] for i in range(n)]
                self._spaces[name] = linalg.kernel(rows, a.ctx)
            elif name == "skew":
                rows = [[m[i][j] + ident[i][j] for j in range(n)] for i in range(n)]
                self._spaces[name] = linalg.kernel(rows, a.ctx)
            elif name == "symd":
                cols = [
                    linalg.vec_add(a.basis_vec(i), self.apply(a.basis_vec(i)))
                    for i in range(n)
                ]
                self._spaces[name] = linalg.span_basis(cols)
            elif name == "alt":
                cols = [
                    linalg.vec_sub(a.basis_vec(i), self.apply(a.basis_vec(i)))
                    for i in range(n)
                ]
                self._spaces[name] = linalg.span_basis(cols)
            else:
                raise InvolutionError(f"unknown space {name!r}")
        return self._spaces[name]

    def symd_contains_one(self) -> bool:
        return linalg.in_span(self.space("symd"), tuple(self.algebra.unit),
                              self.algebra.ctx) is not None

    def syms(self) -> list[Vec]:
        return self.space("symd") if self.symd_contains_one() else self.space("symm")

    # -- classification ---------------------------------------------------------------

    def classify(self) -> Classification:
        if self._classification is not None:
            return self._classification
        a = self.algebra
        zdim = len(a.center())
        if zdim not in (1, 2):
            raise InvolutionError("centre dimension is neither 1 nor 2")
        d2, rem = divmod(a.dim, zdim)
        d = 1
        while d * d < d2:
            d += 1
        if rem or d * d != d2:
            raise InvolutionError("dim A != [Z:F] * d^2 for any integer degree d")
        syms_dim = len(self.syms())
        half = a.dim // 2 if a.dim % 2 == 0 else None
        if half is None or syms_dim * 2 == a.dim:
            typ = UNITARY
        elif syms_dim * 2 > a.dim:
            typ = ORTHOGONAL
        else:
            typ = SYMPLECTIC
        table = {
            ORTHOGONAL: d * (d + 1) // 2,
            UNITARY: d * d,
            SYMPLECTIC: d * (d - 1) // 2,
        }
        if table[typ] != syms_dim:
            raise InvolutionError(
                f"Syms dimension {syms_dim} matches no type row for degree {d}"
            )
        kind = "first" if zdim == 1 else "second"
        if kind == "second" and typ != UNITARY:
            raise InvolutionError("second-kind involution must be unitary")
        cap = d // 2 if typ == SYMPLECTIC else d
        if typ == SYMPLECTIC and d % 2:
            raise InvolutionError("symplectic involutions need even degree")
        self._classification = Classification(kind, typ, d, cap, zdim)
        return self._classification


# -- constructors -------------------------------------------------------------------


def involution_from_matrix(a: StructureAlgebra, matrix: Mat) -> Involution:
    return Involution(a, matrix)


def _columns_to_matrix(cols: list[Vec]):
    n = len(cols)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def canonical_quaternion(q: StructureAlgebra) -> Involution:
    """The canonical symplectic involution x -> Trd(x) - x."""
    if q.provenance.kind != "quaternion":
        raise InvolutionError("canonical involution needs a quaternion algebra")
    ctx = q.ctx
    z, o = ctx.zero(), ctx.one()
    if ctx.characteristic != 2:
        cols = [
            (o, z, z, z),
            (z, -o, z, z),
            (z, z, -o, z),
            (z, z, z, -o),
        ]
    else:
        # Trd(x0 + x1 u + x2 v + x3 uv) = x3
        cols = [
            (o, z, z, z),
            (z, o, z, z),
            (z, z, o, z),
            (o, z, z, o),
        ]
    inv = Involution(q, _columns_to_matrix(cols))
    inv.hint = ("canonical_quaternion",)
    return inv


def canonical_etale2(zalg: StructureAlgebra) -> Involution:
    """The nontrivial automorphism of a quadratic etale algebra, as a unitary
    involution on the commutative algebra."""
    if zalg.provenance.kind != "etale2":
        raise InvolutionError("expected a quadratic etale algebra")
    ctx = zalg.ctx
    z, o = ctx.zero(), ctx.one()
    if ctx.characteristic != 2:
        cols = [(o, z), (z, -o)]
    else:
        cols = [(o, z), (o, o)]  # t -> t + 1
    inv = Involution(zalg, _columns_to_matrix(cols))
    inv.hint = ("canonical_etale2",)
    return inv


def switch_involution(d: StructureAlgebra) -> Involution:
    if d.provenance.kind != "double":
        raise InvolutionError("switch lives on a double algebra")
    half = d.dim // 2
    ctx = d.ctx
    z, o = ctx.zero(), ctx.one()
    m = [[z] * d.dim for _ in range(d.dim)]
    for i in range(half):
        m[i][half + i] = o
        m[half + i][i] = o
    inv = Involution(d, m)
    inv.hint = ("switch",)
    return inv


def adjoint_involution(m_alg: StructureAlgebra, gram: list[list]) -> Involution:
    """Adjoint involution of a nondegenerate symmetric bilinear form on F^n."""
    if m_alg.provenance.kind != "matrix":
        raise InvolutionError("adjoint involutions live on matrix algebras")
    n = m_alg.provenance.params[0]
    ctx = m_alg.ctx
    b = [[ctx(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(n):
            if b[i][j] != b[j][i]:
                raise InvolutionError("Gram matrix must be symmetric")
    binv = linalg.inverse(b, ctx)
    if binv is None:
        raise InvolutionError("Gram matrix is degenerate")
    cols = []
    for r in range(n):
        for c in range(n):
            # image of e_rc is B^{-1} e_cr B
            img = [[binv[i][c] * b[r][j] for j in range(n)] for i in range(n)]
            cols.append(tuple(img[i][j] for i in range(n) for j in range(n)))
    inv = Involution(m_alg, _columns_to_matrix(cols))
    inv.hint = ("adjoint", tuple(tuple(row) for row in b))
    return inv


def adjoint_diag_involution(m_alg: StructureAlgebra, entries: list) -> Involution:
    n = m_alg.provenance.params[0]
    ctx = m_alg.ctx
    if len(entries) != n:
        raise InvolutionError("diagonal length must match the matrix size")
    gram = linalg.zeros(ctx, n, n)
    for i, e in enumerate(entries):
        gram[i][i] = ctx(e)
    return adjoint_involution(m_alg, gram)


def orthogonal_quaternion(q: StructureAlgebra, s: Vec) -> Involution:
    """Int(s) o can on a quaternion algebra, for s invertible and pure."""
    if q.provenance.kind != "quaternion":
        raise InvolutionError("expected a quaternion algebra")
    if q.ctx.characteristic == 2:
        raise InvolutionError(
            "orthogonal involutions in characteristic 2 are out of scope"
        )
    s = q.el(s)
    can = canonical_quaternion(q)
    if can.apply(s) != tuple(-c for c in s):
        raise InvolutionError("s must be a pure quaternion (can(s) = -s)")
    sinv = algebra_inverse(q, s)
    if sinv is None:
        raise InvolutionError("s is not invertible")
    cols = [q.mul(q.mul(s, can.apply(q.basis_vec(i))), sinv) for i in range(4)]
    inv = Involution(q, _columns_to_matrix(cols))
    inv.hint = ("orthogonal_quaternion", tuple(s))
    return inv


def tensor_involution(t: StructureAlgebra, s1: Involution, s2: Involution) -> Involution:
    """sigma_1 (x) sigma_2 on a tensor-product algebra."""
    if t.provenance.kind != "tensor":
        raise InvolutionError("tensor involution needs a tensor-product algebra")
    a, b = t.provenance.factors
    if s1.algebra is not a or s2.algebra is not b:
        raise InvolutionError("involutions do not match the tensor factors")
    da, db = a.dim, b.dim
    cols = []
    for i in range(da):
        ai = s1.apply(a.basis_vec(i))
        for j in range(db):
            bj = s2.apply(b.basis_vec(j))
            col = [t.ctx.zero()] * (da * db)
            for k, av in enumerate(ai):
                if av.is_zero():
                    continue
                for l, bv in enumerate(bj):
                    if not bv.is_zero():
                        col[k * db + l] = av * bv
            cols.append(tuple(col))
    inv = Involution(t, _columns_to_matrix(cols))
    inv.hint = ("tensor", s1, s2)
    return inv


def conjugate_involution(s: Involution, g: Vec) -> Involution:
    """Int(g) o sigma o Int(g)^{-1}: the involution transported by x -> gxg^{-1}."""
    a = s.algebra
    ginv = algebra_inverse(a, g)
    if ginv is None:
        raise InvolutionError("conjugating element is not invertible")
    cols = []
    for i in range(a.dim):
        x = a.mul(a.mul(ginv, a.basis_vec(i)), g)
        y = s.apply(x)
        cols.append(a.mul(a.mul(g, y), ginv))
    return Involution(a, _columns_to_matrix(cols))


# -- invariants ---------------------------------------------------------------------


def sym_space_dims(s: Involution) -> dict[str, int]:
    return {
        "symm": len(s.space("symm")),
        "skew": len(s.space("skew")),
        "symd": len(s.space("symd")),
        "alt": len(s.space("alt")),
    }


def require_symd_one(s: Involution):
    """Gate for every capacity-4 pipeline: 1 must lie in Symd(sigma)."""
    if not s.symd_contains_one():
        raise InvolutionError(
            "1 not in Symd(sigma): orthogonal involution in characteristic 2 "
            "is excluded from the capacity-4 pipelines"
        )


def invertible_alternating_element(s: Involution, seed: int = 0, tries: int = 200) -> Vec:
    a = s.algebra
    alt = s.space("alt")
    if not alt:
        raise InvolutionError("Alt(sigma) is trivial")
    rng = random.Random(seed)
    cands = list(alt)
    total = alt[0]
    for v in alt[1:]:
        total = linalg.vec_add(total, v)
    cands.append(total)
    for _ in range(tries):
        x = a.zero()
        for v in alt:
            x = linalg.vec_add(x, linalg.vec_scale(a.ctx(rng.randint(-3, 3)), v))
        cands.append(x)
    for x in cands:
        if linalg.vec_is_zero(x):
            continue
        if algebra_inverse(a, x) is not None:
            return x
    raise InvolutionError("no invertible alternating element found within budget")


def orth_discriminant(s: Involution, seed: int = 0) -> int:
    """Discriminant square class of an even-degree orthogonal involution.

    Returns the square-free integer representative of (-1)^m Nrd(y) for an
    invertible alternating y; a second independent draw is cross-checked.
    """
    cls = s.classify()
    if cls.type != ORTHOGONAL or cls.degree % 2:
        raise InvolutionError("discriminant needs an orthogonal involution of even degree")
    m = cls.degree // 2
    y1 = invertible_alternating_element(s, seed=seed)
    y2 = invertible_alternating_element(s, seed=seed + 1)
    vals = []
    for y in (y1, y2):
        nrd = reduced_norm(s.algebra, y)
        vals.append(square_free_part(((-1) ** m) * nrd.co[0]))
    if vals[0] != vals[1]:
        raise InvolutionError("discriminant depends on the sample: invalid instance")
    return vals[0]
