"""Exact dense linear algebra over any FieldCtx.

Matrices are lists of rows of FieldElem, vectors are tuples.  Everything is
plain Gaussian elimination; the dimensions in this project stay at or below
64 so clarity wins over cleverness.
"""

from __future__ import annotations

from .fields import FieldCtx, FieldElem

Vec = tuple[FieldElem, ...]
Mat = list[list[FieldElem]]


def zeros(ctx: FieldCtx, n: int, m: int) -> Mat:
    z = ctx.zero()
    return [[z] * m for _ in range(n)]


def identity(ctx: FieldCtx, n: int) -> Mat:
    z, o = ctx.zero(), ctx.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_vec(m: Mat, v: Vec) -> Vec:
    ctx = v[0].ctx
    out = [ctx.zero()] * len(m)
    for j, vj in enumerate(v):
        if vj.is_zero():
            continue
        for i in range(len(m)):
            mij = m[i][j]
            if not mij.is_zero():
                out[i] = out[i] + mij * vj
    return tuple(out)


def mat_mul(a: Mat, b: Mat) -> Mat:
    ctx = a[0][0].ctx
    n, k, m = len(a), len(b), len(b[0])
    out = [[ctx.zero()] * m for _ in range(n)]
    for i in range(n):
        row = a[i]
        for t in range(k):
            x = row[t]
            if x.is_zero():
                continue
            brow = b[t]
            orow = out[i]
            for j in range(m):
                y = brow[j]
                if not y.is_zero():
                    orow[j] = orow[j] + x * y
    return out


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)]


def rref(rows: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    if not rows:
        return [], []
    m = [row[:] for row in rows]
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Mat) -> int:
    return len(rref(rows)[1])


def kernel(rows: Mat, ctx: FieldCtx) -> list[Vec]:
    """Basis of the right kernel {v : rows @ v = 0}."""
    if not rows:
        return []
    n = len(rows[0])
    red, pivots = rref(rows)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    z, o = ctx.zero(), ctx.one()
    out: list[Vec] = []
    for fc in free:
        v = [z] * n
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        out.append(tuple(v))
    return out


def solve(a: Mat, b: Vec, ctx: FieldCtx) -> Vec | None:
    """One solution of a @ x = b, or None."""
    if not a:
        return () if all(x.is_zero() for x in b) else None
    n = len(a[0])
    aug = [row[:] + [bv] for row, bv in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    z = ctx.zero()
    x = [z] * n
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n]
    return tuple(x)


def in_span(basis: list[Vec], v: Vec, ctx: FieldCtx) -> Vec | None:
    """Coefficients expressing v in the given spanning set, or None."""
    if not basis:
        return () if all(x.is_zero() for x in v) else None
    a = [[basis[j][i] for j in range(len(basis))] for i in range(len(v))]
    return solve(a, v, ctx)


def span_basis(vectors: list[Vec]) -> list[Vec]:
    """A subset-free echelonized basis of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = rref([list(v) for v in vectors])
    return [tuple(red[i]) for i in range(len(pivots))]


def det(a: Mat, ctx: FieldCtx) -> FieldElem:
    n = len(a)
    m = [row[:] for row in a]
    d = ctx.one()
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return ctx.zero()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c]
        inv = m[c][c].inv()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a: Mat, ctx: FieldCtx) -> Mat | None:
    n = len(a)
    aug = [row[:] + identity(ctx, n)[i] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: FieldElem, v: Vec) -> Vec:
    return tuple(c * x for x in v)


def vec_is_zero(v: Vec) -> bool:
    return all(x.is_zero() for x in v)


def unit_vec(ctx: FieldCtx, n: int, i: int) -> Vec:
    z, o = ctx.zero(), ctx.one()
    return tuple(o if j == i else z for j in range(n))
