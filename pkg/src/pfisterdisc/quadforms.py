"""Quadratic and bilinear form engine over the supported exact fields.

A form is stored as an upper-triangular coefficient matrix,
q(x) = sum_{i<=j} c_ij x_i x_j, which works uniformly in every
characteristic.  Characteristic-2 forms are normalized into [a, b] binary
blocks (a x^2 + xy + b y^2) plus an at-most-one-dimensional polar radical;
characteristic-zero and odd forms are diagonalized.

Decision procedures (isotropy, Witt index, isometry, similarity) exist over
the rationals and over finite fields.  Over the rationals they go through
the classical local-global criteria on (dim, determinant class, Hasse
symbols, signature); constructive witness searches are bounded-height
enumerations and never substitute for a decision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import factor, rational_sqrt, square_free_part
from .fields import (
    FINITE,
    INF_PLACE,
    MULTIQUADRATIC,
    QQ,
    RATIONAL,
    FieldCtx,
    FieldElem,
    hilbert_symbol,
)
from . import linalg
from .linalg import Vec


class FormError(ValueError):
    pass


class QuadForm:
    """Quadratic form on ctx^dim given by upper-triangular coefficients."""

    def __init__(self, ctx: FieldCtx, coeffs):
        self.ctx = ctx
        rows = [tuple(ctx(c) for c in row) for row in coeffs]
        self.dim = len(rows)
        for i, row in enumerate(rows):
            if len(row) != self.dim:
                raise FormError("coefficient matrix must be square")
            for j in range(i):
                if not row[j].is_zero():
                    raise FormError("coefficients must be upper-triangular")
        self.coeffs = tuple(rows)
        self._polar = None
        self._diag = None
        self._blocks = None

    # -- evaluation ---------------------------------------------------------

    def __call__(self, v: Vec) -> FieldElem:
        v = tuple(self.ctx(x) for x in v)
        acc = self.ctx.zero()
        for i in range(self.dim):
            vi = v[i]
            if vi.is_zero():
                continue
            row = self.coeffs[i]
            for j in range(i, self.dim):
                if not row[j].is_zero() and not v[j].is_zero():
                    acc = acc + row[j] * vi * v[j]
        return acc

    def polar(self, u: Vec, v: Vec) -> FieldElem:
        return self(linalg.vec_add(u, v)) - self(u) - self(v)

    def polar_matrix(self):
        if self._polar is None:
            c = self.coeffs
            n = self.dim
            two = self.ctx(2)
            self._polar = [
                [
                    (two * c[i][i]) if i == j else (c[i][j] if i < j else c[j][i])
                    for j in range(n)
                ]
                for i in range(n)
            ]
        return self._polar

    # -- radicals and regularity ---------------------------------------------

    def rad_polar(self) -> list[Vec]:
        return linalg.kernel(self.polar_matrix(), self.ctx)

    def rad_quad(self) -> list[Vec]:
        """Basis of rad(q) = {x in rad(b_q) : q(x) = 0}."""
        rb = self.rad_polar()
        if not rb:
            return []
        if self.ctx.characteristic != 2:
            return rb  # q vanishes on the polar radical away from char 2
        # q is additive and Frobenius-semilinear on rad(b); over our perfect
        # fields q(sum c_i r_i) = (sum c_i sqrt(q(r_i)))^2
        roots = [self.ctx.sqrt(self(r)) for r in rb]
        rows = [[s for s in roots]]
        combo = linalg.kernel(rows, self.ctx)
        out = []
        for c in combo:
            v = tuple(
                sum((c[i] * rb[i][j] for i in range(len(rb))), self.ctx.zero())
                for j in range(self.dim)
            )
            out.append(v)
        return out

    def is_regular(self) -> bool:
        return not self.rad_quad()

    def is_nondegenerate(self) -> bool:
        return self.is_regular() and len(self.rad_polar()) <= 1

    # -- normal forms ----------------------------------------------------------

    def diagonalization(self):
        """(values, basis) with q(basis[i]) = values[i], polar-orthogonal.

        Characteristic != 2 only.  Degenerate directions give zero values and
        are placed last.
        """
        if self.ctx.characteristic == 2:
            raise FormError("diagonalization requires characteristic != 2")
        if self._diag is not None:
            return self._diag
        ctx = self.ctx
        n = self.dim
        half = ctx(Fraction(1, 2))
        g = [[x * half for x in row] for row in self.polar_matrix()]
        basis = linalg.identity(ctx, n)  # rows are basis vectors
        r = 0
        for _ in range(n):
            piv = next((i for i in range(r, n) if not g[i][i].is_zero()), None)
            if piv is None:
                j = next(
                    (
                        (i, k)
                        for i in range(r, n)
                        for k in range(i + 1, n)
                        if not g[i][k].is_zero()
                    ),
                    None,
                )
                if j is None:
                    break  # remaining block is zero: radical directions
                i, k = j
                for col in range(n):
                    g[i][col] = g[i][col] + g[k][col]
                for row in range(n):
                    g[row][i] = g[row][i] + g[row][k]
                basis[i] = [a + b for a, b in zip(basis[i], basis[k])]
                piv = i
            if piv != r:
                g[r], g[piv] = g[piv], g[r]
                for row in g:
                    row[r], row[piv] = row[piv], row[r]
                basis[r], basis[piv] = basis[piv], basis[r]
            d = g[r][r]
            inv = d.inv()
            for i in range(n):
                if i != r and not g[i][r].is_zero():
                    f = g[i][r] * inv
                    for col in range(n):
                        g[i][col] = g[i][col] - f * g[r][col]
                    for row in range(n):
                        g[row][i] = g[row][i] - f * g[row][r]
                    basis[i] = [a - f * b for a, b in zip(basis[i], basis[r])]
            r += 1
        values = [g[i][i] for i in range(n)]
        vecs = [tuple(row) for row in basis]
        order = sorted(range(n), key=lambda i: values[i].is_zero())
        self._diag = ([values[i] for i in order], [vecs[i] for i in order])
        return self._diag

    def block_decomposition(self):
        """Characteristic-2 normal form: ([(a_i, b_i)], [lambda_j], basis).

        basis lists the block pairs first (two vectors per block), then the
        polar-radical vectors carrying the diagonal values lambda_j.
        """
        if self.ctx.characteristic != 2:
            raise FormError("block decomposition is the characteristic-2 normal form")
        if self._blocks is not None:
            return self._blocks
        ctx = self.ctx
        rad = self.rad_polar()
        pm = self.polar_matrix()
        comp = _complement_basis(rad, self.dim, ctx)
        blocks: list[tuple[FieldElem, FieldElem]] = []
        basis: list[Vec] = []
        work = comp[:]
        while work:
            e = work.pop(0)
            f = next((w for w in work if not _bilin(pm, e, w).is_zero()), None)
            if f is None:
                raise FormError("polar form degenerate outside its radical")
            work.remove(f)
            f = linalg.vec_scale(_bilin(pm, e, f).inv(), f)
            fixed = []
            for w in work:
                w1 = linalg.vec_add(w, linalg.vec_scale(_bilin(pm, e, w), f))
                w1 = linalg.vec_add(w1, linalg.vec_scale(_bilin(pm, f, w1), e))
                fixed.append(w1)
            work = fixed
            blocks.append((self(e), self(f)))
            basis.extend([e, f])
        lams = []
        # reduce the radical so at most one vector carries a nonzero value
        rad = rad[:]
        vals = [self(r) for r in rad]
        nz = [i for i, v in enumerate(vals) if not v.is_zero()]
        while len(nz) > 1:
            i, j = nz[0], nz[1]
            si, sj = ctx.sqrt(vals[i]), ctx.sqrt(vals[j])
            rad[j] = linalg.vec_add(linalg.vec_scale(si, rad[j]), linalg.vec_scale(sj, rad[i]))
            vals[j] = self(rad[j])
            nz = [k for k, v in enumerate(vals) if not v.is_zero()]
        for r, v in zip(rad, vals):
            lams.append(v)
            basis.append(r)
        self._blocks = (blocks, lams, basis)
        return self._blocks

    def scale(self, c) -> "QuadForm":
        c = self.ctx(c)
        if c.is_zero():
            raise FormError("scaling by zero")
        return QuadForm(self.ctx, [[c * x for x in row] for row in self.coeffs])

    def restrict(self, vectors: list[Vec]) -> "QuadForm":
        """The form induced on the span of the given independent vectors."""
        n = len(vectors)
        z = self.ctx.zero()
        rows = [[z] * n for _ in range(n)]
        for a in range(n):
            rows[a][a] = self(vectors[a])
            for b in range(a + 1, n):
                rows[a][b] = self.polar(vectors[a], vectors[b])
        return QuadForm(self.ctx, rows)

    def __repr__(self):
        if self.ctx.characteristic != 2 and all(
            self.coeffs[i][j].is_zero() for i in range(self.dim) for j in range(i + 1, self.dim)
        ):
            return "QuadForm<" + ",".join(str(self.coeffs[i][i].co[0]) for i in range(self.dim)) + ">"
        return f"QuadForm(dim={self.dim}, {self.ctx.short()})"


def _bilin(pm, u, v):
    ctx = u[0].ctx
    acc = ctx.zero()
    for i, ui in enumerate(u):
        if ui.is_zero():
            continue
        for j, vj in enumerate(v):
            if not vj.is_zero() and not pm[i][j].is_zero():
                acc = acc + ui * pm[i][j] * vj
    return acc


def _complement_basis(subspace: list[Vec], dim: int, ctx: FieldCtx) -> list[Vec]:
    rows = [list(v) for v in subspace]
    red, pivots = linalg.rref(rows) if rows else ([], [])
    pivset = set(pivots)
    return [linalg.unit_vec(ctx, dim, i) for i in range(dim) if i not in pivset]


# -- constructors -----------------------------------------------------------------


def diagonal_form(ctx: FieldCtx, entries) -> QuadForm:
    n = len(entries)
    z = ctx.zero()
    rows = [[z] * n for _ in range(n)]
    for i, e in enumerate(entries):
        rows[i][i] = ctx(e)
    return QuadForm(ctx, rows)


def binary_block(ctx: FieldCtx, a, b) -> QuadForm:
    """The form [a, b]: a x^2 + xy + b y^2."""
    z = ctx.zero()
    return QuadForm(ctx, [[ctx(a), ctx.one()], [z, ctx(b)]])


def hyperbolic_plane(ctx: FieldCtx) -> QuadForm:
    if ctx.characteristic == 2:
        return binary_block(ctx, 0, 0)
    return diagonal_form(ctx, [1, -1])


def orth_sum(q1: QuadForm, q2: QuadForm) -> QuadForm:
    if q1.ctx != q2.ctx:
        raise FormError("orthogonal sum across different fields")
    n, m = q1.dim, q2.dim
    z = q1.ctx.zero()
    rows = [[z] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = q1.coeffs[i][j]
    for i in range(m):
        for j in range(i, m):
            rows[n + i][n + j] = q2.coeffs[i][j]
    return QuadForm(q1.ctx, rows)


def tensor_bilinear(diag_entries, q: QuadForm) -> QuadForm:
    """Tensor a diagonal bilinear form <d_1, ..., d_k> with a quadratic form."""
    out = None
    for d in diag_entries:
        piece = q.scale(d)
        out = piece if out is None else orth_sum(out, piece)
    if out is None:
        raise FormError("empty bilinear factor")
    return out


def hyperbolic_form(ctx: FieldCtx, planes: int) -> QuadForm:
    out = hyperbolic_plane(ctx)
    for _ in range(planes - 1):
        out = orth_sum(out, hyperbolic_plane(ctx))
    return out


# -- invariants --------------------------------------------------------------------


@dataclass
class FormInvariants:
    """Complete isometry invariants over Q and over finite fields."""

    ctx_kind: str
    dim: int
    det: int | None = None              # square-free representative (rationals)
    signature: tuple[int, int] | None = None
    _entries_sf: tuple[int, ...] | None = None
    _hasse: dict | None = None
    det_is_square: bool | None = None   # finite odd
    arf: int | None = None              # GF(2^k): Artin-Schreier class 0/1
    blocks: int | None = None           # GF(2^k): number of [a,b] blocks
    rad_dim: int | None = None          # GF(2^k): polar radical dimension

    def hasse_at(self, place) -> int:
        if self._hasse is None:
            self._hasse = {}
        if place not in self._hasse:
            s = 1
            es = self._entries_sf
            for i in range(len(es)):
                for j in range(i + 1, len(es)):
                    s *= hilbert_symbol(es[i], es[j], place)
            self._hasse[place] = s
        return self._hasse[place]

    def bad_places(self) -> list:
        places = {2}
        for e in self._entries_sf or ():
            for p in factor(e):
                places.add(p)
        if self.det:
            for p in factor(self.det):
                places.add(p)
        return [INF_PLACE] + sorted(places)


def invariants(q: QuadForm) -> FormInvariants:
    if not q.is_regular():
        raise FormError("invariants require a regular form")
    kind = q.ctx.kind
    if kind == MULTIQUADRATIC:
        raise FormError("no isometry invariants over multiquadratic contexts")
    if q.ctx.characteristic == 2:
        blocks, lams, _ = q.block_decomposition()
        arf_val = q.ctx.zero()
        for a, b in blocks:
            arf_val = arf_val + a * b
        return FormInvariants(
            ctx_kind=kind,
            dim=q.dim,
            arf=q.ctx.artin_schreier_class(arf_val),
            blocks=len(blocks),
            rad_dim=len(lams),
        )
    values, _ = q.diagonalization()
    if any(v.is_zero() for v in values):
        raise FormError("invariants require a regular form")
    if kind == FINITE:
        det = q.ctx.one()
        for v in values:
            det = det * v
        return FormInvariants(ctx_kind=kind, dim=q.dim, det_is_square=q.ctx.is_square(det))
    entries = tuple(square_free_part(v.co[0]) for v in values)
    det = square_free_part(Fraction(_prod(entries)))
    sig = (sum(1 for e in entries if e > 0), sum(1 for e in entries if e < 0))
    return FormInvariants(
        ctx_kind=kind, dim=q.dim, det=det, signature=sig, _entries_sf=entries
    )


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _padic_square(d: int, p) -> bool:
    """Is the square-free integer d a square in Q_p (p prime or INF_PLACE)?"""
    if d == 1:
        return True
    if p == INF_PLACE:
        return d > 0
    if p == 2:
        return d % 2 == 1 and d % 8 == 1
    if d % p == 0:
        return False
    from .arith import legendre

    return legendre(d, p) == 1


def _local_isotropic(inv: FormInvariants, place) -> bool:
    n, d = inv.dim, inv.det
    if place == INF_PLACE:
        pos, neg = inv.signature
        return pos > 0 and neg > 0
    if n == 1:
        return False
    if n == 2:
        return _padic_square(square_free_part(Fraction(-d)), place)
    if n == 3:
        return inv.hasse_at(place) == hilbert_symbol(-1, -d, place)
    if n == 4:
        if not _padic_square(d, place):
            return True
        return inv.hasse_at(place) == hilbert_symbol(-1, -1, place)
    return True


def _rational_isotropic(inv: FormInvariants) -> bool:
    if inv.dim == 1:
        return False
    if inv.dim == 2:
        return square_free_part(Fraction(-inv.det)) == 1
    if inv.dim >= 5:
        pos, neg = inv.signature
        return pos > 0 and neg > 0
    return all(_local_isotropic(inv, v) for v in inv.bad_places())


def is_isotropic(q: QuadForm) -> bool:
    if q.ctx.kind == MULTIQUADRATIC:
        raise FormError(
            "no isotropy decision over multiquadratic contexts; "
            "use quadratic_ext_isotropy from a rational model"
        )
    if not q.is_regular():
        raise FormError("isotropy decision requires a regular form")
    if q.ctx.kind == RATIONAL:
        return _rational_isotropic(invariants(q))
    # finite fields
    if q.ctx.characteristic == 2:
        inv = invariants(q)
        if inv.dim >= 3:
            return True
        if inv.blocks == 1 and inv.rad_dim == 0:
            return inv.arf == 0
        return False
    if q.dim >= 3:
        return True
    if q.dim == 1:
        return False
    inv = invariants(q)
    values, _ = q.diagonalization()
    det = values[0] * values[1]
    return q.ctx.is_square(-det)


def witt_index(q: QuadForm) -> int:
    if not q.is_regular():
        raise FormError("Witt index requires a regular form")
    ctx = q.ctx
    if ctx.kind == MULTIQUADRATIC:
        raise FormError("no Witt decomposition over multiquadratic contexts")
    if ctx.characteristic == 2:
        inv = invariants(q)
        m = inv.blocks
        if m == 0:
            return 0
        return m if inv.arf == 0 else m - 1
    if ctx.kind == FINITE:
        inv = invariants(q)
        n = inv.dim
        if n % 2 == 1:
            return (n - 1) // 2
        m = n // 2
        values, _ = q.diagonalization()
        det = ctx.one()
        for v in values:
            det = det * v
        target = ctx(-1) ** m
        return m if ctx.is_square(det * target) else m - 1
    # rationals: peel hyperbolic planes at the invariant level
    inv = invariants(q)
    dim, det, sig = inv.dim, inv.det, inv.signature
    places = inv.bad_places()
    hasse = {v: inv.hasse_at(v) for v in places}
    w = 0
    while dim > 0:
        probe = FormInvariants(ctx_kind=RATIONAL, dim=dim, det=det, signature=sig,
                               _entries_sf=(), _hasse=dict(hasse))
        if not _rational_isotropic_syn(probe, places):
            break
        new_det = square_free_part(Fraction(-det))
        hasse = {v: hasse[v] * hilbert_symbol(-1, new_det, v) for v in places}
        det = new_det
        sig = (sig[0] - 1, sig[1] - 1)
        dim -= 2
        w += 1
    return w


def _rational_isotropic_syn(inv: FormInvariants, places) -> bool:
    if inv.dim == 0 or inv.dim == 1:
        return False
    if inv.dim == 2:
        return square_free_part(Fraction(-inv.det)) == 1
    if inv.dim >= 5:
        pos, neg = inv.signature
        return pos > 0 and neg > 0
    return all(_local_isotropic(inv, v) for v in places)


def anisotropic_dimension(q: QuadForm) -> int:
    return q.dim - 2 * witt_index(q)


# -- isometry and similarity ---------------------------------------------------------


def is_isometric(q1: QuadForm, q2: QuadForm) -> bool:
    if q1.ctx != q2.ctx:
        raise FormError("context mismatch")
    if q1.dim != q2.dim:
        return False
    i1, i2 = invariants(q1), invariants(q2)
    if q1.ctx.characteristic == 2:
        return (i1.blocks, i1.rad_dim, i1.arf) == (i2.blocks, i2.rad_dim, i2.arf)
    if q1.ctx.kind == FINITE:
        return i1.det_is_square == i2.det_is_square
    if i1.det != i2.det or i1.signature != i2.signature:
        return False
    places = set(i1.bad_places()) | set(i2.bad_places())
    return all(i1.hasse_at(v) == i2.hasse_at(v) for v in places)


def is_similar(q1: QuadForm, q2: QuadForm):
    """(similar?, scaling witness c with c*q1 isometric to q2, or None)."""
    if q1.ctx != q2.ctx:
        raise FormError("context mismatch")
    if q1.dim != q2.dim:
        return False, None
    ctx = q1.ctx
    if ctx.characteristic == 2:
        # every scalar is a square, so similarity collapses to isometry
        return (True, ctx.one()) if is_isometric(q1, q2) else (False, None)
    if ctx.kind == FINITE:
        for c in (ctx.one(), ctx.nonsquare()):
            if is_isometric(q1.scale(c), q2):
                return True, c
        return False, None
    i1, i2 = invariants(q1), invariants(q2)
    primes = {2}
    for e in (i1._entries_sf or ()) + (i2._entries_sf or ()):
        primes.update(factor(e))
    support = sorted(primes)
    for r in range(len(support) + 1):
        for subset in itertools.combinations(support, r):
            for sign in (1, -1):
                c = sign * _prod(subset) if subset else sign
                if is_isometric(q1.scale(QQ(c)), q2):
                    return True, ctx(c)
    return False, None


# -- constructive searches ------------------------------------------------------------


def _int_diag_model(q: QuadForm):
    """(sf_entries, scaled_basis): integral diagonal model for witness search."""
    values, basis = q.diagonalization()
    entries, scaled = [], []
    for v, b in zip(values, basis):
        if v.is_zero():
            entries.append(0)
            scaled.append(b)
            continue
        sf = square_free_part(v.co[0])
        r = rational_sqrt(v.co[0] / sf)
        scaled.append(linalg.vec_scale(q.ctx(1 / r), b))
        entries.append(sf)
    return entries, scaled


def _search_diag_zero(entries: list[int], bound: int, require: int | None = None):
    """Nonzero integer vector with sum e_i x_i^2 = 0, |x_i| <= bound.

    require, if given, is a coordinate that must be nonzero in the witness.
    Staged strategy: two-coordinate ratios, small full boxes, then
    meet-in-the-middle on 4-dimensional faces.
    """
    n = len(entries)
    if any(e == 0 for e in entries):
        i = entries.index(0)
        if require is None or require == i:
            return tuple(1 if j == i else 0 for j in range(n))
    # stage 1: coordinate pairs
    for i in range(n):
        for j in range(i + 1, n):
            if require is not None and require not in (i, j):
                continue
            if entries[i] * entries[j] < 0:
                r = rational_sqrt(Fraction(-entries[i], entries[j]))
                if r is not None and r.denominator <= bound and r.numerator <= bound:
                    v = [0] * n
                    v[i], v[j] = r.denominator, r.numerator
                    return tuple(v)
    # stage 2: growing full boxes (cheap, finds small witnesses in any dim)
    cap = max(2, min(bound, int(2000 ** (1.0 / max(1, n - 1)))))
    for h in _stages(cap):
        hit = _box_search(entries, h, require)
        if hit:
            return hit
    # stage 3: meet-in-the-middle on pairs of coordinate pairs
    if n >= 4:
        for combo in itertools.combinations(range(n), 4):
            if require is not None and require not in combo:
                continue
            hit = _mim4([entries[i] for i in combo], bound,
                        combo.index(require) if require in combo else None)
            if hit:
                v = [0] * n
                for k, i in enumerate(combo):
                    v[i] = hit[k]
                return tuple(v)
    if n >= 3:
        for combo in itertools.combinations(range(n), 3):
            if require is not None and require not in combo:
                continue
            hit = _mim3([entries[i] for i in combo], min(bound, 600),
                        combo.index(require) if require in combo else None)
            if hit:
                v = [0] * n
                for k, i in enumerate(combo):
                    v[i] = hit[k]
                return tuple(v)
    return None


def _stages(cap):
    h = 1
    while h < cap:
        yield h
        h *= 3
    yield cap


def _box_search(entries, h, require):
    n = len(entries)
    rng = range(-h, h + 1)
    for tail in itertools.product(rng, repeat=n - 1):
        rest = sum(e * t * t for e, t in zip(entries[1:], tail))
        if entries[0] == 0:
            continue
        q0 = Fraction(-rest, entries[0])
        r = rational_sqrt(q0)
        if r is None or r.denominator != 1 or r > h:
            continue
        v = (int(r),) + tail
        if all(x == 0 for x in v):
            continue
        if require is not None and v[require] == 0:
            continue
        return v
    return None


def _mim4(e, bound, require):
    lhs: dict[int, tuple[int, int]] = {}
    for x in range(bound + 1):
        for y in range(bound + 1):
            lhs.setdefault(e[0] * x * x + e[1] * y * y, (x, y))
    for z in range(bound + 1):
        for w in range(bound + 1):
            v = -(e[2] * z * z + e[3] * w * w)
            hit = lhs.get(v)
            if hit is None:
                continue
            x, y = hit
            if x == y == z == w == 0:
                continue
            cand = (x, y, z, w)
            if require is not None and cand[require] == 0:
                continue
            return cand
    return None


def _mim3(e, bound, require):
    lhs: dict[int, int] = {}
    for x in range(bound + 1):
        lhs.setdefault(e[0] * x * x, x)
    for y in range(bound + 1):
        for z in range(bound + 1):
            v = -(e[1] * y * y + e[2] * z * z)
            hit = lhs.get(v)
            if hit is None:
                continue
            if hit == y == z == 0:
                continue
            cand = (hit, y, z)
            if require is not None and cand[require] == 0:
                continue
            return cand
    return None


NOT_FOUND = None


def isotropic_vector(q: QuadForm, height_bound: int = 200) -> Vec | None:
    """A nonzero v with q(v) = 0, or None (which is NOT a proof of anisotropy)."""
    rq = q.rad_quad()
    if rq:
        return rq[0]
    ctx = q.ctx
    if ctx.kind == FINITE:
        return _finite_isotropic_vector(q)
    entries, basis = _int_diag_model(q)
    hit = _search_diag_zero(entries, height_bound)
    if hit is None:
        return None
    v = None
    for c, b in zip(hit, basis):
        if c == 0:
            continue
        piece = linalg.vec_scale(ctx(c), b)
        v = piece if v is None else linalg.vec_add(v, piece)
    assert v is not None and q(v).is_zero()
    return v


def _as_solve(ctx: FieldCtx, c: FieldElem) -> FieldElem | None:
    """Solve w^2 + w = c over GF(2^k) by linear algebra, or None."""
    xs = list(ctx.elements()) if ctx.order() <= 256 else None
    if xs is not None:
        for w in xs:
            if w * w + w == c:
                return w
        return None
    # GF(2)-linear solve on coordinates
    basis = [ctx.from_co([1 if i == j else 0 for j in range(ctx.k)]) for i in range(ctx.k)]
    cols = [(b * b + b).co for b in basis]
    f2 = None
    from .fields import GF as _GF

    f2 = _GF(2)
    rows = [[f2(cols[j][i]) for j in range(ctx.k)] + [f2(c.co[i])] for i in range(ctx.k)]
    red, pivots = linalg.rref(rows)
    if ctx.k in pivots:
        return None
    co = [0] * ctx.k
    for r, pc in enumerate(pivots):
        co[pc] = red[r][ctx.k].co[0]
    return ctx.from_co(co)


def _finite_isotropic_vector(q: QuadForm) -> Vec | None:
    ctx = q.ctx
    if ctx.characteristic == 2:
        blocks, lams, basis = q.block_decomposition()
        # single block: isotropic iff its Arf class is trivial
        for k, (a, b) in enumerate(blocks):
            e, f = basis[2 * k], basis[2 * k + 1]
            if a.is_zero():
                return e
            if b.is_zero():
                return f
            w = _as_solve(ctx, a * b)
            if w is not None:
                # a x^2 + xy + b y^2 = 0 with x = w/a, y = 1
                return linalg.vec_add(linalg.vec_scale(w / a, e), f)
        if len(blocks) >= 1 and len(blocks) * 2 < q.dim:
            # block + radical <lam>: solve [a,b](x,y) = lam, e.g. y = 0
            lam_idx = len(blocks) * 2
            for k, (a, b) in enumerate(blocks):
                for lam, rvec in zip(lams, basis[lam_idx:]):
                    if lam.is_zero():
                        continue
                    # a x^2 = lam has a solution since squaring is bijective
                    x = ctx.sqrt(lam / a) if not a.is_zero() else None
                    if x is not None:
                        return linalg.vec_add(linalg.vec_scale(x, basis[2 * k]), rvec)
        if len(blocks) >= 2:
            # anisotropic [a1,b1] is the norm form of GF(q^2), hence universal:
            # make it hit the value of f2 in the second block
            a1, b1 = blocks[0]
            t = blocks[1][1]  # q(f2), nonzero since the block is anisotropic
            for y in ctx.elements():
                if y.is_zero():
                    continue
                u = _as_solve(ctx, a1 * (b1 + t / (y * y)))
                if u is not None:
                    x = u * y / a1
                    v = linalg.vec_add(
                        linalg.vec_scale(x, basis[0]), linalg.vec_scale(y, basis[1])
                    )
                    return linalg.vec_add(v, basis[3])
        return None
    # odd characteristic finite field
    values, basis = q.diagonalization()
    n = q.dim
    for i in range(n):
        for j in range(i + 1, n):
            s = ctx.sqrt(-values[i] / values[j])
            if s is not None:
                return linalg.vec_add(basis[i], linalg.vec_scale(s, basis[j]))
    if n >= 3:
        # a x^2 + b y^2 = -c always solvable over a finite field: scan x
        a, b, c = values[0], values[1], values[2]
        for x in ctx.elements():
            s = ctx.sqrt((-c - a * x * x) / b)
            if s is not None:
                v = linalg.vec_add(linalg.vec_scale(x, basis[0]), linalg.vec_scale(s, basis[1]))
                return linalg.vec_add(v, basis[2])
    return None


def represent_value(q: QuadForm, c, height_bound: int = 200) -> Vec | None:
    """A vector v with q(v) = c, or None after the bounded search."""
    c = q.ctx(c)
    if c.is_zero():
        return isotropic_vector(q, height_bound)
    ctx = q.ctx
    if ctx.kind == FINITE:
        ext = orth_sum(q, diagonal_form(ctx, [-c]) if ctx.characteristic != 2
                       else QuadForm(ctx, [[-c]]))
        v = _finite_isotropic_vector(ext)
        if v is None or v[q.dim].is_zero():
            # scan directly on small fields
            if ctx.order() ** q.dim <= 200000:
                for co in itertools.product(list(ctx.elements()), repeat=q.dim):
                    if q(co) == c:
                        return tuple(co)
            return None
        t = v[q.dim].inv()
        return tuple(x * t for x in linalg.vec_scale(ctx.one(), v[: q.dim]))
    entries, basis = _int_diag_model(q)
    csf = square_free_part(c.co[0])
    r = rational_sqrt(c.co[0] / csf)
    hit = _search_diag_zero(entries + [-csf], height_bound, require=len(entries))
    if hit is None:
        return None
    # q(sum n_i b_i) = csf * m^2 with m = hit[-1]; rescale to hit c = csf * r^2
    t = ctx(r) / ctx(hit[-1])
    v = None
    for cc, b in zip(hit[:-1], basis):
        if cc == 0:
            continue
        piece = linalg.vec_scale(ctx(cc), b)
        v = piece if v is None else linalg.vec_add(v, piece)
    if v is None:
        return None
    v = linalg.vec_scale(t, v)
    assert q(v) == c
    return v


# -- Pfister forms ------------------------------------------------------------------


@dataclass
class PfisterForm:
    """An n-fold quadratic Pfister form, with slot parameters when known."""

    n: int
    form: QuadForm
    slots: tuple | None = None


def pfister_from_slots(ctx: FieldCtx, slots) -> QuadForm:
    """Build the tensor product of binary factors from slot parameters.

    Characteristic != 2: slots (a_1, ..., a_n) give <1,-a_1> x ... x <1,-a_n>.
    Characteristic 2: slots (b_1, ..., b_{n-1}, c) give the bilinear factors
    <1, b_i> tensored with the quadratic factor [1, c].
    """
    if ctx.characteristic != 2:
        out = diagonal_form(ctx, [1, -ctx(slots[0])])
        for a in slots[1:]:
            out = tensor_bilinear([ctx.one(), -ctx(a)], out)
        return out
    *bs, c = slots
    out = binary_block(ctx, 1, c)
    for b in bs:
        out = tensor_bilinear([ctx.one(), ctx(b)], out)
    return out


def pfister_normalize(q: QuadForm, n: int) -> PfisterForm:
    """Normalize a form known to be similar to an n-fold Pfister form.

    Isotropic (decidable contexts): the hyperbolic Pfister form is returned.
    Anisotropic, or undecidable contexts: scale by a represented value, which
    by roundness is THE Pfister form of the similarity class.
    """
    if q.dim != (1 << n):
        raise FormError(f"dimension {q.dim} is not 2^{n}")
    ctx = q.ctx
    decidable = ctx.kind in (RATIONAL, FINITE)
    if decidable and not q.is_regular():
        raise FormError("Pfister normalization requires a regular form")
    if decidable and is_isotropic(q):
        form = hyperbolic_form(ctx, 1 << (n - 1)) if n >= 1 else diagonal_form(ctx, [1])
        if ctx.characteristic != 2:
            slots = (ctx.one(),) * n
        else:
            slots = (ctx.one(),) * (n - 1) + (ctx.zero(),)
        return PfisterForm(n=n, form=form, slots=slots)
    c = _first_value(q)
    return PfisterForm(n=n, form=q.scale(c.inv()), slots=None)


def _first_value(q: QuadForm) -> FieldElem:
    for i in range(q.dim):
        v = linalg.unit_vec(q.ctx, q.dim, i)
        val = q(v)
        if not val.is_zero():
            return val
    for i in range(q.dim):
        for j in range(i + 1, q.dim):
            v = linalg.vec_add(
                linalg.unit_vec(q.ctx, q.dim, i), linalg.unit_vec(q.ctx, q.dim, j)
            )
            val = q(v)
            if not val.is_zero():
                return val
    raise FormError("form is identically zero on the tested vectors")


def pfister_slots(pf: PfisterForm, height_bound: int = 40) -> tuple | None:
    """Recover slot parameters of a Pfister form over Q, or None.

    Heuristic: candidate slots come from values represented by the pure part;
    every candidate tuple is verified exactly by reconstruction isometry.
    """
    q = pf.form
    if q.ctx.kind != RATIONAL:
        raise FormError("slot recovery implemented over the rationals")
    n = pf.n
    if n == 0:
        return ()
    if is_isotropic(q):
        return (1,) * n
    # split off a vector representing 1
    v1 = represent_value(q, 1, height_bound)
    if v1 is None:
        return None
    pm = q.polar_matrix()
    row = [[sum((pm[i][j] * v1[i] for i in range(q.dim)), q.ctx.zero())
            for j in range(q.dim)]]
    comp = linalg.kernel(row, q.ctx)
    pure = q.restrict(comp)
    values, _ = pure.diagonalization()
    pool = []
    for v in values:
        sf = square_free_part(v.co[0])
        a = square_free_part(Fraction(-sf))
        if a not in pool:
            pool.append(a)
    for extra in _small_values(pure, 2 if pure.dim <= 4 else 1):
        a = square_free_part(-extra)
        if a not in pool:
            pool.append(a)
    target_inv = invariants(q)
    for combo in itertools.product(pool, repeat=n):
        cand = pfister_from_slots(q.ctx, combo)
        ci = invariants(cand)
        if ci.det != target_inv.det or ci.signature != target_inv.signature:
            continue
        if is_isometric(cand, q):
            return tuple(combo)
    return None


def _small_values(q: QuadForm, h: int):
    out = []
    rng = range(-h, h + 1)
    for co in itertools.product(rng, repeat=q.dim):
        if all(c == 0 for c in co):
            continue
        val = q(tuple(q.ctx(c) for c in co)).co[0]
        if val != 0 and square_free_part(val) not in out:
            out.append(square_free_part(val))
            if len(out) > 12:
                return out
    return out


def quadratic_ext_isotropy(q: QuadForm, d) -> bool:
    """Does q over Q become isotropic over Q(sqrt(d))?

    Classical criterion: yes iff q is isotropic already or contains a binary
    subform similar to <1, -d>; the subform test runs through Witt indices.
    """
    if q.ctx.kind != RATIONAL:
        raise FormError("quadratic extension isotropy is a rational-side test")
    d_sf = square_free_part(Fraction(d))
    if d_sf == 1:
        raise FormError("d must not be a square")
    if is_isotropic(q):
        return True
    inv = invariants(q)
    primes = {2}
    primes.update(factor(d_sf))
    for e in inv._entries_sf:
        primes.update(factor(e))
    support = sorted(primes)
    for r in range(len(support) + 1):
        for subset in itertools.combinations(support, r):
            for sign in (1, -1):
                a = sign * _prod(subset) if subset else sign
                probe = orth_sum(q, diagonal_form(q.ctx, [-a, a * d_sf]))
                if witt_index(probe) >= 2:
                    return True
    return False
