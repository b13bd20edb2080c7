"""Exact ground fields: rationals, GF(p^k), and multiquadratic extensions of Q.

All three kinds sit behind one coordinate-vector interface: an element is a
tuple of exact coordinates over the prime field (Fraction for characteristic
zero, ints mod p otherwise).  Multiquadratic elements live on the 2^r basis
of square-root monomials indexed by subsets of the radicand list; inversion
there goes through the regular representation.

No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    factor,
    is_prime,
    is_rational_square,
    legendre,
    odd_part,
    rational_sqrt,
    square_free_part,
)

RATIONAL = "rational"
FINITE = "finite"
MULTIQUADRATIC = "multiquadratic"

INF_PLACE = "inf"


class FieldError(ValueError):
    pass


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    a = list(a)
    binv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * binv % p
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return _poly_trim(q), _poly_trim(a)


def _poly_powmod(a, e, mod, p):
    r = (1,)
    a = _poly_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            r = _poly_divmod(_poly_mul(r, a, p), mod, p)[1]
        a = _poly_divmod(_poly_mul(a, a, p), mod, p)[1]
        e >>= 1
    return r


def _poly_gcd(a, b, p):
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def _is_irreducible(f, p):
    k = len(f) - 1
    x = (0, 1)
    if _poly_powmod(x, p**k, f, p) != x:
        return False
    for ell in factor(k):
        g = _poly_powmod(x, p ** (k // ell), f, p)
        diff = list(g) + [0] * (2 - len(g))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd(f, _poly_trim(diff), p)) > 1:
            return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k over GF(p), by coefficient value."""
    if k == 1:
        return (0, 1)
    for n in range(p**k):
        coeffs = []
        m = n
        for _ in range(k):
            coeffs.append(m % p)
            m //= p
        f = tuple(coeffs) + (1,)
        if _is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldElem:
    """Element of a FieldCtx, held as an exact coordinate tuple."""

    __slots__ = ("ctx", "co")

    def __init__(self, ctx: "FieldCtx", co: tuple):
        self.ctx = ctx
        self.co = co

    def is_zero(self) -> bool:
        return not any(self.co)

    def __eq__(self, other):
        if type(other) is FieldElem:
            if self.ctx is not other.ctx and self.ctx != other.ctx:
                return False
            return self.co == other.co
        if isinstance(other, (int, Fraction)):
            return self.co == self.ctx(other).co
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key(), self.co))

    def __add__(self, other):
        other = self.ctx(other)
        if self.ctx.kind == FINITE:
            p = self.ctx.p
            return FieldElem(self.ctx, tuple((a + b) % p for a, b in zip(self.co, other.co)))
        return FieldElem(self.ctx, tuple(a + b for a, b in zip(self.co, other.co)))

    __radd__ = __add__

    def __neg__(self):
        if self.ctx.kind == FINITE:
            p = self.ctx.p
            return FieldElem(self.ctx, tuple((-a) % p for a in self.co))
        return FieldElem(self.ctx, tuple(-a for a in self.co))

    def __sub__(self, other):
        return self + (-self.ctx(other))

    def __rsub__(self, other):
        return self.ctx(other) + (-self)

    def __mul__(self, other):
        other = self.ctx(other)
        return self.ctx._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.ctx(other)
        return self.ctx._mul(self, other.inv())

    def __rtruediv__(self, other):
        return self.ctx(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        r = self.ctx.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def inv(self) -> "FieldElem":
        return self.ctx._inv(self)

    def __repr__(self):
        return f"FieldElem({self.ctx.short()}, {list(self.co)})"


class FieldCtx:
    """An exact ground field; immutable and safe to share."""

    def __init__(self, kind: str, *, p: int = 0, k: int = 1,
                 modulus: tuple[int, ...] | None = None,
                 radicands: tuple[int, ...] = ()):
        self.kind = kind
        if kind == RATIONAL:
            self.characteristic = 0
            self.dim = 1
        elif kind == FINITE:
            if not is_prime(p):
                raise FieldError(f"{p} is not prime")
            if k < 1 or k > 16:
                raise FieldError("finite extension degree must be in 1..16")
            self.p, self.k = p, k
            self.modulus = tuple(c % p for c in modulus) if modulus else default_modulus(p, k)
            if len(self.modulus) != k + 1 or self.modulus[-1] % p != 1:
                raise FieldError("modulus must be monic of degree k")
            if k > 1 and not _is_irreducible(self.modulus, p):
                raise FieldError("modulus is not irreducible")
            self.characteristic = p
            self.dim = k
        elif kind == MULTIQUADRATIC:
            rads = tuple(square_free_part(d) for d in radicands)
            if len(set(rads)) != len(rads):
                raise FieldError("repeated radicand square class")
            self.radicands = rads
            self.characteristic = 0
            self.dim = 1 << len(rads)
            self._check_independent()
        else:
            raise FieldError(f"unknown field kind {kind!r}")

    # -- construction helpers -------------------------------------------------

    def _check_independent(self):
        rads = self.radicands
        for mask in range(1, 1 << len(rads)):
            prod = 1
            for i in range(len(rads)):
                if mask >> i & 1:
                    prod *= rads[i]
            if is_rational_square(prod):
                raise FieldError("radicands are not independent square classes")

    def key(self):
        k = getattr(self, "_key", None)
        if k is None:
            if self.kind == RATIONAL:
                k = (RATIONAL,)
            elif self.kind == FINITE:
                k = (FINITE, self.p, self.k, self.modulus)
            else:
                k = (MULTIQUADRATIC, self.radicands)
            self._key = k
        return k

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FieldCtx) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def short(self) -> str:
        if self.kind == RATIONAL:
            return "QQ"
        if self.kind == FINITE:
            return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"
        return "QQ(" + ",".join(f"sqrt({d})" for d in self.radicands) + ")"

    def __repr__(self):
        return f"FieldCtx({self.short()})"

    # -- element constructors --------------------------------------------------

    def zero(self) -> FieldElem:
        return FieldElem(self, (Fraction(0),) * self.dim if self.characteristic == 0
                         else (0,) * self.dim)

    def one(self) -> FieldElem:
        co = list(self.zero().co)
        co[0] = Fraction(1) if self.characteristic == 0 else 1
        return FieldElem(self, tuple(co))

    def __call__(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.ctx != self:
                raise FieldError(f"element of {x.ctx.short()} used in {self.short()}")
            return x
        q = Fraction(x)
        if self.kind == FINITE:
            den = q.denominator % self.p
            if den == 0:
                raise FieldError("denominator divisible by the characteristic")
            v = q.numerator * pow(den, self.p - 2, self.p) % self.p
            return FieldElem(self, (v,) + (0,) * (self.dim - 1))
        co = [Fraction(0)] * self.dim
        co[0] = q
        return FieldElem(self, tuple(co))

    def from_co(self, co) -> FieldElem:
        co = list(co)
        if len(co) != self.dim:
            raise FieldError("coordinate length mismatch")
        if self.kind == FINITE:
            return FieldElem(self, tuple(int(c) % self.p for c in co))
        return FieldElem(self, tuple(Fraction(c) for c in co))

    def gen(self, i: int = 0) -> FieldElem:
        """The i-th canonical generator (t for finite fields, sqrt(d_i) else)."""
        co = list(self.zero().co)
        if self.kind == FINITE:
            if self.k == 1:
                raise FieldError("prime field has no generator beyond 1")
            co[1] = 1
        elif self.kind == MULTIQUADRATIC:
            co[1 << i] = Fraction(1)
        else:
            raise FieldError("rationals have no generator")
        return FieldElem(self, tuple(co))

    # -- arithmetic ------------------------------------------------------------

    def _mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        if self.kind == RATIONAL:
            return FieldElem(self, (a.co[0] * b.co[0],))
        if self.kind == FINITE:
            prod = _poly_mul(_poly_trim(list(a.co)), _poly_trim(list(b.co)), self.p)
            rem = _poly_divmod(prod, self.modulus, self.p)[1] if len(prod) > self.k else prod
            co = list(rem) + [0] * (self.k - len(rem))
            return FieldElem(self, tuple(co))
        out = [Fraction(0)] * self.dim
        rads = self.radicands
        for s, x in enumerate(a.co):
            if x == 0:
                continue
            for t, y in enumerate(b.co):
                if y == 0:
                    continue
                common = s & t
                c = x * y
                for i in range(len(rads)):
                    if common >> i & 1:
                        c *= rads[i]
                out[s ^ t] += c
        return FieldElem(self, tuple(out))

    def _inv(self, a: FieldElem) -> FieldElem:
        if a.is_zero():
            raise ZeroDivisionError("field element is zero")
        if self.kind == RATIONAL:
            return FieldElem(self, (1 / a.co[0],))
        if self.kind == FINITE:
            # extended Euclid in GF(p)[t]
            p = self.p
            r0, r1 = self.modulus, _poly_trim(list(a.co))
            s0, s1 = (), (1,)
            while r1:
                q, r = _poly_divmod(r0, r1, p)
                r0, r1 = r1, r
                qs = _poly_mul(q, s1, p)
                ns = list(s0) + [0] * max(0, len(qs) - len(s0))
                for i, c in enumerate(qs):
                    ns[i] = (ns[i] - c) % p
                s0, s1 = s1, _poly_trim(ns)
            c = pow(r0[0], p - 2, p)
            co = [x * c % p for x in s0] + [0] * (self.k - len(s0))
            return FieldElem(self, tuple(co[:self.k]))
        # multiquadratic: solve x * y = 1 through the regular representation
        n = self.dim
        basis = [FieldElem(self, tuple(Fraction(1) if j == i else Fraction(0) for j in range(n)))
                 for i in range(n)]
        cols = [self._mul(a, e).co for e in basis]
        aug = [[cols[j][i] for j in range(n)] + [Fraction(1) if i == 0 else Fraction(0)]
               for i in range(n)]
        sol = _solve_fraction_system(aug, n)
        if sol is None:
            raise ZeroDivisionError("element is a zero divisor (invalid field state)")
        return FieldElem(self, tuple(sol))

    # -- squares ---------------------------------------------------------------

    def is_square(self, a: FieldElem) -> bool:
        a = self(a)
        if a.is_zero():
            return True
        if self.kind == RATIONAL:
            return is_rational_square(a.co[0])
        if self.kind == FINITE:
            if self.p == 2:
                return True
            q = self.p ** self.k
            return (a ** ((q - 1) // 2)) == self.one()
        return self.sqrt(a) is not None

    def sqrt(self, a: FieldElem) -> FieldElem | None:
        a = self(a)
        if a.is_zero():
            return self.zero()
        if self.kind == RATIONAL:
            r = rational_sqrt(a.co[0])
            return None if r is None else self(r)
        if self.kind == FINITE:
            if self.p == 2:
                # Frobenius inverse: squaring is bijective
                return a ** (self.p ** self.k // 2) if self.k > 1 else a
            q = self.p ** self.k
            if (a ** ((q - 1) // 2)) != self.one():
                return None
            # Tonelli-Shanks in the cyclic group of order q-1
            if q % 4 == 3:
                return a ** ((q + 1) // 4)
            return self._tonelli(a)
        return self._mq_sqrt(a)

    def _tonelli(self, a: FieldElem) -> FieldElem:
        q = self.p ** self.k
        s, d = odd_part(q - 1)
        z = self.nonsquare()
        m, c, t, r = s, z ** d, a ** d, a ** ((d + 1) // 2)
        one = self.one()
        while t != one:
            i, t2 = 0, t
            while t2 != one:
                t2 = t2 * t2
                i += 1
            b = c ** (1 << (m - i - 1))
            m, c, t, r = i, b * b, t * b * b, r * b
        return r

    def _mq_sqrt(self, a: FieldElem) -> FieldElem | None:
        rads = self.radicands
        if not rads:
            r = rational_sqrt(a.co[0])
            return None if r is None else self(r)
        sub = FieldCtx(MULTIQUADRATIC, radicands=rads[:-1]) if len(rads) > 1 \
            else FieldCtx(RATIONAL)
        half = self.dim // 2
        alpha = FieldElem(sub, a.co[:half])
        beta = FieldElem(sub, a.co[half:])
        d = rads[-1]

        def lift(lo: FieldElem, hi: FieldElem) -> FieldElem:
            return FieldElem(self, lo.co + hi.co)

        if beta.is_zero():
            s = sub.sqrt(alpha)
            if s is not None:
                return lift(s, sub.zero())
            t = sub.sqrt(alpha / sub(d))
            if t is not None:
                return lift(sub.zero(), t)
            return None
        # (s + t sqrt(d))^2 = a: solve s^2 = (alpha +- gamma)/2, gamma^2 = alpha^2 - d beta^2
        gamma = sub.sqrt(alpha * alpha - sub(d) * beta * beta)
        if gamma is None:
            return None
        for g in (gamma, -gamma):
            s2 = (alpha + g) / sub(2)
            s = sub.sqrt(s2)
            if s is not None and not s.is_zero():
                t = beta / (sub(2) * s)
                cand = lift(s, t)
                if cand * cand == a:
                    return cand
        return None

    # -- finite-field specifics --------------------------------------------------

    def order(self) -> int:
        if self.kind != FINITE:
            raise FieldError("order only defined for finite fields")
        return self.p ** self.k

    def elements(self):
        """Iterate all elements (finite fields only; oracle use)."""
        if self.kind != FINITE:
            raise FieldError("cannot enumerate an infinite field")
        co = [0] * self.k
        while True:
            yield FieldElem(self, tuple(co))
            i = 0
            while i < self.k:
                co[i] += 1
                if co[i] < self.p:
                    break
                co[i] = 0
                i += 1
            else:
                return

    def nonsquare(self) -> FieldElem:
        if self.kind == FINITE:
            if self.p == 2:
                raise FieldError("every element of GF(2^k) is a square")
            q = self.p ** self.k
            for e in self.elements():
                if not e.is_zero() and (e ** ((q - 1) // 2)) != self.one():
                    return e
            raise FieldError("unreachable")
        if self.kind == RATIONAL:
            return self(-1)
        raise FieldError("no canonical nonsquare in a multiquadratic field")

    def absolute_trace(self, a: FieldElem) -> int:
        """Trace GF(p^k) -> GF(p), returned as an int in [0, p)."""
        if self.kind != FINITE:
            raise FieldError("absolute trace needs a finite field")
        t = self.zero()
        x = self(a)
        for _ in range(self.k):
            t = t + x
            x = x ** self.p
        return t.co[0]

    def artin_schreier_class(self, a: FieldElem) -> int:
        """Class of a in GF(2^k)/{x^2+x}, encoded 0/1 via the absolute trace."""
        if self.kind != FINITE or self.p != 2:
            raise FieldError("Artin-Schreier classes live in characteristic 2")
        return self.absolute_trace(a)


def _solve_fraction_system(aug: list[list[Fraction]], n: int) -> list[Fraction] | None:
    """Solve an n x n system given as rows of length n+1; None if singular."""
    m = [row[:] for row in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [c * inv for c in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


QQ = FieldCtx(RATIONAL)


def GF(p: int, k: int = 1, modulus=None) -> FieldCtx:
    return FieldCtx(FINITE, p=p, k=k, modulus=tuple(modulus) if modulus else None)


def multiquadratic(*radicands: int) -> FieldCtx:
    return FieldCtx(MULTIQUADRATIC, radicands=tuple(radicands))


# -- square classes and Hilbert symbols ------------------------------------------


def square_class_equal(ctx: FieldCtx, a: FieldElem, b: FieldElem) -> bool:
    """True iff a/b is a square in ctx; a, b must be nonzero."""
    a, b = ctx(a), ctx(b)
    if a.is_zero() or b.is_zero():
        raise FieldError("square classes need nonzero inputs")
    return ctx.is_square(a / b)


def hilbert_symbol(a, b, place) -> int:
    """Hilbert symbol (a, b) at a place of Q: a prime, 2, or INF_PLACE."""
    a = square_free_part(Fraction(a))
    b = square_free_part(Fraction(b))
    if place == INF_PLACE:
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    if p == 2:
        alpha, u = odd_part(abs(a))
        beta, w = odd_part(abs(b))
        u, w = u * (1 if a > 0 else -1), w * (1 if b > 0 else -1)
        eps_u, eps_w = (u - 1) // 2 % 2, (w - 1) // 2 % 2
        om_u, om_w = (u * u - 1) // 8 % 2, (w * w - 1) // 8 % 2
        e = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if e % 2 else 1
    if not is_prime(p) or p == 2:
        raise FieldError(f"invalid place {place!r}")
    alpha = 1 if a % p == 0 else 0
    beta = 1 if b % p == 0 else 0
    u = a // p if alpha else a
    w = b // p if beta else b
    s = 1
    if alpha and beta:
        s *= legendre(-1, p)
    if beta:
        s *= legendre(u, p)
    if alpha:
        s *= legendre(w, p)
    return s


def bad_places(*values) -> list:
    """INF_PLACE, 2, and the odd primes dividing any of the given rationals."""
    places = {2}
    for v in values:
        q = Fraction(v)
        if q == 0:
            continue
        for p in factor(q.numerator * q.denominator):
            places.add(p)
    return [INF_PLACE] + sorted(places)


@dataclass
class ScalarExtension:
    """Result of adjoining a square root to a rational-side field."""

    ctx: FieldCtx
    trivial: bool
    sqrt_value: FieldElem  # a square root of d inside ctx

    def embed(self, x: FieldElem) -> FieldElem:
        if self.trivial:
            return self.ctx(x)
        if x.ctx.kind == RATIONAL:
            return self.ctx(x.co[0])
        # multiquadratic -> multiquadratic with one more radicand appended
        out = list(self.ctx.zero().co)
        for mask, c in enumerate(x.co):
            out[mask] = c
        return self.ctx.from_co(out)


def extend_scalars(ctx: FieldCtx, d) -> ScalarExtension:
    """Adjoin sqrt(d) to a rational or multiquadratic context.

    If d is already a square the original context is returned with an
    identity embedding flag.
    """
    if ctx.kind not in (RATIONAL, MULTIQUADRATIC):
        raise FieldError("scalar extension only over rational-side fields")
    d0 = square_free_part(Fraction(d))
    root = ctx.sqrt(ctx(Fraction(d)))
    if root is not None:
        return ScalarExtension(ctx, True, root)
    rads = ctx.radicands if ctx.kind == MULTIQUADRATIC else ()
    new = FieldCtx(MULTIQUADRATIC, radicands=rads + (d0,))
    ext = ScalarExtension(new, False, new.zero())
    ext.sqrt_value = new.sqrt(ext.embed(ctx(Fraction(d))))
    return ext
