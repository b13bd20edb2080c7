"""JSON interchange: exact scalars as numerator/denominator strings, field
contexts and forms as plain dictionaries, reports canonicalized for
byte-identical reproducibility."""

from __future__ import annotations

import json
from fractions import Fraction

from .fields import FINITE, MULTIQUADRATIC, RATIONAL, FieldCtx, FieldElem, GF, QQ, multiquadratic
from .quadforms import QuadForm


def ctx_to_json(ctx: FieldCtx) -> dict:
    if ctx.kind == RATIONAL:
        return {"kind": "rational"}
    if ctx.kind == FINITE:
        return {"kind": "finite", "p": ctx.p, "k": ctx.k}
    return {"kind": "multiquadratic", "radicands": list(ctx.radicands)}


def ctx_from_json(d: dict) -> FieldCtx:
    kind = d.get("kind")
    if kind == "rational":
        return QQ
    if kind == "finite":
        return GF(int(d["p"]), int(d.get("k", 1)),
                  modulus=d.get("modulus"))
    if kind == "multiquadratic":
        return multiquadratic(*[int(r) for r in d["radicands"]])
    raise ValueError(f"unknown field kind {kind!r}")


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def elem_to_json(e: FieldElem):
    if e.ctx.kind == RATIONAL:
        return _frac_str(e.co[0])
    if e.ctx.kind == FINITE:
        return list(e.co)
    return [_frac_str(c) for c in e.co]


def elem_from_json(ctx: FieldCtx, v) -> FieldElem:
    if isinstance(v, FieldElem):
        return ctx(v)
    if isinstance(v, (int, str)):
        return ctx(Fraction(v))
    if isinstance(v, float):
        raise ValueError("floating point input is not accepted; use 'p/q' strings")
    if isinstance(v, list):
        if ctx.kind == FINITE:
            return ctx.from_co([int(c) for c in v])
        if ctx.kind == MULTIQUADRATIC:
            return ctx.from_co([Fraction(c) for c in v])
        raise ValueError("coordinate lists need a finite or multiquadratic context")
    raise ValueError(f"cannot parse field element from {v!r}")


def vec_to_json(v) -> list:
    return [elem_to_json(c) for c in v]


def vec_from_json(ctx: FieldCtx, xs, dim: int):
    if len(xs) != dim:
        raise ValueError(f"vector length {len(xs)} != dimension {dim}")
    return tuple(elem_from_json(ctx, x) for x in xs)


def form_to_json(q: QuadForm) -> dict:
    return {
        "ctx": ctx_to_json(q.ctx),
        "coeffs": [[elem_to_json(c) for c in row] for row in q.coeffs],
    }


def form_from_json(d: dict) -> QuadForm:
    ctx = ctx_from_json(d["ctx"])
    return QuadForm(ctx, [[elem_from_json(ctx, c) for c in row] for row in d["coeffs"]])


def canonical_dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
