"""Instance definitions: the JSON schema for algebras-with-involution, the
builder that turns a spec into verified objects, and the built-in corpus.

An instance is a field descriptor plus a factor list; factors are tensored
left to right.  Factor kinds:

  {"kind": "quaternion", "a": ..., "b": ..., "involution":
        "canonical" | {"orthogonal_s": [c0, c1, c2, c3]}}
  {"kind": "matrix", "n": ..., "involution":
        "transpose" | {"adjoint_diag": [...]} | {"adjoint_gram": [[...]]}}
  {"kind": "etale_center", "d": ...}          (unitary centre, canonical)
  {"kind": "double", "base": [factor, ...]}   (A0 x A0^op with the switch)
  {"kind": "raw", "dim": n, "mult": ..., "unit": [...],
        "involution_matrix": [[...]]}

Scalars are exact: integers or "p/q" strings (coordinate lists over finite
or multiquadratic fields).  An optional "L" entry supplies neat biquadratic
generators; "options" carries height_bound and seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fields import FieldCtx, extend_scalars
from .jsonio import ctx_from_json, elem_from_json, vec_from_json
from .algebras import (
    Provenance,
    StructureAlgebra,
    double_algebra,
    etale_quadratic_algebra,
    matrix_algebra,
    quaternion_algebra,
    tensor_embed_left,
    tensor_embed_right,
    tensor_product,
)
from .involutions import (
    Involution,
    adjoint_diag_involution,
    adjoint_involution,
    canonical_etale2,
    canonical_quaternion,
    involution_from_matrix,
    orthogonal_quaternion,
    switch_involution,
    tensor_involution,
)
from .etale import BiquadraticL


class InstanceError(ValueError):
    pass


@dataclass
class BuiltInstance:
    ctx: FieldCtx
    algebra: StructureAlgebra
    involution: Involution
    L: BiquadraticL | None
    height_bound: int
    seed: int
    factors: list  # [(algebra, involution, embed)] of the top-level factors
    meta: dict = dc_field(default_factory=dict)
    spec: dict = dc_field(default_factory=dict)


def _build_factor(ctx: FieldCtx, f: dict):
    kind = f.get("kind")
    if kind == "quaternion":
        a = elem_from_json(ctx, f["a"])
        b = elem_from_json(ctx, f["b"])
        alg = quaternion_algebra(ctx, a, b)
        inv_spec = f.get("involution", "canonical")
        if inv_spec == "canonical":
            inv = canonical_quaternion(alg)
        elif isinstance(inv_spec, dict) and "orthogonal_s" in inv_spec:
            s_vec = vec_from_json(ctx, inv_spec["orthogonal_s"], 4)
            inv = orthogonal_quaternion(alg, s_vec)
        else:
            raise InstanceError(f"unknown quaternion involution {inv_spec!r}")
        return alg, inv
    if kind == "matrix":
        n = int(f["n"])
        alg = matrix_algebra(ctx, n)
        inv_spec = f.get("involution", "transpose")
        if inv_spec == "transpose":
            inv = adjoint_diag_involution(alg, [1] * n)
        elif isinstance(inv_spec, dict) and "adjoint_diag" in inv_spec:
            entries = [elem_from_json(ctx, x) for x in inv_spec["adjoint_diag"]]
            inv = adjoint_diag_involution(alg, entries)
        elif isinstance(inv_spec, dict) and "adjoint_gram" in inv_spec:
            gram = [[elem_from_json(ctx, x) for x in row]
                    for row in inv_spec["adjoint_gram"]]
            inv = adjoint_involution(alg, gram)
        else:
            raise InstanceError(f"unknown matrix involution {inv_spec!r}")
        return alg, inv
    if kind == "etale_center":
        d = elem_from_json(ctx, f["d"])
        alg = etale_quadratic_algebra(ctx, d)
        return alg, canonical_etale2(alg)
    if kind == "double":
        base = f.get("base", [])
        if not base:
            raise InstanceError("double factor needs a base algebra list")
        a0 = None
        for bf in base:
            balg, _ = _build_factor(ctx, {**bf, "involution": bf.get("involution",
                                          _default_involution(bf))})
            a0 = balg if a0 is None else tensor_product(a0, balg)
        d = double_algebra(a0)
        return d, switch_involution(d)
    if kind == "raw":
        dim = int(f["dim"])
        mult = [
            [[(int(k), elem_from_json(ctx, c)) for k, c in cell] for cell in row]
            for row in f["mult"]
        ]
        unit = vec_from_json(ctx, f["unit"], dim)
        alg = StructureAlgebra(ctx, mult, unit, provenance=Provenance("raw"))
        m = [[elem_from_json(ctx, c) for c in row] for row in f["involution_matrix"]]
        return alg, involution_from_matrix(alg, m)
    raise InstanceError(f"unknown factor kind {kind!r}")


def _default_involution(bf: dict):
    return "canonical" if bf.get("kind") == "quaternion" else "transpose"


def build_instance(spec: dict) -> BuiltInstance:
    if "field" not in spec or "algebra" not in spec:
        raise InstanceError("instance needs 'field' and 'algebra' entries")
    ctx = ctx_from_json(spec["field"])
    factors = []
    for f in spec["algebra"]:
        try:
            factors.append(_build_factor(ctx, f))
        except (KeyError, ValueError) as exc:
            raise InstanceError(f"factor {f!r}: {exc}") from exc
    if not factors:
        raise InstanceError("empty factor list")
    alg, inv = factors[0]
    embeds = [lambda v: v]
    for falg, finv in factors[1:]:
        t = tensor_product(alg, falg)
        inv = tensor_involution(t, inv, finv)
        old = embeds
        embeds = [
            (lambda e: (lambda v: tensor_embed_left(t, e(v))))(e) for e in old
        ]
        embeds.append((lambda tt: (lambda v: tensor_embed_right(tt, v)))(t))
        alg = t
    factor_views = [
        (factors[k][0], factors[k][1], embeds[k]) for k in range(len(factors))
    ]
    L = None
    lspec = spec.get("L")
    if lspec:
        gens = lspec.get("generators")
        if not gens or len(gens) != 2:
            raise InstanceError("L override needs exactly two generators")
        g1 = vec_from_json(ctx, gens[0], alg.dim)
        g2 = vec_from_json(ctx, gens[1], alg.dim)
        L = BiquadraticL(alg, g1, g2)
    opts = spec.get("options", {})
    meta = {
        "exp_le_2": all(f.get("kind") in ("quaternion", "matrix", "etale_center", "double")
                        for f in spec["algebra"]),
        "coind_even": any(
            f.get("kind") == "matrix" and int(f.get("n", 0)) % 2 == 0
            for f in spec["algebra"]
        ) or any(f.get("kind") == "double" for f in spec["algebra"]) or None,
    }
    return BuiltInstance(
        ctx=ctx,
        algebra=alg,
        involution=inv,
        L=L,
        height_bound=int(opts.get("height_bound", 200)),
        seed=int(opts.get("seed", 0)),
        factors=factor_views,
        meta=meta,
        spec=spec,
    )


def extend_instance(spec: dict, d: int) -> tuple[dict, object]:
    """The same instance over the quadratic extension adjoining sqrt(d).

    Returns (new_spec, extension); factor parameters are rational numbers and
    re-read unchanged over the larger field.
    """
    if spec["field"].get("kind") == "rational":
        rads = []
    elif spec["field"].get("kind") == "multiquadratic":
        rads = list(spec["field"]["radicands"])
    else:
        raise InstanceError("base change starts from a rational-side field")
    ctx = ctx_from_json(spec["field"])
    ext = extend_scalars(ctx, d)
    if ext.trivial:
        new_field = spec["field"]
    else:
        new_field = {"kind": "multiquadratic",
                     "radicands": [int(r) for r in ext.ctx.radicands]}
    new_spec = dict(spec)
    new_spec["field"] = new_field
    return new_spec, ext


# -- built-in corpus ----------------------------------------------------------------


def _quat(a, b, inv="canonical"):
    return {"kind": "quaternion", "a": a, "b": b, "involution": inv}


def _orth_quat(a, b, s):
    return {"kind": "quaternion", "a": a, "b": b, "involution": {"orthogonal_s": s}}


def _mat(n, diag):
    return {"kind": "matrix", "n": n, "involution": {"adjoint_diag": diag}}


def _inst(*factors, field=None, L=None, options=None):
    out = {"field": field or {"kind": "rational"}, "algebra": list(factors)}
    if L:
        out["L"] = L
    if options:
        out["options"] = options
    return out


def builtin_corpus() -> list[tuple[str, dict]]:
    """Named instances spanning the three decidable cases plus GF(2^k)."""
    out = []
    # orthogonal degree 4 (n = 1), built from quaternion pairs with
    # orthogonal involutions: totally decomposable by construction
    orth_pairs = [
        ((-1, -1, [0, 1, 0, 0]), (-1, -3, [0, 0, 1, 0])),
        ((-1, -1, [0, 0, 1, 0]), (-2, -5, [0, 1, 0, 0])),
        ((-1, -7, [0, 1, 1, 0]), (-1, -1, [0, 0, 0, 1])),
        ((2, 3, [0, 1, 0, 0]), (-1, -1, [0, 1, 0, 0])),
        ((-2, -3, [0, 0, 1, 0]), (5, -1, [0, 1, 0, 0])),
        ((-1, 3, [0, 1, 0, 0]), (7, -2, [0, 0, 1, 0])),
        ((-1, -1, [0, 1, 1, 0]), (-3, -5, [0, 1, 0, 0])),
    ]
    for k, (q1, q2) in enumerate(orth_pairs):
        out.append((f"orth4-{k}", _inst(_orth_quat(*q1), _orth_quat(*q2))))
    # unitary degree 4 (n = 2): quaternion pairs (x) centre
    unit_cases = [
        ((-1, -1, [0, 1, 0, 0]), (-1, -3, [0, 0, 1, 0]), -1),
        ((-1, -1, [0, 0, 1, 0]), (-2, -5, [0, 1, 0, 0]), 2),
        ((2, 3, [0, 1, 0, 0]), (-1, -1, [0, 1, 0, 0]), 3),
        ((-1, -7, [0, 1, 0, 0]), (-1, -1, [0, 0, 1, 0]), 5),
        ((-2, -3, [0, 0, 1, 0]), (-1, -1, [0, 1, 0, 0]), -3),
        ((-1, -1, [0, 1, 0, 0]), (3, -2, [0, 0, 1, 0]), 1),  # split centre
        ((-1, -5, [0, 1, 0, 0]), (-2, -3, [0, 0, 1, 0]), 7),
    ]
    for k, (q1, q2, d) in enumerate(unit_cases):
        out.append((f"unit4-{k}",
                    _inst(_orth_quat(*q1), _orth_quat(*q2),
                          {"kind": "etale_center", "d": d})))
    # symplectic degree 8 (n = 3): canonical cubes and mixed types
    symp_cases = [
        [(-1, -1), (-1, -3), (-2, -5)],
        [(-1, -1), (-1, -1), (-1, -1)],
        [(-1, -1), (-2, -3), (-1, -7)],
        [(-2, -5), (-1, -3), (-1, -1)],
        [(-1, -3), (-1, -7), (-2, -1)],
        [(-1, -1), (-3, -5), (-2, -7)],
        [(2, 3), (-1, -1), (-1, -3)],
        [(-1, -1), (5, -2), (-1, -1)],
    ]
    for k, qs in enumerate(symp_cases):
        out.append((f"symp8-{k}", _inst(*[_quat(a, b) for a, b in qs])))
    return out


def char2_corpus() -> list[tuple[str, dict]]:
    out = []
    gf2 = {"kind": "finite", "p": 2, "k": 1}
    gf4 = {"kind": "finite", "p": 2, "k": 2}
    out.append(("gf2-symp8", _inst(_quat(1, 1), _quat(1, 1), _quat(1, 1), field=gf2)))
    # over GF(4) the generator is [0, 1]; elements serialize as coordinate lists
    g = [0, 1]
    g2 = [1, 1]
    out.append(("gf4-symp8-a", _inst(_quat(1, 1), _quat(g, 1), _quat(g, g), field=gf4)))
    out.append(("gf4-symp8-b", _inst(_quat(g, g2), _quat(1, g), _quat(g2, 1), field=gf4)))
    return out


def indecomposable_examples() -> list[tuple[str, dict]]:
    return [
        ("symp8-posdef",
         _inst(_mat(4, [1, 1, 1, -1]), _quat(-1, -1))),
        ("unit4-posdef",
         _inst(_mat(4, [1, 1, 1, -1]), {"kind": "etale_center", "d": -1})),
        ("orth4-posdef", _inst(_mat(4, [1, 1, 1, -1]))),
    ]
