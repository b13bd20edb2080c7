"""FastAPI service wrapping the core pipelines.

Every command is a stateless JSON-in / JSON-out handler; the HTTP layer and
the CLI are thin clients of the same functions.  Reports are deterministic
for a fixed (instance, seed, flags).
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .fields import FieldError
from .jsonio import elem_to_json, form_to_json, vec_from_json, vec_to_json
from .algebras import AlgebraError
from .involutions import InvolutionError, sym_space_dims
from .etale import BiquadraticL, EtaleError
from .quadforms import FormError, quadratic_ext_isotropy
from .pipeline import PipelineError, discriminant_pfister, main_theorem_decide
from .decomposition import (
    DecompositionCertificate,
    DecompositionError,
    decompose_along_L,
    verify_certificate,
)
from .formulas import ShapeError, crosscheck
from .instances import InstanceError, build_instance, builtin_corpus, char2_corpus, extend_instance

USER_ERRORS = (InstanceError, FieldError, AlgebraError, InvolutionError,
               EtaleError, FormError, PipelineError, DecompositionError,
               ShapeError, ValueError, KeyError)


def _built(spec: dict):
    return build_instance(spec)


def _l_report(L: BiquadraticL) -> dict:
    return {"generators": [vec_to_json(L.u1), vec_to_json(L.u2)]}


def _pfister_report(disc) -> dict:
    pf = disc.pfister
    return {
        "n": disc.n,
        "pfister": form_to_json(pf.form),
        "slots": [elem_to_json(disc.L.algebra.ctx(s)) for s in pf.slots] if pf.slots else None,
        "hyperbolic": disc.hyperbolic,
        "c": elem_to_json(disc.c_value),
        "q_forms": [form_to_json(q) for q in disc.q_forms],
        "w_dims": [len(w.basis) for w in disc.w_spaces],
        "L": _l_report(disc.L),
    }


def _certificate_json(cert: DecompositionCertificate) -> dict:
    return {
        "quaternions": [[vec_to_json(v) for v in basis] for basis in cert.quaternion_bases],
        "L": [vec_to_json(v) for v in cert.l_basis],
    }


def _certificate_from_json(built, d: dict) -> DecompositionCertificate:
    dim = built.algebra.dim
    ctx = built.ctx
    quats = [[vec_from_json(ctx, v, dim) for v in basis] for basis in d["quaternions"]]
    lb = [vec_from_json(ctx, v, dim) for v in d.get("L", [])]
    return DecompositionCertificate(quaternion_bases=quats, l_basis=lb)


def handle_analyze(spec: dict) -> dict:
    built = _built(spec)
    cls = built.involution.classify()
    return {
        "kind": cls.kind,
        "type": cls.type,
        "degree": cls.degree,
        "capacity": cls.capacity,
        "center_dim": cls.center_dim,
        "dims": sym_space_dims(built.involution),
        "symd_contains_one": built.involution.symd_contains_one(),
    }


def handle_pfister(spec: dict) -> dict:
    built = _built(spec)
    disc = discriminant_pfister(built.involution, L=built.L,
                                height_bound=built.height_bound, seed=built.seed)
    return _pfister_report(disc)


def handle_decide(spec: dict) -> dict:
    built = _built(spec)
    dec = main_theorem_decide(built.involution, height_bound=built.height_bound,
                              seed=built.seed)
    out = {
        "verdict": dec.verdict,
        "pfister": _pfister_report(dec.disc),
        "certificate": _certificate_json(dec.certificate) if dec.certificate else None,
        "certificate_error": dec.certificate_error,
    }
    return out


def handle_decompose(spec: dict) -> dict:
    built = _built(spec)
    disc = discriminant_pfister(built.involution, L=built.L,
                                height_bound=built.height_bound, seed=built.seed)
    if disc.hyperbolic is False:
        raise DecompositionError("discriminant Pfister form is anisotropic: "
                                 "no decomposition along L exists")
    cert = decompose_along_L(built.involution, disc,
                             height_bound=built.height_bound, seed=built.seed)
    if cert is None:
        return {"found": False, "certificate": None}
    return {"found": True, "certificate": _certificate_json(cert)}


def handle_verify(spec: dict, certificate: dict) -> dict:
    built = _built(spec)
    cert = _certificate_from_json(built, certificate)
    ok, detail = verify_certificate(built.involution, cert)
    return {"valid": ok, "detail": detail}


def handle_crosscheck(spec: dict) -> dict:
    built = _built(spec)
    rep = crosscheck(built.involution, height_bound=built.height_bound, seed=built.seed)
    out = {"shape": rep["shape"], "agree": rep["agree"],
           "w_variant_agree": rep["w_variant_agree"]}
    if "formula_form" in rep:
        out["formula_form"] = form_to_json(rep["formula_form"])
        out["pipeline_form"] = form_to_json(rep["pipeline_form"])
    return out


def handle_basechange(spec: dict, d: int) -> dict:
    built = _built(spec)
    if built.ctx.kind != "rational":
        raise InstanceError("base change is implemented from the rationals")
    disc = discriminant_pfister(built.involution, L=built.L,
                                height_bound=built.height_bound, seed=built.seed)
    new_spec, ext = extend_instance(spec, d)
    ext_built = build_instance(new_spec)
    if ext.trivial:
        return {"d": d, "trivial": True, "match": True,
                "hyperbolic_over_extension": disc.hyperbolic}
    # transport L through the coordinate embedding and re-run the pipeline
    L = disc.L
    g1 = tuple(ext.embed(c) for c in L.u1)
    g2 = tuple(ext.embed(c) for c in L.u2)
    ext_L = BiquadraticL(ext_built.algebra, g1, g2)
    ext_disc = discriminant_pfister(ext_built.involution, L=ext_L,
                                    height_bound=built.height_bound,
                                    seed=built.seed, check_similar=False)
    match = True
    for q0, q1 in zip(disc.q_forms, ext_disc.q_forms):
        emb = [[ext.embed(c) for c in row] for row in q0.coeffs]
        if [list(r) for r in q1.coeffs] != emb:
            match = False
    if disc.hyperbolic:
        hyp = True
    else:
        hyp = quadratic_ext_isotropy(disc.q_forms[0], d)
    return {
        "d": d,
        "trivial": False,
        "match": match,
        "gram_extended": form_to_json(ext_disc.q_forms[0]),
        "hyperbolic_over_extension": hyp,
    }


def _selftest_one(item) -> dict:
    name, spec = item
    built = build_instance(spec)
    cls = built.involution.classify()
    dec = main_theorem_decide(built.involution, height_bound=built.height_bound,
                              seed=built.seed,
                              want_certificate=built.ctx.kind == "rational")
    ok = True
    notes = []
    if built.ctx.kind == "rational" and dec.verdict == "decomposable":
        if dec.certificate is None:
            notes.append(f"certificate absent: {dec.certificate_error}")
        else:
            valid, detail = verify_certificate(built.involution, dec.certificate)
            if not valid:
                ok = False
                notes.append(f"certificate invalid: {detail}")
    n = dec.disc.n
    if [len(w.basis) for w in dec.disc.w_spaces] != [1 << n] * 3:
        ok = False
        notes.append("W dimension mismatch")
    return {"name": name, "type": cls.type, "verdict": dec.verdict,
            "hyperbolic": dec.disc.hyperbolic, "ok": ok, "notes": notes}


def handle_selftest(jobs: int = 1, full: bool = False) -> dict:
    corpus = builtin_corpus() + char2_corpus()
    if not full:
        # one representative per case keeps the self-test quick
        names = {"orth4-0", "orth4-1", "unit4-0", "unit4-2", "symp8-0",
                 "symp8-1", "gf2-symp8", "gf4-symp8-a"}
        corpus = [it for it in corpus if it[0] in names]
    if jobs > 1:
        import concurrent.futures as cf

        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_selftest_one, corpus))
    else:
        results = [_selftest_one(it) for it in corpus]
    return {"results": results, "passed": all(r["ok"] for r in results)}


# -- FastAPI application ---------------------------------------------------------------


class InstancePayload(BaseModel):
    field: dict
    algebra: list
    L: Optional[dict] = None
    options: dict = Field(default_factory=dict)

    def to_spec(self) -> dict:
        spec = {"field": self.field, "algebra": self.algebra}
        if self.L:
            spec["L"] = self.L
        if self.options:
            spec["options"] = self.options
        return spec


class VerifyPayload(BaseModel):
    instance: InstancePayload
    certificate: dict


class BasechangePayload(BaseModel):
    instance: InstancePayload
    d: int


class SelftestPayload(BaseModel):
    jobs: int = 1
    full: bool = False


app = FastAPI(
    title="pfisterdisc",
    description="Discriminant Pfister forms and quaternion decompositions "
                "of algebras with involution of capacity 4",
)


def _wrap(fn, *args):
    try:
        return fn(*args)
    except USER_ERRORS as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/analyze")
def analyze(payload: InstancePayload):
    return _wrap(handle_analyze, payload.to_spec())


@app.post("/pfister")
def pfister(payload: InstancePayload):
    return _wrap(handle_pfister, payload.to_spec())


@app.post("/decide")
def decide(payload: InstancePayload):
    return _wrap(handle_decide, payload.to_spec())


@app.post("/decompose")
def decompose(payload: InstancePayload):
    return _wrap(handle_decompose, payload.to_spec())


@app.post("/verify")
def verify(payload: VerifyPayload):
    return _wrap(handle_verify, payload.instance.to_spec(), payload.certificate)


@app.post("/crosscheck")
def crosscheck_route(payload: InstancePayload):
    return _wrap(handle_crosscheck, payload.to_spec())


@app.post("/basechange")
def basechange(payload: BasechangePayload):
    return _wrap(handle_basechange, payload.instance.to_spec(), payload.d)


@app.post("/selftest")
def selftest(payload: SelftestPayload):
    return _wrap(handle_selftest, payload.jobs, payload.full)
