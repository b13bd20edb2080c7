import json

import pytest
from fastapi.testclient import TestClient

from pfisterdisc.service import (
    app,
    handle_analyze,
    handle_basechange,
    handle_crosscheck,
    handle_decide,
    handle_decompose,
    handle_pfister,
    handle_verify,
)

client = TestClient(app)


HAMILTON_CUBE = {
    "field": {"kind": "rational"},
    "algebra": [
        {"kind": "quaternion", "a": -1, "b": -1, "involution": "canonical"},
        {"kind": "quaternion", "a": -1, "b": -3, "involution": "canonical"},
        {"kind": "quaternion", "a": -2, "b": -5, "involution": "canonical"},
    ],
    "options": {"height_bound": 200, "seed": 0},
}

POSDEF = {
    "field": {"kind": "rational"},
    "algebra": [
        {"kind": "matrix", "n": 4, "involution": {"adjoint_diag": [1, 1, 1, -1]}},
        {"kind": "quaternion", "a": -1, "b": -1, "involution": "canonical"},
    ],
}

ORTH4 = {
    "field": {"kind": "rational"},
    "algebra": [
        {"kind": "matrix", "n": 4, "involution": {"adjoint_diag": [1, 1, 1, -1]}},
    ],
}

INNER = {
    "field": {"kind": "rational"},
    "algebra": [{"kind": "double", "base": [{"kind": "matrix", "n": 4}]}],
}


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_analyze_endpoint():
    r = client.post("/analyze", json=HAMILTON_CUBE)
    assert r.status_code == 200
    body = r.json()
    assert body["type"] == "symplectic"
    assert body["capacity"] == 4
    assert body["degree"] == 8
    assert body["dims"]["symd"] == 28

    r2 = client.post("/analyze", json=INNER)
    assert r2.json()["kind"] == "second"
    assert r2.json()["type"] == "unitary"
    assert r2.json()["capacity"] == 4


def test_decide_endpoint_decomposable():
    r = client.post("/decide", json=HAMILTON_CUBE)
    assert r.status_code == 200
    body = r.json()
    assert body["verdict"] == "decomposable"
    assert body["pfister"]["hyperbolic"] is True
    assert body["certificate"] is not None
    # round trip: the emitted certificate passes /verify
    r2 = client.post("/verify", json={"instance": HAMILTON_CUBE,
                                      "certificate": body["certificate"]})
    assert r2.status_code == 200
    assert r2.json()["valid"] is True


def test_decide_endpoint_indecomposable():
    r = client.post("/decide", json=POSDEF)
    body = r.json()
    assert body["verdict"] == "indecomposable"
    assert body["pfister"]["hyperbolic"] is False
    assert body["certificate"] is None


def test_decompose_endpoint_error_on_anisotropic():
    r = client.post("/decompose", json=POSDEF)
    assert r.status_code == 422
    assert "anisotropic" in r.json()["detail"]


def test_crosscheck_endpoint():
    r = client.post("/crosscheck", json=POSDEF)
    body = r.json()
    assert body["shape"] == "symplectic"
    assert body["agree"] is True


def test_basechange_endpoint():
    r = client.post("/basechange", json={"instance": ORTH4, "d": 5})
    body = r.json()
    assert body["match"] is True
    # <1,1> stays anisotropic over Q(sqrt5)
    assert body["hyperbolic_over_extension"] is False

    r2 = client.post("/basechange", json={"instance": ORTH4, "d": -1})
    assert r2.json()["hyperbolic_over_extension"] is True


def test_schema_errors_are_422():
    bad = {"field": {"kind": "rational"}, "algebra": [{"kind": "nonsense"}]}
    r = client.post("/analyze", json=bad)
    assert r.status_code == 422
    bad2 = {"field": {"kind": "rational"},
            "algebra": [{"kind": "quaternion", "a": 0, "b": 1}]}
    r2 = client.post("/analyze", json=bad2)
    assert r2.status_code == 422


def test_reports_are_deterministic():
    from pfisterdisc.jsonio import canonical_dumps

    a = canonical_dumps(handle_decide(HAMILTON_CUBE))
    b = canonical_dumps(handle_decide(HAMILTON_CUBE))
    assert a == b


def test_selftest_endpoint_small():
    r = client.post("/selftest", json={"jobs": 1, "full": False})
    body = r.json()
    assert body["passed"] is True
    names = {x["name"] for x in body["results"]}
    assert any(n.startswith("gf2") for n in names)
    assert any(n.startswith("orth4") for n in names)


def test_capacity_rejection_is_clear():
    quat_only = {
        "field": {"kind": "rational"},
        "algebra": [{"kind": "quaternion", "a": -1, "b": -1,
                     "involution": "canonical"}],
    }
    r = client.post("/decide", json=quat_only)
    assert r.status_code == 422
    assert "capacity" in r.json()["detail"]


def test_raw_structure_constant_instance():
    # M2 given by raw structure constants with the transpose involution
    from pfisterdisc.fields import QQ as _QQ
    from pfisterdisc.algebras import matrix_algebra as _ma

    m2 = _ma(_QQ, 2)
    mult = [[[[k, str(c.co[0])] for k, c in cell] for cell in row] for row in m2.mult]
    tr = [[0] * 4 for _ in range(4)]
    for idx, target in enumerate((0, 2, 1, 3)):  # transpose permutation
        tr[target][idx] = 1
    spec = {
        "field": {"kind": "rational"},
        "algebra": [{
            "kind": "raw", "dim": 4, "mult": mult,
            "unit": [1, 0, 0, 1],
            "involution_matrix": tr,
        }],
    }
    r = client.post("/analyze", json=spec)
    assert r.status_code == 200
    body = r.json()
    assert body["type"] == "orthogonal" and body["degree"] == 2


def test_decide_char2_over_service():
    spec = {
        "field": {"kind": "finite", "p": 2, "k": 1},
        "algebra": [
            {"kind": "quaternion", "a": 1, "b": 1, "involution": "canonical"},
            {"kind": "quaternion", "a": 1, "b": 1, "involution": "canonical"},
            {"kind": "quaternion", "a": 1, "b": 1, "involution": "canonical"},
        ],
    }
    r = client.post("/decide", json=spec)
    assert r.status_code == 200
    body = r.json()
    assert body["verdict"] == "decomposable"
    assert body["pfister"]["hyperbolic"] is True
    if body["certificate"] is not None:
        r2 = client.post("/verify", json={"instance": spec,
                                          "certificate": body["certificate"]})
        assert r2.json()["valid"] is True


def test_selftest_parallel_jobs():
    from pfisterdisc.service import handle_selftest

    rep = handle_selftest(jobs=2, full=False)
    assert rep["passed"] is True
