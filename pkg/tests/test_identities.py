import json

import pytest

from qstirling import identities
from qstirling.errors import InvalidParams, UnknownIdentity
from qstirling.identities import (
    REGISTRY,
    first_difference,
    grid_for,
    registry_ids,
    stirling_d_by_weight,
    verify,
    verify_all,
)
from qstirling.qpoly import ONE, Q, TPoly
from qstirling.stirling import stirling_d

CONTROLS = [i for i, e in REGISTRY.items() if e.control]


def test_thm_main_b_n1():
    rep = verify("thm-main-B", n=1, k=1)
    assert rep.equal and rep.lhs == rep.rhs == "1 + q"
    assert rep.witness is None


def test_basis_b_q_n2():
    rep = verify("basis-B-q", n=2)
    assert rep.equal
    t = TPoly.t()
    s21 = ONE + ONE + Q + Q * Q
    assert 1 + s21 * (t - 1) + (t - 1) * (t - 1 - Q - Q * Q) == t ** 2
    assert str(t ** 2) in (rep.lhs, rep.rhs)


def test_corrupted_control_has_witness():
    rep = verify("thm-main-B-corrupted", n=2)
    assert not rep.equal
    w = rep.witness
    assert set(w) == {"t", "q", "lhs", "rhs"}
    assert w["lhs"] != w["rhs"]


def test_every_control_fails_everywhere():
    assert set(CONTROLS) == {
        "thm-main-B-corrupted", "basis-B-q-corrupted", "pssp-weight-corrupted",
        "carlitz-r-corrupted", "fmaj-deltas-corrupted",
    }
    for rep in verify_all(ids=CONTROLS, max_n=3):
        assert not rep.equal and rep.witness


def test_small_grid_all_equal():
    reports = verify_all(max_n=3, order=5)
    assert reports and all(r.equal for r in reports)


def test_max_n_zero():
    reports = verify_all(max_n=0)
    assert reports and all(r.equal for r in reports)
    assert all(r.params.get("n", 0) == 0 for r in reports)


def test_controls_are_exactly_the_failures():
    reports = verify_all(max_n=2, include_controls=True)
    failed = {r.id for r in reports if not r.equal}
    assert failed == set(CONTROLS) - {i for i in CONTROLS if not grid_for(i, 2)}


def test_max_n_never_raises_a_grid():
    default = grid_for("thm-main-B")
    assert max(p["n"] for p in default) == 7
    assert grid_for("thm-main-B", max_n=20) == default


def test_route_disjointness():
    for entry in REGISTRY.values():
        assert entry.lhs_route and entry.rhs_route
        if entry.relation:
            continue
        assert not set(entry.lhs_route) & set(entry.rhs_route), entry.id


def test_registry_ids():
    plain = registry_ids()
    assert "thm-main-B" in plain and not any(i.endswith("-corrupted") for i in plain)
    assert set(registry_ids(True)) == set(REGISTRY)
    for required in ("a-classical", "a-q", "b-classical", "thm-main-B", "cg-relation", "b-symmetry",
                     "starred-product", "q-binom-theorem", "q-binom-negative", "bfmaj-euler",
                     "bfmaj-rec", "so-closed-form", "pssp-weight", "d-count", "b-from-a-q",
                     "b-from-d-q", "b-from-a", "b-from-d", "btilde", "basis-A", "basis-B", "basis-D",
                     "basis-A-q", "basis-B-q", "basis-D-q", "basis-r-q", "genfun-r", "carlitz-r",
                     "frobenius-r", "thm-main-r", "q-extension", "chu-vandermonde", "frobenius-A",
                     "specialize-r1", "specialize-r2", "index-sums", "des-complement",
                     "fmaj-deltas", "basis-bd-bridge"):
        assert required in REGISTRY, required


def test_verify_errors():
    with pytest.raises(UnknownIdentity):
        verify("no-such-id", n=1)
    with pytest.raises(InvalidParams):
        verify("thm-main-B")
    with pytest.raises(InvalidParams):
        verify("thm-main-B", n=-1)
    with pytest.raises(UnknownIdentity):
        verify_all(ids=["nope"])


def test_report_serialisation():
    rep = verify("genfun-r", r=2, n=3, order=4)
    d = rep.to_dict()
    assert list(d)[:6] == ["id", "params", "equal", "lhs", "rhs", "witness"]
    assert d["params"] == {"r": 2, "n": 3, "order": 4}
    assert json.loads(json.dumps(d)) == d
    assert rep.params_text() == "r=2;n=3;order=4"


def test_first_difference():
    assert first_difference(ONE, ONE) is None
    assert first_difference(ONE + Q, ONE) == {"t": 0, "q": 1, "lhs": 1, "rhs": 0}
    assert first_difference(TPoly([1, Q]), TPoly([1, 1])) == {"t": 1, "q": 0, "lhs": 0, "rhs": 1}
    assert first_difference(3, 4) == {"t": 0, "q": 0, "lhs": 3, "rhs": 4}


def test_weight_route_for_type_d():
    for n in range(7):
        for k in range(n + 1):
            assert stirling_d_by_weight(n, k) == stirling_d(n, k)


def test_theorem_both_forms_agree():
    for n in range(6):
        a = verify("thm-main-B", n=n)
        b = verify("thm-main-B-trans", n=n)
        assert a.equal and b.equal and a.lhs == b.lhs and a.rhs == b.rhs


def test_indexed_params():
    rep = verify("q-extension", r=2, n=3, l=1)
    assert rep.equal and rep.params["l"] == 1


def test_verify_all_is_deterministic():
    a = [r.to_dict() for r in verify_all(max_n=3)]
    b = [r.to_dict() for r in verify_all(max_n=3)]
    assert a == b


def test_verify_all_respects_registry_order():
    ids = ["cg-relation", "a-q"]
    reports = verify_all(ids=ids, max_n=2)
    seen = []
    for r in reports:
        if r.id not in seen:
            seen.append(r.id)
    assert seen == [i for i in REGISTRY if i in ids]


def test_caps_are_honoured():
    from qstirling.errors import CapExceeded
    from qstirling.groups import Caps

    with pytest.raises(CapExceeded):
        verify("thm-main-B", caps=Caps(bn=2), n=3)
    assert identities.VERIFY_CAPS.colored >= 2 ** 8 * 40320
