from __future__ import annotations

import copy
import json

import pytest

from crossnum.certificates import load_and_verify, make_certificate, verify_certificate
from crossnum.groups import parse_group
from crossnum.search import SearchLimits


@pytest.mark.parametrize("text,inv,value", [
    ("2,2", "K", (3, 2)), ("6", "k", (7, 6)), ("2,2", "D", (3, 1)),
    ("3,3", "eta", (7, 1)), ("2,2", "s", (5, 1)), ("1", "K", (1, 1)),
])
def test_certificates_round_trip(text, inv, value):
    cert = make_certificate(parse_group(text), inv)
    assert (cert["value"]["num"], cert["value"]["den"]) == value
    assert cert["claims"]["maximality"] == "search-asserted"
    result = verify_certificate(json.loads(json.dumps(cert)))
    assert result.status == "verified" and result.exit_code == 0


def test_witness_for_big_cross_number_of_klein_group():
    cert = make_certificate(parse_group("2,2"), "K")
    coords = sorted(tuple(t["coords"]) for t in cert["witnesses"][0]["terms"])
    assert coords == [(0, 1), (1, 0), (1, 1)]


def test_tampered_value_is_a_violation():
    cert = make_certificate(parse_group("2,2"), "K")
    bad = copy.deepcopy(cert)
    bad["value"] = {"num": 2, "den": 1}
    r = verify_certificate(bad)
    assert r.status == "violation" and r.exit_code == 1


def test_tampered_witness_is_a_violation():
    cert = make_certificate(parse_group("5"), "k")
    bad = copy.deepcopy(cert)
    bad["witnesses"][0]["terms"][0]["mult"] = 5
    assert verify_certificate(bad).exit_code == 1
    eta_cert = make_certificate(parse_group("2,2"), "eta")
    bad = copy.deepcopy(eta_cert)
    bad["witnesses"][0]["terms"] = [{"coords": [1, 0], "mult": 3}]
    assert verify_certificate(bad).exit_code == 1


@pytest.mark.parametrize("mutate", [
    lambda c: c.pop("value"),
    lambda c: c.pop("witnesses"),
    lambda c: c.update(schema_version=99),
    lambda c: c.update(invariant="zeta"),
    lambda c: c.update(group="C0"),
    lambda c: c.update(witnesses=[]),
    lambda c: c.update(value={"num": 1}),
])
def test_malformed_certificates(mutate):
    cert = make_certificate(parse_group("2,2"), "K")
    mutate(cert)
    r = verify_certificate(cert)
    assert r.status == "malformed" and r.exit_code == 2


def test_partial_certificate_still_verifies_witnesses(tmp_path):
    cert = make_certificate(parse_group("2,2,2,2,3"), "k", SearchLimits(max_nodes=200))
    assert cert["partial"]
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cert))
    r = load_and_verify(path)
    assert r.status == "verified" and "lower bound" in r.messages[0]


def test_unreadable_file_is_malformed(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    assert load_and_verify(path).exit_code == 2
    assert load_and_verify(tmp_path / "missing.json").exit_code == 2
