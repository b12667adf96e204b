from __future__ import annotations

import json

import numpy as np
import pytest
from pydantic import ValidationError

import catalog
from catalog import (
    LORENTZ_NOTE,
    O8C_PAIRS,
    O8C_TORUS_POINTS,
    SECTIONS,
    CatalogError,
    TripleEntry,
    check_spin_triple,
    check_triple,
    decide,
    decide_pair,
    grassmannian_status,
    instantiate,
    iter_instances,
    load_catalog,
    lorentz_space_form_status,
    o8c_chain,
    space_form_status,
    tangential_space_form_status,
    tangential_table_rule,
    torus_coordinates,
    torus_matrix,
    verify_o8c,
    verify_tables,
)
from cck_config import set_config
from cck_schema import (
    CRITERION_CALABI_MARKUS,
    CRITERION_LATTICE,
    CRITERION_MAXIMALITY,
    CRITERION_NONE,
    CRITERION_SPIN_TRIPLE,
    CRITERION_TRIPLE,
    CRITERION_UNIFORM_LATTICE,
    EXISTS,
    FAIL,
    INCOMPLETE,
    NOT_EXISTS,
    OPEN,
    PASS,
    TABLE_COMPACT_FORMS,
    TABLE_MAXIMALITY,
)
from clifford_core import CliffordDomainError, MultiVector


def _entry(**overrides):
    entry = {
        "id": "t-1", "table": "para-hermitian", "row": 1,
        "name": "SO(2,1)/SO(1,1)", "G": "SO(2,1)", "H": "SO(1,1)", "expected": "not_exists",
    }
    entry.update(overrides)
    return entry


def _write_catalog(path, entries):
    path.write_text(json.dumps({"version": 1, "entries": entries}), encoding="utf-8")
    return str(path)


def test_load_catalog_and_lookup():
    catalog = load_catalog()
    assert "SU(2,2n)/Sp(1,n)" in catalog.names()
    assert catalog.find("O(2,2n)/O(1,2n)").id == "cf-4"
    assert catalog.find("SO*(8)/U(1,3)").id == "cf-11"
    assert catalog.find("E6(C)/F4(C)").id == "bn-6"
    assert [e.spin_q for e in catalog.table("spin-triples")] == list(range(1, 9))


def test_unknown_space_raises_catalog_error():
    catalog = load_catalog()
    with pytest.raises(CatalogError):
        catalog.find("Foo/Bar")
    with pytest.raises(KeyError):
        catalog.by_id("cf-99")


def test_catalog_path_from_environment(tmp_path, monkeypatch):
    path = _write_catalog(tmp_path / "mini.json", [_entry()])
    monkeypatch.setenv("CCK_CATALOG", path)
    set_config(None)
    assert load_catalog().names() == ["SO(2,1)/SO(1,1)"]


def test_catalog_validation(tmp_path):
    duplicate_ids = _write_catalog(tmp_path / "dup.json", [_entry(), _entry(row=2, name="X/Y")])
    with pytest.raises(ValidationError):
        load_catalog(duplicate_ids)
    clashing_names = _write_catalog(tmp_path / "clash.json", [_entry(), _entry(id="t-2", row=2)])
    with pytest.raises(ValueError):
        load_catalog(clashing_names)
    bad_provenance = _write_catalog(tmp_path / "prov.json", [_entry(provenance={"G": "guessed"})])
    with pytest.raises(ValidationError):
        load_catalog(bad_provenance)


def test_instantiate_family():
    entry = load_catalog().find("SU(2,2n)/Sp(1,n)")
    inst = instantiate(entry, {"n": 2})
    assert inst.name == "SU(2,4)/Sp(1,2)"
    assert inst.label == "cf-1[n=2]"
    assert [i.param_dict for i in iter_instances(entry)] == [{"n": 1}, {"n": 2}, {"n": 3}]


def test_instantiate_rejects_bad_parameters():
    entry = load_catalog().find("SU(2,2n)/Sp(1,n)")
    with pytest.raises(ValueError):
        instantiate(entry, {"n": 0})
    with pytest.raises(ValueError):
        instantiate(entry, {"m": 2})


def test_triple_needs_L():
    inst = instantiate(load_catalog().find("Sp(n,R)/GL(n,R)"), {"n": 2})
    with pytest.raises(ValueError):
        TripleEntry.from_instance(inst)


def test_compact_form_triples():
    catalog = load_catalog()
    report = check_triple(TripleEntry.from_instance(instantiate(catalog.find("SU(2,2n)/Sp(1,n)"), {"n": 1})))
    assert report.status == PASS
    assert (report.d_G, report.d_H, report.d_L) == (8, 4, 4)
    assert report.cones == "disjoint"
    for entry in catalog.table(TABLE_COMPACT_FORMS):
        for inst in iter_instances(entry):
            report = check_triple(TripleEntry.from_instance(inst))
            assert report.status in (PASS, INCOMPLETE), (inst.label, report.as_dict())
            assert report.d_sum_ok


@pytest.mark.parametrize("q", range(1, 9))
def test_spin_triples(q):
    report = check_spin_triple(q)
    assert report.status == PASS
    assert report.detail["square_is_identity"]
    assert report.detail["det"] != 0


def test_spin_triple_outside_table():
    with pytest.raises(CliffordDomainError):
        check_spin_triple(9)
    with pytest.raises(CliffordDomainError):
        check_spin_triple(0)


def test_fault_injection_breaks_compact_forms():
    report = verify_tables(sections=["compact-forms"], fault_injection={"Sp(1,n)": "4n-1"})
    failed = {row.item for row in report.failed}
    assert not report.ok
    assert {"cf-1[n=1]", "cf-2[n=1]", "cf-5[n=1]"} <= failed
    assert not any(item.startswith("cf-3") for item in failed)


def test_fault_injection_breaks_spin_triple():
    report = check_spin_triple(4, fault_injection={"Sp(1)": "1"})
    assert report.status == FAIL


def test_o8c_verification():
    report = verify_o8c()
    assert report.ok, report.checks
    assert report.d == (28, 7, 21)
    assert report.as_dict()["ok"]
    assert all(abs(s) == 1 for s in report.signs)
    for coords, point, sign in zip(report.torus_images, O8C_TORUS_POINTS, report.signs):
        assert coords == tuple(sign * c for c in point)
    a, b, c, d = report.normal
    assert a != 0 and (b, c, d) == (a, -a, -a)


def test_o8c_chain_images_are_the_torus_points():
    reduction, iota = o8c_chain()
    assert iota.check_relations()
    source = reduction.source
    for (i, j), point in zip(O8C_PAIRS, O8C_TORUS_POINTS):
        element = MultiVector.generator(source, "-", i) * MultiVector.generator(source, "-", j)
        image = np.array(iota.apply(reduction.apply(element)).tolist(), dtype=object)
        expected = torus_matrix(point)
        assert np.array_equal(image, expected) or np.array_equal(image, -expected), (i, j)


def test_torus_coordinates():
    assert torus_coordinates(torus_matrix([2, 0, -1, 1])) == (2, 0, -1, 1)
    assert torus_coordinates(np.eye(8, dtype=np.int64)) is None


def test_o8c_rejects_a_non_cartan_triple(monkeypatch):
    monkeypatch.setattr(catalog, "O8C_PAIRS", ((1, 2), (3, 4), (5, 6)))
    report = verify_o8c()
    assert not report.ok
    assert not report.checks["images_in_torus"]
    assert report.normal == ()


def test_positive_space_forms():
    record = space_form_status(7, 8, "+")
    assert record.verdict == EXISTS
    assert record.summary().startswith("X(7,8): Exists")
    assert space_form_status(1, 4, "+").verdict == EXISTS
    assert space_form_status(3, 8, "+").verdict == EXISTS
    assert space_form_status(1, 3, "+").verdict == NOT_EXISTS
    assert space_form_status(2, 2, "+").verdict == NOT_EXISTS
    assert space_form_status(2, 4, "+").verdict == OPEN
    assert space_form_status(0, 5, "+").criterion == CRITERION_UNIFORM_LATTICE


def test_flat_and_negative_space_forms():
    flat = space_form_status(3, 2, "0")
    assert flat.verdict == EXISTS
    assert flat.criterion == CRITERION_LATTICE
    negative = space_form_status(8, 7, "neg")
    assert negative.verdict == EXISTS
    assert negative.space == "X(8,7)-"
    assert negative.kappa == "-"
    assert "X(7,8)" in negative.note
    for p in range(5):
        for q in range(5):
            assert space_form_status(p, q, "+").verdict == space_form_status(q, p, "-").verdict


def test_space_form_bad_input():
    with pytest.raises(ValueError):
        space_form_status(1, 2, "x")
    with pytest.raises(ValueError):
        space_form_status(-1, 2, "+")


def test_lorentz_anti_de_sitter_parity():
    for n in range(2, 12):
        record = lorentz_space_form_status(n, "-")
        assert (record.verdict == EXISTS) == (n % 2 == 1)
        assert LORENTZ_NOTE in record.note
    with pytest.raises(ValueError):
        lorentz_space_form_status(1, "-")


def test_tangential_forms_follow_table():
    for p in range(8):
        for q in range(25):
            record = tangential_space_form_status(p, q)
            assert (record.verdict == EXISTS) == tangential_table_rule(p, q), (p, q)


def test_tangential_witness():
    record = tangential_space_form_status(7, 8, with_witness=True)
    assert record.verdict == EXISTS
    assert record.evidence["witness_verified"]
    assert record.evidence["witness"]["rho"] == 8
    assert len(record.evidence["witness"]["matrices"]) == 8
    assert tangential_space_form_status(2, 6).verdict == NOT_EXISTS


def test_tangential_exists_carries_construction():
    record = tangential_space_form_status(3, 24)
    assert record.verdict == EXISTS
    assert record.evidence["rho"] == 8
    assert "witness" not in record.evidence
    assert record.evidence["witness_verified"]
    construction = record.evidence["construction"]
    assert (construction["r"], construction["s"]) == (0, 6)
    assert (construction["model_size"], construction["multiplicity"]) == (8, 3)
    assert "construction" not in tangential_space_form_status(0, 0).evidence


def test_grassmannian_status():
    assert grassmannian_status(2, 1, 0, 0).verdict == EXISTS
    assert grassmannian_status(0, 1, 1, 1).verdict == NOT_EXISTS
    with pytest.raises(ValueError):
        grassmannian_status(-1, 0, 0, 1)


def test_decide_named_spaces():
    triple = decide("SU(2,2n)/Sp(1,n)", {"n": 1})
    assert triple.verdict == EXISTS
    assert triple.criterion == CRITERION_TRIPLE
    spin = decide("Sp(1,1)/Sp(1)")
    assert spin.verdict == EXISTS
    assert spin.criterion == CRITERION_SPIN_TRIPLE
    para = decide("Sp(n,R)/GL(n,R)", {"n": 2})
    assert para.verdict == NOT_EXISTS
    assert para.criterion == CRITERION_CALABI_MARKUS


def test_decide_agrees_with_maximality_rows():
    cat = load_catalog()
    rows = {row.item: row for row in verify_tables(sections=["maximality"], catalog=cat).rows}
    for entry in cat.table(TABLE_MAXIMALITY):
        for inst in iter_instances(entry):
            row = rows[inst.label]
            record = decide(entry.name, inst.param_dict, catalog=cat)
            if row.status == PASS:
                assert record.verdict == NOT_EXISTS, inst.label
            else:
                assert record.criterion != CRITERION_MAXIMALITY, inst.label
            if row.status == INCOMPLETE:
                assert record.evidence["cone_check"] == "unavailable", inst.label
                assert record.evidence["maximality"].startswith(f"cited:{entry.id}:"), inst.label


def test_decide_without_cone_data_stays_open():
    record = decide("SU(2n,2n)/SO*(4n)", {"n": 1})
    assert record.verdict == OPEN
    assert record.criterion == CRITERION_NONE
    assert record.evidence["d_L"] > record.evidence["d_H"]
    assert "not verified" in record.note


def test_decide_outside_catalog():
    assert decide("SO(3,1)/SO(3)").criterion == CRITERION_UNIFORM_LATTICE
    assert decide_pair("SO(2,1)", "SO(1,1)").verdict == NOT_EXISTS
    with pytest.raises(CatalogError):
        decide("Foo")
    with pytest.raises(CatalogError):
        decide("Foo(3)/Bar(2)")


def test_verify_tables_selected_sections():
    report = verify_tables(seed=1, sections=["space-forms", "vector-fields", "o8c"])
    assert report.ok, [row.as_dict() for row in report.failed]
    assert report.seed == 1
    assert set(report.section_counts()) == {"space-forms", "vector-fields", "o8c"}
    assert set(report.counts()) == {PASS, FAIL, INCOMPLETE}
    with pytest.raises(ValueError):
        verify_tables(sections=["nope"])


@pytest.mark.slow
def test_verify_tables_full_run():
    report = verify_tables(seed=0, workers=4)
    assert report.ok, [row.as_dict() for row in report.failed]
    assert set(report.section_counts()) == set(SECTIONS)
