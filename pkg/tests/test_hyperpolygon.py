import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from kirwan.abelianize import class_b, class_e, class_eprime
from kirwan.errors import NonGenericError, VerificationError
from kirwan.hyperpolygon import (
    EdgeLengths,
    HyperpolygonInstance,
    MembershipCertificate,
    annihilator_ideal,
    basis_dimension_check,
    betti_numbers,
    bridge_check,
    certify_membership,
    d_presentation_ideal,
    full_report,
    ideal_I,
    ideal_J,
    konno_ring,
    low_degree_rigidity,
    prop_hp,
    second_iso_presentation,
    su2_datum,
)
from kirwan.rings import parse_polynomial


# ---------------------------------------------------------------------------
# lengths and the short-subset table


def test_lengths_validation():
    with pytest.raises(ValueError):
        EdgeLengths([1, 1])
    with pytest.raises(ValueError):
        EdgeLengths([1, 1, 0])
    with pytest.raises(ValueError):
        EdgeLengths([1, 1, -2])


def test_non_generic_witness():
    with pytest.raises(NonGenericError) as exc:
        EdgeLengths([1, 1, 2])
    assert exc.value.witness == frozenset({3})
    with pytest.raises(NonGenericError):
        EdgeLengths([Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)])


def test_short_counts(inst3, inst4, inst5):
    for inst in (inst3, inst4, inst5):
        assert len(inst.table.shorts) == 2 ** (inst.n - 1)
        full = frozenset(range(1, inst.n + 1))
        for S in inst.table.shorts:
            assert not inst.table.is_short(full - S)


def test_distinguished_indices(inst4):
    t = inst4.table
    assert t.m_S({2, 3}) == 2
    assert t.n_S({2, 3}) == 1
    assert t.n_S({1}) == 2
    with pytest.raises(ValueError):
        t.m_S(())
    with pytest.raises(ValueError):
        t.n_S({3, 4})  # long for (1,1,1,2)


def test_unbalanced_shorts(inst5):
    # (1,2,4,8,16): S is short iff it misses edge 5
    for S in inst5.table.shorts:
        assert 5 not in S


# ---------------------------------------------------------------------------
# the C and D classes


def test_c_empty_n3(inst3):
    want = parse_polynomial(
        inst3.table_Q,
        "1/4*c1*c2*c3 + 1/4*c1*a2 + 1/4*c2*a2 + 1/4*c3*a2",
    )
    assert inst3.C(()) == want


def test_d_classes_n4(inst4):
    assert inst4.D([4]) == parse_polynomial(
        inst4.table_Q, "c1^2 + c1*c3 + c2*c1 + c2*c3"
    )
    assert inst4.D([1, 2]) == parse_polynomial(
        inst4.table_Q, "c2*c3 + c2*c4 - x*c3 - x*c4"
    )


def test_d_degree(inst4):
    for S in inst4.table.nonempty_shorts():
        D = inst4.D(S)
        assert D.is_homogeneous() and D.degree() == 2 * (inst4.n - 2)


def test_euler_classes(inst3):
    assert str(inst3.euler_e) == "-a2^2 + a2*x^2"
    assert str(inst3.euler_eprime) == "-a^3 + a*x^2"


# ---------------------------------------------------------------------------
# the equivariant ring


def test_prop_hp_colon_equals_presentation(inst3, inst4):
    for inst in (inst3, inst4):
        ring = prop_hp(inst)
        assert annihilator_ideal(inst).equals(d_presentation_ideal(inst))
        assert ring.graded_dimension(0) == 1


def test_colon_strictly_contains_J(inst4):
    K = annihilator_ideal(inst4)
    for g in ideal_J(inst4).generators:
        assert K.contains(g)
    extra = [g for g in K.groebner_basis() if not ideal_J(inst4).contains(g)]
    assert extra, "the colon must add something at degree 2(n-2)"


def test_betti_numbers(inst3, inst4, inst5):
    assert betti_numbers(inst3) == [1]
    assert betti_numbers(inst4) == [1, 4]
    assert betti_numbers(inst5) == [1, 5, 11]


def test_konno_agrees(inst3, inst4, inst5):
    for inst in (inst3, inst4, inst5):
        R = konno_ring(inst.n)
        dims = [R.graded_dimension(d) for d in range(0, R.top_degree() + 1, 2)]
        assert dims == betti_numbers(inst)


def test_konno_rejects_small_n():
    with pytest.raises(ValueError):
        konno_ring(2)


def test_basis_check_n4(inst4):
    assert basis_dimension_check(inst4) == {
        "degree": 4,
        "dimension": 7,
        "expected": 7,
        "independent": True,
    }


def test_localized_ranks(inst3, inst4, inst5):
    assert prop_hp(inst3).localized_rank("x") == 1
    assert prop_hp(inst4).localized_rank("x") == 5
    assert prop_hp(inst5).localized_rank("x") == 17


def test_low_degree_rigidity(inst4, inst5):
    assert low_degree_rigidity(inst4) is True
    assert low_degree_rigidity(inst5) is True


def test_bridge(inst3, inst4):
    assert bridge_check(inst3) is True
    assert bridge_check(inst4) is True


# ---------------------------------------------------------------------------
# membership certificates


def test_certificate_n3_frozen(inst3):
    cert = certify_membership(inst3, {3})
    assert cert.method == "recursion"
    payload = cert.to_dict()
    assert payload["subset"] == [3]
    assert payload["terms"] == [
        [[], "-2*c3^2 + 2*c3*x + 4*x^2"],
        [[3], "-2*c3^2 - 2*c3*x"],
    ]
    assert cert.verify(inst3)


def test_certificates_all_shorts(inst4):
    for S in inst4.table.nonempty_shorts():
        cert = certify_membership(inst4, S)
        assert cert.verify(inst4)
        assert cert.method in ("recursion", "trace")
        for T, _ in cert.combination:
            assert inst4.table.is_short(T) and T <= frozenset(S)


def test_certificate_roundtrip(inst4):
    cert = certify_membership(inst4, {1, 2})
    again = MembershipCertificate.from_dict(inst4, cert.to_dict())
    assert again.verify(inst4)
    assert again.combination == cert.combination


def test_certificate_tamper_rejected(inst4):
    payload = certify_membership(inst4, {1, 2}).to_dict()
    subset, text = payload["terms"][0]
    payload["terms"][0] = [subset, text + " + 1"]
    with pytest.raises(VerificationError):
        MembershipCertificate.from_dict(inst4, payload)


def test_certificate_rejects_long_subset(inst4):
    with pytest.raises(ValueError):
        certify_membership(inst4, {3, 4})


# ---------------------------------------------------------------------------
# the nonabelian bridge


def test_su2_datum_classes():
    datum = su2_datum()
    e = class_e(datum)
    ep = class_eprime(datum)
    assert class_b(datum) * ep == e
    assert e.exact_divide(ep) == class_b(datum)


def test_second_iso_small(inst3):
    from kirwan.abelianize import verify_second_iso

    assert verify_second_iso(second_iso_presentation(inst3)) is True


def test_eulers_match_datum(inst3):
    datum = su2_datum()
    e = class_e(datum)
    sub = e.substitute(
        {"a": parse_polynomial(inst3.table_P, "a")}, table=inst3.table_P
    )
    # e lives in Q[a,x]; moved to P and reduced by a^2 -> a2 on the Q side
    assert sub == -(inst3.euler_eprime * parse_polynomial(inst3.table_P, "a"))


# ---------------------------------------------------------------------------
# the full report


@pytest.fixture(scope="module")
def report4():
    return full_report(EdgeLengths([1, 1, 1, 2]))


def test_report_schema(report4):
    schema = json.loads(
        resources.files("kirwan").joinpath("data/report.schema.json").read_text()
    )
    jsonschema.validate(report4, schema)


def test_report_contents(report4):
    assert report4["n"] == 4
    assert report4["xi"] == ["1", "1", "1", "2"]
    assert report4["betti"] == [1, 4]
    assert report4["konno"] == {"betti": [1, 4], "agrees": True}
    assert report4["prop_hp"]["colon_equals_D_presentation"] is True
    assert report4["localized"] == {"rank": 5, "konno_total": 5, "agrees": True}
    assert report4["low_degree_rigidity"] is True
    assert report4["bridge"] is True
    assert report4["second_iso"] is True
    assert len(report4["certificates"]) == 7
    assert all(c["verified"] for c in report4["certificates"])
    assert report4["formality"] == {"ring_J": True, "ring_colon": True}
    assert set(report4["timings"])


def test_report_stage_attribution():
    # a budget too small to finish the colon computation names its stage
    from kirwan.errors import BudgetExceeded
    from kirwan.ideals import Budgets

    with pytest.raises(BudgetExceeded) as exc:
        full_report(EdgeLengths([1, 1, 1, 2]), budgets=Budgets(max_basis=3))
    assert hasattr(exc.value, "stage")


def test_instance_accepts_scaled_lengths(inst3):
    scaled = HyperpolygonInstance(EdgeLengths([2, 2, 2]))
    assert betti_numbers(scaled) == betti_numbers(inst3)
    tripled = HyperpolygonInstance(
        EdgeLengths([Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)])
    )
    assert [list(S) for S in tripled.table.shorts] == [
        list(S) for S in inst3.table.shorts
    ]
