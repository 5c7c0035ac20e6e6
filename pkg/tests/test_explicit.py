import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from qexplicit.explicit import (UncertifiedZerosError, UnsupportedFieldError, enumeration_bound, lhs_sum,
                                pole_terms, ramified_discriminant_sum, rhs_sum, verify, zero_lists_for)
from qexplicit.localterms import W_closed
from qexplicit.quadfield import (COMPLEX, COMPLEX_PLACE, INERT, discriminant, field_from_discriminant,
                                 primes_up_to, splitting_type)
from qexplicit.testfn import indicator, make_log_bump, zero_function
from qexplicit.zeros import ZeroList

F4 = field_from_discriminant(-4)


def brute_force_lhs(fld, f, max_norm):
    """Sum of W over every place with norm <= max_norm, plus ramified and complex places."""
    total = [W_closed(COMPLEX_PLACE, f).value]
    for p in primes_up_to(max_norm):
        v = splitting_type(fld, p)
        if v.norm <= max_norm or v.kind == "ramified":
            total += [W_closed(v, f).value] * v.places_above
    return math.fsum(total)


def test_lhs_zero_function():
    assert lhs_sum(F4, zero_function()) == (0.0, [])


def test_lhs_narrow_bump_only_inert_three():
    f = make_log_bump(9, 0.1)
    total, breakdown = lhs_sum(F4, f)
    finite = [(v, val) for v, val in breakdown if v.kind != COMPLEX and val != 0.0]
    assert len(finite) == 1
    v, val = finite[0]
    assert (v.kind, v.p) == (INERT, 3)
    assert val == pytest.approx(-math.log(9) * f(9.0), abs=1e-15)


def test_lhs_spec_example_breakdown():
    f = make_log_bump(2, 0.7)
    total, breakdown = lhs_sum(F4, f)
    labels = [v.label for v, _ in breakdown]
    assert "ramified p=2 N=2" in labels and "complex" in labels
    assert not any(v.kind == INERT for v, _ in breakdown)
    split5 = [val for v, val in breakdown if v.p == 5]
    assert split5 == [0.0, 0.0]
    ram = dict((v.label, val) for v, val in breakdown)["ramified p=2 N=2"]
    assert ram == pytest.approx(math.log(4) * f(1.0) - math.log(2) * (f(2.0) + f(4.0) + 0.5 * f(0.5)), abs=1e-15)
    assert total == pytest.approx(brute_force_lhs(F4, f, 16), abs=1e-14)
    assert total == pytest.approx(math.fsum(val for _, val in breakdown), abs=1e-15)


@given(st.sampled_from([-3, -4, -7, -8, -11]), st.floats(0.3, 6.0), st.floats(0.1, 1.2))
@settings(max_examples=25, deadline=None)
def test_lhs_matches_brute_force_scan(D, center, radius):
    fld = field_from_discriminant(D)
    f = make_log_bump(center, radius)
    bound = max(120, int(math.ceil(max(f.support[1], 1 / f.support[0]))) + 1)
    assert lhs_sum(fld, f)[0] == pytest.approx(brute_force_lhs(fld, f, bound), abs=1e-12)


def test_enumeration_bound_covers_small_support():
    # supp f ~ [0.44, 0.57] holds 1/2 = 2^-1 (D = -7 splits 2); ceil(sup f) alone would give 1
    f = make_log_bump(0.5, 0.13)
    assert enumeration_bound(f) >= 2
    fld = field_from_discriminant(-7)
    total, breakdown = lhs_sum(fld, f)
    twos = [val for v, val in breakdown if v.p == 2]
    assert len(twos) == 2 and twos[0] == pytest.approx(-math.log(2) * 0.5 * f(0.5))


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11, -19, -43, -67, -163])
def test_discriminant_consistency(D):
    f = make_log_bump(1.2, 0.5)
    assert ramified_discriminant_sum(field_from_discriminant(D), f) == pytest.approx(
        math.log(abs(D)) * f(1.0), abs=1e-12)


def test_pole_terms_indicator():
    m0, m1 = pole_terms(indicator(1.0, math.e))
    assert m0 == pytest.approx(1.0, abs=1e-12)
    assert m1 == pytest.approx(math.e - 1, abs=1e-12)


def test_refuses_class_number_two():
    f = make_log_bump(2, 0.7)
    with pytest.raises(UnsupportedFieldError):
        lhs_sum(discriminant(-5), f)
    with pytest.raises(UnsupportedFieldError):
        verify(discriminant(-5), f, zero_lists=[])


def test_rhs_refuses_uncertified(zero_cache):
    lists = zero_lists_for(F4, 120, zero_cache)
    bad = [ZeroList(zl.id, zl.ordinates, zl.height, False) for zl in lists]
    f = make_log_bump(2, 0.7)
    with pytest.raises(UncertifiedZerosError):
        rhs_sum(F4, f, 120, bad)
    with pytest.raises(UncertifiedZerosError):
        rhs_sum(F4, f, 200, lists)
    with pytest.raises(UncertifiedZerosError):
        rhs_sum(F4, f, 120, lists[:1])


def test_rhs_zero_function(zero_cache):
    assert rhs_sum(F4, zero_function(), 120, zero_lists_for(F4, 120, zero_cache))[0] == 0.0


def test_verify_zero_function(zero_cache):
    rep = verify(F4, zero_function(), 120, 1e-4, cache=zero_cache)
    assert rep.passed and rep.lhs_total == 0 and rep.rhs_zero_sum == 0 and rep.discrepancy == 0
    assert rep.tail_estimate == 0 and rep.rhs_pole_terms == (0.0, 0.0)


def test_verify_spec_example(zero_cache):
    rep = verify(field_from_discriminant(-3), make_log_bump(2, 0.6), 120, 1e-4, cache=zero_cache)
    assert rep.passed
    assert abs(rep.discrepancy) <= 1e-4 + rep.tail_estimate


def test_verify_low_height_consistent(zero_cache):
    f = make_log_bump(2, 0.7)
    low = verify(F4, f, 15, 1e-4, cache=zero_cache)
    high = verify(F4, f, 120, 1e-4, cache=zero_cache)
    assert low.tail_estimate > high.tail_estimate
    assert low.passed == (abs(low.discrepancy) <= 1e-4 + low.tail_estimate)
    assert low.lhs_total == pytest.approx(sum(v for _, v in low.lhs_breakdown), abs=1e-15)
    rhs = low.rhs_zero_sum - sum(low.rhs_pole_terms)
    assert low.discrepancy == pytest.approx(low.lhs_total - rhs, abs=1e-15)


def test_tail_monotone(zero_cache):
    f = make_log_bump(3, 0.5)
    lists = zero_lists_for(F4, 120, zero_cache)
    tails = [rhs_sum(F4, f, T, lists)[2] for T in (15, 30, 60, 90, 120)]
    assert all(b < a for a, b in zip(tails[:-1], tails[1:]))


def test_report_json_schema_and_determinism(zero_cache):
    f = make_log_bump(2, 0.7)
    a = verify(F4, f, 120, 1e-4, cache=zero_cache).to_json()
    b = verify(F4, f, 120, 1e-4, cache=zero_cache).to_json()
    assert a == b
    doc = json.loads(a)
    for key in ("field", "test_function", "lhs_total", "lhs_breakdown", "rhs_zero_sum", "rhs_pole_terms",
                "truncation_height", "tail_estimate", "discrepancy", "pass", "tool_version",
                "zero_cache_checksums"):
        assert key in doc
    assert doc["test_function"] == "bump:center=2,radius=0.7"
    assert set(doc["zero_cache_checksums"]) == {"zeta", "L(s,chi_-4)"}
    for x in [doc["lhs_total"], doc["discrepancy"]] + [e["value"] for e in doc["lhs_breakdown"]]:
        assert float(f"{x:.12g}") == x
