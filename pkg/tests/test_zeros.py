import hashlib
import math

import mpmath
import numpy as np
import pytest

from qexplicit.quadfield import field_from_discriminant, kronecker, primes_up_to, splitting_type
from qexplicit.zeros import (EnvelopeError, LFunctionId, ZeroCache, ZeroFileError, ZeroList,
                             argument_count, certify, completed, dedekind_completed, dirichlet,
                             export_zeros, find_zeros, format_zero_file, hardy_z, import_zeros,
                             l_value, parse_zero_file, riemann_zeta, zero_count_estimate)

mpmath.mp.dps = 30
ZETA = riemann_zeta()
L4 = dirichlet(-4)


def mp_l(D, s):
    if D == 1:
        return complex(mpmath.zeta(s))
    chi = [0] + [kronecker(D, a) for a in range(1, abs(D))]
    return complex(mpmath.dirichlet(s, chi))


def test_ids():
    assert ZETA.conductor == 1 and ZETA.parity == "even"
    assert L4 == LFunctionId("dirichlet", 4, "odd")
    with pytest.raises(ValueError):
        LFunctionId("dirichlet", 4, "even")
    with pytest.raises(ValueError):
        dirichlet(5)


def test_l_value_examples():
    assert abs(l_value(ZETA, 2) - math.pi ** 2 / 6) <= 1e-14
    assert abs(l_value(L4, 1) - math.pi / 4) <= 1e-14
    assert abs(l_value(L4, 2) - 0.915965594177219) <= 1e-14


@pytest.mark.parametrize("D", [1, -3, -4, -7, -8, -11])
@pytest.mark.parametrize("s", [0.5 + 14.134725j, 0.3 + 120j, 0.9 + 3j, -0.5 + 0.1j, 2 + 500j,
                               0.5 + 480j, 1.0 + 250j, 0.0 + 60j])
def test_l_value_against_mpmath(D, s):
    lid = ZETA if D == 1 else dirichlet(D)
    assert abs(l_value(lid, s) - mp_l(D, s)) <= 1e-10


@pytest.mark.parametrize("D", [1, -4, -11])
def test_l_value_left_edge_relative(D):
    # at Re s = -1 the value grows like t^(3/2); the error is relative
    lid = ZETA if D == 1 else dirichlet(D)
    for s in (-1 + 100j, -1 + 400j):
        ref = mp_l(D, s)
        assert abs(l_value(lid, s) - ref) <= 1e-12 * abs(ref)


def test_l_value_errors():
    with pytest.raises(ValueError):
        l_value(ZETA, 1.0)
    with pytest.raises(EnvelopeError):
        l_value(ZETA, 0.5 + 600j)
    with pytest.raises(EnvelopeError):
        l_value(L4, 2.5)
    assert np.isfinite(l_value(L4, 1.0))


def test_vectorised_matches_scalar():
    s = np.array([0.5 + 10j, 0.2 + 300j, 1.5 - 40j])
    v = l_value(dirichlet(-7), s)
    assert all(abs(v[i] - l_value(dirichlet(-7), complex(s[i]))) <= 1e-13 for i in range(3))


@pytest.mark.parametrize("lid", [ZETA, L4, dirichlet(-3), dirichlet(-8), dirichlet(-11)])
def test_functional_equation(lid):
    assert abs(completed(lid, 0.3 + 5j) - completed(lid, 0.7 - 5j)) <= 1e-10
    for sig in (-0.5, 0.1, 0.4):
        for t in (0.5, 7.0, 33.0, 110.0):
            a, b = completed(lid, sig + 1j * t), completed(lid, 1 - sig - 1j * t)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_hardy_z_real():
    z = np.exp(1j * 0) * l_value(ZETA, 0.5 + 10j)
    from qexplicit.zeros import gamma_phase
    rotated = np.exp(1j * gamma_phase(ZETA, 10.0)) * l_value(ZETA, 0.5 + 10j)
    assert abs(rotated.imag) <= 1e-14
    assert hardy_z(ZETA, 10.0) == pytest.approx(rotated.real)
    assert abs(z) > 0


def test_product_with_dedekind_completion():
    s = 0.5 + 3j
    lhs = completed(ZETA, s) * completed(L4, s)
    rhs = 4 ** ((s + 1) / 2) / math.pi * dedekind_completed(-4, s)
    assert abs(lhs - rhs) <= 1e-13
    # xi_K(s) = |D|^(1/2 - s) xi_K(1 - s)
    for D in (-3, -4, -7):
        s = 0.3 + 5j
        assert abs(dedekind_completed(D, s) - abs(D) ** (0.5 - s) * dedekind_completed(D, 1 - s)) <= 1e-12


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11])
def test_euler_product(D):
    fld = field_from_discriminant(D)
    X = 10 ** 4
    prod = 1.0
    for p in primes_up_to(X):
        v = splitting_type(fld, p)
        prod *= (1.0 / (1.0 - v.q ** -2.0)) ** v.places_above
    target = (l_value(ZETA, 2) * l_value(dirichlet(D), 2)).real
    # each omitted prime p > X changes the product by at most a factor (1 - p^-2)^-2
    assert abs(prod / target - 1) <= 2.0 / X


def test_find_zeros_examples():
    z20 = find_zeros(ZETA, 20)
    assert z20.certified and len(z20.ordinates) == 1
    assert z20.ordinates[0] == pytest.approx(14.134725, abs=1e-6)
    z30 = find_zeros(ZETA, 30)
    assert z30.certified and len(z30.ordinates) == 3
    l7 = find_zeros(L4, 7)
    assert l7.certified and len(l7.ordinates) == 1
    assert l7.ordinates[0] == pytest.approx(6.0209, abs=1e-4)


def test_zeta_zeros_against_mpmath(zero_cache):
    zl = zero_cache.load(ZETA)
    assert zl.certified and len(zl.ordinates) == 38
    for i, g in enumerate(zl.ordinates):
        assert abs(g - float(mpmath.zetazero(i + 1).imag)) <= 1e-9


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11])
def test_dirichlet_zeros_vanish_in_mpmath(zero_cache, D):
    zl = zero_cache.load(dirichlet(D))
    assert zl.certified
    for g in zl.ordinates[:: max(1, len(zl.ordinates) // 8)]:
        assert abs(mp_l(D, 0.5 + 1j * g)) <= 1e-8


@pytest.mark.parametrize("T", [30.0, 50.0, 120.0])
@pytest.mark.parametrize("lid", [ZETA, L4, dirichlet(-11)])
def test_count_estimate_within_two(lid, T):
    n = argument_count(lid, T)
    assert abs(zero_count_estimate(lid, T) - n) <= 2


def test_count_estimate_monotone():
    # the smooth count has derivative log(k T / 2 pi) / 2 pi, so it increases from T = 2 pi / k
    for lid, T0 in ((ZETA, 2 * math.pi), (L4, 5.0), (dirichlet(-3), 5.0)):
        vals = [zero_count_estimate(lid, T) for T in np.linspace(T0, 500, 200)]
        assert all(b > a for a, b in zip(vals[:-1], vals[1:]))
    with pytest.raises(ValueError):
        zero_count_estimate(ZETA, 4)


def test_zero_list_invariants():
    with pytest.raises(ValueError):
        ZeroList(ZETA, (21.0, 14.1), 30.0, False)
    with pytest.raises(ValueError):
        ZeroList(ZETA, (14.1, 31.0), 30.0, False)
    zl = ZeroList(ZETA, (14.1, 21.0, 25.0), 30.0, True)
    assert zl.truncated(22).ordinates == (14.1, 21.0)
    with pytest.raises(ValueError):
        zl.truncated(40)


def test_find_zeros_height_limit():
    with pytest.raises(ValueError):
        find_zeros(ZETA, 600)


def test_export_import_round_trip(tmp_path):
    zl = find_zeros(L4, 40)
    path = tmp_path / "l4.zeros"
    export_zeros(zl, path)
    back = import_zeros(path)
    assert back.id == zl.id and back.height == zl.height
    assert back.ordinates == tuple(float(f"{g:.12g}") for g in zl.ordinates)
    assert not back.certified
    assert format_zero_file(back.__class__(back.id, back.ordinates, back.height, True)) == path.read_text()
    assert not list(tmp_path.glob("*.tmp"))


def _hand_file(body, height=22, kind="riemann_zeta", conductor=1, checksum=None):
    digest = checksum or hashlib.sha256(body.encode()).hexdigest()
    return (f"# kind={kind}\n# conductor={conductor}\n# height={height}\n# certified=1\n"
            f"{body}# sha256={digest}\n")


def test_import_hand_made_two_zero_file(tmp_path):
    p = tmp_path / "two.txt"
    p.write_text(_hand_file("14.1347251417\n21.0220396388\n"))
    zl = import_zeros(p)
    assert len(zl.ordinates) == 2 and not zl.certified
    cert = certify(zl)
    assert cert.certified
    assert cert.ordinates == pytest.approx(find_zeros(ZETA, 22).ordinates, abs=1e-9)


def test_certify_rejects_incomplete_list(tmp_path):
    zl = ZeroList(ZETA, (14.1347251417,), 22.0, False)
    assert not certify(zl).certified
    wrong = ZeroList(ZETA, (14.2, 21.0220396388), 22.0, False)
    assert not certify(wrong).certified


@pytest.mark.parametrize("text", [
    _hand_file("14.1347251417\n", checksum="0" * 64),
    _hand_file("14.1347251417\nabc\n"),
    "# kind=riemann_zeta\n14.1\n",
    _hand_file("21.0\n14.1\n"),
    _hand_file("14.1\n", kind="dirichlet", conductor=1),
])
def test_malformed_files(text):
    with pytest.raises(ZeroFileError):
        parse_zero_file(text)


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("QEXPLICIT_CACHE_DIR", str(tmp_path / "c"))
    cache = ZeroCache()
    assert cache.directory == tmp_path / "c"
    assert cache.load(ZETA) is None
    zl = cache.get(ZETA, 25)
    assert zl.certified and cache.load(ZETA) == zl
    assert cache.get(ZETA, 20).ordinates == zl.ordinates[:1]
    with pytest.raises(FileNotFoundError):
        cache.get(L4, 10, compute=False)
