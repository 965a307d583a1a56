from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import QQ
from sympy.polys.rings import ring

from invprimes.fgl import (
    FiniteField,
    FormalGroupLaw,
    Integers,
    LevelData,
    NotDivisible,
    PrimeField,
    TruncSeries,
    ZLocal,
    additive,
    base_change_field,
    blueshift_degree,
    blueshift_report,
    exact_divide,
    fgl_axioms_check,
    fgl_height,
    formal_inverse,
    gm_c2,
    honda,
    level_vbar,
    multiplicative,
    n_series,
    psi,
    psi_by_composition,
    reduce_mod_In,
    trivial_level,
    universal_p_typical,
)
from invprimes.fgl.laws import hazewinkel_log_coeffs
from invprimes.fgl.rings import GradedPoly, Rationals
from invprimes.spectrum import INF

Z = Integers()


def series(coeffs, D, R=Z):
    return TruncSeries(R, 1, D, {(i,): R.from_int(c) for i, c in enumerate(coeffs) if c})


def y(D, R=Z):
    return TruncSeries.var(R, 1, D)


# ---------------------------------------------------------------------------
# an independent model of the universal 2-typical law through degree 8, in sympy


D8 = 8
SR, sx, sy, sv1, sv2, sv3 = ring("x,y,v1,v2,v3", QQ)


def _trunc(poly, D=D8):
    return SR.from_dict({m: c for m, c in poly.items() if m[0] + m[1] <= D})


def _log(t):
    # Hazewinkel logarithm at p = 2 written out by hand
    m1 = sv1 / 2
    m2 = (sv2 + m1 * sv1 ** 2) / 2
    m3 = (sv3 + m1 * sv2 ** 2 + m2 * sv1 ** 4) / 2
    t2 = _trunc(t * t)
    t4 = _trunc(t2 * t2)
    t8 = _trunc(t4 * t4)
    return _trunc(t + m1 * t2 + m2 * t4 + m3 * t8)


def _to_sympy(s, R, variables):
    out = SR.zero
    for e, c in s.terms.items():
        coeff = SR.zero
        for key, a in c.items():
            mono = SR.one
            for g, k in zip((sv1, sv2, sv3), R.exponents(key)):
                mono *= g ** k
            coeff += QQ(Fraction(a).numerator, Fraction(a).denominator) * mono
        mono = SR.one
        for v, k in zip(variables, e):
            mono *= v ** k
        out += coeff * mono
    return out


def test_hazewinkel_coefficients_by_hand():
    Q = GradedPoly(Rationals(), ["v1", "v2", "v3"])
    m = hazewinkel_log_coeffs(2, 8, 3, Q)
    v1, v2, v3 = (Q.gen(n) for n in ("v1", "v2", "v3"))
    half = Fraction(1, 2)
    m1 = Q.scale(v1, half)
    m2 = Q.scale(Q.add(v2, Q.mul(m1, Q.mul(v1, v1))), half)
    assert Q.eq(m[1], m1) and Q.eq(m[2], m2)


def test_universal_law_against_logarithm_oracle():
    F = universal_p_typical(2, D8, 3)
    sF = _to_sympy(F.series, F.ring, (sx, sy))
    assert _trunc(_log(sF) - _log(sx) - _log(sy)) == 0


def test_two_series_against_logarithm_oracle():
    F = universal_p_typical(2, D8, 3)
    s2 = _to_sympy(n_series(F, 2), F.ring, (sx,))
    assert _trunc(_log(s2) - 2 * _log(sx)) == 0


def test_two_series_low_terms():
    F = universal_p_typical(2, 4, 2)
    R = F.ring
    s = n_series(F, 2)
    assert R.eq(s.coeff(1), R.from_int(2))
    assert R.eq(s.coeff(2), R.neg(R.gen("v1")))


@pytest.mark.parametrize("p,D,N", [(2, 16, 3), (3, 9, 2), (2, 8, 3), (5, 5, 1)])
def test_axioms_hold(p, D, N):
    assert fgl_axioms_check(universal_p_typical(p, D, N)) is None


def test_axioms_simple_laws():
    assert fgl_axioms_check(additive(Z, 6)) is None
    assert fgl_axioms_check(multiplicative(Z, 6)) is None
    bad = FormalGroupLaw(TruncSeries(Z, 2, 4, {(1, 0): 1, (0, 1): 1, (2, 0): 1}))
    assert fgl_axioms_check(bad).axiom == "unit"
    skew = FormalGroupLaw(TruncSeries(Z, 2, 4, {(1, 0): 1, (0, 1): 1, (1, 2): 1}))
    assert fgl_axioms_check(skew).axiom == "commutativity"
    nonassoc = FormalGroupLaw(TruncSeries(Z, 2, 4, {(1, 0): 1, (0, 1): 1, (1, 1): 1, (2, 2): 1}))
    assert fgl_axioms_check(nonassoc).axiom == "associativity"


# ---------------------------------------------------------------------------
# n-series


def test_n_series_examples():
    F = multiplicative(Z, 8)
    assert n_series(F, 1) == y(8)
    assert n_series(F, 2) == series([0, 2, -1], 8)
    assert n_series(F, 0).is_zero()
    for p, n in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        H = honda(p, n, p ** n + 2)
        s = n_series(H, p)
        assert s.terms == {(p ** n,): 1}


LAWS = {
    "multiplicative": lambda: multiplicative(Z, 10),
    "2-typical": lambda: universal_p_typical(2, 10, 3),
    "honda": lambda: honda(3, 1, 10),
}


@given(st.sampled_from(sorted(LAWS)), st.integers(-2, 4), st.integers(-2, 4))
def test_n_series_is_multiplicative(name, m, n):
    F = LAWS[name]()
    assert n_series(F, m).compose([n_series(F, n)]) == n_series(F, m * n)


def test_formal_inverse():
    F = universal_p_typical(2, 8, 3)
    inv = formal_inverse(F)
    assert F(F.x(), inv).is_zero()


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6])
def test_q_series_nonzero_mod_In(p, n, q):
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    D = max(2, p ** (n * k))
    N = max(n, 1)
    while p ** (N + 1) <= D:
        N += 1
    F = reduce_mod_In(universal_p_typical(p, D, N), n)
    s = n_series(F, q)
    assert not s.is_zero()
    assert s.low_degree() == (p ** (n * k) if n else 1)


def test_reduction_examples():
    F = universal_p_typical(2, 8, 3)
    assert reduce_mod_In(F, 0) is F
    G = reduce_mod_In(F, 1)
    s = n_series(G, 2)
    R = G.ring
    assert s.low_degree() == 2 and R.eq(s.coeff(2), R.gen("v1"))
    A = additive(PrimeField(2), 6)
    assert reduce_mod_In(A, 1) is A


# ---------------------------------------------------------------------------
# division


def test_exact_divide_examples():
    a = series([0, 2, -1], 6)
    assert exact_divide(a, y(6)) == series([2, -1], 5)
    assert exact_divide(a, a).terms == {(0,): 1}
    with pytest.raises(NotDivisible) as err:
        exact_divide(series([0, 0, 1], 6), series([0, 0, 0, 1], 6))
    assert err.value.where == 2


coeff_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=7)


@given(coeff_lists, st.integers(0, 3), coeff_lists, st.sampled_from([1, -1]))
def test_exact_divide_roundtrip(a, k, btail, lead):
    D = 12
    A = series(a, D)
    B = series([0] * k + [lead] + btail, D)
    q = exact_divide(A * B, B)
    assert q == A.with_trunc(q.trunc)
    assert q.trunc == D - k


@given(coeff_lists, st.integers(0, 3), coeff_lists)
def test_exact_divide_roundtrip_mod_p(a, k, btail):
    R = PrimeField(3)
    D = 10
    A = series([c % 3 for c in a], D, R)
    B = series([0] * k + [1] + [c % 3 for c in btail], D, R)
    assert exact_divide(A * B, B) == A.with_trunc(D - k)


def test_series_json_roundtrip():
    F = universal_p_typical(2, 8, 3)
    s = n_series(F, 2)
    assert TruncSeries.from_json(F.ring, s.to_json()) == s


# ---------------------------------------------------------------------------
# level structures


def test_trivial_level_gives_q():
    F = multiplicative(Z, 6)
    q3 = level_vbar(F, trivial_level(3, Z))
    assert q3 == series([3, -3, 1], q3.trunc)
    assert q3.coeff(0) == 3
    q2 = level_vbar(F, trivial_level(2, Z))
    assert q2.coeff(0) == 2


def test_gm_c2():
    for sign in (1, -1):
        F, e = gm_c2(sign)
        assert e == 2 * sign and abs(e) == 2
        vbar = level_vbar(F, LevelData(2, 1, {(0,): 0, (1,): e}))
        assert vbar.terms == {(0,): sign}


def test_level_rejects_non_additive_euler_classes():
    F = multiplicative(Z, 6)
    with pytest.raises(ValueError):
        level_vbar(F, LevelData(2, 1, {(0,): 0, (1,): 3}))


def test_honda_with_zero_euler_classes():
    H = honda(2, 2, 10)
    zero = {c: 0 for c in ((0,), (1,))}
    assert level_vbar(H, LevelData(2, 1, zero)).terms == {(2,): 1}
    zero2 = {(a, b): 0 for a in range(2) for b in range(2)}
    assert level_vbar(H, LevelData(2, 2, zero2)).terms == {(0,): 1}
    zero3 = {(a, b, c): 0 for a in range(2) for b in range(2) for c in range(2)}
    with pytest.raises(NotDivisible):
        level_vbar(H, LevelData(2, 3, zero3))


# ---------------------------------------------------------------------------
# psi and blueshift


def test_psi_examples():
    s = psi(2, 1, 1, 8, top=2)
    R = s.ring
    assert R.fmt(s.coeff(0)) == "v1"
    assert R.eq(s.coeff(2), R.gen("v2"))
    s4 = psi(2, 1, 2, 8, top=2)
    assert R.fmt(s4.coeff(0)) == "v1"
    z = psi(2, 0, 1, 4, top=1)
    assert z.ring.fmt(z.coeff(0)) == "2"


@pytest.mark.parametrize("p,n,k,D,top", [(2, 1, 1, 8, 2), (2, 1, 2, 8, 2), (3, 1, 1, 6, 2), (2, 2, 1, 6, 3),
                                          (2, 0, 2, 6, 1), (2, 1, 1, 6, None)])
def test_psi_two_routes_agree(p, n, k, D, top):
    assert psi(p, n, k, D, top) == psi_by_composition(p, n, k, D, top)


def test_psi4_hand_oracle():
    # psi_4 = psi_2([2](e)); modulo v1, [2](e) = v2 e^4 + ..., so psi_4 = v1 + v2^3 e^8 + ...
    s = psi(2, 1, 2, 8, top=2)
    R = s.ring
    v1, v2 = R.gen("v1"), R.gen("v2")
    assert all(R.is_zero(R.substitute(s.coeff(d), "v1", 0)) for d in range(1, 8))
    assert R.eq(R.substitute(s.coeff(8), "v1", 0), R.mul(v2, R.mul(v2, v2)))
    assert R.eq(s.coeff(0), v1)


@pytest.mark.parametrize("p,n,k", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 1, 1), (3, 1, 1), (2, 1, 2), (2, 3, 1)])
def test_blueshift(p, n, k):
    rep = blueshift_report(p, n, k)
    assert rep.height_drop == 1
    assert rep.constant_is_unit_times_generator and rep.unit_after_inverting_e
    assert rep.lowest_degree_mod_v == blueshift_degree(p, n, k)


def test_blueshift_examples():
    assert blueshift_report(2, 1, 1).constant_term == "2"
    rep = blueshift_report(2, 2, 2)
    assert (rep.constant_term, rep.lowest_degree_mod_v, rep.lowest_coeff_mod_v) == ("v1", 8, "v2^3")


def test_blueshift_truncation_too_small():
    with pytest.raises(NotDivisible):
        blueshift_report(2, 2, 2, D=6)


# ---------------------------------------------------------------------------
# heights


@pytest.mark.parametrize("p", [2, 3, 5])
def test_heights(p):
    assert fgl_height(multiplicative(PrimeField(p), p + 2)).height == 1
    r = fgl_height(additive(PrimeField(p), 8))
    assert r.height == INF and r.truncation_limited
    assert fgl_height(multiplicative(Z, 4), p).height == 0


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_honda_height(p, n):
    assert fgl_height(honda(p, n, p ** n)) == (n, False)


@pytest.mark.parametrize("p,n,k", [(2, 1, 2), (2, 2, 3), (3, 1, 2)])
def test_height_invariant_under_field_extension(p, n, k):
    for F in (honda(p, n, p ** n), multiplicative(PrimeField(p), p + 1)):
        G = base_change_field(F, k)
        assert isinstance(G.ring, FiniteField)
        assert fgl_height(G) == fgl_height(F)


def test_truncated_honda_is_flagged():
    r = fgl_height(honda(2, 3, 6))
    assert r.height == INF and r.truncation_limited


def test_zlocal_division():
    R = ZLocal(3)
    assert R.exact_div(Fraction(6), Fraction(2)) == 3
    assert R.is_unit(Fraction(2, 5)) and not R.is_unit(Fraction(3))
    with pytest.raises(NotDivisible):
        R.exact_div(Fraction(1), Fraction(3))
