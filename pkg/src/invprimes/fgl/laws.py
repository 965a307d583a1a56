"""Formal group laws: construction, axioms, [n]-series, heights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .rings import CoeffRing, GradedPoly, Integers, PrimeField, Rationals, ZLocal
from .series import TruncSeries

INF = float("inf")


@dataclass
class FormalGroupLaw:
    """F(x, y) as a two-variable truncated series.

    ``exact`` marks laws that are polynomials (nothing is lost to truncation),
    which is what allows substituting non-nilpotent constants such as Euler
    classes into them.
    """

    series: TruncSeries
    name: str = ""
    exact: bool = False
    prime: int | None = None

    @property
    def ring(self) -> CoeffRing:
        return self.series.ring

    @property
    def trunc(self) -> int:
        return self.series.trunc

    def __call__(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        return self.series.compose([a, b])

    def x(self) -> TruncSeries:
        return TruncSeries.var(self.ring, 1, self.trunc)

    def change_ring(self, ring: CoeffRing, name: str | None = None) -> "FormalGroupLaw":
        return FormalGroupLaw(self.series.change_ring(ring), name or self.name, self.exact, self.prime)

    def to_json(self) -> dict:
        return {"name": self.name, "ring": self.ring.to_json(), "series": self.series.to_json()}


def additive(ring: CoeffRing, D: int) -> FormalGroupLaw:
    one = ring.one()
    return FormalGroupLaw(TruncSeries(ring, 2, D, {(1, 0): one, (0, 1): one}), "additive", exact=True)


def multiplicative(ring: CoeffRing, D: int, sign: int = 1) -> FormalGroupLaw:
    """x + y - sign*xy (coordinate 1 - t for sign 1, t - 1 for sign -1)."""
    one = ring.one()
    return FormalGroupLaw(TruncSeries(ring, 2, D, {(1, 0): one, (0, 1): one, (1, 1): ring.from_int(-sign)}),
                          "multiplicative", exact=True)


# ---------------------------------------------------------------------------
# the universal p-typical law


def hazewinkel_log_coeffs(p: int, D: int, N: int, R: GradedPoly) -> list:
    """m_0 = 1, p m_n = sum_{0<=i<n} m_i v_{n-i}^{p^i} for p^n <= D, with v_j = 0 for j > N."""
    m = [R.one()]
    n = 1
    while p ** n <= D:
        acc = {}
        for i in range(max(0, n - N), n):
            v = R.gen(f"v{n - i}")
            vp = {k * p ** i: c for k, c in v.items()}  # monomial power
            acc = R.add(acc, R.mul(m[i], vp))
        m.append(R.scale(acc, Fraction(1, p)))
        n += 1
    return m


def log_series(p: int, D: int, N: int, R: GradedPoly) -> TruncSeries:
    m = hazewinkel_log_coeffs(p, D, N, R)
    terms = {}
    for i, mi in enumerate(m):
        if p ** i <= D and mi:
            terms[(p ** i,)] = mi
    return TruncSeries(R, 1, D, terms)


def reversion(f: TruncSeries) -> TruncSeries:
    """Compositional inverse of f(x) = x + ... (the linear coefficient must be 1)."""
    R, D = f.ring, f.trunc
    if not R.eq(f.coeff(1), R.one()):
        raise ValueError("series must start with x")
    powers = f.powers(D)
    b = {1: R.one()}
    for k in range(2, D + 1):
        acc = R.zero()
        for j, bj in b.items():
            acc = R.add(acc, R.mul(bj, powers[j].coeff(k)))
        if not R.is_zero(acc):
            b[k] = R.neg(acc)
    return TruncSeries(R, 1, D, {(k,): c for k, c in b.items()})


@lru_cache(maxsize=None)
def universal_p_typical(p: int, D: int, N: int) -> FormalGroupLaw:
    """The universal p-typical law over Z_(p)[v_1..v_N] through total degree D.

    Built over Q[v] as exp(log x + log y) from the Hazewinkel logarithm, then
    checked to be p-integral.  Generators above v_N are set to zero.
    """
    names = [f"v{i}" for i in range(1, N + 1)]
    Q = GradedPoly(Rationals(), names)
    log = log_series(p, D, N, Q)
    exp = reversion(log)
    lx = log.embed(2, [0])
    ly = log.embed(2, [1])
    F = exp.compose([lx + ly])
    Zp = GradedPoly(ZLocal(p), names)
    try:
        terms = {e: Zp.lift(c, Q) for e, c in F.terms.items()}
    except ArithmeticError as err:
        raise AssertionError(f"p-typical law is not p-integral: {err}") from None
    return FormalGroupLaw(TruncSeries(Zp, 2, D, terms), f"p-typical(p={p})", prime=p)


def honda(p: int, n: int, D: int) -> FormalGroupLaw:
    """Height n Honda law over F_p: the p-typical law at v_n = 1, other v_i = 0."""
    N = n
    U = universal_p_typical(p, D, N)
    Fp = PrimeField(p)
    R = U.ring

    def spec(c):
        total = 0
        for k, x in c.items():
            e = R.exponents(k)
            if all(a == 0 for i, a in enumerate(e) if i != n - 1):
                total += Fp.from_fraction(Fraction(x))
        return total % p

    return FormalGroupLaw(U.series.map_coeffs(Fp, spec), f"Honda(p={p}, n={n})", prime=p)


# ---------------------------------------------------------------------------
# axioms


class FailedAxiom(NamedTuple):
    axiom: str
    witness: tuple  # exponent of an offending monomial


def fgl_axioms_check(F: FormalGroupLaw) -> FailedAxiom | None:
    """Unit, commutativity and associativity through the truncation degree."""
    S = F.series
    R = S.ring
    for e, c in S.terms.items():
        if e[1] == 0 and e != (1, 0):
            return FailedAxiom("unit", e)
        if e[0] == 0 and e != (0, 1):
            return FailedAxiom("unit", e)
    for e in ((1, 0), (0, 1)):
        if not R.eq(S.coeff(e), R.one()):
            return FailedAxiom("unit", e)
    for e, c in S.terms.items():
        if not R.eq(c, S.coeff((e[1], e[0]))):
            return FailedAxiom("commutativity", e)
    # with F commutative, F(x, F(y, z)) = F(F(y, z), x) is H(y, z, x) for H = F(F(x, y), z)
    z = TruncSeries.var(R, 3, S.trunc, 2)
    H = S.compose([S.embed(3, [0, 1]), z])
    diff = H - H.permute([2, 0, 1])
    if not diff.is_zero():
        return FailedAxiom("associativity", min(diff.terms, key=lambda e: (sum(e), e)))
    return None


def n_series(F: FormalGroupLaw, n: int) -> TruncSeries:
    """[n]_F(x), with [-n] = [n] composed with the formal inverse."""
    if n < 0:
        return n_series(F, -n).compose([formal_inverse(F)])
    x = F.x()
    out = x.zero_like()
    if n == 0:
        return out
    # double and add
    acc, base = None, x
    k = n
    while k:
        if k & 1:
            acc = base if acc is None else F(acc, base)
        k >>= 1
        if k:
            base = F(base, base)
    return acc


def formal_inverse(F: FormalGroupLaw) -> TruncSeries:
    """i(x) with F(x, i(x)) = 0, solved degree by degree."""
    R, D = F.ring, F.trunc
    inv = TruncSeries(R, 1, D, {(1,): R.neg(R.one())})
    x = F.x()
    for d in range(2, D + 1):
        r = F(x, inv.with_trunc(d)).with_trunc(d)
        c = r.coeff(d)
        if not R.is_zero(c):
            inv = inv + TruncSeries(R, 1, D, {(d,): R.neg(c)})
    return inv


def reduce_mod_In(F: FormalGroupLaw, n: int) -> FormalGroupLaw:
    """Reduce a law over Z_(p)[v_1..] modulo I_n = (p, v_1, ..., v_{n-1})."""
    R = F.ring
    if n == 0:
        return F
    if isinstance(R, PrimeField) and n == 1:
        return F  # already characteristic p, no generators to kill
    if not isinstance(R, GradedPoly) or not isinstance(R.base, (ZLocal, Integers)):
        raise ValueError("reduction mod I_n needs a law over Z_(p)[v_1, ...]")
    p = F.prime or R.base.p
    killed = [f"v{i}" for i in range(1, n) if f"v{i}" in R.names]
    S = GradedPoly(PrimeField(p), R.names, modulo=killed)
    return FormalGroupLaw(F.series.change_ring(S), f"{F.name} mod I_{n}", F.exact, p)


# ---------------------------------------------------------------------------
# height


class HeightResult(NamedTuple):
    height: float  # a non-negative int or INF
    truncation_limited: bool  # True when [p] vanished through the truncation degree


def fgl_height(F: FormalGroupLaw, p: int | None = None) -> HeightResult:
    """Height of a law over a field: least n with x^{p^n} the leading term of [p](x)."""
    R = F.ring
    p = p or R.characteristic or F.prime
    if not R.characteristic:
        return HeightResult(0, False)
    s = n_series(F, p)
    low = s.low_degree()
    if low is None:
        return HeightResult(INF, True)
    n, q = 0, 1
    while q < low:
        q *= p
        n += 1
    if q != low:
        raise ValueError(f"leading term of [p](x) in degree {low}, not a power of {p}")
    return HeightResult(n, False)


def base_change_field(F: FormalGroupLaw, k: int) -> FormalGroupLaw:
    """Extend scalars from F_p to F_{p^k}."""
    from .rings import FiniteField

    R = F.ring
    if not isinstance(R, PrimeField):
        raise ValueError("base change starts from a prime field")
    K = FiniteField(R.p, k)
    return FormalGroupLaw(F.series.map_coeffs(K, K.from_int), f"{F.name} over F_{R.p}^{k}", F.exact, F.prime)
