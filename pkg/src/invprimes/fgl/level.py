"""Level structures, the series psi and the blueshift computation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .laws import FormalGroupLaw, multiplicative, n_series, universal_p_typical
from .rings import CoeffRing, GradedPoly, Integers, NotDivisible, PrimeField, ZLocal
from .series import TruncSeries, exact_divide


@dataclass
class LevelData:
    """Euler classes e_V for the characters V of C_p^r, as ring elements.

    Characters are tuples in (Z/p)^r; the trivial character must map to 0 and
    the assignment must be additive for F: F(e_V, e_W) = e_{V+W}.
    """

    prime: int
    rank: int
    euler: dict

    def characters(self):
        return list(itertools.product(range(self.prime), repeat=self.rank))


def trivial_level(prime: int, ring: CoeffRing) -> LevelData:
    return LevelData(prime, 0, {(): ring.zero()})


def _eval_first(F: FormalGroupLaw, c) -> TruncSeries:
    """F(c, y) for a constant c, as a series in y."""
    R = F.ring
    S = F.series
    if not R.is_zero(c) and not F.exact:
        # only safe when c is nilpotent below the truncation
        pw = R.one()
        for _ in range(S.trunc + 1):
            pw = R.mul(pw, c)
        if not R.is_zero(pw):
            raise ValueError("cannot substitute a non-nilpotent constant into a truncated law")
    out: dict = {}
    for (i, j), a in S.terms.items():
        t = a
        for _ in range(i):
            t = R.mul(t, c)
        out[(j,)] = R.add(out[(j,)], t) if (j,) in out else t
    return TruncSeries(R, 1, S.trunc, out)


def check_level(F: FormalGroupLaw, level: LevelData) -> None:
    R = F.ring
    p = level.prime
    chars = level.characters()
    if set(level.euler) != set(chars):
        raise ValueError("level data must give an Euler class for every character")
    if not R.is_zero(level.euler[(0,) * level.rank]):
        raise ValueError("the trivial character must have Euler class 0")
    for V, W in itertools.product(chars, repeat=2):
        s = _eval_first(F, level.euler[V])
        val = _eval_const(s, level.euler[W], R)
        VW = tuple((a + b) % p for a, b in zip(V, W))
        if not R.eq(val, level.euler[VW]):
            raise ValueError(f"Euler classes are not additive at {V} + {W}")


def _eval_const(s: TruncSeries, c, R):
    out = R.zero()
    for (j,), a in s.terms.items():
        t = a
        for _ in range(j):
            t = R.mul(t, c)
        out = R.add(out, t)
    return out


def level_vbar(F: FormalGroupLaw, level: LevelData) -> TruncSeries:
    """[p]_F(y) divided by the product of F(e_V, y) over all characters V."""
    check_level(F, level)
    R = F.ring
    prod = TruncSeries.const(R, 1, F.trunc, R.one())
    for V in level.characters():
        prod = prod * _eval_first(F, level.euler[V])
    return exact_divide(n_series(F, level.prime), prod)


def gm_c2(sign: int = 1, D: int = 8) -> tuple[FormalGroupLaw, int]:
    """Multiplicative law over Z with the C_2 level structure: e_V = 2*sign.

    With F = x + y - sign*xy one has F(e_V, e_V) = 0, and Z/e_V = Z/2.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    F = multiplicative(Integers(), D, sign)
    e = 2 * sign
    check_level(F, LevelData(2, 1, {(0,): 0, (1,): e}))
    return F, e


# ---------------------------------------------------------------------------
# psi


def psi_ring(p: int, n: int, N: int, top: int | None = None) -> GradedPoly:
    """Z_(p)[v_1..v_N] mod I_n, optionally with v_top inverted and v_j = 0 above it."""
    names = [f"v{i}" for i in range(1, N + 1)]
    base = PrimeField(p) if n >= 1 else ZLocal(p)
    killed = names[: max(n - 1, 0)]
    inverted = [f"v{top}"] if top else []
    return GradedPoly(base, names, inverted=inverted, modulo=killed)


def reduced_law(p: int, n: int, D: int, top: int | None = None) -> FormalGroupLaw:
    if top is not None:
        N = top
    else:
        N = max(n, 1)
        while p ** (N + 1) <= D:
            N += 1
    U = universal_p_typical(p, D, N)
    R = psi_ring(p, n, N, top)
    return U.change_ring(R, f"{U.name} mod I_{n}" + (f", v{top} inverted" if top else ""))


def psi(p: int, n: int, k: int, D: int, top: int | None = None) -> TruncSeries:
    """psi_{p^k}^{(n)} = [p]([p^{k-1}](e)) / ([p^{k-1}](e))^{p^n}, accurate through degree D.

    Computed modulo I_n over the universal p-typical law, or over
    F_p[v_n, v_top^{+-1}] when ``top`` is given.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    D_int = D + p ** (n * k)
    F = reduced_law(p, n, D_int, top)
    u = n_series(F, p ** (k - 1))
    a = n_series(F, p).compose([u])
    b = u ** (p ** n)
    out = exact_divide(a, b)
    if out.trunc < D:
        raise NotDivisible("truncation too small for the requested precision", out.trunc)
    return out.with_trunc(D)


def psi_by_composition(p: int, n: int, k: int, D: int, top: int | None = None) -> TruncSeries:
    """psi_{p^k} computed as psi_p evaluated at [p^{k-1}](e)."""
    D_int = D + p ** (n * k)
    F = reduced_law(p, n, D_int, top)
    base = exact_divide(n_series(F, p), F.x() ** (p ** n))
    u = n_series(F, p ** (k - 1)).with_trunc(base.trunc)
    return base.compose([u]).with_trunc(D)


class BlueshiftReport(NamedTuple):
    constant_term: str
    constant_is_unit_times_generator: bool
    lowest_degree_mod_v: int | None
    lowest_coeff_mod_v: str | None
    unit_after_inverting_e: bool
    height_drop: int | None


def blueshift_degree(p: int, n: int, k: int) -> int:
    """Degree of the leading term of psi_{p^k}^{(n-1)} modulo v_{n-1}."""
    return p ** (n * k) - p ** (n * (k - 1) + n - 1)


def blueshift_report(p: int, n: int, k: int, D: int | None = None) -> BlueshiftReport:
    """Height of the C_{p^k} geometric fixed points of a height n theory.

    Over E = F_p[v_{n-1}, v_n^{+-1}] (or Z_(p)[v_1^{+-1}] for n = 1), the
    series psi_{p^k}^{(n-1)} must have constant term v_{n-1} times a unit and,
    modulo v_{n-1}, a leading coefficient that is a unit.  Then inverting the
    Euler class leaves a law of height exactly n - 1.

    The quotient by (v_{n-1}, psi) is not zero before e is inverted: psi mod
    v_{n-1} is e^d times a unit, so only the e-inverted ring vanishes.  The
    report checks that reading.
    """
    if n < 1:
        raise ValueError("blueshift needs height n >= 1")
    if D is None:
        D = blueshift_degree(p, n, k)
    s = psi(p, n - 1, k, D, top=n)
    R = s.ring
    c0 = s.coeff(0)
    gen_ok = _is_unit_times_generator(R, c0, n - 1, p)
    # reduce modulo v_{n-1}
    if n >= 2:
        Rm = GradedPoly(R.base, R.names, inverted=R.inverted, modulo=set(R.modulo) | {f"v{n - 1}"})
    else:
        Rm = GradedPoly(PrimeField(p), R.names, inverted=R.inverted, modulo=R.modulo)
    sm = s.change_ring(Rm)
    low = sm.low_degree()
    if low is None:
        raise NotDivisible(f"psi vanishes modulo v_{n - 1} through degree {D}: truncation too small", D)
    lead = sm.coeff(low)
    unit = Rm.is_unit(lead)
    drop = 1 if (gen_ok and unit) else None
    return BlueshiftReport(R.fmt(c0), gen_ok, low, Rm.fmt(lead), unit, drop)


def _is_unit_times_generator(R: GradedPoly, c, j: int, p: int) -> bool:
    if not c:
        return False
    if j == 0:
        # v_0 = p
        return all(x % p == 0 for x in _numerators(c)) and R.is_unit(R.scale(c, _inv_p(p)))
    g = R.gen(f"v{j}")
    try:
        q = R.exact_div(c, g)
    except NotDivisible:
        return False
    return R.is_unit(q)


def _numerators(c):
    from fractions import Fraction

    return [Fraction(x).numerator for x in c.values()]


def _inv_p(p):
    from fractions import Fraction

    return Fraction(1, p)
