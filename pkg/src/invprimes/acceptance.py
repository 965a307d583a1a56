"""The acceptance suite: nine exact checks, each with a runtime budget.

Each criterion is a function returning ``(ok, detail)``; ``run`` times it and
folds the budget into the verdict.  Criteria share no state, so they may run
in any order or in parallel.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .abgroup import FgAbGroup, enumerate_subgroups
from .fgl.laws import (
    additive,
    fgl_axioms_check,
    fgl_height,
    honda,
    multiplicative,
    n_series,
    reduce_mod_In,
    universal_p_typical,
)
from .fgl.level import LevelData, blueshift_report, gm_c2, level_vbar, psi, psi_by_composition
from .fgl.rings import GradedPoly, Integers, PrimeField
from .spectrum import (
    INF,
    AdmissibleFn,
    CircleContext,
    CircleFn,
    ClosedSet,
    PrimePoint,
    SpecContext,
    closure,
    enumerate_admissible,
    includes,
    includes_crossprime,
    inclusion_matrix,
    is_admissible,
    order_from_closed_sets,
    specialization_order,
)
from .support import (
    balmer_compare,
    geom_fixed_points,
    random_types,
    smash,
    support_of,
    wedge,
)
from .witness import realize, verify_realization


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    tags: tuple
    budget: float  # seconds
    fn: Callable[[], tuple[bool, str]]


class Outcome(NamedTuple):
    number: int
    name: str
    passed: bool
    correct: bool
    seconds: float
    budget: float
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"[{verdict}] {self.number}. {self.name} "
                f"({self.seconds:.2f}s / {self.budget:.0f}s) {self.detail}")

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "correct": self.correct, "seconds": round(self.seconds, 3),
                "budget": self.budget, "detail": self.detail}


def _group(*orders) -> FgAbGroup:
    return FgAbGroup.from_orders(0, list(orders))


# ---------------------------------------------------------------------------
# 1


def inclusion_law() -> tuple[bool, str]:
    H = 5
    cases = [((2,), 2), ((3,), 2), ((4,), 2), ((6,), 2), ((2, 2), 2), ((2, 4), 2), ((3,), 3), ((9,), 3)]
    for orders, p in cases:
        ctx = SpecContext(_group(*orders), p)
        try:
            pts, rel = specialization_order(ctx, H)
        except AssertionError as err:
            return False, f"{orders} at p={p}: {err}"
        for i, P in enumerate(pts):
            up = frozenset(Q for j, Q in enumerate(pts) if rel[i, j])
            if closure(ctx, [P], H).points(ctx, H) != up:
                return False, f"{orders} at p={p}: closure of {P} is not its up-set"
    # cyclic: I_{C_{p^k}, n} <= I_{1, n+1}
    for p, k in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        ctx = SpecContext(_group(p ** k), p)
        top = len(ctx.subgroups) - 1
        for n in range(H):
            if not includes(ctx, PrimePoint(top, n), PrimePoint(0, n + 1)):
                return False, f"I_(C{p ** k},{n}) not in I_(1,{n + 1})"
    # elementary abelian of rank k >= 2: I_{A, n} <= I_{1, n+k-1} fails, n+k holds
    for p, k in ((2, 2), (2, 3), (3, 2)):
        ctx = SpecContext(_group(*([p] * k)), p)
        top = len(ctx.subgroups) - 1
        for n in range(H):
            if includes(ctx, PrimePoint(top, n), PrimePoint(0, n + k - 1)):
                return False, f"I_(C{p}^{k},{n}) in I_(1,{n + k - 1})"
            if not includes(ctx, PrimePoint(top, n), PrimePoint(0, n + k)):
                return False, f"I_(C{p}^{k},{n}) not in I_(1,{n + k})"
    return True, f"{len(cases)} groups, heights 0..{H} and inf"


# ---------------------------------------------------------------------------
# 2


def _membership(F: np.ndarray, subs: np.ndarray, heights: np.ndarray) -> np.ndarray:
    # rows: functions, columns: points (subs[j], heights[j]); n > f(B)
    return heights[None, :] > F[:, subs]


def topology_lattice() -> tuple[bool, str]:
    H = 3
    total = 0
    for orders in ((2,), (2, 2)):
        ctx = SpecContext(_group(*orders), 2)
        fns = enumerate_admissible(ctx, H)
        F = np.array([f.values for f in fns], dtype=float)
        pts = ctx.universe(H)
        subs = np.array([P.sub for P in pts])
        heights = np.array([P.n for P in pts], dtype=float)
        mem = _membership(F, subs, heights)
        cons = [(s, b, r) for s in ctx.keys() for b in ctx.keys()
                if s != b and (r := ctx.toral_rank(s, b)) is not None]
        for i in range(len(fns)):
            for op, setop, name in ((np.minimum, np.logical_or, "min"), (np.maximum, np.logical_and, "max")):
                G = op(F[i][None, :], F)
                for s, b, r in cons:
                    if (G[:, s] > G[:, b] + r).any():
                        j = int(np.argmax(G[:, s] > G[:, b] + r))
                        return False, f"{orders}: {name} of {fns[i]} and {fns[j]} is not admissible"
                if not (_membership(G, subs, heights) == setop(mem[i][None, :], mem)).all():
                    return False, f"{orders}: V_{name} differs from the set operation at f = {fns[i]}"
        total += len(fns) ** 2
        family = [ClosedSet(f) for f in fns]
        if not (order_from_closed_sets(pts, family) == inclusion_matrix(ctx, pts)).all():
            return False, f"{orders}: specialization order differs from includes()"
    return True, f"{total} pairs of admissible functions"


# ---------------------------------------------------------------------------
# 3


def circle_functions(prime: int, values, max_exceptions: int = 2, max_index: int = 12):
    """Admissible locally constant functions on Sub(T) with few exceptions."""
    T = CircleContext(prime)
    for g in values:
        for k in range(max_exceptions + 1):
            for ms in itertools.combinations(range(1, max_index + 1), k):
                for vs in itertools.product([v for v in values if v != g], repeat=k):
                    f = CircleFn(g, g, dict(zip(ms, vs)))
                    if is_admissible(T, f):
                        yield f


def realization_roundtrip() -> tuple[bool, str]:
    H = 3
    count = 0
    for orders, p in (((2,), 2), ((4,), 2), ((2, 2), 2), ((6,), 2), ((6,), 3)):
        ctx = SpecContext(_group(*orders), p)
        for f in enumerate_admissible(ctx, H):
            m = verify_realization(ctx, f, realize(ctx, f))
            if m is not None:
                return False, f"{orders} at p={p}, f={f.values}: {m}"
            count += 1
    values = list(range(-1, H + 1)) + [INF]
    for p in (2, 3):
        T = CircleContext(p)
        for f in circle_functions(p, values):
            m = verify_realization(T, f, realize(T, f))
            if m is not None:
                return False, f"circle at p={p}, f={f}: {m}"
            count += 1
    return True, f"{count} functions realized exactly"


# ---------------------------------------------------------------------------
# 4


def p_typical_engine() -> tuple[bool, str]:
    for p, D, N in ((2, 16, 3), (3, 9, 2)):
        fail = fgl_axioms_check(universal_p_typical(p, D, N))
        if fail is not None:
            return False, f"p-typical law ({p}, {D}, {N}) fails {fail.axiom} at {fail.witness}"
    for p, n in ((2, 1), (2, 2), (3, 1)):
        D = p ** n
        N = n
        while p ** (N + 1) <= D:
            N += 1
        F = reduce_mod_In(universal_p_typical(p, D, N), n)
        s = n_series(F, p)
        low = s.low_degree()
        if low != p ** n:
            return False, f"[{p}] mod I_{n}: lowest term in degree {low}, expected {p ** n}"
        ok, why = _unit_times_generator_plus_decomposables(F.ring, s.coeff(low), n)
        if not ok:
            return False, f"[{p}] mod I_{n}: {why}"
    return True, "axioms exact; [p] leads with a unit times v_n"


def _unit_times_generator_plus_decomposables(R: GradedPoly, c, n: int) -> tuple[bool, str]:
    idx = R.names.index(f"v{n}")
    unit_part = None
    for key, a in c.items():
        e = R.exponents(key)
        if sum(e) == 1 and e[idx] == 1:
            unit_part = a
        elif sum(e) < 2:
            return False, f"indecomposable term {R.fmt({key: a})} besides v_{n}"
    if unit_part is None or not R.base.is_unit(unit_part):
        return False, f"coefficient {R.fmt(c)} has no unit multiple of v_{n}"
    return True, ""


# ---------------------------------------------------------------------------
# 5


def psi_and_blueshift() -> tuple[bool, str]:
    p, n = 2, 1
    for k, D in ((1, 4), (2, 8)):
        s = psi(p, n, k, D, top=2)
        if s != psi_by_composition(p, n, k, D, top=2):
            return False, f"psi_(2^{k}): quotient and composition routes disagree"
        R = s.ring
        v1, v2 = R.gen("v1"), R.gen("v2")
        c0 = s.coeff(0)
        q = R.exact_div(c0, v1) if c0 else None
        if q is None or not R.is_unit(q):
            return False, f"psi_(2^{k}) constant term {R.fmt(c0)} is not a unit times v1"
        Rm = GradedPoly(R.base, R.names, inverted=R.inverted, modulo=set(R.modulo) | {"v1"})
        sm = s.change_ring(Rm)
        low = sm.low_degree()
        if low is None:
            return False, f"psi_(2^{k}) vanishes mod v1 through degree {D}"
        lead = sm.coeff(low)
        if not (Rm.is_unit(lead) and Rm.is_monomial(lead)):
            return False, f"psi_(2^{k}) mod v1 leads with {Rm.fmt(lead)}"
        if k == 2:
            v2_cubed = Rm.mul(Rm.mul(Rm.lift(v2, R), Rm.lift(v2, R)), Rm.lift(v2, R))
            if low != 8 or not Rm.eq(lead, v2_cubed):
                return False, f"psi_4 mod v1 leads with {Rm.fmt(lead)} in degree {low}, expected v2^3 in degree 8"
    for triple in ((2, 2, 1), (2, 2, 2), (3, 2, 1)):
        rep = blueshift_report(*triple)
        if rep.height_drop != 1:
            return False, f"blueshift {triple}: {rep}"
    return True, "psi_2, psi_4 normalized; height drops by 1"


# ---------------------------------------------------------------------------
# 6


def gm_c2_level() -> tuple[bool, str]:
    for sign in (1, -1):
        F, e = gm_c2(sign)
        if e != 2 * sign or abs(e) != 2:
            return False, f"gm_c2({sign}) gave e_V = {e}"
    F, e = gm_c2(1)
    vbar = level_vbar(F, LevelData(2, 1, {(0,): 0, (1,): e}))
    R = F.ring
    if vbar.terms != {(0,): R.one()}:
        return False, f"vbar = {vbar}, expected 1"
    # the height one class: coefficient of x^2 in [2](x), read mod 2
    v1 = n_series(F, 2).coeff(2)
    if (vbar.coeff(0) - v1) % 2:
        return False, f"vbar constant {vbar.coeff(0)} differs from v1 = {v1} mod 2"
    return True, "e_V = +-2, vbar = 1 = v1 mod 2"


# ---------------------------------------------------------------------------
# 7


def heights() -> tuple[bool, str]:
    for p in (2, 3):
        r = fgl_height(multiplicative(PrimeField(p), p + 1))
        if r.height != 1:
            return False, f"multiplicative over F_{p}: height {r.height}"
        for n in (1, 2, 3):
            r = fgl_height(honda(p, n, p ** n))
            if r.height != n or r.truncation_limited:
                return False, f"Honda({n}) at p={p}: height {r.height}"
        r = fgl_height(additive(PrimeField(p), 2 * p))
        if r.height != INF or not r.truncation_limited:
            return False, f"additive over F_{p}: {r}"
    if fgl_height(multiplicative(Integers(), 4), 2).height != 0:
        return False, "multiplicative over Z should have height 0"
    return True, "multiplicative 1, Honda n, additive inf (flagged)"


# ---------------------------------------------------------------------------
# 8


def support_properties() -> tuple[bool, str]:
    H = 4
    for orders in ((2, 2), (4,)):
        ctx = SpecContext(_group(*orders), 2, max_height=H)
        pts = ctx.universe(H)
        ts = random_types(ctx, H, 1000, seed=2024)
        supp = [support_of(ctx, t).points(ctx, H) for t in ts]
        for t, S in zip(ts, supp):
            if closure(ctx, S, H).points(ctx, H) != S:
                return False, f"{orders}: support of {t.values} is not closed"
            if S != frozenset(P for P in pts if _type_meets(t[P.sub], P.n)):
                return False, f"{orders}: support of {t.values} disagrees with the pointwise definition"
        for i in range(len(ts)):
            j = (i + 1) % len(ts)
            if support_of(ctx, smash(ts[i], ts[j])).points(ctx, H) != supp[i] & supp[j]:
                return False, f"{orders}: supp of smash is not the intersection at {ts[i].values}, {ts[j].values}"
            if support_of(ctx, wedge(ts[i], ts[j])).points(ctx, H) != supp[i] | supp[j]:
                return False, f"{orders}: supp of wedge is not the union at {ts[i].values}, {ts[j].values}"
        fixed = [_fixed_point_check(ctx, t, S, H) for t, S in zip(ts[:100], supp[:100])]
        if not all(fixed):
            return False, f"{orders}: geometric fixed points do not commute with supports"
        for h in range(H + 1):
            if not balmer_compare(ctx, h).reversed_ok:
                return False, f"{orders}: Balmer comparison fails at H = {h}"
    return True, "1000 types each on C2xC2 and C4; order reversal through H = 4"


def _type_meets(v, n) -> bool:
    from .support import TRIVIAL

    return v is not TRIVIAL and n >= v


def _fixed_point_check(ctx: SpecContext, t, S, H) -> bool:
    from .support import fixed_point_lattice

    for b in ctx.keys():
        data = fixed_point_lattice(ctx, b)
        qctx, tq = geom_fixed_points(ctx, t, b)
        Sq = support_of(qctx, tq, H).points(qctx, H)
        # (C/B, n) in supp(Phi^B X)  iff  (C, n) in supp(X), for C >= B
        pulled = frozenset(PrimePoint(i, P.n) for i, c in enumerate(data.lift)
                           for P in S if P.sub == c)
        if Sq != pulled:
            return False
    return True


# ---------------------------------------------------------------------------
# 9


def cross_prime() -> tuple[bool, str]:
    A = _group(6)
    subs = enumerate_subgroups(A)
    heights = list(range(6)) + [INF]
    checked = 0
    ctxs = {q: SpecContext(A, q) for q in (2, 3)}
    for B, B2 in itertools.product(subs, repeat=2):
        for p, q in itertools.permutations((2, 3)):
            for n, n2 in itertools.product(heights, repeat=2):
                got = includes_crossprime(A, (B, p, n), (B2, q, n2))
                if n >= 1:
                    if got:
                        return False, f"accepted I_({B.name()},{p},{n}) <= I_({B2.name()},{q},{n2})"
                else:
                    ctx = ctxs[q]
                    want = includes(ctx, PrimePoint(ctx.index(B), 0), PrimePoint(ctx.index(B2), n2))
                    if got != want:
                        return False, f"height 0 at {B.name()}, {B2.name()} ({p} vs {q}, n'={n2})"
                checked += 1
        for p, q in itertools.permutations((2, 3)):
            if not (includes_crossprime(A, (B, p, 0), (B, q, 0))
                    and includes_crossprime(A, (B, q, 0), (B, p, 0))):
                return False, f"I_({B.name()},{p},0) and I_({B.name()},{q},0) not identified"
    return True, f"{checked} cross-prime pairs on C6"


CRITERIA = [
    Criterion(1, "inclusion law", ("spec", "inclusion"), 5, inclusion_law),
    Criterion(2, "topology lattice", ("spec", "topology"), 30, topology_lattice),
    Criterion(3, "realization roundtrip", ("witness", "realization"), 60, realization_roundtrip),
    Criterion(4, "p-typical engine", ("fgl", "series"), 60, p_typical_engine),
    Criterion(5, "psi and blueshift", ("fgl", "series", "blueshift"), 60, psi_and_blueshift),
    Criterion(6, "multiplicative C2 level", ("fgl", "series", "level"), 1, gm_c2_level),
    Criterion(7, "heights", ("fgl", "series", "height"), 5, heights),
    Criterion(8, "support properties", ("support",), 30, support_properties),
    Criterion(9, "cross-prime", ("spec", "crossprime"), 5, cross_prime),
]


def select(pattern: str | None) -> list[Criterion]:
    """Criteria whose number, tag or name matches the filter (all when empty)."""
    if not pattern:
        return list(CRITERIA)
    pat = pattern.strip().lower()
    return [c for c in CRITERIA if pat == str(c.number) or pat in c.tags or pat in c.name.lower()]


def run_criterion(c: Criterion) -> Outcome:
    start = time.perf_counter()
    try:
        ok, detail = c.fn()
    except Exception as err:  # a crash is a failure of the criterion, reported as such
        ok, detail = False, f"{type(err).__name__}: {err}"
    elapsed = time.perf_counter() - start
    passed = ok and elapsed <= c.budget
    if ok and not passed:
        detail += f"; over the {c.budget:.0f}s budget"
    return Outcome(c.number, c.name, passed, ok, elapsed, c.budget, detail)


def run(pattern: str | None = None) -> list[Outcome]:
    return [run_criterion(c) for c in select(pattern)]
