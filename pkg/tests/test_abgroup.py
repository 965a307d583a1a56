import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from invprimes.abgroup import (
    FgAbGroup,
    Homomorphism,
    enumerate_subgroups,
    hermite_rows,
    image_subgroup,
    integer_kernel,
    is_pi0_p_group,
    is_subgroup,
    lattice_coords,
    matmul,
    quotient_group,
    quotient_map,
    rank_p_pi0,
    smith_normal_form,
    subgroup_as_group,
    subgroup_from_generators,
    subgroup_labels,
)


def det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n, out = len(m), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            k = m[r][c] / m[c][c]
            m[r] = [a - k * b for a, b in zip(m[r], m[c])]
    return out


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)))


# ---------------------------------------------------------------------------
# Smith and Hermite forms


def test_snf_identity():
    U, D, V = smith_normal_form([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]]


def test_snf_worked_example():
    _, D, _ = smith_normal_form([[2, 4], [6, 8]])
    assert D == [[2, 0], [0, 4]]


def test_snf_zero():
    _, D, _ = smith_normal_form([[0]])
    assert D == [[0]]


@given(matrices)
def test_snf_factorization(m):
    U, D, V = smith_normal_form(m)
    assert matmul(matmul(U, m), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(m), len(m[0])))]
    assert all(D[i][j] == 0 for i in range(len(m)) for j in range(len(m[0])) if i != j)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz  # zeros trail
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    if len(m) == len(m[0]) and det(m):
        assert abs(det(m)) == abs(det(D))


@given(matrices, st.integers(0, 2**32))
def test_hermite_is_canonical(m, seed):
    width = len(m[0])
    base = hermite_rows(m, width)
    # unimodular row operations do not change the lattice, hence the form
    import random

    rng = random.Random(seed)
    rows = [list(r) for r in m]
    for _ in range(6):
        i, j = rng.randrange(len(rows)), rng.randrange(len(rows))
        if i != j:
            k = rng.randint(-3, 3)
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    rng.shuffle(rows)
    assert hermite_rows(rows, width) == base
    assert hermite_rows(list(base), width) == base
    for r in m:
        assert lattice_coords(base, r) is not None


@given(matrices)
def test_integer_kernel(m):
    ncols = len(m[0])
    for k in integer_kernel(m, ncols):
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in m)


# ---------------------------------------------------------------------------
# subgroup lattices against the element-set oracle


GROUPS = [(2,), (3,), (4,), (6,), (2, 2), (2, 4), (3, 3), (9,), (2, 6), (4, 4), (2, 2, 2), (8,), (3, 9)]


@pytest.mark.parametrize("orders", GROUPS)
def test_enumeration_matches_brute_force(orders):
    A = FgAbGroup.from_orders(0, orders)
    inv = A.torsion
    subs = enumerate_subgroups(A)
    got = {oracles.members(inv, s.lattice) for s in subs}
    assert len(got) == len(subs)
    assert got == oracles.subgroups(inv)


@pytest.mark.parametrize("orders,count", [((4,), 3), ((2, 2), 5), ((6,), 4), ((2, 4), 8), ((3, 9), 10),
                                          ((2, 2, 2), 16), ((1,), 1)])
def test_subgroup_counts(orders, count):
    # counts frozen from the element-set oracle
    assert len(enumerate_subgroups(FgAbGroup.from_orders(0, orders))) == count


def test_enumeration_order_and_labels():
    subs = enumerate_subgroups(FgAbGroup(0, (2, 2)))
    assert subgroup_labels(subs) == ["1", "C2#0", "C2#1", "C2#2", "C2xC2"]
    assert subs[0] == subs[0].ambient.trivial() and subs[-1] == subs[0].ambient.whole()


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("INVPRIMES_CACHE_DIR", str(tmp_path))
    A = FgAbGroup(0, (2, 4))
    first = enumerate_subgroups(A, use_cache=True)
    assert list(tmp_path.iterdir())
    assert enumerate_subgroups(A, use_cache=True) == first == enumerate_subgroups(A)


@pytest.mark.parametrize("orders", [(2, 2), (4,), (6,)])
def test_subgroup_order_is_reversed_lattice_containment(orders):
    A = FgAbGroup.from_orders(0, orders)
    subs = enumerate_subgroups(A)
    for b1, b2 in itertools.product(subs, repeat=2):
        brute = oracles.members(A.torsion, b1.lattice) <= oracles.members(A.torsion, b2.lattice)
        lattice = all(lattice_coords(b1.lattice, r) is not None for r in b2.lattice)
        assert is_subgroup(b1, b2) == brute == lattice


def test_diagonal_not_in_first_factor():
    A = FgAbGroup(0, (2, 2))
    diag = subgroup_from_generators(A, [(1, 1)])
    first = subgroup_from_generators(A, [(1, 0)])
    assert not is_subgroup(diag, first)
    assert is_subgroup(A.trivial(), A.whole())


def test_generators_examples():
    A = FgAbGroup(0, (2, 2))
    assert subgroup_from_generators(A, []) == A.trivial()
    assert subgroup_from_generators(A, [(1, 0), (0, 1)]) == A.whole()
    C4 = FgAbGroup(0, (4,))
    half = subgroup_from_generators(C4, [(2,)])
    assert half.structure() == FgAbGroup(0, (2,))
    assert oracles.members((4,), half.lattice) == {(0,), (2,)}


@pytest.mark.parametrize("orders", [(2, 2), (4,), (2, 4), (3, 3)])
def test_generators_idempotent(orders):
    A = FgAbGroup.from_orders(0, orders)
    for s in enumerate_subgroups(A):
        gens = sorted(oracles.members(A.torsion, s.lattice))
        assert subgroup_from_generators(A, gens) == s


def test_quotient_examples():
    C4 = FgAbGroup(0, (4,))
    subs = enumerate_subgroups(C4)
    assert quotient_group(subs[1], subs[2]) == FgAbGroup(0, (2,))
    assert quotient_group(subs[1], subs[1]) == FgAbGroup(0, ())
    T = FgAbGroup(1, ())
    for m in (1, 2, 6):
        assert quotient_group(T.subgroup([[m]]), T.whole()) == FgAbGroup(1, ())
    # C_{mk}/C_m = C_k inside the circle
    assert quotient_group(T.subgroup([[3]]), T.subgroup([[12]])) == FgAbGroup(0, (4,))


def test_rank_examples():
    assert rank_p_pi0(FgAbGroup(0, (2, 2, 2)), 2) == 3 and is_pi0_p_group(FgAbGroup(0, (2, 2, 2)), 2)
    assert rank_p_pi0(FgAbGroup(0, (6,)), 2) == 1 and not is_pi0_p_group(FgAbGroup(0, (6,)), 2)
    assert rank_p_pi0(FgAbGroup(2, ()), 3) == 0 and is_pi0_p_group(FgAbGroup(2, ()), 3)


def _all_orders(limit=16):
    # every finite abelian group of order <= limit, as invariant factors
    seen = set()
    for k in range(1, 5):
        for orders in itertools.product(range(2, limit + 1), repeat=k):
            n = 1
            for d in orders:
                n *= d
            if n <= limit:
                seen.add(FgAbGroup.from_orders(0, orders))
    return sorted(seen, key=lambda g: (g.order, g.torsion))


@pytest.mark.parametrize("A", _all_orders(), ids=lambda g: g.name())
def test_quotient_by_trivial_is_whole(A):
    assert quotient_group(A.trivial(), A.whole()) == A
    Q, _ = quotient_map(A.trivial())
    assert Q == A
    G, _ = subgroup_as_group(A.whole())
    assert G == A


@pytest.mark.parametrize("orders", [(2, 4), (2, 2, 2), (3, 9), (2, 6)])
def test_rank_subadditive_along_chains(orders):
    A = FgAbGroup.from_orders(0, orders)
    subs = enumerate_subgroups(A)
    for p in (2, 3):
        for a, b, c in itertools.product(subs, repeat=3):
            if is_subgroup(a, b) and is_subgroup(b, c):
                r = lambda x, y: rank_p_pi0(quotient_group(x, y), p)  # noqa: E731
                assert r(a, c) <= r(a, b) + r(b, c)


@pytest.mark.parametrize("orders", [(2, 2), (4,), (2, 4), (6,)])
def test_rank_matches_oracle(orders):
    A = FgAbGroup.from_orders(0, orders)
    subs = enumerate_subgroups(A)
    for small, big in itertools.product(subs, repeat=2):
        if not is_subgroup(small, big):
            continue
        S, B = (oracles.members(A.torsion, s.lattice) for s in (small, big))
        for p in (2, 3):
            Q = quotient_group(small, big)
            assert is_pi0_p_group(Q, p) == oracles.is_p_power(len(B) // len(S), p)
            if is_pi0_p_group(Q, p):
                assert rank_p_pi0(Q, p) == oracles.quotient_p_rank(A.torsion, B, S, p)


def test_images():
    C4, C2 = FgAbGroup(0, (4,)), FgAbGroup(0, (2,))
    q = Homomorphism(C4, C2, ((2,),))  # the character of C2 pulls back to twice the generator
    assert q.is_surjective()
    half = enumerate_subgroups(C4)[1]
    assert image_subgroup(q, half) == C2.trivial()
    assert image_subgroup(q, C4.whole()) == C2.whole()
    V = FgAbGroup(0, (2, 2))
    proj = Homomorphism(V, C2, ((1,), (0,)))
    diag = subgroup_from_generators(V, [(1, 1)])
    assert image_subgroup(proj, diag) == C2.whole()
    ident = Homomorphism(V, V, ((1, 0), (0, 1)))
    assert all(image_subgroup(ident, s) == s for s in enumerate_subgroups(V))


def test_homomorphism_rejects_bad_dual():
    # the dual Z/2 -> Z/4 must send 1 to an element of order 2
    with pytest.raises(ValueError):
        Homomorphism(FgAbGroup(0, (4,)), FgAbGroup(0, (2,)), ((1,),))
    Homomorphism(FgAbGroup(0, (2,)), FgAbGroup(0, (4,)), ((1,),))  # the inclusion


def test_parse_and_json():
    A = FgAbGroup.parse("0;2,2")
    assert A == FgAbGroup(0, (2, 2))
    assert FgAbGroup.parse("1;") == FgAbGroup(1, ())
    assert FgAbGroup.parse("0;4,2") == FgAbGroup(0, (2, 4))
    assert FgAbGroup.from_json(A.to_json()) == A
    for s in enumerate_subgroups(FgAbGroup(0, (2, 4))):
        assert type(s).from_json(s.to_json()) == s
