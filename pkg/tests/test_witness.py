import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invprimes.abgroup import FgAbGroup, Homomorphism, enumerate_subgroups
from invprimes.acceptance import circle_functions
from invprimes.spectrum import INF, AdmissibleFn, CircleContext, CircleFn, SpecContext, enumerate_admissible, is_admissible
from invprimes.witness import (
    EulerTimesV,
    Inflate,
    Lift,
    One,
    Product,
    QKiller,
    Restrict,
    Vn,
    WitnessSet,
    XShift,
    Zero,
    expr_height,
    from_json,
    pair_factor,
    primitive_height,
    realize,
    to_json,
    verify_realization,
    witness_heights,
)


def ctx_of(orders, p=2):
    return SpecContext(FgAbGroup.from_orders(0, list(orders)), p)


def exact(ivs):
    assert all(lo == hi for lo, hi in ivs), ivs
    return tuple(lo for lo, _ in ivs)


def test_xshift_heights():
    for m in range(3):
        ctx = ctx_of([2] * (m + 1))
        h = exact(expr_height(ctx, XShift(m)))
        for s, v in zip(ctx.subgroups, h):
            assert v == m - len(s.structure().torsion)
        assert h[0] == m and h[-1] == -1


def test_euler_on_c2():
    ctx = ctx_of((2,))
    assert exact(expr_height(ctx, EulerTimesV((1,), 3))) == (-1, 3)


def test_constants_and_products():
    ctx = ctx_of((2, 2))
    assert exact(expr_height(ctx, One())) == (INF,) * 5
    assert exact(expr_height(ctx, Vn(INF))) == (INF,) * 5
    assert exact(expr_height(ctx, Product((Zero(), Vn(2))))) == (-1,) * 5
    prod = Product((EulerTimesV((1, 0), 2), EulerTimesV((0, 1), 1)))
    e1, e2 = exact(expr_height(ctx, prod.args[0])), exact(expr_height(ctx, prod.args[1]))
    assert exact(expr_height(ctx, prod)) == tuple(min(a, b) for a, b in zip(e1, e2))


def test_restrict_example():
    # C2 inside C2 x C2 as the first factor
    C2, V = FgAbGroup(0, (2,)), FgAbGroup(0, (2, 2))
    i = Homomorphism(C2, V, ((1, 0),))
    assert exact(expr_height(ctx_of((2,)), Restrict(i, XShift(1)))) == (1, 0)


def test_inflate_example():
    C4, C2 = FgAbGroup(0, (4,)), FgAbGroup(0, (2,))
    q = Homomorphism(C4, C2, ((2,),))
    assert exact(expr_height(ctx_of((4,)), Inflate(q, EulerTimesV((1,), 3)))) == (-1, -1, 3)


def test_qkiller():
    C6, C3 = FgAbGroup(0, (6,)), FgAbGroup(0, (3,))
    g = Homomorphism(C6, C3, ((2,),))
    ctx = ctx_of((6,), 2)
    h = exact(expr_height(ctx, QKiller(3, g, 2)))
    for s, v in zip(ctx.subgroups, h):
        assert v == (-1 if s.structure().order % 3 == 0 else 2)


def test_lift_is_unknown_off_the_subgroup():
    C2, C4 = FgAbGroup(0, (2,)), FgAbGroup(0, (4,))
    i = Homomorphism(C2, C4, ((1,),))
    h = expr_height(ctx_of((4,)), Lift(i, EulerTimesV((1,), 2)))
    assert h[0] == (-1, -1) and h[1] == (2, 2) and h[2] == (-1, INF)


@pytest.mark.parametrize("orders,p", [((2,), 2), ((4,), 2), ((2, 2), 2), ((6,), 2), ((6,), 3), ((8,), 2)])
def test_primitive_heights_are_admissible(orders, p):
    ctx = ctx_of(orders, p)
    for s in ctx.subgroups:
        for v in s.lattice:
            e = EulerTimesV(tuple(v), 2)
            assert is_admissible(ctx, AdmissibleFn(exact(primitive_height(ctx, e))))


def test_realize_examples():
    C2 = ctx_of((2,))
    W = realize(C2, AdmissibleFn((1, 0)))
    assert verify_realization(C2, AdmissibleFn((1, 0)), W) is None
    assert any(isinstance(x, Restrict) and isinstance(x.arg, XShift) and x.arg.m == 1 for x in W.elements)
    assert realize(C2, AdmissibleFn((-1, -1))).elements == (Zero(),)
    assert realize(C2, AdmissibleFn((3, 3))).elements == (Vn(3),)
    assert realize(C2, AdmissibleFn((INF, INF))).elements == (One(),)


def test_verify_detects_mismatch():
    C2 = ctx_of((2,))
    assert verify_realization(C2, AdmissibleFn((0, 0)), WitnessSet(C2.group, 2, (One(),))) is not None
    empty = WitnessSet(C2.group, 2, ())
    assert verify_realization(C2, AdmissibleFn((0, 0)), empty) is not None
    assert verify_realization(C2, AdmissibleFn((-1, -1)), empty) is None
    assert witness_heights(C2, empty) == [(-1, -1), (-1, -1)]


@pytest.mark.parametrize("orders,p", [((2,), 2), ((4,), 2), ((2, 2), 2), ((6,), 2), ((6,), 3), ((3,), 3)])
def test_realize_exhaustive(orders, p):
    ctx = ctx_of(orders, p)
    for f in enumerate_admissible(ctx, 3):
        assert verify_realization(ctx, f, realize(ctx, f)) is None, f


def test_realize_c8_and_c2xc4_sampled():
    for orders in ((8,), (2, 4)):
        ctx = ctx_of(orders)
        fns = enumerate_admissible(ctx, 2)
        for f in fns[:: max(1, len(fns) // 300)]:
            assert verify_realization(ctx, f, realize(ctx, f)) is None, f


def test_pair_factor_contracts():
    ctx = ctx_of((2, 2))
    for f in enumerate_admissible(ctx, 2)[::7]:
        for b, b2 in itertools.permutations(ctx.keys(), 2):
            x = pair_factor(ctx, b, b2, f[b])
            h = expr_height(ctx, x)
            assert h[b] == (f[b], f[b])
            if not ctx.contains(b, b2):
                assert h[b2] == (-1, -1)
            else:
                assert h[b2][1] <= f[b2]


def test_circle_exhaustive_small():
    T = CircleContext(2)
    count = 0
    for f in circle_functions(2, [-1, 0, 1, 2, INF], max_exceptions=2, max_index=8):
        assert verify_realization(T, f, realize(T, f)) is None, f
        count += 1
    assert count > 300


def test_circle_example():
    T = CircleContext(2)
    f = CircleFn(1, 1, {4: 0, 2: 0})
    W = realize(T, f)
    assert verify_realization(T, f, W) is None


expr_leaves = st.sampled_from([Zero(), One(), Vn(1), Vn(INF), EulerTimesV((1, 0), 2), EulerTimesV((0, 1), 0),
                               EulerTimesV((1, 1), 3)])


@given(st.lists(expr_leaves, min_size=1, max_size=4))
def test_product_height_is_pointwise_min_and_admissible(args):
    ctx = ctx_of((2, 2))
    h = exact(expr_height(ctx, Product(tuple(args))))
    parts = [exact(expr_height(ctx, a)) for a in args]
    assert h == tuple(min(col) for col in zip(*parts))
    assert is_admissible(ctx, AdmissibleFn(h))


def test_json_roundtrip():
    ctx = ctx_of((2, 2))
    for f in enumerate_admissible(ctx, 2)[::11]:
        for x in realize(ctx, f).elements:
            assert from_json(to_json(x)) == x
