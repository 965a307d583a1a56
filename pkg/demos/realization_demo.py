# Build explicit witness sets whose vanishing locus is a given closed set.
from invprimes.abgroup import FgAbGroup
from invprimes.spectrum import INF, AdmissibleFn, CircleContext, CircleFn, SpecContext, enumerate_admissible
from invprimes.witness import realize, verify_realization, witness_heights

C2 = SpecContext(FgAbGroup(0, (2,)), 2)

# %% a few boundaries on C_2 and their witnesses
for vals in [(1, 0), (3, 2), (2, INF), (-1, -1), (INF, INF)]:
    f = AdmissibleFn(vals)
    W = realize(C2, f)
    print(vals, "->", ", ".join(map(str, W.elements)))
    assert verify_realization(C2, f, W) is None

# %% heights are intervals; every witness set here is exact
V4 = SpecContext(FgAbGroup(0, (2, 2)), 2)
f = enumerate_admissible(V4, 2)[137]
W = realize(V4, f)
print(f.values)
print(witness_heights(V4, W))

# %% the circle: finitely many exceptional finite subgroups
T = CircleContext(2)
g = CircleFn(1, 1, {4: 0, 2: 0})
Wt = realize(T, g)
for x in Wt.elements:
    print(" ", x)
print("verified:", verify_realization(T, g, Wt) is None)
