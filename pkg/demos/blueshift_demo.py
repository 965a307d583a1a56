# psi series of the p-typical law and the height drop on geometric fixed points.
from invprimes.fgl import blueshift_degree, blueshift_report, fgl_height, gm_c2, honda, multiplicative, psi, psi_by_composition
from invprimes.fgl.rings import PrimeField

# %% psi for C_2 on a height 1 theory: constant term v1
s = psi(2, 1, 1, 6)
print(s)
assert s == psi_by_composition(2, 1, 1, 6)

# %% the height drops by one for each (p, n, k) below
for p, n, k in [(2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 2, 1)]:
    r = blueshift_report(p, n, k)
    print(f"p={p} n={n} k={k}: leading degree {blueshift_degree(p, n, k)}, drop {r.height_drop}, lead {r.lowest_coeff_mod_v}")

# %% multiplicative law with a C_2 level: e_V = +-2 and vbar = 1
F, e = gm_c2(1)
print("e_V =", e)

# %% heights of standard laws
print(fgl_height(multiplicative(PrimeField(2), 16)).height, fgl_height(honda(3, 2, 20)).height)
