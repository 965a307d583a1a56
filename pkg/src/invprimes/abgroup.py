"""Finitely generated abelian groups, their character lattices and closed subgroups.

A compact abelian Lie group A = T^r x C_{d_1} x ... x C_{d_k} is stored through
its character group A* = Z^r + Z/d_1 + ... + Z/d_k, written as Z^m modulo the
relation lattice R spanned by d_i e_{r+i}.  A closed subgroup B is recorded by
its annihilator K_B (the characters trivial on B), given as a lattice L_B with
R <= L_B <= Z^m in row Hermite normal form.  Inclusion reverses:
B1 <= B2 exactly when L_B2 <= L_B1.

>>> A = FgAbGroup(0, (4,))
>>> [len(s.lattice) for s in enumerate_subgroups(A)]
[1, 1, 1]
>>> [quotient_group(s, A.whole()).torsion for s in enumerate_subgroups(A)]
[(4,), (2,), ()]
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

IntMatrix = list[list[int]]

CACHE_ENV = "INVPRIMES_CACHE_DIR"


# ---------------------------------------------------------------------------
# integer linear algebra


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def transpose(a: IntMatrix, ncols: int | None = None) -> IntMatrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D diagonal.

    The diagonal entries are non-negative and each divides the next.  The
    pivot at every stage is the entry of least absolute value, ties broken by
    row-major position, so the transforms are deterministic.

    >>> smith_normal_form([[2, 4], [6, 8]])[1]
    [[2, 0], [0, 4]]
    """
    u, d, v, _ = _snf(m)
    return u, d, v


def _snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    # also returns U^{-1}, maintained alongside U
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [list(r) for r in m]
    u = identity(rows)
    uinv = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]
        for row in uinv:
            row[src] -= c * row[dst]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    t = 0
    while t < min(rows, cols):
        entries = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                entries = [(abs(d[i][t]), i, t) for i in range(t, rows) if d[i][t]]
                entries += [(abs(d[t][j]), t, j) for j in range(t, cols) if d[t][j]]
                _, pi, pj = min(entries)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return u, d, v, uinv


def hermite_rows(vectors: IntMatrix, width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical basis of the lattice spanned by the given rows.

    Row echelon form with positive pivots and entries above each pivot reduced
    into [0, pivot).  Two generating sets span the same lattice exactly when
    their outputs agree.
    """
    rows = [list(r) for r in vectors if any(r)]
    basis: IntMatrix = []
    col = 0
    while rows and col < width:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            reduced = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    reduced.append(r)
                elif any(r):
                    rest.append(r)
            nz = reduced
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        rows = rest
        col += 1
    pivots = [next(j for j, a in enumerate(r) if a) for r in basis]
    for i, (r, pc) in enumerate(zip(basis, pivots)):
        for k in range(i):
            q = basis[k][pc] // r[pc]
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], r)]
    return tuple(tuple(r) for r in basis)


def lattice_coords(basis: tuple[tuple[int, ...], ...], v: list[int] | tuple[int, ...]) -> list[int] | None:
    """Coordinates of v in an echelon basis, or None if v is not in the lattice."""
    v = list(v)
    out = []
    for r in basis:
        pc = next(j for j, a in enumerate(r) if a)
        if any(v[:pc]):
            return None
        c, rem = divmod(v[pc], r[pc])
        if rem:
            return None
        out.append(c)
        if c:
            v = [a - c * b for a, b in zip(v, r)]
    return out if not any(v) else None


def integer_kernel(m: IntMatrix, ncols: int) -> IntMatrix:
    """Basis of {x in Z^ncols : m x = 0}."""
    rows = [list(col) + [int(i == j) for j in range(ncols)] for i, col in enumerate(transpose(m, ncols))]
    if not m:
        return identity(ncols)
    height = len(m)
    ech = hermite_rows(rows, height + ncols)
    return [list(r[height:]) for r in ech if not any(r[:height])]


# ---------------------------------------------------------------------------
# groups, subgroups, homomorphisms


@dataclass(frozen=True)
class FgAbGroup:
    """T^rank x C_{d_1} x ... x C_{d_k} with d_i | d_{i+1} and d_i >= 2."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisor chain")

    @classmethod
    def from_orders(cls, rank: int, orders) -> "FgAbGroup":
        """Normalize an arbitrary list of cyclic orders into invariant factors."""
        orders = [o for o in orders if o != 1]
        if any(o <= 0 for o in orders):
            raise ValueError("cyclic orders must be positive")
        if not orders:
            return cls(rank, ())
        _, d, _ = smith_normal_form([[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)])
        return cls(rank, tuple(d[i][i] for i in range(len(orders)) if d[i][i] != 1))

    @property
    def dim(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def relations(self) -> tuple[tuple[int, ...], ...]:
        m = self.dim
        return tuple(tuple(d if j == self.rank + i else 0 for j in range(m)) for i, d in enumerate(self.torsion))

    def subgroup(self, lattice) -> "Subgroup":
        return Subgroup(self, hermite_rows(list(lattice) + list(self.relations()), self.dim))

    def trivial(self) -> "Subgroup":
        return self.subgroup(identity(self.dim))

    def whole(self) -> "Subgroup":
        return self.subgroup([])

    def name(self) -> str:
        parts = ["T"] * min(self.rank, 1) if self.rank <= 1 else [f"T{self.rank}"]
        parts += [f"C{d}" for d in self.torsion]
        return "x".join(parts) or "1"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "FgAbGroup":
        return cls.from_orders(int(data["rank"]), [int(d) for d in data["torsion"]])

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Parse "r;d1,d2,..." (e.g. "0;2,2" or "1;")."""
        rank, _, tors = text.partition(";")
        orders = [int(t) for t in tors.split(",") if t.strip()]
        return cls.from_orders(int(rank or 0), orders)


@dataclass(frozen=True)
class Subgroup:
    ambient: FgAbGroup
    lattice: tuple[tuple[int, ...], ...]  # HNF basis of K_B inside Z^m, contains the relations

    def contains_character(self, v) -> bool:
        """True if the character v of the ambient group is trivial on this subgroup."""
        return lattice_coords(self.lattice, v) is not None

    def structure(self) -> FgAbGroup:
        return subquotient(_unit_basis(self.ambient.dim), self.lattice)[0]

    def name(self) -> str:
        return self.structure().name()

    def to_json(self) -> dict:
        return {"ambient": self.ambient.to_json(), "lattice": [[str(a) for a in r] for r in self.lattice]}

    @classmethod
    def from_json(cls, data: dict) -> "Subgroup":
        A = FgAbGroup.from_json(data["ambient"])
        return A.subgroup([[int(a) for a in r] for r in data["lattice"]])


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism source -> target, stored through its dual target* -> source*.

    ``dual`` has one column per generator of target*, giving its image in
    source* = Z^{source.dim}.
    """

    source: FgAbGroup
    target: FgAbGroup
    dual: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        dual = tuple(tuple(int(a) for a in r) for r in self.dual)
        object.__setattr__(self, "dual", dual)
        if len(dual) != self.source.dim or any(len(r) != self.target.dim for r in dual):
            raise ValueError("dual matrix has the wrong shape")
        src_rel = self.source.subgroup([]).lattice
        for i, d in enumerate(self.target.torsion):
            image = [d * r[self.target.rank + i] for r in dual]
            if lattice_coords(src_rel, image) is None:
                raise ValueError("dual matrix does not respect the relations")

    def dual_image(self, w) -> list[int]:
        return [sum(a * b for a, b in zip(r, w)) for r in self.dual]

    def is_surjective(self) -> bool:
        pre = _preimage(self, self.source.subgroup([]).lattice)
        return pre == self.target.subgroup([]).lattice

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self o other, where other: X -> self.source."""
        if other.target != self.source:
            raise ValueError("cannot compose")
        dual = matmul([list(r) for r in other.dual], [list(r) for r in self.dual])
        return Homomorphism(other.source, self.target, tuple(tuple(r) for r in dual) or tuple(() for _ in range(other.source.dim)))


def _unit_basis(m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in identity(m))


def _preimage(g: Homomorphism, lattice) -> tuple[tuple[int, ...], ...]:
    # {w in Z^{target.dim} : g* w in lattice}
    mt = g.target.dim
    big = [list(r) + [-b[i] for b in lattice] for i, r in enumerate(g.dual)]
    kern = integer_kernel(big, mt + len(lattice)) if big else identity(mt + len(lattice))
    return hermite_rows([k[:mt] for k in kern] + list(g.target.relations()), mt)


def subquotient(big, small) -> tuple[FgAbGroup, IntMatrix, IntMatrix]:
    """Present the quotient of lattices big/small (small <= big <= Z^m).

    Returns (G, gens, coords): gens[i] is a vector of Z^m lifting the i-th
    standard generator of G, and coords is a matrix turning the big-basis
    coordinates of an element into its G-coordinates.
    """
    s = len(big)
    rel = []
    for r in small:
        c = lattice_coords(big, r)
        if c is None:
            raise ValueError("lattices are not nested")
        rel.append(c)
    if s == 0:
        return FgAbGroup(0, ()), [], []
    if rel:
        u, d, _, uinv = _snf(transpose(rel, s))
        diag = [d[i][i] if i < len(rel) else 0 for i in range(s)]
    else:
        u, uinv, diag = identity(s), identity(s), [0] * s
    free = [i for i in range(s) if diag[i] == 0]
    tors = [i for i in range(s) if diag[i] > 1]
    order = free + tors
    m = len(big[0])
    gens = [[sum(big[k][j] * uinv[k][i] for k in range(s)) for j in range(m)] for i in order]
    coords = [u[i] for i in order]
    return FgAbGroup(len(free), tuple(diag[i] for i in tors)), gens, coords


def is_subgroup(b1: Subgroup, b2: Subgroup) -> bool:
    """B1 <= B2, i.e. K_B2 <= K_B1."""
    _same_ambient(b1, b2)
    return all(lattice_coords(b1.lattice, r) is not None for r in b2.lattice)


def quotient_group(b1: Subgroup, b2: Subgroup) -> FgAbGroup:
    """Isomorphism type of B2/B1 for B1 <= B2 (dual to K_B1/K_B2)."""
    if not is_subgroup(b1, b2):
        raise ValueError("not a subgroup")
    return subquotient(b1.lattice, b2.lattice)[0]


def rank_p_pi0(G: FgAbGroup, p: int) -> int:
    """Number of cyclic factors of pi_0(G) of order divisible by p."""
    return sum(1 for d in G.torsion if d % p == 0)


def is_pi0_p_group(G: FgAbGroup, p: int) -> bool:
    for d in G.torsion:
        while d % p == 0:
            d //= p
        if d != 1:
            return False
    return True


def subgroup_from_generators(A: FgAbGroup, gens) -> Subgroup:
    """Closed subgroup topologically generated by elements of A.

    An element is given by its coordinates: a real number mod 1 for each
    circle factor and an integer mod d_i for each cyclic factor.  Circle
    coordinates must be rational (fractions.Fraction or int).
    """
    from fractions import Fraction

    # character v kills g iff sum v_j g_j / (period_j) is an integer
    periods = [1] * A.rank + list(A.torsion)
    cond = []
    for g in gens:
        vals = [Fraction(x) / p for x, p in zip(g, periods)]
        den = 1
        for x in vals:
            den = den * x.denominator // gcd(den, x.denominator)
        cond.append([int(x * den) for x in vals] + [den])
    m = A.dim
    if not cond:
        return A.trivial()
    # solve sum v_j c_j = den * t for integers v, t
    mat = [row[:m] + [-row[m] if k == i else 0 for k in range(len(cond))] for i, row in enumerate(cond)]
    kern = integer_kernel(mat, m + len(cond))
    return A.subgroup([k[:m] for k in kern])


def _same_ambient(*subs: Subgroup):
    if len({s.ambient for s in subs}) > 1:
        raise ValueError("subgroups live in different groups")


def image_subgroup(g: Homomorphism, b: Subgroup) -> Subgroup:
    """g(B), via K_{g(B)} = (g*)^{-1}(K_B)."""
    if b.ambient != g.source:
        raise ValueError("subgroup is not in the source")
    return Subgroup(g.target, _preimage(g, b.lattice))


def pushforward_subgroup(g: Homomorphism, b: Subgroup) -> Subgroup:
    if not g.is_surjective():
        raise ValueError("homomorphism is not surjective")
    return image_subgroup(g, b)


def preimage_under_inclusion(i: Homomorphism, d: Subgroup) -> Subgroup:
    """For injective i: B -> A and D <= i(B), the subgroup i^{-1}(D) of B.

    Restriction of characters is onto, so K_{i^{-1}D} = i*(K_D).
    """
    if d.ambient != i.target:
        raise ValueError("subgroup is not in the target of the inclusion")
    return i.source.subgroup([i.dual_image(r) for r in d.lattice])


def subgroup_as_group(b: Subgroup) -> tuple[FgAbGroup, Homomorphism]:
    """An abstract group isomorphic to B with its inclusion into the ambient group."""
    A = b.ambient
    G, _, coords = subquotient(_unit_basis(A.dim), b.lattice)
    # restriction A* -> B* sends e_j to column j of coords
    dual = [list(row) for row in coords]
    for i in range(G.rank, G.dim):
        dual[i] = [a % G.torsion[i - G.rank] for a in dual[i]]
    return G, Homomorphism(G, A, tuple(tuple(r) for r in dual))


def quotient_map(b: Subgroup) -> tuple[FgAbGroup, Homomorphism]:
    """The quotient A -> A/B, with (A/B)* = K_B."""
    A = b.ambient
    Q, gens, _ = subquotient(b.lattice, A.relations())
    dual = tuple(tuple(gens[j][i] for j in range(Q.dim)) for i in range(A.dim))
    return Q, Homomorphism(A, Q, dual)


# ---------------------------------------------------------------------------
# enumeration


def enumerate_subgroups(A: FgAbGroup, use_cache: bool = False) -> list[Subgroup]:
    """All subgroups of a finite abelian group, ordered by size then lattice.

    The trivial subgroup comes first and A itself last.
    """
    if A.rank:
        raise ValueError("infinitely many closed subgroups; use the circle lattice")
    if use_cache:
        cached = _cache_load(A)
        if cached is not None:
            return cached
    m = A.dim
    elements = list(itertools.product(*[range(d) for d in A.torsion]))
    seen = {A.whole().lattice}
    # grow annihilators: every subgroup of A* is generated by elements
    frontier = [A.whole().lattice]
    while frontier:
        nxt = []
        for lat in frontier:
            for e in elements:
                if lattice_coords(lat, e) is not None:
                    continue
                new = hermite_rows(list(lat) + [list(e)], m)
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        frontier = nxt
    subs = [Subgroup(A, lat) for lat in seen]
    # larger annihilator means smaller subgroup
    subs.sort(key=lambda s: (_size(s), s.lattice))
    if use_cache:
        _cache_store(A, subs)
    return subs


def _size(b: Subgroup) -> int:
    # |B| = |Z^m / L_B|, the product of the echelon pivots
    out = 1
    for r in b.lattice:
        out *= next(a for a in r if a)
    return out


def subgroup_labels(subs: list[Subgroup]) -> list[str]:
    """Readable labels: isomorphism type, with #i suffixes when ambiguous."""
    names = [s.name() for s in subs]
    counts: dict[str, int] = {}
    for n in names:
        counts[n] = counts.get(n, 0) + 1
    seen: dict[str, int] = {}
    out = []
    for n in names:
        if counts[n] == 1:
            out.append(n)
        else:
            out.append(f"{n}#{seen.get(n, 0)}")
            seen[n] = seen.get(n, 0) + 1
    return out


def _cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "invprimes"))


def _cache_key(A: FgAbGroup) -> str:
    return hashlib.sha256(json.dumps(A.to_json(), sort_keys=True).encode()).hexdigest()[:32]


def _cache_load(A: FgAbGroup) -> list[Subgroup] | None:
    path = _cache_dir() / f"subgroups-{_cache_key(A)}.json"
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    return [Subgroup(A, tuple(tuple(int(a) for a in r) for r in lat)) for lat in data]


def _cache_store(A: FgAbGroup, subs: list[Subgroup]) -> None:
    try:
        d = _cache_dir()
        d.mkdir(parents=True, exist_ok=True)
        (d / f"subgroups-{_cache_key(A)}.json").write_text(json.dumps([[list(r) for r in s.lattice] for s in subs]))
    except OSError:
        pass
