"""Coefficient rings for truncated power series.

Ring objects are descriptors: elements are plain Python values (ints,
Fractions, tuples for finite fields, dicts for polynomials) and the ring
supplies the arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


class NotDivisible(ArithmeticError):
    """Exact division failed; ``where`` records the offending degree or term."""

    def __init__(self, msg, where=None):
        super().__init__(msg)
        self.where = where


class CoeffRing:
    numeric = False  # elements are ints/Fractions supporting + and *
    characteristic = 0

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        raise NotImplementedError

    def normalize(self, a):
        return a

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def neg(self, a):
        return self.normalize(-a)

    def mul(self, a, b):
        return self.normalize(a * b)

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def exact_div(self, a, b):
        raise NotImplementedError

    def fmt(self, a) -> str:
        return str(a)

    def lift(self, a, src: "CoeffRing"):
        """Map an element of ``src`` into this ring along the evident map."""
        if src == self:
            return a
        if src.numeric and self.numeric:
            return self.from_fraction(Fraction(a))
        raise TypeError(f"no map from {src} to {self}")

    def from_fraction(self, q: Fraction):
        if q.denominator != 1:
            raise NotDivisible(f"{q} is not in {self}")
        return self.from_int(q.numerator)


class Integers(CoeffRing):
    numeric = True

    def from_int(self, n):
        return int(n)

    def is_unit(self, a):
        return a in (1, -1)

    def exact_div(self, a, b):
        if b == 0 or a % b:
            raise NotDivisible(f"{b} does not divide {a}")
        return a // b

    def __eq__(self, other):
        return type(other) is Integers

    def __hash__(self):
        return hash("Z")

    def __repr__(self):
        return "Integers()"

    def to_json(self):
        return {"ring": "Z"}


class Rationals(CoeffRing):
    numeric = True

    def from_int(self, n):
        return int(n)

    def normalize(self, a):
        if isinstance(a, Fraction) and a.denominator == 1:
            return a.numerator
        return a

    def from_fraction(self, q):
        return self.normalize(q)

    def is_unit(self, a):
        return a != 0

    def exact_div(self, a, b):
        if b == 0:
            raise NotDivisible("division by zero")
        return self.normalize(Fraction(a) / b)

    def __eq__(self, other):
        return type(other) is Rationals

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"

    def to_json(self):
        return {"ring": "Q"}


class ZLocal(Rationals):
    """Z localized at p: fractions whose denominator is prime to p."""

    def __init__(self, p: int):
        self.p = p

    def normalize(self, a):
        a = super().normalize(a)
        if isinstance(a, Fraction) and a.denominator % self.p == 0:
            raise NotDivisible(f"{a} is not {self.p}-integral")
        return a

    def is_unit(self, a):
        return a != 0 and Fraction(a).numerator % self.p != 0

    def exact_div(self, a, b):
        if b == 0:
            raise NotDivisible("division by zero")
        q = Fraction(a) / b
        if q.denominator % self.p == 0:
            raise NotDivisible(f"{b} does not divide {a} in Z_({self.p})")
        return Rationals.normalize(self, q)

    def __eq__(self, other):
        return type(other) is ZLocal and other.p == self.p

    def __hash__(self):
        return hash(("Zp", self.p))

    def __repr__(self):
        return f"ZLocal({self.p})"

    def to_json(self):
        return {"ring": "Z_(p)", "p": self.p}


class IntegersModM(CoeffRing):
    numeric = True

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        self.m = m
        self.characteristic = m

    def from_int(self, n):
        return int(n) % self.m

    def normalize(self, a):
        return a % self.m

    def from_fraction(self, q):
        q = Fraction(q)
        try:
            inv = pow(q.denominator, -1, self.m)
        except ValueError:
            raise NotDivisible(f"{q} has no image mod {self.m}") from None
        return q.numerator * inv % self.m

    def is_unit(self, a):
        from math import gcd

        return gcd(a, self.m) == 1

    def exact_div(self, a, b):
        from math import gcd

        if gcd(b, self.m) != 1:
            # b is a zero divisor or zero; accept only the trivial quotient
            raise NotDivisible(f"{b} is not invertible mod {self.m}")
        return a * pow(b, -1, self.m) % self.m

    def __eq__(self, other):
        return type(other) is type(self) and other.m == self.m

    def __hash__(self):
        return hash(("Zm", self.m))

    def __repr__(self):
        return f"{type(self).__name__}({self.m})"

    def to_json(self):
        return {"ring": "Z/m", "m": self.m}


class PrimeField(IntegersModM):
    def __init__(self, p: int):
        super().__init__(p)
        self.p = p

    def fmt(self, a):
        return str(a)

    def to_json(self):
        return {"ring": "F_p", "p": self.p}


def _poly_mod_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree k over F_p (low to high, monic term omitted)."""
    for coeffs in product(range(p), repeat=k):
        f = list(coeffs) + [1]
        if coeffs[0] == 0:
            continue
        if all(_poly_rem(f, list(g) + [1], p) for d in range(1, k // 2 + 1) for g in product(range(p), repeat=d)):
            return tuple(coeffs)
    raise ValueError("no irreducible polynomial found")


def _poly_rem(f, g, p):
    f = list(f)
    while len(f) >= len(g):
        c = f[-1]
        if c:
            s = len(f) - len(g)
            for i, gi in enumerate(g):
                f[s + i] = (f[s + i] - c * gi) % p
        f.pop()
    return any(f)


class FiniteField(CoeffRing):
    """F_{p^k} = F_p[t]/(m(t)) with m the least monic irreducible of degree k."""

    def __init__(self, p: int, k: int):
        self.p, self.k = p, k
        self.characteristic = p
        self.modulus = _poly_mod_irreducible(p, k) if k > 1 else (0,)

    def from_int(self, n):
        return (int(n) % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i, mi in enumerate(self.modulus):
                    prod[d - k + i] -= c * mi
            prod[d] = 0
        return tuple(x % p for x in prod[:k])

    def is_zero(self, a):
        return not any(a)

    def is_unit(self, a):
        return any(a)

    def inverse(self, a):
        if not any(a):
            raise NotDivisible("zero has no inverse")
        # a^(q-2) in the multiplicative group of order q-1
        return self.power(a, self.p ** self.k - 2)

    def power(self, a, e):
        out, base = self.one(), a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def exact_div(self, a, b):
        return self.mul(a, self.inverse(b))

    def lift(self, a, src):
        if src == self:
            return a
        if src.numeric:
            return self.from_int(IntegersModM(self.p).from_fraction(Fraction(a)))
        raise TypeError(f"no map from {src} to {self}")

    def fmt(self, a):
        terms = [f"{c}" if i == 0 else (f"{c}t" if i == 1 else f"{c}t^{i}") for i, c in enumerate(a) if c]
        return "+".join(terms) or "0"

    def __eq__(self, other):
        return type(other) is FiniteField and (other.p, other.k) == (self.p, self.k)

    def __hash__(self):
        return hash(("Fq", self.p, self.k))

    def __repr__(self):
        return f"FiniteField({self.p}, {self.k})"

    def to_json(self):
        return {"ring": "F_q", "p": self.p, "k": self.k}


# ---------------------------------------------------------------------------
# polynomial rings in v_1, v_2, ... with packed monomials

_BITS = 8
_BASE = 1 << _BITS
_HALF = _BASE >> 1


def pack(exps) -> int:
    return sum(e << (_BITS * i) for i, e in enumerate(exps))


def unpack(key: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        d = key % _BASE
        if d >= _HALF:
            d -= _BASE
        out.append(d)
        key = (key - d) >> _BITS
    return tuple(out)


class GradedPoly(CoeffRing):
    """base[v_1, ..., v_N] with some generators inverted and some set to zero.

    ``names`` label the generators; ``inverted`` and ``modulo`` are sets of
    generator names.  Elements are dicts {packed exponent vector: coefficient}.
    """

    def __init__(self, base: CoeffRing, names, inverted=(), modulo=()):
        self.base = base
        self.names = tuple(names)
        self.inverted = frozenset(inverted)
        self.modulo = frozenset(modulo)
        if self.inverted & self.modulo:
            raise ValueError("cannot invert a generator that is set to zero")
        unknown = (self.inverted | self.modulo) - set(self.names)
        if unknown:
            raise ValueError(f"unknown generators {sorted(unknown)}")
        self.characteristic = base.characteristic
        self._killed = [i for i, n in enumerate(self.names) if n in self.modulo]
        self._inv = [i for i, n in enumerate(self.names) if n in self.inverted]

    def __eq__(self, other):
        return (type(other) is GradedPoly and other.base == self.base and other.names == self.names
                and other.inverted == self.inverted and other.modulo == self.modulo)

    def __hash__(self):
        return hash((self.base, self.names, self.inverted, self.modulo))

    def __repr__(self):
        extra = ""
        if self.inverted:
            extra += f", inverted={sorted(self.inverted)}"
        if self.modulo:
            extra += f", modulo={sorted(self.modulo)}"
        return f"GradedPoly({self.base!r}, {list(self.names)}{extra})"

    def to_json(self):
        return {"ring": "poly", "base": self.base.to_json(), "vars": list(self.names),
                "inverted": sorted(self.inverted), "modulo": sorted(self.modulo)}

    # construction

    def gen(self, name: str):
        i = self.names.index(name)
        if name in self.modulo:
            return {}
        return {pack([int(j == i) for j in range(len(self.names))]): self.base.one()}

    def from_int(self, n):
        c = self.base.from_int(n)
        return {} if self.base.is_zero(c) else {0: c}

    def from_fraction(self, q):
        c = self.base.from_fraction(q)
        return {} if self.base.is_zero(c) else {0: c}

    def monomial(self, exps, coeff=None):
        c = self.base.one() if coeff is None else coeff
        return self._clean({pack(exps): c})

    def _clean(self, d: dict) -> dict:
        out = {}
        for k, c in d.items():
            if self.base.numeric:
                c = self.base.normalize(c)
            if self.base.is_zero(c):
                continue
            if self._killed or (len(self._inv) < len(self.names)):
                e = unpack(k, len(self.names))
                if any(e[i] > 0 for i in self._killed):
                    continue
                if any(x < 0 for i, x in enumerate(e) if i not in self._inv):
                    raise ValueError("negative exponent on a generator that is not inverted")
            out[k] = c
        return out

    def lift(self, a, src):
        """Map from ``src`` (a polynomial ring on a prefix/superset of names, or a scalar ring)."""
        if src == self:
            return a
        if not isinstance(src, GradedPoly):
            c = self.base.lift(a, src)
            return {} if self.base.is_zero(c) else {0: c}
        idx = []
        for n in src.names:
            idx.append(self.names.index(n) if n in self.names else None)
        out = {}
        for k, c in a.items():
            e = unpack(k, len(src.names))
            if any(x and idx[i] is None for i, x in enumerate(e)):
                continue  # generators absent from the target map to zero
            new = [0] * len(self.names)
            for i, x in enumerate(e):
                if x:
                    new[idx[i]] = x
            nk = pack(new)
            c2 = self.base.lift(c, src.base)
            out[nk] = self.base.add(out[nk], c2) if nk in out else c2
        return self._clean(out)

    # arithmetic

    def add(self, a, b):
        if not b:
            return a
        if not a:
            return b
        out = dict(a)
        base = self.base
        for k, c in b.items():
            if k in out:
                s = base.add(out[k], c)
                if base.is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return out

    def neg(self, a):
        return {k: self.base.neg(c) for k, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c):
        base = self.base
        out = {}
        for k, x in a.items():
            y = base.mul(x, c)
            if not base.is_zero(y):
                out[k] = y
        return out

    def mul(self, a, b):
        if not a or not b:
            return {}
        out: dict = {}
        base = self.base
        if base.numeric:
            get = out.get
            for ka, ca in a.items():
                for kb, cb in b.items():
                    k = ka + kb
                    out[k] = get(k, 0) + ca * cb
            norm = base.normalize
            return {k: c for k, c in ((k, norm(c)) for k, c in out.items()) if c != 0}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                prod = base.mul(ca, cb)
                out[k] = base.add(out[k], prod) if k in out else prod
        return {k: c for k, c in out.items() if not base.is_zero(c)}

    def is_zero(self, a):
        return not a

    def exponents(self, key: int) -> tuple[int, ...]:
        return unpack(key, len(self.names))

    def is_unit(self, a):
        if len(a) != 1:
            return False
        (k, c), = a.items()
        e = self.exponents(k)
        return self.base.is_unit(c) and all(x == 0 or i in self._inv for i, x in enumerate(e))

    def is_monomial(self, a) -> bool:
        return len(a) == 1

    def exact_div(self, a, b):
        """Exact quotient a/b by leading-term elimination (lex order on exponents)."""
        if not b:
            raise NotDivisible("division by zero")
        lk = max(b, key=lambda k: self.exponents(k))
        le, lc = self.exponents(lk), b[lk]
        q: dict = {}
        rem = dict(a)
        bound = 4 * (1 + max((max(abs(x) for x in self.exponents(k)) for k in list(a) + list(b)), default=0))
        while rem:
            rk = max(rem, key=lambda k: self.exponents(k))
            re = self.exponents(rk)
            diff = [x - y for x, y in zip(re, le)]
            if any(d < 0 and i not in self._inv for i, d in enumerate(diff)) or any(abs(d) > bound for d in diff):
                raise NotDivisible(f"{self.fmt(b)} does not divide {self.fmt(a)}", self.fmt({rk: rem[rk]}))
            c = self.base.exact_div(rem[rk], lc)
            t = {pack(diff): c}
            q = self.add(q, t)
            rem = self.sub(rem, self.mul(t, b))
        return q

    def fmt(self, a) -> str:
        if not a:
            return "0"
        terms = []
        for k in sorted(a, key=lambda k: self.exponents(k)):
            c = a[k]
            e = self.exponents(k)
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(self.names, e) if x)
            cs = self.base.fmt(c)
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}" if cs.lstrip("-").isdigit() else f"({cs})*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def substitute(self, a, name: str, value):
        """Set a generator to a scalar value of the base ring (used for specializations)."""
        i = self.names.index(name)
        out: dict = {}
        for k, c in a.items():
            e = list(self.exponents(k))
            x, e[i] = e[i], 0
            if x < 0:
                raise ValueError("cannot substitute into an inverted generator")
            c2 = c
            for _ in range(x):
                c2 = self.base.mul(c2, value)
            nk = pack(e)
            out[nk] = self.base.add(out[nk], c2) if nk in out else c2
        return {k: c for k, c in out.items() if not self.base.is_zero(c)}


def ring_from_json(d: dict) -> CoeffRing:
    kind = d["ring"]
    if kind == "Z":
        return Integers()
    if kind == "Q":
        return Rationals()
    if kind == "Z_(p)":
        return ZLocal(d["p"])
    if kind == "Z/m":
        return IntegersModM(d["m"])
    if kind == "F_p":
        return PrimeField(d["p"])
    if kind == "F_q":
        return FiniteField(d["p"], d["k"])
    if kind == "poly":
        return GradedPoly(ring_from_json(d["base"]), d["vars"], d.get("inverted", ()), d.get("modulo", ()))
    raise ValueError(f"unknown ring {kind!r}")


def encode_elem(R: CoeffRing, a):
    """JSON form of a ring element: strings for scalars, term lists for polynomials."""
    if isinstance(R, GradedPoly):
        return [{"exp": list(R.exponents(k)), "coeff": encode_elem(R.base, c)}
                for k, c in sorted(a.items(), key=lambda kc: R.exponents(kc[0]))]
    if isinstance(R, FiniteField):
        return [str(x) for x in a]
    return str(a)


def decode_elem(R: CoeffRing, d):
    if isinstance(R, GradedPoly):
        return R._clean({pack(t["exp"]): decode_elem(R.base, t["coeff"]) for t in d})
    if isinstance(R, FiniteField):
        return tuple(int(x) % R.p for x in d)
    return R.normalize(Fraction(d)) if isinstance(R, Rationals) else R.from_int(int(d))
