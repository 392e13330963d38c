"""Finitely generated abelian groups Z^r x Z_m1 x ... x Z_mt.

Elements are plain tuples of ints (free coordinates first, then torsion
residues reduced into ``[0, m_i)``).  Root-of-unity valued maps (characters,
bicharacters, quadratic forms) take values in Q/Z, stored as ``Fraction``
in ``[0, 1)``: the multiplicative value is ``exp(2*pi*i*value)``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

__all__ = [
    "AbGroup",
    "FinSubgroup",
    "Hom",
    "Bicharacter",
    "Character",
    "QuadraticForm",
    "qz",
    "bichar_eval",
    "bichar_radical",
    "symplectic_basis",
    "quotient_group",
    "smith_normal_form",
    "choose_character",
    "quadratic_from_char",
    "subgroups",
]

Elt = tuple


def qz(x) -> Fraction:
    """Reduce a rational number into [0, 1)."""
    return Fraction(x) % 1


def _qz_order(x: Fraction) -> int:
    return qz(x).denominator


@dataclass(frozen=True)
class AbGroup:
    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(m < 2 for m in self.torsion):
            raise ValueError("torsion moduli must be >= 2")

    @classmethod
    def parse(cls, text: str) -> "AbGroup":
        """Parse ``"ZxZ2xZ4"``-style names; ``"1"`` or ``""`` is the trivial group."""
        text = text.strip().replace(" ", "")
        if text in ("", "1", "trivial"):
            return cls()
        free, tors = 0, []
        for part in text.split("x"):
            m = re.fullmatch(r"Z(\d*)(?:\^(\d+))?", part)
            if not m:
                raise ValueError(f"bad group factor {part!r}")
            reps = int(m.group(2) or 1)
            if m.group(1):
                mod = int(m.group(1))
                if mod == 1:
                    continue
                tors.extend([mod] * reps)
            else:
                free += reps
        return cls(free, tuple(tors))

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z{m}" for m in self.torsion]
        return "x".join(parts) or "1"

    @property
    def rank(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group")
        return math.prod(self.torsion)

    @property
    def identity(self) -> Elt:
        return (0,) * self.rank

    def reduce(self, coords) -> Elt:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise ValueError(f"element {coords} has wrong length for {self}")
        r = self.free_rank
        return coords[:r] + tuple(c % m for c, m in zip(coords[r:], self.torsion))

    def elt(self, *coords) -> Elt:
        return self.reduce(coords)

    def add(self, x: Elt, y: Elt) -> Elt:
        return self.reduce(a + b for a, b in zip(x, y))

    def neg(self, x: Elt) -> Elt:
        return self.reduce(-a for a in x)

    def sub(self, x: Elt, y: Elt) -> Elt:
        return self.reduce(a - b for a, b in zip(x, y))

    def smul(self, k: int, x: Elt) -> Elt:
        return self.reduce(k * a for a in x)

    def sum(self, xs) -> Elt:
        acc = [0] * self.rank
        for x in xs:
            for i, a in enumerate(x):
                acc[i] += a
        return self.reduce(acc)

    def contains(self, x) -> bool:
        return len(x) == self.rank and self.reduce(x) == tuple(x)

    def order(self, x: Elt) -> int:
        """Order of x; 0 stands for infinite order."""
        if any(x[: self.free_rank]):
            return 0
        out = 1
        for c, m in zip(x[self.free_rank:], self.torsion):
            out = math.lcm(out, m // math.gcd(c, m))
        return out

    def gens(self) -> list:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def elements(self) -> list:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return [tuple(c) for c in itertools.product(*(range(m) for m in self.torsion))]

    # G# = Z x G, the Z coordinate in front
    def sharp(self) -> "AbGroup":
        return AbGroup(self.free_rank + 1, self.torsion)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data) -> "AbGroup":
        return cls(int(data.get("free_rank", 0)), tuple(data.get("torsion", ())))


class FinSubgroup:
    """Finite subgroup of an AbGroup with an explicit element list.

    ``words[x]`` records exponents of x over ``generators`` so that maps
    given on generators can be evaluated anywhere.
    """

    def __init__(self, ambient: AbGroup, generators=()):
        self.ambient = ambient
        gens = []
        for g in generators:
            g = ambient.reduce(g)
            if ambient.order(g) == 0:
                raise ValueError(f"generator {g} has infinite order")
            gens.append(g)
        self.generators = tuple(gens)
        words = {ambient.identity: (0,) * len(gens)}
        frontier = [ambient.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for i, g in enumerate(gens):
                    y = ambient.add(x, g)
                    if y not in words:
                        w = list(words[x])
                        w[i] += 1
                        words[y] = tuple(w)
                        nxt.append(y)
            frontier = nxt
        self.words = words
        self.elements = tuple(sorted(words))
        self._set = frozenset(words)

    @classmethod
    def from_elements(cls, ambient: AbGroup, elements) -> "FinSubgroup":
        """Subgroup generated by ``elements`` with a greedy small generating set."""
        elements = sorted({ambient.reduce(e) for e in elements})
        elements.sort(key=lambda e: (-ambient.order(e), e))
        sub = cls(ambient, [])
        for e in elements:
            if e not in sub:
                sub = cls(ambient, sub.generators + (e,))
        return sub

    @classmethod
    def trivial(cls, ambient: AbGroup) -> "FinSubgroup":
        return cls(ambient, [])

    def __contains__(self, x) -> bool:
        return tuple(x) in self._set

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, FinSubgroup):
            return NotImplemented
        return self.ambient == other.ambient and self._set == other._set

    def __hash__(self):
        return hash((self.ambient, self._set))

    def __repr__(self):
        return f"FinSubgroup({self.ambient}, gens={list(self.generators)}, order={len(self)})"

    @property
    def is_trivial(self) -> bool:
        return len(self) == 1

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(self.ambient.order(x) for x in self.elements))

    def is_2_elementary(self) -> bool:
        return self.exponent <= 2

    def canonical_rep(self, g: Elt) -> Elt:
        """Lexicographically least element of the coset g + self."""
        g = self.ambient.reduce(g)
        return min(self.ambient.add(g, t) for t in self.elements)

    def is_subgroup_of(self, other: "FinSubgroup") -> bool:
        return self._set <= other._set

    def to_json(self) -> dict:
        return {"generators": [{"coords": list(g)} for g in self.generators]}

    @classmethod
    def from_json(cls, ambient: AbGroup, data) -> "FinSubgroup":
        return cls(ambient, [tuple(g["coords"]) for g in data.get("generators", [])])


def subgroups(G: AbGroup) -> list:
    """All subgroups of a finite group, smallest first."""
    found = {frozenset([G.identity]): FinSubgroup.trivial(G)}
    frontier = list(found.values())
    elements = G.elements()
    while frontier:
        nxt = []
        for H in frontier:
            for g in elements:
                if g in H:
                    continue
                K = FinSubgroup(G, H.generators + (g,))
                key = frozenset(K.elements)
                if key not in found:
                    found[key] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (len(H), H.elements))


@dataclass(frozen=True)
class Hom:
    """Homomorphism of f.g. abelian groups given by images of the standard generators."""

    source: AbGroup
    target: AbGroup
    images: tuple

    def __post_init__(self):
        images = tuple(self.target.reduce(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.rank:
            raise ValueError("need one image per generator")
        for m, img in zip(self.source.torsion, images[self.source.free_rank:]):
            if self.target.smul(m, img) != self.target.identity:
                raise ValueError(
                    f"not a homomorphism: generator of order {m} sent to {img}")

    def __call__(self, x: Elt) -> Elt:
        acc = [0] * self.target.rank
        for c, img in zip(x, self.images):
            if c:
                for i, a in enumerate(img):
                    acc[i] += c * a
        return self.target.reduce(acc)

    @classmethod
    def identity(cls, G: AbGroup) -> "Hom":
        return cls(G, G, tuple(G.gens()))

    @classmethod
    def trivial(cls, G: AbGroup, H: AbGroup | None = None) -> "Hom":
        H = H or AbGroup()
        return cls(G, H, (H.identity,) * G.rank)

    @classmethod
    def drop_z(cls, Gs: AbGroup) -> "Hom":
        """Projection Z x G -> G (forget the leading coordinate)."""
        G = AbGroup(Gs.free_rank - 1, Gs.torsion)
        return cls(Gs, G, (G.identity,) + tuple(G.gens()))

    @classmethod
    def z_part(cls, Gs: AbGroup) -> "Hom":
        """Projection Z x G -> Z."""
        Z = AbGroup(1)
        return cls(Gs, Z, ((1,),) + ((0,),) * (Gs.rank - 1))

    def to_json(self) -> dict:
        return {"target": self.target.to_json(), "images": [{"coords": list(x)} for x in self.images]}


# -- Smith normal form ------------------------------------------------------

def smith_normal_form(A):
    """Return (D, U, V) with U*A*V = D diagonal, U and V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, k):  # row dst += k * row src
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for row in M:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(D, t, i), swap_rows(U, t, i)
        swap_cols(D, t, j), swap_cols(V, t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(D, t, i, -q), add_row(U, t, i, -q)
                    if D[i][t]:
                        swap_rows(D, t, i), swap_rows(U, t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(D, t, j, -q), add_col(V, t, j, -q)
                    if D[t][j]:
                        swap_cols(D, t, j), swap_cols(V, t, j)
                        done = False
            if done:
                # divisibility condition
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % D[t][t]:
                            add_row(D, i, t, 1), add_row(U, i, t, 1)
                            done = False
                            break
                    if not done:
                        break
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return D, U, V


def quotient_group(G: AbGroup, H_gens) -> tuple:
    """Presentation of G / <H_gens> and the projection ``G -> G/H`` as a Hom."""
    N = G.rank
    rels = []
    for i, m in enumerate(G.torsion):
        row = [0] * N
        row[G.free_rank + i] = m
        rels.append(row)
    for h in H_gens:
        rels.append(list(G.reduce(h)))
    if not rels:
        return G, Hom.identity(G)
    D, _, V = smith_normal_form(rels)
    diag = [D[i][i] if i < len(D) else 0 for i in range(N)]
    free_cols = [j for j in range(N) if diag[j] == 0]
    tors_cols = [j for j in range(N) if diag[j] > 1]
    Q = AbGroup(len(free_cols), tuple(diag[j] for j in tors_cols))
    cols = free_cols + tors_cols
    images = [tuple(V[i][j] for j in cols) for i in range(N)]
    return Q, Hom(G, Q, tuple(images))


# -- bicharacters -----------------------------------------------------------

class Bicharacter:
    """Alternating bicharacter on a finite subgroup T, valued in Q/Z.

    Given by its values on pairs of ``T.generators``; the full table is
    expanded through ``T.words`` and checked for well-definedness.
    """

    def __init__(self, T: FinSubgroup, gen_table):
        self.T = T
        r = len(T.generators)
        gen_table = [[qz(gen_table[i][j]) for j in range(r)] for i in range(r)]
        if len(gen_table) != r:
            raise ValueError("generator table has wrong size")
        self.gen_table = tuple(tuple(row) for row in gen_table)
        table = {}
        for u, wu in T.words.items():
            for v, wv in T.words.items():
                s = Fraction(0)
                for i, a in enumerate(wu):
                    if a:
                        for j, b in enumerate(wv):
                            if b:
                                s += a * b * gen_table[i][j]
                table[u, v] = qz(s)
        self._table = table
        self._check()

    def _check(self):
        T, G = self.T, self.T.ambient
        for x in T.elements:
            for i, g in enumerate(T.generators):
                y = G.add(x, g)
                for w in T.elements:
                    if self._table[y, w] != qz(self._table[x, w] + self._table[g, w]):
                        raise ValueError("bicharacter table is not well defined on T")
                    if self._table[w, y] != qz(self._table[w, x] + self._table[w, g]):
                        raise ValueError("bicharacter table is not well defined on T")
        for u in T.elements:
            if self._table[u, u] != 0:
                raise ValueError("bicharacter is not alternating")

    @classmethod
    def trivial(cls, T: FinSubgroup) -> "Bicharacter":
        r = len(T.generators)
        return cls(T, [[0] * r for _ in range(r)])

    @classmethod
    def from_function(cls, T: FinSubgroup, fn) -> "Bicharacter":
        return cls(T, [[fn(a, b) for b in T.generators] for a in T.generators])

    def __call__(self, u, v) -> Fraction:
        try:
            return self._table[tuple(u), tuple(v)]
        except KeyError:
            raise ValueError(f"{u} or {v} outside the domain of the bicharacter") from None

    def inverse(self) -> "Bicharacter":
        return Bicharacter(self.T, [[-x for x in row] for row in self.gen_table])

    def table_key(self) -> tuple:
        """Hashable full value table, independent of the generating set."""
        return tuple(self._table[u, v] for u in self.T.elements for v in self.T.elements)

    def __eq__(self, other):
        if not isinstance(other, Bicharacter):
            return NotImplemented
        return self.T == other.T and self.table_key() == other.table_key()

    def __hash__(self):
        return hash((self.T, self.table_key()))

    def radical(self) -> FinSubgroup:
        return bichar_radical(self)

    def is_nondegenerate(self) -> bool:
        return bichar_radical(self).is_trivial

    def to_json(self) -> dict:
        return {"gen_table": [[x.numerator, x.denominator] for row in self.gen_table for x in row]}

    @classmethod
    def from_json(cls, T: FinSubgroup, data) -> "Bicharacter":
        flat = [Fraction(int(p), int(q)) for p, q in data["gen_table"]]
        r = len(T.generators)
        if len(flat) != r * r:
            raise ValueError("gen_table size does not match the generators of T")
        return cls(T, [flat[i * r:(i + 1) * r] for i in range(r)])

    def __repr__(self):
        return f"Bicharacter({self.T!r}, {[[str(x) for x in row] for row in self.gen_table]})"


def bichar_eval(beta: Bicharacter, u, v) -> Fraction:
    return beta(u, v)


def bichar_radical(beta: Bicharacter) -> FinSubgroup:
    T = beta.T
    rad = [u for u in T.elements if all(beta(u, v) == 0 for v in T.elements)]
    return FinSubgroup.from_elements(T.ambient, rad)


def symplectic_basis(T: FinSubgroup, beta: Bicharacter) -> list:
    """Split (T, beta) into hyperbolic pairs (u, v, l) with beta(u, v) = 1/l."""
    G = T.ambient
    if not bichar_radical(beta).is_trivial:
        raise ValueError("degenerate bicharacter")
    out = []
    # generators first so that a standard presentation comes back unchanged
    gens = [g for g in T.generators]
    elems = gens + [x for x in T.elements if x not in gens]
    while len(elems) > 1:
        top = max(G.order(x) for x in elems)
        u = next(x for x in elems if G.order(x) == top)
        ell = top
        v = next(w for w in elems if _qz_order(beta(u, w)) == ell)
        k = (beta(u, v) * ell).numerator % ell
        v = G.smul(pow(k, -1, ell), v)
        out.append((u, v, ell))
        elems = [w for w in elems if beta(u, w) == 0 and beta(v, w) == 0]
    return out


# -- characters and quadratic forms -----------------------------------------

@dataclass(frozen=True)
class Character:
    """Character of an AbGroup, trivial on the free generators."""

    group: AbGroup
    gen_values: tuple

    def __post_init__(self):
        vals = tuple(qz(v) for v in self.gen_values)
        object.__setattr__(self, "gen_values", vals)
        G = self.group
        if len(vals) != G.rank:
            raise ValueError("need one value per generator")
        if any(vals[: G.free_rank]):
            raise ValueError("characters are taken trivial on free generators")
        for m, v in zip(G.torsion, vals[G.free_rank:]):
            if qz(m * v) != 0:
                raise ValueError(f"value {v} is not an {m}-th root of unity")

    def __call__(self, x) -> Fraction:
        return qz(sum(c * v for c, v in zip(x, self.gen_values)))

    def sharp(self) -> "Character":
        return Character(self.group.sharp(), (Fraction(0),) + self.gen_values)

    def to_json(self) -> dict:
        return {"gen_values": [[v.numerator, v.denominator] for v in self.gen_values]}

    @classmethod
    def from_json(cls, G: AbGroup, data) -> "Character":
        return cls(G, tuple(Fraction(int(p), int(q)) for p, q in data["gen_values"]))


def choose_character(G: AbGroup, f) -> Character:
    """Lexicographically least character with chi(f) = 1/2."""
    r = G.free_rank
    if any(f[:r]) or G.order(f) != 2:
        raise ValueError("f must be a torsion element of order 2")
    choices = [range(m) for m in G.torsion]
    for ks in itertools.product(*choices):
        vals = (Fraction(0),) * r + tuple(Fraction(k, m) for k, m in zip(ks, G.torsion))
        chi = Character(G, vals)
        if chi(f) == Fraction(1, 2):
            return chi
    raise ValueError("no character separates f")  # unreachable for order-2 f


class QuadraticForm:
    """{0, 1/2}-valued quadratic form on a 2-elementary finite group."""

    def __init__(self, domain: FinSubgroup, values: dict):
        if not domain.is_2_elementary():
            raise ValueError("quadratic forms here need a 2-elementary domain")
        self.domain = domain
        self.values = {tuple(k): qz(v) for k, v in values.items()}
        if set(self.values) != set(domain.elements):
            raise ValueError("quadratic form must be given on every element")
        if any(v not in (0, Fraction(1, 2)) for v in self.values.values()):
            raise ValueError("quadratic form values must lie in {0, 1/2}")

    def __call__(self, t) -> Fraction:
        try:
            return self.values[tuple(t)]
        except KeyError:
            raise ValueError(f"{t} outside the domain of the quadratic form") from None

    def polarization_ok(self, beta: Bicharacter) -> bool:
        G = self.domain.ambient
        return all(
            self(G.add(u, v)) == qz(beta(u, v) + self(u) + self(v))
            for u in self.domain.elements for v in self.domain.elements)


def quadratic_eval(eta: QuadraticForm, t) -> Fraction:
    return eta(t)


def quadratic_from_char(chi: Character, eta_bar: QuadraticForm, T: FinSubgroup, proj: Hom) -> QuadraticForm:
    """eta(t) = chi(t) + eta_bar(proj(t)) on the 2-elementary group T."""
    if not T.is_2_elementary():
        raise ValueError("T must be 2-elementary")
    return QuadraticForm(T, {t: chi(t) + eta_bar(proj(t)) for t in T.elements})
