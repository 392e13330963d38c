"""Sparse exact matrices and group gradings on matrix algebras.

Matrices are 1-based sparse maps ``(i, j) -> CycloNum``.  A grading is a
finite map ``degree -> list of basis matrices``; the product used to test the
grading axiom depends on the algebra kind (assoc, lie or jordan).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .abgroup import AbGroup, Bicharacter, FinSubgroup, Hom, QuadraticForm, symplectic_basis, qz
from .cyclo import CycloNum, ONE, ZERO, root_of_unity
from .linalg import EchelonSpan, axpy

KINDS = ("assoc", "lie", "jordan")
CARRIERS = ("mn", "ut", "ut0", "sln")


class Mat:
    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries=None):
        self.n = n
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise IndexError(f"entry ({i},{j}) outside M_{n}")
            v = CycloNum.coerce(v)
            if v:
                clean[i, j] = v
        self.entries = clean

    @classmethod
    def _raw(cls, n, entries):
        m = object.__new__(cls)
        m.n = n
        m.entries = entries
        return m

    @classmethod
    def unit(cls, n, i, j, c=ONE) -> "Mat":
        return cls(n, {(i, j): c})

    @classmethod
    def identity(cls, n) -> "Mat":
        return cls._raw(n, {(i, i): ONE for i in range(1, n + 1)})

    @classmethod
    def zero(cls, n) -> "Mat":
        return cls._raw(n, {})

    @classmethod
    def diag(cls, values) -> "Mat":
        values = list(values)
        return cls(len(values), {(i + 1, i + 1): v for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows) -> "Mat":
        n = len(rows)
        return cls(n, {(i + 1, j + 1): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    def _check(self, other):
        if not isinstance(other, Mat):
            raise TypeError("expected Mat")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return Mat._raw(self.n, axpy(self.entries, ONE, other.entries))

    def __sub__(self, other):
        self._check(other)
        return Mat._raw(self.n, axpy(self.entries, -ONE, other.entries))

    def __neg__(self):
        return Mat._raw(self.n, {k: -v for k, v in self.entries.items()})

    def scale(self, c) -> "Mat":
        c = CycloNum.coerce(c)
        if not c:
            return Mat.zero(self.n)
        return Mat._raw(self.n, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other):
        self._check(other)
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                w = out.get((i, j))
                out[i, j] = a * b if w is None else w + a * b
        return Mat._raw(self.n, {k: v for k, v in out.items() if v})

    def __eq__(self, other):
        return isinstance(other, Mat) and self.n == other.n and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, frozenset(self.entries)))

    def __bool__(self):
        return bool(self.entries)

    def __repr__(self):
        items = ", ".join(f"{k}: {v!r}" for k, v in sorted(self.entries.items()))
        return f"Mat({self.n}, {{{items}}})"

    def trace(self) -> CycloNum:
        out = ZERO
        for (i, j), v in self.entries.items():
            if i == j:
                out = out + v
        return out

    def transpose(self) -> "Mat":
        return Mat._raw(self.n, {(j, i): v for (i, j), v in self.entries.items()})

    def tau(self) -> "Mat":
        n = self.n
        return Mat._raw(n, {(n - j + 1, n - i + 1): v for (i, j), v in self.entries.items()})

    def support(self) -> frozenset:
        return frozenset(self.entries)

    def inverse(self) -> "Mat":
        n = self.n
        rows = [{} for _ in range(n + 1)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        inv = [{i: ONE} if i else {} for i in range(n + 1)]
        for col in range(1, n + 1):
            piv = next((r for r in range(col, n + 1) if rows[r].get(col)), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            rows[col], rows[piv] = rows[piv], rows[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            c = rows[col][col].inverse()
            rows[col] = {k: c * v for k, v in rows[col].items()}
            inv[col] = {k: c * v for k, v in inv[col].items()}
            for r in range(1, n + 1):
                if r != col:
                    c = rows[r].get(col)
                    if c:
                        rows[r] = axpy(rows[r], -c, rows[col])
                        inv[r] = axpy(inv[r], -c, inv[col])
        return Mat._raw(n, {(i, j): v for i in range(1, n + 1) for j, v in inv[i].items()})

    def is_invertible(self) -> bool:
        try:
            self.inverse()
        except ZeroDivisionError:
            return False
        return True

    def to_json(self) -> dict:
        return {"n": self.n,
                "entries": [[i, j, v.to_json()] for (i, j), v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, data) -> "Mat":
        return cls(int(data["n"]), {(int(i), int(j)): CycloNum.from_json(v) for i, j, v in data["entries"]})


def mat_mul(x: Mat, y: Mat) -> Mat:
    return x @ y


def lie_bracket(x: Mat, y: Mat) -> Mat:
    return x @ y - y @ x


def jordan_circ(x: Mat, y: Mat) -> Mat:
    return x @ y + y @ x


def tau_flip(x: Mat) -> Mat:
    return x.tau()


def trace(x: Mat) -> CycloNum:
    return x.trace()


def kron(a: Mat, b: Mat) -> Mat:
    l = b.n
    out = {}
    for (i, j), u in a.entries.items():
        for (r, c), v in b.entries.items():
            out[(i - 1) * l + r, (j - 1) * l + c] = u * v
    return Mat._raw(a.n * l, out)


PRODUCTS = {"assoc": mat_mul, "lie": lie_bracket, "jordan": jordan_circ}


# -- carriers ---------------------------------------------------------------

def block_of(blocks, n) -> list:
    """Block index (1-based) of each row 1..n; blocks None means one block."""
    blocks = tuple(blocks) if blocks else (n,)
    out = [0]
    for q, size in enumerate(blocks, start=1):
        out.extend([q] * size)
    return out


def carrier_dim(carrier: str, n: int, blocks=None) -> int:
    blocks = tuple(blocks) if blocks else (n,)
    if carrier == "mn":
        return n * n
    if carrier == "sln":
        return n * n - 1
    ut = sum(blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i, len(blocks)))
    if carrier == "ut":
        return ut
    if carrier == "ut0":
        return ut - 1
    raise ValueError(f"unknown carrier {carrier!r}")


def in_carrier(x: Mat, carrier: str, blocks=None) -> bool:
    if carrier in ("ut", "ut0"):
        bl = block_of(blocks, x.n)
        if any(bl[i] > bl[j] for i, j in x.entries):
            return False
    if carrier in ("ut0", "sln") and x.trace():
        return False
    return True


# -- graded algebras --------------------------------------------------------

@dataclass
class GradedAlgebra:
    group: AbGroup
    n: int
    kind: str
    carrier: str
    components: dict
    blocks: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.carrier not in CARRIERS:
            raise ValueError(f"unknown carrier {self.carrier!r}")
        self.components = {self.group.reduce(g): list(b) for g, b in self.components.items() if b}
        if self.blocks is not None:
            self.blocks = tuple(self.blocks)
        self._spans = {}

    def product(self, x, y) -> Mat:
        return PRODUCTS[self.kind](x, y)

    def span(self, g) -> EchelonSpan:
        sp = self._spans.get(g)
        if sp is None:
            sp = EchelonSpan(b.entries for b in self.components.get(g, ()))
            self._spans[g] = sp
        return sp

    def support(self) -> set:
        return set(self.components)

    def dims(self) -> dict:
        return {g: len(b) for g, b in self.components.items()}

    def total_dim(self) -> int:
        return sum(len(b) for b in self.components.values())

    def basis(self):
        for g in sorted(self.components):
            for b in self.components[g]:
                yield g, b

    def with_kind(self, kind) -> "GradedAlgebra":
        return GradedAlgebra(self.group, self.n, kind, self.carrier, self.components,
                             self.blocks, dict(self.meta))

    def relabel(self, fn) -> "GradedAlgebra":
        """Apply a map on degrees (must be injective on the support)."""
        comps = {}
        for g, b in self.components.items():
            h = fn(g)
            if h in comps:
                raise ValueError("relabelling is not injective on the support")
            comps[h] = b
        return GradedAlgebra(self.group, self.n, self.kind, self.carrier, comps, self.blocks,
                             dict(self.meta))

    def to_json(self) -> dict:
        carrier = {"kind": self.carrier, "blocks": list(self.blocks) if self.blocks else [self.n]}
        comps = [{"degree": {"coords": list(g)}, "basis": [b.to_json() for b in self.components[g]]}
                 for g in sorted(self.components)]
        out = {"group": self.group.to_json(), "carrier": carrier, "algebra_kind": self.kind,
               "components": comps}
        if self.meta:
            out["meta"] = _meta_json(self.meta)
        return out

    @classmethod
    def from_json(cls, data) -> "GradedAlgebra":
        G = AbGroup.from_json(data["group"])
        comps = {}
        n = None
        for c in data["components"]:
            g = G.reduce(c["degree"]["coords"])
            mats = [Mat.from_json(b) for b in c["basis"]]
            for m in mats:
                n = m.n if n is None else n
                if m.n != n:
                    raise ValueError("basis matrices of different sizes")
            comps.setdefault(g, []).extend(mats)
        blocks = tuple(data["carrier"].get("blocks") or ())
        if n is None:
            n = sum(blocks)
        meta = dict(data.get("meta", {}))
        if "f" in meta and meta["f"] is not None:
            meta["f"] = tuple(meta["f"])
        return cls(G, n, data["algebra_kind"], data["carrier"]["kind"], comps, blocks or None, meta)


def _meta_json(meta):
    out = {}
    for k, v in meta.items():
        if isinstance(v, tuple):
            v = list(v)
        if isinstance(v, (str, int, list, type(None), bool)):
            out[k] = v
    return out


@dataclass
class GradingReport:
    ok: bool
    violations: list

    def to_json(self):
        return {"ok": self.ok, "violations": self.violations}


def verify_grading(A: GradedAlgebra, check_closure=True) -> GradingReport:
    """Exact check of the direct sum decomposition and of A_g A_h in A_{g+h}."""
    viol = []
    G = A.group
    for g, basis in A.components.items():
        for b in basis:
            if b.n != A.n:
                viol.append({"check": "size", "degree": list(g)})
            elif not in_carrier(b, A.carrier, A.blocks):
                viol.append({"check": "carrier", "degree": list(g)})
    total = EchelonSpan()
    for _, b in A.basis():
        if not total.add(b.entries):
            viol.append({"check": "independence", "detail": "basis vectors are linearly dependent"})
            break
    want = carrier_dim(A.carrier, A.n, A.blocks)
    if A.total_dim() != want:
        viol.append({"check": "spanning", "detail": f"total dimension {A.total_dim()} != {want}"})
    if viol or not check_closure:
        return GradingReport(not viol, viol)
    degs = sorted(A.components)
    for g in degs:
        for h in degs:
            target = G.add(g, h)
            sp = A.span(target) if target in A.components else None
            for x in A.components[g]:
                for y in A.components[h]:
                    z = A.product(x, y)
                    if not z:
                        continue
                    if not in_carrier(z, A.carrier, A.blocks):
                        viol.append({"check": "carrier_closure", "degrees": [list(g), list(h)]})
                    elif sp is None or not sp.contains(z.entries):
                        viol.append({"check": "closure", "degrees": [list(g), list(h)],
                                     "target": list(target)})
    return GradingReport(not viol, viol)


def same_components(A: GradedAlgebra, B: GradedAlgebra) -> bool:
    """Equal supports and equal subspaces degree by degree."""
    if A.group != B.group or A.support() != B.support():
        return False
    for g in A.components:
        if len(A.components[g]) != len(B.components[g]):
            return False
        sp = A.span(g)
        if not all(sp.contains(b.entries) for b in B.components[g]):
            return False
    return True


def coarsen(A: GradedAlgebra, alpha: Hom) -> GradedAlgebra:
    if alpha.source != A.group:
        raise ValueError("homomorphism source does not match the grading group")
    comps = {}
    for g in sorted(A.components):
        comps.setdefault(alpha(g), []).extend(A.components[g])
    meta = {k: v for k, v in A.meta.items() if k in ("type",)}
    return GradedAlgebra(alpha.target, A.n, A.kind, A.carrier, comps, A.blocks, meta)


def build_elementary(G: AbGroup, gamma, kind="assoc") -> GradedAlgebra:
    gamma = [G.reduce(g) for g in gamma]
    if not gamma:
        raise ValueError("gamma must be nonempty")
    n = len(gamma)
    comps = {}
    for i in range(n):
        for j in range(n):
            comps.setdefault(G.sub(gamma[i], gamma[j]), []).append(Mat.unit(n, i + 1, j + 1))
    return GradedAlgebra(G, n, kind, "mn", comps, meta={"gamma": [list(g) for g in gamma]})


# -- division gradings ------------------------------------------------------

def _clock(l: int) -> Mat:
    return Mat.diag(root_of_unity(Fraction(j, l)) for j in range(l))


def _shift(l: int) -> Mat:
    return Mat(l, {((j + 1) % l + 1, j + 1): ONE for j in range(l)})


def _power(m: Mat, k: int) -> Mat:
    out = Mat.identity(m.n)
    for _ in range(k):
        out = out @ m
    return out


class DivisionGrading:
    """Graded division algebra M_l with support T and bicharacter beta.

    ``X[t]`` is the distinguished basis element of degree t; X_t is the
    Kronecker product over symplectic pairs of clock^a shift^b.
    """

    def __init__(self, T: FinSubgroup, beta: Bicharacter):
        size = len(T)
        l = math.isqrt(size)
        if l * l != size:
            raise ValueError(f"|T| = {size} is not a perfect square")
        pairs = symplectic_basis(T, beta)
        self.T, self.beta, self.ell, self.pairs = T, beta, l, pairs
        G = T.ambient
        X = {}
        for t in T.elements:
            m = Mat.identity(1)
            for u, v, li in pairs:
                a = (beta(t, v) * li).numerator % li
                b = (beta(u, t) * li).numerator % li
                m = kron(m, _power(_clock(li), a) @ _power(_shift(li), b))
            X[t] = m
        # the pairs generate T, so the map t -> (a_i, b_i) must be injective
        if len({frozenset(x.entries.items()) for x in X.values()}) != size:
            raise ValueError("symplectic data does not generate T")
        self.X = X
        self._inv = {}
        self.group = G

    def inv(self, t) -> Mat:
        m = self._inv.get(t)
        if m is None:
            m = self._inv[t] = self.X[t].inverse()
        return m

    def as_grading(self) -> GradedAlgebra:
        return GradedAlgebra(self.group, self.ell, "assoc", "mn", {t: [x] for t, x in self.X.items()})

    def commutator_ok(self) -> bool:
        one = Mat.identity(self.ell)
        for u in self.T.elements:
            for v in self.T.elements:
                lhs = self.X[u] @ self.X[v] @ self.inv(u) @ self.inv(v)
                if lhs != one.scale(root_of_unity(self.beta(u, v))):
                    return False
        return True


def build_division(T: FinSubgroup, beta: Bicharacter) -> DivisionGrading:
    if not beta.is_nondegenerate():
        raise ValueError("degenerate bicharacter")
    return DivisionGrading(T, beta)


def kronecker_grading(G: AbGroup, gamma, D: DivisionGrading, embed=None, kind="assoc") -> GradedAlgebra:
    """Grading on M_k (x) M_l with E_ab (x) X_t in degree gamma_a - gamma_b + embed(t).

    ``embed`` maps the ambient group of D into G; by default D must already
    live in G, or G must be Z x (ambient of D).
    """
    gamma = [G.reduce(g) for g in gamma]
    if embed is None:
        if D.group == G:
            embed = lambda t: t
        elif G == D.group.sharp():
            embed = lambda t: (0,) + tuple(t)
        else:
            raise ValueError("group mismatch between elementary part and division grading")
    k, l = len(gamma), D.ell
    comps = {}
    for a in range(k):
        for b in range(k):
            ab = Mat.unit(k, a + 1, b + 1)
            base = G.sub(gamma[a], gamma[b])
            for t in D.T.elements:
                comps.setdefault(G.add(base, embed(t)), []).append(kron(ab, D.X[t]))
    return GradedAlgebra(G, k * l, kind, "mn", comps, meta={"gamma": [list(g) for g in gamma]})


def eta_bar_from_division(D: DivisionGrading) -> QuadraticForm:
    """Sign relating tau(X_t) to X_t, as a Q/Z-valued quadratic form on T."""
    vals = {}
    for t, x in D.X.items():
        y = x.tau()
        if y == x:
            vals[t] = Fraction(0)
        elif y == -x:
            vals[t] = Fraction(1, 2)
        else:
            raise ValueError("basis not tau-compatible")
    eta = QuadraticForm(D.T, vals)
    if not eta.polarization_ok(D.beta):
        raise ValueError("tau signs do not polarize to beta")
    return eta
