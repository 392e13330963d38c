"""Upper block-triangular carriers and their block diagonals J_m."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .abgroup import AbGroup, FinSubgroup, Hom
from .cyclo import ONE
from .gradedmat import GradedAlgebra, Mat, block_of, build_elementary
from .linalg import EchelonSpan

__all__ = [
    "BlockProfile",
    "KappaFn",
    "jm_indices",
    "natural_Z_tuple",
    "natural_grading",
    "is_admissible_params",
    "carrier_basis",
    "restrict_grading",
    "is_canonical_form",
    "z_degree_supports",
]


@dataclass(frozen=True)
class BlockProfile:
    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(x) for x in self.sizes)
        if not sizes or any(x < 1 for x in sizes):
            raise ValueError("block sizes must be positive and nonempty")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def parse(cls, text) -> "BlockProfile":
        if isinstance(text, str):
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        return cls(tuple(text))

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def s(self) -> int:
        return len(self.sizes)

    def is_symmetric(self) -> bool:
        return self.sizes == self.sizes[::-1]

    def block_of(self) -> list:
        return block_of(self.sizes, self.n)

    def to_json(self):
        return {"blocks": list(self.sizes)}


def jm_indices(profile: BlockProfile, m: int) -> set:
    """Index pairs (i, j) of the m-th block diagonal (negative m below)."""
    if abs(m) >= profile.s:
        return set()
    bl = profile.block_of()
    n = profile.n
    return {(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if bl[j] - bl[i] == m}


def natural_Z_tuple(profile: BlockProfile) -> tuple:
    return tuple(-q for q, size in enumerate(profile.sizes, start=1) for _ in range(size))


def natural_grading(profile: BlockProfile, carrier="ut", kind="assoc") -> GradedAlgebra:
    """The Z-grading of the carrier by block diagonals."""
    # Z is Z x G with G trivial, so the generic restriction applies
    A = build_elementary(AbGroup(1), [(z,) for z in natural_Z_tuple(profile)], kind=kind)
    if carrier == "mn":
        return A
    return restrict_grading(A, carrier, profile, kind=kind, drop_z=False)


class KappaFn:
    """Multiplicity function on G/T, keyed by canonical coset representatives."""

    def __init__(self, T: FinSubgroup, entries=None):
        self.T = T
        G = T.ambient
        acc = {}
        for rep, mult in dict(entries or {}).items():
            mult = int(mult)
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            if mult:
                r = T.canonical_rep(G.reduce(rep))
                acc[r] = acc.get(r, 0) + mult
        self.entries = dict(sorted(acc.items()))

    @classmethod
    def delta(cls, T, g, mult=1) -> "KappaFn":
        return cls(T, {tuple(g): mult})

    def __call__(self, x) -> int:
        return self.entries.get(self.T.canonical_rep(x), 0)

    def __len__(self):
        return sum(self.entries.values())

    size = property(__len__)

    def support(self) -> list:
        return list(self.entries)

    def translate(self, g) -> "KappaFn":
        G = self.T.ambient
        return KappaFn(self.T, {G.add(r, g): m for r, m in self.entries.items()})

    def bar(self) -> "KappaFn":
        G = self.T.ambient
        return KappaFn(self.T, {G.neg(r): m for r, m in self.entries.items()})

    def key(self) -> tuple:
        return tuple(self.entries.items())

    def __eq__(self, other):
        if not isinstance(other, KappaFn):
            return NotImplemented
        return self.T == other.T and self.entries == other.entries

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"KappaFn({self.entries})"

    def to_json(self) -> dict:
        return {"entries": [{"coset_rep": {"coords": list(r)}, "mult": m}
                            for r, m in self.entries.items()]}

    @classmethod
    def from_json(cls, T, data) -> "KappaFn":
        return cls(T, {tuple(e["coset_rep"]["coords"]): int(e["mult"]) for e in data["entries"]})


def is_admissible_params(T: FinSubgroup, beta, kappa: dict, profile: BlockProfile, type2=False):
    """Split a multiplicity function on Z x G/T into block slices.

    ``kappa`` maps ``(z, coset_rep) -> mult``.  Returns ``(a, [kappa_1..kappa_s])``
    with kappa(a - i, x) = kappa_i(x), or None when the shape is wrong.
    """
    zs = sorted({z for (z, _), m in kappa.items() if m})
    s = profile.s
    if len(zs) != s or zs[-1] - zs[0] != s - 1:
        return None
    a = zs[-1] + 1
    size = len(T) // 2 if type2 else len(T)
    ell = math.isqrt(size)
    if ell * ell != size:
        return None
    slices = []
    for i in range(1, s + 1):
        k = KappaFn(T, {rep: m for (z, rep), m in kappa.items() if z == a - i})
        if len(k) * ell != profile.sizes[i - 1]:
            return None
        slices.append(k)
    return a, slices


def carrier_basis(profile: BlockProfile, carrier: str) -> list:
    n = profile.n
    bl = profile.block_of()
    if carrier in ("mn", "sln"):
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    elif carrier in ("ut", "ut0"):
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if bl[i] <= bl[j]]
    else:
        raise ValueError(f"unknown carrier {carrier!r}")
    if carrier in ("mn", "ut"):
        return [Mat.unit(n, i, j) for i, j in pairs]
    out = [Mat.unit(n, i, j) for i, j in pairs if i != j]
    out += [Mat(n, {(i, i): ONE, (i + 1, i + 1): -ONE}) for i in range(1, n)]
    return out


def z_degree_supports(A: GradedAlgebra, profile: BlockProfile) -> dict:
    """Index support of each component of the Z-coarsening (first coordinate)."""
    out = {}
    for g, basis in A.components.items():
        sup = out.setdefault(g[0], set())
        for b in basis:
            sup |= set(b.entries)
    return out


def _trace_zero(basis):
    """Basis of the trace-zero part of span(basis), keeping vectors sparse."""
    traces = [b.trace() for b in basis]
    piv = next((k for k, t in enumerate(traces) if t), None)
    if piv is None:
        return list(basis), False
    v0, t0 = basis[piv], traces[piv]
    out = []
    for k, b in enumerate(basis):
        if k == piv:
            continue
        out.append(b - v0.scale(traces[k] / t0) if traces[k] else b)
    return out, True


def restrict_grading(A: GradedAlgebra, carrier: str, profile: BlockProfile, kind=None,
                     drop_z=True) -> GradedAlgebra:
    """Restrict an admissible Z x G grading on M_n to a carrier, then forget Z."""
    if A.group.free_rank < 1:
        raise ValueError("expected a grading by Z x G")
    if profile.n != A.n:
        raise ValueError("profile size does not match the matrix size")
    kind = kind or A.kind
    for g, basis in A.components.items():
        allowed = jm_indices(profile, g[0])
        for b in basis:
            if not set(b.entries) <= allowed:
                raise ValueError(f"grading is not admissible: Z-degree {g[0]} is not J_{g[0]}")
    keep_lower = carrier in ("mn", "sln")
    comps = {}
    traced = 0
    for g in sorted(A.components):
        if g[0] < 0 and not keep_lower:
            continue
        basis = A.components[g]
        if carrier in ("ut0", "sln"):
            basis, hit = _trace_zero(basis)
            traced += hit
        if basis:
            comps[g] = basis
    if traced > 1:
        raise ValueError("trace is supported on several components")
    group = A.group
    if drop_z:
        proj = Hom.drop_z(A.group)
        group = proj.target
        merged = {}
        for g in sorted(comps):
            merged.setdefault(proj(g), []).extend(comps[g])
        comps = merged
    return GradedAlgebra(group, A.n, kind, carrier, comps, profile.sizes, dict(A.meta))


def is_canonical_form(B: GradedAlgebra, profile: BlockProfile | None = None) -> bool:
    """True iff every J_m is a graded subspace (J_m-parts of basis vectors stay in their component)."""
    profile = profile or BlockProfile(B.blocks or (B.n,))
    bl = profile.block_of()
    for g, basis in B.components.items():
        sp = None
        for b in basis:
            parts = {}
            for (i, j), v in b.entries.items():
                parts.setdefault(bl[j] - bl[i], {})[i, j] = v
            if len(parts) <= 1:
                continue
            if sp is None:
                sp = EchelonSpan(x.entries for x in basis)
            if not all(sp.contains(p) for p in parts.values()):
                return False
    return True
