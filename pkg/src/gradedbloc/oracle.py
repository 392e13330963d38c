"""Brute-force ground truth: graded invariants and explicit isomorphism witnesses.

A witness is a matrix x and a flag; it maps y to x y x^-1, or to x tau(y) x^-1
when the flag is set (the sign of -tau does not change a subspace).  Witness
matrices are assembled from the parameters alone and then checked exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .abgroup import FinSubgroup
from .blocktri import BlockProfile
from .classify import (IsoVerdict, build, build_Phi, fill_gamma, iso_decide, type2_data,
                       typeI_gamma)
from .cyclo import ONE, CycloNum, root_of_unity
from .gradedmat import GradedAlgebra, Mat, _power, build_division, kron, lie_bracket
from .linalg import nullspace

__all__ = [
    "GradedInvariants",
    "Witness",
    "graded_invariants",
    "apply_witness",
    "build_witness",
    "refute_or_confirm",
    "root_of_unity_log",
]


@dataclass(frozen=True)
class GradedInvariants:
    support: frozenset
    dim_multiset: tuple
    identity_component_dim: int
    center_degrees: frozenset
    center_dims: tuple = ()
    filtration: tuple = ()

    def to_json(self):
        return {
            "support": [list(g) for g in sorted(self.support)],
            "dim_multiset": [[list(g), d] for g, d in self.dim_multiset],
            "identity_component_dim": self.identity_component_dim,
            "center_degrees": [list(g) for g in sorted(self.center_degrees)],
            "center_dims": [[list(g), d] for g, d in self.center_dims],
            "filtration": [[list(g), m, d] for g, m, d in self.filtration],
        }

    def differences(self, other) -> list:
        names = ["support", "dim_multiset", "identity_component_dim", "center_degrees",
                 "center_dims", "filtration"]
        return [k for k in names if getattr(self, k) != getattr(other, k)]


def _center_dim(A: GradedAlgebra, g) -> int:
    """Dimension of the commutant of the whole algebra inside A_g."""
    everything = [b for _, b in A.basis()]
    vecs = []
    for x in A.components[g]:
        v = {}
        for idx, y in enumerate(everything):
            for key, c in lie_bracket(x, y).entries.items():
                v[(idx,) + key] = c
        vecs.append(v)
    return len(nullspace(vecs))


def graded_invariants(A: GradedAlgebra, profile: BlockProfile | None = None) -> GradedInvariants:
    profile = profile or BlockProfile(A.blocks or (A.n,))
    bl = profile.block_of()
    dims = tuple(sorted(A.dims().items()))
    e = A.group.identity
    cdims = []
    for g in sorted(A.components):
        d = _center_dim(A, g)
        if d:
            cdims.append((g, d))
    filt = []
    for m in range(1, profile.s):
        for g in sorted(A.components):
            basis = A.components[g]
            # A_g meets J_{>=m} in the relations among the parts below level m
            low = [{k: v for k, v in b.entries.items() if bl[k[1]] - bl[k[0]] < m} for b in basis]
            d = len(nullspace(low))
            if d:
                filt.append((g, m, d))
    return GradedInvariants(
        support=frozenset(A.components),
        dim_multiset=dims,
        identity_component_dim=len(A.components.get(e, ())),
        center_degrees=frozenset(g for g, _ in cdims),
        center_dims=tuple(cdims),
        filtration=tuple(filt),
    )


@dataclass
class Witness:
    x: Mat
    use_minus_tau: bool = False
    relabel: tuple | None = None

    def to_json(self):
        return {"x": self.x.to_json(), "minus_tau": self.use_minus_tau,
                "relabel": {"coords": list(self.relabel)} if self.relabel is not None else None}


def apply_witness(A: GradedAlgebra, B: GradedAlgebra, w: Witness) -> bool:
    """True iff y -> x y x^-1 (after tau when flagged) maps every A_g onto B_{g + relabel}."""
    if A.n != B.n or A.group != B.group:
        return False
    x_inv = w.x.inverse()
    G = A.group
    shift = G.identity if w.relabel is None else G.reduce(w.relabel)
    if A.total_dim() != B.total_dim():
        return False
    for g, basis in A.components.items():
        h = G.add(g, shift)
        if len(B.components.get(h, ())) != len(basis):
            return False
        sp = B.span(h)
        for y in basis:
            z = w.x @ (y.tau() if w.use_minus_tau else y) @ x_inv
            if not sp.contains(z.entries):
                return False
    return True


def root_of_unity_log(c: CycloNum) -> Fraction:
    """q in [0,1) with root_of_unity(q) == c; ValueError if c is not a root of unity."""
    N = 2 * c.order
    for k in range(N):
        if root_of_unity(Fraction(k, N)) == c:
            return Fraction(k, N)
    raise ValueError(f"{c!r} is not a root of unity of order dividing {N}")


def _scalar(m: Mat):
    """c if m == c * identity, else None."""
    c = m.entries.get((1, 1))
    if c is None or len(m.entries) != m.n:
        return None
    if all(m.entries.get((i, i)) == c for i in range(1, m.n + 1)):
        return c
    return None


def _align(src, dst, T: FinSubgroup, allowed=None):
    """Permutation sigma with dst[sigma a] - src[a] in 0 x T; also returns the T-parts."""
    G = T.ambient
    used = set()
    sigma, shifts = {}, {}
    for a, u in enumerate(src):
        for b, v in enumerate(dst):
            if b in used or v[0] != u[0] or (allowed and not allowed(a, b)):
                continue
            t = G.sub(v[1:], u[1:])
            if t in T:
                used.add(b)
                sigma[a], shifts[a] = b, t
                break
        else:
            raise ValueError("defining tuples do not align modulo T")
    return sigma, shifts


def _monomial_sum(k, sigma, blocks) -> Mat:
    out = Mat.zero(k * blocks[0].n)
    for a, b in sigma.items():
        out = out + kron(Mat.unit(k, b + 1, a + 1), blocks[a])
    return out


def _typeI_branch1(p1, p2, g, profile):
    G = p1.group
    gA, gB = typeI_gamma(p1, profile), typeI_gamma(p2, profile)
    src = [(u[0],) + G.add(u[1:], g) for u in gA]
    sigma, shifts = _align(src, gB, p1.T)
    D = build_division(p1.T, p1.beta)
    k = len(gA)
    x = _monomial_sum(k, sigma, {a: D.X[G.neg(t)] for a, t in shifts.items()})
    return Witness(x, False, None)


def _division_iso(DA, DB):
    """y with y tau(X^A_w) y^-1 proportional to X^B_w for every w."""
    T = DA.T
    l = DA.ell
    gens = [w for w in T.generators]
    options = []
    for w in gens:
        m = T.ambient.order(w)
        c1 = next(iter(_power(DA.X[w].tau(), m).entries.values()))
        c2 = next(iter(_power(DB.X[w], m).entries.values()))
        q = root_of_unity_log(c1 / c2)
        options.append([root_of_unity((q + j) / m) for j in range(m)])
    units = [Mat.unit(l, r, c) for r in range(1, l + 1) for c in range(1, l + 1)]
    for lams in itertools.product(*options):
        vecs = []
        for E in units:
            v = {}
            for idx, (w, lam) in enumerate(zip(gens, lams)):
                res = E @ DA.X[w].tau() - (DB.X[w] @ E).scale(lam)
                for key, c in res.entries.items():
                    v[(idx,) + key] = c
            vecs.append(v)
        for comb in nullspace(vecs):
            y = Mat.zero(l)
            for i, c in comb.items():
                y = y + units[i].scale(c)
            if y.is_invertible():
                return y
    raise ValueError("no graded isomorphism between tau(D) and D'")


def _typeI_branch2(p1, p2, g, profile):
    G = p1.group
    s = profile.s
    gA, gB = typeI_gamma(p1, profile), typeI_gamma(p2, profile)
    k = len(gA)
    # tau(A) is the Kronecker grading with reversed, negated tuple and tau(D)
    shift = (-(s + 1),) + tuple(g)
    src = []
    for a in range(k):
        u = gA[k - 1 - a]
        src.append((-u[0] + shift[0],) + G.add(G.neg(u[1:]), g))
    sigma, shifts = _align(src, gB, p1.T)
    DA = build_division(p1.T, p1.beta)
    DB = build_division(p2.T, p2.beta)
    y = _division_iso(DA, DB)
    P = _monomial_sum(k, sigma, {a: DB.X[G.neg(t)] for a, t in shifts.items()})
    x = P @ kron(Mat.identity(k), y)
    return Witness(x, True, None)


def _phi_block(Phi: Mat, k: int, l: int, col: int, row: int) -> Mat:
    out = {}
    r0, c0 = (row - 1) * l, (col - 1) * l
    for (i, j), v in Phi.entries.items():
        if c0 < j <= c0 + l and r0 < i <= r0 + l:
            out[i - r0, j - c0] = v
    return Mat(l, out)


def _typeII(p1, p2, g, profile, case):
    G = p1.group
    data = type2_data(p1.T, p1.beta)
    gA, p, q = fill_gamma(p1, profile, data)
    gB, pB, qB = fill_gamma(p2, profile, data)
    if (p, q) != (pB, qB):
        raise ValueError("segment lengths differ")
    k, l = len(gA), data.Dbar.ell
    gC = [(u[0],) + G.add(u[1:], g) for u in gA]
    g0 = p2.g0
    PhiB = build_Phi(gB, p, q, g0, data.chi, data.Dbar, data.pi)
    PhiC = build_Phi(gC, p, q, g0, data.chi, data.Dbar, data.pi)
    # step 1: A -> C only rescales the first p blocks
    c = root_of_unity(data.chi(g))
    x1 = Mat.diag([c] * (p * l) + [ONE] * ((k - p) * l))
    # step 2: realign C with B, respecting the pairing a <-> k - a + 1
    lo, hi = p + q, k - p - q  # 0-based gamma^0 range is [lo, hi)
    mid = lambda a: lo <= a < hi
    T = p1.T
    sigma = {}
    free = {b for b in range(k) if not mid(b) and b < k - 1 - b}
    for a in range(k):
        if mid(a) or a > k - 1 - a:
            continue
        ia = k - 1 - a
        for b in sorted(free):
            ib = k - 1 - b
            if _same_coset(gC[a], gB[b], T) and _same_coset(gC[ia], gB[ib], T):
                sigma[a], sigma[ia] = b, ib
            elif _same_coset(gC[a], gB[ib], T) and _same_coset(gC[ia], gB[b], T):
                sigma[a], sigma[ia] = ib, b
            else:
                continue
            free.discard(b)
            break
        else:
            raise ValueError("paired positions do not align")
    msrc = [a for a in range(lo, hi)]
    used = set()
    for a in msrc:
        b = next((b for b in range(lo, hi) if b not in used and _same_coset(gC[a], gB[b], T)), None)
        if b is None:
            raise ValueError("middle positions do not align")
        used.add(b)
        sigma[a] = b
    w = {a: data.pi(G.neg(G.sub(gB[sigma[a]][1:], gC[a][1:]))) for a in range(k)}
    X = {a: data.Dbar.X[w[a]] for a in range(k)}

    def row_of(j):  # block row holding the nonzero block of Phi in column j (0-based)
        return k - 1 - j if mid(j) else j

    svals = {}
    for j in range(k):
        a = j if mid(j) else k - 1 - j
        FB = _phi_block(PhiB, k, l, sigma[j] + 1, row_of(sigma[j]) + 1)
        FC = _phi_block(PhiC, k, l, j + 1, row_of(j) + 1)
        M = X[a].tau() @ FB @ X[j] @ FC.inverse()
        sv = _scalar(M)
        if sv is None:
            raise ValueError("intertwining block is not scalar")
        svals[j] = sv
    coef = {}
    for j in range(k):
        if mid(j):
            coef[j] = root_of_unity(root_of_unity_log(1 / svals[j]) / 2)
        elif j < k - 1 - j:
            if svals[j] != svals[k - 1 - j]:
                raise ValueError("paired scalars disagree")
            coef[j] = 1 / svals[j]
            coef[k - 1 - j] = ONE
    x2 = _monomial_sum(k, sigma, {a: X[a].scale(coef[a]) for a in range(k)})
    return Witness(x2 @ x1, False, None)


def _same_coset(u, v, T):
    G = T.ambient
    return u[0] == v[0] and G.sub(v[1:], u[1:]) in T


def build_witness(p1, p2, profile: BlockProfile, case: str, verdict: IsoVerdict | None = None) -> Witness:
    verdict = verdict or iso_decide(p1, p2, profile, case)
    if not verdict.isomorphic:
        raise ValueError("parameters are not isomorphic")
    if p1.type == "II":
        return _typeII(p1, p2, verdict.g, profile, case)
    if verdict.branch == 2:
        return _typeI_branch2(p1, p2, verdict.g, profile)
    return _typeI_branch1(p1, p2, verdict.g, profile)


@dataclass
class Evidence:
    verdict_agrees: bool
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"verdict_agrees": self.verdict_agrees, "evidence": self.evidence}


def refute_or_confirm(p1, p2, profile: BlockProfile, case: str) -> Evidence:
    verdict = iso_decide(p1, p2, profile, case)
    A, B = build(p1, profile, case), build(p2, profile, case)
    if verdict.isomorphic:
        w = build_witness(p1, p2, profile, case, verdict)
        ok = apply_witness(A, B, w)
        return Evidence(ok, {"verdict": "isomorphic", "g": list(verdict.g),
                             "branch": verdict.branch, "witness": w.to_json(), "confirmed": ok})
    diff = graded_invariants(A, profile).differences(graded_invariants(B, profile))
    if diff:
        return Evidence(True, {"verdict": "non-isomorphic", "obstruction": diff[0], "fields": diff})
    return Evidence(True, {"verdict": "non-isomorphic", "status": "incomplete"})
