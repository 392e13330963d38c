"""Type I / Type II parameters: validation, builders, isomorphism, enumeration.

Conventions: G# = Z x G with the Z coordinate first.  The block i of the
profile carries Z-degree -i in the defining tuple gamma, so the shift a of
the multiplicity function is normalised to 0.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .abgroup import (AbGroup, Bicharacter, Character, FinSubgroup, Hom, QuadraticForm,
                      bichar_radical, choose_character, quadratic_from_char, quotient_group,
                      subgroups, qz)
from .blocktri import BlockProfile, KappaFn, _trace_zero, restrict_grading
from .cyclo import ONE, CycloNum, root_of_unity
from .gradedmat import (DivisionGrading, GradedAlgebra, Mat, build_division, eta_bar_from_division,
                        kron, kronecker_grading)
from .linalg import nullspace

CASES = ("assoc", "lie", "jordan")


# -- parameter records ------------------------------------------------------

@dataclass(frozen=True)
class TypeIParams:
    T: FinSubgroup
    beta: Bicharacter
    kappas: tuple

    type = "I"

    @property
    def group(self) -> AbGroup:
        return self.T.ambient

    def key(self):
        return ("I", self.T.elements, self.beta.table_key(), tuple(k.key() for k in self.kappas))


@dataclass(frozen=True)
class TypeIIParams:
    T: FinSubgroup
    beta: Bicharacter
    g0: tuple
    kappas: tuple

    type = "II"

    @property
    def group(self) -> AbGroup:
        return self.T.ambient

    def key(self):
        return ("II", self.T.elements, self.beta.table_key(), tuple(self.g0),
                tuple(k.key() for k in self.kappas))


@dataclass(frozen=True)
class UTminusParams:
    lie_params: object
    deg_identity: tuple


def kappa_translate(kappa: KappaFn, g) -> KappaFn:
    return kappa.translate(g)


def kappa_bar(kappa: KappaFn) -> KappaFn:
    return kappa.bar()


def params_to_json(p) -> dict:
    if isinstance(p, UTminusParams):
        out = params_to_json(p.lie_params)
        out["deg_identity"] = {"coords": list(p.deg_identity)}
        return out
    out = {"type": p.type, "group": p.group.to_json(), "T": p.T.to_json(),
           "beta": p.beta.to_json(), "kappas": [k.to_json() for k in p.kappas]}
    if p.type == "II":
        out["g0"] = {"coords": list(p.g0)}
    return out


def params_from_json(data, G: AbGroup | None = None):
    if G is None:
        if "group" not in data:
            raise ValueError("params need a group (in the file or passed explicitly)")
        G = AbGroup.from_json(data["group"])
    T = FinSubgroup.from_json(G, data["T"])
    beta = Bicharacter.from_json(T, data["beta"])
    kappas = tuple(KappaFn.from_json(T, k) for k in data["kappas"])
    kind = data.get("type", "I")
    if kind == "I":
        p = TypeIParams(T, beta, kappas)
    elif kind == "II":
        p = TypeIIParams(T, beta, G.reduce(data["g0"]["coords"]), kappas)
    else:
        raise ValueError(f"unknown parameter type {kind!r}")
    if data.get("deg_identity") is not None:
        return UTminusParams(p, G.reduce(data["deg_identity"]["coords"]))
    return p


# -- Type II auxiliary data -------------------------------------------------

@dataclass
class TypeIIData:
    f: tuple
    chi: Character
    Gbar: AbGroup
    pi: Hom
    Tbar: FinSubgroup
    section: dict
    betabar: Bicharacter
    Dbar: DivisionGrading
    etabar: QuadraticForm
    eta: QuadraticForm


@lru_cache(maxsize=256)
def type2_data(T: FinSubgroup, beta: Bicharacter) -> TypeIIData:
    G = T.ambient
    if not T.is_2_elementary():
        raise ValueError("T must be 2-elementary")
    rad = bichar_radical(beta)
    if len(rad) != 2:
        raise ValueError("radical of beta must have order 2")
    f = rad.generators[0]
    chi = choose_character(G, f)
    Gbar, pi = quotient_group(G, [f])
    Tbar = FinSubgroup.from_elements(Gbar, [pi(t) for t in T.elements])
    section = {}
    for t in T.elements:
        section.setdefault(pi(t), t)
    betabar = Bicharacter.from_function(Tbar, lambda a, b: beta(section[a], section[b]))
    Dbar = build_division(Tbar, betabar)
    etabar = eta_bar_from_division(Dbar)
    eta = quadratic_from_char(chi, etabar, T, pi)
    if not eta.polarization_ok(beta):
        raise ValueError("eta does not polarize to beta")
    return TypeIIData(f, chi, Gbar, pi, Tbar, section, betabar, Dbar, etabar, eta)


def distinguished_element(p: TypeIIParams):
    return type2_data(p.T, p.beta).f


# -- validation -------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    errors: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "errors": self.errors}


def validate(params, profile: BlockProfile, case: str) -> ValidationReport:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    if isinstance(params, UTminusParams):
        rep = validate(params.lie_params, profile, "lie")
        if not params.lie_params.group.contains(params.deg_identity):
            rep.errors.append("deg_identity is not an element of G")
        rep.ok = not rep.errors
        return rep
    err = []
    T, beta, kappas = params.T, params.beta, params.kappas
    G = T.ambient
    if beta.T != T:
        err.append("beta is not defined on T")
    if any(k.T != T for k in kappas):
        err.append("kappa functions must live on G/T")
    if len(kappas) != profile.s:
        err.append(f"need {profile.s} kappa functions, got {len(kappas)}")
    if params.type == "I":
        ell = math.isqrt(len(T))
        if ell * ell != len(T):
            err.append("|T| is not a perfect square")
        if not beta.is_nondegenerate():
            err.append("beta is degenerate")
        for i, (k, n_i) in enumerate(zip(kappas, profile.sizes), start=1):
            if len(k) * ell != n_i:
                err.append(f"|kappa_{i}| * sqrt|T| = {len(k) * ell} != n_{i} = {n_i}")
        return ValidationReport(not err, err)
    # Type II
    if case == "assoc":
        err.append("Type II parameters do not occur in the associative case")
    if case == "lie" and profile.n <= 2:
        err.append("Type II Lie gradings need n > 2")
    if not G.contains(params.g0):
        err.append("g0 is not an element of G")
    if not T.is_2_elementary():
        err.append("T is not 2-elementary")
        return ValidationReport(False, err)
    if len(bichar_radical(beta)) != 2:
        err.append("radical of beta is not of order 2")
        return ValidationReport(False, err)
    if not profile.is_symmetric():
        err.append("profile is not symmetric")
    ell = math.isqrt(len(T) // 2)
    if ell * ell != len(T) // 2:
        err.append("|T|/2 is not a perfect square")
    for i, (k, n_i) in enumerate(zip(kappas, profile.sizes), start=1):
        if len(k) * ell != n_i:
            err.append(f"|kappa_{i}| * sqrt(|T|/2) = {len(k) * ell} != n_{i} = {n_i}")
    if err:
        return ValidationReport(False, err)
    s, g0 = profile.s, params.g0
    for i in range(1, s + 1):
        ki, kj = kappas[i - 1], kappas[s - i]
        cosets = set(ki.support()) | {T.canonical_rep(G.sub(G.neg(g0), x)) for x in kj.support()}
        for x in cosets:
            if ki(x) != kj(G.sub(G.neg(g0), x)):
                err.append(f"condition (i'): kappa_{i}({list(x)}) != kappa_{s - i + 1}(g0^-1 x^-1)")
    if s % 2 == 1:
        eta = type2_data(T, beta).eta
        mid = kappas[s // 2]
        for x, m in mid.entries.items():
            h = G.add(g0, G.smul(2, x))
            if h in T and eta(h) == Fraction(1, 2) and m % 2:
                err.append(f"condition (ii'): kappa_mid({list(x)}) = {m} must be even")
    return ValidationReport(not err, err)


def _require_valid(params, profile, case):
    rep = validate(params, profile, case)
    if not rep.ok:
        raise ValueError("invalid parameters: " + "; ".join(rep.errors))


# -- builders ---------------------------------------------------------------

def carrier_for(case: str) -> str:
    return "ut0" if case == "lie" else "ut"


def typeI_gamma(params, profile: BlockProfile) -> list:
    out = []
    for i, k in enumerate(params.kappas, start=1):
        for rep, m in k.entries.items():
            out.extend([(-i,) + tuple(rep)] * m)
    return out


def build_typeI(params: TypeIParams, profile: BlockProfile, case: str, G: AbGroup | None = None,
                gamma=None, check=True) -> GradedAlgebra:
    if check:
        _require_valid(params, profile, case)
    G = G or params.group
    Gs = G.sharp()
    gamma = typeI_gamma(params, profile) if gamma is None else [Gs.reduce(g) for g in gamma]
    D = build_division(params.T, params.beta)
    A = kronecker_grading(Gs, gamma, D, kind=case)
    B = restrict_grading(A, carrier_for(case), profile, kind=case)
    B.meta = {"type": "I"}
    return B


def fill_gamma(params: TypeIIParams, profile: BlockProfile, data: TypeIIData | None = None):
    """Defining tuple over G# for a Type II grading, with segment lengths p and q."""
    data = data or type2_data(params.T, params.beta)
    T, G, g0, s = params.T, params.group, params.g0, profile.s
    eta = data.eta
    negg0 = G.neg(g0)
    blocks = [None] * s
    for i in range(1, s // 2 + 1):
        left, right = [], []
        for rep, m in params.kappas[i - 1].entries.items():
            left.extend([(-i,) + rep] * m)
            right.extend([(-(s - i + 1),) + G.sub(negg0, rep)] * m)
        blocks[i - 1] = left
        blocks[s - i] = right[::-1]
    p = sum(len(b) for b in blocks[: s // 2])
    q = 0
    if s % 2:
        mid = (s + 1) // 2
        z = (-mid,)
        lt, plus, zero, minus, rt = [], [], [], [], []
        done = set()
        for rep, m in params.kappas[mid - 1].entries.items():
            if rep in done:
                continue
            h = G.add(g0, G.smul(2, rep))
            if h not in T:
                partner = T.canonical_rep(G.sub(negg0, rep))
                done.add(partner)
                lt.extend([z + rep] * m)
                rt.extend([z + G.sub(negg0, rep)] * m)
            elif eta(h) == Fraction(1, 2):
                if m % 2:
                    raise ValueError("odd multiplicity in the eta = -1 branch")
                plus.extend([z + rep] * (m // 2))
                minus.extend([z + rep] * (m // 2))
            else:
                zero.extend([z + rep] * m)
        blocks[mid - 1] = lt + plus + zero + minus[::-1] + rt[::-1]
        p += len(lt)
        q = len(plus)
    gamma = [g for b in blocks for g in b]
    return gamma, p, q


def build_Phi(gamma, p: int, q: int, g0, chi: Character, Dbar: DivisionGrading, pi: Hom) -> Mat:
    """Block matrix Phi in M_k (x) D defining the twisted involution."""
    k, l = len(gamma), Dbar.ell
    if 2 * p + 2 * q > k:
        raise ValueError("segment lengths inconsistent with k")
    G = chi.group
    Id = Mat.identity(l)

    def xblock(j):
        g = gamma[j - 1][1:]
        return Dbar.X[pi(G.add(g0, G.smul(2, g)))]

    out = {}

    def put(r, c, blk):
        for (i, j), v in blk.entries.items():
            out[(r - 1) * l + i, (c - 1) * l + j] = v

    for j in range(1, k + 1):
        g = gamma[j - 1][1:]
        if j <= p or j > k - p:
            put(j, j, Id.scale(root_of_unity(chi(G.neg(g)))))
        elif j <= p + q:
            put(j, j, xblock(j))
        elif j <= k - p - q:
            put(k - j + 1, j, xblock(j))
        else:
            put(j, j, -xblock(j))
    return Mat(k * l, out)


def _eigen_split(mats, images, lam):
    vecs = [(img - m.scale(lam)).entries for m, img in zip(mats, images)]
    out = []
    for comb in nullspace(vecs):
        acc = Mat.zero(mats[0].n)
        for idx, c in sorted(comb.items()):
            acc = acc + mats[idx].scale(c)
        out.append(acc)
    return out


def typeII_sharp_grading(params: TypeIIParams, profile: BlockProfile, case: str, gamma=None,
                         p=None, q=None, g0=None) -> GradedAlgebra:
    """The G#-grading on M_n obtained from the eigen-split (before restriction)."""
    data = type2_data(params.T, params.beta)
    G = params.group
    Gs = G.sharp()
    if gamma is None:
        gamma, p, q = fill_gamma(params, profile, data)
    g0 = params.g0 if g0 is None else g0
    Phi = build_Phi([Gs.reduce(g) for g in gamma], p, q, g0, data.chi, data.Dbar, data.pi)
    Phi_inv = Phi.inverse()
    Gbs = data.Gbar.sharp()
    pis = Hom(Gs, Gbs, ((1,) + data.Gbar.identity,) + tuple((0,) + data.pi(e) for e in G.gens()))
    fs = (0,) + tuple(data.f)
    chis = data.chi.sharp()
    k = len(gamma)
    groups = {}
    for a in range(k):
        for b in range(k):
            base = Gs.sub(gamma[a], gamma[b])
            Eab = Mat.unit(k, a + 1, b + 1)
            for tb in data.Tbar.elements:
                d = Gs.add(base, (0,) + data.section[tb])
                entry = groups.setdefault(pis(d), [d, []])
                entry[1].append(kron(Eab, data.Dbar.X[tb]))
    comps = {}
    sign = -1 if case == "lie" else 1
    for key in sorted(groups):
        g, mats = groups[key]
        images = [Phi_inv @ m.tau() @ Phi for m in mats]
        lam = root_of_unity(chis(g)) * sign
        first = _eigen_split(mats, images, lam)
        second = _eigen_split(mats, images, -lam)
        if len(first) + len(second) != len(mats):
            raise RuntimeError("eigenspace split does not exhaust a component")
        if first:
            comps[g] = first
        if second:
            comps[Gs.add(g, fs)] = second
    return GradedAlgebra(Gs, k * data.Dbar.ell, case, "mn", comps,
                         meta={"type": "II", "f": list(data.f)})


def build_typeII(params: TypeIIParams, profile: BlockProfile, case: str, G: AbGroup | None = None,
                 check=True) -> GradedAlgebra:
    if case not in ("lie", "jordan"):
        raise ValueError("Type II gradings exist only in the Lie and Jordan cases")
    if check:
        _require_valid(params, profile, case)
    A = typeII_sharp_grading(params, profile, case)
    B = restrict_grading(A, carrier_for(case), profile, kind=case)
    B.meta = {"type": "II", "f": list(type2_data(params.T, params.beta).f)}
    return B


def typeII_coarsening_reference(params: TypeIIParams, profile: BlockProfile, case: str) -> GradedAlgebra:
    """Type I grading over G/<f> with (Tbar, betabar, kappa) and the same defining tuple."""
    data = type2_data(params.T, params.beta)
    gamma, _, _ = fill_gamma(params, profile, data)
    gbar = [(g[0],) + data.pi(g[1:]) for g in gamma]
    kappas = tuple(KappaFn(data.Tbar, {data.pi(r): m for r, m in k.entries.items()})
                   for k in params.kappas)
    ref = TypeIParams(data.Tbar, data.betabar, kappas)
    return build_typeI(ref, profile, case, data.Gbar, gamma=gbar, check=False)


def build(params, profile: BlockProfile, case: str) -> GradedAlgebra:
    if isinstance(params, UTminusParams):
        return build_utminus(params, profile)
    if params.type == "I":
        return build_typeI(params, profile, case)
    return build_typeII(params, profile, case)


def build_utminus(params: UTminusParams, profile: BlockProfile) -> GradedAlgebra:
    """Grading on UT with the commutator: the Lie grading on UT_0 plus the identity."""
    lie = build(params.lie_params, profile, "lie")
    comps = {g: list(b) for g, b in lie.components.items()}
    g = lie.group.reduce(params.deg_identity)
    comps.setdefault(g, []).append(Mat.identity(lie.n))
    meta = dict(lie.meta)
    meta["deg_identity"] = list(g)
    return GradedAlgebra(lie.group, lie.n, "lie", "ut", comps, profile.sizes, meta)


# -- isomorphism ------------------------------------------------------------

@dataclass
class IsoVerdict:
    isomorphic: bool
    g: tuple | None = None
    branch: int | None = None
    reason: str = ""

    def to_json(self):
        out = {"isomorphic": self.isomorphic, "reason": self.reason}
        if self.isomorphic:
            out["witness"] = {"g": list(self.g), "branch": self.branch}
        return out


def _translation_candidates(src: KappaFn, dst: KappaFn):
    """g with g + supp(src) hitting a fixed coset of supp(dst), one per coset of T."""
    G = src.T.ambient
    if not dst.entries:
        return [G.identity]
    x0 = next(iter(dst.entries))
    seen, out = set(), []
    for x in src.entries:
        g = src.T.canonical_rep(G.sub(x0, x))
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def _find_translation(src_kappas, dst_kappas, extra=None):
    for g in _translation_candidates(src_kappas[0], dst_kappas[0]):
        if all(k.translate(g) == k2 for k, k2 in zip(src_kappas, dst_kappas)):
            if extra is None or extra(g):
                return g
    return None


def iso_decide(p1, p2, profile: BlockProfile, case: str, n: int | None = None) -> IsoVerdict:
    n = profile.n if n is None else n
    if n != profile.n:
        raise ValueError("profile mismatch")
    if len(p1.kappas) != profile.s or len(p2.kappas) != profile.s:
        raise ValueError("profile mismatch")
    if p1.type != p2.type:
        return IsoVerdict(False, reason="Type I and Type II are never isomorphic")
    if p1.T != p2.T:
        return IsoVerdict(False, reason="different T")
    G = p1.group
    if p1.type == "II":
        if p1.beta != p2.beta:
            return IsoVerdict(False, reason="different beta")
        g = _find_translation(p1.kappas, p2.kappas,
                              lambda g: G.sub(p1.g0, G.smul(2, g)) == p2.g0)
        if g is None:
            return IsoVerdict(False, reason="no translation matches kappa and g0")
        return IsoVerdict(True, g, 1)
    if p1.beta == p2.beta:
        g = _find_translation(p1.kappas, p2.kappas)
        if g is not None:
            return IsoVerdict(True, g, 1)
    if case != "assoc" and n > 2 and p2.beta == p1.beta.inverse():
        flipped = tuple(k.bar() for k in reversed(p1.kappas))
        if all(len(a) == len(b) for a, b in zip(flipped, p2.kappas)):
            g = _find_translation(flipped, p2.kappas)
            if g is not None:
                return IsoVerdict(True, g, 2)
    return IsoVerdict(False, reason="no translation matches")


def iso_utminus(p1: UTminusParams, p2: UTminusParams, profile: BlockProfile) -> bool:
    if tuple(p1.deg_identity) != tuple(p2.deg_identity):
        return False
    return iso_decide(p1.lie_params, p2.lie_params, profile, "lie").isomorphic


def jordan_lie_bridge(J: GradedAlgebra) -> GradedAlgebra:
    """Lie grading on UT_0 matching a library-built Type I/II grading on UT^(+)."""
    if J.n <= 2:
        raise ValueError("the Jordan-Lie bridge needs n > 2")
    kind = J.meta.get("type")
    if kind not in ("I", "II"):
        raise ValueError("grading carries no Type I/II tag")
    comps = J.components
    if kind == "II":
        f = tuple(J.meta["f"])
        comps = {J.group.add(g, f): b for g, b in comps.items()}
    out, traced = {}, 0
    for g in sorted(comps):
        basis, hit = _trace_zero(comps[g])
        traced += hit
        if basis:
            out[g] = basis
    if traced > 1:
        raise ValueError("trace is supported on several components")
    return GradedAlgebra(J.group, J.n, "lie", "ut0", out, J.blocks, dict(J.meta))


# -- enumeration ------------------------------------------------------------

class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    return int(os.environ.get("GRADEDBLOC_BUDGET", "200000"))


def bicharacters(T: FinSubgroup) -> list:
    """All alternating bicharacters on T (deduplicated by value table)."""
    G = T.ambient
    gens = T.generators
    r = len(gens)
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    choices = []
    for i, j in pairs:
        m = math.gcd(G.order(gens[i]), G.order(gens[j]))
        choices.append([Fraction(a, m) for a in range(m)])
    out, seen = [], set()
    for vals in itertools.product(*choices):
        table = [[Fraction(0)] * r for _ in range(r)]
        for (i, j), v in zip(pairs, vals):
            table[i][j] = v
            table[j][i] = -v
        try:
            b = Bicharacter(T, table)
        except ValueError:
            continue
        key = b.table_key()
        if key not in seen:
            seen.add(key)
            out.append(b)
    return out


def coset_reps(G: AbGroup, T: FinSubgroup) -> list:
    return sorted({T.canonical_rep(g) for g in G.elements()})


def _orbit_key(p, profile, case):
    G = p.group
    keys = []
    # reversing the blocks keeps the profile only when it is symmetric
    flip = case != "assoc" and profile.n > 2 and profile.is_symmetric()
    for g in G.elements():
        if p.type == "I":
            q = TypeIParams(p.T, p.beta, tuple(k.translate(g) for k in p.kappas))
            keys.append(q.key())
            if flip:
                flipped = tuple(k.bar().translate(g) for k in reversed(p.kappas))
                keys.append(TypeIParams(p.T, p.beta.inverse(), flipped).key())
        else:
            q = TypeIIParams(p.T, p.beta, G.sub(p.g0, G.smul(2, g)),
                             tuple(k.translate(g) for k in p.kappas))
            keys.append(q.key())
    return min(keys)


def raw_parameters(G: AbGroup, profile: BlockProfile, case: str, budget: int | None = None):
    """Every validated parameter set for (G, profile, case)."""
    if not G.is_finite:
        raise ValueError("enumeration needs a finite group")
    budget = default_budget() if budget is None else budget
    work = 0
    out = []

    def tick(k=1):
        nonlocal work
        work += k
        if work > budget:
            raise BudgetExceeded(f"enumeration budget {budget} exceeded")

    subs = subgroups(G)
    for T in subs:
        ell = math.isqrt(len(T))
        if ell * ell != len(T) or any(x % ell for x in profile.sizes):
            continue
        reps = coset_reps(G, T)
        for beta in bicharacters(T):
            if not beta.is_nondegenerate():
                continue
            per_block = [list(itertools.combinations_with_replacement(reps, x // ell))
                         for x in profile.sizes]
            for combo in itertools.product(*per_block):
                tick()
                kappas = tuple(KappaFn(T, _count(c)) for c in combo)
                p = TypeIParams(T, beta, kappas)
                if validate(p, profile, case).ok:
                    out.append(p)
    if case == "assoc" or (case == "lie" and profile.n <= 2) or not profile.is_symmetric():
        return out
    for T in subs:
        if len(T) < 2 or not T.is_2_elementary():
            continue
        size = len(T) // 2
        ell = math.isqrt(size)
        if ell * ell != size or any(x % ell for x in profile.sizes):
            continue
        reps = coset_reps(G, T)
        for beta in bicharacters(T):
            if len(bichar_radical(beta)) != 2:
                continue
            per_block = [list(itertools.combinations_with_replacement(reps, x // ell))
                         for x in profile.sizes]
            for g0 in G.elements():
                for combo in itertools.product(*per_block):
                    tick()
                    kappas = tuple(KappaFn(T, _count(c)) for c in combo)
                    p = TypeIIParams(T, beta, g0, kappas)
                    if validate(p, profile, case).ok:
                        out.append(p)
    return out


def _count(seq):
    out = {}
    for x in seq:
        out[x] = out.get(x, 0) + 1
    return out


def enumerate_classes(G: AbGroup, profile: BlockProfile, case: str, budget: int | None = None) -> list:
    """One lexicographically least representative per isomorphism class."""
    classes = {}
    for p in raw_parameters(G, profile, case, budget):
        key = _orbit_key(p, profile, case)
        if key == p.key():
            classes[key] = p
        else:
            classes.setdefault(key, None)
    missing = [k for k, v in classes.items() if v is None]
    if missing:
        raise RuntimeError("orbit minimum is not a validated parameter set")
    return [classes[k] for k in sorted(classes)]
