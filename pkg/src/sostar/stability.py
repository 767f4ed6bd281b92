"""Stability of split SO*(2n)-Higgs bundles and of the auxiliary groups.

Only coordinate subbundles (spans of summands) are enumerated. With pairwise
distinct generic labels this is the decidable core of the theory; repeated
labels downgrade a Stable verdict to StrictlySemistable with a warning.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from . import linear_feasibility as lf
from .curve_model import CurveContext, SplitBundle
from .higgs_core import (
    SOStarHiggsObject, gamma_is_isomorphism, rank_beta, rank_gamma, toledo,
)

STABLE = "Stable"
STRICTLY_SEMISTABLE = "StrictlySemistable"
UNSTABLE = "Unstable"
_SEVERITY = {STABLE: 0, STRICTLY_SEMISTABLE: 1, UNSTABLE: 2}

REPEATED_LABEL_WARNING = ("repeated summand labels: coordinate subbundles may miss "
                          "destabilizing subbundles; Stable downgraded to StrictlySemistable")


class StabilityParameterError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TwoStepFiltration:
    S1: frozenset
    S2: frozenset

    def __post_init__(self):
        object.__setattr__(self, "S1", frozenset(self.S1))
        object.__setattr__(self, "S2", frozenset(self.S2))
        if not self.S1 <= self.S2:
            raise ValueError("S1 must be contained in S2")

    def key(self):
        return (tuple(sorted(self.S1)), tuple(sorted(self.S2)))

    def to_json(self) -> dict:
        return {"kind": "two_step", "S1": sorted(i + 1 for i in self.S1),
                "S2": sorted(i + 1 for i in self.S2)}


@dataclass(frozen=True)
class WeightedFiltration:
    chain: tuple
    lambdas: tuple

    def to_json(self) -> dict:
        return {"kind": "weighted",
                "chain": [sorted(i + 1 for i in s) for s in self.chain],
                "lambdas": [str(x) for x in self.lambdas]}


@dataclass(frozen=True)
class SubobjectWitness:
    """Witness for the auxiliary checks: a coordinate subobject."""
    parts: tuple

    def to_json(self) -> dict:
        return {"kind": "subobject", "parts": [sorted(i + 1 for i in p) for p in self.parts]}


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: object = None
    defect: Fraction | int | None = None
    warnings: tuple = ()

    @property
    def semistable(self) -> bool:
        return self.status != UNSTABLE

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.defect is not None:
            out["defect"] = str(self.defect)
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def _subsets(n: int):
    for mask in range(1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def _lex(s: frozenset):
    return tuple(sorted(s))


def _sorted_subsets(n: int):
    return sorted(_subsets(n), key=lambda s: (_lex(s)))


def _check_parameter(alpha):
    if alpha not in (0, None):
        raise StabilityParameterError("only the stability parameter 0 is supported")


def _finish(status, witness, defect, warnings):
    if status == STABLE and warnings:
        status = STRICTLY_SEMISTABLE
    return Verdict(status, witness, defect, tuple(warnings))


# ---------------------------------------------------------------- two-step

def beta_edge_allowed(i: int, j: int, S1: frozenset, S2: frozenset) -> bool:
    """beta in K (Lambda^2 V2 + V1 (x)_A V) on the entry {i, j}."""
    return (i in S2 and j in S2) or i in S1 or j in S1


def gamma_edge_allowed(i: int, j: int, S1: frozenset, S2: frozenset) -> bool:
    """gamma in K (Lambda^2 V1-perp + V2-perp (x)_A V*) on the entry {i, j}."""
    return (i not in S1 and j not in S1) or i not in S2 or j not in S2


def invariant_two_step(H: SOStarHiggsObject, F: TwoStepFiltration) -> bool:
    S1, S2 = F.S1, F.S2
    return (all(beta_edge_allowed(i, j, S1, S2) for i, j in H.beta_support)
            and all(gamma_edge_allowed(i, j, S1, S2) for i, j in H.gamma_support))


def two_step_defect(H: SOStarHiggsObject, F: TwoStepFiltration) -> int:
    deg = H.degrees
    return sum(deg) - sum(deg[i] for i in F.S1) - sum(deg[i] for i in F.S2)


def is_trivial_two_step(F: TwoStepFiltration, n: int) -> bool:
    return not F.S1 and len(F.S2) == n


def two_step_filtrations(n: int):
    """All S1 <= S2 in lexicographic order of (S1, S2)."""
    subs = _sorted_subsets(n)
    for S1 in subs:
        for S2 in subs:
            if S1 <= S2:
                yield TwoStepFiltration(S1, S2)


def check_semistable(H: SOStarHiggsObject, alpha=0) -> Verdict:
    """Two-step criterion; the witness is the lexicographically least filtration
    of the worst kind found."""
    _check_parameter(alpha)
    n = H.n
    warnings = [REPEATED_LABEL_WARNING] if H.has_repeated_labels() else []
    first_zero = None
    for F in two_step_filtrations(n):
        if not invariant_two_step(H, F):
            continue
        d = two_step_defect(H, F)
        if d < 0:
            return _finish(UNSTABLE, F, d, warnings)
        if d == 0 and first_zero is None and not is_trivial_two_step(F, n):
            first_zero = F
    if first_zero is not None:
        return _finish(STRICTLY_SEMISTABLE, first_zero, 0, warnings)
    return _finish(STABLE, None, None, warnings)


# ---------------------------------------------------------- weighted oracle

def _ordered_partitions(n: int, k: int):
    """Maps summand -> level in 0..k-1 with every level used."""
    for levels in itertools.product(range(k), repeat=n):
        if len(set(levels)) == k:
            yield levels


def _criterion_constraints(H: SOStarHiggsObject, levels, k):
    cons = []
    for a in range(k - 1):
        v = [0] * k
        v[a], v[a + 1] = 1, -1
        cons.append((tuple(v), 0, True))
    for i, j in H.beta_support:     # lambda_p(i) + lambda_p(j) <= 0
        v = [0] * k
        v[levels[i]] += 1
        v[levels[j]] += 1
        cons.append((tuple(v), 0, False))
    for i, j in H.gamma_support:    # lambda_p(i) + lambda_p(j) >= 0
        v = [0] * k
        v[levels[i]] -= 1
        v[levels[j]] -= 1
        cons.append((tuple(v), 0, False))
    deg = H.degrees
    dvec = [0] * k
    for a, lv in enumerate(levels):
        dvec[lv] += deg[a]
    return cons, tuple(dvec)


def _chain_from_levels(levels, k):
    return tuple(frozenset(a for a, lv in enumerate(levels) if lv <= t) for t in range(k))


def check_general_criterion(H: SOStarHiggsObject, max_len: int | None = None, alpha=0) -> Verdict:
    """Weighted-filtration criterion decided by exact linear feasibility.

    For each coordinate chain 0 < V_1 < ... < V_k = V (k - 1 <= max_len) the
    weights form a polyhedral cone; invariance of phi is a set of closed
    half-spaces in lambda and d(V, lambda) is linear, so "some admissible
    strictly increasing lambda with d < 0" (resp. d = 0, non-trivial) is a
    feasibility question answered exactly.
    """
    _check_parameter(alpha)
    n = H.n
    max_len = n if max_len is None else max_len
    warnings = [REPEATED_LABEL_WARNING] if H.has_repeated_labels() else []
    first_zero = None
    for k in range(1, min(n, max_len + 1) + 1):
        for levels in _ordered_partitions(n, k):
            cons, dvec = _criterion_constraints(H, levels, k)
            # one lambda is either a positive or a negative scalar
            extras = [[((1,), 0, True)], [((-1,), 0, True)]] if k == 1 else [[]]
            for extra in extras:
                base = cons + extra
                # d <= 0 first: when it fails neither verdict-changing case occurs
                le_point = lf.solve(base + [(dvec, 0, False)], k)
                if le_point is None:
                    continue
                pt = lf.solve(base + [(dvec, 0, True)], k)
                if pt is not None:
                    d = sum(x * y for x, y in zip(dvec, pt))
                    return _finish(UNSTABLE, WeightedFiltration(_chain_from_levels(levels, k),
                                                                tuple(pt)), d, warnings)
                if first_zero is None:
                    first_zero = WeightedFiltration(_chain_from_levels(levels, k),
                                                    tuple(le_point))
    if first_zero is not None:
        return _finish(STRICTLY_SEMISTABLE, first_zero, 0, warnings)
    return _finish(STABLE, None, None, warnings)


# ------------------------------------------------------------ polystability

@dataclass(frozen=True)
class PolystableResult:
    status: str                     # "stable" | "polystable" | "not-polystable"
    summands: tuple = ()            # index sets of the decomposition
    failure: TwoStepFiltration | None = None

    @property
    def polystable(self) -> bool:
        return self.status in ("stable", "polystable")

    def to_json(self) -> dict:
        out = {"status": self.status,
               "summands": [sorted(i + 1 for i in s) for s in self.summands]}
        if self.failure is not None:
            out["failure"] = self.failure.to_json()
        return out


class UnstableInputError(ValueError):
    pass


def splits_along(H: SOStarHiggsObject, F: TwoStepFiltration) -> bool:
    """Conditions (a)-(c) for the coordinate splitting V1 + V2/V1 + V/V2."""
    S1, S2 = F.S1, F.S2
    mid = S2 - S1

    def ok(i, j):
        if i in mid and j in mid:
            return True
        return (i in S1 and j not in S2) or (j in S1 and i not in S2)

    return all(ok(i, j) for i, j in H.beta_support | H.gamma_support)


def support_components(H: SOStarHiggsObject) -> list[frozenset]:
    G = nx.Graph()
    G.add_nodes_from(range(H.n))
    G.add_edges_from(H.beta_support | H.gamma_support)
    comps = [frozenset(c) for c in nx.connected_components(G)]
    return sorted(comps, key=lambda c: min(c))


def check_polystable(H: SOStarHiggsObject) -> PolystableResult:
    v = check_semistable(H)
    if v.status == UNSTABLE:
        raise UnstableInputError("polystability is only defined for semistable input")
    if v.status == STABLE:
        return PolystableResult("stable", (frozenset(range(H.n)),))
    n = H.n
    for F in two_step_filtrations(n):
        if is_trivial_two_step(F, n) or not invariant_two_step(H, F):
            continue
        if two_step_defect(H, F) == 0 and not splits_along(H, F):
            return PolystableResult("not-polystable", (), F)
    return PolystableResult("polystable", tuple(support_components(H)))


def is_polystable(H: SOStarHiggsObject) -> bool:
    if check_semistable(H).status == UNSTABLE:
        return False
    return check_polystable(H).polystable


# ------------------------------------------------------- summand classifier

TYPE_STABLE = 1
TYPE_USTAR = 2
TYPE_UPQ = 3
TYPE_ZERO = 4


@dataclass(frozen=True)
class SummandType:
    indices: frozenset
    type: int | None
    note: str = ""

    def to_json(self) -> dict:
        return {"summand": sorted(i + 1 for i in self.indices), "type": self.type,
                "note": self.note}


class UnclassifiableSummand(ValueError):
    pass


def _line_duality_matchings(sub: SOStarHiggsObject):
    """Fixed-point-free involutions sigma with L_sigma(i) = L_i^-1 on labels."""
    n = sub.n
    s = sub.V.summands
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n)
                     if s[i].dual() == s[j])

    def rec(remaining):
        if not remaining:
            yield {}
            return
        a = min(remaining)
        for b in sorted(G.neighbors(a)):
            if b in remaining:
                for rest in rec(remaining - {a, b}):
                    m = dict(rest)
                    m[a], m[b] = b, a
                    yield m

    if n % 2:
        return
    yield from rec(frozenset(range(n)))


def has_structural_intertwiner(sub: SOStarHiggsObject) -> bool:
    """A skew f: V -> V* with beta f = f^-1 gamma, tested on labels and supports."""
    if toledo(sub) != 0 or sub.n % 2:
        return False
    beta = sub.beta_support
    gamma = sub.gamma_support
    for sigma in _line_duality_matchings(sub):
        image = frozenset(tuple(sorted((sigma[i], sigma[j]))) for i, j in beta)
        if image == gamma:
            return True
    return False


def _bipartition(sub: SOStarHiggsObject):
    G = nx.Graph()
    G.add_nodes_from(range(sub.n))
    G.add_edges_from(sub.beta_support | sub.gamma_support)
    if not nx.is_connected(G) or not nx.is_bipartite(G):
        return None
    colors = nx.bipartite.color(G)
    A = frozenset(v for v, c in colors.items() if c == colors[0])
    return A, frozenset(range(sub.n)) - A


@dataclass(frozen=True)
class UpqHiggs:
    """(V, W, beta: W -> V K, gamma: V -> W K) with patterns of index pairs.

    beta holds (v, w) for an entry W_w -> V_v; gamma holds (w, v) for V_v -> W_w.
    """
    ctx: CurveContext
    V: SplitBundle
    W: SplitBundle
    beta: frozenset = frozenset()
    gamma: frozenset = frozenset()


def upq_from_summand(sub: SOStarHiggsObject, A: frozenset, B: frozenset) -> UpqHiggs:
    """V-tilde = span of B, W-tilde = dual of the span of A."""
    A_idx, B_idx = sorted(A), sorted(B)
    pa = {a: k for k, a in enumerate(A_idx)}
    pb = {b: k for k, b in enumerate(B_idx)}
    s = sub.V.summands

    def cross(sup):
        out = set()
        for i, j in sup:
            if i in pa and j in pb:
                out.add((pb[j], pa[i]))
            elif j in pa and i in pb:
                out.add((pb[i], pa[j]))
        return out

    beta = frozenset(cross(sub.beta_support))
    gamma = frozenset((w, v) for v, w in cross(sub.gamma_support))
    return UpqHiggs(sub.ctx, SplitBundle(tuple(s[b] for b in B_idx)),
                    SplitBundle(tuple(s[a].dual() for a in A_idx)), beta, gamma)


def classify_summands(H: SOStarHiggsObject) -> list[SummandType]:
    res = check_polystable(H)
    if not res.polystable:
        raise UnclassifiableSummand("object is not polystable")
    out = []
    comps = support_components(H) if res.status == "polystable" else [frozenset(range(H.n))]
    for C in comps:
        sub = H.restrict(C)
        if not sub.beta_support and not sub.gamma_support:
            if sub.n == 1 and toledo(sub) == 0:
                out.append(SummandType(C, TYPE_ZERO, "zero Higgs field, degree-0 line"))
            else:
                out.append(SummandType(C, None, "zero Higgs field but not a degree-0 line"))
            continue
        # an intertwiner reduces the summand to U*(n_i) whether or not it is stable as SO*
        if has_structural_intertwiner(sub):
            out.append(SummandType(C, TYPE_USTAR, "structural intertwiner"))
            continue
        if check_semistable(sub).status == STABLE:
            out.append(SummandType(C, TYPE_STABLE))
            continue
        bip = _bipartition(sub)
        if bip is not None:
            A, B = bip
            deg = sub.degrees
            if sum(deg[b] for b in B) - sum(deg[a] for a in A) == 0:
                upq = upq_from_summand(sub, A, B)
                if aux_check("Upq", upq).status == STABLE:
                    out.append(SummandType(C, TYPE_UPQ,
                                           f"U({len(B)},{len(A)}) with deg V~ + deg W~ = 0"))
                    continue
        out.append(SummandType(C, None, "unclassifiable summand"))
    return out


# ------------------------------------------------------------ Milnor-Wood

def milnor_wood(H: SOStarHiggsObject) -> dict:
    g = H.ctx.genus
    n = H.n
    d = toledo(H)
    rb, rg = rank_beta(H), rank_gamma(H)
    cap = (n // 2) * (2 * g - 2)
    lower, upper = rb * (1 - g), rg * (g - 1)
    iso, note = gamma_is_isomorphism(H)
    out = {
        "d": d, "rank_beta": rb, "rank_gamma": rg,
        "lower": lower, "upper": upper, "cap": cap,
        "within_rank_bounds": lower <= d <= upper,
        "within_cap": abs(d) <= cap,
        "maximal": abs(d) == cap,
        "gamma_isomorphism": d == n * (g - 1) and iso,
    }
    if note:
        out["modeling_inconsistency"] = note
    return out


# ------------------------------------------------------ auxiliary groups

@dataclass(frozen=True)
class GLHiggs:
    """Split bundle E with Phi pattern; (r, c) means an entry E_c -> E_r K."""
    ctx: CurveContext
    E: SplitBundle
    phi: frozenset = frozenset()


@dataclass(frozen=True)
class SOCHiggs:
    """Orthogonal split bundle: Q pairs summand i with partner[i] (itself if
    the line carries a non-degenerate restriction of Q)."""
    ctx: CurveContext
    E: SplitBundle
    partner: tuple
    phi: frozenset = frozenset()


@dataclass(frozen=True)
class UStarData:
    """Symplectic split bundle (W, Omega) with a twisted Omega-symmetric psi.

    omega holds pairs i < j with a (generic) entry of Omega; psi holds (r, c)
    for an entry W_c -> W_r (twisted).
    """
    ctx: CurveContext
    W: SplitBundle
    omega: frozenset
    psi: frozenset = frozenset()


def _phi_invariant(S: frozenset, pattern) -> bool:
    return all(r in S for r, c in pattern if c in S)


def _gl_verdict(ctx, E: SplitBundle, phi, need_degree_zero: bool) -> Verdict:
    n = E.rank
    deg = E.degrees(ctx)
    total = sum(deg)
    if need_degree_zero and total != 0:
        raise ValueError("an SL(n, C)-Higgs bundle has trivial determinant")
    first_zero = None
    for S in _sorted_subsets(n):
        if not S or len(S) == n or not _phi_invariant(S, phi):
            continue
        diff = Fraction(sum(deg[i] for i in S), len(S)) - Fraction(total, n)
        if diff > 0:
            return Verdict(UNSTABLE, SubobjectWitness((S,)), diff)
        if diff == 0 and first_zero is None:
            first_zero = S
    if first_zero is not None:
        return Verdict(STRICTLY_SEMISTABLE, SubobjectWitness((first_zero,)), Fraction(0))
    return Verdict(STABLE)


def _isotropic_verdict(ctx, E: SplitBundle, isotropic, invariant) -> Verdict:
    n = E.rank
    deg = E.degrees(ctx)
    first_zero = None
    for S in _sorted_subsets(n):
        if not S or not isotropic(S) or not invariant(S):
            continue
        dS = sum(deg[i] for i in S)
        if dS > 0:
            return Verdict(UNSTABLE, SubobjectWitness((S,)), dS)
        if dS == 0 and first_zero is None:
            first_zero = S
    if first_zero is not None:
        return Verdict(STRICTLY_SEMISTABLE, SubobjectWitness((first_zero,)), 0)
    return Verdict(STABLE)


def soc_verdict(obj: SOCHiggs) -> Verdict:
    def isotropic(S):
        return all(obj.partner[i] not in S for i in S)
    return _isotropic_verdict(obj.ctx, obj.E, isotropic, lambda S: _phi_invariant(S, obj.phi))


def ustar_verdict(obj: UStarData) -> Verdict:
    def isotropic(S):
        return not any(i in S and j in S for i, j in obj.omega)
    return _isotropic_verdict(obj.ctx, obj.W, isotropic, lambda S: _phi_invariant(S, obj.psi))


def ustar_polystable(obj: UStarData) -> bool:
    """Polystability clause: every degree-0 isotropic (coisotropic) invariant
    strict subbundle has an invariant coisotropic (isotropic) complement."""
    v = ustar_verdict(obj)
    if v.status == UNSTABLE:
        return False
    n = obj.W.rank
    deg = obj.W.degrees(obj.ctx)
    full = frozenset(range(n))

    def isotropic(S):
        return not any(i in S and j in S for i, j in obj.omega)

    def perp(S):
        return frozenset(a for a in range(n)
                         if not any((a == i and j in S) or (a == j and i in S) for i, j in obj.omega))

    def coisotropic(S):
        return isotropic(perp(S))

    for S in _subsets(n):
        if not S or S == full or not _phi_invariant(S, obj.psi):
            continue
        if sum(deg[i] for i in S) != 0:
            continue
        comp = full - S
        if isotropic(S) and not (coisotropic(comp) and _phi_invariant(comp, obj.psi)):
            return False
        if coisotropic(S) and not (isotropic(comp) and _phi_invariant(comp, obj.psi)):
            return False
    return True


def upq_verdict(obj: UpqHiggs) -> Verdict:
    p, q = obj.V.rank, obj.W.rank
    dv, dw = obj.V.degrees(obj.ctx), obj.W.degrees(obj.ctx)
    mu = Fraction(sum(dv) + sum(dw), p + q)
    first_zero = None
    for Vs in _sorted_subsets(p):
        for Ws in _sorted_subsets(q):
            size = len(Vs) + len(Ws)
            if size == 0 or size == p + q:
                continue
            if not all(v in Vs for v, w in obj.beta if w in Ws):
                continue
            if not all(w in Ws for w, v in obj.gamma if v in Vs):
                continue
            diff = Fraction(sum(dv[i] for i in Vs) + sum(dw[j] for j in Ws), size) - mu
            if diff > 0:
                return Verdict(UNSTABLE, SubobjectWitness((Vs, Ws)), diff)
            if diff == 0 and first_zero is None:
                first_zero = (Vs, Ws)
    if first_zero is not None:
        return Verdict(STRICTLY_SEMISTABLE, SubobjectWitness(first_zero), Fraction(0))
    return Verdict(STABLE)


def aux_check(kind: str, obj) -> Verdict:
    if kind == "GL":
        return _gl_verdict(obj.ctx, obj.E, obj.phi, False)
    if kind == "SL":
        return _gl_verdict(obj.ctx, obj.E, obj.phi, True)
    if kind == "SOC":
        return soc_verdict(obj)
    if kind == "Upq":
        return upq_verdict(obj)
    if kind == "UStar":
        return ustar_verdict(obj)
    raise ValueError(f"unsupported kind {kind!r}")


def soc_from_associated(H: SOStarHiggsObject) -> SOCHiggs:
    from .higgs_core import associated_so
    A = associated_so(H)
    n = H.n
    partner = tuple(list(range(n, 2 * n)) + list(range(n)))
    return SOCHiggs(H.ctx, A.E, partner, A.Phi_support)
