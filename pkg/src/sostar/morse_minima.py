"""Hodge bundles, weight spaces and the minima of the Hitchin function.

Weights live in (1/2)Z. A beta entry on summands (a, b) forces
w_a + w_b = 1 and a gamma entry forces w_a + w_b = -1, so a connected
component of the support graph fixes the weights up to one shift (bipartite
components) or completely (odd cycles).
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .exact_matrix import ExactMatrix, GaussianRational, ZERO, rank_exact
from .higgs_core import SOStarHiggsObject, toledo
from .stability import UNSTABLE, check_polystable, check_semistable

HALF = Fraction(1, 2)


class NotPolystableError(ValueError):
    pass


@dataclass(frozen=True)
class HodgeDecomposition:
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if any((2 * w).denominator != 1 for w in self.weights):
            raise ValueError("weights must be half-integers")

    def is_valid_for(self, H: SOStarHiggsObject) -> bool:
        w = self.weights
        return (len(w) == H.n
                and all(w[i] + w[j] == 1 for i, j in H.beta_support)
                and all(w[i] + w[j] == -1 for i, j in H.gamma_support))

    def to_json(self) -> list:
        return [str(w) for w in self.weights]


def _components(H):
    G = nx.Graph()
    G.add_nodes_from(range(H.n))
    G.add_edges_from(H.beta_support | H.gamma_support)
    return [sorted(c) for c in sorted(nx.connected_components(G), key=min)]


def _solve_component(H, comp):
    """Weights c_v + s_v t on the component, and t when it is forced."""
    adj = {v: [] for v in comp}
    for sup, r in ((H.beta_support, 1), (H.gamma_support, -1)):
        for i, j in sup:
            if i in adj:
                adj[i].append((j, r))
                adj[j].append((i, r))
    root = comp[0]
    c, s = {root: Fraction(0)}, {root: 1}
    forced = None
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b, r in adj[a]:
            if b not in c:
                c[b], s[b] = r - c[a], -s[a]
                queue.append(b)
                continue
            ssum = s[a] + s[b]
            rest = r - c[a] - c[b]
            if ssum == 0:
                if rest != 0:
                    return None
            else:
                t = Fraction(rest, ssum)
                if forced is not None and forced != t:
                    return None
                forced = t
    return c, s, forced


def _choose_shift(c, s, kinds):
    """Normalize a bipartite component: least spread, then centre 1/2, then -1/2."""
    if kinds == {"gamma"}:
        prefs = [-HALF]
    elif kinds == {"beta"}:
        prefs = [HALF]
    else:
        prefs = [HALF, -HALF]
    bound = max(abs(x) for x in c.values()) + 2
    best = None
    t = -bound
    while t <= bound:
        ws = [c[v] + s[v] * t for v in c]
        spread = max(ws) - min(ws)
        mid = (max(ws) + min(ws)) / 2
        rank = prefs.index(mid) if mid in prefs else len(prefs)
        key = (spread, rank, t)
        if best is None or key < best[0]:
            best = (key, t)
        t += HALF
    return best[1]


def detect_hodge(H: SOStarHiggsObject) -> HodgeDecomposition | None:
    n = H.n
    d = toledo(H)
    w = [None] * n
    for comp in _components(H):
        if len(comp) == 1:
            # isolated summands sit with the bulk of a maximal-type object
            w[comp[0]] = -HALF if d > 0 else HALF if d < 0 else Fraction(0)
            continue
        sol = _solve_component(H, comp)
        if sol is None:
            return None
        c, s, forced = sol
        if forced is None:
            kinds = set()
            cs = set(comp)
            if any(i in cs for i, _ in H.beta_support):
                kinds.add("beta")
            if any(i in cs for i, _ in H.gamma_support):
                kinds.add("gamma")
            forced = _choose_shift(c, s, kinds)
        for v in comp:
            w[v] = c[v] + s[v] * forced
    return HodgeDecomposition(tuple(w))


@dataclass(frozen=True)
class WeightSpaces:
    plus: dict          # k -> (rank, degree)
    minus: dict

    def to_json(self) -> dict:
        return {"plus": {str(k): {"rank": r, "degree": d} for k, (r, d) in sorted(self.plus.items())},
                "minus": {str(k): {"rank": r, "degree": d} for k, (r, d) in sorted(self.minus.items())}}


def _plus_entries(w, k):
    """Basis elements (j, i) of Hom(F_i, F_j) with w_j - w_i = k."""
    n = len(w)
    return [(j, i) for j in range(n) for i in range(n) if w[j] - w[i] == k]


def _minus_entries(w, k):
    n = len(w)
    out = [("beta", a, b) for a in range(n) for b in range(a + 1, n) if w[a] + w[b] == k]
    out += [("gamma", a, b) for a in range(n) for b in range(a + 1, n) if -(w[a] + w[b]) == k]
    return out


def weight_spaces(H: SOStarHiggsObject, dec: HodgeDecomposition) -> WeightSpaces:
    w = dec.weights
    deg = H.degrees
    plus, minus = {}, {}
    ks = {w[j] - w[i] for i in range(H.n) for j in range(H.n)}
    for k in ks:
        ent = _plus_entries(w, k)
        plus[k] = (len(ent), sum(deg[j] - deg[i] for j, i in ent))
    ks_minus = {w[a] + w[b] for a in range(H.n) for b in range(a + 1, H.n)}
    ks_minus |= {-x for x in ks_minus}
    for k in ks_minus:
        ent = _minus_entries(w, k)
        if ent:
            minus[k] = (len(ent), sum((deg[a] + deg[b]) if t == "beta" else -(deg[a] + deg[b])
                                      for t, a, b in ent))
    return WeightSpaces(plus, minus)


def _generic_coeffs(H, seed):
    rng = random.Random(seed)
    cb, cg = dict(H.beta_coeffs), dict(H.gamma_coeffs)

    def pick(store, key):
        if key not in store:
            store[key] = GaussianRational(rng.randint(1, 97), rng.randint(-97, 97))
        return store[key]
    for key in sorted(H.beta_support):
        pick(cb, key)
    for key in sorted(H.gamma_support):
        pick(cg, key)
    return cb, cg


def deformation_map(H: SOStarHiggsObject, dec: HodgeDecomposition, k, seed: int = 0) -> ExactMatrix:
    """Matrix of ad(phi): U_k^+ -> U_{k+1}^- in the coordinate bases."""
    w = dec.weights
    n = H.n
    cb, cg = _generic_coeffs(H, seed)
    B = H.beta_matrix(default=lambda i, j: cb[(i, j)])
    G = H.gamma_matrix(default=lambda i, j: cg[(i, j)])
    src = _plus_entries(w, k)
    dst = _minus_entries(w, k + 1)
    row_of = {e: r for r, e in enumerate(dst)}
    cols = []
    for j, i in src:
        psi = [[ZERO] * n for _ in range(n)]
        psi[j][i] = GaussianRational(1)
        P = ExactMatrix.from_rows(psi)
        db = -(B @ P.T + P @ B)
        dg = G @ P + P.T @ G
        col = [ZERO] * len(dst)
        for a in range(n):
            for b in range(a + 1, n):
                for kind, M in (("beta", db), ("gamma", dg)):
                    v = M[(a, b)]
                    if v != ZERO:
                        if (kind, a, b) not in row_of:
                            raise AssertionError("deformation map left its weight space")
                        col[row_of[(kind, a, b)]] = v
        cols.append(col)
    if not src or not dst:
        return ExactMatrix(len(dst), len(src), ())
    return ExactMatrix.from_rows([[cols[c][r] for c in range(len(src))] for r in range(len(dst))])


@dataclass(frozen=True)
class MinimumReport:
    is_minimum: bool
    per_k: tuple
    obstruction: dict | None = None

    def to_json(self) -> dict:
        out = {"is_minimum": self.is_minimum, "per_k": list(self.per_k)}
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
        return out


def _lambda2_obstruction(H, w):
    """Top-degree counting for a two-sided weight shape (type 1 or type 2)."""
    top, bot = max(w), min(w)
    if top == bot:
        return None
    if top + bot == 1:
        shape, a, b = "type1", w.count(top), w.count(bot)
    elif top + bot == -1:
        shape, a, b = "type2", w.count(bot), w.count(top)
    else:
        return None
    holds = a * b == a * (a - 1) // 2 and a * (a - 1) % 2 == 0
    out = {"shape": shape, "k0": str(top - bot), "a": a, "b": b, "ab": a * b,
           "a(a-1)/2": a * (a - 1) // 2, "forced_relation": "ab=a(a-1)/2",
           "relation_holds": holds}
    if holds:
        out["consequence"] = "a=2b+1>b"
        out["a_equals_2b_plus_1"] = a == 2 * b + 1
    return out


def minimum_check(H: SOStarHiggsObject, dec: HodgeDecomposition, seed: int = 0) -> MinimumReport:
    if not dec.is_valid_for(H):
        raise ValueError("weights do not fit the supports")
    w = dec.weights
    g = H.ctx.genus
    ws = weight_spaces(H, dec)
    ks = sorted({k for k in ws.plus if k > 0} | {k - 1 for k in ws.minus if k - 1 > 0})
    per_k = []
    ok = True
    for k in ks:
        rp, dp = ws.plus.get(k, (0, 0))
        rm, dm = ws.minus.get(k + 1, (0, 0))
        exact = rank_exact(deformation_map(H, dec, k, seed)) if rp and rm else 0
        iso = rp == rm and dp + rp * (2 * g - 2) == dm and exact == rp
        ok = ok and iso
        per_k.append({"k": str(k), "rank_plus": rp, "rank_minus": rm, "deg_plus_twisted": dp + rp * (2 * g - 2),
                      "deg_minus": dm, "exact_rank": exact, "isomorphism": iso})
    obstruction = _lambda2_obstruction(H, list(w)) if not ok else None
    return MinimumReport(ok, tuple(per_k), obstruction)


@dataclass(frozen=True)
class MinimumVerdict:
    minimum: bool
    reason: str

    def to_json(self) -> dict:
        return {"minimum": self.minimum, "reason": self.reason}


def _require_polystable(H):
    if check_semistable(H).status == UNSTABLE or not check_polystable(H).polystable:
        raise NotPolystableError("object is not polystable")


def classify_minimum(H: SOStarHiggsObject) -> MinimumVerdict:
    _require_polystable(H)
    d = toledo(H)
    b, c = bool(H.beta_support), bool(H.gamma_support)
    if d > 0:
        return MinimumVerdict(not b, "d > 0: minimum iff beta = 0")
    if d < 0:
        return MinimumVerdict(not c, "d < 0: minimum iff gamma = 0")
    return MinimumVerdict(not b and not c, "d = 0: minimum iff beta = 0 and gamma = 0")


def hitchin_floor(H: SOStarHiggsObject) -> dict:
    _require_polystable(H)
    d = toledo(H)
    field_name = "beta" if d >= 0 else "gamma"
    return {
        "floor": abs(d),
        "certificate": f"f = |d| + 2||{field_name}||^2",
        "chern_weil": "d + ||beta||^2 - ||gamma||^2 = 0",
        "attained_iff": f"{field_name} = 0",
    }
