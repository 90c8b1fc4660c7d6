"""Nondegeneracy, algebraic dependence and Segre chain tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import ONE, ZERO, ExactMatrix, GaussRat, RowReducer, rref_nullspace
from .segre import ComplexDefEq, HypersurfaceError, HypersurfaceSpec, complexify
from .series import INF, SeriesError, TruncSeries, VarSet, monomials_upto, revert

__all__ = [
    "NondegeneracyReport",
    "DependenceCertificate",
    "NoRelation",
    "SegreChainMap",
    "finite_nondegeneracy",
    "dependence_search",
    "tube_obstruction_report",
    "rigid_obstruction_report",
    "psi_prime_series",
    "segre_chain",
    "minimality",
    "conjugation_holds",
    "chain_varset",
]


# ---------------------------------------------------------------------------
# finite nondegeneracy of tubes
# ---------------------------------------------------------------------------


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _multiindices(m: int, order: int) -> list:
    return [e for e in monomials_upto(m, order) if sum(e) == order]


@dataclass
class NondegeneracyReport:
    m: int
    found: bool
    ell0: int | None
    betas: list
    components: list
    jacobian: list
    bound: int

    def render(self) -> str:
        if not self.found:
            return f"degenerate up to bound L={self.bound}"
        parts = [f"j={j} beta={b}" for j, b in zip(self.components, self.betas)]
        return f"ell0={self.ell0}: " + ", ".join(parts)


def finite_nondegeneracy(spec: HypersurfaceSpec, L: int = 6) -> NondegeneracyReport:
    """Greedy graded-lex search for derivatives whose gradients at 0 span C^m."""
    if spec.kind != "tube":
        raise HypersurfaceError("finite nondegeneracy test is implemented for tubes")
    m = spec.m
    rr = RowReducer(m)
    betas, comps, rows = [], [], []
    for ell in range(1, L + 1):
        if ell + 1 > spec.order:
            raise SeriesError(f"defining functions known only to order {spec.order}; need {ell + 1}")
        for beta in _multiindices(m, ell):
            for j, phi in enumerate(spec.phi, 1):
                # component k: d^{beta + e_k} phi_j (0)
                row = []
                for k in range(m):
                    e = list(beta)
                    e[k] += 1
                    scale = 1
                    for x in e:
                        scale *= _factorial(x)
                    row.append(phi.coeff(tuple(e)) * scale)
                if rr.add({i: c for i, c in enumerate(row) if c}):
                    betas.append(beta)
                    comps.append(j)
                    rows.append(row)
                if rr.rank == m:
                    jac = ExactMatrix(rows)
                    if jac.rank() != m:
                        raise ArithmeticError("witness Jacobian failed exact rank re-check")
                    return NondegeneracyReport(m, True, ell, betas, comps, rows, L)
    return NondegeneracyReport(m, False, None, betas, comps, rows, L)


# ---------------------------------------------------------------------------
# bounded-degree algebraic dependence
# ---------------------------------------------------------------------------


@dataclass
class DependenceCertificate:
    """``P(f_1, ..., f_k) = 0`` verified through ``verified_order``."""

    poly: TruncSeries
    names: tuple
    D: int
    N: int
    verified_order: object

    def replay(self, fs: list, order=None) -> TruncSeries:
        """Residual P(f_1, ..., f_k), computed afresh."""
        target = fs[0].vars
        cap = min(f.order for f in fs) if order is None else order
        return self.poly.compose(dict(zip(self.names, fs)), order=cap, target=target)

    def render(self) -> str:
        return f"{self.poly.render()} = 0"

    @property
    def verdict(self) -> str:
        return "RELATION"


@dataclass
class NoRelation:
    D: int
    N: int

    def render(self) -> str:
        return f"no relation of degree <= {self.D} through order {self.N}"

    @property
    def verdict(self) -> str:
        return "NO-RELATION"


def _column_series(fs: list, expo: tuple, cap, cache: dict) -> TruncSeries:
    if expo in cache:
        return cache[expo]
    # multiply one factor onto a smaller known monomial
    i = max(j for j, k in enumerate(expo) if k)
    prev = list(expo)
    prev[i] -= 1
    out = _column_series(fs, tuple(prev), cap, cache).mul(fs[i], cap)
    cache[expo] = out
    return out


def _relation_at(fs, monos, N, last_index):
    """Nullspace vectors of the coefficient map, preferring ones using the last variable."""
    target = fs[0].vars
    cache = {(0,) * len(fs): TruncSeries.const(target, ONE)}
    rows: dict = {}
    for col, e in enumerate(monos):
        s = _column_series(fs, e, N, cache)
        if s.order < N:
            raise SeriesError("column series lost precision below the search order")
        for me, c in s.terms.items():
            rows.setdefault(me, {})[col] = c
    rr = RowReducer(len(monos))
    for me in sorted(rows):
        rr.add(rows[me])
    null = rr.nullspace()
    if last_index is None:
        return null
    uses_last = [col for col, e in enumerate(monos) if e[last_index]]
    return [v for v in null if any(v[c] for c in uses_last)]


def _normalize(vec, monos, last_index):
    cols = [c for c, v in enumerate(vec) if v]
    if last_index is not None:
        pref = [c for c in cols if monos[c][last_index]]
        cols = pref or cols
    lead = max(cols, key=lambda c: (sum(monos[c]), monos[c]))
    inv = vec[lead].inverse()
    return [v * inv for v in vec]


def dependence_search(
    fs: list,
    D: int = 4,
    N: int = 24,
    require_last: bool = True,
    names: tuple | None = None,
):
    """Search for P of degree <= D with P(f_1..f_k) = 0 through order N.

    With ``require_last`` the relation must involve the last series.  The
    lowest-degree relation is returned, normalised to leading coefficient 1
    on its top monomial, and re-verified at ``min(2N, available order)``.
    """
    if not fs:
        raise SeriesError("need at least one series")
    V = fs[0].vars
    for f in fs:
        if f.vars != V:
            raise SeriesError("all series must share one VarSet")
    available = min(f.order for f in fs)
    if N > available:
        raise SeriesError(f"search order {N} exceeds the guaranteed order {available}")
    k = len(fs)
    names = tuple(names or (f"f{i}" for i in range(1, k + 1)))
    P = VarSet(names)
    last = k - 1 if require_last else None
    while True:
        for d in range(1, D + 1):
            monos = monomials_upto(k, d)
            null = _relation_at(fs, monos, N, last)
            if not null:
                continue
            vec = _normalize(null[0], monos, last)
            poly = TruncSeries(P, {e: c for e, c in zip(monos, vec) if c}, INF)
            check = available if available == INF else min(2 * N, available)
            cert = DependenceCertificate(poly, names, D, N, check)
            res = cert.replay(fs, None if check == INF else check)
            if res.is_zero():
                if check == INF:
                    cert.verified_order = res.order
                return cert
            if check > N:
                N = check
                break
            raise ArithmeticError("relation found but failed re-verification")
        else:
            return NoRelation(D, N)


# ---------------------------------------------------------------------------
# obstruction reports
# ---------------------------------------------------------------------------


def _pair_entry(label, result):
    entry = {"pair": label, "verdict": result.verdict}
    if isinstance(result, DependenceCertificate):
        entry["certificate"] = result.render()
        entry["variables"] = list(result.names)
        entry["verified_order"] = result.verified_order
    else:
        entry["bounds"] = {"D": result.D, "N": result.N}
    return entry, result


def psi_prime_series(phi: TruncSeries) -> TruncSeries:
    """For m = 1: inverse psi' of psi = phi_y, expanded in y'."""
    psi = phi.diff(phi.vars.names[0])
    return revert(psi - psi.constant_term())


def tube_obstruction_report(spec: HypersurfaceSpec, D: int = 4, N: int = 24) -> dict:
    """Is every second derivative algebraic over the first derivatives?"""
    if spec.kind != "tube":
        raise HypersurfaceError("tube obstruction report needs a tube")
    m = spec.m
    ys = spec.varset.names
    pairs = []
    raw = []
    skipped = []
    for j, phi in enumerate(spec.phi, 1):
        hess = ExactMatrix(
            [[phi.diff(ys[a]).diff(ys[b]).constant_term() for b in range(m)] for a in range(m)]
        )
        if hess.rank() < m:
            skipped.append(j)
            continue
        first = [phi.diff(y) for y in ys]
        for k in range(m):
            for l in range(k, m):
                second = phi.diff(ys[k]).diff(ys[l])
                fs = first + [second]
                placeholders = tuple(f"U{a + 1}" for a in range(m)) + ("V",)
                res = dependence_search(fs, D, min(N, second.order), names=placeholders)
                label = f"{'phi' + str(j) + '_' if spec.d > 1 else 'phi_'}{ys[k]}{ys[l]}"
                entry, r = _pair_entry(label, res)
                pairs.append(entry)
                raw.append(r)
    witnessed = any(isinstance(r, NoRelation) for r in raw)
    report = {
        "form": "second derivatives over first derivatives",
        "bounds": {"D": D, "N": N},
        "pairs": pairs,
        "skipped_components": skipped,
        "summary": f"obstruction witnessed up to (D={D}, N={N})" if witnessed else "no obstruction found",
        "obstructed": witnessed,
    }
    if m == 1 and spec.d == 1 and not skipped:
        inv = psi_prime_series(spec.phi[0])
        var = inv.vars.names[0]
        fs = [TruncSeries.var(inv.vars, var, inv.order), inv.diff(var)]
        res = dependence_search(fs, D, min(N, fs[1].order), names=("Y", "G"))
        entry, _ = _pair_entry("dpsi'/dy'", res)
        report["psi_prime_form"] = entry
    return report


def rigid_obstruction_report(spec: HypersurfaceSpec, D: int = 4, N: int = 24) -> dict:
    """Algebraicity of phi_r (v = phi(z zbar)) or of each phi_{z_k} over (z, zbar)."""
    if spec.kind == "hermitian-rigid":
        phi = spec.phi[0]
        g = phi.diff("r")
        r = TruncSeries.var(phi.vars, "r", g.order)
        res = dependence_search([r, g], D, min(N, g.order), names=("r", "G"))
        entry, raw = _pair_entry("phi_r", res)
        witnessed = isinstance(raw, NoRelation)
        return {
            "form": "phi_r algebraic over r",
            "bounds": {"D": D, "N": N},
            "pairs": [entry],
            "summary": f"obstruction witnessed up to (D={D}, N={N})" if witnessed else "no obstruction found",
            "obstructed": witnessed,
        }
    if spec.kind != "rigid":
        raise HypersurfaceError("rigid obstruction report needs a rigid or hermitian-rigid spec")
    phi = spec.phi[0]
    V = phi.vars
    pairs, raw = [], []
    for k in range(1, spec.m + 1):
        g = phi.diff(f"z{k}")
        coords = [TruncSeries.var(V, n, g.order) for n in V.names]
        names = tuple(V.names) + ("G",)
        res = dependence_search(coords + [g], D, min(N, g.order), names=names)
        entry, r = _pair_entry(f"phi_z{k}", res)
        pairs.append(entry)
        raw.append(r)
    witnessed = any(isinstance(r, NoRelation) for r in raw)
    return {
        "form": "phi_z algebraic over (z, zbar)",
        "bounds": {"D": D, "N": N},
        "pairs": pairs,
        "normal_form_checked": spec.has_normal_chi(),
        "summary": f"obstruction witnessed up to (D={D}, N={N})" if witnessed else "no obstruction found",
        "obstructed": witnessed,
    }


# ---------------------------------------------------------------------------
# Segre chains and minimality
# ---------------------------------------------------------------------------


def chain_varset(m: int, k: int) -> VarSet:
    return VarSet(tuple(f"a{j}_{c}" for j in range(1, k + 1) for c in range(1, m + 1)))


@dataclass
class SegreChainMap:
    """Gamma_k (or its conjugate chain) as series in the chain parameters."""

    m: int
    d: int
    k: int
    conjugate: bool
    z: list
    w: list
    zeta: list
    xi: list
    rank_at_0: int = 0
    generic_rank: int = 0
    rank_over_origin: int | None = None
    samples: list = field(default_factory=list)

    @property
    def varset(self) -> VarSet:
        return self.z[0].vars

    def components(self) -> list:
        return list(self.z) + list(self.w) + list(self.zeta) + list(self.xi)

    def jacobian_at(self, point: dict) -> ExactMatrix:
        names = self.varset.names
        rows = []
        for comp in self.components():
            rows.append([comp.diff(n).eval_at(point) for n in names])
        return ExactMatrix(rows)

    def jacobian_at_origin(self) -> ExactMatrix:
        names = self.varset.names
        rows = []
        for comp in self.components():
            row = []
            for n in names:
                e = [0] * len(names)
                e[names.index(n)] = 1
                row.append(comp.terms.get(tuple(e), ZERO))
            rows.append(row)
        return ExactMatrix(rows)


def _flow_step(eq: ComplexDefEq, theta: list, p: dict, A: VarSet, j: int, holo: bool, cap) -> dict:
    m = eq.m
    step = [TruncSeries.var(A, f"a{j}_{c}") for c in range(1, m + 1)]
    if holo:
        z = [p["z"][c] + step[c] for c in range(m)]
        subst = {f"z{c + 1}": z[c] for c in range(m)}
        subst.update({f"zeta{c + 1}": p["zeta"][c] for c in range(m)})
        subst.update({f"xi{i + 1}": p["xi"][i] for i in range(eq.d)})
        w = [tb.compose(subst, order=cap, target=A) for tb in eq.theta_bar]
        return {"z": z, "w": w, "zeta": p["zeta"], "xi": p["xi"]}
    zeta = [p["zeta"][c] + step[c] for c in range(m)]
    subst = {f"zeta{c + 1}": zeta[c] for c in range(m)}
    subst.update({f"z{c + 1}": p["z"][c] for c in range(m)})
    subst.update({f"w{i + 1}": p["w"][i] for i in range(eq.d)})
    xi = [t.compose(subst, order=cap, target=A) for t in theta]
    return {"z": p["z"], "w": p["w"], "zeta": zeta, "xi": xi}


def _chain_points(A: VarSet, rng: random.Random, count: int) -> list:
    pts = []
    for _ in range(count):
        pt = {}
        for n in A.names:
            re = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            im = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            pt[n] = GaussRat(re, im)
        pts.append(pt)
    return pts


def _return_point(m: int, k: int, base: dict) -> dict | None:
    """(a_1, .., a_j, 0, -a_j, .., -a_1, 0..) which every chain maps to the origin."""
    j = (k - 1) // 2
    if j < 1:
        return None
    seq = [[base[f"a{i}_{c}"] for c in range(1, m + 1)] for i in range(1, j + 1)]
    full = seq + [[ZERO] * m] + [[-x for x in v] for v in reversed(seq)]
    full += [[ZERO] * m] * (k - len(full))
    return {f"a{i + 1}_{c + 1}": full[i][c] for i in range(k) for c in range(m)}


def segre_chain(
    eq: ComplexDefEq,
    k: int,
    conjugate: bool = False,
    seed: int = 0,
    samples: int = 3,
    order=None,
) -> SegreChainMap:
    """Alternate the two Segre flows k times starting from the origin.

    ``generic_rank`` is the largest Jacobian rank over ``samples`` random
    Gaussian-rational points (a certified lower bound for exact data).
    ``rank_over_origin`` is the same maximum over points that the chain maps
    back to the origin.
    """
    if k < 1:
        raise ValueError("chain length must be at least 1")
    m, d = eq.m, eq.d
    A = chain_varset(m, k)
    cap = eq.order if order is None else min(order, eq.order)
    theta = eq.theta()
    zero = TruncSeries.zero(A)
    p = {"z": [zero] * m, "w": [zero] * d, "zeta": [zero] * m, "xi": [zero] * d}
    for j in range(1, k + 1):
        holo = (j % 2 == 1) != conjugate
        p = _flow_step(eq, theta, p, A, j, holo, cap)
    gm = SegreChainMap(m, d, k, conjugate, p["z"], p["w"], p["zeta"], p["xi"])
    gm.rank_at_0 = gm.jacobian_at_origin().rank()
    rng = random.Random(seed * 1000003 + k)
    pts = _chain_points(A, rng, samples)
    gm.samples = pts
    gm.generic_rank = max(gm.jacobian_at(pt).rank() for pt in pts)
    back = [_return_point(m, k, pt) for pt in pts]
    if back[0] is not None:
        gm.rank_over_origin = max(gm.jacobian_at(pt).rank() for pt in back)
    return gm


def conjugation_holds(eq: ComplexDefEq, k: int, order=None) -> bool:
    """sigma(Gamma_k(a)) == conjugate chain at conj(a), as a series identity."""
    g = segre_chain(eq, k, False, order=order, samples=1)
    h = segre_chain(eq, k, True, order=order, samples=1)
    lhs = [s.conj() for s in list(g.zeta) + list(g.xi) + list(g.z) + list(g.w)]
    rhs = h.components()
    for a, b in zip(lhs, rhs):
        n = min(a.order, b.order)
        if n == INF:
            if a != b:
                return False
        elif not a.equal_mod(b, n):
            return False
    return True


def minimality(eq: ComplexDefEq, k_max: int = 6, seed: int = 0, order=None) -> dict:
    full = 2 * eq.m + eq.d
    chains = [segre_chain(eq, k, seed=seed, order=order) for k in range(1, k_max + 1)]
    ranks = [
        {
            "k": g.k,
            "rank_at_0": g.rank_at_0,
            "generic_rank": g.generic_rank,
            "rank_over_origin": g.rank_over_origin,
        }
        for g in chains
    ]
    nu0 = None
    for k in range(0, k_max):
        if all(chains[j - 1].generic_rank == full for j in range(k + 1, k_max + 1)):
            nu0 = k
            break
    out = {
        "full_rank": full,
        "ranks": ranks,
        "generic_rank_label": "certified >=",
        "seed": seed,
        "k_max": k_max,
    }
    if nu0 is None or nu0 + 1 > k_max:
        out.update(minimal="undetermined", nu0=None, mu0=None)
        return out
    mu0 = 2 * nu0 + 1
    out["nu0"] = nu0
    out["mu0"] = mu0
    if mu0 <= k_max:
        g = chains[mu0 - 1]
        out["rank_at_0_mu0"] = g.rank_at_0
        out["rank_over_origin_mu0"] = g.rank_over_origin
        out["cross_check"] = g.rank_over_origin == full
    else:
        out["rank_at_0_mu0"] = None
        out["rank_over_origin_mu0"] = None
        out["cross_check"] = None
    out["minimal"] = True
    return out
