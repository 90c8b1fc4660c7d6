"""Point symmetries of the second-order system: prolongation, tangency, solving.

A vector field ``X = sum Q^k d/dz_k + R d/dw`` is represented either
concretely (:class:`VectorField`, series coefficients) or symbolically
(:class:`VectorFieldAnsatz`, every Taylor coefficient an unknown).  The
prolongation code is shared: it only needs ``diff``, ``+``, ``-`` and
multiplication by a :class:`TruncSeries`, which both :class:`TruncSeries`
and :class:`LinSeries` provide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .exactnum import ONE, ZERO, GaussRat, RowReducer, to_gauss
from .segre import HypersurfaceSpec, PDESystem, pde_varset
from .series import INF, SeriesError, TruncSeries, VarSet, monomials_upto

__all__ = [
    "LinForm",
    "LinSeries",
    "VectorFieldAnsatz",
    "VectorField",
    "ProlongedField",
    "DeterminingSystem",
    "SymmetryAlgebra",
    "base_varset",
    "prolong2",
    "tangency_residual",
    "extract_determining",
    "solve_symmetries",
    "compute_symmetries",
    "verify_field",
    "classify",
    "translations",
]


def base_varset(m: int) -> VarSet:
    return VarSet(tuple(f"z{k}" for k in range(1, m + 1)) + ("w",))


# ---------------------------------------------------------------------------
# linear forms in the unknown Taylor coefficients
# ---------------------------------------------------------------------------


class LinForm:
    """Finite GaussRat combination of unknown ids (ints)."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = to_gauss(v)
                if v:
                    self.c[k] = v

    @classmethod
    def unknown(cls, uid: int, c=ONE):
        out = cls()
        out.c[uid] = to_gauss(c)
        return out

    @classmethod
    def _wrap(cls, d):
        out = object.__new__(cls)
        out.c = d
        return out

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, LinForm):
            return self.c == other.c
        if other == 0:
            return not self.c
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "LinForm") -> "LinForm":
        d = dict(self.c)
        for k, v in other.c.items():
            s = d.get(k)
            s = v if s is None else s + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return LinForm._wrap(d)

    def __neg__(self):
        return LinForm._wrap({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LinForm":
        c = to_gauss(c)
        if not c:
            return LinForm()
        return LinForm._wrap({k: v * c for k, v in self.c.items()})

    def items(self):
        return sorted(self.c.items())

    def evaluate(self, values) -> GaussRat:
        """Value when unknown ``k`` takes ``values[k]``."""
        total = ZERO
        for k, v in self.c.items():
            x = values.get(k, ZERO) if isinstance(values, dict) else values[k]
            if x:
                total = total + v * x
        return total

    def render(self, names=None) -> str:
        if not self.c:
            return "0"
        parts = []
        for k, v in self.items():
            name = names[k] if names else f"u{k}"
            neg = (not v.im and v.re < 0) or (not v.re and v.im < 0)
            body = str(-v if neg else v)
            body = name if body == "1" else f"{body}*{name}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"LinForm({self.render()})"


def _acc_add(acc: dict, e, uid_coeffs: dict, c: GaussRat):
    slot = acc.get(e)
    if slot is None:
        slot = acc[e] = {}
    cr, ci = c.re, c.im
    for k, v in uid_coeffs.items():
        re = cr * v.re - ci * v.im
        im = cr * v.im + ci * v.re
        s = slot.get(k)
        if s is None:
            slot[k] = [re, im]
        else:
            s[0] += re
            s[1] += im


def _acc_finish(acc: dict) -> dict:
    out = {}
    for e, slot in acc.items():
        d = {k: GaussRat._raw(re, im) for k, (re, im) in slot.items() if re or im}
        if d:
            out[e] = LinForm._wrap(d)
    return out


class LinSeries:
    """Truncated series whose coefficients are :class:`LinForm` s."""

    __slots__ = ("vars", "terms", "order")

    def __init__(self, vars: VarSet, terms=None, order=INF):
        self.vars = vars
        self.order = order
        self.terms = {}
        if terms:
            for e, lf in terms.items():
                if lf and sum(e) <= order:
                    self.terms[tuple(e)] = lf

    def _new(self, terms, order):
        out = object.__new__(LinSeries)
        out.vars = self.vars
        out.order = order
        if order != INF:
            terms = {e: lf for e, lf in terms.items() if sum(e) <= order}
        out.terms = terms
        return out

    def lowest_degree(self):
        if not self.terms:
            return INF if self.order == INF else self.order + 1
        return min(sum(e) for e in self.terms)

    def is_zero(self):
        return not self.terms

    def coeff(self, mon) -> LinForm:
        return self.terms.get(tuple(mon), LinForm())

    def items(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            if other.is_zero():
                return self._new(dict(self.terms), min(self.order, other.order))
            raise SeriesError("cannot add a nonzero concrete series to a linear series")
        if self.vars != other.vars:
            raise SeriesError("VarSet mismatch")
        terms = dict(self.terms)
        for e, lf in other.terms.items():
            s = terms.get(e)
            s = lf if s is None else s + lf
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return self._new(terms, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -lf for e, lf in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LinSeries":
        c = to_gauss(c)
        return self._new({e: lf.scale(c) for e, lf in self.terms.items()} if c else {}, self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        if other.vars != self.vars:
            raise SeriesError("VarSet mismatch")
        order = min(self.order + other.lowest_degree(), other.order + self.lowest_degree())
        acc: dict = {}
        other_items = sorted(((sum(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0])
        for e1, lf in self.terms.items():
            d1 = sum(e1)
            for d2, e2, c in other_items:
                if d1 + d2 > order:
                    break
                e = tuple(a + b for a, b in zip(e1, e2))
                _acc_add(acc, e, lf.c, c)
        return self._new(_acc_finish(acc), order)

    __rmul__ = __mul__

    def diff(self, name: str, times: int = 1) -> "LinSeries":
        idx = self.vars.index(name)
        out = self
        for _ in range(times):
            terms = {}
            for e, lf in out.terms.items():
                k = e[idx]
                if k:
                    terms[e[:idx] + (k - 1,) + e[idx + 1 :]] = lf.scale(k)
            out = out._new(terms, out.order - 1 if out.order != INF else INF)
        return out

    def embed(self, target: VarSet) -> "LinSeries":
        pos = [target.index(n) for n in self.vars.names]
        terms = {}
        for e, lf in self.terms.items():
            ne = [0] * len(target)
            for i, k in zip(pos, e):
                ne[i] = k
            terms[tuple(ne)] = lf
        return LinSeries(target, terms, self.order)

    def truncate(self, n) -> "LinSeries":
        return self._new(dict(self.terms), min(self.order, n))

    def evaluate(self, values) -> TruncSeries:
        """Concrete series obtained by assigning values to the unknowns."""
        return TruncSeries(self.vars, {e: lf.evaluate(values) for e, lf in self.terms.items()}, self.order)


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


def _fmt_coeff_series(s: TruncSeries) -> str:
    text = s.render(show_order=False)
    if len(s.terms) == 1:
        return text
    return f"({text})"


@dataclass
class VectorField:
    """``sum Q[k] d/dz_{k+1} + R d/dw`` with polynomial or series coefficients."""

    m: int
    Q: list
    R: TruncSeries

    @property
    def varset(self) -> VarSet:
        return base_varset(self.m)

    def components(self) -> list:
        return list(self.Q) + [self.R]

    def render(self) -> str:
        names = [f"d/dz{k}" for k in range(1, self.m + 1)] + ["d/dw"]
        parts = []
        for s, nm in zip(self.components(), names):
            if s.is_zero():
                continue
            c = _fmt_coeff_series(s)
            if c == "1":
                body = nm
            elif c == "-1":
                body = "-" + nm
            else:
                body = f"{c}*{nm}"
            if parts and not body.startswith("-"):
                parts.append(" + " + body)
            elif parts:
                parts.append(" - " + body[1:])
            else:
                parts.append(body)
        return "".join(parts) if parts else "0"

    def value_at_origin(self) -> list:
        return [s.constant_term() for s in self.components()]

    def coefficient_vector(self, monos) -> list:
        """Coefficients over (component, monomial) in ansatz order."""
        out = []
        for s in self.components():
            for e in monos:
                out.append(s.terms.get(e, ZERO))
        return out

    def max_degree(self) -> int:
        return max(s.max_degree() for s in self.components())

    def __str__(self):
        return self.render()


def translations(m: int) -> list:
    B = base_varset(m)
    one = TruncSeries.const(B, ONE)
    zero = TruncSeries.zero(B)
    out = []
    for k in range(m):
        out.append(VectorField(m, [one if j == k else zero for j in range(m)], zero))
    out.append(VectorField(m, [zero] * m, one))
    return out


class VectorFieldAnsatz:
    """Polynomial field of degree <= D with one unknown per Taylor coefficient."""

    def __init__(self, m: int, degree: int):
        self.m = m
        self.degree = degree
        self.base = base_varset(m)
        self.monomials = monomials_upto(m + 1, degree)
        self.func_names = [f"Q{k}" for k in range(1, m + 1)] + ["R"]
        self.unknowns = [(f, e) for f in range(m + 1) for e in self.monomials]
        self.index = {u: i for i, u in enumerate(self.unknowns)}
        self.functions = []
        for f in range(m + 1):
            terms = {e: LinForm.unknown(self.index[(f, e)]) for e in self.monomials}
            self.functions.append(LinSeries(self.base, terms, INF))

    @property
    def Q(self):
        return self.functions[: self.m]

    @property
    def R(self):
        return self.functions[self.m]

    def __len__(self):
        return len(self.unknowns)

    def unknown_name(self, uid: int) -> str:
        f, e = self.unknowns[uid]
        return f"{self.func_names[f]}[{','.join(map(str, e))}]"

    def names(self) -> list:
        return [self.unknown_name(i) for i in range(len(self.unknowns))]

    def unknown_degree(self, uid: int) -> int:
        return sum(self.unknowns[uid][1])

    def field_from_vector(self, vec) -> VectorField:
        comps = []
        for f in range(self.m + 1):
            terms = {}
            for e in self.monomials:
                c = vec[self.index[(f, e)]]
                if c:
                    terms[e] = c
            comps.append(TruncSeries(self.base, terms, INF))
        return VectorField(self.m, comps[: self.m], comps[self.m])

    def vector_from_field(self, X: VectorField) -> list:
        out = [ZERO] * len(self.unknowns)
        for f, s in enumerate(X.components()):
            for e, c in s.terms.items():
                if sum(e) > self.degree:
                    raise SeriesError("field exceeds ansatz degree")
                out[self.index[(f, e)]] = c
        return out

    def derivative_form(self, func: str, dexps: dict, mon: dict) -> LinForm:
        """Taylor coefficient at ``mon`` of a derivative of an ansatz function.

        ``func`` is ``"Q1"``..``"R"``; ``dexps`` and ``mon`` map base variable
        names to exponents.  Used to express hand-written PDEs in the unknowns.
        """
        f = self.func_names.index(func)
        s = self.functions[f]
        for name, k in dexps.items():
            if k:
                s = s.diff(name, k)
        e = [0] * len(self.base)
        for name, k in mon.items():
            e[self.base.index(name)] = k
        return s.coeff(tuple(e))


# ---------------------------------------------------------------------------
# prolongation and tangency
# ---------------------------------------------------------------------------


@dataclass
class ProlongedField:
    """``R1[l]`` and ``R2[(k1, k2)] = (free part, {(m1, m2): coefficient of W2_{m1,m2}})``.

    Indices are 1-based.  All parts are series over (z, w, W).
    """

    m: int
    R1: dict
    R2: dict
    Q: list
    R: object


def _embed(s, target):
    return s.embed(target)


def _add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def prolong2(X, jets: VarSet | None = None) -> ProlongedField:
    """Second prolongation by the universal formulas, Kronecker terms included."""
    m = X.m
    P = jets if jets is not None else pde_varset(m)
    Q = [_embed(q, P) for q in X.Q]
    R = _embed(X.R, P)
    W = {l: TruncSeries.var(P, f"W{l}") for l in range(1, m + 1)}
    zs = [f"z{k}" for k in range(1, m + 1)]
    rng = range(1, m + 1)

    def dz(s, k):
        return s.diff(zs[k - 1])

    def dw(s):
        return s.diff("w")

    def delta(a, b):
        return 1 if a == b else 0

    Rw = dw(R)
    Qw = {k: dw(Q[k - 1]) for k in rng}
    R1 = {}
    for l in rng:
        acc = dz(R, l)
        for m1 in rng:
            br = None
            if delta(l, m1):
                br = Rw
            br = _add(br, -dz(Q[m1 - 1], l))
            acc = _add(acc, br * W[m1])
        for m1, m2 in iproduct(rng, rng):
            if delta(l, m1):
                acc = _add(acc, -(Qw[m2] * (W[m1] * W[m2])))
        R1[l] = acc

    Rww = dw(Rw)
    R2 = {}
    for k1, k2 in iproduct(rng, rng):
        free = dz(dz(R, k1), k2)
        for m1 in rng:
            br = -dz(dz(Q[m1 - 1], k1), k2)
            if delta(k1, m1):
                br = br + dz(Rw, k2)
            if delta(k2, m1):
                br = br + dz(Rw, k1)
            free = free + br * W[m1]
        for m1, m2 in iproduct(rng, rng):
            br = None
            if delta(k1, m1) and delta(k2, m2):
                br = Rww
            if delta(k1, m1):
                br = _add(br, -dz(Qw[m2], k2))
            if delta(k2, m1):
                br = _add(br, -dz(Qw[m2], k1))
            if br is not None:
                free = free + br * (W[m1] * W[m2])
        for m1, m2, m3 in iproduct(rng, rng, rng):
            if delta(k1, m1) and delta(k2, m2):
                free = free - dw(Qw[m3]) * (W[m1] * W[m2] * W[m3])
        second = {}
        for m1, m2 in iproduct(rng, rng):
            br = None
            if delta(k1, m1) and delta(k2, m2):
                br = Rw
            if delta(k1, m1):
                br = _add(br, -dz(Q[m2 - 1], k2))
            if delta(k2, m1):
                br = _add(br, -dz(Q[m2 - 1], k1))
            if br is not None:
                second[(m1, m2)] = br
        for m1, m2, m3 in iproduct(rng, rng, rng):
            br = None
            if delta(k1, m1) and delta(k2, m2):
                br = -Qw[m3]
            if delta(k1, m2) and delta(k2, m3):
                br = _add(br, -Qw[m1])
            if delta(k1, m3) and delta(k2, m1):
                br = _add(br, -Qw[m2])
            if br is not None:
                key = (m2, m3)
                second[key] = _add(second.get(key), br * W[m1])
        R2[(k1, k2)] = (free, second)
    return ProlongedField(m, R1, R2, Q, R)


def tangency_residual(p: ProlongedField, sys: PDESystem) -> dict:
    """Left side of the tangency condition with W2 replaced by F, per (k1, k2) with k1 <= k2."""
    m = p.m
    zs = [f"z{k}" for k in range(1, m + 1)]
    out = {}
    for k1 in range(1, m + 1):
        for k2 in range(k1, m + 1):
            F = sys.f(k1, k2)
            free, second = p.R2[(k1, k2)]
            acc = free
            for (m1, m2), coef in second.items():
                acc = acc + coef * sys.f(m1, m2)
            for k in range(1, m + 1):
                acc = acc - p.Q[k - 1] * F.diff(zs[k - 1])
            acc = acc - p.R * F.diff("w")
            for l in range(1, m + 1):
                acc = acc - p.R1[l] * F.diff(f"W{l}")
            out[(k1, k2)] = acc.truncate(sys.trusted_order - 1)
    return out


# ---------------------------------------------------------------------------
# determining system
# ---------------------------------------------------------------------------


@dataclass
class DeterminingSystem:
    """Linear equations ``form = 0`` tagged by ((k1, k2), monomial in z, w, W)."""

    m: int
    equations: list
    trusted_order: object
    jet_degree: object = None
    names: list = field(default_factory=list)

    def __len__(self):
        return len(self.equations)

    def render(self) -> list[str]:
        P = pde_varset(self.m)
        lines = []
        for (pair, e), lf in self.equations:
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(P.names, e) if k) or "1"
            lines.append(f"[{pair[0]},{pair[1]}] {mon}: {lf.render(self.names or None)} = 0")
        return lines

    def reducer(self, nunknowns: int) -> RowReducer:
        rr = RowReducer(nunknowns)
        for _, lf in self.equations:
            rr.add(lf.c)
        return rr


def extract_determining(residual: dict, N_trust, m: int | None = None, jet_degree=None, names=None) -> DeterminingSystem:
    """One equation per trusted (z, w, W)-monomial of each residual.

    With ``jet_degree = D'`` only monomials whose (z, w)-degree is at most
    ``D' - 2`` are kept; those are the equations whose coefficients are
    determined by the ``D'``-jet of the field.
    """
    if m is None:
        m = next(iter(residual.values())).vars.names.index("w") if residual else 1
    eqs = []
    for pair in sorted(residual):
        res = residual[pair]
        for e, lf in res.items():
            if sum(e) > N_trust or not lf:
                continue
            if jet_degree is not None and sum(e[: m + 1]) > jet_degree - 2:
                continue
            eqs.append(((pair, e), lf))
    return DeterminingSystem(m, eqs, N_trust, jet_degree, list(names or []))


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------


@dataclass
class SymmetryAlgebra:
    basis: list
    dim: int
    metadata: dict

    @property
    def dim_real(self) -> int:
        return self.dim

    def render(self) -> list[str]:
        return [X.render() for X in self.basis]


def _project_basis(vectors, keep: list) -> list:
    """Independent reduced basis of the projections of ``vectors`` onto ``keep``."""
    rr = RowReducer(len(keep))
    for v in vectors:
        rr.add({j: v[i] for j, i in enumerate(keep) if v[i]})
    return list(rr.pivot_rows().values())


def solve_symmetries(ds: DeterminingSystem, ansatz: VectorFieldAnsatz, project_to: int | None = None) -> SymmetryAlgebra:
    """Nullspace of the determining system, mapped back to vector fields.

    ``project_to`` keeps only the Taylor coefficients of degree <= that bound
    (the jets the windowed system actually constrains).
    """
    n = len(ansatz)
    rr = ds.reducer(n)
    null = rr.nullspace()
    if project_to is None or project_to >= ansatz.degree:
        vecs = [dict(enumerate(v)) for v in null]
        rr2 = RowReducer(n)
        for v in vecs:
            rr2.add({k: c for k, c in v.items() if c})
        rows = list(rr2.pivot_rows().values())
        target = ansatz
        keep = list(range(n))
    else:
        target = VectorFieldAnsatz(ansatz.m, project_to)
        keep = [ansatz.index[u] for u in target.unknowns]
        rows = _project_basis(null, keep)
    basis = []
    for row in rows:
        vec = [row.get(j, ZERO) for j in range(len(keep))]
        basis.append(target.field_from_vector(vec))
    return SymmetryAlgebra(
        basis,
        len(basis),
        {
            "D": target.degree,
            "N_trust": ds.trusted_order,
            "jet_degree": ds.jet_degree,
            "semantics": "upper bound on degree-<=D jet space of symmetries",
        },
    )


def determining_for(sys: PDESystem, ansatz: VectorFieldAnsatz, jet_degree=None) -> DeterminingSystem:
    res = tangency_residual(prolong2(ansatz), sys)
    N = sys.trusted_order - 1
    return extract_determining(res, N, sys.m, jet_degree, ansatz.names())


def verify_field(X: VectorField, sys: PDESystem, jet_degree=None) -> bool:
    """Re-prolong a concrete field and check its residual vanishes where trusted.

    ``jet_degree`` restricts the check to (z, w)-degree <= jet_degree - 2, the
    part of the residual fixed by the degree-<=jet_degree jet of ``X``.
    """
    res = tangency_residual(prolong2(X), sys)
    N = sys.trusted_order - 1
    m = sys.m
    for r in res.values():
        for e, c in r.terms.items():
            if sum(e) > N or not c:
                continue
            if jet_degree is not None and sum(e[: m + 1]) > jet_degree - 2:
                continue
            return False
    return True


def compute_symmetries(sys: PDESystem, D: int = 3, max_slack: int | None = None) -> SymmetryAlgebra:
    """Symmetry algebra up to degree-D jets from a truncated system.

    Two bounds are computed.  The lower one is the space of polynomial fields
    of degree <= D whose residual vanishes through the trusted order.  The
    upper one takes ansaetze of degree D + s, keeps only the equations fixed
    by the (D + s)-jet, and projects the solutions to degree <= D; it shrinks
    as ``s`` grows.  Iteration stops once both bounds meet, when the jet
    window passes the trusted order, or after ``max_slack`` steps if given.
    """
    N = sys.trusted_order - 1
    poly = VectorFieldAnsatz(sys.m, D)
    poly_ds = determining_for(sys, poly)
    lower = solve_symmetries(poly_ds, poly)
    upper = None
    used = D
    history = []
    s = -1
    while max_slack is None or s < max_slack:
        s += 1
        Dp = D + s
        if Dp - 2 > N:
            break
        ans = VectorFieldAnsatz(sys.m, Dp)
        ds = determining_for(sys, ans, jet_degree=Dp)
        upper = solve_symmetries(ds, ans, project_to=D)
        used = Dp
        history.append(upper.dim)
        if upper.dim == lower.dim:
            break
    exact = upper is not None and upper.dim == lower.dim
    alg = lower if exact or upper is None else upper
    for X in alg.basis:
        if not verify_field(X, sys, None if exact else D):
            raise VerificationError(f"symmetry {X.render()} failed re-verification")
    meta = {
        "D": D,
        "N_trust": N,
        "jet_degree": used,
        "slack_dims": history,
        "polynomial_dim": lower.dim,
        "bounds_meet": exact,
        "semantics": "upper bound on degree-<=D jet space of symmetries",
    }
    return SymmetryAlgebra(alg.basis, len(alg.basis), meta)


class VerificationError(RuntimeError):
    pass


def _span_rank(fields: list, D: int, m: int) -> int:
    ans = VectorFieldAnsatz(m, D)
    rr = RowReducer(len(ans))
    for X in fields:
        v = ans.vector_from_field(X)
        rr.add({i: c for i, c in enumerate(v) if c})
    return rr.rank


def same_span(a: list, b: list, m: int) -> bool:
    D = max([X.max_degree() for X in a + b] + [0])
    ra = _span_rank(a, D, m)
    return ra == _span_rank(b, D, m) == _span_rank(a + b, D, m)


def classify(alg: SymmetryAlgebra, spec: HypersurfaceSpec) -> dict:
    m = spec.m
    meta = alg.metadata
    bounds = f"(D={meta.get('D')}, N_trust={meta.get('N_trust')})"
    trans = translations(m)
    is_trans = alg.dim == m + 1 and same_span(alg.basis, trans, m)
    strong_tube = spec.kind == "tube" and is_trans
    strongly_rigid = alg.dim == 1 and any(alg.basis[0].value_at_origin())
    notes = [f"dim_C Sym = {alg.dim} is an upper bound at {bounds}; dim_R Aut_CR taken equal"]
    if spec.kind == "tube":
        notes.append("translations d/dz_k, d/dw are symmetries of every tube (lower bound)")
        if strong_tube:
            notes.append(f"strong tube certified at {bounds}")
    if strongly_rigid:
        notes.append(f"strongly rigid certified at {bounds}")
    return {"strong_tube": strong_tube, "strongly_rigid": strongly_rigid, "notes": notes}
