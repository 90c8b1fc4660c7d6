"""Complexified defining equations and the second-order PDE system they induce."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactnum import ONE, ZERO, GaussRat, I
from .series import (
    INF,
    ImplicitFunctionError,
    SeriesError,
    TruncSeries,
    VarSet,
    implicit_solve,
)

__all__ = [
    "HypersurfaceError",
    "LeviDegenerateError",
    "HypersurfaceSpec",
    "ComplexDefEq",
    "PDESystem",
    "KINDS",
    "input_varset",
    "complex_varset",
    "pde_varset",
    "complexify",
    "derive_pde_system",
    "segre_graph",
    "segre_residual",
]

KINDS = ("tube", "rigid", "hermitian-rigid")

TWO_I = GaussRat(0, 2)
HALF_OVER_I = GaussRat(0, -1) / 2  # 1/(2i)


class HypersurfaceError(ValueError):
    pass


class LeviDegenerateError(HypersurfaceError):
    pass


def input_varset(kind: str, m: int) -> VarSet:
    """Variables in which ``phi`` is written for each kind."""
    if kind == "tube":
        return VarSet(tuple(f"y{k}" for k in range(1, m + 1)))
    if kind == "rigid":
        return VarSet(
            tuple(f"z{k}" for k in range(1, m + 1)) + tuple(f"zb{k}" for k in range(1, m + 1))
        )
    if kind == "hermitian-rigid":
        return VarSet(("r",))
    raise HypersurfaceError(f"unknown kind {kind!r}; expected one of {KINDS}")


def complex_varset(m: int, d: int) -> VarSet:
    names = (
        tuple(f"z{k}" for k in range(1, m + 1))
        + tuple(f"zeta{k}" for k in range(1, m + 1))
        + tuple(f"xi{j}" for j in range(1, d + 1))
    )
    roles = ("base",) * m + ("param",) * (m + d)
    return VarSet(names, roles)


def pde_varset(m: int) -> VarSet:
    names = tuple(f"z{k}" for k in range(1, m + 1)) + ("w",) + tuple(f"W{k}" for k in range(1, m + 1))
    roles = ("base",) * (m + 1) + ("jet",) * m
    return VarSet(names, roles)


@dataclass(frozen=True)
class HypersurfaceSpec:
    """``v_j = phi_j`` for a tube, ``v = phi(z, zbar)`` or ``v = phi(z zbar)``."""

    kind: str
    m: int
    phi: tuple
    d: int = 1
    levi_signs: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(self.phi))
        if self.levi_signs is not None:
            object.__setattr__(self, "levi_signs", tuple(int(s) for s in self.levi_signs))
        self.validate()

    @property
    def n(self) -> int:
        return self.m + self.d

    @property
    def varset(self) -> VarSet:
        return input_varset(self.kind, self.m)

    @property
    def order(self):
        return min(p.order for p in self.phi)

    def validate(self):
        if self.kind not in KINDS:
            raise HypersurfaceError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.m < 1 or self.d < 1:
            raise HypersurfaceError("m and d must be positive")
        if self.kind != "tube" and self.d != 1:
            raise HypersurfaceError(f"{self.kind} hypersurfaces have codimension 1")
        if self.kind == "hermitian-rigid" and self.m != 1:
            raise HypersurfaceError("hermitian-rigid kind is defined for n = 2 only")
        if len(self.phi) != self.d:
            raise HypersurfaceError(f"expected {self.d} defining functions, got {len(self.phi)}")
        vs = self.varset
        for j, p in enumerate(self.phi, 1):
            if p.vars != vs:
                raise HypersurfaceError(f"phi{j} must be a series in {vs.names}, got {p.vars.names}")
            if not p.has_real_coefficients():
                raise HypersurfaceError(f"phi{j} has non-real coefficients")
            if p.constant_term():
                raise HypersurfaceError(f"phi{j}(0) must vanish")
            if self.kind == "rigid":
                m = self.m
                for e, c in p.terms.items():
                    mirror = e[m:] + e[:m]
                    if sum(mirror) <= p.order and p.terms.get(mirror, ZERO) != c.conj():
                        raise HypersurfaceError(
                            f"phi{j} is not real-valued: coefficient mismatch between "
                            f"exponents {e} and {mirror}"
                        )
        if self.levi_signs is not None:
            if len(self.levi_signs) != self.m or any(s not in (1, -1) for s in self.levi_signs):
                raise HypersurfaceError("levi_signs must be m entries of +1 or -1")
            if self.d == 1 and self.levi_matrix() != _diag(self.levi_signs):
                raise HypersurfaceError("quadratic part does not match the given Levi signs")

    def levi_matrix(self, j: int = 0):
        """Hermitian coefficient matrix of the z zbar (or y y) quadratic part.

        Normalised so that ``eps1 |z1|^2 + ...`` (or ``eps1 y1^2 + ...``) gives
        ``diag(eps)``.
        """
        p = self.phi[j]
        m = self.m
        if self.kind == "hermitian-rigid":
            return [[p.coeff((1,))]]
        if self.kind == "rigid":
            out = []
            for a in range(m):
                row = []
                for b in range(m):
                    e = [0] * (2 * m)
                    e[a] += 1
                    e[m + b] += 1
                    row.append(p.coeff(tuple(e)))
                out.append(row)
            return out
        out = []
        for a in range(m):
            row = []
            for b in range(m):
                e = [0] * m
                e[a] += 1
                e[b] += 1
                c = p.coeff(tuple(e))
                row.append(c if a == b else c / 2)
            out.append(row)
        return out

    def chi(self) -> TruncSeries:
        """``phi - sum eps_k |z_k|^2`` for rigid input (signs read off phi)."""
        if self.kind != "rigid":
            raise HypersurfaceError("chi is defined for the rigid kind")
        p = self.phi[0]
        m = self.m
        quad = {}
        for k in range(m):
            e = [0] * (2 * m)
            e[k] = 1
            e[m + k] = 1
            quad[tuple(e)] = p.terms.get(tuple(e), ZERO)
        return p - TruncSeries(p.vars, quad)

    def has_normal_chi(self) -> bool:
        """Check chi(0, zbar) == 0 and d/dz_k chi(0, zbar) == 0 through the known order."""
        c = self.chi()
        m = self.m
        for e in c.terms:
            if sum(e[:m]) <= 1:
                return False
        off_diag = any(
            self.levi_matrix()[a][b] for a in range(m) for b in range(m) if a != b
        )
        return not off_diag

    def linear_part(self) -> list:
        """Coefficients of the degree-one terms of each phi_j."""
        out = []
        for p in self.phi:
            out.append({p.vars.names[i]: p.terms[e] for e in p.terms if sum(e) == 1 for i in range(len(e)) if e[i]})
        return out

    def without_linear_part(self) -> "HypersurfaceSpec":
        """Same hypersurface after the affine change w_j -> w_j - sum a_jk z_k.

        Only tubes can carry linear terms compatibly with the other kinds'
        normal forms; the change is biholomorphic and commutes with
        translations.
        """
        phi = [p - TruncSeries(p.vars, {e: c for e, c in p.terms.items() if sum(e) == 1}) for p in self.phi]
        return HypersurfaceSpec(self.kind, self.m, phi, self.d, None)

    def is_polynomial(self) -> bool:
        return all(p.is_exact() for p in self.phi)


def _diag(signs):
    return [[GaussRat(s) if a == b else ZERO for b in range(len(signs))] for a, s in enumerate(signs)]


@dataclass
class ComplexDefEq:
    """``w_j = theta_bar_j(z, zeta, xi)``."""

    m: int
    d: int
    theta_bar: list

    @property
    def varset(self) -> VarSet:
        return complex_varset(self.m, self.d)

    @property
    def order(self):
        return min(t.order for t in self.theta_bar)

    def theta(self) -> list:
        """Conjugate equation ``xi = theta(zeta, z, w)`` as series over (z, zeta, w)."""
        m, d = self.m, self.d
        target = VarSet(
            tuple(f"z{k}" for k in range(1, m + 1))
            + tuple(f"zeta{k}" for k in range(1, m + 1))
            + tuple(f"w{j}" for j in range(1, d + 1))
        )
        rename = {}
        for k in range(1, m + 1):
            rename[f"z{k}"] = f"zeta{k}"
            rename[f"zeta{k}"] = f"z{k}"
        for j in range(1, d + 1):
            rename[f"xi{j}"] = f"w{j}"
        return [t.conj().embed(target, rename) for t in self.theta_bar]


def complexify(spec: HypersurfaceSpec) -> ComplexDefEq:
    spec.validate()
    m, d = spec.m, spec.d
    C = complex_varset(m, d)
    if spec.kind == "tube":
        subst = {
            f"y{k}": (TruncSeries.var(C, f"z{k}") - TruncSeries.var(C, f"zeta{k}")).scale(HALF_OVER_I)
            for k in range(1, m + 1)
        }
        parts = [p.compose(subst, target=C) for p in spec.phi]
    elif spec.kind == "rigid":
        rename = {f"zb{k}": f"zeta{k}" for k in range(1, m + 1)}
        parts = [p.embed(C, rename) for p in spec.phi]
    else:
        r = TruncSeries.var(C, "z1") * TruncSeries.var(C, "zeta1")
        parts = [p.compose({"r": r}, target=C) for p in spec.phi]
    theta_bar = [TruncSeries.var(C, f"xi{j}") + parts[j - 1].scale(TWO_I) for j in range(1, d + 1)]
    return ComplexDefEq(m, d, theta_bar)


@dataclass
class PDESystem:
    """``w_{z_k1 z_k2} = F[k1, k2](z, w, W)`` with ``W_l = w_{z_l}``."""

    m: int
    F: dict
    trusted_order: object
    solution: dict = field(default_factory=dict)

    @property
    def varset(self) -> VarSet:
        return pde_varset(self.m)

    def f(self, k1: int, k2: int) -> TruncSeries:
        """Right-hand side for 1-based indices, symmetric in (k1, k2)."""
        return self.F[(min(k1, k2), max(k1, k2))]

    def pairs(self):
        return sorted(self.F)

    def render(self) -> list[str]:
        out = []
        for k1, k2 in self.pairs():
            out.append(f"w_z{k1}z{k2} = {self.F[(k1, k2)].render()}")
        return out


def derive_pde_system(eq: ComplexDefEq, order=INF) -> PDESystem:
    """Eliminate (zeta, xi) between w = theta_bar and w_z = d theta_bar/dz."""
    if eq.d != 1:
        raise HypersurfaceError("the PDE system is implemented for hypersurfaces (d = 1) only")
    m = eq.m
    P = pde_varset(m)
    unknowns = [f"zeta{k}" for k in range(1, m + 1)] + ["xi1"]
    E = VarSet(P.names + tuple(unknowns), P.roles + ("param",) * (m + 1))
    tb = eq.theta_bar[0]
    if order != INF:
        tb = tb.truncate(order)
    G = [tb.embed(E) - TruncSeries.var(E, "w")]
    for k in range(1, m + 1):
        dk = tb.diff(f"z{k}")
        if dk.constant_term():
            raise HypersurfaceError("defining function has linear terms in z; expected normalized form")
        G.append(dk.embed(E) - TruncSeries.var(E, f"W{k}"))
    try:
        sol = implicit_solve(G, unknowns)
    except ImplicitFunctionError:
        raise LeviDegenerateError("Levi degenerate at origin; system not derivable at order 2") from None
    subst = {"zeta%d" % k: sol[f"zeta{k}"] for k in range(1, m + 1)}
    subst["xi1"] = sol["xi1"]
    F = {}
    for k1 in range(1, m + 1):
        for k2 in range(k1, m + 1):
            second = tb.diff(f"z{k1}").diff(f"z{k2}")
            F[(k1, k2)] = second.compose(subst, target=P)
    trusted = min(f.order for f in F.values())
    F = {k: v.truncate(trusted) for k, v in F.items()}
    return PDESystem(m, F, trusted, sol)


def segre_graph(eq: ComplexDefEq, zeta0, xi0) -> tuple[VarSet, TruncSeries]:
    """The Segre variety ``w = theta_bar(z, s*zeta0, s*xi0)`` over (z, s).

    The scaling variable ``s`` keeps every substitution free of constant terms,
    so a truncated theta_bar still gives an honestly ordered graph.
    """
    m = eq.m
    S = VarSet(tuple(f"z{k}" for k in range(1, m + 1)) + ("s",))
    s = TruncSeries.var(S, "s")
    subst = {f"z{k}": TruncSeries.var(S, f"z{k}") for k in range(1, m + 1)}
    for k in range(1, m + 1):
        subst[f"zeta{k}"] = s.scale(zeta0[k - 1])
    subst["xi1"] = s.scale(xi0)
    return S, eq.theta_bar[0].compose(subst, target=S)


def segre_residual(eq: ComplexDefEq, sys: PDESystem, zeta0, xi0) -> dict:
    """``w_{z_k1 z_k2} - F(z, w, w_z)`` along one Segre variety, per (k1, k2)."""
    m = eq.m
    S, wz = segre_graph(eq, zeta0, xi0)
    subst = {f"z{k}": TruncSeries.var(S, f"z{k}") for k in range(1, m + 1)}
    subst["w"] = wz
    for k in range(1, m + 1):
        subst[f"W{k}"] = wz.diff(f"z{k}")
    out = {}
    for (k1, k2), F in sys.F.items():
        lhs = wz.diff(f"z{k1}").diff(f"z{k2}")
        out[(k1, k2)] = lhs - F.compose(subst, target=S)
    return out
