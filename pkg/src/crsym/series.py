"""Sparse multivariate truncated power series over GaussRat.

A :class:`TruncSeries` stores a finite set of monomials together with its
guaranteed order ``N``: every coefficient of total degree ``<= N`` is exact,
nothing is known about degree ``> N``.  ``N = INF`` marks an exact polynomial.

Order bookkeeping:

* ``a + b`` is known to ``min(Na, Nb)``;
* ``a * b`` is known to ``min(Na + lb, Nb + la)`` where ``l`` is the lowest
  degree present (``N + 1`` for a series that is zero to its order);
* ``d/dx a`` is known to ``Na - 1``;
* composition propagates the same rules through every product it forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from gmpy2 import mpq

from .exactnum import ONE, ZERO, ExactMatrix, GaussRat, to_gauss

INF = math.inf

__all__ = [
    "INF",
    "VarSet",
    "TruncSeries",
    "SeriesError",
    "ImplicitFunctionError",
    "implicit_solve",
    "revert",
    "primitive",
    "PRIMITIVES",
    "monomials_upto",
]


class SeriesError(ValueError):
    pass


class ImplicitFunctionError(SeriesError):
    pass


@dataclass(frozen=True)
class VarSet:
    """Ordered variable names with optional roles (``base``, ``param``, ``jet``...)."""

    names: tuple[str, ...]
    roles: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise SeriesError(f"duplicate variable names in {names}")
        roles = tuple(self.roles) if self.roles else ("base",) * len(names)
        if len(roles) != len(names):
            raise SeriesError("roles must match names")
        object.__setattr__(self, "roles", roles)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SeriesError(f"unknown variable {name!r}") from None

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    def __add__(self, other: "VarSet") -> "VarSet":
        return VarSet(self.names + other.names, self.roles + other.roles)

    def without(self, names: Iterable[str]) -> "VarSet":
        drop = set(names)
        keep = [(n, r) for n, r in zip(self.names, self.roles) if n not in drop]
        return VarSet(tuple(n for n, _ in keep), tuple(r for _, r in keep))

    # equality by names only; roles are descriptive
    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)


def _deg(e):
    return sum(e)


def _grlex_key(e):
    return (sum(e), tuple(-x for x in e))


def monomials_upto(nvars: int, degree: int):
    """Exponent tuples of total degree <= ``degree``, in graded-lex order."""
    out = []
    for d in range(degree + 1):
        level = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            level.append(tuple(e))
        level.sort(key=_grlex_key)
        out.extend(level)
    return out


def _mul_terms(ta: dict, tb: dict, cap) -> dict:
    """Product of two term dicts keeping only degrees <= cap."""
    if not ta or not tb:
        return {}
    a_items = sorted(((sum(e), e, c) for e, c in ta.items()), key=lambda t: t[0])
    b_items = sorted(((sum(e), e, c) for e, c in tb.items()), key=lambda t: t[0])
    acc: dict[tuple, list] = {}
    for da, ea, ca in a_items:
        if da > cap:
            break
        ar, ai = ca.re, ca.im
        room = cap - da
        for db, eb, cb in b_items:
            if db > room:
                break
            br, bi = cb.re, cb.im
            e = tuple(x + y for x, y in zip(ea, eb))
            if ai:
                if bi:
                    re = ar * br - ai * bi
                    im = ar * bi + ai * br
                else:
                    re = ar * br
                    im = ai * br
            else:
                re = ar * br
                im = ar * bi
            slot = acc.get(e)
            if slot is None:
                acc[e] = [re, im]
            else:
                slot[0] += re
                slot[1] += im
    return {e: GaussRat._raw(re, im) for e, (re, im) in acc.items() if re or im}


class TruncSeries:
    """Truncated power series ``sum c_e x^e + O(order + 1)``."""

    __slots__ = ("vars", "terms", "order")

    def __init__(self, vars: VarSet, terms: Mapping | None = None, order=INF):
        if order != INF:
            if order < -1:
                order = -1
            order = int(order)
        self.vars = vars
        self.order = order
        n = len(vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise SeriesError("exponent length does not match VarSet")
                c = to_gauss(c)
                if c and sum(e) <= order:
                    clean[e] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, vars: VarSet, order=INF):
        return cls(vars, {}, order)

    @classmethod
    def const(cls, vars: VarSet, c, order=INF):
        return cls(vars, {(0,) * len(vars): c}, order)

    @classmethod
    def var(cls, vars: VarSet, name: str, order=INF):
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): ONE}, order)

    @classmethod
    def monomial(cls, vars: VarSet, exps: Mapping[str, int], c=ONE, order=INF):
        e = [0] * len(vars)
        for name, k in exps.items():
            e[vars.index(name)] = k
        return cls(vars, {tuple(e): c}, order)

    @classmethod
    def univariate(cls, vars: VarSet, name: str, coeffs, order):
        """Series in one variable from a coefficient list ``[c0, c1, ...]``."""
        idx = vars.index(name)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * len(vars)
            e[idx] = k
            terms[tuple(e)] = c
        return cls(vars, terms, order)

    def _new(self, terms, order):
        out = object.__new__(TruncSeries)
        out.vars = self.vars
        out.order = order
        if order != INF:
            terms = {e: c for e, c in terms.items() if sum(e) <= order}
        out.terms = terms
        return out

    # -- inspection -------------------------------------------------------
    def lowest_degree(self):
        if not self.terms:
            return INF if self.order == INF else self.order + 1
        return min(sum(e) for e in self.terms)

    def max_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_exact(self) -> bool:
        return self.order == INF

    def is_zero(self) -> bool:
        return not self.terms

    def _exp(self, mon) -> tuple:
        if isinstance(mon, Mapping):
            e = [0] * len(self.vars)
            for name, k in mon.items():
                e[self.vars.index(name)] = k
            return tuple(e)
        return tuple(mon)

    def coeff(self, mon) -> GaussRat:
        """Coefficient of a monomial given as an exponent tuple or ``{name: k}``."""
        e = self._exp(mon)
        if sum(e) > self.order:
            raise SeriesError(f"coefficient of degree {sum(e)} beyond guaranteed order {self.order}")
        return self.terms.get(e, ZERO)

    def constant_term(self) -> GaussRat:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def items(self):
        """Terms in graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def degree_part(self, k: int) -> "TruncSeries":
        return self._new({e: c for e, c in self.terms.items() if sum(e) == k}, INF)

    def has_real_coefficients(self) -> bool:
        return all(not c.im for c in self.terms.values())

    def variables_present(self) -> set[str]:
        present = set()
        for e in self.terms:
            for name, k in zip(self.vars.names, e):
                if k:
                    present.add(name)
        return present

    # -- equality ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.vars == other.vars and self.order == other.order and self.terms == other.terms

    __hash__ = None

    def equal_mod(self, other: "TruncSeries", n) -> bool:
        """True if both agree on every degree <= n (n must be within both orders)."""
        if self.vars != other.vars:
            raise SeriesError("VarSet mismatch")
        if n > self.order or n > other.order:
            raise SeriesError("comparison beyond guaranteed order")
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(e, ZERO) == other.terms.get(e, ZERO) for e in keys if sum(e) <= n)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "TruncSeries"):
        if self.vars != other.vars:
            raise SeriesError(f"VarSet mismatch: {self.vars.names} vs {other.vars.names}")

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        return TruncSeries.const(self.vars, to_gauss(other))

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            v = c if v is None else v + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._new(terms, order)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "TruncSeries":
        c = to_gauss(c)
        if not c:
            return self._new({}, self.order)
        return self._new({e: v * c for e, v in self.terms.items()}, self.order)

    def mul(self, other, cap=INF) -> "TruncSeries":
        """Product truncated to ``min(guarantee, cap)``."""
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        order = min(self.order + other.lowest_degree(), other.order + self.lowest_degree(), cap)
        if order == INF and (self.order != INF or other.order != INF):
            # 0 * (something inexact) with exact zero: stays exactly zero
            order = INF
        return self._new(_mul_terms(self.terms, other.terms, order), order)

    def __mul__(self, other):
        return self.mul(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self.mul(other.reciprocal())
        return self.scale(to_gauss(other).inverse())

    def __pow__(self, k: int):
        return self.pow(k)

    def pow(self, k: int, cap=INF) -> "TruncSeries":
        if not isinstance(k, int) or k < 0:
            raise SeriesError("series powers must be nonnegative integers")
        result = TruncSeries.const(self.vars, ONE)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, cap)
            k >>= 1
            if k:
                base = base.mul(base, cap)
        return result

    def reciprocal(self, order=None) -> "TruncSeries":
        """1/s for a series with invertible constant term."""
        c0 = self.constant_term()
        if not c0:
            raise SeriesError("reciprocal of a series with zero constant term")
        n = self.order if order is None else min(self.order, order)
        if n == INF:
            raise SeriesError("reciprocal of an exact polynomial needs an explicit order")
        inv0 = c0.inverse()
        # x = (1 - s/c0), 1/s = (1/c0) * sum x^k
        x = TruncSeries.const(self.vars, ONE) - self.scale(inv0)
        x = x._new(x.terms, n)
        total = TruncSeries.const(self.vars, ONE, n)
        p = TruncSeries.const(self.vars, ONE, n)
        for _ in range(n):
            p = p.mul(x, n)
            if p.is_zero():
                break
            total = total + p
        return total.scale(inv0)

    # -- calculus ---------------------------------------------------------
    def diff(self, name: str, times: int = 1) -> "TruncSeries":
        idx = self.vars.index(name)
        out = self
        for _ in range(times):
            terms = {}
            for e, c in out.terms.items():
                k = e[idx]
                if k:
                    ne = e[:idx] + (k - 1,) + e[idx + 1 :]
                    terms[ne] = c * k
            out = out._new(terms, out.order - 1 if out.order != INF else INF)
        return out

    def diff_multi(self, exps: Mapping[str, int]) -> "TruncSeries":
        out = self
        for name, k in exps.items():
            if k:
                out = out.diff(name, k)
        return out

    def eval_at(self, point: Mapping[str, object]) -> GaussRat:
        """Exact value of the stored polynomial at a point (all variables bound)."""
        vals = []
        for name in self.vars.names:
            if name not in point:
                raise SeriesError(f"variable {name!r} is unbound")
            vals.append(to_gauss(point[name]))
        total = ZERO
        powcache: dict = {}
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    p = powcache.get(key)
                    if p is None:
                        p = vals[i] ** k
                        powcache[key] = p
                    t = t * p
            total = total + t
        return total

    def partial_eval(self, point: Mapping[str, object]) -> "TruncSeries":
        """Substitute numeric values for some variables (exact for polynomials only)."""
        if not self.is_exact():
            raise SeriesError("numeric substitution into an inexact series")
        keep = self.vars.without(point)
        idx_keep = [self.vars.index(n) for n in keep.names]
        vals = {self.vars.index(n): to_gauss(v) for n, v in point.items()}
        terms: dict = {}
        for e, c in self.terms.items():
            t = c
            for i, v in vals.items():
                if e[i]:
                    t = t * v ** e[i]
            ne = tuple(e[i] for i in idx_keep)
            terms[ne] = terms.get(ne, ZERO) + t
        return TruncSeries(keep, terms, INF)

    # -- structural -------------------------------------------------------
    def truncate(self, n) -> "TruncSeries":
        return self._new(dict(self.terms), min(self.order, n))

    def with_order(self, n) -> "TruncSeries":
        """Reassign the guarantee (only used for exact data such as polynomials)."""
        out = object.__new__(TruncSeries)
        out.vars = self.vars
        out.order = n
        out.terms = {e: c for e, c in self.terms.items() if sum(e) <= n}
        return out

    def conj(self) -> "TruncSeries":
        return self._new({e: c.conj() for e, c in self.terms.items()}, self.order)

    def embed(self, target: VarSet, rename: Mapping[str, str] | None = None) -> "TruncSeries":
        """Same series viewed in a VarSet containing (possibly renamed) variables."""
        rename = rename or {}
        pos = [target.index(rename.get(n, n)) for n in self.vars.names]
        terms = {}
        m = len(target)
        for e, c in self.terms.items():
            ne = [0] * m
            for i, k in zip(pos, e):
                ne[i] += k
            terms[tuple(ne)] = c
        return TruncSeries(target, terms, self.order)

    def drop_vars(self, target: VarSet) -> "TruncSeries":
        """Project onto a smaller VarSet; the dropped variables must be absent."""
        pos = [self.vars.index(n) for n in target.names]
        keep = set(pos)
        terms = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i not in keep):
                raise SeriesError("cannot drop a variable that occurs in the series")
            terms[tuple(e[i] for i in pos)] = c
        return TruncSeries(target, terms, self.order)

    def compose(self, subst: Mapping[str, "TruncSeries"], order=INF, target: VarSet | None = None) -> "TruncSeries":
        """Substitute series for variables.

        Every variable of ``self`` is either mapped in ``subst`` or kept as the
        same-named variable of the target VarSet.  Substituted series with a
        nonzero constant term are accepted only when ``self`` is an exact
        polynomial.
        """
        if target is None:
            vs = [s.vars for s in subst.values()]
            if not vs:
                return self
            target = vs[0]
        vals = []
        for name in self.vars.names:
            if name in subst:
                s = subst[name]
                if s.vars != target:
                    raise SeriesError("substitutions must share one VarSet")
            elif name in target:
                s = TruncSeries.var(target, name)
            else:
                raise SeriesError(f"no substitution for variable {name!r}")
            vals.append(s)

        present = self.variables_present()
        mu = INF
        for name, s in zip(self.vars.names, vals):
            if name in present:
                mu = min(mu, s.lowest_degree())
        if mu == 0 and self.order != INF:
            offenders = [n for n, s in zip(self.vars.names, vals) if n in present and s.constant_term()]
            raise SeriesError(
                f"substitution for {offenders} has a nonzero constant term; composition undefined"
            )
        res_order = order
        if self.order != INF:
            if mu == INF:
                mu = 1
            res_order = min(res_order, (self.order + 1) * mu - 1)
        n = len(vals)
        one = TruncSeries.const(target, ONE)
        powers: list[list[TruncSeries]] = [[one] for _ in range(n)]

        def power(i, k):
            lst = powers[i]
            while len(lst) <= k:
                lst.append(lst[-1].mul(vals[i], res_order))
            return lst[k]

        memo: dict[tuple, TruncSeries] = {(): one}
        acc: dict = {}
        out_order = res_order
        for e, c in sorted(self.terms.items()):
            key = ()
            prod = one
            for i in range(n):
                nk = key + (e[i],)
                cached = memo.get(nk)
                if cached is None:
                    cached = prod if e[i] == 0 else prod.mul(power(i, e[i]), res_order)
                    memo[nk] = cached
                key, prod = nk, cached
            out_order = min(out_order, prod.order)
            cr, ci = c.re, c.im
            for me, mc in prod.terms.items():
                re = cr * mc.re - ci * mc.im
                im = cr * mc.im + ci * mc.re
                slot = acc.get(me)
                if slot is None:
                    acc[me] = [re, im]
                else:
                    slot[0] += re
                    slot[1] += im
        terms = {me: GaussRat._raw(re, im) for me, (re, im) in acc.items() if re or im}
        return TruncSeries(target, terms, out_order)

    # -- rendering --------------------------------------------------------
    def render(self, show_order: bool = True) -> str:
        """Canonical text: graded-lex order, exact fractions, ``O(k)`` tail."""
        parts: list[str] = []
        for e, c in self.items():
            mon = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(self.vars.names, e) if k
            )
            neg = (not c.im and c.re < 0) or (not c.re and c.im < 0)
            mag = -c if neg else c
            cs = str(mag)
            if mon:
                body = mon if cs == "1" else f"{cs}*{mon}"
            else:
                body = cs
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        text = "".join(parts) if parts else "0"
        if show_order and self.order != INF:
            text += f" + O({self.order + 1})"
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"TruncSeries({self.render()!r}, vars={self.vars.names})"


# ---------------------------------------------------------------------------
# implicit function theorem / reversion
# ---------------------------------------------------------------------------


def implicit_solve(F: list[TruncSeries], unknowns: list[str], order=INF) -> dict[str, TruncSeries]:
    """Solve ``F(x, u) = 0`` for ``u = g(x)`` with ``g(0) = 0``.

    The remaining variables of the shared VarSet are the parameters ``x``.
    The solution is correct through ``min(order, orders of F)``; the Jacobian
    ``dF/du`` at the origin must be invertible.
    """
    if len(F) != len(unknowns):
        raise ImplicitFunctionError("need as many equations as unknowns")
    V = F[0].vars
    for f in F:
        if f.vars != V:
            raise SeriesError("equations must share one VarSet")
    for u in unknowns:
        V.index(u)
    X = V.without(unknowns)
    for f in F:
        if f.constant_term():
            raise ImplicitFunctionError("implicit function theorem inapplicable: F(0,0) != 0")
    k = len(unknowns)
    unit = {}
    for u in unknowns:
        e = [0] * len(V)
        e[V.index(u)] = 1
        unit[u] = tuple(e)
    J = ExactMatrix([[f.terms.get(unit[u], ZERO) for u in unknowns] for f in F])
    try:
        Jinv = J.inverse()
    except ZeroDivisionError:
        raise ImplicitFunctionError(
            "implicit function theorem inapplicable: singular Jacobian at the origin"
        ) from None
    N = min([order] + [f.order for f in F])
    if N == INF:
        raise ImplicitFunctionError("an explicit truncation order is required for exact input")
    sol = {u: TruncSeries.zero(X) for u in unknowns}
    for deg in range(1, N + 1):
        subst = {name: TruncSeries.var(X, name) for name in X.names}
        subst.update(sol)
        res = [f.compose(subst, order=deg, target=X).degree_part(deg) for f in F]
        if all(r.is_zero() for r in res):
            continue
        for j, u in enumerate(unknowns):
            delta = TruncSeries.zero(X)
            for i in range(k):
                c = Jinv[j, i]
                if c:
                    delta = delta + res[i].scale(-c)
            sol[u] = sol[u] + delta
    return {u: s.with_order(N) for u, s in sol.items()}


def revert(f: TruncSeries, name: str | None = None) -> TruncSeries:
    """Compositional inverse of a one-variable series with f(0)=0, f'(0)!=0."""
    if len(f.vars) != 1:
        raise SeriesError("revert expects a one-variable series")
    x = f.vars.names[0]
    u = name or (x + "_inv")
    V = VarSet((u, x))
    eq = f.embed(V) - TruncSeries.var(V, u)
    sol = implicit_solve([eq], [x])[x]
    return sol.embed(VarSet((x,)), rename={u: x}) if name is None else sol


# ---------------------------------------------------------------------------
# named analytic primitives (rational Taylor coefficients)
# ---------------------------------------------------------------------------


def _factorials(n):
    f = [mpq(1)]
    for k in range(1, n + 1):
        f.append(f[-1] * k)
    return f


def _primitive_coeffs(name: str, n: int) -> list:
    fact = _factorials(n)
    if name == "exp":
        return [1 / fact[k] for k in range(n + 1)]
    if name == "expm1":
        return [mpq(0)] + [1 / fact[k] for k in range(1, n + 1)]
    if name == "sin":
        return [mpq(0) if k % 2 == 0 else mpq((-1) ** (k // 2)) / fact[k] for k in range(n + 1)]
    if name == "cos":
        return [mpq((-1) ** (k // 2)) / fact[k] if k % 2 == 0 else mpq(0) for k in range(n + 1)]
    if name == "sinh":
        return [mpq(0) if k % 2 == 0 else 1 / fact[k] for k in range(n + 1)]
    if name == "cosh":
        return [1 / fact[k] if k % 2 == 0 else mpq(0) for k in range(n + 1)]
    if name in ("tan", "tanh"):
        s = _primitive_coeffs("sin" if name == "tan" else "sinh", n)
        c = _primitive_coeffs("cos" if name == "tan" else "cosh", n)
        # q = s / c by long division (c0 = 1)
        q = [mpq(0)] * (n + 1)
        for k in range(n + 1):
            acc = s[k]
            for j in range(1, k + 1):
                acc -= c[j] * q[k - j]
            q[k] = acc
        return q
    raise SeriesError(f"unknown primitive {name!r}")


PRIMITIVES = ("sin", "cos", "tan", "exp", "expm1", "sinh", "cosh", "tanh")


def primitive(name: str, arg: TruncSeries, order=None) -> TruncSeries:
    """``name(arg)`` for an argument with zero constant term."""
    if arg.constant_term():
        raise SeriesError(f"{name}: argument must vanish at the origin")
    n = arg.order if order is None else min(arg.order, order)
    if n == INF:
        raise SeriesError(f"{name}: an explicit order is required")
    low = arg.lowest_degree()
    kmax = n if low == INF or low == 0 else n // low
    coeffs = _primitive_coeffs(name, max(kmax, 0))
    V1 = VarSet(("_t",))
    outer = TruncSeries(V1, {(k,): c for k, c in enumerate(coeffs)}, kmax)
    return outer.compose({"_t": arg}, order=n)
