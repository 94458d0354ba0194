"""Cech cochains on an atlas nerve and an exact coboundary solver.

Conventions: transition data satisfy ``s_j = g_ij s_i`` on ``U_ij`` and the
cocycle rule ``g_ik = g_ij g_jk``.  For 0-cochains ``(delta a)_ij = a_j - a_i``;
for 1-cochains ``(delta c)_ijk = c_jk - c_ik + c_ij``.  All charts share the
global torus coordinates, so restriction to a smaller open set leaves the
Laurent data unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import DlogForm, LaurentPoly, UnitMonomial, dlog
from .atlas import Atlas, Chart, is_log_form, is_regular_form, unit_is_valid
from .linalg import solve_rational

Key = Tuple[int, ...]

MODES = ("regular", "log")


class CochainError(ValueError):
    pass


def form_ok(w: DlogForm, chart: Chart, mode: str) -> bool:
    if mode == "log" and chart.boundary is not None:
        return is_log_form(w, chart)
    return is_regular_form(w, chart)


@dataclass(frozen=True)
class FormCochain:
    atlas: Atlas
    degree: int
    values: Dict[Key, DlogForm]
    mode: str = "regular"

    def __post_init__(self):
        if self.mode not in MODES:
            raise CochainError(f"unknown regularity mode {self.mode!r}")
        keys = self.atlas.simplices(self.degree + 1)
        vals = {}
        for key, w in self.values.items():
            key = tuple(key)
            if key not in keys:
                raise CochainError(f"{key} is not a {self.degree}-simplex of the nerve")
            if w.degree != 1 or w.nvars != self.atlas.nvars:
                raise CochainError("cochain values must be 1-forms in the atlas variables")
            if not form_ok(w, self.atlas.chart(key), self.mode):
                raise CochainError(f"value {w} is not {self.mode} on the chart of {key}")
            if not w.is_zero():
                vals[key] = w
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @classmethod
    def zero(cls, atlas: Atlas, degree: int, mode: str = "regular") -> "FormCochain":
        return cls(atlas, degree, {}, mode)

    def __getitem__(self, key) -> DlogForm:
        if isinstance(key, int):
            key = (key,)
        return self.values.get(tuple(key), DlogForm.zero(self.atlas.nvars, 1))

    def keys(self) -> List[Key]:
        return self.atlas.simplices(self.degree + 1)

    def is_zero(self) -> bool:
        return not self.values

    def _combine(self, other: "FormCochain", sign: int) -> "FormCochain":
        if other.atlas is not self.atlas and other.atlas != self.atlas:
            raise CochainError("atlas mismatch")
        if other.degree != self.degree:
            raise CochainError("degree mismatch")
        vals = {k: self[k] + (other[k] if sign > 0 else -other[k]) for k in self.keys()}
        return FormCochain(self.atlas, self.degree, vals, self.mode)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return FormCochain(self.atlas, self.degree, {k: -w for k, w in self.values.items()}, self.mode)

    def __eq__(self, other):
        if not isinstance(other, FormCochain):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, tuple(self.values.items())))

    def max_abs_exponent(self) -> int:
        return max((w.max_abs_exponent() for w in self.values.values()), default=0)

    def multidegrees(self) -> List[Tuple[int, ...]]:
        return sorted({v for w in self.values.values() for v in w.multidegrees()})


@dataclass(frozen=True)
class UnitCochain:
    atlas: Atlas
    degree: int
    values: Dict[Key, UnitMonomial]

    def __post_init__(self):
        keys = self.atlas.simplices(self.degree + 1)
        vals = {}
        for key, u in self.values.items():
            key = tuple(key)
            if key not in keys:
                raise CochainError(f"{key} is not a {self.degree}-simplex of the nerve")
            if u.nvars != self.atlas.nvars:
                raise CochainError("unit has the wrong number of variables")
            if not unit_is_valid(u, self.atlas.chart(key)):
                raise CochainError(f"{u} is not invertible on the chart of {key}")
            vals[key] = u
        for key in keys:
            vals.setdefault(key, UnitMonomial.one(self.atlas.nvars))
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @classmethod
    def one(cls, atlas: Atlas, degree: int) -> "UnitCochain":
        return cls(atlas, degree, {})

    def __getitem__(self, key) -> UnitMonomial:
        if isinstance(key, int):
            key = (key,)
        return self.values[tuple(key)]

    def keys(self) -> List[Key]:
        return list(self.values)

    def __mul__(self, other: "UnitCochain") -> "UnitCochain":
        if other.degree != self.degree:
            raise CochainError("degree mismatch")
        return UnitCochain(self.atlas, self.degree, {k: self[k] * other[k] for k in self.keys()})

    def inverse(self) -> "UnitCochain":
        return UnitCochain(self.atlas, self.degree, {k: u.inverse() for k, u in self.values.items()})

    def is_one(self) -> bool:
        return all(u.is_one() for u in self.values.values())

    def __eq__(self, other):
        if not isinstance(other, UnitCochain):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, tuple(self.values.items())))


# coboundaries ---------------------------------------------------------------

def coboundary(c: FormCochain) -> FormCochain:
    if c.degree > 1:
        raise CochainError("coboundary is only available from degree 0 and 1")
    atlas = c.atlas
    vals = {}
    if c.degree == 0:
        for i, j in atlas.pairs:
            vals[(i, j)] = c[j] - c[i]
    else:
        for i, j, k in atlas.triples:
            vals[(i, j, k)] = c[(j, k)] - c[(i, k)] + c[(i, j)]
    try:
        return FormCochain(atlas, c.degree + 1, vals, c.mode)
    except CochainError as exc:  # restriction of regular data is regular
        raise AssertionError(f"coboundary left the regular forms: {exc}") from exc


def unit_coboundary(u: UnitCochain) -> UnitCochain:
    atlas = u.atlas
    if u.degree == 0:
        return UnitCochain(atlas, 1, {(i, j): u[j] / u[i] for i, j in atlas.pairs})
    if u.degree == 1:
        return UnitCochain(atlas, 2, {(i, j, k): u[(j, k)] / u[(i, k)] * u[(i, j)]
                                      for i, j, k in atlas.triples})
    raise CochainError("unit coboundary is only available from degree 0 and 1")


def is_unit_cocycle(g: UnitCochain) -> bool:
    return unit_coboundary(g).is_one()


def dlog_cochain(g: UnitCochain) -> FormCochain:
    return FormCochain(g.atlas, g.degree, {k: dlog(u) for k, u in g.values.items()})


# the solver -----------------------------------------------------------------

def free_directions(chart: Chart, v: Sequence[int], mode: str = "regular") -> List[int]:
    """Chart-log-basis directions ``j`` in which ``t^v theta'_j`` is allowed.

    The mode-regular 1-forms of pure multidegree ``v`` on the chart are
    exactly ``t^v * sum_{j free} y_j theta'_j``.
    """
    x = chart.chart_exponent(v)
    n = chart.nvars
    if any(x[i] < 0 for i in range(n) if not chart.invertible[i]):
        return []
    log = mode == "log" and chart.boundary is not None
    return [j for j in range(n)
            if chart.invertible[j] or x[j] >= 1 or (log and chart.boundary[j])]


@dataclass(frozen=True)
class Infeasibility:
    """Certificate: the finite linear system at ``multidegree`` has no solution."""

    multidegree: Tuple[int, ...]
    charts: Tuple[int, ...]  # charts whose regularity constraints bind at that degree

    def to_json(self) -> dict:
        return {"multidegree": list(self.multidegree), "charts": list(self.charts)}


def _solve_multidegree(atlas: Atlas, target: FormCochain, v, mode: str):
    n = atlas.nvars
    m = len(atlas.charts)
    cols = []  # (chart, direction)
    frees = []
    for i, chart in enumerate(atlas.charts):
        f = free_directions(chart, v, mode)
        frees.append(f)
        cols.extend((i, j) for j in f)
    rows, rhs = [], []
    for i, j in atlas.pairs:
        t = target[(i, j)].constant_vector(v)
        for k in range(n):
            row = []
            for (c, dirn) in cols:
                coef = atlas.charts[c].basis[k][dirn]
                row.append(coef if c == j else -coef if c == i else 0)
            rows.append(row)
            rhs.append(t[k])
    y = solve_rational(rows, rhs, len(cols)) if rows else [Fraction(0)] * len(cols)
    if y is None:
        blocking = tuple(i for i in range(m) if len(frees[i]) < n)
        return None, Infeasibility(tuple(v), blocking)
    vecs = [[Fraction(0)] * n for _ in range(m)]
    for (c, dirn), val in zip(cols, y):
        if val:
            for k in range(n):
                vecs[c][k] += val * atlas.charts[c].basis[k][dirn]
    return vecs, None


def solve_coboundary(target: FormCochain, mode: str = "regular", with_certificate: bool = False):
    """Find a 0-cochain ``a`` of mode-regular forms with ``delta a = target``.

    The coboundary preserves the multidegree of every monomial, so the
    problem splits into one small exact linear system per multidegree that
    occurs in the target; multidegrees outside the target can be taken zero.
    Returns the cochain or None; with ``with_certificate`` a pair
    ``(cochain, certificate)``.
    """
    if target.degree != 1:
        raise CochainError("target must be a 1-cochain")
    if mode not in MODES:
        raise CochainError(f"unknown mode {mode!r}")
    atlas = target.atlas
    if not coboundary(target).is_zero():
        raise CochainError("target is not a cocycle")
    n = atlas.nvars
    acc: Dict[int, Dict[Tuple[int, ...], List[Fraction]]] = {i: {} for i in range(len(atlas.charts))}
    for v in target.multidegrees():
        vecs, cert = _solve_multidegree(atlas, target, v, mode)
        if vecs is None:
            return (None, cert) if with_certificate else None
        for i, vec in enumerate(vecs):
            if any(vec):
                acc[i][v] = vec
    values = {}
    for i, parts in acc.items():
        coeffs = [LaurentPoly(n, {v: vec[k] for v, vec in parts.items()}) for k in range(n)]
        values[(i,)] = DlogForm.one_form(coeffs) if n else DlogForm.zero(n, 1)
    sol = FormCochain(atlas, 0, values, mode)
    if coboundary(sol) != target:
        raise AssertionError("solver produced a cochain with the wrong coboundary")
    return (sol, None) if with_certificate else sol


# equality in the hypercohomology of O^* -> Omega^1 -----------------------------

def split_coefficients(atlas: Atlas, coeffs: Dict[Key, Fraction]) -> Optional[List[Fraction]]:
    """Constants ``c_i`` with ``c_j / c_i = coeffs[(i, j)]`` on every nerve pair."""
    m = len(atlas.charts)
    c: List[Optional[Fraction]] = [None] * m
    adj: Dict[int, List[Tuple[int, Fraction]]] = {i: [] for i in range(m)}
    for (i, j) in atlas.pairs:
        q = Fraction(coeffs.get((i, j), 1))
        adj[i].append((j, q))
        adj[j].append((i, 1 / q))
    for root in range(m):
        if c[root] is not None:
            continue
        c[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j, q in adj[i]:
                if c[j] is None:
                    c[j] = c[i] * q
                    stack.append(j)
    for (i, j) in atlas.pairs:
        if c[j] / c[i] != Fraction(coeffs.get((i, j), 1)):
            return None
    return c


def check_compatible(g: UnitCochain, forms: FormCochain) -> None:
    if g.degree != 1 or forms.degree != 0:
        raise CochainError("expected a unit 1-cochain and a form 0-cochain")
    if not is_unit_cocycle(g):
        raise CochainError("unit data is not a cocycle")
    if coboundary(forms) != dlog_cochain(g):
        raise CochainError("compatibility delta(forms) = dlog(cocycle) is violated")


def pic_c_witness(a, b) -> Optional[UnitCochain]:
    """Units ``u_i`` identifying two (cocycle, forms) pairs, or None."""
    (g, alpha), (h, beta) = a, b
    check_compatible(g, alpha)
    check_compatible(h, beta)
    atlas = g.atlas
    n = atlas.nvars
    exps = []
    for i, chart in enumerate(atlas.charts):
        diff = beta[i] - alpha[i]
        if diff.multidegrees() - {(0,) * n}:
            return None
        vec = diff.constant_vector()
        if any(x.denominator != 1 for x in vec):
            return None
        x = tuple(int(q) for q in vec)
        if not chart.monomial_unit(x):
            return None
        exps.append(x)
    ratios = {}
    for (i, j) in atlas.pairs:
        r = h[(i, j)] / g[(i, j)]
        if r.exponent != tuple(p - q for p, q in zip(exps[j], exps[i])):
            return None
        ratios[(i, j)] = r.coeff
    coeffs = split_coefficients(atlas, ratios)
    if coeffs is None:
        return None
    return UnitCochain(atlas, 0, {(i,): UnitMonomial(coeffs[i], exps[i]) for i in range(len(atlas.charts))})


def pic_c_equal(a, b) -> bool:
    return pic_c_witness(a, b) is not None
