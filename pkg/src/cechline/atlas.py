"""Smooth toric charts, atlases with explicit nerves, and regularity tests.

A chart is given by a unimodular integer matrix ``M`` whose columns are the
exponent vectors (in global torus coordinates ``t``) of the chart
coordinates ``w_j = t^{M e_j}``.  A monomial ``t^v`` equals ``w^x`` with
``x = M^{-1} v``, and ``theta = M^{-T} theta'`` relates the two log bases, so
a 1-form with coefficient vector ``f`` has chart coefficients ``g = M^{-1} f``
in the basis ``theta'_j = dw_j / w_j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import DlogForm, LaurentPoly, UnitMonomial
from .linalg import det_int, inverse_unimodular, matvec


class AtlasError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    basis: Tuple[Tuple[int, ...], ...]  # rows of M
    invertible: Tuple[bool, ...]
    boundary: Optional[Tuple[bool, ...]] = None
    inverse: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.basis)
        if any(len(row) != n for row in self.basis):
            raise AtlasError("chart basis must be square")
        if len(self.invertible) != n:
            raise AtlasError("invertible flags must have one entry per coordinate")
        if abs(det_int([list(r) for r in self.basis])) != 1:
            raise AtlasError(f"chart basis {self.basis} is not unimodular")
        if self.boundary is not None:
            if len(self.boundary) != n:
                raise AtlasError("boundary flags must have one entry per coordinate")
            if any(b and i for b, i in zip(self.boundary, self.invertible)):
                raise AtlasError("a boundary coordinate cannot be invertible")
        inv = inverse_unimodular([list(r) for r in self.basis])
        object.__setattr__(self, "inverse", tuple(tuple(r) for r in inv))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], invertible, boundary=None) -> "Chart":
        n = len(columns)
        rows = tuple(tuple(int(columns[j][i]) for j in range(n)) for i in range(n))
        return cls(rows, tuple(bool(x) for x in invertible),
                   None if boundary is None else tuple(bool(x) for x in boundary))

    @property
    def nvars(self) -> int:
        return len(self.basis)

    def columns(self) -> List[Tuple[int, ...]]:
        n = self.nvars
        return [tuple(self.basis[i][j] for i in range(n)) for j in range(n)]

    def chart_exponent(self, v: Sequence[int]) -> List[int]:
        """Exponent of ``t^v`` in the chart coordinates ``w``."""
        return matvec([list(r) for r in self.inverse], list(v))

    def monomial_regular(self, v: Sequence[int]) -> bool:
        x = self.chart_exponent(v)
        return all(xj >= 0 for xj, inv in zip(x, self.invertible) if not inv)

    def monomial_unit(self, v: Sequence[int]) -> bool:
        x = self.chart_exponent(v)
        return all(xj == 0 for xj, inv in zip(x, self.invertible) if not inv)

    def invertible_generators(self) -> List[Tuple[int, ...]]:
        """Exponent vectors of the invertible chart coordinates."""
        cols = self.columns()
        return [cols[j] for j in range(self.nvars) if self.invertible[j]]

    def ring_generators(self) -> List[Tuple[int, ...]]:
        cols = self.columns()
        gens = list(cols)
        for j in range(self.nvars):
            if self.invertible[j]:
                gens.append(tuple(-c for c in cols[j]))
        return gens

    def chart_coefficients(self, w: DlogForm) -> List[LaurentPoly]:
        """Coefficients ``g_j`` of a 1-form in the chart log basis."""
        f = w.coefficients()
        n = self.nvars
        out = []
        for j in range(n):
            g = LaurentPoly.zero(n)
            for k in range(n):
                if self.inverse[j][k]:
                    g = g + f[k] * self.inverse[j][k]
            out.append(g)
        return out

    def to_json(self) -> dict:
        d = {"basis": [list(self.columns()[j]) for j in range(self.nvars)],
             "invertible": list(self.invertible)}
        if self.boundary is not None:
            d["boundary"] = list(self.boundary)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Chart":
        return cls.from_columns(d["basis"], d["invertible"], d.get("boundary"))


def _divisible_regular(g: LaurentPoly, chart: Chart, j: int) -> bool:
    """Is ``g / w_j`` regular on the chart?"""
    for v in g.terms:
        x = chart.chart_exponent(v)
        x[j] -= 1
        if any(xi < 0 for xi, inv in zip(x, chart.invertible) if not inv):
            return False
    return True


def is_regular_function(f: LaurentPoly, chart: Chart) -> bool:
    if f.nvars != chart.nvars:
        raise AtlasError("nvars mismatch")
    return all(chart.monomial_regular(v) for v in f.terms)


def is_regular_form(w: DlogForm, chart: Chart) -> bool:
    if w.nvars != chart.nvars:
        raise AtlasError("nvars mismatch")
    for j, g in enumerate(chart.chart_coefficients(w)):
        if chart.invertible[j]:
            if not is_regular_function(g, chart):
                return False
        elif not _divisible_regular(g, chart, j):
            return False
    return True


def is_log_form(w: DlogForm, chart: Chart) -> bool:
    """Logarithmic poles allowed along boundary coordinates only."""
    if chart.boundary is None:
        raise AtlasError("chart carries no boundary data")
    if w.nvars != chart.nvars:
        raise AtlasError("nvars mismatch")
    for j, g in enumerate(chart.chart_coefficients(w)):
        if chart.invertible[j] or chart.boundary[j]:
            if not is_regular_function(g, chart):
                return False
        elif not _divisible_regular(g, chart, j):
            return False
    return True


def log_gauge(w: DlogForm, chart: Chart) -> Optional[Tuple[int, ...]]:
    """Monomial gauge making ``w`` logarithmic on a compactification chart.

    Returns the exponent ``v`` of a monomial ``u = t^v`` such that
    ``w + du/u`` passes :func:`is_log_form`, or None.  Only the residues along
    interior coordinates can be removed, and they must be integers for a
    monomial section to absorb them.
    """
    if chart.boundary is None:
        raise AtlasError("chart carries no boundary data")
    x = [0] * chart.nvars
    for j, g in enumerate(chart.chart_coefficients(w)):
        if chart.invertible[j] or chart.boundary[j]:
            continue
        c = g.constant_term()
        if c.denominator != 1:
            return None
        x[j] = -int(c)
    v = tuple(sum(chart.basis[i][j] * x[j] for j in range(chart.nvars)) for i in range(chart.nvars))
    shifted = w + DlogForm.constant(v)
    return v if is_log_form(shifted, chart) else None


@dataclass(frozen=True)
class Compactification:
    atlas: "Atlas"
    cover: Tuple[Tuple[int, ...], ...]  # cover[i]: compactification charts meeting closure of U_i
    name: Optional[str] = None


@dataclass(frozen=True)
class Atlas:
    nvars: int
    charts: Tuple[Chart, ...]
    nerve: Dict[Tuple[int, ...], Chart]
    compactification: Optional[Compactification] = None
    name: Optional[str] = None

    def __post_init__(self):
        for c in self.charts:
            if c.nvars != self.nvars:
                raise AtlasError("chart dimension differs from atlas nvars")
        nerve = dict(self.nerve)
        for i, c in enumerate(self.charts):
            if (i,) in nerve and nerve[(i,)] != c:
                raise AtlasError(f"singleton {i} carries a chart different from chart {i}")
            nerve[(i,)] = c
        for key in nerve:
            if list(key) != sorted(set(key)) or not 1 <= len(key) <= 3:
                raise AtlasError(f"bad nerve key {key}")
            if any(not 0 <= i < len(self.charts) for i in key):
                raise AtlasError(f"nerve key {key} references a missing chart")
            for r in range(1, len(key)):
                for sub in combinations(key, r):
                    if sub not in nerve:
                        raise AtlasError(f"nerve not closed under subsets: {sub} of {key}")
            target = nerve[key]
            for sub in combinations(key, len(key) - 1) if len(key) > 1 else ():
                for gen in nerve[sub].ring_generators():
                    if not target.monomial_regular(gen):
                        raise AtlasError(
                            f"intersection chart {key} does not contain the ring of {sub}")
        object.__setattr__(self, "nerve", dict(sorted(nerve.items(), key=lambda kv: (len(kv[0]), kv[0]))))
        if self.compactification is not None:
            comp = self.compactification
            if len(comp.cover) != len(self.charts):
                raise AtlasError("compactification cover needs one entry per chart")
            for row in comp.cover:
                for j in row:
                    if not 0 <= j < len(comp.atlas.charts):
                        raise AtlasError("cover references a missing compactification chart")
            for c in comp.atlas.charts:
                if c.boundary is None:
                    raise AtlasError("compactification charts need boundary flags")

    def simplices(self, size: int) -> List[Tuple[int, ...]]:
        return [k for k in self.nerve if len(k) == size]

    @property
    def pairs(self) -> List[Tuple[int, ...]]:
        return self.simplices(2)

    @property
    def triples(self) -> List[Tuple[int, ...]]:
        return self.simplices(3)

    def chart(self, key) -> Chart:
        if isinstance(key, int):
            key = (key,)
        return self.nerve[tuple(key)]

    def to_json(self) -> dict:
        d = {
            "nvars": self.nvars,
            "charts": [c.to_json() for c in self.charts],
            "nerve": [{"indices": list(k), "chart": c.to_json()}
                      for k, c in self.nerve.items() if len(k) > 1],
        }
        if self.name:
            d["name"] = self.name
        if self.compactification is not None:
            comp = self.compactification
            d["compactification"] = {
                "atlas": comp.name if comp.name in _BUILTIN_COMPACTIFICATIONS else comp.atlas.to_json(),
                "cover": [list(r) for r in comp.cover],
            }
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Atlas":
        try:
            charts = tuple(Chart.from_json(c) for c in d["charts"])
            nerve = {tuple(e["indices"]): Chart.from_json(e["chart"]) for e in d.get("nerve", [])}
            comp = None
            if d.get("compactification"):
                cd = d["compactification"]
                ref = cd["atlas"]
                if isinstance(ref, str):
                    comp_atlas = compactification_atlas(ref)
                    comp_name = ref
                else:
                    comp_atlas = cls.from_json(ref)
                    comp_name = ref.get("name")
                comp = Compactification(comp_atlas, tuple(tuple(r) for r in cd["cover"]), comp_name)
            return cls(int(d["nvars"]), charts, nerve, comp, d.get("name"))
        except (KeyError, TypeError) as exc:
            raise AtlasError(f"malformed atlas description: {exc}") from exc


# built-in spaces ------------------------------------------------------------

def _chart(cols, inv, boundary=None):
    return Chart.from_columns(cols, inv, boundary)


def _torus(n=2):
    return _chart([[int(i == j) for i in range(n)] for j in range(n)], [True] * n)


def _complete_nerve(charts, overlaps):
    """Nerve containing every subset of size 2 and 3, with given overlap charts."""
    nerve = {}
    for r in (2, 3):
        for key in combinations(range(len(charts)), r):
            nerve[key] = overlaps(key)
    return nerve


def _p1(boundary=None):
    charts = (_chart([[1]], [False], boundary), _chart([[-1]], [False], boundary))
    return Atlas(1, charts, {(0, 1): _chart([[1]], [True])}, None, "P1")


def _p1xp1(boundary=None):
    b = boundary
    charts = (
        _chart([[1, 0], [0, 1]], [False, False], b),
        _chart([[-1, 0], [0, 1]], [False, False], b),
        _chart([[-1, 0], [0, -1]], [False, False], b),
        _chart([[1, 0], [0, -1]], [False, False], b),
    )
    # chart i is the quadrant of signs (s1, s2); overlaps keep the shared sign
    signs = [(1, 1), (-1, 1), (-1, -1), (1, -1)]

    def overlap(key):
        cols, inv = [], []
        for axis in range(2):
            s = {signs[i][axis] for i in key}
            col = [0, 0]
            col[axis] = s.pop() if len(s) == 1 else 1
            cols.append(col)
            inv.append(len({signs[i][axis] for i in key}) > 1)
        return _chart(cols, inv)

    return Atlas(2, charts, _complete_nerve(charts, overlap), None, "P1xP1")


def _p2(boundary_flags=(None, None, None)):
    charts = (
        _chart([[1, 0], [0, 1]], [False, False], boundary_flags[0]),
        _chart([[-1, 0], [-1, 1]], [False, False], boundary_flags[1]),
        _chart([[1, -1], [0, -1]], [False, False], boundary_flags[2]),
    )
    nerve = {
        (0, 1): _chart([[1, 0], [0, 1]], [True, False]),
        (0, 2): _chart([[1, 0], [0, 1]], [False, True]),
        (1, 2): _chart([[-1, 0], [1, -1]], [False, True]),
        (0, 1, 2): _torus(),
    }
    return Atlas(2, charts, nerve, None, "P2")


def _bl0p2():
    """Blow-up of P2 at the origin; boundary = exceptional curve + line at infinity."""
    charts = (
        _chart([[1, -1], [0, 1]], [False, False], [False, True]),
        _chart([[1, 0], [-1, 1]], [False, False], [True, False]),
        _chart([[-1, 1], [-1, 0]], [False, False], [False, True]),
        _chart([[0, -1], [1, -1]], [False, False], [True, False]),
    )
    return Atlas(2, charts, {}, None, "Bl0P2")


def compactification_atlas(name: str) -> Atlas:
    """Boundary-flagged compactification atlases, keyed by the pair they serve."""
    try:
        return _BUILTIN_COMPACTIFICATIONS[name]()
    except KeyError:
        raise AtlasError(f"unknown compactification {name!r}") from None


_BUILTIN_COMPACTIFICATIONS = {
    # P2 compactifying C^2: the line at infinity is the boundary
    "P2": lambda: _p2(([False, False], [True, False], [False, True])),
    "P1xP1": lambda: _p1xp1([True, True]),
    "Bl0P2": _bl0p2,
    "P1-complete": lambda: _p1([False]),
    "P1xP1-complete": lambda: _p1xp1([False, False]),
    "P2-complete": lambda: _p2(([False, False],) * 3),
}


def _with_comp(atlas: Atlas, comp_name: str, cover) -> Atlas:
    comp = Compactification(compactification_atlas(comp_name), tuple(tuple(r) for r in cover), comp_name)
    return Atlas(atlas.nvars, atlas.charts, atlas.nerve, comp, atlas.name)


def _a2():
    a = Atlas(2, (_chart([[1, 0], [0, 1]], [False, False]),), {}, None, "A2")
    return _with_comp(a, "P2", [[0, 1, 2]])


def _gm2():
    a = Atlas(2, (_torus(),), {}, None, "Gm2")
    return _with_comp(a, "P1xP1", [[0, 1, 2, 3]])


def _a2minus0():
    charts = (_chart([[1, 0], [0, 1]], [False, True]), _chart([[1, 0], [0, 1]], [True, False]))
    a = Atlas(2, charts, {(0, 1): _torus()}, None, "A2minus0")
    return _with_comp(a, "Bl0P2", [[0, 1, 2, 3], [0, 1, 2, 3]])


def _self_compactified(builder, comp_name):
    a = builder()
    cover = [[i] for i in range(len(a.charts))]
    return _with_comp(a, comp_name, cover)


BUILTINS = {
    "P1": lambda: _self_compactified(_p1, "P1-complete"),
    "A2": _a2,
    "Gm2": _gm2,
    "A2minus0": _a2minus0,
    "P1xP1": lambda: _self_compactified(_p1xp1, "P1xP1-complete"),
    "P2": lambda: _self_compactified(_p2, "P2-complete"),
}


def builtin_atlas(name: str) -> Atlas:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise AtlasError(f"unknown atlas {name!r}; built-ins are {sorted(BUILTINS)}") from None


def load_atlas(ref) -> Atlas:
    """Accept a built-in name, a path to a JSON file, or an already parsed dict."""
    if isinstance(ref, Atlas):
        return ref
    if isinstance(ref, dict):
        return Atlas.from_json(ref)
    if ref in BUILTINS:
        return builtin_atlas(ref)
    path = Path(ref)
    if not path.exists():
        raise AtlasError(f"{ref!r} is neither a built-in atlas nor a file")
    return Atlas.from_json(json.loads(path.read_text()))


def unit_is_valid(u: UnitMonomial, chart: Chart) -> bool:
    return chart.monomial_unit(u.exponent)
