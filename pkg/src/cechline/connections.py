"""Connections on monomial line bundles: existence, curvature, regularity."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .algebra import DlogForm, LaurentPoly, exterior_derivative
from .atlas import Atlas, log_gauge
from .bundles import LineBundle, atiyah_obstruction, check_cocycle, dual, monomial_picard_group, tensor
from .cech import CochainError, FormCochain, check_compatible, free_directions
from .linalg import kernel_integer, nullspace_rational

KINDS = ("any", "integrable", "regular_integrable")


class ConnectionDataError(ValueError):
    pass


class RegularityError(ValueError):
    pass


@dataclass(frozen=True)
class Connection:
    """``nabla s_i = alpha_i s_i`` with ``alpha_j - alpha_i = dg_ij / g_ij``."""

    bundle: LineBundle
    forms: FormCochain

    def __post_init__(self):
        if not check_cocycle(self.bundle):
            raise ConnectionDataError("bundle data violate the cocycle rule")
        try:
            check_compatible(self.bundle.cocycle, self.forms)
        except CochainError as exc:
            raise ConnectionDataError(str(exc)) from exc

    @property
    def atlas(self) -> Atlas:
        return self.bundle.atlas

    def as_pair(self):
        return (self.bundle.cocycle, self.forms)

    def to_json(self) -> dict:
        return {"bundle": self.bundle.to_json(),
                "forms": [{"chart": i, "form": str(self.forms[i])} for i in range(len(self.atlas.charts))]}

    @classmethod
    def from_json(cls, d: dict) -> "Connection":
        from .parse import parse_form
        bundle = LineBundle.from_json(d["bundle"])
        n = bundle.atlas.nvars
        vals = {}
        for entry in d.get("forms", []):
            w = parse_form(entry["form"], n)
            vals[(int(entry["chart"]),)] = w
        try:
            forms = FormCochain(bundle.atlas, 0, vals)
        except CochainError as exc:
            raise ConnectionDataError(str(exc)) from exc
        return cls(bundle, forms)


def load_connection(path) -> Connection:
    if isinstance(path, dict):
        return Connection.from_json(path)
    return Connection.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class CurvatureForm:
    form: DlogForm

    @property
    def is_zero(self) -> bool:
        return self.form.is_zero()


def curvature(c: Connection) -> CurvatureForm:
    """``R = d alpha_i``; the rank-one term ``alpha ^ alpha`` vanishes."""
    local = [exterior_derivative(c.forms[i]) for i in range(len(c.atlas.charts))]
    for i, j in c.atlas.pairs:
        if local[i] != local[j]:
            raise AssertionError(f"curvatures disagree on the overlap {(i, j)}")
    return CurvatureForm(local[0])


def is_integrable(c: Connection) -> bool:
    return curvature(c).is_zero


def regularity_gauges(c: Connection) -> Optional[Dict[int, Tuple[Tuple[int, ...], int]]]:
    """Per compactification chart, a local section exhibiting logarithmic poles.

    For compactification chart ``V`` and a chart ``U_i`` whose closure it
    meets, the section ``t^x s_i`` has connection form ``alpha_i + dlog t^x``;
    ``x`` must cancel the (integer) residues along interior divisors.  Returns
    ``{V: (x, i)}`` or None when some chart admits no such section.
    """
    comp = c.atlas.compactification
    if comp is None:
        raise RegularityError("atlas has no compactification")
    out = {}
    for i, row in enumerate(comp.cover):
        for v in row:
            x = log_gauge(c.forms[i], comp.atlas.charts[v])
            if x is None:
                return None
            out.setdefault(v, (x, i))
    return out


def is_regular(c: Connection) -> bool:
    return regularity_gauges(c) is not None


def twist_trivial(w: DlogForm, atlas: Atlas) -> Connection:
    """``(O, d + w)`` for a global regular 1-form ``w``."""
    vals = {(i,): w for i in range(len(atlas.charts))}
    try:
        forms = FormCochain(atlas, 0, vals)
    except CochainError as exc:
        raise ConnectionDataError(f"form is not regular on every chart: {exc}") from exc
    return Connection(LineBundle.trivial(atlas), forms)


def tensor_connection(a: Connection, b: Connection) -> Connection:
    return Connection(tensor(a.bundle, b.bundle), a.forms + b.forms)


def dual_connection(c: Connection) -> Connection:
    return Connection(dual(c.bundle), -c.forms)


def trivial_connection(atlas: Atlas) -> Connection:
    return Connection(LineBundle.trivial(atlas), FormCochain.zero(atlas, 0))


@dataclass(frozen=True)
class ConnectionSearch:
    """Outcome of :func:`solve_connection`; ``connection`` is None if none exists."""

    kind: str
    connection: Optional[Connection]
    certificate: Optional[dict] = None

    @property
    def exists(self) -> bool:
        return self.connection is not None


def solve_connection(L: LineBundle, kind: str = "any") -> ConnectionSearch:
    kind = kind.replace("-", "_")
    if kind not in KINDS:
        raise ValueError(f"unknown connection kind {kind!r}")
    if kind == "regular_integrable" and L.atlas.compactification is None:
        raise RegularityError("regular connections need an atlas with a compactification")
    report = atiyah_obstruction(L)
    if not report.vanishes:
        return ConnectionSearch(kind, None, {"reason": "atiyah-obstruction", **report.certificate.to_json()})
    conn = Connection(L, report.witness)
    if kind == "any":
        return ConnectionSearch(kind, conn)
    # monomial cocycles give a constant target, so the solver returns a
    # multidegree-0 witness; constant log forms are closed
    if not is_integrable(conn):
        raise AssertionError("constant-coefficient witness is not closed")
    if kind == "integrable":
        return ConnectionSearch(kind, conn)
    if is_regular(conn):
        return ConnectionSearch(kind, conn)
    return ConnectionSearch(kind, None, {"reason": "no-logarithmic-witness"})


# global forms and the Picard report ----------------------------------------------

def global_forms_at(atlas: Atlas, v) -> List[List[Fraction]]:
    """Basis of coefficient vectors ``a`` with ``t^v sum a_k theta_k`` regular everywhere."""
    n = atlas.nvars
    cons = []
    for chart in atlas.charts:
        free = set(free_directions(chart, v))
        for j in range(n):
            if j not in free:
                cons.append([chart.inverse[j][k] for k in range(n)])
    return nullspace_rational(cons, n) if cons else [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]


def closed_forms_at(atlas: Atlas, v) -> List[List[Fraction]]:
    """Closed members of :func:`global_forms_at`: ``v_l a_k = v_k a_l``."""
    n = atlas.nvars
    glob = global_forms_at(atlas, v)
    if not glob:
        return []
    cons = []
    for l in range(n):
        for k in range(l + 1, n):
            cons.append([v[l] * g[k] - v[k] * g[l] for g in glob])
    if not any(any(r) for r in cons):
        return glob
    coeffs = nullspace_rational(cons, len(glob))
    return [[sum(c * g[k] for c, g in zip(cv, glob)) for k in range(n)] for cv in coeffs]


def _form(v, a) -> DlogForm:
    n = len(v)
    return DlogForm.one_form([LaurentPoly(n, {tuple(v): a[k]}) for k in range(n)])


def global_unit_lattice(atlas: Atlas) -> List[Tuple[int, ...]]:
    """Exponents of monomials that are units on every chart."""
    n = atlas.nvars
    cons = []
    for chart in atlas.charts:
        for j in range(n):
            if not chart.invertible[j]:
                cons.append(list(chart.inverse[j]))
    basis = kernel_integer(cons, n) if cons else [[int(i == k) for k in range(n)] for i in range(n)]
    return [tuple(b) for b in basis]


def pic_group_report(atlas: Atlas, degree_bound: int = 3) -> dict:
    """Truncated description of ``Pic``, ``Pic_c`` and ``Pic_ci`` fibres.

    Global 1-forms are infinite dimensional on affine spaces, so only
    multidegrees in the box ``[-B, B]^n`` are listed.
    """
    from .topology import pic_ci_structure, supports_topology

    n = atlas.nvars
    B = int(degree_bound)
    forms, closed = [], []
    for v in product(range(-B, B + 1), repeat=n):
        for a in global_forms_at(atlas, v):
            forms.append(str(_form(v, a)))
        for a in closed_forms_at(atlas, v):
            closed.append(str(_form(v, a)))
    units = global_unit_lattice(atlas)
    dlog_units = [str(DlogForm.constant(u)) for u in units]
    pic = monomial_picard_group(atlas)
    # the fibre of Pic_c over O is H^0(Omega^1) / dlog H^0(O^*); a rational
    # span never equals a lattice, so it is trivial iff there are no forms
    report = {
        "atlas": atlas.name,
        "degree_bound": B,
        "truncated": True,
        "global_forms": forms,
        "closed_global_forms": closed,
        "dlog_units": dlog_units,
        "pic": pic.describe(),
        "pic_free_rank": pic.free_rank,
        "pic_torsion": list(pic.torsion),
        "pic_c_fiber_trivial": not forms,
        "pic_c_fiber": _fiber_description(forms, len(units)),
        "pic_ci_fiber": _fiber_description(closed, len(units)),
    }
    if supports_topology(atlas):
        report["pic_ci"] = pic_ci_structure(atlas)["description"]
    return report


def _fiber_description(forms, unit_rank: int) -> str:
    if not forms:
        return "0"
    return f"span of {len(forms)} forms modulo a dlog-unit lattice of rank {unit_rank}"
