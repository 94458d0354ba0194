"""Random instance generators and independent oracles shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from cechline.algebra import DlogForm, LaurentPoly, UnitMonomial
from cechline.atlas import Atlas, is_regular_form
from cechline.bundles import LineBundle, monomial_picard_group
from cechline.cech import FormCochain, dlog_cochain

BUILTIN_NAMES = ["P1", "A2", "Gm2", "A2minus0", "P1xP1", "P2"]


# random data --------------------------------------------------------------------

def rand_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))


def rand_poly(rng: random.Random, n: int, terms: int = 3, span: int = 2) -> LaurentPoly:
    return LaurentPoly(n, {tuple(rng.randint(-span, span) for _ in range(n)): rand_coeff(rng)
                           for _ in range(rng.randint(0, terms))})


def rand_form(rng: random.Random, n: int, degree: int, terms: int = 3, span: int = 2) -> DlogForm:
    from itertools import combinations
    keys = list(combinations(range(n), degree))
    return DlogForm(n, degree, {k: rand_poly(rng, n, terms, span) for k in keys if rng.random() < 0.7})


def rand_unit(rng: random.Random, n: int, span: int = 3) -> UnitMonomial:
    return UnitMonomial(rand_coeff(rng), [rng.randint(-span, span) for _ in range(n)])


def rand_regular_form(rng: random.Random, charts, n: int, terms: int = 3, span: int = 2) -> DlogForm:
    """Random 1-form regular on every chart in ``charts`` (monomial-wise rejection)."""
    out = DlogForm.zero(n, 1)
    for _ in range(terms):
        v = tuple(rng.randint(-span, span) for _ in range(n))
        k = rng.randrange(n)
        piece = DlogForm.basis(n, k).scale(LaurentPoly.monomial(v, rand_coeff(rng)))
        if all(is_regular_form(piece, c) for c in charts):
            out = out + piece
    # constant-coefficient pieces are often regular; mix one in
    c = DlogForm.constant([rng.randint(-2, 2) for _ in range(n)])
    if all(is_regular_form(c, ch) for ch in charts):
        out = out + c
    return out


def rand_bundle(rng: random.Random, atlas: Atlas, span: int = 3) -> LineBundle:
    """Random monomial cocycle: integer combination of the exponent-cocycle basis."""
    G = monomial_picard_group(atlas)
    pairs = atlas.pairs
    gens = [atlas.chart(p).invertible_generators() for p in pairs]
    exps = {p: [0] * atlas.nvars for p in pairs}
    for z in G.cocycle_basis:
        c = rng.randint(-span, span)
        pos = 0
        for p, g in zip(pairs, gens):
            for gen in g:
                for k in range(atlas.nvars):
                    exps[p][k] += c * z[pos] * gen[k]
                pos += 1
    # a random coboundary of unit-valued constants keeps the cocycle rule
    consts = [rand_coeff(rng) for _ in atlas.charts]
    units = {p: UnitMonomial(consts[p[1]] / consts[p[0]], exps[p]) for p in pairs}
    return LineBundle.from_units(atlas, units)


def rand_target(rng: random.Random, atlas: Atlas, span: int = 1) -> FormCochain:
    """Random cocycle: dlog of a random bundle plus the coboundary of data regular on overlaps."""
    n = atlas.nvars
    vals = {}
    for i in range(len(atlas.charts)):
        overlaps = [atlas.chart(p) for p in atlas.pairs if i in p]
        vals[(i,)] = rand_regular_form(rng, overlaps, n, terms=3, span=span) if overlaps else DlogForm.zero(n, 1)
    # beta_i need not be regular on U_i itself, so build delta by hand
    diffs = {(i, j): vals[(j,)] - vals[(i,)] for i, j in atlas.pairs}
    target = FormCochain(atlas, 1, diffs)
    if rng.random() < 0.5:
        target = target + dlog_cochain(rand_bundle(rng, atlas, span=2).cocycle)
    return target


# oracle: exterior derivative through the dt basis -------------------------------

def to_sympy(f: LaurentPoly, syms):
    return sum((sp.Rational(c.numerator, c.denominator) * sp.prod([s ** e for s, e in zip(syms, exp)])
                for exp, c in f.items()), sp.Integer(0))


def d_via_dt(w: DlogForm):
    """d of a 1-form computed in the dt basis with sympy; returns {(l,k): expr in theta basis}."""
    n = w.nvars
    t = sp.symbols(f"t1:{n + 1}")
    h = [to_sympy(w.component((k,)), t) / t[k] for k in range(n)]  # dt_k coefficients
    out = {}
    for l in range(n):
        for k in range(l + 1, n):
            coeff = sp.diff(h[k], t[l]) - sp.diff(h[l], t[k])   # dt_l ^ dt_k
            out[(l, k)] = sp.expand(coeff * t[l] * t[k])        # theta_l ^ theta_k
    return out, t


# oracle: dense brute-force coboundary solver -----------------------------------

@lru_cache(maxsize=None)
def _bad_rows(basis, invertible, boundary, v, mode):
    """Linear constraints (rows in the theta_k coefficients) forbidding poles at degree v.

    Computed by substituting ``t_k`` as a monomial in the chart coordinates and
    reading the ``dw_j`` coefficients with sympy.
    """
    n = len(basis)
    w = sp.symbols(f"w1:{n + 1}")
    Minv = sp.Matrix(basis).inv()
    t_in_w = [sp.prod([w[j] ** Minv[j, k] for j in range(n)]) for k in range(n)]
    tv = sp.prod([t_in_w[k] ** v[k] for k in range(n)])
    rows = []
    for j in range(n):
        # coefficient of dw_j in t^v * theta_k, for every k
        coeffs = [sp.simplify(tv * sp.diff(t_in_w[k], w[j]) / t_in_w[k]) for k in range(n)]
        ref = next((c for c in coeffs if c != 0), None)
        if ref is None:
            continue
        powers = sp.Poly(sp.numer(sp.together(ref)), *w).monoms()[0]
        den_powers = sp.Poly(sp.denom(sp.together(ref)), *w).monoms()[0]
        expo = [a - b for a, b in zip(powers, den_powers)]
        # dw_j carries its own factor: the coefficient of dw_j must be regular, or
        # in log mode along a boundary divisor, w_j times it must be regular
        allowed_pole = 1 if (mode == "log" and boundary is not None and boundary[j]) else 0
        bad = False
        for i in range(n):
            if invertible[i]:
                continue
            need = -allowed_pole if i == j else 0
            if expo[i] < need:
                bad = True
        if bad:
            rows.append([sp.Rational(c / ref) if c != 0 else sp.Integer(0) for c in coeffs])
    return tuple(tuple(r) for r in rows)


def brute_force_solvable(target: FormCochain, mode: str = "regular", box: int | None = None) -> bool:
    atlas = target.atlas
    n = atlas.nvars
    B = target.max_abs_exponent() + 1 if box is None else box
    monos = list(product(range(-B, B + 1), repeat=n))
    m = len(atlas.charts)
    index = {}
    for i in range(m):
        for v in monos:
            for k in range(n):
                index[(i, v, k)] = len(index)
    N = len(index)
    rows, rhs = [], []
    for (i, j) in atlas.pairs:
        t = target[(i, j)]
        for v in monos:
            for k in range(n):
                row = {index[(j, v, k)]: 1, index[(i, v, k)]: -1}
                rows.append(row)
                rhs.append(t.component((k,)).coeff(v))
    for i, chart in enumerate(atlas.charts):
        rb = None if chart.boundary is None else tuple(chart.boundary)
        for v in monos:
            for r in _bad_rows(chart.basis, tuple(chart.invertible), rb, v, mode):
                rows.append({index[(i, v, k)]: r[k] for k in range(n) if r[k] != 0})
                rhs.append(0)
    if not rows:
        return True
    # every target monomial outside the box would already be unsolvable
    for (i, j) in atlas.pairs:
        if any(max(abs(e) for e in v) > B for v in target[(i, j)].multidegrees()):
            return False
    dense = [[QQ(0)] * N for _ in rows]
    aug = [[QQ(0)] * (N + 1) for _ in rows]
    for r, (row, b) in enumerate(zip(rows, rhs)):
        for c, val in row.items():
            q = QQ(int(sp.numer(val)), int(sp.denom(val))) if not isinstance(val, int) else QQ(val)
            dense[r][c] = q
            aug[r][c] = q
        aug[r][N] = QQ(b.numerator, b.denominator)
    A = DomainMatrix(dense, (len(rows), N), QQ).to_sparse()
    Ab = DomainMatrix(aug, (len(rows), N + 1), QQ).to_sparse()
    return A.rank() == Ab.rank()


def rand_global_form(rng: random.Random, atlas: Atlas, span: int = 2) -> DlogForm:
    """Random 1-form regular on every chart; constant forms are favoured half the time."""
    n = atlas.nvars
    if rng.random() < 0.5:
        c = DlogForm.constant([rng.randint(-3, 3) for _ in range(n)])
        if all(is_regular_form(c, ch) for ch in atlas.charts):
            return c
    return rand_regular_form(rng, atlas.charts, n, terms=4, span=span)


def rand_connection(rng: random.Random, atlas: Atlas):
    """A valid Connection: solver witness for a random bundle plus a random global form."""
    from cechline.connections import Connection, solve_connection
    for _ in range(50):
        L = rand_bundle(rng, atlas, span=rng.choice([0, 1, 2]))
        res = solve_connection(L, "any")
        if res.exists:
            w = rand_global_form(rng, atlas)
            extra = FormCochain(atlas, 0, {(i,): w for i in range(len(atlas.charts))})
            return Connection(L, res.connection.forms + extra)
    raise RuntimeError("no bundle with a connection found")
