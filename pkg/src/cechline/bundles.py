"""Monomial line bundles: unit 1-cocycles modulo unit coboundaries."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .algebra import UnitMonomial
from .atlas import Atlas, load_atlas, unit_is_valid
from .cech import (FormCochain, Infeasibility, UnitCochain, dlog_cochain,
                   is_unit_cocycle, solve_coboundary, split_coefficients)
from .linalg import cokernel, kernel_integer, matvec, solve_integer


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class LineBundle:
    """Transition data ``g_ij`` (``s_j = g_ij s_i``) on the nerve pairs.

    Construction does not insist on the cocycle rule so that broken data can be
    inspected with :func:`check_cocycle`; every other operation requires it.
    """

    atlas: Atlas
    cocycle: UnitCochain
    atlas_ref: Optional[str] = None

    @classmethod
    def from_units(cls, atlas: Atlas, units: Dict[Tuple[int, int], UnitMonomial]) -> "LineBundle":
        return cls(atlas, UnitCochain(atlas, 1, dict(units)), atlas.name)

    @classmethod
    def from_exponents(cls, atlas: Atlas, exponents: Dict[Tuple[int, int], Tuple[int, ...]]) -> "LineBundle":
        return cls.from_units(atlas, {k: UnitMonomial(1, e) for k, e in exponents.items()})

    @classmethod
    def trivial(cls, atlas: Atlas) -> "LineBundle":
        return cls(atlas, UnitCochain.one(atlas, 1), atlas.name)

    def __getitem__(self, pair) -> UnitMonomial:
        return self.cocycle[pair]

    def to_json(self) -> dict:
        ref = self.atlas_ref or self.atlas.name
        return {
            "atlas": ref if ref else self.atlas.to_json(),
            "cocycle": [{"pair": list(k), "coeff": _fmt(u.coeff), "exponent": list(u.exponent)}
                        for k, u in self.cocycle.values.items()],
        }

    @classmethod
    def from_json(cls, d: dict) -> "LineBundle":
        try:
            ref = d["atlas"]
            atlas = load_atlas(ref)
            units = {}
            for entry in d.get("cocycle", []):
                pair = tuple(int(i) for i in entry["pair"])
                units[pair] = UnitMonomial(Fraction(str(entry.get("coeff", "1"))), entry["exponent"])
            return cls(atlas, UnitCochain(atlas, 1, units), ref if isinstance(ref, str) else None)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, BundleError):
                raise
            raise BundleError(f"malformed bundle description: {exc}") from exc


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def load_bundle(path) -> LineBundle:
    if isinstance(path, dict):
        return LineBundle.from_json(path)
    return LineBundle.from_json(json.loads(Path(path).read_text()))


def O(k: int, atlas: Optional[Atlas] = None) -> LineBundle:
    """``O(k)`` on P1: ``g_01 = t1^k``."""
    from .atlas import builtin_atlas
    atlas = atlas or builtin_atlas("P1")
    return LineBundle.from_exponents(atlas, {(0, 1): (k,)})


def check_cocycle(L: LineBundle) -> bool:
    for key, u in L.cocycle.values.items():
        if not unit_is_valid(u, L.atlas.chart(key)):
            return False
    return is_unit_cocycle(L.cocycle)


def _require_cocycle(L: LineBundle):
    if not check_cocycle(L):
        raise BundleError("transition data violate the cocycle rule")


def _same_atlas(a: LineBundle, b: LineBundle):
    if a.atlas is not b.atlas and a.atlas != b.atlas:
        raise BundleError("bundles live on different atlases")


def tensor(a: LineBundle, b: LineBundle) -> LineBundle:
    _same_atlas(a, b)
    return LineBundle(a.atlas, a.cocycle * b.cocycle, a.atlas_ref)


def dual(L: LineBundle) -> LineBundle:
    return LineBundle(L.atlas, L.cocycle.inverse(), L.atlas_ref)


# triviality -------------------------------------------------------------------

def _lattice_system(atlas: Atlas):
    """Integer matrix sending chart unit exponents ``(y_i)`` to ``(x_j - x_i)``.

    ``x_i`` ranges over the unit lattice of chart ``i``, parametrised by the
    invertible chart coordinates.  Columns are grouped per chart.
    """
    n = atlas.nvars
    blocks = []
    for chart in atlas.charts:
        blocks.append(chart.invertible_generators())
    ncols = sum(len(b) for b in blocks)
    rows = []
    for (i, j) in atlas.pairs:
        for k in range(n):
            row = []
            for c, gens in enumerate(blocks):
                s = 1 if c == j else -1 if c == i else 0
                row.extend(s * g[k] for g in gens)
            rows.append(row)
    return rows, blocks, ncols


def trivialization(L: LineBundle) -> Optional[UnitCochain]:
    """Units ``u_i`` on ``U_i`` with ``g_ij = u_j / u_i``, or None."""
    _require_cocycle(L)
    atlas = L.atlas
    n = atlas.nvars
    rows, blocks, ncols = _lattice_system(atlas)
    rhs = [L[p].exponent[k] for p in atlas.pairs for k in range(n)]
    y = solve_integer(rows, rhs, ncols) if rows else [0] * ncols
    if y is None:
        return None
    exps, pos = [], 0
    for gens in blocks:
        coeffs = y[pos:pos + len(gens)]
        pos += len(gens)
        exps.append(tuple(sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(n)))
    consts = split_coefficients(atlas, {p: L[p].coeff for p in atlas.pairs})
    if consts is None:
        return None
    return UnitCochain(atlas, 0, {(i,): UnitMonomial(consts[i], exps[i]) for i in range(len(atlas.charts))})


def is_trivial(L: LineBundle) -> bool:
    return trivialization(L) is not None


# obstruction --------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    """Whether the class of ``(dg_ij / g_ij)`` in ``H^1(X, Omega^1)`` vanishes.

    The obstruction class itself is the negative of this cocycle; vanishing is
    unaffected by the sign.
    """

    vanishes: bool
    witness: Optional[FormCochain] = None
    certificate: Optional[Infeasibility] = None

    def __post_init__(self):
        if self.vanishes != (self.witness is not None):
            raise ValueError("vanishes must coincide with the presence of a witness")


def atiyah_obstruction(L: LineBundle) -> ObstructionReport:
    _require_cocycle(L)
    sol, cert = solve_coboundary(dlog_cochain(L.cocycle), "regular", with_certificate=True)
    return ObstructionReport(sol is not None, sol, cert)


# the monomial Picard group ---------------------------------------------------------

def _coords_in(gens: List[Tuple[int, ...]], v) -> List[int]:
    """Coordinates of ``v`` in the saturated lattice spanned by ``gens``."""
    if not gens:
        if any(v):
            raise BundleError(f"{v} is not in the zero lattice")
        return []
    a = [[g[k] for g in gens] for k in range(len(v))]
    y = solve_integer(a, list(v), len(gens))
    if y is None:
        raise BundleError(f"{v} is not in the lattice {gens}")
    return y


@dataclass(frozen=True)
class PicardGroup:
    """``Z^1 / B^1`` of exponent cocycles, as free rank plus torsion."""

    free_rank: int
    torsion: Tuple[int, ...]
    cocycle_basis: Tuple[Tuple[int, ...], ...]
    projection: Tuple[Tuple[int, ...], ...]
    invariants: Tuple[int, ...]

    def describe(self) -> str:
        return group_name(self.free_rank, self.torsion)


def group_name(free_rank: int, torsion) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " + ".join(parts) if parts else "0"


def monomial_picard_group(atlas: Atlas) -> PicardGroup:
    """Exponent part of monomial ``Pic``: exponent cocycles modulo coboundaries.

    Coefficients are ignored here: on nerves that are full simplices (all the
    built-ins) the constant cocycle always splits.
    """
    n = atlas.nvars
    pairs = atlas.pairs
    pair_gens = [atlas.chart(p).invertible_generators() for p in pairs]
    offsets, pos = {}, 0
    for p, gens in zip(pairs, pair_gens):
        offsets[p] = pos
        pos += len(gens)
    dim = pos
    # cocycle condition a_ik = a_ij + a_jk in Z^n for every triple
    cons = []
    for (i, j, k) in atlas.triples:
        for comp in range(n):
            row = [0] * dim
            for p, s in (((i, j), 1), ((j, k), 1), ((i, k), -1)):
                for c, g in enumerate(pair_gens[pairs.index(p)]):
                    row[offsets[p] + c] += s * g[comp]
            cons.append(row)
    Z = kernel_integer(cons, dim) if cons else [[int(a == b) for b in range(dim)] for a in range(dim)]
    # coboundaries: images of chart unit generators
    rows, blocks, ncols = _lattice_system(atlas)
    B = []
    for col in range(ncols):
        full = [rows[r][col] for r in range(len(rows))]
        vec = []
        for idx, p in enumerate(pairs):
            vec.extend(_coords_in(pair_gens[idx], full[idx * n:(idx + 1) * n]))
        B.append(vec)
    # express coboundaries in the cocycle basis
    zmat = [[z[r] for z in Z] for r in range(dim)]
    rel = []
    for b in B:
        y = solve_integer(zmat, b, len(Z))
        if y is None:
            raise AssertionError("coboundary outside the cocycle lattice")
        rel.append(y)
    relmat = [[r[k] for r in rel] for k in range(len(Z))] if rel else []
    U, inv = cokernel(relmat, len(Z))
    free = sum(1 for d in inv if d == 0)
    torsion = tuple(d for d in inv if d > 1)
    return PicardGroup(free, torsion, tuple(tuple(z) for z in Z), tuple(tuple(r) for r in U), tuple(inv))


def picard_class(L: LineBundle) -> Tuple[int, ...]:
    """Coordinates of ``L`` in the presentation of :func:`monomial_picard_group`."""
    _require_cocycle(L)
    atlas = L.atlas
    G = monomial_picard_group(atlas)
    vec = []
    for p in atlas.pairs:
        vec.extend(_coords_in(atlas.chart(p).invertible_generators(), L[p].exponent))
    Z = G.cocycle_basis
    if not Z:
        return ()
    zmat = [[z[r] for z in Z] for r in range(len(vec))]
    y = solve_integer(zmat, vec, len(Z))
    coords = matvec([list(r) for r in G.projection], y)
    out = []
    for c, d in zip(coords, G.invariants):
        if d == 1:
            continue
        out.append(c % d if d else c)
    return tuple(out)
