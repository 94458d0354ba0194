"""Integer Mayer-Vietoris cohomology for atlases with one or two charts.

Each chart or overlap ``C^a x (C^*)^b`` is homotopic to a real ``b``-torus.
Its ``H^1(.; Z)`` is identified with the lattice of exponents of unit
monomials (the class of ``dlog w`` for a unit ``w``), and ``H^2`` with the
second exterior power of that lattice.  Restrictions are lattice inclusions;
in degree two they act through 2x2 minors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import List, Tuple

from .atlas import Atlas
from .bundles import LineBundle, _coords_in, _require_cocycle, group_name
from .linalg import cokernel, diagonal, matvec, smith_normal_form


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class TorusHomotopy:
    rank: int
    generators: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class CohClass:
    """Element of a finitely generated abelian group ``Z^r + sum Z/d``.

    ``element`` lists the ``r`` free coordinates followed by one coordinate
    per torsion factor, each reduced modulo its order.
    """

    free_rank: int
    torsion: Tuple[int, ...]
    element: Tuple[int, ...]

    @property
    def group(self) -> str:
        return group_name(self.free_rank, self.torsion)

    def is_zero(self) -> bool:
        return not any(self.element)

    def is_torsion(self) -> bool:
        return not any(self.element[:self.free_rank])

    def to_json(self) -> dict:
        return {"group": self.group, "element": list(self.element)}


@dataclass(frozen=True)
class Cohomology:
    h1_rank: int
    h2_rank: int
    h2_torsion: Tuple[int, ...]
    # cokernel of H^1(U0) + H^1(U1) -> H^1(U01), used by the Chern class
    coker_transform: Tuple[Tuple[int, ...], ...] = ()
    coker_invariants: Tuple[int, ...] = ()

    @property
    def h1(self) -> str:
        return group_name(self.h1_rank, ())

    @property
    def h2(self) -> str:
        return group_name(self.h2_rank, self.h2_torsion)

    def to_json(self) -> dict:
        return {"H0": "Z", "H1": self.h1, "H2": self.h2,
                "h1_rank": self.h1_rank, "h2_rank": self.h2_rank,
                "h2_torsion": list(self.h2_torsion)}


def torus_homotopy(atlas: Atlas, key) -> TorusHomotopy:
    gens = atlas.chart(key).invertible_generators()
    return TorusHomotopy(len(gens), tuple(gens))


def supports_topology(atlas: Atlas) -> bool:
    m = len(atlas.charts)
    return m == 1 or (m == 2 and (0, 1) in atlas.nerve)


def _check(atlas: Atlas):
    if not supports_topology(atlas):
        raise TopologyError("Mayer-Vietoris is implemented for one chart or two overlapping charts")


def _inclusion(src: TorusHomotopy, dst: TorusHomotopy) -> List[List[int]]:
    """Matrix of the lattice inclusion in generator coordinates (columns = src gens)."""
    cols = [_coords_in(list(dst.generators), g) for g in src.generators]
    return [[c[r] for c in cols] for r in range(dst.rank)]


def _wedge2(mat: List[List[int]], src_rank: int, dst_rank: int) -> List[List[int]]:
    src_pairs = list(combinations(range(src_rank), 2))
    dst_pairs = list(combinations(range(dst_rank), 2))
    return [[mat[a][i] * mat[b][j] - mat[a][j] * mat[b][i] for (i, j) in src_pairs]
            for (a, b) in dst_pairs]


def _rank(mat) -> int:
    if not mat or not mat[0]:
        return 0
    D, _, _ = smith_normal_form(mat)
    return sum(1 for x in diagonal(D) if x)


def mv_cohomology(atlas: Atlas) -> Cohomology:
    _check(atlas)
    if len(atlas.charts) == 1:
        b = torus_homotopy(atlas, 0).rank
        return Cohomology(b, comb(b, 2), ())
    T0, T1, T01 = (torus_homotopy(atlas, k) for k in ((0,), (1,), (0, 1)))
    i0, i1 = _inclusion(T0, T01), _inclusion(T1, T01)
    r1 = [row0 + [-x for x in row1] for row0, row1 in zip(i0, i1)]
    h1 = T0.rank + T1.rank - _rank(r1)
    U, inv = cokernel(r1, T01.rank)
    coker_free = sum(1 for d in inv if d == 0)
    torsion = tuple(d for d in inv if d > 1)
    w0 = _wedge2(i0, T0.rank, T01.rank)
    w1 = _wedge2(i1, T1.rank, T01.rank)
    r2 = [a + [-x for x in b] for a, b in zip(w0, w1)]
    dom2 = comb(T0.rank, 2) + comb(T1.rank, 2)
    ker_r2 = dom2 - _rank(r2)
    return Cohomology(h1, coker_free + ker_r2, torsion,
                      tuple(tuple(r) for r in U), tuple(inv))


def chern_class(L: LineBundle) -> CohClass:
    """Image of ``[g_01]`` under the Mayer-Vietoris connecting map.

    The winding data of ``g_01`` is its exponent vector in ``H^1(U_01; Z)``;
    the class is read in the cokernel of the restriction from ``U_0`` and
    ``U_1``.  Normalised so that ``O(k)`` on P1 maps to ``k``.
    """
    atlas = L.atlas
    _check(atlas)
    _require_cocycle(L)
    H = mv_cohomology(atlas)
    if len(atlas.charts) == 1:
        return CohClass(H.h2_rank, H.h2_torsion, (0,) * (H.h2_rank + len(H.h2_torsion)))
    T01 = torus_homotopy(atlas, (0, 1))
    e = _coords_in(list(T01.generators), L[(0, 1)].exponent)
    coords = matvec([list(r) for r in H.coker_transform], e)
    free, tors = [], []
    for c, d in zip(coords, H.coker_invariants):
        if d == 0:
            free.append(c)
        elif d > 1:
            tors.append(c % d)
    ker_part = H.h2_rank - len(free)
    return CohClass(H.h2_rank, H.h2_torsion, tuple(free + [0] * ker_part + tors))


def pic_ci_structure(atlas: Atlas) -> dict:
    """``Hom(H_1(X; Z), C^*) = (C^*)^r x dual(torsion H_1)``.

    ``r`` is the rank of ``H^1``; the torsion of ``H_1`` equals the torsion of
    ``H^2`` by universal coefficients.
    """
    H = mv_cohomology(atlas)
    r = H.h1_rank
    parts = []
    if r == 1:
        parts.append("C*")
    elif r > 1:
        parts.append(f"(C*)^{r}")
    parts.extend(f"Z/{d}" for d in H.h2_torsion)
    desc = " x ".join(parts) if parts else "0"
    return {"description": desc, "rank": r, "torsion": list(H.h2_torsion),
            "h1_rank": H.h1_rank, "trivial": not parts}
