import json
import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from cechline.algebra import DlogForm, UnitMonomial
from cechline.atlas import Atlas, Chart, builtin_atlas
from cechline.bundles import (BundleError, LineBundle, O, atiyah_obstruction, check_cocycle, dual,
                              is_trivial, load_bundle, monomial_picard_group, picard_class, tensor,
                              trivialization)
from cechline.cech import CochainError, FormCochain, coboundary, dlog_cochain, unit_coboundary
from helpers import BUILTIN_NAMES, rand_bundle

TORUS = Chart.from_columns([[1, 0], [0, 1]], [True, True])


def three_tori():
    nerve = {k: TORUS for r in (2, 3) for k in combinations(range(3), r)}
    return Atlas(2, (TORUS, TORUS, TORUS), nerve, None, "three-tori")


def test_check_cocycle_examples():
    assert all(check_cocycle(O(k)) for k in range(-3, 4))
    X = three_tori()
    good = LineBundle.from_exponents(X, {(0, 1): (1, 0), (1, 2): (0, 1), (0, 2): (1, 1)})
    assert check_cocycle(good)
    bad = LineBundle.from_exponents(X, {(0, 1): (1, 0), (1, 2): (0, 1), (0, 2): (1, 0)})
    assert not check_cocycle(bad)
    with pytest.raises(BundleError):
        trivialization(bad)
    # coefficients must be multiplicative as well
    coeffs = LineBundle.from_units(X, {(0, 1): UnitMonomial(2, (0, 0)), (1, 2): UnitMonomial(3, (0, 0)),
                                       (0, 2): UnitMonomial(5, (0, 0))})
    assert not check_cocycle(coeffs)


def test_units_must_be_invertible_on_the_overlap():
    P2 = builtin_atlas("P2")
    with pytest.raises(CochainError):
        LineBundle.from_exponents(P2, {(0, 1): (0, 1), (0, 2): (0, 0), (1, 2): (0, 0)})


def test_tensor_and_dual():
    assert tensor(O(1), O(1)).cocycle == O(2).cocycle
    for k in (-2, 0, 3):
        assert tensor(O(k), dual(O(k))).cocycle.is_one()
        assert dual(O(k)).cocycle == O(-k).cocycle
    with pytest.raises(BundleError):
        tensor(O(1), LineBundle.trivial(builtin_atlas("A2minus0")))


def test_triviality_examples():
    X = builtin_atlas("A2minus0")
    for a, b in [(2, -1), (0, 3), (-3, -3)]:
        L = LineBundle.from_exponents(X, {(0, 1): (a, b)})
        u = trivialization(L)
        assert u is not None
        assert unit_coboundary(u) == L.cocycle
        # witness u0 = t2^-b, u1 = t1^a up to a global unit
        assert u[0].exponent == (0, -b) and u[1].exponent == (a, 0)
        assert X.charts[0].monomial_unit(u[0].exponent) and X.charts[1].monomial_unit(u[1].exponent)
    assert not any(is_trivial(O(k)) for k in (-2, -1, 1, 3))
    assert is_trivial(O(0))
    assert is_trivial(LineBundle.trivial(builtin_atlas("P2")))


def test_coefficient_cocycles_split():
    X = three_tori()
    units = {(0, 1): UnitMonomial(2, (1, 0)), (1, 2): UnitMonomial(Fraction(1, 3), (0, 1)),
             (0, 2): UnitMonomial(Fraction(2, 3), (1, 1))}
    L = LineBundle.from_units(X, units)
    u = trivialization(L)
    assert unit_coboundary(u) == L.cocycle


def _brute_force_trivial(L, box=4):
    """Search unit exponents on every chart inside a box."""
    atlas = L.atlas
    options = []
    for chart in atlas.charts:
        gens = chart.invertible_generators()
        opts = set()
        for cs in product(range(-box, box + 1), repeat=len(gens)):
            opts.add(tuple(sum(c * g[k] for c, g in zip(cs, gens)) for k in range(atlas.nvars)))
        options.append(sorted(opts))
    for exps in product(*options):
        if all(tuple(a - b for a, b in zip(exps[j], exps[i])) == L[(i, j)].exponent for i, j in atlas.pairs):
            return True
    return False


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_triviality_matches_search(name):
    atlas = builtin_atlas(name)
    rng = random.Random(4)
    for _ in range(40):
        L = rand_bundle(rng, atlas, span=2)
        assert is_trivial(L) == _brute_force_trivial(L)


@pytest.mark.parametrize("name,expected", [("P1", "Z"), ("A2", "0"), ("Gm2", "0"), ("A2minus0", "0"),
                                           ("P1xP1", "Z^2"), ("P2", "Z")])
def test_monomial_picard_groups(name, expected):
    assert monomial_picard_group(builtin_atlas(name)).describe() == expected


def test_obstruction_examples():
    rep = atiyah_obstruction(O(2))
    assert not rep.vanishes and rep.witness is None
    assert rep.certificate.multidegree == (0,)
    triv = atiyah_obstruction(LineBundle.trivial(builtin_atlas("P1")))
    assert triv.vanishes and triv.witness.is_zero()
    X = builtin_atlas("A2minus0")
    L = LineBundle.from_exponents(X, {(0, 1): (1, 1)})
    rep = atiyah_obstruction(L)
    assert rep.vanishes
    assert coboundary(rep.witness) == dlog_cochain(L.cocycle)
    assert rep.witness[0] == DlogForm.constant([0, -1])
    assert rep.witness[1] == DlogForm.constant([1, 0])
    # theta2 has a pole along t2 = 0 inside U1, so (0, theta1 + theta2) is not a witness
    with pytest.raises(CochainError):
        FormCochain(X, 0, {(0,): DlogForm.zero(2, 1), (1,): DlogForm.constant([1, 1])})


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_obstruction_group_properties(name):
    atlas = builtin_atlas(name)
    rng = random.Random(12)
    for _ in range(30):
        L1, L2 = rand_bundle(rng, atlas), rand_bundle(rng, atlas)
        r1, r2 = atiyah_obstruction(L1), atiyah_obstruction(L2)
        if r1.vanishes and r2.vanishes:
            L = tensor(L1, L2)
            assert atiyah_obstruction(L).vanishes
            assert coboundary(r1.witness + r2.witness) == dlog_cochain(L.cocycle)
        if r1.vanishes:
            assert coboundary(-r1.witness) == dlog_cochain(dual(L1).cocycle)
            assert atiyah_obstruction(dual(L1)).vanishes
        if is_trivial(L1):
            assert r1.vanishes


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_picard_class_is_a_homomorphism(name):
    atlas = builtin_atlas(name)
    G = monomial_picard_group(atlas)
    mods = [d for d in G.invariants if d != 1]
    rng = random.Random(8)
    for _ in range(30):
        L1, L2 = rand_bundle(rng, atlas), rand_bundle(rng, atlas)
        c1, c2, c = picard_class(L1), picard_class(L2), picard_class(tensor(L1, L2))
        expected = tuple((a + b) % d if d else a + b for a, b, d in zip(c1, c2, mods))
        assert c == expected
        assert is_trivial(L1) == (not any(c1))


@pytest.mark.parametrize("name", ["A2", "Gm2"])
def test_single_chart_bundles_are_trivial(name):
    atlas = builtin_atlas(name)
    assert is_trivial(LineBundle.trivial(atlas))
    assert monomial_picard_group(atlas).describe() == "0"


def test_json_round_trip(tmp_path):
    L = LineBundle.from_units(builtin_atlas("A2minus0"), {(0, 1): UnitMonomial(Fraction(-3, 2), (2, -1))})
    path = tmp_path / "bundle.json"
    path.write_text(json.dumps(L.to_json()))
    again = load_bundle(str(path))
    assert again.cocycle == L.cocycle
    assert L.to_json()["cocycle"] == [{"pair": [0, 1], "coeff": "-3/2", "exponent": [2, -1]}]
    with pytest.raises(BundleError):
        load_bundle({"atlas": "P1", "cocycle": [{"pair": [0, 1], "coeff": "0", "exponent": [1]}]})
