"""Dual groups, dual orbits, and exact irreducible character tables.

Oracles: the hand-frozen character table of the order-6 dihedral group,
float evaluation, exhaustive class-function checks, and the general
conjugation-sum evaluation run against the abelian fast path.
"""

import io
from fractions import Fraction

import pytest

from ostar.characters import (
    char_value_general,
    character_table,
    cyclic_decomposition,
    dual_act,
    dual_group,
    dual_of_subgroup,
    dual_orbits,
    export_chartable_csv,
    irred_chars,
    validate_table,
    zero_set,
)
from ostar.cyclotomic import CycloNum, root_of_unity
from ostar.groups import (
    AbelianGroup,
    ActionHom,
    WreathSpec,
    build_semidirect,
    build_wreath,
    dihedral,
    group_pq,
    z_group,
)


def direct_product(a_factors, h_factors):
    A, H = AbelianGroup(a_factors), AbelianGroup(h_factors)
    return build_semidirect(A, H, ActionHom.trivial(H, A))


SMALL_GROUPS = [
    dihedral(3),
    dihedral(4),
    group_pq(3, 7, 2),
    z_group(5, 4, 2),
    build_wreath(WreathSpec.regular(AbelianGroup([2]), AbelianGroup([2]))),
    direct_product([6], [2]),
]
SMALL_IDS = ["D6", "D8", "F21", "F20", "C2wrC2", "C6xC2"]


# -- dual groups -----------------------------------------------------------------


def test_dual_group_trivial():
    chars = dual_group(AbelianGroup([1]))
    assert len(chars) == 1
    assert chars[0].value((0,)) == 1


def test_dual_group_c3_matches_definition():
    A = AbelianGroup([3])
    chars = dual_group(A)
    assert len(chars) == 3
    for c, x in enumerate(chars):
        for a in range(3):
            assert x.value((a,)) == root_of_unity(3, c * a)


def test_dual_group_c2xc2_real_valued():
    A = AbelianGroup([2, 2])
    chars = dual_group(A)
    assert len(chars) == 4
    for x in chars:
        for a in A.elements():
            assert x.value(a) in (CycloNum.from_rational(1), CycloNum.from_rational(-1))


@pytest.mark.parametrize("factors", [[4], [2, 3], [2, 2, 2], [6, 2]])
def test_dual_characters_are_homomorphisms_and_orthogonal(factors):
    A = AbelianGroup(factors)
    chars = dual_group(A)
    for x in chars:
        for a in A.elements():
            for b in A.elements():
                assert x.value(A.add(a, b)) == x.value(a) * x.value(b)
    for i in range(len(chars)):
        for j in range(i, len(chars)):
            s = CycloNum.zero()
            for a in A.elements():
                s = s + chars[i].value(a) * chars[j].value(a).conj()
            assert s == (A.order if i == j else 0)


# -- dual orbits -----------------------------------------------------------------


def test_dual_orbits_d6():
    G = dihedral(3)
    orbits = dual_orbits(G.A, G.H, G.phi)
    assert [len(o.members) for o in orbits] == [1, 2]
    assert orbits[0].rep.exponents == (0,)
    assert len(orbits[0].stabilizer) == 2
    assert orbits[1].rep.exponents == (1,)
    assert {m.exponents for m in orbits[1].members} == {(1,), (2,)}
    assert orbits[1].stabilizer == (G.H.identity,)


def test_dual_orbits_trivial_action_singletons():
    G = direct_product([5], [4])
    orbits = dual_orbits(G.A, G.H, G.phi)
    assert len(orbits) == 5
    assert all(len(o.members) == 1 and len(o.stabilizer) == 4 for o in orbits)


def test_dual_orbits_c5_by_c4():
    # the action a -> 2a cycles the exponents 1 -> 2 -> 4 -> 3
    G = z_group(5, 4, 2)
    orbits = dual_orbits(G.A, G.H, G.phi)
    assert [len(o.members) for o in orbits] == [1, 4]
    assert {m.exponents for m in orbits[1].members} == {(1,), (2,), (3,), (4,)}
    # oracle: orbit of 1 under repeated doubling mod 5
    got, x = set(), 1
    for _ in range(4):
        got.add(x)
        x = 2 * x % 5
    assert got == {1, 2, 4, 3}


def test_dual_act_is_an_action():
    G = group_pq(3, 7, 2)
    H = G.H
    for x in dual_group(G.A):
        for h1 in H.elements():
            for h2 in H.elements():
                once = dual_act(dual_act(x, h1, G.phi), h2, G.phi)
                both = dual_act(x, H.add(h1, h2), G.phi)
                assert once == both


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=SMALL_IDS)
def test_orbit_stabilizer_product(G):
    for o in dual_orbits(G.A, G.H, G.phi):
        assert len(o.members) * len(o.stabilizer) == G.H.order


# -- subgroup duals -----------------------------------------------------------------


@pytest.mark.parametrize("factors", [[4], [2, 4], [2, 2, 2], [12]])
def test_cyclic_decomposition_covers_subgroups(factors):
    H = AbelianGroup(factors)
    # decompose the full group and a couple of cyclic subgroups
    full = set(H.elements())
    dec = cyclic_decomposition(full, H)
    total = 1
    for _, d in dec:
        total *= d
    assert total == H.order
    g = H.generators()[0]
    cyc = set()
    x = H.identity
    while x not in cyc:
        cyc.add(x)
        x = H.add(x, g)
    dec2 = cyclic_decomposition(cyc, H)
    total2 = 1
    for _, d in dec2:
        total2 *= d
    assert total2 == len(cyc)


@pytest.mark.parametrize("factors", [[2, 4], [6], [2, 2]])
def test_dual_of_subgroup_counts_and_orthogonality(factors):
    H = AbelianGroup(factors)
    sub = frozenset(H.elements())
    chars = dual_of_subgroup(sub, H)
    assert len(chars) == len(sub)
    seen = set()
    for u in chars:
        seen.add(tuple(str(u.value(h)) for h in sorted(sub, key=H.code)))
        for a in sub:
            for b in sub:
                assert u.value(H.add(a, b)) == u.value(a) * u.value(b)
    assert len(seen) == len(sub)


# -- irreducible characters ------------------------------------------------------------


def test_irred_chars_d6_against_frozen_table():
    """The full character table of the order-6 dihedral group, recomputed by
    hand from its three conjugacy classes {e}, {r, r^2}, {3 reflections}."""
    G = dihedral(3)
    chars = irred_chars(G)
    assert sorted(c.degree for c in chars) == [1, 1, 2]
    e = G.identity
    r = ((1,), (0,))
    flip = ((0,), (1,))
    frozen = {
        # (value at e, at r, at reflection)
        (1, 1, 1),
        (1, 1, -1),
        (2, -1, 0),
    }
    got = set()
    for chi in chars:
        got.add(
            (
                chi.value(e).as_fraction(),
                chi.value(r).as_fraction(),
                chi.value(flip).as_fraction(),
            )
        )
    assert got == frozen


def test_irred_chars_d10_against_closed_form():
    """Classical table of the order-10 dihedral group: two linear
    characters and two degree-2 characters with values z5^(jk) + z5^(-jk)
    on the rotation r^k and 0 on reflections."""
    G = dihedral(5)
    chars = character_table(G).chars
    assert sorted(c.degree for c in chars) == [1, 1, 2, 2]
    two_dim = [c for c in chars if c.degree == 2]
    seen_j = set()
    for chi in two_dim:
        for flip_a in range(5):
            assert chi.value(((flip_a,), (1,))).is_zero()
        # identify which j in {1, 2} this character realizes
        for j in (1, 2):
            if all(
                chi.value(((k,), (0,)))
                == root_of_unity(5, j * k) + root_of_unity(5, -j * k)
                for k in range(5)
            ):
                seen_j.add(j)
                break
    assert seen_j == {1, 2}
    linear = [c for c in chars if c.degree == 1]
    for chi in linear:
        for k in range(5):
            assert chi.value(((k,), (0,))) == 1
    assert {chi.value(((0,), (1,))).as_fraction() for chi in linear} == {1, -1}


def test_irred_chars_order_21_against_closed_form():
    """The degree-3 characters of the order-21 group take the value
    sum(z7^(kc)) over an index-3 subgroup of units on the rotation a^c and
    vanish off the rotation subgroup."""
    G = group_pq(3, 7, 2)
    three_dim = [c for c in character_table(G).chars if c.degree == 3]
    cosets = ({1, 2, 4}, {3, 5, 6})
    matched = set()
    for chi in three_dim:
        for idx, coset in enumerate(cosets):
            ok = True
            for c in range(1, 7):
                expected = CycloNum.zero(7)
                for k in coset:
                    expected = expected + root_of_unity(7, k * c)
                if chi.value(((c,), (0,))) != expected:
                    ok = False
                    break
            if ok:
                matched.add(idx)
    assert matched == {0, 1}


def test_irred_chars_direct_product_all_linear():
    G = direct_product([3, 2], [2])
    chars = irred_chars(G)
    assert len(chars) == 12
    assert all(c.degree == 1 for c in chars)


def test_irred_chars_order_21():
    G = group_pq(3, 7, 2)
    chars = irred_chars(G)
    assert sorted(c.degree for c in chars) == [1, 1, 1, 3, 3]
    assert sum(c.degree**2 for c in chars) == 21
    assert len(G.conjugacy_classes()) == 5


def test_char_value_examples_d6():
    G = dihedral(3)
    chars = character_table(G).chars
    chi2 = chars[2]
    assert chi2.degree == 2
    a = ((1,), (0,))
    z3 = root_of_unity(3, 1)
    assert chi2.value(a) == z3 + z3 * z3
    assert chi2.value(a) == -1
    assert abs(chi2.value(a).evalf() - (-1)) < 1e-12
    for chi in chars:
        assert chi.value(G.identity) == chi.degree
    assert chi2.value(((1,), (1,))).is_zero()


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=SMALL_IDS)
def test_characters_are_class_functions(G):
    chars = irred_chars(G)
    els = G.elements()
    for chi in chars:
        for g in els:
            v = chi.value_uncached(g)
            for t in els:
                conj = G.mul(G.mul(G.inv(t), g), t)
                assert chi.value_uncached(conj) == v


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=SMALL_IDS)
def test_general_conjugation_sum_matches_fast_path(G):
    for chi in irred_chars(G):
        for g in G.elements():
            assert char_value_general(chi, g) == chi.value_uncached(g)


def test_value_independent_of_orbit_representative():
    # rebuilding the value function from any other orbit member gives the
    # identical function
    G = group_pq(3, 7, 2)
    H = G.H
    for chi in irred_chars(G):
        stab = frozenset(chi.orbit.stabilizer)
        for member in chi.orbit.members:
            for g in G.elements():
                a, h = g
                if h not in stab:
                    alt = CycloNum.zero()
                else:
                    s = CycloNum.zero()
                    for hh in H.elements():
                        s = s + member.value(G.phi.apply(hh, a))
                    alt = chi.u.value(h) * s * Fraction(1, len(stab))
                assert alt == chi.value_uncached(g)


# -- table validation --------------------------------------------------------------


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=SMALL_IDS)
def test_validate_table_passes(G):
    table = character_table(G)
    assert table.report.ok
    assert table.report.checks == {
        "degree_sum": True,
        "orthogonality": True,
        "conjugate_symmetry": True,
    }
    assert sum(c.degree**2 for c in table.chars) == G.order


class _Corrupted:
    """Wraps a character but lies at one conjugacy class."""

    def __init__(self, chi, bad_class):
        self._chi = chi
        self._bad = bad_class
        self.degree = chi.degree
        self.G = chi.G

    def value(self, g):
        if self.G.class_index(g) == self._bad:
            return self._chi.value(g) + 1
        return self._chi.value(g)


def test_validate_table_negative_control():
    G = dihedral(3)
    chars = list(character_table(G).chars)
    chars[2] = _Corrupted(chars[2], bad_class=1)
    report = validate_table(chars, G)
    assert not report.ok
    assert not report.checks["orthogonality"]
    assert any("orthogonality" in f for f in report.failures)


# -- zero sets ------------------------------------------------------------------------


def test_zero_sets():
    G = dihedral(3)
    chars = character_table(G).chars
    assert zero_set(chars[0]) == frozenset()
    assert zero_set(chars[1]) == frozenset()
    zs = zero_set(chars[2])
    assert zs == frozenset((a, h) for (a, h) in G.elements() if h != (0,))
    assert len(zs) == 3

    G21 = group_pq(3, 7, 2)
    chi3 = [c for c in character_table(G21).chars if c.degree == 3][0]
    zs21 = zero_set(chi3)
    assert zs21 == frozenset(g for g in G21.elements() if g[1] != (0,))
    assert len(zs21) == 14


# -- csv export ------------------------------------------------------------------------


def test_chartable_csv_roundtrip():
    import csv

    G = dihedral(3)
    table = character_table(G)
    buf = io.StringIO()
    export_chartable_csv(G, table.chars, buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert len(rows) == 1 + len(table.chars)
    n_classes = len(G.conjugacy_classes())
    assert len(rows[0]) == 2 + 2 * n_classes
    # identity class column: exact coefficient list plus approximation
    assert rows[1][2] == "1:1"
    assert rows[3][2] == "1:2"
    assert rows[3][3].startswith("2")
    assert rows[3][0] == "chi2" and rows[3][1] == "2"
    # classes sit in min-element-code order: identity, reflections, rotations
    assert rows[3][4] == "1:0"
    assert rows[3][6] == "1:-1"
