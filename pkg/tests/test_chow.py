from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from instanton_lab import chow, schubert
from instanton_lab.chow import ChowClass, chi, cohomology_table, grr_y4, instanton, normalize, slope


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_riemann_roch_anchors(d):
    assert chi(ChowClass.structure_sheaf(d)) == 1
    assert chi(ChowClass.line_bundle(d, -1)) == 0
    assert chi(ChowClass.line_bundle(d, 1)) == d + 2
    assert chow.todd(d).ch2 == Fraction(d + 3, 3)
    for n in range(2, 7):
        e = instanton(d, n)
        assert chi(e) == -(n - 2)
        assert chi(e.twist(-1)) == 0
        assert chi(e.twist(1)) == 2 * d - 2 * n + 4


@given(st.integers(1, 5), st.integers(2, 8), st.integers(-5, 5))
def test_serre_symmetry(d, n, t):
    e = instanton(d, n)
    assert chi(e.twist(t)) == -chi(e.dual().twist(-2 - t))


@given(st.integers(1, 5), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_twist_is_functorial(d, c1, a, b):
    c = ChowClass.from_chern(d, 2, c1, 3, 1)
    assert c.twist(a).twist(b) == c.twist(a + b)


def test_chi_is_additive_and_cubic():
    e, f = instanton(5, 3), ChowClass.line_bundle(5, 2)
    assert chi(e + f) == chi(e) + chi(f)
    values = [chi(e.twist(t)) for t in range(-3, 3)]
    # fourth finite difference of a cubic vanishes
    for _ in range(4):
        values = [b - a for a, b in zip(values, values[1:])]
    assert all(v == 0 for v in values)


def test_chern_roundtrip():
    c = ChowClass.from_chern(4, 3, -2, 5, 7)
    assert c.chern() == (3, -2, 5, 7)


def test_non_integral_chi_raises():
    with pytest.raises(chow.NonIntegralChi):
        chi(ChowClass(5, 0, 0, 0, Fraction(1, 2)))


def test_schubert_pins_tautological_constants():
    pinned = schubert.tautological_chern_on_y5()
    assert pinned["degree"] == 5
    assert pinned["U"] == chow.Y5_TAUTOLOGICAL_SUB
    assert pinned["U_perp"] == chow.Y5_TAUTOLOGICAL_PERP


def test_schubert_ring_sanity():
    s1 = schubert.sigma(1)
    assert schubert.product(s1, s1) == schubert.sigma(2) + schubert.sigma(1, 1)
    top = s1
    for _ in range(5):
        top = schubert.pieri(1, top)
    assert schubert.degree(top) == 5  # deg Gr(2, 5)


def test_tautological_bundle_euler_characteristics():
    u, up = chow.tautological_sub(), chow.tautological_perp()
    assert chi(u) == 0 and chi(up) == 0
    assert chi(u.dual() * up) == 3  # Hom(U, U^perp) = A
    assert chi(u.dual() * u) == 1  # U is exceptional
    assert chi(up.dual() * up) == 1


def test_slopes():
    u = chow.tautological_sub()
    assert slope(u) == Fraction(-1, 2)
    assert normalize(u)[1] == 0
    c, k = normalize(ChowClass.line_bundle(5, 3))
    assert k == -3 and c == ChowClass.structure_sheaf(5)
    upm = chow.tautological_perp().twist(-1)
    assert slope(upm) == Fraction(-4, 3)
    c, k = normalize(upm)
    assert k == 1 and slope(c) == Fraction(-1, 3)
    with pytest.raises(chow.ZeroRank):
        slope(ChowClass(5, 0, 1, 0, 0))


def test_cohomology_table():
    table = cohomology_table(5, 2, range(-2, 1))
    assert all(table.entries[(i, t)] == 0 for i in range(4) for t in range(-2, 1))
    for n in (2, 3, 5):
        table = cohomology_table(3, n, range(-4, 3))
        assert table.column(0) == [0, n - 2, 0, 0]
        assert table.column(-2) == [0, 0, n - 2, 0]
        assert table.consistent()
    table = cohomology_table(5, 3, range(-3, 3))
    assert table.constraint(1) == "h0 - h1 = 8"
    with pytest.raises(chow.BadCharge):
        cohomology_table(5, 1, range(0, 1))


def test_grr_y4():
    assert grr_y4(1, 0) == ChowClass(4, -1, 0, 1, 0)
    ideal_of_line = ChowClass(4, 1, 0, -1, 0)
    assert grr_y4(1, 0) == -ideal_of_line
    for n in range(2, 6):
        assert grr_y4(n, 0) == ChowClass(4, -n, 0, n, 0) == -chow.acyclic_extension(4, n)
    for r in range(-5, 6):
        for deg in range(-5, 6):
            chi(grr_y4(r, deg))  # integral
