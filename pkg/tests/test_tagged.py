import random
from fractions import Fraction as F

import pytest

from pogroup.carriers import Carrier, Coord
from pogroup.linalg import rref
from pogroup.rings import QQ, ZZ, z_inv
from pogroup.tagged import TaggedSubgroup, UnsupportedSubgroup, subspace_section

Z3 = z_inv(3)
C_Z2 = Carrier.zn(2)
C_Z3RING = Carrier.free(Z3)
C_ZQ = Carrier.free(ZZ, QQ)
C_ZZ3 = Carrier.free(ZZ, Z3)


def S(carrier, *gens):
    return TaggedSubgroup.span(carrier, gens)


def test_pure_lattice_matches_hermite():
    L = S(C_Z2, (ZZ, (2, 2)), (ZZ, (2, -2)))
    assert L.row_matrix() == ((F(2), F(2)), (F(0), F(4)))
    assert all(r == ZZ for r in L.tags())
    assert L.contains((4, 0))
    assert not L.contains((1, 1))
    w = L.membership((4, 0))
    assert w is not None


def test_fractional_z_span():
    c = Carrier.free(Z3)
    L = S(c, (ZZ, (F(1),)), (ZZ, (F(2, 3),)), (ZZ, (F(2, 9),)))
    # Z-span of {1, 2/3, 2/9} = (1/9)Z
    assert L.rows == ((ZZ, (F(1, 9),)),)
    assert L.contains((F(4, 9),))
    assert not L.contains((F(1, 27),))


def test_family_tag_absorbs_lattice():
    L = S(C_Z3RING, (Z3, (F(2),)), (ZZ, (F(1),)))
    assert L.rows == ((Z3, (F(1),)),)
    assert L.contains((F(1, 3),))
    assert L.contains((F(-5, 81),))


def test_absorption_with_scaling():
    c = Carrier.free(z_inv(2, 3))
    L = S(c, (Z3, (F(1),)), (ZZ, (F(1, 2),)))
    assert L.rows == ((Z3, (F(1, 2),)),)


def test_mixed_z_q_carrier():
    L = S(C_ZQ, (ZZ, (1, 0)), (QQ, (0, 1)))
    assert L.rows == ((QQ, (F(0), F(1))), (ZZ, (F(1), F(0))))
    assert L.contains((5, F(7, 13)))
    assert not L.contains((F(1, 2), 0))


def test_tag_must_fit_coordinate_ring():
    with pytest.raises(UnsupportedSubgroup):
        S(C_Z2, (QQ, (1, 0)))
    with pytest.raises(UnsupportedSubgroup):
        S(C_Z2, (Z3, (0, 1)))


def test_contains_subgroup_ring_awareness():
    big = S(C_Z3RING, (Z3, (1,)))
    small = S(C_Z3RING, (ZZ, (1,)))
    assert big.contains_subgroup(small)
    assert not small.contains_subgroup(big)
    assert big.contains_subgroup(big)


def test_element_order_pruefer_style():
    A = S(C_Z3RING, (ZZ, (1,)))
    assert A.element_order((F(2, 3),)) == 3
    assert A.element_order((F(4, 3),)) == 3
    assert A.element_order((F(2, 9),)) == 9
    assert A.element_order((5,)) == 1
    # infinite order: nothing lands in the trivial group
    Z = TaggedSubgroup.zero(C_Z3RING)
    assert Z.element_order((F(2, 3),)) is None


def test_subspace_section_z2():
    L = subspace_section(C_Z2, ((F(1), F(1)),))
    assert L.rows == ((ZZ, (F(1), F(1))),)


def test_subspace_section_skew_zq():
    L = subspace_section(C_ZQ, ((F(1), F(1)),))
    assert L.rows == ((ZZ, (F(1), F(1))),)
    full = subspace_section(C_ZQ, ((F(1), F(0)), (F(0), F(1))))
    assert full.rows == ((QQ, (F(0), F(1))), (ZZ, (F(1), F(0))))


def test_subspace_section_z_z3():
    L = subspace_section(C_ZZ3, ((F(2), F(1)),))
    assert L.rows == ((ZZ, (F(2), F(1))),)
    full = subspace_section(C_ZZ3, ((F(1), F(0)), (F(0), F(1))))
    assert full.rows == ((Z3, (F(0), F(1))), (ZZ, (F(1), F(0))))


def test_subspace_section_pure_z3_line():
    # inside Z + Z[1/3], the line through (0,1) meets the carrier in a
    # full Z[1/3]-line
    L = subspace_section(C_ZZ3, ((F(0), F(1)),))
    assert L.rows == ((Z3, (F(0), F(1))),)


def test_saturation_of_z_in_z3ring():
    A = S(C_Z3RING, (ZZ, (1,)))
    assert A.saturation().rows == ((Z3, (F(1),)),)


def test_add_and_intersect_trivially():
    a = S(C_Z2, (ZZ, (1, 0)))
    b = S(C_Z2, (ZZ, (0, 1)))
    assert a.add(b).row_matrix() == ((F(1), F(0)), (F(0), F(1)))
    assert a.intersect_trivially(b)
    c = S(C_Z2, (ZZ, (2, 0)))
    assert not a.intersect_trivially(c)


def test_canonical_form_is_generating_set_independent():
    rng = random.Random(41)
    carriers = [C_Z2, C_ZZ3, C_ZQ, C_Z3RING]
    for trial in range(60):
        carrier = rng.choice(carriers)
        n = carrier.rank
        gens = []
        for _ in range(rng.randint(1, 3)):
            ring = rng.choice([ZZ, ZZ, carrier.coords[rng.randrange(n)].ring])
            v = []
            for i in range(n):
                cr = carrier.coords[i].ring
                if not ring.leq(cr):
                    v.append(F(0))
                else:
                    x = F(rng.randint(-4, 4))
                    if cr == Z3 and rng.random() < 0.4:
                        x /= 3
                    v.append(x)
            gens.append((ring, tuple(v)))
        L1 = S(carrier, *gens)
        shuffled = list(gens)
        rng.shuffle(shuffled)
        if len(shuffled) >= 2 and shuffled[0][0] == shuffled[1][0]:
            r0, v0 = shuffled[0]
            _, v1 = shuffled[1]
            shuffled.append((r0, tuple(a + 2 * b for a, b in zip(v0, v1))))
        L2 = S(carrier, *shuffled)
        assert L1 == L2, (gens, L1.rows, L2.rows)
        # cross-check containment both ways by membership
        assert L1.contains_subgroup(L2) and L2.contains_subgroup(L1)


def test_membership_witness_consistency():
    rng = random.Random(43)
    from pogroup.linalg import row_combo

    for _ in range(40):
        L = S(C_ZZ3, (Z3, (0, rng.randint(1, 3))), (ZZ, (rng.randint(1, 3), rng.randint(-2, 2))))
        mat = L.row_matrix()
        coeffs = []
        for ring, _ in L.rows:
            c = F(rng.randint(-6, 6))
            if ring == Z3:
                c /= 3 ** rng.randint(0, 2)
            coeffs.append(c)
        x = row_combo(tuple(coeffs), mat)
        assert L.contains(x)
