from fractions import Fraction
from itertools import combinations

import pytest

from relweyl.lattice_core import FiniteAbelianGroup, det
from relweyl.root_datum import (CartanType, RootDatumError, bad_primes, build_simply_connected,
                                center_component_group, central_quotient, dynkin_components,
                                h_map, identify_cartan_type, is_cuspidal, is_self_opposed,
                                positive_roots)

# |Z(G)| for simply connected G: determinant of the Cartan matrix
CENTERS = {"A1": (2,), "A3": (4,), "A5": (6,), "B3": (2,), "C4": (2,), "D4": (2, 2),
           "D5": (4,), "D6": (2, 2), "E6": (3,), "E7": (2,), "E8": (), "F4": (), "G2": ()}


@pytest.mark.parametrize("label,factors", sorted(CENTERS.items()))
def test_center_of_simply_connected_group(label, factors):
    rd = build_simply_connected(label)
    cd = center_component_group(rd)
    assert cd.group.invariant_factors == factors
    assert cd.order == abs(det(rd.cartan))


@pytest.mark.parametrize("label,count", [("A3", 6), ("B3", 9), ("C3", 9), ("D4", 12),
                                         ("G2", 6), ("F4", 24), ("E6", 36)])
def test_positive_root_count(label, count):
    assert len(positive_roots(build_simply_connected(label))) == count


def test_cartan_conventions():
    b3 = build_simply_connected("B3")
    # A_ij = <alpha_i, alpha_j^vee>; alpha_3 short
    assert b3.cartan[1][2] == -2 and b3.cartan[2][1] == -1
    assert b3.root(1) == (2, -1, 0)
    assert b3.pairing(b3.root(2), b3.coroot(3)) == -2


def test_explicit_cartan_matrix_is_recognised():
    rd = build_simply_connected([[2, -1], [-1, 2]])
    assert str(rd.cartan_type) == "A2"
    # B3 with its nodes listed backwards
    rev = build_simply_connected([[2, -1, 0], [-2, 2, -1], [0, -1, 2]])
    assert str(rev.cartan_type) == "B3"
    assert identify_cartan_type([[2, 0], [0, 2]]).components == (("A", 1), ("A", 1))
    with pytest.raises(RootDatumError):
        build_simply_connected([[2, -2], [-2, 2]])  # affine A1


@pytest.mark.parametrize("bad", ["Q3", "A0", "E9", "D2", ""])
def test_rejects_bad_types(bad):
    with pytest.raises(RootDatumError):
        CartanType.parse(bad)


def test_levi_validation():
    rd = build_simply_connected("A3")
    assert rd.check_levi([3, 1, 1]) == (1, 3)
    with pytest.raises(RootDatumError):
        rd.check_levi([0])


def test_bad_primes_table():
    assert bad_primes("A", 5) == ()
    assert bad_primes("B", 3) == (2,)
    assert bad_primes("E", 8) == (2, 3, 5)
    assert bad_primes("G", 2) == (2, 3)


def test_type_a_levi_center():
    rd = build_simply_connected("A3")
    assert center_component_group(rd, (1, 3)).group == FiniteAbelianGroup([2])
    assert center_component_group(rd, ()).order == 1


def test_encode_rejects_non_central_cocharacter():
    rd = build_simply_connected("A3")
    cd = center_component_group(rd, (1, 3))
    with pytest.raises(RootDatumError):
        cd.encode((Fraction(1, 4), 0, 0))  # <alpha_1, y> = 1/2


def test_h_map_a3_is_reduction_mod_2():
    rd = build_simply_connected("A3")
    h = h_map(rd, (1, 3))
    assert h.domain.invariant_factors == (4,) and h.codomain.invariant_factors == (2,)
    assert h.is_surjective() and not h.is_injective()
    with pytest.raises(RootDatumError):
        h_map(rd, (1, 2), (1, 3))


@pytest.mark.parametrize("label", ["A3", "B3", "C3", "D4"])
def test_h_map_is_functorial(label):
    rd = build_simply_connected(label)
    nodes = rd.nodes()
    subsets = [c for k in range(len(nodes) + 1) for c in combinations(nodes, k)]
    for big in subsets:
        for mid in subsets:
            if not set(mid) <= set(big):
                continue
            for small in subsets:
                if set(small) <= set(mid):
                    assert h_map(rd, small, big) == h_map(rd, small, mid) @ h_map(rd, mid, big)


def test_cuspidal_in_type_a_matches_block_tiling():
    for n in range(2, 8):
        rd = build_simply_connected(f"A{n - 1}")
        tilings = {tuple(i for i in range(1, n) if i % d) for d in range(2, n + 1) if n % d == 0}
        found = {c for k in range(1, n) for c in combinations(rd.nodes(), k) if is_cuspidal(rd, c)}
        assert found == tilings


def test_self_opposed():
    a3 = build_simply_connected("A3")
    assert is_self_opposed(a3, (1, 3))
    assert not is_self_opposed(a3, (1,))


def test_dynkin_components():
    rd = build_simply_connected("D5")
    assert dynkin_components(rd, (1, 3, 4, 5)) == [(1,), (3, 4, 5)]


def test_central_quotient_sl2_to_pgl2():
    rd = build_simply_connected("A1")
    quot, _ = central_quotient(rd, [(Fraction(1, 2),)])
    assert center_component_group(quot).order == 1
    with pytest.raises(RootDatumError):
        central_quotient(rd, [(Fraction(1, 3),)])
