from fractions import Fraction
from itertools import combinations

import pytest

from relweyl.lattice_core import FiniteAbelianGroup
from relweyl.phi import (LinearCharacter, PhiError, compatibility_holds, gamma_character,
                         phi_compute, phi_type_A, rho_bar, table_generate, tau_cocharacter,
                         type_a_levi)
from relweyl.root_datum import (build_simply_connected, center_component_group,
                                central_quotient, is_cuspidal)


def cuspidal_levis(rd):
    return [c for k in range(1, rd.rank + 1) for c in combinations(rd.nodes(), k)
            if is_cuspidal(rd, c)]


@pytest.mark.parametrize("label", ["A3", "A5", "B4", "B5", "C4", "D4", "D5", "D6", "E6", "E7"])
def test_phi_respects_coxeter_relations(label):
    rd = build_simply_connected(label)
    for levi in cuspidal_levis(rd):
        p = 3 if label[0] in "BCD" else 7
        assert phi_compute(rd, levi, p).respects_relations()


@pytest.mark.parametrize("d,k", [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (5, 1)])
def test_type_a_closed_form_agrees(d, k):
    rd = build_simply_connected(f"A{d * k - 1}")
    direct = phi_compute(rd, type_a_levi(d, k), 7)
    closed = phi_type_A(k, d)
    assert direct.values == closed.values


def test_tau_is_central_in_the_levi():
    for d, k in [(2, 2), (3, 2), (4, 2)]:
        rd = build_simply_connected(f"A{d * k - 1}")
        cd = center_component_group(rd, type_a_levi(d, k))
        gen = cd.encode(tau_cocharacter(d, k, 1))
        assert gen.order == d


def test_odd_center_forces_trivial_phi():
    for label in ["A2", "A5", "A8", "E6"]:
        rd = build_simply_connected(label)
        for levi in cuspidal_levis(rd):
            ph = phi_compute(rd, levi, 5 if label != "A5" else 7)
            if ph.center.order % 2:
                assert ph.is_trivial(), (label, levi)


def test_torus_gives_trivial_gamma():
    for label in ["A3", "B3", "G2", "F4"]:
        rd = build_simply_connected(label)
        ph = phi_compute(rd, (), 5)
        gam = gamma_character(ph, LinearCharacter.trivial(ph.center.group))
        assert gam.is_trivial()


def test_c2_gamma_sign():
    ph = phi_compute(build_simply_connected("C2"), (2,), 3)
    gam = gamma_character(ph, LinearCharacter.standard(ph.center.group))
    assert gam.sign(1) == -1
    triv = gamma_character(ph, LinearCharacter.trivial(ph.center.group))
    assert triv.sign(1) == 1


def test_linear_character_validation():
    z4 = FiniteAbelianGroup([4])
    chi = LinearCharacter(z4, (Fraction(1, 4),))
    assert chi(z4.element([3])) == Fraction(3, 4)
    with pytest.raises(PhiError):
        LinearCharacter(z4, (Fraction(1, 3),))


def test_rejects_non_cuspidal_and_bad_prime():
    rd = build_simply_connected("B3")
    with pytest.raises(PhiError):
        phi_compute(rd, (1,), 3)
    with pytest.raises(PhiError):
        phi_compute(rd, (1, 3), 2)
    with pytest.raises(PhiError):
        phi_compute(rd, (1, 3), 9)


def test_table_rows_serialise():
    rows = table_generate("C2", 3)
    assert [r.to_json() for r in rows] == [{
        "group": "C2", "levi_indices": [2], "relative_type": "A1",
        "center_invariant_factors": [2],
        "generator_values": [{"node": 1, "value_order": 2, "value_coords": [1]}],
    }]
    assert table_generate("G2", 5) == []
    assert table_generate("F4", 5) == []


def test_type_a_rows_skip_p_dividing_d():
    levis = [r.levi for r in table_generate("A5", 3)]
    assert type_a_levi(3, 2) not in levis and type_a_levi(2, 3) in levis


def test_quotient_datum_pushes_values_forward():
    rd = build_simply_connected("A3")
    quot, _ = central_quotient(rd, [(Fraction(1, 2), Fraction(1), Fraction(1, 2))])
    ph = phi_compute(quot, (1, 3), 3)
    assert ph.respects_relations()
    assert ph.center.order in (1, 2)


NESTED = [
    ("A5", (), (1, 3, 5)), ("A5", (), (1, 2, 4, 5)), ("A5", (1, 3, 5), (1, 2, 3, 4, 5)),
    ("A5", (1, 2, 4, 5), (1, 2, 3, 4, 5)),
    ("A7", (1, 3, 5, 7), (1, 2, 3, 5, 6, 7)),
    ("D5", (4, 5), (1, 3, 4, 5)),
    ("B5", (), (1, 3, 5)), ("C4", (), (4,)),
    ("D6", (5, 6), (1, 3, 5, 6)), ("D6", (1, 3, 5), (1, 3, 5, 6)), ("D6", (1, 3, 6), (1, 3, 5, 6)),
]


@pytest.mark.parametrize("label,small,big", NESTED)
def test_compatibility_square(label, small, big):
    rd = build_simply_connected(label)
    assert compatibility_holds(rd, small, big, 7 if label[0] == "A" else 3)


def test_rho_bar_closed_form_matches_coset_search():
    rd = build_simply_connected("A5")
    assert rho_bar(rd, (1, 3, 5), (1, 3, 5)) == rho_bar(rd, (1, 3, 5), (1, 3, 5), search=True)
    d5 = build_simply_connected("D5")
    assert rho_bar(d5, (4, 5), (1, 3, 4, 5)) == rho_bar(d5, (4, 5), (1, 3, 4, 5), search=True)
    with pytest.raises(PhiError):
        rho_bar(rd, (1, 3, 5), (1, 3))
