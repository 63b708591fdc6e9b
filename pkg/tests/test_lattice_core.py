from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relweyl.lattice_core import (AbelianHom, FiniteAbelianGroup, LatticeError, cokernel,
                                  complete_basis, det, inverse_unimodular, kernel_basis,
                                  matmul, rational_inverse, saturate, smith_normal_form,
                                  strip_prime, torsion_order)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_smith_form_is_a_factorisation(m):
    s = smith_normal_form(m)
    assert matmul(matmul(s.U, m), s.V) == s.D
    assert abs(det(s.U)) == 1 and abs(det(s.V)) == 1
    facs = s.invariant_factors
    assert all(b % a == 0 for a, b in zip(facs, facs[1:]))
    assert all(s.D[i][j] == 0 for i in range(len(m)) for j in range(len(m[0])) if i != j)


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_invariant_factors_match_sympy(m):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    d = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    theirs = [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]
    assert sorted(smith_normal_form(m).invariant_factors) == sorted(theirs)


@given(matrices(3, 3), st.permutations(range(3)))
@settings(max_examples=60, deadline=None)
def test_cokernel_ignores_row_order(m, perm):
    rows = [m[i] for i in perm if i < len(m)]
    assert cokernel(rows, len(m[0])) == cokernel(m, len(m[0]))


@given(matrices(3, 3), st.integers(0, 2), st.integers(0, 2), small)
@settings(max_examples=60, deadline=None)
def test_cokernel_ignores_row_operations(m, i, j, c):
    i, j = i % len(m), j % len(m)
    if i == j:
        return
    m2 = [list(r) for r in m]
    m2[i] = [a + c * b for a, b in zip(m2[i], m2[j])]
    assert cokernel(m2, len(m[0])) == cokernel(m, len(m[0]))


def test_cokernel_of_small_relation_sets():
    assert cokernel([[1, 2]], 2) == (1, FiniteAbelianGroup())
    assert cokernel([[3, 2, -1], [1, 0, -1]], 3) == (1, FiniteAbelianGroup([2]))
    rows = [[3, -1, 0, 0, 0], [4, -1, 2, -1, -1], [-1, 0, -1, 0, 2], [1, 0, -1, 2, 0]]
    assert cokernel(rows, 5) == (1, FiniteAbelianGroup([4]))
    assert cokernel([], 3) == (3, FiniteAbelianGroup())
    with pytest.raises(LatticeError):
        cokernel([])


@pytest.mark.parametrize("rows,p,expected", [([[2]], 2, 1), ([[2]], 3, 2), ([[6]], 3, 2),
                                             ([[4, 0], [0, 6]], None, 24)])
def test_torsion_order_strips_prime(rows, p, expected):
    assert torsion_order(rows, p) == expected


def test_torsion_order_rejects_composite():
    with pytest.raises(LatticeError):
        torsion_order([[2]], 4)


def test_strip_prime():
    assert strip_prime(12, 2) == 3 and strip_prime(12, None) == 12 and strip_prime(7, 3) == 7


def test_group_normalises_factors():
    assert FiniteAbelianGroup([2, 3]).invariant_factors == (6,)
    assert FiniteAbelianGroup([1, 4]).invariant_factors == (4,)
    assert FiniteAbelianGroup([2, 2]).order == 4
    with pytest.raises(LatticeError):
        FiniteAbelianGroup([0])


@given(st.lists(st.integers(2, 6), max_size=3))
def test_group_element_count(orders):
    g = FiniteAbelianGroup(orders)
    elems = g.elements()
    assert len(elems) == g.order == len(set(e.coords for e in elems))


def test_homomorphism_kernel_and_iso():
    z4 = FiniteAbelianGroup([4])
    triple = AbelianHom(z4, z4, [[3]])
    assert triple.is_isomorphism()
    double = AbelianHom(z4, z4, [[2]])
    kgroup, _ = double.kernel()
    assert kgroup.order == 2 and not double.is_surjective()
    z2 = FiniteAbelianGroup([2])
    with pytest.raises(LatticeError):
        AbelianHom(z2, z4, [[1]])  # 2 * 1 != 0 in Z/4


def test_lattice_utilities():
    assert saturate([[2, 4]]) == ((1, 2),)
    k = kernel_basis([[1, 1]], 2)
    assert len(k) == 1 and k[0][0] + k[0][1] == 0
    extra = complete_basis([[1, 2]], 2)
    assert abs(det([[1, 2]] + [list(r) for r in extra])) == 1
    with pytest.raises(LatticeError):
        complete_basis([[2, 0]], 2)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_rational_inverse(m):
    if det(m) == 0:
        return
    inv = rational_inverse(m)
    prodm = matmul(m, inv)
    assert prodm == tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))


def test_unimodular_inverse():
    m = ((2, 1), (1, 1))
    assert matmul(m, inverse_unimodular(m)) == ((1, 0), (0, 1))
    with pytest.raises(LatticeError):
        inverse_unimodular(((2, 0), (0, 1)))
