"""Characters chi_i, the monomial system of the companion variety, component counts.

Everything is expressed on a simply connected datum: X-coordinates are on the
fundamental weights and Y-coordinates on the simple coroots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lattice_core import (
    AbelianElement,
    IntMatrix,
    as_matrix,
    cokernel,
    complete_basis,
    det,
    kernel_basis,
    strip_prime,
)
from .root_datum import (
    RootDatum,
    RootDatumError,
    bad_primes,
    center_component_group,
    dynkin_components,
    is_cuspidal,
)
from .weyl import minus_w0_permutation, relative_weyl_group

__all__ = [
    "CompanionError",
    "ChiSystem",
    "TorusSplitting",
    "ExponentSystem",
    "chi_characters",
    "levi_indexing",
    "torus_splitting",
    "companion_equations",
    "component_count",
    "free_rank",
    "phi_base_sign",
    "check_good_prime",
]


class CompanionError(ValueError):
    """Precondition failure (bad prime, unsupported Levi, torsion collision)."""


@dataclass(frozen=True)
class ChiSystem:
    """chi[i] is chi_{i+1} in fundamental-weight coordinates."""

    chi: IntMatrix

    def determinant(self) -> int:
        return det(self.chi)


@dataclass(frozen=True)
class TorusSplitting:
    z_basis: IntMatrix  # Y(Z(L)°)
    s_basis: IntMatrix  # complement S with T = Z(L)° x S


@dataclass(frozen=True)
class ExponentSystem:
    matrix: IntMatrix
    indices: tuple[int, ...]  # i_1 < ... < i_r'
    splitting: TorusSplitting
    levi: tuple[int, ...]

    @property
    def ambient(self) -> int:
        return len(self.splitting.z_basis) + len(self.splitting.s_basis)


def _require_sc(rd: RootDatum) -> None:
    if not rd.simply_connected:
        raise CompanionError("the chi characters need a simply connected datum")


def chi_characters(rd: RootDatum) -> ChiSystem:
    """chi_i = w_i - sum_{j>i} <-w0(alpha_i), alpha_j^vee> w_j.

    >>> from relweyl.root_datum import build_simply_connected
    >>> chi_characters(build_simply_connected("C2")).chi
    ((1, 1), (0, 1))
    """
    _require_sc(rd)
    sigma = minus_w0_permutation(rd)
    a = rd.cartan
    r = rd.rank
    rows = []
    for i in range(1, r + 1):
        row = [0] * r
        row[i - 1] = 1
        for j in range(i + 1, r + 1):
            row[j - 1] = -a[sigma[i] - 1][j - 1]
        rows.append(row)
    return ChiSystem(as_matrix(rows))


def levi_indexing(rd: RootDatum, levi: Sequence[int]) -> tuple[int, ...]:
    """Increasing i_1 < ... < i_r' with Delta_L = {-w0(alpha_{i_k})}."""
    sigma = minus_w0_permutation(rd)
    inv = {v: k for k, v in sigma.items()}
    return tuple(sorted(inv[j] for j in levi))


def torus_splitting(rd: RootDatum, levi: Sequence[int],
                    complement: Sequence[Sequence[int]] | None = None) -> TorusSplitting:
    """Saturated Y(Z(L)°) and a unimodular complement.

    A caller may pass its own ``complement``; it is checked for unimodularity.
    """
    levi = rd.check_levi(levi)
    n = rd.x_rank
    m = [rd.root(i) for i in levi]
    z = kernel_basis(m, n) if m else tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    s = complete_basis(z, n) if complement is None else as_matrix(complement)
    if abs(det(list(z) + list(s))) != 1:
        raise CompanionError("z_basis and s_basis do not form a basis of Y")
    return TorusSplitting(as_matrix(z), as_matrix(s))


def companion_equations(rd: RootDatum, levi: Sequence[int],
                        splitting: TorusSplitting | None = None) -> ExponentSystem:
    """Exponent rows of chi_{i_k}(z) alpha_{i_k}(^{w0} t)^{-1} = 1.

    With alpha(^{w0}t)^{-1} = (-w0 alpha)(t), row k pairs chi_{i_k} with the
    z_basis and alpha_{sigma(i_k)} with the s_basis.
    """
    _require_sc(rd)
    levi = rd.check_levi(levi)
    sp = splitting or torus_splitting(rd, levi)
    chi = chi_characters(rd).chi
    sigma = minus_w0_permutation(rd)
    idx = levi_indexing(rd, levi)
    rows = []
    for i in idx:
        c = chi[i - 1]
        a = rd.root(sigma[i])
        rows.append([rd.pairing(c, y) for y in sp.z_basis] + [rd.pairing(a, s) for s in sp.s_basis])
    return ExponentSystem(as_matrix(rows), idx, sp, levi)


def check_good_prime(rd: RootDatum, p: int) -> None:
    if rd.cartan_type is None:
        return
    for fam, n in rd.cartan_type.components:
        if p in bad_primes(fam, n):
            raise CompanionError(f"p = {p} is bad for type {fam}{n}")


def _cokernel_data(sys: ExponentSystem) -> tuple[int, int]:
    free, tors = cokernel(sys.matrix, sys.ambient) if sys.matrix else (sys.ambient, None)
    return free, (tors.order if tors is not None else 1)


def component_count(sys: ExponentSystem, p: int | None = None) -> int:
    """Number of irreducible components: torsion order of the cokernel.

    >>> from relweyl.root_datum import build_simply_connected
    >>> component_count(companion_equations(build_simply_connected("B3"), (1, 3)), 3)
    2
    """
    _, order = _cokernel_data(sys)
    if p is not None and strip_prime(order, p) != order:
        raise CompanionError(f"characteristic collision: p = {p} divides {order}")
    return order


def free_rank(sys: ExponentSystem) -> int:
    return _cokernel_data(sys)[0]


def phi_base_sign(rd: RootDatum, levi: Sequence[int], p: int) -> AbelianElement:
    """(-1)^(n-1) as an element of 𝒵(L), with n = |𝒵(L)| / components.

    Only for the configurations where |W_G(L)| = 2, dim Z(L)° = 1 and L is
    cuspidal. When n = 2 and 𝒵(L) has several involutions, the answer must be
    fixed by every diagram symmetry preserving L; a unique fixed involution is
    required, otherwise the call fails.
    """
    _require_sc(rd)
    levi = rd.check_levi(levi)
    if p == 2:
        raise CompanionError("p must be odd")
    check_good_prime(rd, p)
    if len(dynkin_components(rd, rd.nodes())) != 1:
        raise CompanionError("G must be quasi-simple")
    if rd.rank - len(levi) != 1:
        raise CompanionError("dim Z(L)° must be 1")
    if not is_cuspidal(rd, levi):
        raise CompanionError("L is not cuspidal")
    if relative_weyl_group(rd, levi).order != 2:
        raise CompanionError("|W_G(L)| must be 2")
    sys = companion_equations(rd, levi)
    i = component_count(sys, p)
    cd = center_component_group(rd, levi)
    if cd.order % i:
        raise CompanionError(f"component count {i} does not divide |Z(L)| = {cd.order}")
    n = cd.order // i
    if n == 1:
        return cd.group.zero()
    if n != 2:
        raise CompanionError(f"n = {n}: the sign rule only covers n in (1, 2)")
    inv = cd.group.elements_of_order(2)
    if len(inv) == 1:
        return inv[0]
    fixed = [e for e in inv if all(_diagram_image(rd, cd, e, g) == e
                                   for g in _levi_symmetries(rd, levi))]
    if len(fixed) != 1:
        raise CompanionError("order-2 element of Z(L) is not unique")
    return fixed[0]


def _levi_symmetries(rd: RootDatum, levi: tuple[int, ...]) -> list[dict[int, int]]:
    """Dynkin diagram automorphisms of G that preserve the node set ``levi``."""
    from itertools import permutations

    a = rd.cartan
    n = rd.rank
    out = []
    for perm in permutations(range(1, n + 1)):
        g = dict(zip(range(1, n + 1), perm))
        if all(a[i - 1][j - 1] == a[g[i] - 1][g[j] - 1] for i in g for j in g) \
                and {g[i] for i in levi} == set(levi):
            out.append(g)
    return out


def _diagram_image(rd, cd, e: AbelianElement, g: dict[int, int]) -> AbelianElement:
    y = cd.cocharacter_of(e)
    moved = [0] * len(y)
    for i, v in enumerate(y, start=1):
        moved[g[i] - 1] = v
    return cd.encode(moved)
