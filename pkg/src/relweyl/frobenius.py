"""Rational structures: H^1 labels of regular unipotent classes and restriction maps.

F acts on Y as q times a diagram permutation ``sigma``. On a finite
𝒵(L) this becomes e -> q * sigma(e). W_G(L) acts trivially on 𝒵(L), so the
twisted forms L_w carry the same F-action on their component groups.

A twisted Levi M is recorded as (I_M, w): I_M a standard Levi, and w an
element of W_G(L_J) stabilising Delta_{I_M}, where L_J is the minimal Levi of
M with 𝒵(M) = 𝒵(L_J). The label of M is the class of phi_{L_J}(w).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .lattice_core import (
    AbelianElement,
    AbelianHom,
    FiniteAbelianGroup,
    det,
    inverse_unimodular,
    smith_normal_form,
)
from .phi import LinearCharacter, PhiError, PhiMorphism, phi_compute
from .root_datum import RootDatum, center_component_group, h_map
from .weyl import WeylElement, WeylError, _closure, from_word, relative_weyl_group

__all__ = [
    "FrobeniusError",
    "Q_CAVEAT",
    "FrobeniusAction",
    "H1Group",
    "h1",
    "h1_map",
    "ClassLabel",
    "TwistDatum",
    "minimal_levi",
    "restriction_label",
    "res_label_map",
    "twisted_centralizer_order",
    "char_coefficient",
    "twists_of",
    "ambient_twists",
    "restrict_via",
]

Q_CAVEAT = ("valid for q large enough; the largeness bound is not checked, "
            "the label itself is computed unconditionally")


class FrobeniusError(ValueError):
    """Invalid Frobenius data, twist, or label."""


def _prime_power(q: int) -> int:
    if q < 2:
        raise FrobeniusError(f"q = {q} is not a prime power")
    p = next(k for k in range(2, q + 1) if q % k == 0)
    n = q
    while n % p == 0:
        n //= p
    if n != 1:
        raise FrobeniusError(f"q = {q} is not a prime power")
    return p


# -------------------------------------------------------------- actions

@dataclass(frozen=True)
class FrobeniusAction:
    """F = q * sigma on Y(T); ``sigma`` maps node -> node (identity when split)."""

    rd: RootDatum
    q: int
    sigma: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        _prime_power(self.q)
        perm = self.permutation
        if sorted(perm.values()) != list(self.rd.nodes()):
            raise FrobeniusError("sigma must permute the Dynkin nodes")
        a = self.rd.cartan
        if any(a[i - 1][j - 1] != a[perm[i] - 1][perm[j] - 1] for i in perm for j in perm):
            raise FrobeniusError("sigma is not a diagram automorphism")
        if not self.is_split and not self.rd.simply_connected:
            raise FrobeniusError("diagram twists are only supported on simply connected data")

    @property
    def p(self) -> int:
        return _prime_power(self.q)

    @property
    def permutation(self) -> dict[int, int]:
        perm = {i: i for i in self.rd.nodes()}
        perm.update(dict(self.sigma))
        return perm

    @property
    def is_split(self) -> bool:
        return all(k == v for k, v in self.permutation.items())

    def on_center(self, levi: Sequence[int] | None = None) -> AbelianHom:
        """F on 𝒵(L); L must be sigma-stable."""
        cd = center_component_group(self.rd, levi)
        perm = self.permutation
        if {perm[i] for i in cd.levi} != set(cd.levi):
            raise FrobeniusError(f"Levi {cd.levi} is not F-stable")
        images = []
        for y in cd.generator_cocharacters():
            moved = list(y)
            if not self.is_split:
                moved = [Fraction(0)] * len(y)
                for i, v in enumerate(y, start=1):
                    moved[perm[i] - 1] = v
            images.append(cd.encode([self.q * v for v in moved]).coords)
        return AbelianHom(cd.group, cd.group, images)


# ------------------------------------------------------------------- H^1

@dataclass(frozen=True, eq=False)
class H1Group:
    """A / (F - 1)A with its projection and a section on generators."""

    base: FiniteAbelianGroup
    action: AbelianHom
    quotient: FiniteAbelianGroup
    projection: AbelianHom
    _lifts: tuple[tuple[int, ...], ...] = field(repr=False)

    def project(self, a: AbelianElement) -> AbelianElement:
        return self.projection(a)

    def lift(self, x: AbelianElement) -> AbelianElement:
        if x.group != self.quotient:
            raise FrobeniusError("element is not in this H^1 group")
        out = self.base.zero()
        for c, g in zip(x.coords, self._lifts):
            out = out + c * self.base.element(g)
        return out


def _quotient(base: FiniteAbelianGroup, sub: Iterable[AbelianElement]):
    m = base.ngens
    if m == 0:
        return FiniteAbelianGroup(()), AbelianHom.zero(base, FiniteAbelianGroup(())), ()
    rel = [[d if i == j else 0 for j in range(m)] for i, d in enumerate(base.invariant_factors)]
    rel += [list(s.coords) for s in sub]
    snf = smith_normal_form(rel)
    diag = snf.diagonal
    slots = [k for k, d in enumerate(diag) if d > 1]
    quot = FiniteAbelianGroup([diag[k] for k in slots])
    if quot.invariant_factors != tuple(diag[k] for k in slots):
        raise FrobeniusError("Smith diagonal is not in canonical order")
    images = [[snf.V[i][k] for k in slots] for i in range(m)]
    proj = AbelianHom(base, quot, images)
    vinv = inverse_unimodular(snf.V)
    lifts = tuple(tuple(vinv[k]) for k in slots)
    return quot, proj, lifts


def h1(group: FiniteAbelianGroup, action: AbelianHom) -> H1Group:
    """Coinvariants A / (F - 1)A.

    >>> from relweyl.lattice_core import FiniteAbelianGroup, AbelianHom
    >>> a = FiniteAbelianGroup([4])
    >>> h1(a, AbelianHom(a, a, [[3]])).quotient
    FiniteAbelianGroup(2)
    """
    if action.domain != group or action.codomain != group:
        raise FrobeniusError("F must be an endomorphism of A")
    if not action.is_isomorphism():
        raise FrobeniusError("F must be an automorphism of A")
    sub = [action(g) - g for g in group.gens()]
    quot, proj, lifts = _quotient(group, sub)
    return H1Group(group, action, quot, proj, lifts)


def h1_map(f: AbelianHom, src: H1Group, dst: H1Group) -> AbelianHom:
    """H^1(f) for an F-equivariant f : A -> B."""
    if f.domain != src.base or f.codomain != dst.base:
        raise FrobeniusError("hom does not connect the two H^1 groups")
    for g in src.base.gens():
        if f(src.action(g)) != dst.action(f(g)):
            raise FrobeniusError("hom is not F-equivariant")
    images = [dst.project(f(src.lift(x))).coords for x in src.quotient.gens()]
    return AbelianHom(src.quotient, dst.quotient, images)


@dataclass(frozen=True)
class ClassLabel:
    h1: H1Group
    element: AbelianElement
    group: str = ""
    levi: tuple[int, ...] = ()
    twist_word: tuple[int, ...] = ()

    def __add__(self, other: AbelianElement) -> "ClassLabel":
        return ClassLabel(self.h1, self.element + other, self.group, self.levi, self.twist_word)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "levi": list(self.levi),
            "twist_word": list(self.twist_word),
            "h1_group": list(self.h1.quotient.invariant_factors),
            "label_coords": list(self.element.coords),
            "q_caveat": Q_CAVEAT,
        }


# ---------------------------------------------------------- minimal Levi

def minimal_levi(rd: RootDatum, levi: Sequence[int]) -> tuple[tuple[int, ...], AbelianHom]:
    """Minimal J ⊆ I_M with h : 𝒵(M) -> 𝒵(L_J) an isomorphism, and that h."""
    return _minimal_levi(rd, rd.check_levi(levi))


@lru_cache(maxsize=None)
def _minimal_levi(rd: RootDatum, levi: tuple[int, ...]):
    good = []
    for size in range(len(levi) + 1):
        for j in combinations(levi, size):
            if any(set(g) <= set(j) for g in good):
                continue
            if h_map(rd, j, levi).is_isomorphism():
                good.append(j)
    if len(good) != 1:
        raise FrobeniusError(f"minimal Levi of {levi} is not unique: {good}")
    return good[0], h_map(rd, good[0], levi)


def _inverse_iso(h: AbelianHom) -> AbelianHom:
    table = {h(x).coords: x for x in h.domain.elements()}
    images = [table[g.coords].coords for g in h.codomain.gens()]
    return AbelianHom(h.codomain, h.domain, images)


# ---------------------------------------------------------------- twists

@dataclass(frozen=True, eq=False)
class TwistDatum:
    """M on ``levi`` twisted by ``w`` in W_G(L_J), J the minimal Levi of M."""

    rd: RootDatum
    levi: tuple[int, ...]
    w: WeylElement

    @classmethod
    def from_word(cls, rd: RootDatum, levi: Sequence[int], word: Sequence[int]) -> "TwistDatum":
        """``word`` lists white nodes of W_G(L_J); empty means split."""
        levi = rd.check_levi(levi)
        j, _ = minimal_levi(rd, levi)
        try:
            w = relative_weyl_group(rd, j).from_word(word)
        except WeylError as exc:
            raise FrobeniusError(str(exc)) from exc
        return cls(rd, levi, w)

    @classmethod
    def split(cls, rd: RootDatum, levi: Sequence[int]) -> "TwistDatum":
        return cls(rd, rd.check_levi(levi), from_word(rd, ()))

    def __post_init__(self):
        if not _stabilises(self.rd, self.levi, self.w):
            raise FrobeniusError("twist does not stabilise Delta_M")

    @property
    def minimal(self) -> tuple[int, ...]:
        return minimal_levi(self.rd, self.levi)[0]

    def word(self) -> tuple[int, ...]:
        rwg = relative_weyl_group(self.rd, self.minimal)
        try:
            return rwg.word_of(self.w)
        except WeylError as exc:
            raise FrobeniusError("twist is not in W_G(L_J)") from exc


@lru_cache(maxsize=65536)
def _stabilises(rd: RootDatum, levi: tuple[int, ...], w: WeylElement) -> bool:
    roots = {rd.root(i) for i in levi}
    return {w.act(r) for r in roots} == roots


def twists_of(rd: RootDatum, levi: Sequence[int]) -> list[TwistDatum]:
    """Every element of W_G(L_J) that stabilises Delta_M, as a twist of M."""
    levi = rd.check_levi(levi)
    j, _ = minimal_levi(rd, levi)
    return [TwistDatum(rd, levi, w) for w in relative_weyl_group(rd, j).elements
            if _stabilises(rd, levi, w)]


# --------------------------------------------------------------- labels

@lru_cache(maxsize=256)
def _phi_cached(rd: RootDatum, levi: tuple[int, ...], p: int) -> PhiMorphism:
    return phi_compute(rd, levi, p)


@lru_cache(maxsize=1024)
def _h1_of(frob: FrobeniusAction, levi: tuple[int, ...]) -> H1Group:
    cd = center_component_group(frob.rd, levi)
    return h1(cd.group, frob.on_center(levi))


def restriction_label(twist: TwistDatum, frob: FrobeniusAction, p: int | None = None,
                      ambient: Sequence[int] | None = None) -> ClassLabel:
    """z_M: class in H^1(F, 𝒵(M)) of phi_{L_J}(w_M), read inside ``ambient``.

    ``ambient`` (default: all of G) must contain M; phi on W_ambient(L_J) is
    the restriction of phi^G to the generators lying in ambient.
    """
    rd = twist.rd
    if frob.rd != rd:
        raise FrobeniusError("Frobenius and twist live on different data")
    amb = rd.nodes() if ambient is None else rd.check_levi(ambient)
    if not set(twist.levi) <= set(amb):
        raise FrobeniusError("M is not contained in the ambient Levi")
    j, iso = minimal_levi(rd, twist.levi)
    if p is not None and p != frob.p:
        raise FrobeniusError(f"q = {frob.q} is not a power of p = {p}")
    hm = _h1_of(frob, twist.levi)
    if not iso.domain.ngens:  # 𝒵(M) trivial: nothing to compute
        return ClassLabel(hm, hm.quotient.zero(), str(rd.cartan_type or rd.label), twist.levi, ())
    try:
        ph = _phi_cached(rd, j, frob.p)
    except PhiError as exc:
        raise FrobeniusError(str(exc)) from exc
    word = twist.word()
    if any(a not in amb for a in word):
        raise FrobeniusError("twist does not lie in the ambient relative Weyl group")
    val = _inverse_iso(iso)(ph.on_word(word))
    return ClassLabel(hm, hm.project(val), str(rd.cartan_type or rd.label),
                      twist.levi, word)


def res_label_map(twist: TwistDatum, frob: FrobeniusAction, z: AbelianElement,
                  p: int | None = None, ambient: Sequence[int] | None = None) -> ClassLabel:
    """res_M^ambient(U_z) = (res U)_{h(z)} with z in H^1(F, 𝒵(ambient))."""
    rd = twist.rd
    amb = rd.nodes() if ambient is None else rd.check_levi(ambient)
    base = restriction_label(twist, frob, p, amb)
    src = _h1_of(frob, amb)
    if z.group != src.quotient:
        raise FrobeniusError("z is not in H^1(F, 𝒵(ambient))")
    hz = h1_map(h_map(rd, twist.levi, amb), src, base.h1)(z)
    return base + hz


# ------------------------------------------------------- point counts

def twisted_centralizer_order(rd: RootDatum, levi: Sequence[int], w: WeylElement,
                              q: int, frob: FrobeniusAction | None = None) -> int:
    """|Z(L)°^{wF}| q^{r'} = |det(q w sigma - 1) on Y(Z(L)°)| q^{r'}.

    >>> from relweyl.root_datum import build_simply_connected
    >>> from relweyl.weyl import from_word
    >>> twisted_centralizer_order(build_simply_connected("C2"), (2,), from_word(build_simply_connected("C2"), ()), 5)
    20
    """
    levi = rd.check_levi(levi)
    _prime_power(q)
    rwg = relative_weyl_group(rd, levi)
    if not rwg.stabilizes_levi(w):
        raise FrobeniusError("w does not normalise L")
    elt = w
    if frob is not None and not frob.is_split:
        perm = frob.permutation
        n = rd.x_rank
        sig = [[0] * n for _ in range(n)]
        for i in range(1, n + 1):
            sig[perm[i] - 1][i - 1] = 1
        # sigma on X: transpose-inverse of its action on coroot coordinates
        sx = tuple(tuple(r) for r in inverse_unimodular(tuple(zip(*sig))))
        elt = WeylElement(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*sx))
                                for row in w.matrix), ())
    mat = rwg.reflection_action(elt)
    k = len(mat)
    if k == 0:
        return q ** len(levi)
    m = [[q * mat[i][j] - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    return abs(det(m)) * q ** len(levi)


# ----------------------------------------------------- character values

def char_coefficient(phi: PhiMorphism, w: WeylElement, a: AbelianElement,
                     zeta: LinearCharacter, hgroup: H1Group) -> Fraction:
    """gamma(w) + zeta(a_hat) in Q/Z, with the scalar X(v) normalised to 1."""
    if hgroup.base != zeta.source or phi.center.group != zeta.source:
        raise FrobeniusError("zeta, phi and H^1 must share 𝒵(L)")
    for g in zeta.source.gens():
        if zeta(hgroup.action(g)) != zeta(g):
            raise FrobeniusError("zeta is not F-stable")
    return (zeta(phi(w)) + zeta(hgroup.lift(a))) % 1


# ---------------------------------------------------------- transitivity

def ambient_twists(rd: RootDatum, levi: Sequence[int], ambient: Sequence[int]) -> list[WeylElement]:
    """W_ambient(L_J) stabilising Delta_M, J the minimal Levi of M."""
    return list(_ambient_twists(rd, rd.check_levi(levi), rd.check_levi(ambient)))


@lru_cache(maxsize=1024)
def _ambient_twists(rd: RootDatum, levi: tuple[int, ...], amb: tuple[int, ...]):
    j, _ = minimal_levi(rd, levi)
    rwg = relative_weyl_group(rd, j)
    group = _subgroup(rd, j, tuple(sorted(a for a in rwg.generators if a in amb)))
    return tuple(w for w in group if _stabilises(rd, levi, w))


@lru_cache(maxsize=256)
def _subgroup(rd: RootDatum, j: tuple[int, ...], nodes: tuple[int, ...]):
    gens = [relative_weyl_group(rd, j).generators[a] for a in nodes]
    return tuple(_closure(from_word(rd, ()), gens, 10 ** 6))


def restrict_via(rd: RootDatum, levi: Sequence[int], via: Sequence[int], w_inner: WeylElement,
                 w_outer: WeylElement, frob: FrobeniusAction,
                 p: int | None = None) -> tuple[ClassLabel, ClassLabel]:
    """(res_M^G, res_M^{M'} o res_{M'}^G) evaluated at the trivial class.

    M' on ``via`` is twisted by ``w_outer``; inside M', M is twisted by
    ``w_inner``, so its twist in G is w_inner * w_outer.
    """
    levi, via = rd.check_levi(levi), rd.check_levi(via)
    if not set(levi) <= set(via):
        raise FrobeniusError("M must lie in M'")
    j, _ = minimal_levi(rd, levi)
    jp, _ = minimal_levi(rd, via)
    if not set(j) <= set(jp):
        raise FrobeniusError(f"minimal Levi {j} of M is not inside the minimal Levi {jp} of M'")
    if not relative_weyl_group(rd, j).stabilizes_levi(w_outer):
        raise FrobeniusError("outer twist does not normalise L_J")
    outer = restriction_label(TwistDatum(rd, via, w_outer), frob, p)
    inner = restriction_label(TwistDatum(rd, levi, w_inner), frob, p, ambient=via)
    direct = restriction_label(TwistDatum(rd, levi, w_inner * w_outer), frob, p)
    hmap = h1_map(h_map(rd, levi, via), outer.h1, inner.h1)
    return direct, inner + hmap(outer.element)
