"""The morphism phi: W_G(L) -> 𝒵(L) for cuspidal Levis, gamma characters, tables.

phi is computed one generator s_{L,alpha} at a time. The Levi on I + {alpha}
splits into quasi-simple factors; only the factor through alpha matters. That
factor, together with the part of L inside it, is matched up to Dynkin
isomorphism against five base configurations:

* A_{2d-1} with L = A_{d-1} x A_{d-1}   -> tau((-1)^(d-1))
* C_2 with L on the long root           -> companion sign rule
* B_3 with L = A_1 x A_1                -> companion sign rule
* D_5 with L = A_1 x A_3                -> companion sign rule
* D_4 with L = A_1 x A_1 x A_1          -> companion sign rule

The base value, a rational cocharacter of the factor, is carried back into
Y(T) along the node matching and read in 𝒵(L).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .companion import CompanionError, check_good_prime, phi_base_sign
from .lattice_core import AbelianElement, FiniteAbelianGroup
from .root_datum import (
    CartanType,
    CenterData,
    RootDatum,
    RootDatumError,
    build_simply_connected,
    center_component_group,
    dynkin_components,
    h_map,
    is_cuspidal,
)
from .weyl import (
    RelativeWeylGroup,
    WeylElement,
    relative_type,
    relative_weyl_group,
    weyl_group_elements,
)

__all__ = [
    "PhiError",
    "PhiMorphism",
    "LinearCharacter",
    "GammaCharacter",
    "tau_cocharacter",
    "phi_type_A",
    "phi_compute",
    "gamma_character",
    "table_generate",
    "TableRow",
    "rho_bar",
    "type_a_levi",
    "compatibility_holds",
]


class PhiError(ValueError):
    """Input outside the supported classification, or a bad prime."""


# ----------------------------------------------------------------- records

@dataclass(frozen=True, eq=False)
class PhiMorphism:
    rwg: RelativeWeylGroup
    center: CenterData
    values: dict  # white node -> AbelianElement of 𝒵(L)

    @property
    def rd(self) -> RootDatum:
        return self.rwg.rd

    @property
    def levi(self) -> tuple[int, ...]:
        return self.rwg.levi

    def value(self, node: int) -> AbelianElement:
        return self.values[node]

    def on_word(self, word: Sequence[int]) -> AbelianElement:
        out = self.center.group.zero()
        for a in word:
            out = out + self.values[a]
        return out

    def __call__(self, w: WeylElement) -> AbelianElement:
        return self.on_word(self.rwg.word_of(w))

    def is_trivial(self) -> bool:
        return all(v.is_zero for v in self.values.values())

    def respects_relations(self) -> bool:
        """Coxeter relations in an abelian target: 2v = 0, and v_a = v_b on odd bonds."""
        nodes = self.rwg.white_nodes
        for a in nodes:
            if not (2 * self.values[a]).is_zero:
                return False
        for a, b in combinations(nodes, 2):
            m = (self.rwg.generators[a] * self.rwg.generators[b]).order()
            if m % 2 and self.values[a] != self.values[b]:
                return False
        return True


@dataclass(frozen=True)
class LinearCharacter:
    """Character of a finite abelian group; ``values[i]`` in Q/Z on generator i."""

    source: FiniteAbelianGroup
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.source.ngens:
            raise PhiError("one value per generator is needed")
        for v, d in zip(self.values, self.source.invariant_factors):
            if (Fraction(v) * d).denominator != 1:
                raise PhiError("character value incompatible with the generator order")

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "LinearCharacter":
        return cls(group, (Fraction(0),) * group.ngens)

    @classmethod
    def standard(cls, group: FiniteAbelianGroup) -> "LinearCharacter":
        """Faithful on each cyclic factor: generator i -> 1/d_i."""
        return cls(group, tuple(Fraction(1, d) for d in group.invariant_factors))

    def __call__(self, e: AbelianElement) -> Fraction:
        if e.group != self.source:
            raise PhiError("character applied outside its source group")
        return sum((c * v for c, v in zip(e.coords, self.values)), Fraction(0)) % 1


@dataclass(frozen=True)
class GammaCharacter:
    rwg: RelativeWeylGroup
    values: dict  # node -> Fraction in {0, 1/2}

    def sign(self, node: int) -> int:
        return -1 if self.values[node] else 1

    def is_trivial(self) -> bool:
        return not any(self.values.values())


# ----------------------------------------------------------------- type A

def type_a_levi(d: int, k: int) -> tuple[int, ...]:
    """Nodes of A_{dk-1} forming k blocks of type A_{d-1}."""
    n = d * k
    return tuple(i for i in range(1, n) if i % d)


def tau_cocharacter(d: int, k: int, m: int) -> tuple[Fraction, ...]:
    """tau(exp(2 pi i m/d)) = diag(1, ..., 1, zeta 1_d) in simple-coroot coordinates of SL_dk."""
    n = d * k
    q = [Fraction(0)] * (n - d) + [Fraction(m, d)] * d
    q[-1] -= m  # same torus element, now with coordinate sum 0
    out, run = [], Fraction(0)
    for j in range(n - 1):
        run += q[j]
        out.append(run)
    return tuple(out)


def _sign_exponent(d: int) -> int:
    """m with exp(2 pi i m/d) = (-1)^(d-1)."""
    return d // 2 if d % 2 == 0 else 0


def phi_type_A(k: int, d: int) -> PhiMorphism:
    """tau((-1)^(d-1)) on every block transposition of SL_dk.

    >>> phi_type_A(2, 2).values[2]
    [1] in Z/2
    """
    if k < 1 or d < 1:
        raise PhiError("k and d must be positive")
    if d * k < 2:
        raise PhiError("SL_1 has no root datum")
    rd = build_simply_connected(f"A{d * k - 1}")
    levi = type_a_levi(d, k)
    rwg = relative_weyl_group(rd, levi)
    cd = center_component_group(rd, levi)
    val = cd.encode(tau_cocharacter(d, k, _sign_exponent(d)))
    return PhiMorphism(rwg, cd, {a: val for a in rwg.white_nodes})


# ------------------------------------------------------------ base matching

def _graph(cartan, nodes: Sequence[int], levi_nodes) -> nx.DiGraph:
    g = nx.DiGraph()
    for i in nodes:
        g.add_node(i, black=i in levi_nodes)
    for i in nodes:
        for j in nodes:
            if i != j and cartan[i - 1][j - 1]:
                g.add_edge(i, j, a=cartan[i - 1][j - 1])
    return g


@dataclass(frozen=True)
class _Base:
    name: str
    rd: RootDatum
    levi: tuple[int, ...]
    d: int = 0  # type A half size, 0 otherwise


@lru_cache(maxsize=None)
def _fixed_bases() -> tuple[_Base, ...]:
    return (
        _Base("C2", build_simply_connected("C2"), (2,)),
        _Base("B3", build_simply_connected("B3"), (1, 3)),
        _Base("D5", build_simply_connected("D5"), (1, 3, 4, 5)),
        _Base("D4", build_simply_connected("D4"), (1, 3, 4)),
    )


@lru_cache(maxsize=None)
def _type_a_base(d: int) -> _Base:
    return _Base(f"A{2 * d - 1}", build_simply_connected(f"A{2 * d - 1}"), type_a_levi(d, 2), d)


def _match(rd: RootDatum, comp: tuple[int, ...], trace: tuple[int, ...]):
    """(base, node map G -> base) for the factor ``comp`` with Levi part ``trace``."""
    g = _graph(rd.cartan, comp, set(trace))
    cands = list(_fixed_bases())
    if len(comp) % 2:
        cands.insert(0, _type_a_base((len(comp) + 1) // 2))
    for base in cands:
        if base.rd.rank != len(comp):
            continue
        h = _graph(base.rd.cartan, base.rd.nodes(), set(base.levi))
        gm = DiGraphMatcher(g, h, node_match=lambda x, y: x["black"] == y["black"],
                            edge_match=lambda x, y: x["a"] == y["a"])
        for mapping in gm.isomorphisms_iter():
            return base, mapping
    return None, None


def _base_value(base: _Base, p: int | None) -> tuple[Fraction, ...]:
    """Cocharacter (in the base's coroot coordinates) representing phi(s)."""
    if base.d:
        if p is not None and base.d % p == 0:
            raise PhiError(f"p = {p} divides d = {base.d}")
        return tau_cocharacter(base.d, 2, _sign_exponent(base.d))
    if p is None:
        p = 3
    try:
        e = phi_base_sign(base.rd, base.levi, p)
    except CompanionError as exc:
        raise PhiError(str(exc)) from exc
    cd = center_component_group(base.rd, base.levi)
    return cd.cocharacter_of(e)


def _check_prime(rd: RootDatum, p: int | None) -> None:
    if p is None:
        return
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise PhiError(f"{p} is not prime")
    try:
        check_good_prime(rd, p)
    except CompanionError as exc:
        raise PhiError(str(exc)) from exc


def _simply_connected_cover(rd: RootDatum) -> RootDatum:
    cover = build_simply_connected(rd.cartan)
    return RootDatum(cover.simple_roots, cover.simple_coroots, rd.cartan_type,
                     rd.label, simply_connected=True)


def phi_compute(rd: RootDatum, levi: Sequence[int], p: int | None = None) -> PhiMorphism:
    """phi_{L,v}^G on the generators s_{L,alpha}.

    ``p = None`` skips every characteristic check (and uses p = 3 wherever a
    base case needs an odd good prime).

    >>> rd = build_simply_connected("C3")
    >>> sorted((a, v.coords) for a, v in phi_compute(rd, (3,), 3).values.items())
    [(1, (0,)), (2, (1,))]
    """
    levi = rd.check_levi(levi)
    _check_prime(rd, p)
    if not rd.simply_connected:
        return _phi_quotient(rd, levi, p)
    if not is_cuspidal(rd, levi):
        raise PhiError(f"Levi {levi} is not cuspidal")
    rwg = relative_weyl_group(rd, levi)
    cd = center_component_group(rd, levi)
    values = {}
    for a in rwg.white_nodes:
        m = tuple(sorted(levi + (a,)))
        comp = next(c for c in dynkin_components(rd, m) if a in c)
        trace = tuple(i for i in comp if i != a)
        base, mapping = _match(rd, comp, trace)
        if base is None:
            raise PhiError(f"no base configuration for factor {comp} with Levi part {trace}")
        yb = _base_value(base, p)
        y = [Fraction(0)] * rd.x_rank
        for node in comp:
            y[node - 1] = yb[mapping[node] - 1]
        values[a] = cd.encode(y)
    return PhiMorphism(rwg, cd, values)


def _phi_quotient(rd: RootDatum, levi, p) -> PhiMorphism:
    """Push phi of the simply connected cover into 𝒵(L) of a quotient datum."""
    cover = _simply_connected_cover(rd)
    phi_sc = phi_compute(cover, levi, p)
    rwg = relative_weyl_group(rd, levi)
    cd = center_component_group(rd, levi)
    values = {}
    for a, e in phi_sc.values.items():
        ysc = phi_sc.center.cocharacter_of(e)
        y = [sum((ysc[i] * rd.simple_coroots[i][k] for i in range(rd.rank)), Fraction(0))
             for k in range(rd.x_rank)]
        values[a] = cd.encode(y)
    return PhiMorphism(rwg, cd, values)


# ------------------------------------------------------------------- gamma

def gamma_character(phi: PhiMorphism, zeta: LinearCharacter) -> GammaCharacter:
    """gamma = zeta o phi on the generators."""
    if zeta.source != phi.center.group:
        raise PhiError("zeta is not a character of 𝒵(L)")
    vals = {a: zeta(v) for a, v in phi.values.items()}
    for v in vals.values():
        if v not in (0, Fraction(1, 2)):
            raise PhiError("gamma value is not a sign")
    return GammaCharacter(phi.rwg, vals)


# ------------------------------------------------------------------- table

@dataclass(frozen=True)
class TableRow:
    group: str
    levi: tuple[int, ...]
    relative_type: str
    center: FiniteAbelianGroup
    phi: PhiMorphism

    def generator_values(self) -> list[dict]:
        out = []
        for a in self.phi.rwg.white_nodes:
            v = self.phi.values[a]
            out.append({"node": a, "value_order": v.order, "value_coords": list(v.coords)})
        return out

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "levi_indices": list(self.levi),
            "relative_type": self.relative_type,
            "center_invariant_factors": list(self.center.invariant_factors),
            "generator_values": self.generator_values(),
        }


def _row_condition_ok(rd: RootDatum, levi, p) -> bool:
    """Type A rows also need p not dividing the block size d."""
    if p is None or rd.cartan_type is None:
        return True
    fam, _ = rd.cartan_type.components[0]
    if fam != "A":
        return True
    blocks = dynkin_components(rd, levi)
    return all((len(b) + 1) % p for b in blocks)


def table_generate(ct: "CartanType | str | RootDatum", p: int | None = None) -> list[TableRow]:
    """One row per cuspidal standard Levi L with T != L, sorted by Levi.

    A RootDatum keeps its own node labels; a type name uses Bourbaki's.

    Rows whose extra condition on p fails (type A with p | d) are skipped.
    """
    if isinstance(ct, RootDatum):
        rd, ct = ct, ct.cartan_type
        if ct is None:
            raise PhiError("unrecognised Cartan matrix")
    else:
        ct = CartanType.parse(ct)
        rd = build_simply_connected(ct)
    if len(ct.components) != 1:
        raise PhiError("table_generate expects a quasi-simple type")
    _check_prime(rd, p)
    rows = []
    for size in range(1, rd.rank + 1):
        for levi in combinations(rd.nodes(), size):
            if not is_cuspidal(rd, levi) or not _row_condition_ok(rd, levi, p):
                continue
            ph = phi_compute(rd, levi, p)
            rows.append(TableRow(str(ct), levi, relative_type(ph.rwg), ph.center.group, ph))
    rows.sort(key=lambda r: (len(r.levi), r.levi))
    return rows


# ----------------------------------------------------------------- rho bar

def rho_bar(rd: RootDatum, levi: Sequence[int], levi2: Sequence[int],
            search: bool = False) -> dict[int, WeylElement]:
    """Generator alpha of W_G(L') -> its representative in W_G(L).

    The representative is the x in s_{L',alpha} W_{L'} stabilising both
    Delta_{L'} and Delta_L. Delta_L alone leaves a whole W_{L'}(L)-coset of
    candidates. Since W_{L'} is simply transitive on bases of Phi_{L'}, x is
    s_{L',alpha} itself; ``search=True`` confirms this by scanning the coset.
    """
    small, big = rd.check_levi(levi), rd.check_levi(levi2)
    if not set(small) <= set(big):
        raise PhiError("L must be contained in L'")
    rw_big = relative_weyl_group(rd, big)
    rw_small = relative_weyl_group(rd, small)
    w_l2 = weyl_group_elements(rd, big) if search else None
    out = {}
    for a, w in rw_big.generators.items():
        if search:
            hits = [x for x in (w * u for u in w_l2)
                    if rw_big.stabilizes_levi(x) and rw_small.stabilizes_levi(x)]
        else:
            hits = [w] if rw_small.stabilizes_levi(w) else []
        if len(hits) != 1:
            raise PhiError(f"{len(hits)} coset representatives for node {a}")
        out[a] = hits[0]
    return out


def compatibility_holds(rd: RootDatum, levi: Sequence[int], levi2: Sequence[int],
                        p: int | None = None) -> bool:
    """h_L^{L'} o phi_{L'} == phi_L o rho_bar on every generator of W_G(L')."""
    phi_small = phi_compute(rd, levi, p)
    phi_big = phi_compute(rd, levi2, p)
    h = h_map(rd, levi, levi2)
    for a, x in rho_bar(rd, levi, levi2).items():
        if h(phi_big.values[a]) != phi_small(x):
            return False
    return True
