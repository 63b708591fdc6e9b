"""Root data of simply connected groups, Levi data, and center component groups.

Conventions
-----------
* Cartan matrix entries are ``A[i][j] = <alpha_i, alpha_j^vee>`` (0-based in
  code, 1-based node labels in every public interface).
* Simply connected datum: X has the fundamental weights as basis, Y the
  simple coroots, and the pairing is the dot product. The simple root
  ``alpha_i`` then has X-coordinates equal to row ``i`` of ``A``.
* Numbering is Bourbaki: B_r and C_r put the double bond at the end of the
  chain, D_r forks at node r-2, E_n attaches node 2 to node 4.

Elements of a center component group 𝒵(L) are stored as coordinates on the
Smith basis of the Levi's root matrix.  A rational cocharacter ``y`` (a
vector in Y ⊗ Q with ``<alpha_i, y>`` integral for i in I) names the element
``exp(2 pi i y)``; :meth:`CenterData.encode` turns it into coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .lattice_core import (
    AbelianElement,
    AbelianHom,
    FiniteAbelianGroup,
    IntMatrix,
    LatticeError,
    as_matrix,
    inverse_unimodular,
    matmul,
    rational_inverse,
    smith_normal_form,
    transpose,
)

__all__ = [
    "RootDatumError",
    "CartanType",
    "RootDatum",
    "CenterData",
    "cartan_matrix",
    "build_simply_connected",
    "positive_roots",
    "center_component_group",
    "h_map",
    "is_cuspidal",
    "is_self_opposed",
    "central_quotient",
    "dynkin_components",
    "bad_primes",
    "identify_cartan_type",
]


class RootDatumError(ValueError):
    """Invalid Cartan type, Levi subset or lattice input."""


# ------------------------------------------------------------------ types

_TYPE_RE = re.compile(r"([A-Ga-g])(\d+)")


@dataclass(frozen=True)
class CartanType:
    """Product of irreducible Cartan types, e.g. ``CartanType.parse("A1xB3")``."""

    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for fam, n in self.components:
            _check_component(fam, n)

    @classmethod
    def parse(cls, text: "str | CartanType") -> "CartanType":
        if isinstance(text, CartanType):
            return text
        parts = [p for p in re.split(r"[x×*\s]+", text.strip()) if p]
        comps = []
        for p in parts:
            m = _TYPE_RE.fullmatch(p)
            if not m:
                raise RootDatumError(f"cannot parse Cartan type {p!r}")
            comps.append((m.group(1).upper(), int(m.group(2))))
        if not comps:
            raise RootDatumError("empty Cartan type")
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.components)

    def __str__(self):
        return "x".join(f"{f}{n}" for f, n in self.components)


def _check_component(fam: str, n: int) -> None:
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }.get(fam)
    if not ok:
        raise RootDatumError(f"invalid type {fam}{n}")


def cartan_matrix(family: str, rank: int) -> IntMatrix:
    """Bourbaki Cartan matrix of an irreducible type."""
    fam, n = family.upper(), rank
    _check_component(fam, n)
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):  # 1-based nodes
        a[i - 1][j - 1], a[j - 1][i - 1] = aij, aji

    if fam in "ABC":
        for i in range(1, n):
            bond(i, i + 1)
        if fam == "B":
            bond(n - 1, n, -2, -1)
        elif fam == "C":
            bond(n - 1, n, -1, -2)
    elif fam == "D":
        for i in range(1, n - 1):
            bond(i, i + 1)
        bond(n - 2, n)
    elif fam == "E":
        bond(1, 3)
        bond(2, 4)
        for i in range(3, n):
            bond(i, i + 1)
    elif fam == "F":
        bond(1, 2)
        bond(2, 3, -2, -1)
        bond(3, 4)
    elif fam == "G":
        bond(1, 2, -1, -3)
    return as_matrix(a)


def bad_primes(family: str, rank: int = 0) -> tuple[int, ...]:
    """Bad primes of an irreducible type."""
    fam = family.upper()
    if fam == "E" and rank == 8:
        return (2, 3, 5)
    return {"A": (), "B": (2,), "C": (2,), "D": (2,), "G": (2, 3), "F": (2, 3),
            "E": (2, 3)}[fam]


def _block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, x in enumerate(r):
                out[off + i][off + j] = x
        off += len(b)
    return as_matrix(out)


# ------------------------------------------------------------- root datum

@dataclass(frozen=True, eq=False)
class RootDatum:
    """Root datum with ``rank`` simple roots in an X lattice of rank ``x_rank``.

    ``simple_roots[i]`` lives in X-coordinates and ``simple_coroots[i]`` in
    Y-coordinates; the pairing is the dot product.
    """

    simple_roots: IntMatrix
    simple_coroots: IntMatrix
    cartan_type: CartanType | None = None
    label: str = ""
    simply_connected: bool = False

    def __post_init__(self):
        if len(self.simple_roots) != len(self.simple_coroots):
            raise RootDatumError("roots and coroots differ in number")
        if self.simple_roots and len(self.simple_roots[0]) != len(self.simple_coroots[0]):
            raise RootDatumError("X and Y ranks differ")
        c = self.cartan
        for i in range(self.rank):
            if c[i][i] != 2:
                raise RootDatumError("<alpha_i, alpha_i^vee> must be 2")

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def x_rank(self) -> int:
        return len(self.simple_roots[0]) if self.simple_roots else 0

    @cached_property
    def cartan(self) -> IntMatrix:
        return as_matrix(matmul(self.simple_roots, transpose(self.simple_coroots)))

    def root(self, i: int) -> tuple[int, ...]:
        """Simple root for 1-based node ``i``."""
        return self.simple_roots[i - 1]

    def coroot(self, i: int) -> tuple[int, ...]:
        return self.simple_coroots[i - 1]

    def pairing(self, x: Sequence, y: Sequence):
        return sum(a * b for a, b in zip(x, y))

    def nodes(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    def check_levi(self, levi: Iterable[int]) -> tuple[int, ...]:
        s = tuple(sorted(set(int(i) for i in levi)))
        if any(i < 1 or i > self.rank for i in s):
            raise RootDatumError(f"Levi indices {s} outside 1..{self.rank}")
        return s

    def __repr__(self):
        return f"RootDatum({self.label or self.cartan_type or self.cartan})"

    def __eq__(self, other):
        return (isinstance(other, RootDatum) and self.simple_roots == other.simple_roots
                and self.simple_coroots == other.simple_coroots)

    def __hash__(self):
        return hash((self.simple_roots, self.simple_coroots))

    # ----- cached combinatorics, filled lazily by other modules
    @cached_property
    def positive_root_coords(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots as coefficient vectors on the simple roots."""
        return _positive_roots_from_cartan(self.cartan)

    @cached_property
    def positive_roots_x(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sum(c * self.simple_roots[i][k] for i, c in enumerate(rc))
                           for k in range(self.x_rank))
                     for rc in self.positive_root_coords)

    @cached_property
    def root_index(self) -> dict[tuple[int, ...], int]:
        """X-coordinates of a root -> signed 1-based index in positive_roots_x."""
        d = {}
        for k, r in enumerate(self.positive_roots_x, start=1):
            d[r] = k
            d[tuple(-x for x in r)] = -k
        return d


def cartan_from_type(ct: CartanType | str) -> IntMatrix:
    ct = CartanType.parse(ct)
    return _block_diag([cartan_matrix(f, n) for f, n in ct.components])


def build_simply_connected(ct: "CartanType | str | Sequence[Sequence[int]]") -> RootDatum:
    """Simply connected datum from a type name or an explicit Cartan matrix.

    >>> build_simply_connected("B3").cartan
    ((2, -1, 0), (-1, 2, -2), (0, -1, 2))
    """
    if isinstance(ct, (str, CartanType)):
        ct = CartanType.parse(ct)
        a = cartan_from_type(ct)
        label = str(ct)
    else:
        a = as_matrix(ct)
        _validate_cartan(a)
        ct = identify_cartan_type(a)
        label = str(ct) if ct is not None else "cartan"
    n = len(a)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return RootDatum(a, ident, ct, label, simply_connected=True)


def _cartan_graph(a: Sequence[Sequence[int]]) -> "nx.DiGraph":
    g = nx.DiGraph()
    g.add_nodes_from(range(len(a)))
    g.add_edges_from((i, j, {"a": a[i][j]}) for i in range(len(a))
                     for j in range(len(a)) if i != j and a[i][j])
    return g


def identify_cartan_type(a: Sequence[Sequence[int]]) -> CartanType | None:
    """Cartan type of a finite-type matrix, up to relabelling of the nodes.

    Components are listed in order of their smallest node. Returns None when
    some component matches no classical or exceptional type.
    """
    g = _cartan_graph(a)
    comps = []
    for nodes in sorted((sorted(c) for c in nx.weakly_connected_components(g)), key=min):
        sub = [[a[i][j] for j in nodes] for i in nodes]
        n = len(nodes)
        hit = None
        for fam in "ABCDEFG":
            try:
                _check_component(fam, n)
            except RootDatumError:
                continue
            cand = _cartan_graph(cartan_matrix(fam, n))
            em = nx.algorithms.isomorphism.categorical_edge_match("a", None)
            if nx.is_isomorphic(_cartan_graph(sub), cand, edge_match=em):
                hit = (fam, n)
                break
        if hit is None:
            return None
        comps.append(hit)
    return CartanType(tuple(comps))


def _validate_cartan(a: IntMatrix) -> None:
    n = len(a)
    if any(len(r) != n for r in a):
        raise RootDatumError("Cartan matrix must be square")
    for i in range(n):
        if a[i][i] != 2:
            raise RootDatumError("Cartan diagonal must be 2")
        for j in range(n):
            if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                raise RootDatumError("not a Cartan matrix")
    try:
        _positive_roots_from_cartan(a, limit=200)
    except RootDatumError:
        raise RootDatumError("Cartan matrix is not of finite type") from None


def _positive_roots_from_cartan(a: Sequence[Sequence[int]], limit: int | None = None):
    """Root-string generation of positive roots in simple-root coordinates."""
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = list(simple)
    known = set(roots)
    frontier = list(simple)
    while frontier:
        nxt = []
        for b in frontier:
            for i in range(n):
                # <b, alpha_i^vee>
                pair = sum(b[j] * a[j][i] for j in range(n))
                p = 0
                c = list(b)
                while True:
                    c[i] -= 1
                    if tuple(c) in known:
                        p += 1
                    else:
                        break
                if p - pair > 0:
                    up = list(b)
                    up[i] += 1
                    t = tuple(up)
                    if t not in known:
                        known.add(t)
                        roots.append(t)
                        nxt.append(t)
                        if limit is not None and len(roots) > limit:
                            raise RootDatumError("too many roots")
        frontier = nxt
    roots.sort(key=lambda r: (sum(r), tuple(-x for x in r)))
    return tuple(roots)


def positive_roots(rd: RootDatum) -> list[tuple[int, ...]]:
    """Positive roots in X-coordinates, sorted by height.

    >>> len(positive_roots(build_simply_connected("G2")))
    6
    """
    return list(rd.positive_roots_x)


def dynkin_components(rd: RootDatum, nodes: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the Dynkin diagram restricted to ``nodes``."""
    nodes = sorted(set(nodes))
    left = set(nodes)
    comps = []
    a = rd.cartan
    while left:
        start = min(left)
        stack, comp = [start], {start}
        while stack:
            i = stack.pop()
            for j in nodes:
                if j not in comp and a[i - 1][j - 1] != 0:
                    comp.add(j)
                    stack.append(j)
        left -= comp
        comps.append(tuple(sorted(comp)))
    return comps


# ---------------------------------------------------------- center groups

@dataclass(frozen=True, eq=False)
class CenterData:
    """𝒵(L) for the Levi on ``levi`` with its Smith-basis encoding."""

    rd: RootDatum
    levi: tuple[int, ...]
    U: IntMatrix
    V: IntMatrix
    diagonal: tuple[int, ...]
    group: FiniteAbelianGroup
    slots: tuple[int, ...]  # Smith positions carrying a factor > 1

    @property
    def order(self) -> int:
        return self.group.order

    def encode(self, y: Sequence) -> AbelianElement:
        """Element named by the rational cocharacter ``y`` (Y-coordinates)."""
        y = [Fraction(v) for v in y]
        for i in self.levi:
            val = sum(Fraction(a) * b for a, b in zip(self.rd.root(i), y))
            if val.denominator != 1:
                raise RootDatumError(f"cocharacter {y} is not central in the Levi {self.levi}")
        vinv = self._vinv
        z = [sum(Fraction(vinv[k][j]) * y[j] for j in range(len(y))) for k in range(len(y))]
        coords = []
        for s in self.slots:
            c = self.diagonal[s] * z[s]
            if c.denominator != 1:
                raise RootDatumError("encoding produced a non-integral coordinate")
            coords.append(int(c))
        return self.group.element(coords)

    def generator_cocharacters(self) -> list[tuple[Fraction, ...]]:
        """Rational cocharacters representing the group generators."""
        n = self.rd.x_rank
        out = []
        for s in self.slots:
            out.append(tuple(Fraction(self.V[j][s], self.diagonal[s]) for j in range(n)))
        return out

    def cocharacter_of(self, e: AbelianElement) -> tuple[Fraction, ...]:
        n = self.rd.x_rank
        y = [Fraction(0)] * n
        for c, g in zip(e.coords, self.generator_cocharacters()):
            for j in range(n):
                y[j] += c * g[j]
        return tuple(y)

    @cached_property
    def _vinv(self):
        return inverse_unimodular(self.V)


_CENTER_CACHE: dict = {}


def center_component_group(rd: RootDatum, levi: Iterable[int] = None) -> CenterData:
    """𝒵(L) = torsion of X / Z·Delta_I, with I = ``levi`` (default: all nodes).

    >>> center_component_group(build_simply_connected("A3")).group
    FiniteAbelianGroup(4)
    """
    levi = rd.nodes() if levi is None else rd.check_levi(levi)
    key = (rd, levi)
    hit = _CENTER_CACHE.get(key)
    if hit is not None:
        return hit
    n = rd.x_rank
    if not levi:
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        cd = CenterData(rd, levi, (), ident, (0,) * n, FiniteAbelianGroup(()), ())
    else:
        m = [rd.root(i) for i in levi]
        snf = smith_normal_form(m)
        diag = tuple(snf.diagonal) + (0,) * (n - len(snf.diagonal))
        slots = tuple(k for k, d in enumerate(diag) if d > 1)
        grp = FiniteAbelianGroup([diag[k] for k in slots])
        if grp.invariant_factors != tuple(diag[k] for k in slots):
            raise LatticeError("Smith diagonal is not in canonical order")
        cd = CenterData(rd, levi, snf.U, snf.V, diag, grp, slots)
    _CENTER_CACHE[key] = cd
    return cd


def h_map(rd: RootDatum, sub: Iterable[int], sup: Iterable[int] = None) -> AbelianHom:
    """The map 𝒵(L_sup) -> 𝒵(L_sub) induced by Z(L_sup) ⊂ Z(L_sub)."""
    sub = rd.check_levi(sub)
    sup = rd.nodes() if sup is None else rd.check_levi(sup)
    if not set(sub) <= set(sup):
        raise RootDatumError(f"{sub} is not contained in {sup}")
    return _h_map(rd, sub, sup)


@lru_cache(maxsize=4096)
def _h_map(rd: RootDatum, sub: tuple[int, ...], sup: tuple[int, ...]) -> AbelianHom:
    big = center_component_group(rd, sup)
    small = center_component_group(rd, sub)
    images = [small.encode(y).coords for y in big.generator_cocharacters()]
    return AbelianHom(big.group, small.group, images)


def is_cuspidal(rd: RootDatum, levi: Iterable[int]) -> bool:
    """Every proper standard Levi of L has an h-map with nontrivial kernel.

    Kernels grow as the sub-Levi shrinks, so maximal proper subsets suffice.
    """
    levi = rd.check_levi(levi)
    for drop in levi:
        sub = tuple(i for i in levi if i != drop)
        if h_map(rd, sub, levi).is_injective():
            return False
    return True


def is_self_opposed(rd: RootDatum, levi: Iterable[int]) -> bool:
    from .weyl import longest_element  # local import: weyl depends on this module

    levi = rd.check_levi(levi)
    roots = {rd.root(i) for i in levi}
    neg = {tuple(-x for x in r) for r in roots}
    for a in rd.nodes():
        if a in levi:
            continue
        w0m = longest_element(rd, levi + (a,))
        if {w0m.act(r) for r in roots} != neg:
            return False
    return True


def central_quotient(rd: RootDatum, kernel: Sequence[Sequence]) -> tuple[RootDatum, IntMatrix]:
    """Quotient by the central subgroup generated by the cocharacters ``kernel``.

    Each entry of ``kernel`` is a rational cocharacter (Y-coordinates of
    ``rd``) that must be central in G. The new Y lattice is Y + Z·kernel; the
    new X lattice is its dual. Returns the new datum and the matrix whose
    rows express the new X basis in old X-coordinates.
    """
    n = rd.x_rank
    full = center_component_group(rd)
    for y in kernel:
        full.encode(y)  # raises if not central
    gens = [[Fraction(v) for v in y] for y in kernel]
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    basis = _lattice_basis_rational(ident + gens)  # rows = new Y basis in old Y coords
    inv = rational_inverse(basis)
    # new X basis = dual basis: columns of basis^{-1}
    new_x = [[inv[j][i] for j in range(n)] for i in range(n)]
    if any(v.denominator != 1 for r in new_x for v in r):
        raise RootDatumError("dual lattice is not integral")
    new_x = as_matrix([[int(v) for v in r] for r in new_x])
    # roots in new X coords: <root, b_k> for new Y basis b_k
    roots = as_matrix([[int(sum(Fraction(a) * b for a, b in zip(r, bk))) for bk in basis]
                       for r in rd.simple_roots])
    # coroots in new Y coords: solve c = coords @ basis
    coroots = []
    for c in rd.simple_coroots:
        coords = [sum(Fraction(c[j]) * inv[j][k] for j in range(n)) for k in range(n)]
        if any(v.denominator != 1 for v in coords):
            raise RootDatumError("coroot not in the new lattice")
        coroots.append([int(v) for v in coords])
    label = f"{rd.label}/K" if rd.label else "quotient"
    return RootDatum(roots, as_matrix(coroots), rd.cartan_type, label, False), new_x


def _lattice_basis_rational(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of the Z-span of rational vectors (full rank assumed)."""
    from math import lcm

    den = 1
    for v in vectors:
        for x in v:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in v] for v in vectors]
    snf = smith_normal_form(ints)
    vinv = inverse_unimodular(snf.V)
    return [[Fraction(d * x, den) for x in vinv[i]] for i, d in enumerate(snf.diagonal) if d]
