"""Weyl group elements as integer matrices acting on X-coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .lattice_core import IntMatrix, as_matrix, identity, inverse_unimodular, matmul, transpose
from .root_datum import CartanType, RootDatum, RootDatumError, is_self_opposed

__all__ = [
    "WeylError",
    "WeylElement",
    "RelativeWeylGroup",
    "simple_reflection",
    "longest_element",
    "minus_w0_permutation",
    "coxeter_element",
    "coxeter_partition",
    "relative_weyl_group",
    "relative_type",
    "weyl_group_elements",
    "coxeter_type_from_matrix",
    "same_coxeter_type",
]


class WeylError(ValueError):
    """Relative Weyl group requested for a Levi it is not built for."""


@dataclass(frozen=True)
class WeylElement:
    """``matrix`` maps X-coordinate column vectors; ``word`` is informational."""

    matrix: IntMatrix
    word: tuple[int, ...] | None = None

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        w = None if self.word is None or other.word is None else self.word + other.word
        return WeylElement(as_matrix(matmul(self.matrix, other.matrix)), w)

    def inverse(self) -> "WeylElement":
        w = None if self.word is None else tuple(reversed(self.word))
        return WeylElement(inverse_unimodular(self.matrix), w)

    def act(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.matrix)

    def act_y(self, y: Sequence) -> tuple:
        """Action on Y: inverse transpose, so pairings are preserved."""
        inv = self._inv_t
        return tuple(sum(a * b for a, b in zip(row, y)) for row in inv)

    @cached_property
    def _inv_t(self):
        return transpose(inverse_unimodular(self.matrix))

    @property
    def is_identity(self) -> bool:
        return self.matrix == identity(len(self.matrix))

    def order(self) -> int:
        k, p = 1, self
        one = identity(len(self.matrix))
        while p.matrix != one:
            p = p * self
            k += 1
        return k


def _identity_element(rd: RootDatum) -> WeylElement:
    return WeylElement(identity(rd.x_rank), ())


@lru_cache(maxsize=None)
def simple_reflection(rd: RootDatum, i: int) -> WeylElement:
    """s_i(x) = x - <x, alpha_i^vee> alpha_i."""
    a, c = rd.root(i), rd.coroot(i)
    n = rd.x_rank
    m = [[int(r == s) - a[r] * c[s] for s in range(n)] for r in range(n)]
    return WeylElement(as_matrix(m), (i,))


def _is_positive(rd: RootDatum, x: tuple[int, ...]) -> bool:
    k = rd.root_index.get(x)
    if k is None:
        raise RootDatumError(f"{x} is not a root")
    return k > 0


def from_word(rd: RootDatum, word: Iterable[int]) -> WeylElement:
    w = _identity_element(rd)
    for i in word:
        w = w * simple_reflection(rd, i)
    return w


@lru_cache(maxsize=None)
def longest_element(rd: RootDatum, nodes: tuple[int, ...] | None = None) -> WeylElement:
    """Longest element of the parabolic subgroup on ``nodes`` (default all).

    Right-multiplies by s_j while w(alpha_j) stays positive; each step raises
    the length by one, so the loop ends at w_0.
    """
    nodes = rd.nodes() if nodes is None else tuple(sorted(nodes))
    w = _identity_element(rd)
    while True:
        for j in nodes:
            if _is_positive(rd, w.act(rd.root(j))):
                w = w * simple_reflection(rd, j)
                break
        else:
            return w


def minus_w0_permutation(rd: RootDatum, nodes: tuple[int, ...] | None = None) -> dict[int, int]:
    """i -> j with -w_0(alpha_i) = alpha_j."""
    nodes = rd.nodes() if nodes is None else tuple(sorted(nodes))
    w0 = longest_element(rd, nodes)
    lookup = {rd.root(j): j for j in nodes}
    out = {}
    for i in nodes:
        img = tuple(-x for x in w0.act(rd.root(i)))
        if img not in lookup:
            raise RootDatumError("-w0 does not permute the simple roots")
        out[i] = lookup[img]
    return out


def coxeter_element(rd: RootDatum) -> WeylElement:
    """c = s_1 s_2 ... s_r."""
    return from_word(rd, rd.nodes())


def coxeter_partition(rd: RootDatum) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    """alpha in Phi_c^- -> [alpha, c(alpha), ..., c^(k-1)(alpha)].

    Phi_c^- is the set of positive roots sent to negative roots by c^-1.
    Roots are X-coordinate tuples.
    """
    c = coxeter_element(rd)
    cinv = c.inverse()
    out = {}
    for a in rd.positive_roots_x:
        if _is_positive(rd, cinv.act(a)):
            continue
        block = [a]
        x = c.act(a)
        while _is_positive(rd, x):
            block.append(x)
            x = c.act(x)
        out[a] = block
    return out


def weyl_group_elements(rd: RootDatum, nodes: tuple[int, ...] | None = None,
                        limit: int = 200000) -> list[WeylElement]:
    """Every element of the (parabolic) Weyl group; small ranks only."""
    nodes = rd.nodes() if nodes is None else tuple(sorted(nodes))
    gens = [simple_reflection(rd, i) for i in nodes]
    return _closure(_identity_element(rd), gens, limit)


def _closure(one: WeylElement, gens: Sequence[WeylElement], limit: int) -> list[WeylElement]:
    seen = {one.matrix: one}
    frontier = [one]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                u = w * g
                if u.matrix not in seen:
                    seen[u.matrix] = u
                    nxt.append(u)
                    if len(seen) > limit:
                        raise WeylError("group larger than the enumeration limit")
        frontier = nxt
    return list(seen.values())


# ---------------------------------------------------------- relative group

@dataclass(frozen=True, eq=False)
class RelativeWeylGroup:
    """W_G(L) = {w : w(Delta_I) = Delta_I} for a self-opposed standard Levi."""

    rd: RootDatum
    levi: tuple[int, ...]
    generators: dict  # white node alpha -> s_{L,alpha}

    @cached_property
    def elements(self) -> list[WeylElement]:
        return _closure(_identity_element(self.rd), list(self.generators.values()), 10 ** 6)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def white_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.generators))

    def stabilizes_levi(self, w: WeylElement) -> bool:
        roots = {self.rd.root(i) for i in self.levi}
        return {w.act(r) for r in roots} == roots

    def from_word(self, word: Iterable[int]) -> WeylElement:
        """Product of s_{L,alpha} over white nodes in ``word``."""
        w = _identity_element(self.rd)
        for a in word:
            if a not in self.generators:
                raise WeylError(f"node {a} is not a generator of W_G(L)")
            w = w * self.generators[a]
        return w

    def word_of(self, w: WeylElement) -> tuple[int, ...]:
        """Some word in the generators for ``w`` (breadth-first, so shortest)."""
        try:
            return self._words[w.matrix]
        except KeyError:
            raise WeylError("element is not in the relative Weyl group") from None

    @cached_property
    def _words(self) -> dict:
        one = _identity_element(self.rd)
        seen = {one.matrix: ()}
        frontier = [one]
        while frontier:
            nxt = []
            for u in frontier:
                for a in self.white_nodes:
                    v = u * self.generators[a]
                    if v.matrix not in seen:
                        seen[v.matrix] = seen[u.matrix] + (a,)
                        nxt.append(v)
            frontier = nxt
        return seen

    @cached_property
    def center_torus_basis(self) -> tuple[tuple[int, ...], ...]:
        """Saturated basis of Y(Z(L)°): cocharacters killed by Delta_I."""
        from .lattice_core import kernel_basis

        m = [self.rd.root(i) for i in self.levi]
        return kernel_basis(m, self.rd.x_rank)

    def reflection_action(self, w: WeylElement) -> IntMatrix:
        """Matrix of w on Y(Z(L)°) in :attr:`center_torus_basis` (columns = images)."""
        from .lattice_core import rational_inverse

        basis = self.center_torus_basis
        if not basis:
            return ()
        imgs = [w.act_y(b) for b in basis]
        # solve img = sum c_k basis_k using a left inverse of the basis matrix
        bt = [list(b) for b in basis]
        gram = matmul(bt, transpose(bt))
        ginv = rational_inverse(gram)
        cols = []
        for v in imgs:
            proj = [sum(x * y for x, y in zip(b, v)) for b in bt]
            c = [sum(ginv[i][j] * proj[j] for j in range(len(bt))) for i in range(len(bt))]
            if any(x.denominator != 1 for x in c):
                raise WeylError("w does not preserve Y(Z(L)°)")
            cols.append([int(x) for x in c])
        return as_matrix(transpose(cols))


@lru_cache(maxsize=None)
def relative_weyl_group(rd: RootDatum, levi: tuple[int, ...]) -> RelativeWeylGroup:
    """W_G(L) with generators s_{L,alpha} = w_{0,I+alpha} w_{0,I}.

    >>> from relweyl.root_datum import build_simply_connected
    >>> relative_weyl_group(build_simply_connected("C2"), (2,)).order
    2
    """
    levi = rd.check_levi(levi)
    if not is_self_opposed(rd, levi):
        raise WeylError(f"Levi {levi} is not self-opposed; W_G(L) is not supported")
    w0l = longest_element(rd, levi)
    gens = {}
    for a in rd.nodes():
        if a in levi:
            continue
        s = longest_element(rd, tuple(sorted(levi + (a,)))) * w0l
        gens[a] = WeylElement(s.matrix, (a,))
    return RelativeWeylGroup(rd, levi, gens)


# ------------------------------------------------------------ Coxeter types

def _coxeter_matrix(rwg: RelativeWeylGroup) -> tuple[tuple[int, ...], list[list[int]]]:
    nodes = rwg.white_nodes
    m = [[1] * len(nodes) for _ in nodes]
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i < j:
                m[i][j] = m[j][i] = (rwg.generators[a] * rwg.generators[b]).order()
    return nodes, m


def coxeter_type_from_matrix(m: Sequence[Sequence[int]]) -> str:
    """Name a finite Coxeter matrix; components joined by 'x', empty -> 'A0'.

    Types with a single 4-bond are reported as B (C has the same Coxeter graph).
    """
    n = len(m)
    if n == 0:
        return "A0"
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j not in comp and m[i][j] >= 3:
                    comp.add(j)
                    stack.append(j)
        seen |= comp
        comps.append(sorted(comp))
    names = [_name_component([[m[i][j] for j in c] for i in c]) for c in comps]
    return "x".join(sorted(names, key=lambda s: (s[0], int(s[1:]))))


def _name_component(m: list[list[int]]) -> str:
    n = len(m)
    if n == 1:
        return "A1"
    edges = {(i, j): m[i][j] for i in range(n) for j in range(i + 1, n) if m[i][j] >= 3}
    labels = sorted(edges.values())
    deg = [sum(1 for (i, j) in edges if k in (i, j)) for k in range(n)]
    if len(edges) != n - 1:
        raise WeylError("Coxeter graph is not a tree")
    if n == 2:
        lab = labels[0]
        return {3: "A2", 4: "B2", 6: "G2"}.get(lab, f"I2({lab})")
    if max(deg) == 3:
        # D_n or E_n: branch arms
        if any(l != 3 for l in labels):
            raise WeylError("unsupported Coxeter graph")
        c = deg.index(3)
        arms = sorted(_arm_length(edges, c, nb, n) for nb in _nbrs(edges, c))
        if arms[0] == 1 and arms[1] == 1:
            return f"D{n}"
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return f"E{n}"
        raise WeylError("unsupported Coxeter graph")
    # path
    if labels.count(4) == 1 and all(l in (3, 4) for l in labels):
        ends = [k for k in range(n) if deg[k] == 1]
        four = next(e for e, l in edges.items() if l == 4)
        if any(k in four for k in ends):
            return f"B{n}"
        if n == 4:
            return "F4"
        raise WeylError("unsupported Coxeter graph")
    if all(l == 3 for l in labels):
        return f"A{n}"
    if n == 3 and labels == [3, 5]:
        return "H3"
    if n == 4 and labels == [3, 3, 5]:
        return "H4"
    raise WeylError("unsupported Coxeter graph")


def _nbrs(edges, k):
    return [j if i == k else i for (i, j) in edges if k in (i, j)]


def _arm_length(edges, centre, start, n):
    length, prev, cur = 1, centre, start
    while True:
        nxt = [x for x in _nbrs(edges, cur) if x != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def relative_type(rwg: RelativeWeylGroup) -> str:
    """Coxeter type of W_G(L) read off the orders of s_a s_b."""
    _, m = _coxeter_matrix(rwg)
    return coxeter_type_from_matrix(m)


_ALIASES = {"B1": "A1", "C1": "A1", "C2": "B2", "D2": "A1xA1", "D3": "A3", "B0": "A0"}


def _normalise(name: str) -> str:
    parts = [p for p in name.split("x") if p]
    parts = [_ALIASES.get(p, p) for p in parts]
    parts = [p if not p.startswith("C") else "B" + p[1:] for p in parts]
    flat = []
    for p in parts:
        flat.extend(p.split("x"))
    flat = [p for p in flat if p != "A0"] or ["A0"]
    return "x".join(sorted(flat, key=lambda s: (s[0], int(s[1:]))))


def same_coxeter_type(a: str, b: str) -> bool:
    """Equality up to the Coxeter coincidences B1 = A1, C_n = B_n, D3 = A3."""
    return _normalise(a) == _normalise(b)
