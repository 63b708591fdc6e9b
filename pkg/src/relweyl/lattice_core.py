"""Exact integer lattices: Smith normal form, cokernels, finite abelian groups.

Matrices are tuples of tuples of Python ints. Nothing here touches floats.

>>> smith_normal_form([[3, 2, -1], [1, 0, -1]]).invariant_factors
(1, 2)
>>> cokernel([[3, 2, -1], [1, 0, -1]], 3)
(1, FiniteAbelianGroup(2))
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, prod
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]

__all__ = [
    "IntMatrix",
    "as_matrix",
    "identity",
    "matmul",
    "transpose",
    "det",
    "inverse_unimodular",
    "rational_inverse",
    "SmithDecomposition",
    "smith_normal_form",
    "cokernel",
    "torsion_order",
    "strip_prime",
    "kernel_basis",
    "saturate",
    "complete_basis",
    "FiniteAbelianGroup",
    "AbelianElement",
    "AbelianHom",
    "hom_compose",
    "hom_apply",
    "group_equal",
    "LatticeError",
]


class LatticeError(ValueError):
    """Structural misuse of a lattice object (shape or domain mismatch)."""


# ---------------------------------------------------------------- matrices

def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise LatticeError("ragged matrix")
    return m


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    if not m:
        return ()
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    if not a:
        return ()
    if len(a[0]) != len(b):
        raise LatticeError(f"shape mismatch {len(a)}x{len(a[0])} @ {len(b)}x?")
    bt = transpose(b)
    if not bt:
        return tuple(() for _ in a)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def det(m: Sequence[Sequence]) -> int | Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num / prev if isinstance(num, Fraction) else _exact_div(num, prev)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _exact_div(num, den):
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        if r:
            return Fraction(num, den)
        return q
    return num / den


def rational_inverse(m: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(r[n:]) for r in a)


def inverse_unimodular(m: Sequence[Sequence[int]]) -> IntMatrix:
    inv = rational_inverse(m)
    if any(x.denominator != 1 for r in inv for x in r):
        raise LatticeError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


# ------------------------------------------------------------------- Smith

@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == D with D diagonal and d_1 | d_2 | ... ."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries."""
        return tuple(d for d in self.diagonal if d)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule: smallest nonzero absolute value in the active block, ties
    broken by (row, col). Deterministic for a fixed input.
    """
    a = [list(map(int, r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                # a remainder is smaller than the pivot; bring the smallest forward
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithDecomposition(as_matrix(U), as_matrix(a) if rows else (), as_matrix(V))


def cokernel(rows: Sequence[Sequence[int]], ambient: int | None = None) -> tuple[int, "FiniteAbelianGroup"]:
    """Z^ambient modulo the span of ``rows``: (free rank, torsion)."""
    if ambient is None:
        if not rows:
            raise LatticeError("ambient rank needed for an empty relation list")
        ambient = len(rows[0])
    if not rows:
        return ambient, FiniteAbelianGroup(())
    snf = smith_normal_form(rows)
    facs = snf.invariant_factors
    return ambient - len(facs), FiniteAbelianGroup(facs)


def strip_prime(n: int, p: int | None) -> int:
    if p is None:
        return n
    while n % p == 0:
        n //= p
    return n


def torsion_order(rows: Sequence[Sequence[int]], excluded_prime: int | None = None,
                  ambient: int | None = None) -> int:
    """Order of the torsion of the cokernel, with p-parts removed if asked."""
    if excluded_prime is not None and not _is_prime(excluded_prime):
        raise LatticeError(f"{excluded_prime} is not prime")
    _, tors = cokernel(rows, ambient)
    return prod(strip_prime(d, excluded_prime) for d in tors.invariant_factors)


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n ** 0.5) + 1))


# ------------------------------------------------------ lattice utilities

def kernel_basis(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Saturated basis (as rows) of {y in Z^n : m @ y = 0}."""
    n = ncols if ncols is not None else (len(m[0]) if m else 0)
    if not m:
        return identity(n)
    snf = smith_normal_form(m)
    r = snf.rank
    vt = transpose(snf.V)
    return tuple(tuple(vt[j]) for j in range(r, n))


def saturate(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis of (Q-span of vectors) intersected with Z^n."""
    if not vectors:
        return ()
    n = len(vectors[0])
    perp = kernel_basis(vectors, n)
    return kernel_basis(perp, n) if perp else identity(n)


def complete_basis(vectors: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Extra rows that extend a saturated family to a Z-basis of Z^n."""
    if not vectors:
        return identity(n)
    snf = smith_normal_form(vectors)
    if snf.invariant_factors != (1,) * len(vectors):
        raise LatticeError("family is not saturated")
    # rows of V^{-1} beyond the first k complete U@vectors, hence vectors
    vinv = inverse_unimodular(snf.V)
    return tuple(vinv[len(vectors):])


# ---------------------------------------------------------- abelian groups

def _canonical_factors(orders: Iterable[int]) -> tuple[int, ...]:
    orders = [int(o) for o in orders]
    if any(o < 0 for o in orders):
        raise LatticeError("negative cyclic order")
    if any(o == 0 for o in orders):
        raise LatticeError("finite groups only")
    n = len(orders)
    if n == 0:
        return ()
    diag = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return tuple(d for d in smith_normal_form(diag).invariant_factors if d > 1)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of Z/d_i with d_1 | d_2 | ... and every d_i > 1.

    >>> FiniteAbelianGroup((2, 3))
    FiniteAbelianGroup(6)
    >>> FiniteAbelianGroup((4, 2)).invariant_factors
    (2, 4)
    """

    invariant_factors: tuple[int, ...]

    def __init__(self, orders: Iterable[int] = ()):
        object.__setattr__(self, "invariant_factors", _canonical_factors(orders))

    def __repr__(self):
        return f"FiniteAbelianGroup({', '.join(map(str, self.invariant_factors))})"

    def __str__(self):
        return " x ".join(f"Z/{d}" for d in self.invariant_factors) or "1"

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    def element(self, coords: Sequence[int]) -> "AbelianElement":
        return AbelianElement(self, tuple(coords))

    def zero(self) -> "AbelianElement":
        return AbelianElement(self, (0,) * self.ngens)

    def gens(self) -> list["AbelianElement"]:
        return [self.element([int(i == j) for j in range(self.ngens)]) for i in range(self.ngens)]

    def elements(self) -> list["AbelianElement"]:
        return [self.element(c) for c in product(*(range(d) for d in self.invariant_factors))]

    def elements_of_order(self, n: int) -> list["AbelianElement"]:
        return [e for e in self.elements() if e.order == n]


@dataclass(frozen=True)
class AbelianElement:
    group: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __init__(self, group: FiniteAbelianGroup, coords: Sequence[int]):
        if len(coords) != group.ngens:
            raise LatticeError(f"{len(coords)} coordinates for {group}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coords",
                           tuple(int(c) % d for c, d in zip(coords, group.invariant_factors)))

    def _check(self, other):
        if not isinstance(other, AbelianElement) or other.group != self.group:
            raise LatticeError("elements of different groups")

    def __add__(self, other):
        self._check(other)
        return AbelianElement(self.group, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AbelianElement(self.group, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return AbelianElement(self.group, [k * a for a in self.coords])

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def order(self) -> int:
        o = 1
        for c, d in zip(self.coords, self.group.invariant_factors):
            o = o * (d // gcd(c, d)) // gcd(o, d // gcd(c, d))
        return o

    def __repr__(self):
        return f"{list(self.coords)} in {self.group}"


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism given on generators: column j is the image of gen j."""

    domain: FiniteAbelianGroup
    codomain: FiniteAbelianGroup
    matrix: IntMatrix

    def __init__(self, domain, codomain, images: Sequence[Sequence[int]] | None = None, *,
                 matrix: Sequence[Sequence[int]] | None = None):
        if images is not None:
            matrix = transpose(images) if images else tuple(() for _ in range(codomain.ngens))
        if matrix is None:
            raise LatticeError("need images or matrix")
        matrix = tuple(tuple(int(x) % d for x in r)
                       for r, d in zip(matrix, codomain.invariant_factors))
        if len(matrix) != codomain.ngens or any(len(r) != domain.ngens for r in matrix):
            raise LatticeError("matrix shape does not fit the groups")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "matrix", matrix)
        for g, img in zip(domain.invariant_factors, self.images()):
            if not (g * img).is_zero:
                raise LatticeError("images violate the domain relations")

    @classmethod
    def identity(cls, group: FiniteAbelianGroup) -> "AbelianHom":
        return cls(group, group, matrix=identity(group.ngens))

    @classmethod
    def zero(cls, domain, codomain) -> "AbelianHom":
        return cls(domain, codomain, matrix=((0,) * domain.ngens,) * codomain.ngens)

    def images(self) -> list[AbelianElement]:
        cols = transpose(self.matrix) if self.matrix else ((),) * self.domain.ngens
        if not self.codomain.ngens:
            cols = [()] * self.domain.ngens
        return [AbelianElement(self.codomain, c) for c in cols]

    def __call__(self, x: AbelianElement) -> AbelianElement:
        if x.group != self.domain:
            raise LatticeError("argument outside the domain")
        return AbelianElement(self.codomain, matvec(self.matrix, x.coords) if self.matrix
                              else ())

    def __matmul__(self, other: "AbelianHom") -> "AbelianHom":
        """self after other."""
        if other.codomain != self.domain:
            raise LatticeError("incompatible homomorphisms")
        if not self.matrix or not other.matrix:
            return AbelianHom.zero(other.domain, self.codomain)
        return AbelianHom(other.domain, self.codomain, matrix=matmul(self.matrix, other.matrix))

    def __eq__(self, other):
        return (isinstance(other, AbelianHom) and self.domain == other.domain
                and self.codomain == other.codomain and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.domain, self.codomain, self.matrix))

    def kernel(self) -> tuple[FiniteAbelianGroup, list[AbelianElement]]:
        """Kernel as an abstract group plus its elements (small groups)."""
        elems = [x for x in self.domain.elements() if self(x).is_zero]
        return _group_from_elements(elems, self.domain), elems

    def image(self) -> list[AbelianElement]:
        seen = {self(x).coords for x in self.domain.elements()}
        return [AbelianElement(self.codomain, c) for c in sorted(seen)]

    def is_surjective(self) -> bool:
        return self._image_order() == self.codomain.order

    def is_injective(self) -> bool:
        return self._image_order() == self.domain.order

    def is_isomorphism(self) -> bool:
        return self.domain.order == self.codomain.order and self.is_surjective()

    def _image_order(self) -> int:
        # |im| = |Z^m / (relations + preimage lattice)|, computed via a presentation
        m, n = self.codomain.ngens, self.domain.ngens
        rel = [[d if i == j else 0 for j in range(m)] for i, d in enumerate(self.codomain.invariant_factors)]
        gens = [list(r) for r in transpose(self.matrix)] if self.matrix else [[0] * m for _ in range(n)]
        if not m:
            return 1
        _, tors = cokernel(rel + gens, m)
        return self.codomain.order // tors.order


def _group_from_elements(elems, ambient: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """Abstract structure of a subgroup from its element list."""
    if len(elems) <= 1:
        return FiniteAbelianGroup(())
    m = ambient.ngens
    rel = [[d if i == j else 0 for j in range(m)] for i, d in enumerate(ambient.invariant_factors)]
    sub = [list(e.coords) for e in elems]
    # subgroup S of A: S is finite, its structure is Z^k / relations. Use the
    # lattice L = preimage of S in Z^m; S ~ L / R. Compute via SNF of L basis.
    lat = _hnf_basis(sub + rel)
    # coordinates of R generators in terms of the basis of L
    inv = rational_inverse(lat)
    rel_coords = [[int(x) for x in matvec(transpose(inv), r)] for r in rel]
    _, tors = cokernel(rel_coords, len(lat))
    return tors


def _hnf_basis(vectors) -> IntMatrix:
    """A Z-basis of the full-rank lattice spanned by vectors."""
    snf = smith_normal_form(vectors)
    # vectors = U^-1 D V^-1, so the nonzero rows of D V^-1 span the same lattice
    vinv = inverse_unimodular(snf.V)
    return tuple(tuple(d * x for x in vinv[i]) for i, d in enumerate(snf.diagonal) if d)


def hom_compose(f: AbelianHom, g: AbelianHom) -> AbelianHom:
    """f after g."""
    return f @ g


def hom_apply(f: AbelianHom, x: AbelianElement) -> AbelianElement:
    return f(x)


def group_equal(a: FiniteAbelianGroup, b: FiniteAbelianGroup) -> bool:
    return a.invariant_factors == b.invariant_factors
