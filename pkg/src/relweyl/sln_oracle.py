"""Exact matrix checks in SL_n and GL_2, independent of the lattice machinery.

Matrices are tuples of rows over an exact field: ``Fraction`` for Q, or
:class:`GFElement` for a prime field. Polynomials are coefficient lists,
constant term first.

Pinning: B is lower triangular, T diagonal, x_{alpha_i}(a) = 1 + a E_{i+1,i},
J_d is lower bidiagonal, v = diag(J_d, ..., J_d), and
tau(z) = diag(1_d, ..., 1_d, z 1_d).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import prod
from typing import Callable, Sequence

from .lattice_core import AbelianElement, FiniteAbelianGroup
from .root_datum import build_simply_connected
from .companion import chi_characters

__all__ = [
    "OracleError",
    "GF",
    "GFElement",
    "RATIONALS",
    "Field",
    "companion_matrix",
    "charpoly",
    "transition_basis",
    "transition_matrix",
    "block_regular",
    "verify_det_identity",
    "verify_multiplication_matrix",
    "verify_class",
    "class_of",
    "verify_inverse_omega",
    "gl2_w_action",
    "random_o_point",
    "signature",
]


class OracleError(ValueError):
    """Precondition failure, or a structural mismatch in a matrix identity."""


# ------------------------------------------------------------------ fields

class GFElement:
    __slots__ = ("v", "q")

    def __init__(self, v: int, q: int):
        self.v = v % q
        self.q = q

    def _coerce(self, other) -> "GFElement":
        if isinstance(other, GFElement):
            if other.q != self.q:
                raise OracleError("mixing different prime fields")
            return other
        if isinstance(other, int):
            return GFElement(other, self.q)
        if isinstance(other, Fraction):
            return GFElement(other.numerator, self.q) / GFElement(other.denominator, self.q)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        return GFElement(self.v + o.v, self.q)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return GFElement(self.v - o.v, self.q)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        return GFElement(self.v * o.v, self.q)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        if o.v == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.q)
        return GFElement(self.v * pow(o.v, -1, self.q), self.q)

    def __rtruediv__(self, o):
        return self._coerce(o) / self

    def __neg__(self):
        return GFElement(-self.v, self.q)

    def __pow__(self, e: int):
        if e < 0:
            return (GFElement(1, self.q) / self) ** (-e)
        return GFElement(pow(self.v, e, self.q), self.q)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, GFElement)):
            o = self._coerce(o)
            return self.v == o.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.q))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.q}"


@dataclass(frozen=True)
class Field:
    """Q when ``q`` is None, otherwise the prime field with q elements."""

    q: int | None = None

    def __post_init__(self):
        if self.q is not None and (self.q < 2 or any(self.q % k == 0 for k in range(2, int(self.q ** 0.5) + 1))):
            raise OracleError(f"{self.q} is not prime")

    def __call__(self, x) -> "Fraction | GFElement":
        if self.q is None:
            return Fraction(x)
        if isinstance(x, GFElement):
            return x
        return GFElement(0, self.q) + x

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __str__(self):
        return "Q" if self.q is None else f"GF({self.q})"

    def random_unit(self, rng: random.Random):
        if self.q is None:
            num = rng.choice([-1, 1]) * rng.randint(1, 9)
            return Fraction(num, rng.randint(1, 9))
        return self(rng.randint(1, self.q - 1))

    def root_of_unity(self, d: int):
        """A primitive d-th root of unity, or None if the field has none."""
        if d == 1:
            return self.one
        if self.q is None:
            return Fraction(-1) if d == 2 else None
        if (self.q - 1) % d:
            return None
        for g in range(2, self.q):
            x = self(g) ** ((self.q - 1) // d)
            if all(x ** (d // f) != 1 for f in _prime_factors(d)):
                return x
        return None


RATIONALS = Field(None)


def GF(q: int) -> Field:
    return Field(q)


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------- linear algebra

def _zeros(n, m, F):
    return [[F.zero] * m for _ in range(n)]


def mat_identity(n: int, F: Field = RATIONALS):
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), 0 * row[0]) for col in bt) for row in a)


def mat_det(m):
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, out = 1, a[0][0] ** 0
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0 * out
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        out = out * a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return out * sign


def mat_inv(m):
    n = len(m)
    one = m[0][0] ** 0
    a = [list(r) + [one if i == j else 0 * one for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise OracleError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = one / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(r[n:]) for r in a)


def _rank(rows) -> int:
    a = [list(r) for r in rows]
    rank, ncols = 0, len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def charpoly(m) -> list:
    """det(X - m), constant term first. Division free (Berkowitz)."""
    n = len(m)
    one = m[0][0] ** 0
    zero = 0 * one
    c = [one]  # highest degree first while building
    for r in range(n):
        a = m[r][r]
        row = [m[r][j] for j in range(r)]
        col = [m[i][r] for i in range(r)]
        t = [one, -a]
        vec = col
        for _ in range(r):
            t.append(-sum((x * y for x, y in zip(row, vec)), zero))
            vec = [sum((m[i][j] * vec[j] for j in range(r)), zero) for i in range(r)]
        c = [sum((t[i - j] * c[j] for j in range(len(c)) if 0 <= i - j < len(t)), zero)
             for i in range(r + 2)]
    return c[::-1]


# ------------------------------------------------------------- polynomials

def _pmul(a, b):
    zero = 0 * a[0]
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def _ppow(a, e: int, one):
    out = [one]
    for _ in range(e):
        out = _pmul(out, a)
    return out


def companion_matrix(poly: Sequence) -> tuple:
    """Multiplication by X on F[X]/(P) in the basis 1, X, ..., X^(n-1).

    ``poly`` lists a_0, ..., a_{n-1}, 1 and must have a_0 = (-1)^n.
    """
    n = len(poly) - 1
    if n < 1 or poly[-1] != 1:
        raise OracleError("P must be monic of positive degree")
    if poly[0] != (-1) ** n:
        raise OracleError("P(0) must equal (-1)^n")
    one = poly[-1] ** 0 if not isinstance(poly[-1], int) else Fraction(1)
    zero = 0 * one
    rows = [[zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = one
    for i in range(n):
        rows[i][n - 1] = -poly[i] * one
    return tuple(tuple(r) for r in rows)


# ----------------------------------------------------------------- O-set

def _check_o_point(z: Sequence) -> None:
    if not z:
        raise OracleError("z must be non-empty")
    if any(x == 0 for x in z):
        raise OracleError("z_i must be non-zero")
    if prod(z[1:], start=z[0]) != 1:
        raise OracleError("z_1 ... z_k must equal 1")
    if len(set(z)) != len(z):
        raise OracleError("z_i must be pairwise distinct")


def random_o_point(k: int, F: Field, rng: random.Random, tries: int = 1000) -> tuple:
    for _ in range(tries):
        head = [F.random_unit(rng) for _ in range(k - 1)]
        last = F.one / prod(head, start=F.one)
        z = tuple(head + [last])
        if len(set(z)) == k:
            return z
    raise OracleError(f"no point of O found in {F} for k = {k}")


def delta(z: Sequence):
    out = z[0] ** 0
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            out = out * (z[i] - z[j])
    return out


def transition_basis(z: Sequence, d: int) -> list[list]:
    """P_{z,(i-1)d+j} = z_i^(d-j) (X - z_i)^(j-1) prod_{s != i} (X - z_s)^d, as length-n lists."""
    _check_o_point(z)
    one = z[0] ** 0
    n = len(z) * d
    out = []
    for i, zi in enumerate(z):
        rest = [one]
        for s, zs in enumerate(z):
            if s != i:
                rest = _pmul(rest, _ppow([-zs, one], d, one))
        for j in range(1, d + 1):
            p = _pmul(_ppow([-zi, one], j - 1, one), rest)
            p = [c * zi ** (d - j) for c in p]
            out.append(p + [0 * one] * (n - len(p)))
    return out


def transition_matrix(z: Sequence, d: int) -> tuple:
    """phi'(z): column r holds P_{z,r} in the basis 1, X, ..., X^(n-1)."""
    cols = transition_basis(z, d)
    return tuple(zip(*cols))


def block_regular(z: Sequence, d: int) -> tuple:
    """d(z) v = diag(z_1 J_d, ..., z_k J_d)."""
    one = z[0] ** 0
    n = len(z) * d
    rows = [[0 * one] * n for _ in range(n)]
    for i, zi in enumerate(z):
        for j in range(d):
            rows[i * d + j][i * d + j] = zi
            if j:
                rows[i * d + j][i * d + j - 1] = zi
    return tuple(tuple(r) for r in rows)


def _p_z(z: Sequence, d: int) -> list:
    one = z[0] ** 0
    p = [one]
    for zi in z:
        p = _pmul(p, _ppow([-zi, one], d, one))
    return p


def verify_multiplication_matrix(z: Sequence, d: int) -> bool:
    """phi'(z) (d(z) v) phi'(z)^-1 == M(P_z)."""
    f = transition_matrix(z, d)
    lhs = mat_mul(mat_mul(f, block_regular(z, d)), mat_inv(f))
    return lhs == companion_matrix(_p_z(z, d))


def verify_det_identity(z: Sequence, d: int) -> bool:
    """det phi'(z) == delta(z)^(d^2)."""
    return mat_det(transition_matrix(z, d)) == delta(z) ** (d * d)


# ------------------------------------------------------------------- class

def signature(w: Sequence[int]) -> int:
    seen, sign = set(), 1
    for s in range(len(w)):
        if s in seen:
            continue
        j, length = s, 0
        while j not in seen:
            seen.add(j)
            j = w[j]
            length += 1
        sign *= (-1) ** (length - 1)
    return sign


def _tau(x, k: int, d: int, one):
    n = k * d
    return tuple(tuple((x if i >= n - d else one) if i == j else 0 * one for j in range(n))
                 for i in range(n))


def _block_perm(w: Sequence[int], d: int, one):
    """w_bar: block j goes to block w[j]."""
    k = len(w)
    n = k * d
    rows = [[0 * one] * n for _ in range(n)]
    for j in range(k):
        for t in range(d):
            rows[w[j] * d + t][j * d + t] = one
    return tuple(tuple(r) for r in rows)


def _phi(z, d):
    one = z[0] ** 0
    return mat_mul(transition_matrix(z, d), _tau(delta(z) ** (-d), len(z), d, one))


def class_of(w: Sequence[int], z: Sequence, d: int):
    """Class in μ_d of C = phi(z)^-1 phi(^w z) w_dot, with w_dot = w_bar tau(eps(w)).

    C must centralise d(z) v, so each diagonal block is a lower Toeplitz
    polynomial in J_d; the class is the product of the block constant terms.
    """
    k = len(z)
    if sorted(w) != list(range(k)):
        raise OracleError("w must be a permutation of 0..k-1")
    _check_o_point(z)
    one = z[0] ** 0
    wz = [None] * k
    for j in range(k):
        wz[w[j]] = z[j]
    wdot = mat_mul(_block_perm(w, d, one), _tau(one * signature(w), k, d, one))
    c = mat_mul(mat_mul(mat_inv(_phi(z, d)), _phi(wz, d)), wdot)
    out = one
    n = k * d
    for i in range(k):
        lo = i * d
        for r in range(n):
            for s in range(n):
                if (lo <= r < lo + d) != (lo <= s < lo + d) and (r // d == i or s // d == i) and c[r][s]:
                    raise OracleError("C is not block diagonal")
        for r in range(d):
            for s in range(d):
                x = c[lo + r][lo + s]
                if s > r and x:
                    raise OracleError("C block is not lower triangular")
                if s <= r and x != c[lo + r - s][lo]:
                    raise OracleError("C block is not Toeplitz")
        out = out * c[lo][lo]
    return out


def _mu_log(x, d: int, F: Field) -> int:
    if x ** d != 1:
        raise OracleError("class is not a d-th root of unity")
    if x == 1:
        return 0
    if x == -1 and d % 2 == 0:
        return d // 2
    root = F.root_of_unity(d)
    if root is None:
        raise OracleError(f"{F} has no primitive {d}-th root of unity")
    for m in range(d):
        if root ** m == x:
            return m
    raise OracleError("discrete log failed")


def verify_class(w: Sequence[int], z: Sequence, d: int, F: Field = RATIONALS) -> AbelianElement:
    """The class of C in μ_d ≅ Z/d, checked against eps(w)^(d-1).

    >>> verify_class((1, 0), (Fraction(2), Fraction(1, 2)), 2)
    [1] in Z/2
    """
    x = class_of(w, [F(t) for t in z], d)
    m = _mu_log(x, d, F)
    expected = 0 if signature(w) == 1 or d % 2 else d // 2
    if m != expected:
        raise OracleError(f"class {m} differs from eps(w)^(d-1) = {expected}")
    return FiniteAbelianGroup([d]).element([m]) if d > 1 else FiniteAbelianGroup().zero()


# ----------------------------------------------------------- inverse omega

def _elementary(n: int, i: int, j: int, a, one):
    return tuple(tuple(one if r == s else (a if (r, s) == (i, j) else 0 * one) for s in range(n))
                 for r in range(n))


def verify_inverse_omega(t: Sequence, F: Field = RATIONALS) -> bool:
    """g = t x_{-w0 alpha_1}(chi_1(t)) ... x_{-w0 alpha_r}(chi_r(t)) is a regular conjugate of t.

    Checks det(X - g) = det(X - t) and that g is cyclic, i.e. conjugate to
    the companion matrix of that polynomial.
    """
    t = [F(x) for x in t]
    n = len(t)
    if n < 2:
        raise OracleError("n must be at least 2")
    if prod(t, start=F.one) != 1:
        raise OracleError("det t must be 1")
    if len(set(t)) != n:
        raise OracleError("t is not regular")
    one = F.one
    rd = build_simply_connected(f"A{n - 1}")
    chi = chi_characters(rd).chi
    pref = [prod(t[:i + 1], start=one) for i in range(n - 1)]  # varpi_i(t)
    g = tuple(tuple(t[i] if i == j else 0 * one for j in range(n)) for i in range(n))
    for i in range(1, n):
        val = prod((pref[j] ** e for j, e in enumerate(chi[i - 1])), start=one)
        node = n - i  # -w0(alpha_i) = alpha_{n-i}
        g = mat_mul(g, _elementary(n, node, node - 1, val, one))
    diag_poly = [one]
    for x in t:
        diag_poly = _pmul(diag_poly, [-x, one])
    if charpoly(g) != diag_poly:
        return False
    powers, cur = [], mat_identity(n, F)
    for _ in range(n):
        powers.append([x for row in cur for x in row])
        cur = mat_mul(cur, g)
    return _rank(powers) == n  # minimal polynomial of degree n


# ---------------------------------------------------------------- GL_2

def gl2_w_action(g: Sequence[Sequence], point: Sequence) -> tuple:
    """Right action of the non-trivial element of W on (g, [x:y]).

    Uses (b x, (d - a) x - b y) when non-zero, else ((a - d) y - c x, c y).
    The result is normalised so the last non-zero coordinate is 1.
    """
    (a, b), (c, d) = g
    x, y = point
    if b == 0 and c == 0 and a == d:
        raise OracleError("g is central")
    if x == 0 and y == 0:
        raise OracleError("[0:0] is not a point")
    gx, gy = a * x + b * y, c * x + d * y
    if gx * y - gy * x != 0:
        raise OracleError("g does not fix the point")
    first = (b * x, (d - a) * x - b * y)
    if first != (0, 0):
        return _normalise_point(first)
    second = ((a - d) * y - c * x, c * y)
    if second != (0, 0):
        return _normalise_point(second)
    raise OracleError("both formulas vanish")


def gl2_w_branches(g, point) -> list[tuple]:
    """All defined branch values, normalised; used to test that they agree."""
    (a, b), (c, d) = g
    x, y = point
    out = []
    for cand in ((b * x, (d - a) * x - b * y), ((a - d) * y - c * x, c * y)):
        if cand != (0, 0):
            out.append(_normalise_point(cand))
    return out


def _normalise_point(p: tuple) -> tuple:
    x, y = p
    if y != 0:
        return (x / y, y / y)
    return (x / x, 0 * x)
