"""GL_n root datum, the Weyl group S_n, Demazure products and minors.

Permutation convention (used everywhere in the package): a Weyl element is
stored in one-line notation ``w = (w(1), ..., w(n))``, products compose as
functions ``(uv)(j) = u(v(j))``, and ``w`` acts on ``Z^n`` by
``w e_j = e_{w(j)}``.  The simple reflection ``s_i`` swaps ``i`` and ``i+1``,
so ``from_word((i1, ..., il)) = s_{i1} ... s_{il}``.

Matrices are tuples of row tuples over any exact scalar type supporting
``+ - * /`` and comparison with ``0``; this covers ``int``, ``Fraction`` and
:class:`~geocrystal.exact_algebra.RationalFunction`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

__all__ = [
    "RootDatum",
    "WeylElement",
    "SignedRepresentative",
    "demazure_star",
    "parabolic_element",
    "levi_monoid_star",
    "generalized_minor",
    "iota",
    "sigma",
    "s_bar",
    "w_bar",
    "matmul",
    "identity",
    "det",
    "inverse",
    "transpose",
    "is_dominant",
    "default_word",
    "parse_word",
]


class RootDatum:
    """Root datum of GL_n: ``alpha_i = e_i - e_{i+1}``, pairing = dot product."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("rank must be positive")
        self.n = n

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(range(1, self.n))

    def simple_root(self, i: int) -> tuple[int, ...]:
        if not 1 <= i < self.n:
            raise ValueError(f"node {i} outside 1..{self.n - 1}")
        v = [0] * self.n
        v[i - 1], v[i] = 1, -1
        return tuple(v)

    simple_coroot = simple_root

    def positive_roots(self) -> list[tuple[int, ...]]:
        out = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                v = [0] * self.n
                v[a], v[b] = 1, -1
                out.append(tuple(v))
        return out

    positive_coroots = positive_roots

    @staticmethod
    def pairing(x: Sequence[int], y: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(x, y))

    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.pairing(self.simple_root(i), self.simple_coroot(j)) for j in self.index_set)
            for i in self.index_set
        )

    def fundamental_weight(self, i: int) -> tuple[int, ...]:
        return tuple(1 if k < i else 0 for k in range(self.n))

    def __eq__(self, other):
        return isinstance(other, RootDatum) and other.n == self.n

    def __hash__(self):
        return hash(("GL", self.n))

    def __repr__(self):
        return f"RootDatum(GL_{self.n})"


def is_dominant(lam: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(lam, lam[1:]))


class WeylElement:
    """A permutation of ``{1..n}`` in one-line notation."""

    __slots__ = ("perm",)

    def __init__(self, perm: Sequence[int]):
        perm = tuple(int(x) for x in perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"{perm} is not a permutation of 1..{len(perm)}")
        self.perm = perm

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(range(1, n + 1))

    @classmethod
    def simple(cls, n: int, i: int) -> "WeylElement":
        if not 1 <= i < n:
            raise ValueError(f"node {i} outside 1..{n - 1}")
        p = list(range(1, n + 1))
        p[i - 1], p[i] = p[i], p[i - 1]
        return cls(p)

    @classmethod
    def longest(cls, n: int) -> "WeylElement":
        return cls(range(n, 0, -1))

    @classmethod
    def from_word(cls, n: int, word: Iterable[int]) -> "WeylElement":
        w = cls.identity(n)
        for i in word:
            w = w * cls.simple(n, i)
        return w

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, j: int) -> int:
        return self.perm[j - 1]

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if other.n != self.n:
            raise ValueError("rank mismatch")
        return WeylElement(self.perm[other.perm[j] - 1] for j in range(self.n))

    def inverse(self) -> "WeylElement":
        inv = [0] * self.n
        for j, wj in enumerate(self.perm, start=1):
            inv[wj - 1] = j
        return WeylElement(inv)

    def length(self) -> int:
        p = self.perm
        return sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])

    def has_right_descent(self, i: int) -> bool:
        return self.perm[i - 1] > self.perm[i]

    def reduced_word(self) -> tuple[int, ...]:
        """Reduced word, peeling the smallest right descent each time."""
        word: list[int] = []
        w = self
        while True:
            i = next((i for i in range(1, self.n) if w.has_right_descent(i)), None)
            if i is None:
                return tuple(reversed(word))
            word.append(i)
            w = w * WeylElement.simple(self.n, i)

    def act(self, v: Sequence[int]) -> tuple[int, ...]:
        """``(w v)_{w(j)} = v_j``."""
        out = [0] * self.n
        for j, x in enumerate(v, start=1):
            out[self(j) - 1] = x
        return tuple(out)

    def inversions(self) -> list[tuple[int, ...]]:
        """Positive roots sent to negative roots: ``R_+ cap w^{-1}(-R_+)``."""
        rd = RootDatum(self.n)
        return [a for a in rd.positive_roots() if _is_negative(self.act(a))]

    def left_inversions(self) -> list[tuple[int, ...]]:
        """``R_+ cap w(-R_+)``, i.e. positive roots made negative by ``w^{-1}``."""
        return self.inverse().inversions()

    def __eq__(self, other):
        return isinstance(other, WeylElement) and other.perm == self.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"WeylElement({list(self.perm)})"


def _is_negative(v: Sequence[int]) -> bool:
    first = next(x for x in v if x)
    return first < 0


def all_elements(n: int) -> list[WeylElement]:
    from itertools import permutations

    return [WeylElement(p) for p in permutations(range(1, n + 1))]


def is_reduced(n: int, word: Sequence[int]) -> bool:
    return WeylElement.from_word(n, word).length() == len(word)


def default_word(n: int) -> tuple[int, ...]:
    """The reduced word ``(1, 2,1, 3,2,1, ...)`` of ``w0``."""
    out: list[int] = []
    for k in range(1, n):
        out.extend(range(k, 0, -1))
    return tuple(out)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(p) for p in text.split(","))


# -- Demazure product ---------------------------------------------------------


def _star_simple(w: WeylElement, i: int) -> WeylElement:
    s = WeylElement.simple(w.n, i)
    ws = w * s
    return ws if ws.length() > w.length() else w


def demazure_star(w: WeylElement, w2: WeylElement) -> WeylElement:
    """Demazure product, ``w * s_i`` if that is longer, else ``w``, over
    a reduced word of ``w2``."""
    if w.n != w2.n:
        raise ValueError("rank mismatch")
    out = w
    for i in w2.reduced_word():
        out = _star_simple(out, i)
    return out


def parabolic_element(n: int, J: Iterable[int]) -> tuple[WeylElement, WeylElement]:
    """``(w0^P, w_P)`` with ``w0^P`` longest in ``<s_j : j in J>`` and
    ``w_P = w0^P w0``."""
    J = sorted(set(J))
    for j in J:
        if not 1 <= j < n:
            raise ValueError(f"node {j} outside 1..{n - 1}")
    # Longest element of the parabolic subgroup reverses each block.
    perm = list(range(1, n + 1))
    blocks = _blocks(n, J)
    for lo, hi in blocks:
        perm[lo - 1:hi] = list(range(hi, lo - 1, -1))
    w0p = WeylElement(perm)
    return w0p, w0p * WeylElement.longest(n)


def _blocks(n: int, J: Sequence[int]) -> list[tuple[int, int]]:
    """Maximal intervals ``[lo, hi]`` of ``{1..n}`` joined by nodes of J."""
    js = set(J)
    blocks = []
    lo = 1
    for k in range(1, n):
        if k not in js:
            blocks.append((lo, k))
            lo = k + 1
    blocks.append((lo, n))
    return blocks


@lru_cache(maxsize=None)
def _wp_table(n: int) -> dict:
    idx = range(1, n)
    table = {}
    for r in range(n):
        for J in combinations(idx, r):
            table[parabolic_element(n, J)[1]] = frozenset(J)
    return table


def levi_monoid_star(n: int, J: Iterable[int], J2: Iterable[int]) -> frozenset:
    """``J''`` with ``w_{P(J)} * w_{P(J')} = w_{P(J'')}`` (Demazure product)."""
    _, a = parabolic_element(n, J)
    _, b = parabolic_element(n, J2)
    prod = demazure_star(a, b)
    table = _wp_table(n)
    if prod not in table:
        raise RuntimeError(f"Demazure product {prod} of parabolic elements is not parabolic")
    return table[prod]


# -- generic matrices ---------------------------------------------------------


def identity(n: int, one=1, zero=0):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                x, y = a[i][k], b[k][j]
                if _is_zero(x) or _is_zero(y):
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else a[i][0] * 0)
        out.append(tuple(row))
    return tuple(out)


def _is_zero(x) -> bool:
    return x == 0


def det(a):
    """Determinant by Laplace expansion along rows, memoized on column sets."""
    n = len(a)
    if n == 0:
        return 1
    memo: dict[tuple[int, frozenset], object] = {}

    def rec(row: int, cols: tuple[int, ...]):
        if row == n:
            return 1
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, c in enumerate(cols):
            x = a[row][c]
            if _is_zero(x):
                continue
            sub = rec(row + 1, cols[:pos] + cols[pos + 1:])
            if _is_zero(sub):
                continue
            t = x * sub
            if pos % 2:
                t = -t
            acc = t if acc is None else acc + t
        res = acc if acc is not None else a[0][0] * 0
        memo[key] = res
        return res

    return rec(0, tuple(range(n)))


def submatrix(a, rows: Sequence[int], cols: Sequence[int]):
    return tuple(tuple(a[r][c] for c in cols) for r in rows)


def inverse(a):
    """Gauss-Jordan inverse with exact zero tests."""
    n = len(a)
    one = _unit_like(a)
    zero = one * 0
    m = [list(a[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not _is_zero(m[r][c])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv if not _is_zero(x) else x for x in m[c]]
        for r in range(n):
            if r != c and not _is_zero(m[r][c]):
                f = m[r][c]
                m[r] = [x - f * y if not _is_zero(y) else x for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def _unit_like(a):
    for row in a:
        for x in row:
            if not _is_zero(x):
                return x ** 0 if hasattr(x, "__pow__") else 1
    return 1


# -- standard representatives -------------------------------------------------


class SignedRepresentative:
    """The matrix ``w_bar = s_bar_{i1} ... s_bar_{il}`` over a reduced word."""

    __slots__ = ("element", "matrix")

    def __init__(self, element: WeylElement, word: Sequence[int] | None = None):
        if word is None:
            word = element.reduced_word()
        if WeylElement.from_word(element.n, word) != element or len(word) != element.length():
            raise ValueError(f"{tuple(word)} is not a reduced word of {element}")
        self.element = element
        m = identity(element.n)
        for i in word:
            m = matmul(m, s_bar(element.n, i))
        self.matrix = m

    def column_sign(self, j: int) -> int:
        """Sign of the unique nonzero entry in column ``j`` (row ``w(j)``)."""
        return self.matrix[self.element(j) - 1][j - 1]

    def inverse_matrix(self):
        return transpose(self.matrix)


def s_bar(n: int, i: int):
    """``phi_i((0, -1), (1, 0))``."""
    m = [list(r) for r in identity(n)]
    a, b = i - 1, i
    m[a][a] = 0
    m[b][b] = 0
    m[a][b] = -1
    m[b][a] = 1
    return tuple(tuple(r) for r in m)


@lru_cache(maxsize=None)
def _w_bar_cached(perm: tuple[int, ...]):
    return SignedRepresentative(WeylElement(perm)).matrix


def w_bar(w: WeylElement):
    return _w_bar_cached(w.perm)


def generalized_minor(g, u: WeylElement, v: WeylElement, i: int):
    """``Delta_{u omega_i, v omega_i}(g)``: leading ``i x i`` minor of
    ``u_bar^{-1} g v_bar``."""
    n = len(g)
    if not (1 <= i <= n and u.n == n and v.n == n):
        raise ValueError("index or rank mismatch")
    su = SignedRepresentative(u)
    sv = SignedRepresentative(v)
    rows = [u(a) - 1 for a in range(1, i + 1)]
    cols = [v(b) - 1 for b in range(1, i + 1)]
    sign = 1
    for a in range(1, i + 1):
        sign *= su.column_sign(a) * sv.column_sign(a)
    d = det(submatrix(g, rows, cols))
    return d if sign == 1 else -d


def iota(g):
    """Positive inverse ``D g^{-1} D`` with ``D = diag((-1)^i)``."""
    inv = inverse(g)
    n = len(g)
    return tuple(
        tuple(inv[i][j] if (i + j) % 2 == 0 else -inv[i][j] for j in range(n)) for i in range(n)
    )


def sigma(g):
    """``w0_bar . iota(g)^{-1} . w0_bar^{-1}``, i.e. ``w0_bar D g D w0_bar^{-1}``."""
    n = len(g)
    w0 = w_bar(WeylElement.longest(n))
    dgd = tuple(
        tuple(g[i][j] if (i + j) % 2 == 0 else -g[i][j] for j in range(n)) for i in range(n)
    )
    return matmul(matmul(w0, dgd), transpose(w0))
