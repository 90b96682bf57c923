"""Newton polytopes, virtual polytopes and tropicalization.

A tropical function is stored as a virtual polytope ``[P] - [Q]`` and
evaluated as the support-function difference

    Trop(f)(x) = min_{p in P} <p, x> - min_{q in Q} <q, x>

(min convention throughout).  ``phi~`` and ``eps~`` style max-quantities are
obtained by negation at the call site.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .exact_algebra import RationalFunction, certify_positive

__all__ = [
    "NewtonPolytope",
    "VirtualPolytope",
    "TropicalFunction",
    "TropicalMap",
    "newton",
    "trop",
    "trop_map",
    "minkowski_ops",
    "HULL_PRUNE_MAX_DIM",
]

# Vertex pruning is exact but costs one LP per candidate point; above this
# dimension the full support is kept (evaluation is unaffected).
HULL_PRUNE_MAX_DIM = 8


def _solve_exact(columns: list[tuple[int, ...]], target: tuple[int, ...]):
    """Solve ``sum w_j [col_j; 1] = [target; 1]`` exactly; ``None`` if singular."""
    rows = len(target) + 1
    m = len(columns)
    a = [[Fraction(columns[j][r]) if r < len(target) else Fraction(1) for j in range(m)]
         + [Fraction(target[r]) if r < len(target) else Fraction(1)] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(a[i][m] != 0 for i in range(r, rows)):
        return None
    w = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        w[c] = a[i][m]
    return w


def _in_hull_of(p: np.ndarray, others: np.ndarray) -> bool:
    """Exact proof that ``p`` lies in the convex hull of ``others``."""
    if len(others) == 0:
        return False
    n = others.shape[0]
    a_eq = np.vstack([others.T.astype(float), np.ones((1, n))])
    b_eq = np.concatenate([p.astype(float), [1.0]])
    res = linprog(np.zeros(n), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        return False
    support = [j for j in range(n) if res.x[j] > 1e-9]
    cols = [tuple(int(v) for v in others[j]) for j in support]
    w = _solve_exact(cols, tuple(int(v) for v in p))
    if w is None or any(x < 0 for x in w):
        return False
    dim = len(p)
    for r in range(dim):
        if sum(wj * c[r] for wj, c in zip(w, cols)) != p[r]:
            return False
    return sum(w) == 1


def _vertices(points: np.ndarray, force: bool = False) -> np.ndarray:
    pts = np.unique(np.asarray(points, dtype=np.int64), axis=0)
    k, dim = pts.shape
    if k <= 2 or (dim > HULL_PRUNE_MAX_DIM and not force):
        return pts
    # Unique minimizers of integer covectors are vertices; only the rest
    # need an LP.
    certain = np.zeros(k, dtype=bool)
    rng = np.random.default_rng(12345)
    dirs = [np.eye(dim, dtype=np.int64)[i] * s for i in range(dim) for s in (1, -1)]
    dirs += list(rng.integers(-7, 8, size=(4 * dim + 8, dim)))
    for d in dirs:
        vals = pts @ d
        lo = vals.min()
        hit = np.flatnonzero(vals == lo)
        if len(hit) == 1:
            certain[hit[0]] = True
    keep = np.ones(k, dtype=bool)
    for j in range(k):
        if certain[j]:
            continue
        mask = keep.copy()
        mask[j] = False
        if _in_hull_of(pts[j], pts[mask]):
            keep[j] = False
    return pts[keep]


class NewtonPolytope:
    """Lattice polytope stored by its vertex set (full support above the
    pruning dimension)."""

    __slots__ = ("points",)

    def __init__(self, points, prune: bool = True):
        arr = np.asarray(points, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValueError("a Newton polytope needs at least one point")
        self.points = _vertices(arr) if prune else np.unique(arr, axis=0)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def vertex_set(self) -> frozenset:
        return frozenset(tuple(int(v) for v in row) for row in _vertices(self.points, force=True))

    def support(self, x) -> np.ndarray:
        """``min_p <p, x>`` for a covector or a batch of covectors."""
        x = np.asarray(x, dtype=np.int64)
        return (x @ self.points.T).min(axis=-1)

    def __add__(self, other: "NewtonPolytope") -> "NewtonPolytope":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        sums = (self.points[:, None, :] + other.points[None, :, :]).reshape(-1, self.dim)
        return NewtonPolytope(sums)

    def join(self, other: "NewtonPolytope") -> "NewtonPolytope":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return NewtonPolytope(np.vstack([self.points, other.points]))

    def __eq__(self, other):
        if not isinstance(other, NewtonPolytope):
            return NotImplemented
        return self.dim == other.dim and self.vertex_set() == other.vertex_set()

    def __hash__(self):
        return hash(self.vertex_set())

    def __repr__(self):
        return f"NewtonPolytope({sorted(self.vertex_set())})"


class VirtualPolytope:
    """Formal difference ``[plus] - [minus]`` in the Grothendieck group."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus: NewtonPolytope, minus: NewtonPolytope):
        if plus.dim != minus.dim:
            raise ValueError("dimension mismatch")
        self.plus = plus
        self.minus = minus

    @property
    def dim(self) -> int:
        return self.plus.dim

    def __eq__(self, other):
        if not isinstance(other, VirtualPolytope):
            return NotImplemented
        return (self.plus + other.minus) == (other.plus + self.minus)

    def __hash__(self):
        raise TypeError("virtual polytopes are unhashable (equality is up to cancellation)")

    def __add__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return VirtualPolytope(self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "VirtualPolytope":
        return VirtualPolytope(self.minus, self.plus)

    def __sub__(self, other):
        return self + (-other)

    def vee(self, other: "VirtualPolytope") -> "VirtualPolytope":
        """``([P]-[Q]) v ([P']-[Q']) = [(P+Q') v (P'+Q)] - [Q+Q']``."""
        top = (self.plus + other.minus).join(other.plus + self.minus)
        return VirtualPolytope(top, self.minus + other.minus)

    def support(self, x):
        return self.plus.support(x) - self.minus.support(x)

    def __repr__(self):
        return f"VirtualPolytope(plus={self.plus!r}, minus={self.minus!r})"


def minkowski_ops(p: VirtualPolytope, q: VirtualPolytope, op: str) -> VirtualPolytope:
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    if op == "sum":
        return p + q
    if op == "vee":
        return p.vee(q)
    raise ValueError(f"unknown operation {op!r}")


def _point_array(x, variables: Sequence[str]) -> np.ndarray:
    if isinstance(x, Mapping):
        return np.array([x.get(v, 0) for v in variables], dtype=np.int64)
    return np.asarray(x, dtype=np.int64)


class TropicalFunction:
    """Piecewise-linear function ``chi_P - chi_Q`` on covectors indexed by
    ``variables``."""

    __slots__ = ("variables", "polytope")

    def __init__(self, variables: Sequence[str], polytope: VirtualPolytope):
        self.variables = tuple(variables)
        if polytope.dim != len(self.variables):
            raise ValueError("polytope dimension does not match the variables")
        self.polytope = polytope

    @property
    def plus(self) -> np.ndarray:
        return self.polytope.plus.points

    @property
    def minus(self) -> np.ndarray:
        return self.polytope.minus.points

    def __call__(self, x):
        """Evaluate at one covector (sequence or mapping) or a batch (2-D)."""
        arr = _point_array(x, self.variables)
        val = self.polytope.support(arr)
        return int(val) if np.ndim(val) == 0 else val

    def reindex(self, variables: Sequence[str]) -> "TropicalFunction":
        """Same function on a larger (or reordered) variable list."""
        variables = tuple(variables)
        pos = {v: i for i, v in enumerate(self.variables)}
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise ValueError(f"variables {missing} dropped by reindexing")

        def move(points):
            out = np.zeros((points.shape[0], len(variables)), dtype=np.int64)
            for j, v in enumerate(variables):
                if v in pos:
                    out[:, j] = points[:, pos[v]]
            return NewtonPolytope(out, prune=False)

        return TropicalFunction(variables, VirtualPolytope(move(self.plus), move(self.minus)))

    def _align(self, other: "TropicalFunction"):
        if self.variables == other.variables:
            return self, other
        names = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.reindex(names), other.reindex(names)

    def __add__(self, other):
        a, b = self._align(other)
        return TropicalFunction(a.variables, a.polytope + b.polytope)

    def __sub__(self, other):
        a, b = self._align(other)
        return TropicalFunction(a.variables, a.polytope - b.polytope)

    def __neg__(self):
        return TropicalFunction(self.variables, -self.polytope)

    def tmin(self, other: "TropicalFunction") -> "TropicalFunction":
        a, b = self._align(other)
        return TropicalFunction(a.variables, a.polytope.vee(b.polytope))

    def affine_pieces(self):
        """The region ``{x : self(x) >= 0}`` as a union of cones.

        Returns a list with one integer matrix ``A_q`` per minus-vertex ``q``;
        the region is the union over ``q`` of ``{x : A_q x >= 0}`` where the
        rows of ``A_q`` are ``p - q`` for the plus-vertices ``p``.
        """
        return [self.plus - q[None, :] for q in self.minus]

    def __repr__(self):
        return (f"TropicalFunction(vars={self.variables}, |plus|={len(self.plus)}, "
                f"|minus|={len(self.minus)})")


class TropicalMap:
    """Tuple of tropical functions on a common variable list."""

    __slots__ = ("variables", "components")

    def __init__(self, components: Sequence[TropicalFunction], variables: Sequence[str] | None = None):
        comps = list(components)
        if variables is None:
            names: list[str] = []
            for c in comps:
                names.extend(v for v in c.variables if v not in names)
            variables = names
        self.variables = tuple(variables)
        self.components = tuple(c.reindex(self.variables) for c in comps)

    def __len__(self):
        return len(self.components)

    def __call__(self, x):
        arr = _point_array(x, self.variables)
        vals = [c.polytope.support(arr) for c in self.components]
        if arr.ndim == 1:
            return tuple(int(v) for v in vals)
        return np.stack(vals, axis=-1)

    def __repr__(self):
        return f"TropicalMap(vars={self.variables}, rank={len(self.components)})"


def _exponent_rows(f: RationalFunction, variables: Sequence[str]):
    plus, minus = f.exponent_arrays(variables)
    dim = len(variables)
    p = np.array(plus, dtype=np.int64).reshape(len(plus), dim)
    m = np.array(minus, dtype=np.int64).reshape(len(minus), dim)
    return p, m


def newton(f: RationalFunction, variables: Sequence[str] | None = None) -> NewtonPolytope:
    """Newton polytope of a (Laurent) polynomial."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    if not f.is_laurent():
        raise ValueError("newton expects a Laurent polynomial")
    variables = tuple(variables) if variables is not None else f.variables()
    plus, _ = _exponent_rows(f, variables)
    return NewtonPolytope(plus)


def trop(f: RationalFunction, variables: Sequence[str] | None = None,
         prune: bool = True) -> TropicalFunction:
    """Tropicalization of a positive rational function."""
    f = certify_positive(f)
    variables = tuple(variables) if variables is not None else f.variables()
    plus, minus = _exponent_rows(f, variables)
    poly = VirtualPolytope(NewtonPolytope(plus, prune=prune), NewtonPolytope(minus, prune=prune))
    return TropicalFunction(variables, poly)


def trop_map(fs: Sequence[RationalFunction], variables: Sequence[str] | None = None,
             target_rank: int | None = None) -> TropicalMap:
    """Componentwise tropicalization of a positive map."""
    fs = list(fs)
    if target_rank is not None and len(fs) != target_rank:
        raise ValueError(f"map has {len(fs)} components, target lattice has rank {target_rank}")
    if variables is None:
        names: list[str] = []
        order = fs[0].context.names if fs else ()
        used = set()
        for f in fs:
            used.update(f.variables())
        names = [v for v in order if v in used]
        variables = names
    return TropicalMap([trop(f, variables) for f in fs], variables)
