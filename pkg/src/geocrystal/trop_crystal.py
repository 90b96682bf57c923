"""Tropical crystals of decorated charts and their finite pieces.

A chart crystal on ``T x G_m^l`` tropicalizes to piecewise-linear data on
``Z^n x Z^l``: the weight ``gamma~``, the string functions
``phi~ = -Trop(phi)`` and ``eps~ = -Trop(eps)``, the decoration ``f~`` and the
operators ``e~_i^n = Trop(e_i^d)`` with ``d`` replaced by ``n``.  The finite
crystal ``B^lambda`` consists of the lattice points ``(lambda, m)`` with
``f~(lambda, m) >= 0``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .exact_algebra import DEFAULT_CONTEXT, VariableContext
from .geometric import ChartCrystal, build_cell_chart, build_chart, central_charge
from .kashiwara import FiniteCrystal, highest_weight_elements, tensor
from .root_data import default_word, is_dominant
from .tropical import TropicalFunction, TropicalMap, trop, trop_map

__all__ = [
    "UnboundedRegionError",
    "TropChartCrystal",
    "LatticeRegion",
    "tropicalize_chart",
    "default_trop_chart",
    "enumerate_Blambda",
    "trop_central_charge",
    "product_charge",
    "charge_on_product",
    "charge_invariance_violations",
    "TensorDecomposition",
    "tensor_product",
    "tensor_decompose",
    "schubert_crystal",
    "weight_height",
    "multiplicity_csv",
]


class UnboundedRegionError(RuntimeError):
    """The region ``{f~ >= 0}`` has an unbounded coordinate."""


@dataclass
class TropChartCrystal:
    """Tropicalized chart crystal on covectors ordered as ``variables``."""

    chart: ChartCrystal
    variables: tuple[str, ...]
    gamma: TropicalMap
    phi: dict[int, TropicalFunction]
    eps: dict[int, TropicalFunction]
    e_maps: dict[int, TropicalMap]
    decoration: TropicalFunction | None

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def support(self) -> frozenset:
        return frozenset(self.phi)

    @property
    def torus_rank(self) -> int:
        return len(self.chart.t_names)

    @property
    def ell(self) -> int:
        return self.chart.ell

    def point(self, lam: Sequence[int], m: Sequence[int]) -> np.ndarray:
        return np.asarray(tuple(lam) + tuple(m), dtype=np.int64)

    def act(self, i: int, k: int, x) -> np.ndarray:
        """``e~_i^k`` on one point or a batch of full covectors."""
        arr = np.asarray(x, dtype=np.int64)
        single = arr.ndim == 1
        arr2 = np.atleast_2d(arr)
        col = np.full((arr2.shape[0], 1), k, dtype=np.int64)
        new_c = np.atleast_2d(self.e_maps[i](np.hstack([col, arr2])))
        out = np.hstack([arr2[:, : self.torus_rank], new_c])
        return out[0] if single else out


def tropicalize_chart(x: ChartCrystal) -> TropChartCrystal:
    """Tropicalize every structure map of ``x`` (each already certified positive)."""
    names = x.variables
    gamma = trop_map(x.gamma, names)
    phi, eps, e_maps = {}, {}, {}
    for i in range(1, x.n):
        if x.phi[i].is_zero():
            # phi = eps = 0: the node acts trivially and lies outside the support.
            continue
        phi[i] = -trop(x.phi[i], names)
        eps[i] = -trop(x.eps[i], names)
        e_maps[i] = trop_map(x.e_update[i], (x.d_name,) + names)
    dec = trop(x.decoration, names) if x.decoration is not None else None
    return TropChartCrystal(x, names, gamma, phi, eps, e_maps, dec)


@lru_cache(maxsize=None)
def default_trop_chart(n: int, word: tuple[int, ...] | None = None) -> TropChartCrystal:
    """Cached tropical chart for ``T . B^-_{w0}`` in variables ``t*``, ``c*``."""
    return tropicalize_chart(build_chart(n, word))


# -- lattice regions -------------------------------------------------------------


class LatticeRegion:
    """Lattice points ``m`` with ``f~(fixed, m) >= 0`` and ``A m + b >= 0``.

    ``f~`` at fixed values is a union of polyhedra, one per minus-vertex ``q``
    of its Newton data: ``{m : <p - q, (fixed, m)> >= 0 for all plus-vertices p}``.
    """

    def __init__(self, f: TropicalFunction, fixed: Mapping[str, int],
                 extra: Sequence[tuple[Sequence[int], int]] = ()):
        self.f = f
        self.fixed = {k: int(v) for k, v in fixed.items()}
        self.free = tuple(v for v in f.variables if v not in self.fixed)
        free_idx = [f.variables.index(v) for v in self.free]
        fix_idx = [f.variables.index(v) for v in self.fixed]
        fix_val = np.array([self.fixed[v] for v in self.fixed], dtype=np.int64)
        self._free_idx = free_idx
        self._fix_idx = fix_idx
        self._fix_val = fix_val
        k = len(self.free)
        ea = np.array([list(a) for a, _ in extra], dtype=np.int64).reshape(len(extra), k)
        eb = np.array([b for _, b in extra], dtype=np.int64)
        self.extra = (ea, eb)
        self.pieces = []
        for mat in f.affine_pieces():
            a = mat[:, free_idx]
            b = mat[:, fix_idx] @ fix_val if fix_idx else np.zeros(len(mat), dtype=np.int64)
            self.pieces.append((np.vstack([a, ea]), np.concatenate([b, eb])))

    @property
    def dim(self) -> int:
        return len(self.free)

    def full_points(self, m: np.ndarray) -> np.ndarray:
        m = np.atleast_2d(np.asarray(m, dtype=np.int64))
        out = np.zeros((m.shape[0], len(self.f.variables)), dtype=np.int64)
        out[:, self._free_idx] = m
        if self._fix_idx:
            out[:, self._fix_idx] = self._fix_val
        return out

    def contains(self, m) -> np.ndarray:
        m = np.atleast_2d(np.asarray(m, dtype=np.int64))
        ok = np.atleast_1d(self.f(self.full_points(m))) >= 0
        ea, eb = self.extra
        if len(eb):
            ok &= np.all(m @ ea.T + eb >= 0, axis=1)
        return ok

    def piece_boxes(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Integer boxes (one per nonempty piece) containing the region."""
        boxes = []
        k = self.dim
        for a, b in self.pieces:
            if k == 0:
                if np.all(b >= 0):
                    boxes.append((np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)))
                continue
            lo = np.empty(k, dtype=np.int64)
            hi = np.empty(k, dtype=np.int64)
            empty = False
            for j in range(k):
                for sign, store in ((1.0, lo), (-1.0, hi)):
                    cost = np.zeros(k)
                    cost[j] = sign
                    res = linprog(cost, A_ub=-a.astype(float), b_ub=b.astype(float),
                                  bounds=[(None, None)] * k, method="highs")
                    if res.status == 2:
                        empty = True
                        break
                    if res.status == 3:
                        raise UnboundedRegionError(f"coordinate {self.free[j]} is unbounded")
                    if res.status != 0:
                        raise RuntimeError(f"LP failed: {res.message}")
                    v = res.x[j]
                    # Outward rounding with a margin; exact filtering follows.
                    store[j] = int(np.floor(v)) - 1 if sign > 0 else int(np.ceil(v)) + 1
                if empty:
                    break
            if not empty:
                boxes.append((lo, hi))
        return boxes

    def lattice_points(self, chunk: int = 1 << 20) -> np.ndarray:
        """All lattice points, sorted lexicographically."""
        found = []
        for lo, hi in self.piece_boxes():
            ranges = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
            total = int(np.prod([len(r) for r in ranges])) if ranges else 1
            if self.dim == 0:
                cand = np.zeros((1, 0), dtype=np.int64)
                found.append(cand[self.contains(cand)])
                continue
            grid = itertools.product(*ranges)
            while total > 0:
                take = min(chunk, total)
                cand = np.fromiter(itertools.chain.from_iterable(itertools.islice(grid, take)),
                                   dtype=np.int64, count=take * self.dim).reshape(take, self.dim)
                found.append(cand[self.contains(cand)])
                total -= take
        if not found:
            return np.zeros((0, self.dim), dtype=np.int64)
        pts = np.unique(np.vstack(found), axis=0)
        return pts


# -- finite crystals ------------------------------------------------------------------


def _assemble(tc: TropChartCrystal, full: np.ndarray, member) -> FiniteCrystal:
    """Crystal on the rows of ``full`` with edges ``e~_i^1`` kept inside the set."""
    m = full.shape[0]
    n = tc.n
    r = n - 1
    weights = np.atleast_2d(tc.gamma(full)).reshape(m, n) if m else np.zeros((0, n), dtype=np.int64)
    phi = np.zeros((m, r), dtype=np.int64)
    eps = np.zeros((m, r), dtype=np.int64)
    up = np.full((m, r), -1, dtype=np.int64)
    index = {tuple(row): k for k, row in enumerate(full.tolist())}
    for i in sorted(tc.support):
        if m == 0:
            continue
        phi[:, i - 1] = np.atleast_1d(tc.phi[i](full))
        eps[:, i - 1] = np.atleast_1d(tc.eps[i](full))
        moved = tc.act(i, 1, full)
        inside = member(moved)
        for k in np.flatnonzero(inside):
            tgt = index.get(tuple(moved[k].tolist()))
            if tgt is None:
                raise RuntimeError("membership test and enumeration disagree")
            up[k, i - 1] = tgt
    return FiniteCrystal(n, weights, phi, eps, up, [tuple(r_) for r_ in full.tolist()], tc.support)


def enumerate_Blambda(tc: TropChartCrystal, lam: Sequence[int]) -> FiniteCrystal:
    """The finite crystal ``{(lam, m) : f~(lam, m) >= 0}``.

    Non-dominant ``lam`` gives an empty region; an unbounded region raises
    :class:`UnboundedRegionError`.
    """
    lam = tuple(int(v) for v in lam)
    if len(lam) != tc.n:
        raise ValueError(f"weight {lam} has length {len(lam)}, expected {tc.n}")
    if tc.decoration is None:
        raise ValueError("chart has no decoration")
    t_names = tc.chart.t_names
    region = LatticeRegion(tc.decoration, dict(zip(t_names, lam)))
    pts = region.lattice_points()
    full = region.full_points(pts) if len(pts) else np.zeros((0, len(tc.variables)), dtype=np.int64)

    def member(rows):
        ok = np.all(rows[:, : len(lam)] == np.asarray(lam), axis=1)
        return ok & (np.atleast_1d(tc.decoration(rows)) >= 0)

    return _assemble(tc, full, member)


# -- central charge ----------------------------------------------------------------------


def trop_central_charge(delta, variables: Sequence[str]) -> TropicalFunction:
    """``Delta~ = Trop(Delta)`` on the product coordinates ``variables``."""
    return trop(delta, variables, prune=False)


@lru_cache(maxsize=None)
def product_charge(n: int, word: tuple[int, ...] | None = None) -> TropicalFunction:
    """``Delta~`` for the default chart; variables ``t*, c*, T*, C*``."""
    word = tuple(word) if word is not None else default_word(n)
    x = build_chart(n, word)
    y = build_chart(n, word, t_prefix="T", c_prefix="C")
    delta = central_charge(x, y)
    return trop_central_charge(delta, x.variables + y.variables)


def charge_on_product(charge: TropicalFunction, prod: FiniteCrystal) -> np.ndarray:
    """Evaluate ``Delta~`` at every element's coordinates ``(lam, m, mu, m')``."""
    if len(prod) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.atleast_1d(charge(np.asarray(prod.coords, dtype=np.int64)))


def charge_invariance_violations(values: np.ndarray, crystal: FiniteCrystal) -> list:
    """Edges ``b -> e_i b`` along which ``values`` changes."""
    bad = []
    for i in sorted(crystal.support):
        src = np.flatnonzero(crystal.up[:, i - 1] >= 0)
        tgt = crystal.up[src, i - 1]
        for s in src[values[src] != values[tgt]]:
            bad.append((int(s), i, int(crystal.up[s, i - 1])))
    return bad


@dataclass
class TensorDecomposition:
    lam: tuple
    mu: tuple
    rows: list = field(default_factory=list)   # (nu, multiplicity, {exponent: count} | None)
    product: FiniteCrystal | None = None
    charge: np.ndarray | None = None

    def multiplicities(self) -> dict:
        return {nu: m for nu, m, _ in self.rows}


def tensor_product(lam: Sequence[int], mu: Sequence[int], word=None) -> FiniteCrystal:
    n = len(lam)
    tc = default_trop_chart(n, tuple(word) if word is not None else None)
    return tensor(enumerate_Blambda(tc, lam), enumerate_Blambda(tc, mu))


def tensor_decompose(lam: Sequence[int], mu: Sequence[int], with_charge: bool = True,
                     word=None, check_invariance: bool = True) -> TensorDecomposition:
    """Highest-weight decomposition of ``B^lam x B^mu``.

    With ``with_charge`` each highest-weight element contributes
    ``q^{Delta~}`` to the polynomial of its weight.
    """
    lam, mu = tuple(int(v) for v in lam), tuple(int(v) for v in mu)
    if len(lam) != len(mu):
        raise ValueError("weights of different length")
    for w in (lam, mu):
        if not is_dominant(w):
            raise ValueError(f"weight {w} is not dominant")
    word = tuple(word) if word is not None else None
    prod = tensor_product(lam, mu, word)
    values = None
    if with_charge:
        values = charge_on_product(product_charge(len(lam), word), prod)
        if check_invariance:
            bad = charge_invariance_violations(values, prod)
            if bad:
                raise RuntimeError(f"central charge not invariant along {len(bad)} edges, e.g. {bad[0]}")
    groups: dict = {}
    for b in highest_weight_elements(prod):
        groups.setdefault(prod.weight(b), []).append(b)
    rows = []
    for nu in sorted(groups, reverse=True):
        hw = groups[nu]
        poly = dict(sorted(Counter(int(values[b]) for b in hw).items())) if with_charge else None
        rows.append((nu, len(hw), poly))
    return TensorDecomposition(lam, mu, rows, prod, values)


# -- Schubert cells ---------------------------------------------------------------


def weight_height(weights: np.ndarray) -> np.ndarray:
    """``sum_i b_i`` for ``weight = sum_i b_i alpha_i`` (rows must have sum 0)."""
    w = np.atleast_2d(weights)
    n = w.shape[1]
    coeff = np.arange(n - 1, -1, -1, dtype=np.int64)
    return w @ coeff


def _linear_rows(tmap: TropicalMap) -> np.ndarray:
    rows = []
    for comp in tmap.components:
        if len(comp.plus) != 1 or len(comp.minus) != 1:
            raise ValueError("weight map is not linear")
        rows.append(comp.plus[0] - comp.minus[0])
    return np.array(rows, dtype=np.int64)


def schubert_crystal(n: int, word: Sequence[int], height_bound: int,
                     context: VariableContext | None = None) -> FiniteCrystal:
    """Weight-truncated crystal of the cell ``B^-_w`` decorated by ``f_w``.

    Elements are the ``m`` with ``f~_w(m) >= 0`` whose weight has depth
    ``-height(gamma~(m)) <= height_bound``.  Edges use ``e~_i^1``; the result
    is upper normal.
    """
    if height_bound < 0:
        raise ValueError("height_bound must be nonnegative")
    word = tuple(word)
    tc = tropicalize_chart(build_cell_chart(n, word, context=DEFAULT_CONTEXT if context is None else context))
    g = _linear_rows(tc.gamma)
    coeff = np.arange(n - 1, -1, -1, dtype=np.int64)
    height_row = coeff @ g          # height(gamma~(m)) = height_row . m
    region = LatticeRegion(tc.decoration, {}, extra=[(height_row.tolist(), int(height_bound))])
    pts = region.lattice_points()

    def member(rows):
        return region.contains(rows)

    return _assemble(tc, pts, member)


def multiplicity_csv(crystal: FiniteCrystal) -> str:
    """``weight, multiplicity`` table, weights as ``a;b;c``, sorted descending."""
    counts = Counter(crystal.weight(b) for b in range(len(crystal)))
    lines = ["weight,multiplicity"]
    for wt in sorted(counts, reverse=True):
        lines.append(";".join(str(v) for v in wt) + f",{counts[wt]}")
    return "\n".join(lines) + "\n"
