"""Finite Kashiwara crystals stored as integer tables.

A :class:`FiniteCrystal` on ``M`` elements for GL_n keeps

* ``weights``: ``(M, n)`` integer weights,
* ``phi``, ``eps``: ``(M, n-1)`` string data (column ``i-1`` for node ``i``),
* ``up``: ``(M, n-1)`` targets of the raising operators ``e_i``, ``-1`` when
  undefined,

plus optional integer coordinates.  Nodes outside ``support`` carry the
explicit sentinel :data:`NEG_INF` for ``phi`` and ``eps``.

The product follows the convention ``B x B'`` whose raising rule is

    n1 = max(eps(b), phi'(b')) - max(eps(b) - n, phi'(b')),
    n2 = max(eps(b), phi'(b') + n) - max(eps(b), phi'(b')),

i.e. Kashiwara's tensor product ``B' (x) B`` with the factors swapped.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

__all__ = [
    "NEG_INF",
    "CrystalElement",
    "FiniteCrystal",
    "NormalityReport",
    "ClosedFamilyReport",
    "point_crystal",
    "tensor",
    "tensor_power_apply",
    "highest_weight_elements",
    "is_normal",
    "string_lengths",
    "connected_components",
    "component_labels",
    "character",
    "weight_multiplicities",
    "opposite",
    "disjoint_union",
    "canonical_form",
    "isomorphism",
    "is_isomorphic",
    "closed_family_check",
    "q_multiplicity",
    "to_json",
    "from_json",
    "to_dot",
]


class _NegInf:
    """The value ``-infinity`` of ``phi``/``eps`` outside the support."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("NEG_INF - NEG_INF is undefined")
        return self

    def __neg__(self):
        raise ArithmeticError("+infinity is not representable")


NEG_INF = _NegInf()

Num = Union[int, _NegInf]


@dataclass(frozen=True)
class CrystalElement:
    id: int
    coords: tuple
    weight: tuple
    phi: dict
    eps: dict


class FiniteCrystal:
    """Finite Kashiwara crystal for GL_n."""

    __slots__ = ("n", "weights", "phi_table", "eps_table", "up", "coords", "support",
                 "_down", "_index")

    def __init__(self, n: int, weights, phi, eps, up, coords=None,
                 support: Iterable[int] | None = None, check: bool = True):
        r = n - 1
        self.n = n
        m = len(weights)
        self.weights = np.asarray(weights, dtype=np.int64).reshape(m, n)
        self.phi_table = np.asarray(phi, dtype=np.int64).reshape(m, r)
        self.eps_table = np.asarray(eps, dtype=np.int64).reshape(m, r)
        self.up = np.asarray(up, dtype=np.int64).reshape(m, r)
        if coords is None:
            coords = [() for _ in range(m)]
        self.coords = [tuple(int(v) for v in c) for c in coords]
        self.support = frozenset(range(1, n)) if support is None else frozenset(support)
        self._down = None
        self._index = None
        if check:
            problems = self.validate()
            if problems:
                raise ValueError("not a Kashiwara crystal: " + "; ".join(problems[:5]))

    # -- basic access ----------------------------------------------------

    def __len__(self) -> int:
        return self.weights.shape[0]

    @property
    def rank(self) -> int:
        return self.n - 1

    def phi(self, b: int, i: int) -> Num:
        return int(self.phi_table[b, i - 1]) if i in self.support else NEG_INF

    def eps(self, b: int, i: int) -> Num:
        return int(self.eps_table[b, i - 1]) if i in self.support else NEG_INF

    def weight(self, b: int) -> tuple:
        return tuple(int(v) for v in self.weights[b])

    def element(self, b: int) -> CrystalElement:
        nodes = sorted(self.support)
        return CrystalElement(b, self.coords[b], self.weight(b),
                              {i: self.phi(b, i) for i in nodes},
                              {i: self.eps(b, i) for i in nodes})

    def elements(self) -> list[CrystalElement]:
        return [self.element(b) for b in range(len(self))]

    @property
    def down(self) -> np.ndarray:
        """Targets of the lowering operators ``f_i = e_i^{-1}``."""
        if self._down is None:
            down = np.full_like(self.up, -1)
            for c in range(self.rank):
                src = np.flatnonzero(self.up[:, c] >= 0)
                down[self.up[src, c], c] = src
            self._down = down
        return self._down

    def e(self, i: int, b: int):
        if i not in self.support:
            return None
        t = int(self.up[b, i - 1])
        return t if t >= 0 else None

    def f(self, i: int, b: int):
        if i not in self.support:
            return None
        t = int(self.down[b, i - 1])
        return t if t >= 0 else None

    def e_power(self, i: int, k: int, b: int):
        """``e_i^k`` for any integer ``k`` (negative powers lower)."""
        step = self.e if k >= 0 else self.f
        for _ in range(abs(k)):
            if b is None:
                return None
            b = step(i, b)
        return b

    def index_of(self, coords: Sequence[int]):
        if self._index is None:
            self._index = {c: b for b, c in enumerate(self.coords)}
        return self._index.get(tuple(coords))

    def validate(self) -> list[str]:
        out = []
        r = self.rank
        if r == 0:
            return out
        alpha = self.weights[:, :-1] - self.weights[:, 1:]
        for i in sorted(self.support):
            c = i - 1
            bad = np.flatnonzero(self.phi_table[:, c] - self.eps_table[:, c] != alpha[:, c])
            if len(bad):
                out.append(f"phi_{i} - eps_{i} != <alpha_{i}, wt> at element {int(bad[0])}")
            col = self.up[:, c]
            src = np.flatnonzero(col >= 0)
            if len(src) == 0:
                continue
            tgt = col[src]
            if np.any(tgt >= len(self)) or len(np.unique(tgt)) != len(tgt):
                out.append(f"e_{i} is not an injective partial map")
                continue
            a = np.zeros(self.n, dtype=np.int64)
            a[c], a[c + 1] = 1, -1
            if np.any(self.weights[tgt] != self.weights[src] + a):
                out.append(f"e_{i} does not shift weights by alpha_{i}")
            if np.any(self.phi_table[tgt, c] != self.phi_table[src, c] + 1):
                out.append(f"phi_{i} does not increase along e_{i}")
            if np.any(self.eps_table[tgt, c] != self.eps_table[src, c] - 1):
                out.append(f"eps_{i} does not decrease along e_{i}")
        for i in range(1, self.n):
            if i not in self.support and np.any(self.up[:, i - 1] >= 0):
                out.append(f"e_{i} defined outside the support")
        return out

    def restrict(self, ids: Sequence[int]) -> "FiniteCrystal":
        """Sub-crystal on ``ids`` (edges leaving the subset are dropped)."""
        ids = np.asarray(list(ids), dtype=np.int64)
        remap = np.full(len(self) + 1, -1, dtype=np.int64)
        remap[ids] = np.arange(len(ids))
        up = self.up[ids]
        up = np.where(up >= 0, remap[np.where(up >= 0, up, len(self))], -1)
        return FiniteCrystal(self.n, self.weights[ids], self.phi_table[ids], self.eps_table[ids], up,
                             [self.coords[b] for b in ids], self.support, check=False)

    def __repr__(self):
        return f"FiniteCrystal(GL_{self.n}, {len(self)} elements)"


def point_crystal(n: int, weight: Sequence[int] | None = None) -> FiniteCrystal:
    """One element with ``phi = eps = <alpha, weight>`` split as ``phi = max(., 0)``.

    With ``weight = 0`` this is the unit ``{pt}`` with ``phi = eps = 0``.
    """
    weight = tuple(weight) if weight is not None else (0,) * n
    a = [weight[i] - weight[i + 1] for i in range(n - 1)]
    phi = [[max(x, 0) for x in a]]
    eps = [[max(-x, 0) for x in a]]
    return FiniteCrystal(n, [weight], phi, eps, [[-1] * (n - 1)], [()])


# -- product ------------------------------------------------------------------


def tensor(b1: FiniteCrystal, b2: FiniteCrystal) -> FiniteCrystal:
    """The product ``B x B'`` on pairs ``(b, b')``, id ``b * |B'| + b'``."""
    if b1.n != b2.n:
        raise ValueError("crystals of different rank")
    n, r = b1.n, b1.rank
    m1, m2 = len(b1), len(b2)
    a = np.repeat(np.arange(m1), m2)
    b = np.tile(np.arange(m2), m1)
    weights = b1.weights[a] + b2.weights[b]
    alpha1 = b1.weights[:, :-1] - b1.weights[:, 1:]
    alpha2 = b2.weights[:, :-1] - b2.weights[:, 1:]
    phi = np.zeros((m1 * m2, r), dtype=np.int64)
    eps = np.zeros((m1 * m2, r), dtype=np.int64)
    up = np.full((m1 * m2, r), -1, dtype=np.int64)
    for i in range(1, n):
        c = i - 1
        in1, in2 = i in b1.support, i in b2.support
        if in1 and in2:
            e1 = b1.eps_table[a, c]
            p2 = b2.phi_table[b, c]
            phi[:, c] = np.maximum(b1.phi_table[a, c], p2 + alpha1[a, c])
            eps[:, c] = np.maximum(b2.eps_table[b, c], e1 - alpha2[b, c])
            # n1 in {0, 1} for n = 1: act on the first factor iff eps > phi'.
            first = e1 > p2
        elif in1:
            phi[:, c] = b1.phi_table[a, c]
            eps[:, c] = b1.eps_table[a, c] - alpha2[b, c]
            first = np.ones(m1 * m2, dtype=bool)
        elif in2:
            phi[:, c] = b2.phi_table[b, c] + alpha1[a, c]
            eps[:, c] = b2.eps_table[b, c]
            first = np.zeros(m1 * m2, dtype=bool)
        else:
            continue
        t1 = b1.up[a, c]
        t2 = b2.up[b, c]
        target = np.where(first, np.where(t1 >= 0, t1 * m2 + b, -1),
                          np.where(t2 >= 0, a * m2 + t2, -1))
        up[:, c] = target
    coords = [b1.coords[x] + b2.coords[y] for x, y in zip(a.tolist(), b.tolist())]
    return FiniteCrystal(n, weights, phi, eps, up, coords, b1.support | b2.support, check=False)


def _max(x: Num, y: Num) -> Num:
    return x if y < x else y


def tensor_power_apply(b1: FiniteCrystal, b2: FiniteCrystal, i: int, k: int, x: int, y: int):
    """``e_i^k (x, y)`` on ``B x B'`` by the closed ``n1/n2`` formulas.

    Returns the pair or ``None``; used to cross-check iterated ``e_i``.
    """
    eps = b1.eps(x, i)
    phi2 = b2.phi(y, i)
    if eps is NEG_INF and phi2 is NEG_INF:
        return (x, y) if k == 0 else None
    n1 = _max(eps, phi2) - _max(eps - k, phi2) if eps is not NEG_INF else 0
    if eps is NEG_INF:
        n1, n2 = 0, k
    elif phi2 is NEG_INF:
        n1, n2 = k, 0
    else:
        n2 = _max(eps, phi2 + k) - _max(eps, phi2)
    nx = b1.e_power(i, n1, x)
    ny = b2.e_power(i, n2, y)
    if nx is None or ny is None:
        return None
    return nx, ny


# -- structure queries --------------------------------------------------------


def highest_weight_elements(b: FiniteCrystal) -> list[int]:
    """Elements on which every ``e_i`` (``i`` in the support) is undefined."""
    if b.rank == 0 or not b.support:
        return list(range(len(b)))
    cols = [i - 1 for i in sorted(b.support)]
    mask = np.all(b.up[:, cols] < 0, axis=1)
    return [int(x) for x in np.flatnonzero(mask)]


def string_lengths(b: FiniteCrystal, direction: str = "up") -> np.ndarray:
    """``(M, n-1)`` table of how often ``e_i`` (or ``f_i``) applies."""
    table = b.up if direction == "up" else b.down
    m = len(b)
    out = np.zeros((m, b.rank), dtype=np.int64)
    for c in range(b.rank):
        nxt = table[:, c]
        has_pre = np.zeros(m, dtype=bool)
        has_pre[nxt[nxt >= 0]] = True
        for start in np.flatnonzero(~has_pre):
            chain = [int(start)]
            while nxt[chain[-1]] >= 0:
                chain.append(int(nxt[chain[-1]]))
                if len(chain) > m:
                    raise ValueError("cycle in crystal operators")
            k = len(chain)
            out[chain, c] = np.arange(k - 1, -1, -1)
    return out


@dataclass
class NormalityReport:
    upper_violations: list = field(default_factory=list)
    lower_violations: list = field(default_factory=list)

    @property
    def upper_normal(self) -> bool:
        return not self.upper_violations

    @property
    def lower_normal(self) -> bool:
        return not self.lower_violations

    @property
    def normal(self) -> bool:
        return self.upper_normal and self.lower_normal

    def __bool__(self):
        return self.normal


def is_normal(b: FiniteCrystal) -> NormalityReport:
    """Compare ``eps_i`` / ``phi_i`` with the upward / downward string lengths."""
    rep = NormalityReport()
    if len(b) == 0 or b.rank == 0:
        return rep
    lu = string_lengths(b, "up")
    ld = string_lengths(b, "down")
    for i in sorted(b.support):
        c = i - 1
        for x in np.flatnonzero(lu[:, c] != b.eps_table[:, c])[:20]:
            rep.upper_violations.append((int(x), i, int(b.eps_table[x, c]), int(lu[x, c])))
        for x in np.flatnonzero(ld[:, c] != b.phi_table[:, c])[:20]:
            rep.lower_violations.append((int(x), i, int(b.phi_table[x, c]), int(ld[x, c])))
    return rep


def component_labels(b: FiniteCrystal) -> np.ndarray:
    m = len(b)
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    src, dst = np.nonzero(b.up >= 0)
    tgt = b.up[src, dst]
    graph = coo_matrix((np.ones(len(src)), (src, tgt)), shape=(m, m))
    _, labels = _cc(graph, directed=False)
    # Relabel by first occurrence for determinism.
    order = {}
    out = np.empty(m, dtype=np.int64)
    for k, lab in enumerate(labels):
        out[k] = order.setdefault(int(lab), len(order))
    return out


def connected_components(b: FiniteCrystal) -> list[FiniteCrystal]:
    labels = component_labels(b)
    return [b.restrict(np.flatnonzero(labels == k)) for k in range(int(labels.max()) + 1)] if len(b) else []


def weight_multiplicities(b: FiniteCrystal) -> Counter:
    return Counter(tuple(int(v) for v in row) for row in b.weights)


def character(b: FiniteCrystal, prefix: str = "x", context=None):
    """``sum_b [wt(b)]`` as a Laurent polynomial in ``x1..xn``."""
    from .exact_algebra import DEFAULT_CONTEXT, RationalFunction, LaurentPolynomial

    vctx = DEFAULT_CONTEXT if context is None else context
    idx = [vctx.index(f"{prefix}{k}") for k in range(1, b.n + 1)]
    k = len(vctx)
    terms = {}
    for wt, mult in weight_multiplicities(b).items():
        e = [0] * k
        for j, v in zip(idx, wt):
            e[j] = v
        terms[tuple(e)] = mult
    return LaurentPolynomial.of(RationalFunction.from_terms(terms, vctx))


def opposite(b: FiniteCrystal) -> FiniteCrystal:
    """``(B, -wt, eps, phi, e^{-1})``."""
    return FiniteCrystal(b.n, -b.weights, b.eps_table.copy(), b.phi_table.copy(), b.down.copy(),
                         b.coords, b.support, check=False)


def disjoint_union(b1: FiniteCrystal, b2: FiniteCrystal) -> FiniteCrystal:
    if b1.n != b2.n or b1.support != b2.support:
        raise ValueError("crystals of different type")
    shift = len(b1)
    up2 = np.where(b2.up >= 0, b2.up + shift, -1)
    return FiniteCrystal(b1.n, np.vstack([b1.weights, b2.weights]),
                         np.vstack([b1.phi_table, b2.phi_table]),
                         np.vstack([b1.eps_table, b2.eps_table]),
                         np.vstack([b1.up, up2]), b1.coords + b2.coords, b1.support, check=False)


# -- isomorphism ----------------------------------------------------------------


def _bfs_order(b: FiniteCrystal, start: int) -> list[int]:
    """Deterministic BFS through ``f_i`` then ``e_i`` in increasing ``i``."""
    seen = {start}
    order = [start]
    queue = deque([start])
    nodes = sorted(b.support)
    down, up = b.down, b.up
    while queue:
        x = queue.popleft()
        for table in (down, up):
            for i in nodes:
                y = int(table[x, i - 1])
                if y >= 0 and y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
    return order


def canonical_form(b: FiniteCrystal, start: int | None = None):
    """Hashable structure table of a connected crystal relabelled by BFS
    from ``start`` (default: its unique highest-weight element)."""
    if start is None:
        hw = highest_weight_elements(b)
        if len(hw) != 1:
            raise ValueError(f"expected a unique highest-weight element, found {len(hw)}")
        start = hw[0]
    order = _bfs_order(b, start)
    if len(order) != len(b):
        raise ValueError("crystal is not connected")
    label = {x: k for k, x in enumerate(order)}
    nodes = sorted(b.support)
    rows = []
    for x in order:
        rows.append((
            b.weight(x),
            tuple(int(b.phi_table[x, i - 1]) for i in nodes),
            tuple(int(b.eps_table[x, i - 1]) for i in nodes),
            tuple(label.get(int(b.up[x, i - 1]), -1) for i in nodes),
        ))
    return (b.n, tuple(nodes), tuple(rows)), order


def isomorphism(b1: FiniteCrystal, b2: FiniteCrystal):
    """An isomorphism ``B1 -> B2`` as an id map, or ``None``.

    Components are matched through canonical forms rooted at their
    highest-weight elements.
    """
    if len(b1) != len(b2) or b1.n != b2.n or b1.support != b2.support:
        return None
    if len(b1) == 0:
        return {}

    def forms(b):
        labels = component_labels(b)
        out: dict = {}
        for k in range(int(labels.max()) + 1):
            ids = np.flatnonzero(labels == k)
            sub = b.restrict(ids)
            form, order = canonical_form(sub)
            out.setdefault(form, []).append([int(ids[j]) for j in order])
        return out

    try:
        f1, f2 = forms(b1), forms(b2)
    except ValueError:
        return None
    if {k: len(v) for k, v in f1.items()} != {k: len(v) for k, v in f2.items()}:
        return None
    mapping = {}
    for form, lists in f1.items():
        for src, dst in zip(lists, f2[form]):
            mapping.update(zip(src, dst))
    return mapping


def is_isomorphic(b1: FiniteCrystal, b2: FiniteCrystal) -> bool:
    return isomorphism(b1, b2) is not None


# -- closed families -------------------------------------------------------------


@dataclass
class ClosedFamilyReport:
    lam: tuple
    mu: tuple
    messages: list = field(default_factory=list)
    embedded: int = 0

    @property
    def ok(self) -> bool:
        return not self.messages

    def __bool__(self):
        return self.ok


def _unique_highest(b: FiniteCrystal, nu: tuple, rep: ClosedFamilyReport, name: str):
    hw = highest_weight_elements(b)
    if len(hw) != 1:
        rep.messages.append(f"{name}: {len(hw)} highest-weight elements")
        return None
    if b.weight(hw[0]) != tuple(nu):
        rep.messages.append(f"{name}: highest weight {b.weight(hw[0])} != {tuple(nu)}")
        return None
    return hw[0]


def closed_family_check(family: Union[Mapping, Callable], lam: Sequence[int],
                        mu: Sequence[int]) -> ClosedFamilyReport:
    """Verify the two closed-family conditions for ``(lam, mu)``.

    (i) ``C_nu`` has a unique highest-weight element of weight ``nu`` for
    ``nu`` in ``lam, mu, lam+mu``; (ii) ``c_{lam+mu} -> (c_lam, c_mu)`` extends,
    by parallel BFS, to a strict embedding ``C_{lam+mu} -> C_lam x C_mu``.
    """
    get = family if callable(family) else family.__getitem__
    lam, mu = tuple(lam), tuple(mu)
    nu = tuple(a + b for a, b in zip(lam, mu))
    rep = ClosedFamilyReport(lam, mu)
    cl, cm, cn = get(lam), get(mu), get(nu)
    hl = _unique_highest(cl, lam, rep, f"C{lam}")
    hm = _unique_highest(cm, mu, rep, f"C{mu}")
    hn = _unique_highest(cn, nu, rep, f"C{nu}")
    if not rep.ok:
        return rep
    prod = tensor(cl, cm)
    start = hl * len(cm) + hm
    image = {hn: start}
    used = {start}
    queue = deque([hn])
    nodes = sorted(cn.support)
    while queue and rep.ok:
        x = queue.popleft()
        y = image[x]
        if (prod.weight(y), [prod.phi(y, i) for i in nodes], [prod.eps(y, i) for i in nodes]) != \
                (cn.weight(x), [cn.phi(x, i) for i in nodes], [cn.eps(x, i) for i in nodes]):
            rep.messages.append(f"structure mismatch at element {x} -> {y}")
            break
        for op in ("f", "e"):
            for i in nodes:
                x2 = getattr(cn, op)(i, x)
                y2 = getattr(prod, op)(i, y)
                if (x2 is None) != (y2 is None):
                    rep.messages.append(f"{op}_{i} defined on only one side at {x} -> {y}")
                    continue
                if x2 is None:
                    continue
                if x2 in image:
                    if image[x2] != y2:
                        rep.messages.append(f"{op}_{i} does not commute at {x}")
                    continue
                if y2 in used:
                    rep.messages.append(f"embedding not injective at {x2}")
                    continue
                image[x2] = y2
                used.add(y2)
                queue.append(x2)
    if rep.ok and len(image) != len(cn):
        rep.messages.append(f"BFS reached {len(image)} of {len(cn)} elements")
    rep.embedded = len(image)
    return rep


# -- q-multiplicities -------------------------------------------------------------


def q_multiplicity(b: FiniteCrystal, charge: Union[Mapping, Callable, Sequence], nu: Sequence[int]):
    """``{exponent: count}`` of ``sum q^{charge(b)}`` over highest-weight ``b``
    of weight ``nu``; its value at ``q = 1`` is the multiplicity."""
    nu = tuple(nu)
    out: Counter = Counter()
    for x in highest_weight_elements(b):
        if b.weight(x) != nu:
            continue
        if callable(charge):
            val = charge(x)
        else:
            try:
                val = charge[x]
            except (KeyError, IndexError):
                raise KeyError(f"no charge value for highest-weight element {x}") from None
        if val is None:
            raise KeyError(f"no charge value for highest-weight element {x}")
        out[int(val)] += 1
    return dict(sorted(out.items()))


def q_polynomial_text(poly: Mapping[int, int]) -> str:
    if not poly:
        return "0"
    parts = []
    for e, c in sorted(poly.items()):
        mono = "1" if e == 0 else ("q" if e == 1 else f"q^{e}")
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts)


# -- serialization ------------------------------------------------------------------


def to_json(b: FiniteCrystal) -> dict:
    nodes = sorted(b.support)
    elements = []
    for x in range(len(b)):
        elements.append({
            "id": x,
            "coords": list(b.coords[x]),
            "weight": list(b.weight(x)),
            "phi": {str(i): int(b.phi_table[x, i - 1]) for i in nodes},
            "eps": {str(i): int(b.eps_table[x, i - 1]) for i in nodes},
        })
    edges = []
    for i in nodes:
        for x in np.flatnonzero(b.up[:, i - 1] >= 0):
            edges.append({"i": i, "from": int(x), "to": int(b.up[x, i - 1])})
    return {"n": b.n, "elements": elements, "edges": edges,
            "highest": highest_weight_elements(b)}


def from_json(data: Union[dict, str]) -> FiniteCrystal:
    if isinstance(data, str):
        data = json.loads(data)
    n = int(data["n"])
    elems = sorted(data["elements"], key=lambda e: e["id"])
    ids = {e["id"]: k for k, e in enumerate(elems)}
    support = sorted({int(i) for e in elems for i in e["phi"]}) if elems else list(range(1, n))
    r = n - 1
    m = len(elems)
    phi = np.zeros((m, r), dtype=np.int64)
    eps = np.zeros((m, r), dtype=np.int64)
    for k, e in enumerate(elems):
        for i, v in e["phi"].items():
            phi[k, int(i) - 1] = v
        for i, v in e["eps"].items():
            eps[k, int(i) - 1] = v
    up = np.full((m, r), -1, dtype=np.int64)
    for edge in data["edges"]:
        up[ids[edge["from"]], int(edge["i"]) - 1] = ids[edge["to"]]
    return FiniteCrystal(n, [e["weight"] for e in elems] if m else np.zeros((0, n)), phi, eps, up,
                         [e["coords"] for e in elems], support)


_COLORS = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"]


def to_dot(b: FiniteCrystal, name: str = "crystal") -> str:
    """Graphviz digraph; edge ``x -> e_i x`` labelled ``i``, one color per ``i``."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
    for x in range(len(b)):
        label = ",".join(str(v) for v in b.weight(x))
        lines.append(f'  {x} [label="{label}"];')
    for i in sorted(b.support):
        color = _COLORS[(i - 1) % len(_COLORS)]
        for x in np.flatnonzero(b.up[:, i - 1] >= 0):
            lines.append(f'  {int(x)} -> {int(b.up[x, i - 1])} [label="{i}", color={color}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
