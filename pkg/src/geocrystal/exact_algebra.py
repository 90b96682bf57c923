"""Exact multivariate Laurent polynomials and rational functions over Q.

Polynomial arithmetic and multivariate GCD are delegated to FLINT
(``python-flint``'s ``fmpq_mpoly``).  A rational function is stored in the
canonical form

    x^shift * num / den

where ``num`` and ``den`` are honest polynomials with no monomial factor,
``gcd(num, den) = 1`` and ``den`` is monic in graded-lex order.  Equality is
therefore structural.

Variables are interned in an append-only :class:`VariableContext`.  A value
created when the context had ``k`` names lives in the FLINT context of the
first ``k`` names and is lifted on demand when mixed with newer values.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

import flint

__all__ = [
    "AlgebraError",
    "ParseError",
    "PositivityError",
    "VariableContext",
    "DEFAULT_CONTEXT",
    "LaurentPolynomial",
    "RationalFunction",
    "PositiveRationalFunction",
    "var",
    "variables",
    "const",
    "arith",
    "substitute",
    "eval_at",
    "certify_positive",
    "is_positive",
    "parse",
    "to_text",
]

Scalar = Union[int, Fraction]


class AlgebraError(ArithmeticError):
    """Raised for undefined operations such as a vanishing denominator."""


class ParseError(ValueError):
    """Raised when an expression does not match the text grammar."""


class PositivityError(ValueError):
    """A reduced rational function has a negative coefficient.

    ``terms`` lists ``(part, exponent, coefficient)`` for every offending
    term, with ``part`` either ``"numerator"`` or ``"denominator"``.
    """

    def __init__(self, message: str, terms: list):
        super().__init__(message)
        self.terms = terms


class VariableContext:
    """Append-only table of variable names shared by related values."""

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self._lock = threading.Lock()
        self._flint_cache: dict[int, object] = {}
        for name in names:
            self.index(name)

    def index(self, name: str) -> int:
        """Return the index of ``name``, interning it if new."""
        idx = self._index.get(name)
        if idx is not None:
            return idx
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ValueError(f"invalid variable name {name!r}")
        with self._lock:
            idx = self._index.get(name)
            if idx is None:
                idx = len(self._names)
                self._names.append(name)
                self._index[name] = idx
        return idx

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._names)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def flint_ctx(self, k: int):
        ctx = self._flint_cache.get(k)
        if ctx is None:
            ctx = flint.fmpq_mpoly_ctx.get(tuple(self._names[:k]), "deglex")
            self._flint_cache[k] = ctx
        return ctx


DEFAULT_CONTEXT = VariableContext()


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _lift(poly, ctx):
    if poly.context() is ctx:
        return poly
    return poly.project_to_context(ctx)


def _pad(shift: tuple, k: int) -> tuple:
    return shift + (0,) * (k - len(shift))


def _strip(exps: Sequence[int]) -> tuple:
    exps = tuple(exps)
    end = len(exps)
    while end and exps[end - 1] == 0:
        end -= 1
    return exps[:end]


def _monomial(ctx, exps: Sequence[int]):
    return ctx.term(exp_vec=tuple(exps), coeff=flint.fmpq(1))


def _split_content(poly):
    """Return ``(poly / m, exponent of m)`` for the monomial content ``m``."""
    content = poly.term_content()
    exps = tuple(content.monoms()[0])
    if any(exps):
        return poly / _monomial(poly.context(), exps), exps
    return poly, exps


class RationalFunction:
    """Exact rational function in canonical reduced form."""

    __slots__ = ("_vctx", "_k", "_num", "_den", "_shift", "_hash")

    def __init__(self):
        raise TypeError("use the module constructors (var, const, parse, ...)")

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, vctx, num, den, shift):
        obj = object.__new__(cls)
        obj._vctx = vctx
        obj._k = den.context().nvars()
        obj._num = num
        obj._den = den
        obj._shift = shift
        obj._hash = None
        return obj

    @classmethod
    def _build(cls, vctx, num, den, shift, reduce=True):
        """Normalize ``x^shift * num/den`` where num, den live in one context."""
        ctx = den.context()
        k = ctx.nvars()
        if den.is_zero():
            raise AlgebraError("denominator is identically zero")
        if num.is_zero():
            return cls._raw(vctx, ctx.from_dict({}), ctx.constant(1), (0,) * k)
        if reduce and not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        num, en = _split_content(num)
        den, ed = _split_content(den)
        if any(en) or any(ed):
            shift = tuple(s + a - b for s, a, b in zip(shift, en, ed))
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            num = num * inv
            den = den * inv
        return cls._raw(vctx, num, den, shift)

    @classmethod
    def constant(cls, value: Scalar, context: VariableContext | None = None):
        vctx = DEFAULT_CONTEXT if context is None else context
        ctx = vctx.flint_ctx(len(vctx))
        q = _to_fmpq(value)
        return cls._raw(vctx, ctx.constant(q), ctx.constant(1), (0,) * ctx.nvars())

    @classmethod
    def variable(cls, name: str, context: VariableContext | None = None):
        vctx = DEFAULT_CONTEXT if context is None else context
        vctx.index(name)
        ctx = vctx.flint_ctx(len(vctx))
        k = ctx.nvars()
        shift = [0] * k
        shift[vctx.index(name)] = 1
        return cls._raw(vctx, ctx.constant(1), ctx.constant(1), tuple(shift))

    @classmethod
    def from_terms(cls, terms: Mapping[Sequence[int], Scalar],
                   context: VariableContext | None = None):
        """Laurent polynomial from ``{exponent tuple: coefficient}``.

        Exponent tuples are indexed by the context's variable order and may
        be shorter than the context.
        """
        vctx = DEFAULT_CONTEXT if context is None else context
        ctx = vctx.flint_ctx(len(vctx))
        k = ctx.nvars()
        items = [(_pad(tuple(e), k), _to_fmpq(c)) for e, c in terms.items() if c != 0]
        if not items:
            return cls.constant(0, vctx)
        lo = tuple(min(e[j] for e, _ in items) for j in range(k))
        poly = ctx.from_dict({tuple(a - b for a, b in zip(e, lo)): c for e, c in items})
        one = ctx.constant(1)
        return cls._build(vctx, poly, one, lo, reduce=False)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other._vctx is not self._vctx:
                raise ValueError("operands live in different variable contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self._vctx)
        return NotImplemented

    def _at(self, k: int):
        """Return ``(num, den, shift)`` lifted to ``k`` variables."""
        if k == self._k:
            return self._num, self._den, self._shift
        ctx = self._vctx.flint_ctx(k)
        return _lift(self._num, ctx), _lift(self._den, ctx), _pad(self._shift, k)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        k = max(self._k, other._k)
        ctx = self._vctx.flint_ctx(k)
        n1, d1, s1 = self._at(k)
        n2, d2, s2 = other._at(k)
        m = tuple(min(a, b) for a, b in zip(s1, s2))
        if any(a != b for a, b in zip(s1, m)):
            n1 = n1 * _monomial(ctx, [a - b for a, b in zip(s1, m)])
        if any(a != b for a, b in zip(s2, m)):
            n2 = n2 * _monomial(ctx, [a - b for a, b in zip(s2, m)])
        if d1 == d2:
            num = n1 + n2
            den = d1
            return RationalFunction._build(self._vctx, num, den, m)
        g = d1.gcd(d2)
        if g.is_one():
            num = n1 * d2 + n2 * d1
            den = d1 * d2
            # gcd(num, den) is a unit here: operands are reduced.
            return RationalFunction._build(self._vctx, num, den, m, reduce=False)
        d1g = d1 / g
        d2g = d2 / g
        num = n1 * d2g + n2 * d1g
        den = d1g * d2
        h = num.gcd(g)
        if not h.is_one():
            num = num / h
            den = den / h
        return RationalFunction._build(self._vctx, num, den, m, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self._vctx, -self._num, self._den, self._shift)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.constant(0, self._vctx)
        k = max(self._k, other._k)
        n1, d1, s1 = self._at(k)
        n2, d2, s2 = other._at(k)
        shift = tuple(a + b for a, b in zip(s1, s2))
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        return RationalFunction._build(self._vctx, n1 * n2, d1 * d2, shift, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        shift = tuple(-s for s in self._shift)
        return RationalFunction._build(self._vctx, self._den, self._num, shift, reduce=False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return RationalFunction.constant(1, self._vctx)
        shift = tuple(s * e for s in self._shift)
        return RationalFunction._raw(self._vctx, self._num ** e, self._den ** e, shift)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other, self._vctx)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if other._vctx is not self._vctx:
            return False
        k = max(self._k, other._k)
        n1, d1, s1 = self._at(k)
        n2, d2, s2 = other._at(k)
        return s1 == s2 and d1 == d2 and n1 == n2

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((_strip(self._shift), self._key(self._num), self._key(self._den)))
        return self._hash

    @staticmethod
    def _key(poly):
        return tuple(sorted((_strip(e), (int(c.p), int(c.q))) for e, c in poly.terms()))

    # -- inspection -------------------------------------------------------

    @property
    def context(self) -> VariableContext:
        return self._vctx

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        """True when the reduced denominator is a monomial."""
        return self._den.is_one()

    def is_monomial(self) -> bool:
        return self._den.is_one() and len(self._num) == 1

    def is_constant(self) -> bool:
        return self._den.is_one() and self._num.is_constant() and not any(self._shift)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        if self._num.is_zero():
            return Fraction(0)
        return _to_fraction(self._num.leading_coefficient())

    def _terms_of(self, poly, shift) -> dict:
        return {
            tuple(a + b for a, b in zip(e, shift)): _to_fraction(c)
            for e, c in poly.terms()
        }

    def _poly_part(self, poly, exps) -> "LaurentPolynomial":
        ctx = poly.context()
        if any(exps):
            poly = poly * _monomial(ctx, exps)
        return LaurentPolynomial._build(self._vctx, poly, ctx.constant(1), (0,) * self._k, reduce=False)

    @property
    def numerator(self) -> "LaurentPolynomial":
        """Polynomial numerator of the coprime polynomial presentation."""
        return LaurentPolynomial._wrap(self._poly_part(self._num, [max(s, 0) for s in self._shift]))

    @property
    def denominator(self) -> "LaurentPolynomial":
        """Polynomial denominator of the coprime polynomial presentation.

        Monomial factors are not absorbed: ``c1 + c2/c3`` has denominator
        ``c3`` and numerator ``c1*c3 + c2``.
        """
        return LaurentPolynomial._wrap(self._poly_part(self._den, [max(-s, 0) for s in self._shift]))

    def numerator_terms(self) -> dict:
        """``{exponent: coefficient}`` of ``x^shift * num`` (full-length exponents)."""
        return self._terms_of(self._num, self._shift)

    def denominator_terms(self) -> dict:
        return self._terms_of(self._den, (0,) * self._k)

    def variables(self) -> tuple[str, ...]:
        """Names of the variables that occur, in context order."""
        names = self._vctx.names
        used = set()
        for poly in (self._num, self._den):
            for j, d in enumerate(poly.degrees()):
                if d > 0:
                    used.add(j)
        used.update(j for j, s in enumerate(self._shift) if s)
        return tuple(names[j] for j in sorted(used))

    def exponent_arrays(self, names: Sequence[str]):
        """Exponent rows of numerator and denominator restricted to ``names``.

        Raises ``ValueError`` if a variable outside ``names`` occurs.
        """
        idx = [self._vctx.index(n) if n in self._vctx else None for n in names]
        allowed = {j for j in idx if j is not None}
        rows = []
        for terms in (self.numerator_terms(), self.denominator_terms()):
            part = []
            for e in terms:
                if any(v and j not in allowed for j, v in enumerate(e)):
                    bad = [self._vctx.names[j] for j, v in enumerate(e) if v and j not in allowed]
                    raise ValueError(f"variables {bad} not among {tuple(names)}")
                part.append(tuple(e[j] if j is not None and j < len(e) else 0 for j in idx))
            rows.append(part)
        return rows[0], rows[1]

    def has_nonnegative_coefficients(self) -> bool:
        return all(c >= 0 for c in self._num.coeffs()) and all(c >= 0 for c in self._den.coeffs())

    # -- output ------------------------------------------------------------

    def __repr__(self):
        return f"RationalFunction({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


class PositiveRationalFunction(RationalFunction):
    """A rational function whose reduced form has nonnegative coefficients.

    Obtain instances through :func:`certify_positive`.  Arithmetic returns
    plain :class:`RationalFunction` values.
    """

    __slots__ = ()

    @classmethod
    def _from(cls, f: RationalFunction) -> "PositiveRationalFunction":
        obj = cls._raw(f._vctx, f._num, f._den, f._shift)
        return obj

    def __repr__(self):
        return f"PositiveRationalFunction({to_text(self)!r})"


class LaurentPolynomial(RationalFunction):
    """A rational function whose reduced denominator is 1."""

    __slots__ = ()

    @classmethod
    def _wrap(cls, f: RationalFunction) -> "LaurentPolynomial":
        if not f._den.is_one():
            raise ValueError("not a Laurent polynomial")
        return cls._raw(f._vctx, f._num, f._den, f._shift)

    @classmethod
    def of(cls, f: RationalFunction) -> "LaurentPolynomial":
        return cls._wrap(f)

    def terms(self) -> dict:
        return self.numerator_terms()

    def __len__(self):
        return len(self._num)

    def __repr__(self):
        return f"LaurentPolynomial({to_text(self)!r})"


# -- module-level constructors ----------------------------------------------


def var(name: str, context: VariableContext | None = None) -> RationalFunction:
    return RationalFunction.variable(name, context)


def variables(names: Union[str, Iterable[str]], context: VariableContext | None = None):
    """``variables("t1 t2 c1")`` returns a tuple of variables."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    names = list(names)
    for n in names:
        (DEFAULT_CONTEXT if context is None else context).index(n)
    return tuple(var(n, context) for n in names)


def const(value: Scalar, context: VariableContext | None = None) -> RationalFunction:
    return RationalFunction.constant(value, context)


def arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Apply ``op`` in ``{"add", "sub", "mul", "div"}``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(b, RationalFunction) and b.is_zero() or b == 0:
            raise ZeroDivisionError("division by the zero rational function")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# -- substitution and evaluation ---------------------------------------------


def _as_rf(value, vctx) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.constant(value, vctx)


def substitute(f: RationalFunction, assignment: Mapping[str, object]) -> RationalFunction:
    """Compose ``f`` with ``v -> assignment[v]``; unassigned variables stay.

    Each Laurent part is homogenized against the images' numerators and
    denominators so only one GCD is needed at the end.
    """
    vctx = f._vctx
    images = {vctx.index(n): _as_rf(v, vctx) for n, v in assignment.items()}
    if not images:
        return f
    k = max([len(vctx)] + [r._k for r in images.values()])
    ctx = vctx.flint_ctx(k)
    one = ctx.constant(1)

    top: dict[int, object] = {}
    bottom: dict[int, object] = {}
    for j in range(f._k):
        r = images.get(j)
        if r is None:
            top[j] = ctx.gen(j)
            bottom[j] = one
            continue
        n, d, s = r._at(k)
        pos = [max(x, 0) for x in s]
        neg = [max(-x, 0) for x in s]
        if n.is_zero():
            top[j] = ctx.from_dict({})
        else:
            top[j] = n * _monomial(ctx, pos) if any(pos) else n
        bottom[j] = d * _monomial(ctx, neg) if any(neg) else d

    cache: dict[tuple, object] = {}

    def power(table, tag, j, e):
        if e == 0:
            return one
        key = (tag, j, e)
        p = cache.get(key)
        if p is None:
            p = table[j] if e == 1 else power(table, tag, j, e - 1) * table[j]
            cache[key] = p
        return p

    def homogenize(terms):
        exps = list(terms)
        lo = [min(e[j] for e in exps) for j in range(f._k)]
        hi = [max(e[j] for e in exps) for j in range(f._k)]
        acc = ctx.from_dict({})
        for e, c in terms.items():
            t = ctx.constant(_to_fmpq(c))
            for j in range(f._k):
                a = e[j] - lo[j]
                b = hi[j] - e[j]
                if a:
                    t = t * power(top, "t", j, a)
                if b:
                    t = t * power(bottom, "b", j, b)
            acc = acc + t
        return acc, lo, hi

    if f.is_zero():
        return RationalFunction.constant(0, vctx)
    hp, lo_p, hi_p = homogenize(f.numerator_terms())
    hd, lo_d, hi_d = homogenize(f.denominator_terms())
    num, den = hp, hd
    for j in range(f._k):
        e = lo_p[j] - lo_d[j]
        h = hi_d[j] - hi_p[j]
        if e > 0:
            num = num * power(top, "t", j, e)
        elif e < 0:
            den = den * power(top, "t", j, -e)
        if h > 0:
            num = num * power(bottom, "b", j, h)
        elif h < 0:
            den = den * power(bottom, "b", j, -h)
    if den.is_zero():
        raise AlgebraError("substitution makes a denominator identically zero")
    return RationalFunction._build(vctx, num, den, (0,) * k)


def eval_at(f: RationalFunction, point: Mapping[str, Scalar], require_positive: bool = True) -> Fraction:
    """Exact value of ``f`` at ``point``.

    Every occurring variable must be assigned.  With ``require_positive``
    the assigned values must be strictly positive.
    """
    vctx = f._vctx
    names = vctx.names
    args = []
    for j in range(f._k):
        name = names[j]
        if name in point:
            v = point[name]
            if require_positive and v <= 0:
                raise ValueError(f"{name} = {v} is not strictly positive")
            args.append(_to_fmpq(v))
        else:
            args.append(None)
    needed = set(f.variables())
    missing = [names[j] for j in range(f._k) if args[j] is None and names[j] in needed]
    if missing:
        raise ValueError(f"unassigned variables {missing}")
    args = [a if a is not None else flint.fmpq(1) for a in args]
    return evaluate_args(f, args)


def evaluate_args(f: RationalFunction, args: Sequence) -> Fraction:
    """Evaluate with positional ``fmpq`` arguments in context order."""
    den = f._den(*args) if f._k else f._den.leading_coefficient()
    if den == 0:
        raise AlgebraError("denominator vanishes at the point")
    num = f._num(*args) if f._k else (f._num.leading_coefficient() if not f._num.is_zero() else flint.fmpq(0))
    val = num / den
    for a, s in zip(args, f._shift):
        if s:
            if a == 0:
                raise AlgebraError("monomial denominator vanishes at the point")
            val = val * a ** s
    return _to_fraction(val)


def compile_evaluator(funcs: Sequence[RationalFunction], names: Sequence[str]) -> Callable:
    """Return ``g(values) -> list[Fraction]`` evaluating ``funcs`` at ``names``.

    Cheaper than repeated :func:`eval_at` calls in randomized harnesses.
    """
    if not funcs:
        return lambda values: []
    vctx = funcs[0]._vctx
    k = max(f._k for f in funcs)
    pos = {vctx.index(n): i for i, n in enumerate(names)}
    lifted = []
    for f in funcs:
        n, d, s = f._at(k)
        lifted.append(RationalFunction._raw(vctx, n, d, s))

    def run(values):
        args = [flint.fmpq(1)] * k
        for j, i in pos.items():
            if j < k:
                args[j] = _to_fmpq(values[i])
        return [evaluate_args(f, args) for f in lifted]

    return run


# -- positivity ---------------------------------------------------------------


def certify_positive(f: RationalFunction) -> PositiveRationalFunction:
    """Certify that the reduced form of ``f`` has nonnegative coefficients."""
    if isinstance(f, PositiveRationalFunction):
        return f
    if f.is_zero():
        raise PositivityError("the zero function is not positive", [])
    bad = []
    for part, terms in (("numerator", f.numerator_terms()), ("denominator", f.denominator_terms())):
        for e, c in terms.items():
            if c < 0:
                bad.append((part, _strip(e), c))
    if bad:
        shown = ", ".join(f"{p}:{e}:{c}" for p, e, c in bad[:8])
        raise PositivityError(f"positivity not certified; negative terms {shown}", bad)
    return PositiveRationalFunction._from(f)


def is_positive(f: RationalFunction) -> bool:
    return not f.is_zero() and f.has_nonnegative_coefficients()


# -- text grammar -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.group(1):
            tokens.append(("num", m.group(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2)))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, vctx: VariableContext):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vctx = vctx

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ParseError(f"expected {want} at token {self.pos}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero in expression")
                acc = acc / rhs
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() in (("op", "-"), ("op", "+")):
                sign = -1 if self.take()[1] == "-" else 1
            exp = sign * int(self.take("num")[1])
            if exp < 0 and base.is_zero():
                raise ParseError("negative power of zero")
            base = base ** exp
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return RationalFunction.constant(int(value), self.vctx)
        if kind == "name":
            self.take()
            return RationalFunction.variable(value, self.vctx)
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected token {value!r} at position {self.pos}")


def parse(text: str, context: VariableContext | None = None) -> RationalFunction:
    """Parse ``text`` in the grammar ``q * t1^a * c2^b`` with ``+ - * / ( )``."""
    parser = _Parser(text, DEFAULT_CONTEXT if context is None else context)
    if not parser.tokens:
        raise ParseError("empty expression")
    result = parser.expr()
    if parser.pos != len(parser.tokens):
        raise ParseError(f"trailing input at token {parser.pos}: {parser.peek()[1]!r}")
    return result


def _poly_text(terms: dict, names: Sequence[str]) -> str:
    def key(item):
        e = item[0]
        return (-sum(e), tuple(-x for x in e))

    parts = []
    for e, c in sorted(terms.items(), key=key):
        factors = []
        for j, x in enumerate(e):
            if x == 1:
                factors.append(names[j])
            elif x:
                factors.append(f"{names[j]}^{x}")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        parts.append(("-" if c < 0 else "+", "*".join(factors)))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def to_text(f: RationalFunction) -> str:
    """Serialize ``f`` in the grammar accepted by :func:`parse`."""
    if f.is_zero():
        return "0"
    names = f._vctx.names
    num = _poly_text(f.numerator_terms(), names)
    if f._den.is_one():
        return num
    den = _poly_text(f.denominator_terms(), names)
    return f"({num})/({den})"
