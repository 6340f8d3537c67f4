"""Scalar carriers: exact rationals, length polynomials in q = exp(-t), floats.

Exact rationals are plain :class:`fractions.Fraction` (ints are accepted
wherever a Fraction is); floats are plain Python floats.  The only custom
type is :class:`LengthPolynomial`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

DEFAULT_MERGE_TOL = 1e-9


def to_fraction(value) -> Fraction:
    """Parse ints, "p/q" strings, decimal strings and JSON numbers exactly.

    Floats go through their shortest decimal repr, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def is_zero(x) -> bool:
    if isinstance(x, LengthPolynomial):
        return not x.terms
    return x == 0


class LengthPolynomial:
    """Finite sum ``sum_l c_l * q**l`` with real exponents ``l`` and q = exp(-t).

    Coefficients are exact (int or Fraction).  Exponents closer than
    ``merge_tol`` are merged into one key; the representative is the smallest
    exponent of the cluster, so the result depends only on the multiset of
    exponents and not on insertion order.
    """

    __slots__ = ("terms", "merge_tol")

    def __init__(self, terms=None, merge_tol: float = DEFAULT_MERGE_TOL):
        self.merge_tol = merge_tol
        self.terms: tuple[tuple[float, Fraction], ...] = _canonical(terms or {}, merge_tol)

    # constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, exponent: float, coefficient=1, merge_tol: float = DEFAULT_MERGE_TOL):
        if exponent < 0 or not math.isfinite(exponent):
            raise ValueError(f"exponent must be finite and nonnegative, got {exponent!r}")
        return cls({float(exponent): coefficient}, merge_tol)

    @classmethod
    def one(cls, merge_tol: float = DEFAULT_MERGE_TOL):
        return cls({0.0: 1}, merge_tol)

    @classmethod
    def zero(cls, merge_tol: float = DEFAULT_MERGE_TOL):
        return cls({}, merge_tol)

    @classmethod
    def from_pairs(cls, pairs, merge_tol: float = DEFAULT_MERGE_TOL):
        """Accumulate ``(exponent, coefficient)`` pairs, merging exponents once at the end."""
        acc: dict[float, Fraction] = {}
        for exponent, coef in pairs:
            acc[exponent] = acc.get(exponent, 0) + coef
        return cls(acc, merge_tol)

    # inspection ---------------------------------------------------------
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, exponent: float):
        for key, coef in self.terms:
            if abs(key - exponent) <= self.merge_tol:
                return coef
        return 0

    def exponents(self) -> list[float]:
        return [key for key, _ in self.terms]

    def __call__(self, t: float) -> float:
        return self.evaluate(t)

    def evaluate(self, t: float) -> float:
        """Value at ``q = exp(-t)``; the sum is exactly rounded (math.fsum)."""
        return math.fsum(float(c) * math.exp(-t * key) for key, c in self.terms)

    # ring operations ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LengthPolynomial):
            return other
        if isinstance(other, (Rational, int)):
            return LengthPolynomial({0.0: other}, self.merge_tol)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        for key, coef in other.terms:
            acc[key] = acc.get(key, 0) + coef
        return LengthPolynomial(acc, self.merge_tol)

    __radd__ = __add__

    def __neg__(self):
        return LengthPolynomial({k: -c for k, c in self.terms}, self.merge_tol)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[float, Fraction] = {}
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                key = k1 + k2
                acc[key] = acc.get(key, 0) + c1 * c2
        return LengthPolynomial(acc, self.merge_tol)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        tol = max(self.merge_tol, other.merge_tol)
        return all(
            abs(k1 - k2) <= tol and c1 == c2
            for (k1, c1), (k2, c2) in zip(self.terms, other.terms)
        )

    def __hash__(self):
        return hash(tuple(c for _, c in self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LengthPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, coef in self.terms:
            parts.append(f"{coef}*q^{key!r}" if key else f"{coef}")
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [{"exponent": key, "coefficient": format_rational(c)} for key, c in self.terms]

    @classmethod
    def from_json(cls, data, merge_tol: float = DEFAULT_MERGE_TOL):
        return cls.from_pairs(
            ((float(item["exponent"]), to_fraction(item["coefficient"])) for item in data),
            merge_tol,
        )


def _canonical(terms, tol):
    if isinstance(terms, dict):
        items = sorted(terms.items())
    else:
        items = sorted(terms)
    out = []
    cluster_key = None
    cluster_coef = 0
    prev = None
    for key, coef in items:
        key = float(key)
        if cluster_key is not None and key - prev <= tol:
            cluster_coef += coef
        else:
            if cluster_key is not None and cluster_coef != 0:
                out.append((cluster_key, _normalize(cluster_coef)))
            cluster_key, cluster_coef = key, coef
        prev = key
    if cluster_key is not None and cluster_coef != 0:
        out.append((cluster_key, _normalize(cluster_coef)))
    return tuple(out)


def _normalize(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def product(factors, one=1):
    """Product of edge weights.

    Monomial length polynomials are multiplied by summing exponents with
    ``math.fsum`` so that the exponent does not depend on factor order.
    """
    factors = list(factors)
    if not factors:
        return one
    if all(isinstance(f, LengthPolynomial) and f.is_monomial() for f in factors):
        exponent = math.fsum(f.terms[0][0] for f in factors)
        coef = 1
        for f in factors:
            coef *= f.terms[0][1]
        return LengthPolynomial({exponent: coef}, factors[0].merge_tol)
    result = factors[0]
    for f in factors[1:]:
        result = result * f
    return result


def evaluate(x, t: float | None = None) -> float:
    """Float value of any scalar (length polynomials need ``t``)."""
    if isinstance(x, LengthPolynomial):
        if t is None:
            raise ValueError("evaluating a length polynomial requires t")
        return x.evaluate(t)
    return float(x)


def format_rational(x) -> str:
    return str(Fraction(x))


def to_jsonable(x):
    """Wire form: rationals as "p/q" strings, polynomials as term arrays, floats as-is."""
    if isinstance(x, LengthPolynomial):
        return x.to_json()
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    raise TypeError(f"unsupported scalar {x!r}")
