"""Exact cohomology ring of a smooth projective curve of genus ``g``.

Basis indices: ``0`` is the unit, ``1..g`` are the classes ``alpha_i``,
``g+1..2g`` the classes ``beta_i`` (both odd, degree 1) and ``2g+1`` is the
point class ``omega``.  The symplectic convention is ``alpha_i * beta_i = omega``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import sympy


class GenusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CurveRing:
    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError(f"genus must be non-negative, got {self.genus}")

    @property
    def dim(self) -> int:
        return 2 * self.genus + 2

    @property
    def point(self) -> int:
        return 2 * self.genus + 1

    def degree(self, i: int) -> int:
        self._check(i)
        if i == 0:
            return 0
        return 2 if i == self.point else 1

    def parity(self, i: int) -> int:
        return self.degree(i) % 2

    def label(self, i: int) -> str:
        self._check(i)
        g = self.genus
        if i == 0:
            return "1"
        if i == self.point:
            return "w"
        if i <= g:
            return f"a{i}"
        return f"b{i - g}"

    def _check(self, i: int) -> None:
        if not 0 <= i <= 2 * self.genus + 1:
            raise IndexError(f"basis index {i} out of range for genus {self.genus}")


def basis_product(g: int, i: int, j: int) -> tuple[int, int] | None:
    """Product of two basis classes as ``(sign, index)``, or None when it vanishes."""
    pt = 2 * g + 1
    if i == 0:
        return 1, j
    if j == 0:
        return 1, i
    if i == pt or j == pt:
        return None
    if i <= g and j == i + g:
        return 1, pt
    if j <= g and i == j + g:
        return -1, pt
    return None


def _clean(items: Iterable[tuple]) -> tuple:
    acc: dict = {}
    for key, val in items:
        acc[key] = acc.get(key, Fraction(0)) + Fraction(val)
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


@dataclass(frozen=True)
class CurveClass:
    """Sparse rational combination of basis classes."""

    g: int
    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, g: int, coeffs: Mapping[int, object]) -> "CurveClass":
        ring = CurveRing(g)
        for i in coeffs:
            ring._check(i)
        return cls(g, _clean(coeffs.items()))

    @classmethod
    def basis(cls, g: int, i: int) -> "CurveClass":
        return cls.from_dict(g, {i: 1})

    @classmethod
    def unit(cls, g: int) -> "CurveClass":
        return cls.basis(g, 0)

    @classmethod
    def point(cls, g: int) -> "CurveClass":
        return cls.basis(g, 2 * g + 1)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> int | None:
        """Common parity of the terms, or None when inhomogeneous."""
        ring = CurveRing(self.g)
        pars = {ring.parity(i) for i, _ in self.terms}
        if len(pars) > 1:
            return None
        return pars.pop() if pars else 0

    def __add__(self, other: "CurveClass") -> "CurveClass":
        _same_genus(self, other)
        return CurveClass(self.g, _clean(self.terms + other.terms))

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        return self + other.scale(-1)

    def scale(self, c) -> "CurveClass":
        return CurveClass(self.g, _clean((i, v * Fraction(c)) for i, v in self.terms))

    def __mul__(self, other: "CurveClass") -> "CurveClass":
        return mul(self, other)

    def to_json(self) -> dict:
        return {"g": self.g, "coeffs": {str(i): str(v) for i, v in self.terms}}

    @classmethod
    def from_json(cls, data) -> "CurveClass":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_dict(int(data["g"]), {int(k): Fraction(v) for k, v in data["coeffs"].items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ring = CurveRing(self.g)
        return " + ".join(f"{v}*{ring.label(i)}" for i, v in self.terms)


def _same_genus(x, y) -> None:
    if x.g != y.g:
        raise GenusMismatch(f"genus mismatch: {x.g} vs {y.g}")


def mul(x: CurveClass, y: CurveClass) -> CurveClass:
    """Cup product (supercommutative)."""
    _same_genus(x, y)
    out = []
    for i, a in x.terms:
        for j, b in y.terms:
            p = basis_product(x.g, i, j)
            if p is not None:
                out.append((p[1], p[0] * a * b))
    return CurveClass(x.g, _clean(out))


def integrate(x: CurveClass) -> Fraction:
    return x.coeffs.get(2 * x.g + 1, Fraction(0))


def canonical_class(g: int) -> CurveClass:
    return CurveClass.from_dict(g, {2 * g + 1: 2 * g - 2})


@dataclass(frozen=True)
class BiClass:
    """Element of H*(C x C) = H*(C) (x) H*(C), sparse over pairs of basis indices."""

    g: int
    terms: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    @classmethod
    def from_dict(cls, g: int, coeffs: Mapping[tuple[int, int], object]) -> "BiClass":
        return cls(g, _clean(coeffs.items()))

    @property
    def coeffs(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.terms)

    def __add__(self, other: "BiClass") -> "BiClass":
        _same_genus(self, other)
        return BiClass(self.g, _clean(self.terms + other.terms))

    def __mul__(self, other: "BiClass") -> "BiClass":
        """Product in the graded tensor product: (a|b)(c|d) = (-1)^{|b||c|} ac|bd."""
        _same_genus(self, other)
        ring = CurveRing(self.g)
        out = []
        for (a, b), u in self.terms:
            for (c, d), v in other.terms:
                left = basis_product(self.g, a, c)
                right = basis_product(self.g, b, d)
                if left is None or right is None:
                    continue
                sign = -1 if ring.parity(b) and ring.parity(c) else 1
                out.append(((left[1], right[1]), sign * left[0] * right[0] * u * v))
        return BiClass(self.g, _clean(out))

    def swap(self) -> "BiClass":
        """Exchange tensor factors with the Koszul sign."""
        ring = CurveRing(self.g)
        return BiClass(
            self.g,
            _clean(
                ((b, a), -v if ring.parity(a) and ring.parity(b) else v)
                for (a, b), v in self.terms
            ),
        )

    def to_json(self) -> dict:
        return {"g": self.g, "coeffs": {f"{a},{b}": str(v) for (a, b), v in self.terms}}


def tensor(x: CurveClass, y: CurveClass) -> BiClass:
    _same_genus(x, y)
    return BiClass(x.g, _clean(((i, j), a * b) for i, a in x.terms for j, b in y.terms))


def contract_first(x: BiClass) -> CurveClass:
    """Integrate out the first tensor factor."""
    pt = 2 * x.g + 1
    return CurveClass(x.g, _clean((b, v) for (a, b), v in x.terms if a == pt))


@lru_cache(maxsize=None)
def diagonal_class(g: int) -> BiClass:
    """Class of the diagonal, obtained by inverting the intersection pairing.

    Solves sum_p <e_a, e_p> d_{pq} = [a == q], which is exactly the statement
    that contracting (gamma (x) 1) * delta in the first slot returns gamma.
    """
    ring = CurveRing(g)
    n = ring.dim
    gram = sympy.zeros(n, n)
    for a in range(n):
        for p in range(n):
            prod = basis_product(g, a, p)
            if prod is not None and prod[1] == ring.point:
                gram[a, p] = prod[0]
    inv = gram.inv()
    coeffs = {
        (p, q): Fraction(int(inv[p, q].p), int(inv[p, q].q))
        for p in range(n)
        for q in range(n)
        if inv[p, q] != 0
    }
    return BiClass.from_dict(g, coeffs)


def push_diagonal(gamma: CurveClass) -> BiClass:
    """Diagonal pushforward Delta_*(gamma) = (gamma (x) 1) * delta."""
    return tensor(gamma, CurveClass.unit(gamma.g)) * diagonal_class(gamma.g)


@lru_cache(maxsize=None)
def push_diagonal_basis(g: int, i: int) -> tuple[tuple[int, int, Fraction], ...]:
    """Cached ``push_diagonal`` of a basis class as ``(p, q, coeff)`` triples."""
    return tuple((p, q, v) for (p, q), v in push_diagonal(CurveClass.basis(g, i)).terms)


def dual_basis_index(g: int, i: int) -> int:
    """Index ``j`` with <e_i, e_j> nonzero."""
    pt = 2 * g + 1
    if i == 0:
        return pt
    if i == pt:
        return 0
    return i + g if i <= g else i - g
