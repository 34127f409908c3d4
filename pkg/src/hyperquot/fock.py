"""The bigraded super-Fock module spanned by creation monomials on the vacuum.

A generator ``a_k^(v)(gamma_c)`` is stored internally as the integer code
``((k - 1) * r + v) * (2g + 2) + c``; canonical monomials are tuples of codes
in strictly descending order (odd codes never repeat, even codes may).
Descending code order is the same as descending ``(layer, charge, color)``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import kernels
from .curve import CurveRing


class KeyOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    n: int
    r: int
    g: int
    degV: int = 0
    bound: int = 3

    def __post_init__(self):
        if self.n < 1 or self.r < 1 or self.g < 0 or self.bound < 0:
            raise ValueError(f"invalid model parameters: {self}")

    @property
    def ncolors(self) -> int:
        return 2 * self.g + 2

    @property
    def ring(self) -> CurveRing:
        return CurveRing(self.g)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "ModelParams":
        return cls(**{k: int(data[k]) for k in ("n", "r", "g", "degV", "bound") if k in data})


class GeneratorKey(NamedTuple):
    """Creation generator ``a_k^(v)(gamma_c)``."""

    k: int
    v: int
    c: int

    def dvec(self, n: int) -> tuple[int, ...]:
        return tuple(1 if i >= self.k else 0 for i in range(1, n + 1))

    def cohdeg(self, g: int) -> int:
        return 2 * self.v + CurveRing(g).degree(self.c)

    def parity(self, g: int) -> int:
        return CurveRing(g).parity(self.c)


FockMonomial = tuple  # tuple[GeneratorKey, ...] in canonical (descending) order


def check_key(params: ModelParams, key: GeneratorKey) -> None:
    k, v, c = key
    if not (1 <= k <= params.n and 0 <= v < params.r and 0 <= c < params.ncolors):
        raise KeyOutOfRange(f"generator {tuple(key)} out of range for {params}")


def encode(params: ModelParams, key: GeneratorKey) -> int:
    check_key(params, key)
    k, v, c = key
    return ((k - 1) * params.r + v) * params.ncolors + c


def decode(params: ModelParams, code: int) -> GeneratorKey:
    rest, c = divmod(code, params.ncolors)
    km1, v = divmod(rest, params.r)
    return GeneratorKey(km1 + 1, v, c)


def code_layer(params: ModelParams, code: int) -> int:
    return code // (params.r * params.ncolors) + 1


def code_parity(params: ModelParams, code: int) -> int:
    return 1 if 1 <= code % params.ncolors <= 2 * params.g else 0


def code_cohdeg(params: ModelParams, code: int) -> int:
    rest, c = divmod(code, params.ncolors)
    return 2 * (rest % params.r) + params.ring.degree(c)


def sort_codes(params: ModelParams, codes: Sequence[int]) -> tuple[int, tuple]:
    return kernels.koszul_sort(tuple(codes), params.ncolors, params.g)


class FockElement:
    """Finite rational combination of canonical monomials.

    Treated as an immutable value: arithmetic returns new elements.
    """

    __slots__ = ("params", "_terms")

    def __init__(self, params: ModelParams, terms: dict | None = None):
        self.params = params
        self._terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def vacuum(cls, params: ModelParams) -> "FockElement":
        return cls(params, {(): Fraction(1)})

    @classmethod
    def zero(cls, params: ModelParams) -> "FockElement":
        return cls(params)

    @classmethod
    def monomial(cls, params: ModelParams, keys: Iterable, coeff=1) -> "FockElement":
        return normalize(params, keys, coeff)

    @property
    def raw(self) -> dict:
        """Mapping from code tuples to coefficients (do not mutate)."""
        return self._terms

    def terms(self) -> Iterator[tuple[FockMonomial, Fraction]]:
        for codes, c in sorted(self._terms.items(), key=lambda t: _mono_sort_key(self.params, t[0])):
            yield tuple(decode(self.params, x) for x in codes), c

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockElement):
            return NotImplemented
        return self.params == other.params and self._terms == other._terms

    def __hash__(self):
        return hash((self.params, frozenset(self._terms.items())))

    def __add__(self, other: "FockElement") -> "FockElement":
        _check_same(self, other)
        return FockElement(self.params, add_into(dict(self._terms), other._terms))

    def __sub__(self, other: "FockElement") -> "FockElement":
        return self + other.scale(-1)

    def __neg__(self) -> "FockElement":
        return self.scale(-1)

    def scale(self, c) -> "FockElement":
        c = Fraction(c)
        return FockElement(self.params, {m: v * c for m, v in self._terms.items()})

    def coefficient(self, keys: Iterable) -> Fraction:
        """Coefficient of the canonical monomial obtained by sorting ``keys``."""
        codes = [encode(self.params, GeneratorKey(*k)) for k in keys]
        sign, mono = sort_codes(self.params, codes)
        if sign == 0:
            return Fraction(0)
        return sign * self._terms.get(mono, Fraction(0))

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "terms": [
                {"gens": [list(k) for k in mono], "coeff": str(c)} for mono, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data, params: ModelParams | None = None) -> "FockElement":
        if isinstance(data, str):
            data = json.loads(data)
        p = params or ModelParams.from_json(data["params"])
        out = cls.zero(p)
        for t in data["terms"]:
            out = out + normalize(p, [GeneratorKey(*g) for g in t["gens"]], Fraction(t["coeff"]))
        return out

    def __repr__(self) -> str:
        return f"FockElement({format_element(self)})"


def _check_same(x: FockElement, y: FockElement) -> None:
    if x.params != y.params:
        raise ValueError("elements belong to different models")


def add_into(acc: dict, other: dict, scale=1) -> dict:
    """Accumulate ``scale * other`` into ``acc`` in place, dropping zeros."""
    for m, c in other.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def normalize(params: ModelParams, keys: Iterable, coeff=1) -> FockElement:
    """Canonical form of the product of ``keys`` applied to the vacuum."""
    codes = [encode(params, GeneratorKey(*k)) for k in keys]
    if len(codes) > params.bound:
        raise TruncationError(f"monomial of length {len(codes)} exceeds bound {params.bound}")
    sign, mono = sort_codes(params, codes)
    if sign == 0:
        return FockElement.zero(params)
    return FockElement(params, {mono: sign * Fraction(coeff)})


class TruncationError(ValueError):
    pass


def mono_dvec(params: ModelParams, mono: Sequence[int]) -> tuple[int, ...]:
    d = [0] * params.n
    for code in mono:
        for i in range(code_layer(params, code) - 1, params.n):
            d[i] += 1
    return tuple(d)


def mono_cohdeg(params: ModelParams, mono: Sequence[int]) -> int:
    return sum(code_cohdeg(params, x) for x in mono)


def mono_parity(params: ModelParams, mono: Sequence[int]) -> int:
    return sum(code_parity(params, x) for x in mono) % 2


def mono_level(params: ModelParams, mono: Sequence[int]) -> int:
    """Smallest m with the monomial in the filtration step H_m."""
    return code_layer(params, mono[0]) if mono else 0


def _mono_sort_key(params: ModelParams, mono: tuple) -> tuple:
    return (mono_cohdeg(params, mono), tuple(-x for x in mono))


def bidegree(x: FockElement) -> set[tuple[tuple[int, ...], int]]:
    return {(mono_dvec(x.params, m), mono_cohdeg(x.params, m)) for m in x.raw}


def filtration_level(x: FockElement) -> int:
    return max((mono_level(x.params, m) for m in x.raw), default=0)


def layer_codes(params: ModelParams, k: int) -> list[int]:
    """Codes of all layer-``k`` generators, descending."""
    base = (k - 1) * params.r * params.ncolors
    return list(range(base + params.r * params.ncolors - 1, base - 1, -1))


def _layer_monomials(params: ModelParams, k: int, size: int) -> list[tuple]:
    codes = layer_codes(params, k)
    even = [x for x in codes if not code_parity(params, x)]
    odd = [x for x in codes if code_parity(params, x)]
    out = []
    for n_odd in range(min(size, len(odd)) + 1):
        for o in combinations(odd, n_odd):
            for e in combinations_with_replacement(even, size - n_odd):
                out.append(tuple(sorted(o + e, reverse=True)))
    return out


def layer_sizes(dvec: Sequence[int]) -> list[int] | None:
    """Number of generators per layer for ``dvec``; None if not non-decreasing."""
    sizes = []
    prev = 0
    for d in dvec:
        if d < prev:
            return None
        sizes.append(d - prev)
        prev = d
    return sizes


def enumerate_basis(params: ModelParams, dvec: Sequence[int]) -> list[FockMonomial]:
    """All canonical monomials of multidegree ``dvec``, ordered by cohdeg."""
    return [tuple(decode(params, x) for x in m) for m in enumerate_codes(params, dvec)]


def enumerate_codes(params: ModelParams, dvec: Sequence[int]) -> list[tuple]:
    dvec = tuple(dvec)
    if len(dvec) != params.n:
        raise ValueError(f"dvec {dvec} has length {len(dvec)}, expected {params.n}")
    if any(d < 0 for d in dvec):
        raise ValueError(f"dvec {dvec} has negative entries")
    if dvec[-1] > params.bound:
        raise TruncationError(f"d_n = {dvec[-1]} exceeds bound {params.bound}")
    sizes = layer_sizes(dvec)
    if sizes is None:
        return []
    per_layer = [_layer_monomials(params, k, s) for k, s in zip(range(params.n, 0, -1), reversed(sizes))]
    monos = [sum(parts, ()) for parts in product(*per_layer)]
    monos.sort(key=lambda m: _mono_sort_key(params, m))
    return monos


def basis_elements(params: ModelParams, dvec: Sequence[int]) -> list[FockElement]:
    return [FockElement(params, {m: 1}) for m in enumerate_codes(params, dvec)]


def nondecreasing_dvecs(n: int, bound: int) -> Iterator[tuple[int, ...]]:
    """All non-decreasing n-vectors with entries in 0..bound, lexicographic."""
    def rec(prefix, lo):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for d in range(lo, bound + 1):
            yield from rec(prefix + [d], d)

    yield from rec([], 0)


def format_key(params: ModelParams, key: GeneratorKey) -> str:
    return f"a_{key.k}^({key.v})({params.ring.label(key.c)})"


def format_monomial(params: ModelParams, mono: FockMonomial) -> str:
    if not mono:
        return "|0>"
    return " ".join(format_key(params, k) for k in mono) + " |0>"


def format_element(x: FockElement) -> str:
    if x.is_zero():
        return "0"
    return " + ".join(f"({c}) {format_monomial(x.params, m)}" for m, c in x.terms())
