"""Truncated multivariate series in t_1..t_n and z, and the Betti product formula.

Series are stored by raw exponent: a key ``(dvec, zdeg)`` stands for
``t_1^{d_1} ... t_n^{d_n} z^{zdeg}``.  The product formula is written in the
variables ``T_k = t_k t_{k+1} ... t_n``; ``T_k^m`` adds ``m`` to ``d_k..d_n``,
so the truncation ``d_n <= bound`` is respected by every factor.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from . import kernels
from .fock import ModelParams, TruncationError, layer_sizes, nondecreasing_dvecs

Key = tuple  # (dvec, zdeg)


@dataclass
class TruncSeries:
    n: int
    bound: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (dvec, zdeg), c in self.coeffs.items():
            dvec = tuple(dvec)
            if len(dvec) != self.n:
                raise ValueError(f"exponent {dvec} has wrong length for n={self.n}")
            if c and dvec[-1] <= self.bound:
                clean[(dvec, zdeg)] = clean.get((dvec, zdeg), 0) + int(c)
        self.coeffs = {k: v for k, v in clean.items() if v}

    @classmethod
    def one(cls, n: int, bound: int) -> "TruncSeries":
        return cls(n, bound, {((0,) * n, 0): 1})

    def _compatible(self, other: "TruncSeries") -> None:
        if (self.n, self.bound) != (other.n, other.bound):
            raise ValueError("series have different shapes")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._compatible(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TruncSeries(self.n, self.bound, out)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.n, self.bound, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._compatible(other)
        out: dict = {}
        for (d1, z1), c1 in self.coeffs.items():
            for (d2, z2), c2 in other.coeffs.items():
                if d1[-1] + d2[-1] > self.bound:
                    continue
                key = (tuple(a + b for a, b in zip(d1, d2)), z1 + z2)
                out[key] = out.get(key, 0) + c1 * c2
        return TruncSeries(self.n, self.bound, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.n, self.bound, self.coeffs) == (other.n, other.bound, other.coeffs)

    def coefficient(self, dvec: Sequence[int]) -> list[int]:
        """The z-polynomial multiplying t^dvec, as a dense coefficient list."""
        dvec = tuple(dvec)
        degs = {z: c for (d, z), c in self.coeffs.items() if d == dvec}
        if not degs:
            return []
        return [degs.get(z, 0) for z in range(max(degs) + 1)]

    def dvecs(self) -> list[tuple]:
        return sorted({d for d, _ in self.coeffs})


def _layer_factor(n: int, bound: int, k: int, a: int, power: int | None) -> TruncSeries:
    """(1 + T_k z^a)^power or 1/(1 - T_k z^a) when ``power`` is None, in T_k up to bound."""
    coeffs = {}
    for m in range(bound + 1):
        if power is None:
            c = 1
        else:
            c = comb(power, m)
        if c:
            dvec = tuple(m if i >= k else 0 for i in range(1, n + 1))
            coeffs[(dvec, a * m)] = c
    return TruncSeries(n, bound, coeffs)


def poincare_product(params: ModelParams) -> TruncSeries:
    """Expand prod_k prod_i (1 + T_k z^{2i+1})^{2g} / ((1 - T_k z^{2i})(1 - T_k z^{2i+2}))."""
    n, bound = params.n, params.bound
    out = TruncSeries.one(n, bound)
    for k in range(1, n + 1):
        for i in range(params.r):
            out = out * _layer_factor(n, bound, k, 2 * i + 1, 2 * params.g)
            out = out * _layer_factor(n, bound, k, 2 * i, None)
            out = out * _layer_factor(n, bound, k, 2 * i + 2, None)
    return out


def generator_degrees(params: ModelParams) -> tuple[list[int], list[int]]:
    """Cohomological degree and parity of each generator of one layer."""
    degs, odd = [], []
    ring = params.ring
    for v in range(params.r):
        for c in range(params.ncolors):
            degs.append(2 * v + ring.degree(c))
            odd.append(ring.parity(c))
    return degs, odd


def poincare_enumerate(params: ModelParams, dvec: Sequence[int]) -> list[int]:
    """Count the canonical basis monomials of multidegree ``dvec`` by cohdeg."""
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
    degs, odd = generator_degrees(params)
    layers = [kernels.layer_cohdegs(degs, odd, s) for s in sizes]
    maxdeg = 2 * params.r * dvec[-1]
    hist = kernels.product_histogram(layers, maxdeg)
    while hist and hist[-1] == 0:
        hist.pop()
    return hist


def is_palindromic(poly: Sequence[int], degree: int) -> bool:
    padded = list(poly) + [0] * max(0, degree + 1 - len(poly))
    if len(padded) > degree + 1 and any(padded[degree + 1:]):
        return False
    padded = padded[: degree + 1]
    return padded == padded[::-1]


@dataclass(frozen=True)
class CompareCell:
    dvec: tuple
    product: tuple
    enumerated: tuple

    @property
    def agree(self) -> bool:
        return self.product == self.enumerated

    def to_json(self) -> dict:
        return {"dvec": list(self.dvec), "product": list(self.product),
                "enumerated": list(self.enumerated), "agree": self.agree}


@dataclass(frozen=True)
class CompareReport:
    params: ModelParams
    cells: tuple

    @property
    def success(self) -> bool:
        return all(c.agree for c in self.cells)

    def disagreements(self) -> list[CompareCell]:
        return [c for c in self.cells if not c.agree]

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "success": self.success,
                "cells": [c.to_json() for c in self.cells]}


def compare(params: ModelParams) -> CompareReport:
    """Product formula versus enumeration on every non-decreasing dvec within bound."""
    series = poincare_product(params)
    cells = []
    for dvec in nondecreasing_dvecs(params.n, params.bound):
        cells.append(CompareCell(dvec, tuple(series.coefficient(dvec)),
                                 tuple(poincare_enumerate(params, dvec))))
    return CompareReport(params, tuple(cells))


# ---- Betti table export --------------------------------------------------


def betti_rows(params: ModelParams, dvecs: Iterable[Sequence[int]] | None = None,
               check: bool = False) -> list[dict]:
    series = poincare_product(params)
    if dvecs is None:
        dvecs = list(nondecreasing_dvecs(params.n, params.bound))
    rows = []
    for dvec in dvecs:
        dvec = tuple(dvec)
        poly = series.coefficient(dvec)
        enum = poincare_enumerate(params, dvec) if check else None
        for z, b in enumerate(poly):
            if b == 0:
                continue
            row = {f"d_{i + 1}": d for i, d in enumerate(dvec)}
            row["zdeg"] = z
            row["betti"] = b
            if check:
                row["agree"] = poly == enum
            rows.append(row)
    return rows


def rows_to_csv(rows: list[dict], n: int, check: bool = False) -> str:
    fields = [f"d_{i}" for i in range(1, n + 1)] + ["zdeg", "betti"] + (["agree"] if check else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in row.items()})
    return buf.getvalue()


def rows_to_json(params: ModelParams, rows: list[dict]) -> str:
    return json.dumps({"params": params.to_json(), "rows": rows}, indent=2, sort_keys=True)


def rows_from_csv(text: str) -> list[dict]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = {}
        for k, v in row.items():
            parsed[k] = (v == "true") if k == "agree" else int(v)
        out.append(parsed)
    return out
