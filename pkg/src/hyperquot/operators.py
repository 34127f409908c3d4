"""Colored operators on the Fock module.

Creation operators act by multiplication.  Annihilation operators ``b_k^(j)``
are only defined on the filtration step ``H_k``; they are computed by moving
``b`` rightwards past the layer-``k`` creation factors with the bracket

    b^(j)(phi) a^(i)(gamma) = (-1)^{|gamma||phi|} a^(i)(gamma) b^(j)(phi) + C,

and by killing whatever is left in ``H_{k-1}``.  Every correction term has a
strictly smaller superscript sum ``i + j``, so the rewriting terminates.

Multiplication by Chern classes is represented by *families*: a family ``F``
assigns to each curve class ``gamma`` the operator ``F(gamma)``, and the
product of two families contracts their curve factors through the diagonal,
``(F G)(gamma) = sum_pq d_pq F(e_p) G(e_q)`` with ``Delta_*(gamma) = sum d_pq e_p|e_q``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .curve import CurveClass, basis_product, push_diagonal, push_diagonal_basis
from .fock import (
    FockElement,
    ModelParams,
    TruncationError,
    add_into,
    code_layer,
    code_parity,
    encode,
    GeneratorKey,
    mono_level,
    mono_parity,
    sort_codes,
)

# Multiplication by c_t((E_{j-1} - E_j) (x) K^{-1}) equals CHERN_SIGN times
# sum_i (-1)^(i-t) a^(i) b^(r+t-i-2) restricted to the diagonal.  Fixed by the
# Quot_1(O_P1) oracle (c_1 of the quotient is the diagonal, acting as +1).
CHERN_SIGN = -1

STRATEGIES = ("first", "last")


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


class DomainError(ValueError):
    """An operator was applied outside the subspace where it is defined."""

    def __init__(self, message: str, expr=None):
        super().__init__(message)
        self.expr = expr


# --------------------------------------------------------------------------
# expression tree


@dataclass(frozen=True)
class A:
    k: int
    v: int
    c: int


@dataclass(frozen=True)
class B:
    k: int
    j: int
    c: int


@dataclass(frozen=True)
class ChernQuot:
    j: int
    t: int
    c: int


@dataclass(frozen=True)
class ChernE:
    j: int
    t: int
    c: int


@dataclass(frozen=True)
class M0:
    t: int
    c: int


@dataclass(frozen=True)
class Sum:
    terms: tuple = ()


@dataclass(frozen=True)
class Compose:
    """Product of operators; the last factor is applied first."""

    factors: tuple = ()


@dataclass(frozen=True)
class Scale:
    coeff: Fraction
    expr: "OperatorExpr"


OperatorExpr = Union[A, B, ChernQuot, ChernE, M0, Sum, Compose, Scale]
IDENTITY = Compose(())

_LEAVES = {"A": (A, ("k", "v", "c")), "B": (B, ("k", "j", "c")),
           "ChernQuot": (ChernQuot, ("j", "t", "c")), "ChernE": (ChernE, ("j", "t", "c")),
           "M0": (M0, ("t", "c"))}


def expr_to_json(expr: OperatorExpr) -> dict:
    for name, (cls, fields) in _LEAVES.items():
        if type(expr) is cls:
            return {"op": name, **{f: getattr(expr, f) for f in fields}}
    if isinstance(expr, Sum):
        return {"op": "Sum", "terms": [expr_to_json(t) for t in expr.terms]}
    if isinstance(expr, Compose):
        return {"op": "Compose", "factors": [expr_to_json(f) for f in expr.factors]}
    if isinstance(expr, Scale):
        return {"op": "Scale", "coeff": str(Fraction(expr.coeff)), "expr": expr_to_json(expr.expr)}
    raise TypeError(f"not an operator expression: {expr!r}")


def expr_from_json(data) -> OperatorExpr:
    if isinstance(data, str):
        data = json.loads(data)
    op = data.get("op")
    if op in _LEAVES:
        cls, fields = _LEAVES[op]
        return cls(*(int(data[f]) for f in fields))
    if op == "Sum":
        return Sum(tuple(expr_from_json(t) for t in data["terms"]))
    if op == "Compose":
        return Compose(tuple(expr_from_json(f) for f in data["factors"]))
    if op == "Scale":
        return Scale(Fraction(data["coeff"]), expr_from_json(data["expr"]))
    raise ValueError(f"unknown operator node {op!r}")


# --------------------------------------------------------------------------
# the calculus


class OperatorCalculus:
    """Operator actions for one set of model parameters, with memoization."""

    def __init__(self, params: ModelParams):
        self.params = params
        self.g = params.g
        self.r = params.r
        self.pt = 2 * params.g + 1
        self._parity = [params.ring.parity(c) for c in range(params.ncolors)]
        self._b_cache: dict = {}
        self._fam_cache: dict = {}

    # ---- small helpers -------------------------------------------------

    def code(self, k: int, v: int, c: int) -> int:
        return encode(self.params, GeneratorKey(k, v, c))

    def _check_color(self, c: int) -> None:
        if not 0 <= c < self.params.ncolors:
            raise IndexError(f"color {c} out of range for genus {self.g}")

    def _check_layer(self, k: int) -> None:
        if not 1 <= k <= self.params.n:
            raise IndexError(f"layer {k} out of range 1..{self.params.n}")

    def a_raw(self, code: int, elem: dict, scale=1) -> dict:
        out: dict = {}
        bound = self.params.bound
        for mono, c in elem.items():
            if len(mono) + 1 > bound:
                raise TruncationError(
                    f"creation would raise d_n to {len(mono) + 1} beyond bound {bound}")
            sign, new = sort_codes(self.params, (code,) + mono)
            if sign:
                v = out.get(new, 0) + sign * scale * c
                if v:
                    out[new] = v
                else:
                    del out[new]
        return out

    # ---- annihilation ----------------------------------------------------

    @lru_cache(maxsize=None)
    def _bracket_terms(self, i: int, j: int, col: int, c: int) -> tuple:
        """Correction of b^(j)(e_c) a^(i)(e_col) as ('scalar', x) / ('ab', s, p, t, q, x)."""
        r = self.r
        prod = basis_product(self.g, col, c)
        if prod is None:
            return ()
        sgn, idx = prod
        if self._parity[col] and self._parity[c]:
            sgn = -sgn
        out = []
        if i + j <= r - 1:
            if i + j == r - 1 and idx == self.pt:
                out.append(("scalar", Fraction(_sgn(i) * sgn)))
            coeffs = [(s, _sgn(i - s)) for s in range(i)]
        else:
            coeffs = [(s, _sgn(i - s + 1)) for s in range(i, r)]
        for s, sc in coeffs:
            t = i + j - s - 1
            for p, q, v in push_diagonal_basis(self.g, idx):
                out.append(("ab", s, p, t, q, sc * sgn * v))
        return tuple(out)

    def b_mono(self, k: int, j: int, c: int, mono: tuple, strategy: str = "first") -> dict:
        key = (k, j, c, mono, strategy)
        hit = self._b_cache.get(key)
        if hit is not None:
            return hit
        params = self.params
        if mono and code_layer(params, mono[0]) > k:
            raise DomainError(
                f"b_{k} applied to a monomial containing layer {code_layer(params, mono[0])}")
        nhead = 0
        while nhead < len(mono) and code_layer(params, mono[nhead]) == k:
            nhead += 1
        if nhead == 0:
            self._b_cache[key] = {}
            return {}
        if j >= self.r:
            out = self._b_high(k, j, c, mono, strategy)
            self._b_cache[key] = out
            return out
        if strategy == "first":
            pos = 0
        elif strategy == "last":
            pos = nhead - 1
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        code = mono[pos]
        a_par = code_parity(params, code)
        before = sum(code_parity(params, x) for x in mono[:pos]) % 2
        sign = -1 if a_par and before else 1
        rest = mono[:pos] + mono[pos + 1:]
        i = (code // params.ncolors) % self.r
        col = code % params.ncolors

        out: dict = {}
        passed = self.b_mono(k, j, c, rest, strategy)
        if passed:
            koszul = -1 if a_par and self._parity[c] else 1
            add_into(out, self.a_raw(code, passed, sign * koszul))
        for term in self._bracket_terms(i, j, col, c):
            if term[0] == "scalar":
                add_into(out, {rest: term[1] * sign})
            else:
                _, s, p, t, q, x = term
                inner = self.b_mono(k, t, q, rest, strategy)
                if inner:
                    add_into(out, self.a_raw(self.code(k, s, p), inner, x * sign))
        self._b_cache[key] = out
        return out

    def _b_high(self, k: int, j: int, c: int, mono: tuple, strategy: str) -> dict:
        # lambda is a root of c(E_k|_p, z) on the correspondence, so
        # b^(j) = sum_s (-1)^(s+1) [c_s(E_k) b^(j-s)]|_Delta for j >= r.
        out: dict = {}
        for s in range(1, self.r + 1):
            for p, q, v in push_diagonal_basis(self.g, c):
                inner = self.b_mono(k, j - s, q, mono, strategy)
                if inner:
                    x = v * _sgn(s + 1)
                    add_into(out, self.fam_apply(("cE", k, s), p, inner), x)
        return out

    def b_raw(self, k: int, j: int, c: int, elem: dict, strategy: str = "first") -> dict:
        out: dict = {}
        for mono, x in elem.items():
            add_into(out, self.b_mono(k, j, c, mono, strategy), x)
        return out

    # ---- public single-operator actions -----------------------------------

    def apply_a(self, k: int, v: int, c: int, x: FockElement) -> FockElement:
        return FockElement(self.params, self.a_raw(self.code(k, v, c), x.raw))

    def apply_b(self, k: int, j: int, c: int, x: FockElement, strategy: str = "first") -> FockElement:
        self._check_layer(k)
        self._check_color(c)
        if j < 0:
            raise IndexError(f"b superscript must be non-negative, got {j}")
        return FockElement(self.params, self.b_raw(k, j, c, x.raw, strategy))

    def bracket_ba(self, k: int, i: int, j: int, gamma: CurveClass, phi: CurveClass) -> OperatorExpr:
        """Correction term C in b^(j)(phi) a^(i)(gamma) = (-1)^{|gamma||phi|} a b + C."""
        self._check_layer(k)
        if not 0 <= i <= self.r - 1 or j < 0:
            raise IndexError(f"superscripts out of range: i={i}, j={j}")
        scalar = Fraction(0)
        pieces: dict = {}
        for col, u in gamma.terms:
            for c, w in phi.terms:
                for term in self._bracket_terms(i, j, col, c):
                    if term[0] == "scalar":
                        scalar += term[1] * u * w
                    else:
                        _, s, p, t, q, x = term
                        node = Compose((A(k, s, p), B(k, t, q)))
                        pieces[node] = pieces.get(node, 0) + x * u * w
        terms = []
        if scalar:
            terms.append(Scale(scalar, IDENTITY))
        terms.extend(Scale(Fraction(x), node) for node, x in sorted(pieces.items(), key=repr) if x)
        return Sum(tuple(terms))

    # ---- families --------------------------------------------------------
    #
    # Families are hashable tuples:
    #   ("id",)                      gamma -> (int gamma) * Id
    #   ("scalar", terms)            gamma -> (int kappa*gamma) * Id
    #   ("ab", j, t)                 bracket form sum_i (-1)^(i-t) a_j^(i) b_j^(r+t-i-2)|_Delta
    #   ("lin", ((x, F), ...))       linear combination
    #   ("prod", F, G)               (F G)(gamma) = sum d_pq F(e_p) G(e_q)
    #   ("ktwist", F)                gamma -> F(K_C gamma)
    #   ("cE", j, t)                 c_t(E_j), acting on the whole module

    def fam_apply(self, fam: tuple, c: int, elem: dict) -> dict:
        out: dict = {}
        for mono, x in elem.items():
            add_into(out, self.fam_mono(fam, c, mono), x)
        return out

    def fam_mono(self, fam: tuple, c: int, mono: tuple) -> dict:
        key = (fam, c, mono)
        hit = self._fam_cache.get(key)
        if hit is not None:
            return hit
        res = self._fam_eval(fam, c, mono)
        self._fam_cache[key] = res
        return res

    def _fam_eval(self, fam: tuple, c: int, mono: tuple) -> dict:
        tag = fam[0]
        if tag == "id":
            return {mono: Fraction(1)} if c == self.pt else {}
        if tag == "scalar":
            coeff = Fraction(0)
            for idx, u in fam[1]:
                p = basis_product(self.g, idx, c)
                if p is not None and p[1] == self.pt:
                    coeff += p[0] * u
            return {mono: coeff} if coeff else {}
        if tag == "ab":
            _, j, t = fam
            r = self.r
            out: dict = {}
            for p, q, v in push_diagonal_basis(self.g, c):
                for i in range(r):
                    inner = self.b_mono(j, r + t - i - 2, q, mono)
                    if inner:
                        add_into(out, self.a_raw(self.code(j, i, p), inner, v * _sgn(i - t)))
            return out
        if tag == "lin":
            out = {}
            for x, f in fam[1]:
                add_into(out, self.fam_mono(f, c, mono), x)
            return out
        if tag == "prod":
            _, f, h = fam
            out = {}
            for p, q, v in push_diagonal_basis(self.g, c):
                inner = self.fam_mono(h, q, mono)
                if inner:
                    add_into(out, self.fam_apply(f, p, inner), v)
            return out
        if tag == "ktwist":
            if c != 0 or self.g == 1:
                return {}
            out = self.fam_mono(fam[1], self.pt, mono)
            return {m: (2 * self.g - 2) * x for m, x in out.items()}
        if tag == "cE":
            return self._chern_e_mono(fam[1], fam[2], c, mono)
        raise ValueError(f"unknown family {fam!r}")

    # c_t((E_{j-1} - E_j) (x) K^{-1}) as a family, valid on H_j
    def quot_family(self, j: int, t: int) -> tuple:
        return ("lin", ((Fraction(CHERN_SIGN), ("ab", j, t)),))

    def _q(self, j: int, k: int) -> tuple:
        """Coefficient of z^-k in Q(z) = c(E_{j-1}, z+K)/c(E_j, z+K) = sum (-1)^k c_k^tw z^-k."""
        return ("lin", ((Fraction(_sgn(k)), self.quot_family(j, k)),))

    def _q_untwisted(self, j: int, m: int) -> tuple:
        """Coefficient of z^-m in Q(z - K); K^2 = 0 leaves one correction term."""
        if m == 1:
            return self._q(j, 1)
        return ("lin", ((Fraction(1), self._q(j, m)),
                        (Fraction(m - 1), ("ktwist", self._q(j, m - 1)))))

    @lru_cache(maxsize=None)
    def _inverse_q(self, j: int, m: int) -> tuple:
        """Coefficient of z^-m in 1/Q(z - K) = c(E_j, z)/c(E_{j-1}, z)."""
        if m == 0:
            return ("id",)
        terms = []
        for k in range(1, m + 1):
            rest = self._inverse_q(j, m - k)
            f = self._q_untwisted(j, k)
            terms.append((Fraction(-1), f if rest == ("id",) else ("prod", f, rest)))
        return ("lin", tuple(terms))

    def chern_family(self, j: int, t: int) -> tuple:
        return ("cE", j, t)

    def chern_v_family(self, t: int) -> tuple:
        if t == 0:
            return ("id",)
        if t == 1 and self.params.degV:
            return ("scalar", ((self.pt, Fraction(self.params.degV)),))
        return ("scalar", ())

    @lru_cache(maxsize=None)
    def _chern_e_on_hj(self, j: int, t: int) -> tuple:
        """c_t(E_j) on H_j from c(E_j, z) = c(E_{j-1}, z) / Q(z - K)."""
        terms = []
        for s in range(0, min(t, self.r) + 1):
            lower = self.chern_v_family(s) if j == 1 else ("cE", j - 1, s)
            if lower == ("scalar", ()):
                continue
            inv = self._inverse_q(j, t - s)
            fam = inv if lower == ("id",) else ("prod", lower, inv)
            terms.append((Fraction(_sgn(t + s)), fam))
        return ("lin", tuple(terms))

    def _chern_e_mono(self, j: int, t: int, c: int, mono: tuple) -> dict:
        params = self.params
        if j == 0:
            return self.fam_mono(self.chern_v_family(t), c, mono) if t <= self.r else {}
        # c(E_j) commutes with creation operators of higher layers
        cut = 0
        while cut < len(mono) and code_layer(params, mono[cut]) > j:
            cut += 1
        head, tail = mono[:cut], mono[cut:]
        if cut and self._parity[c] and mono_parity(params, head):
            sign = -1
        else:
            sign = 1
        inner = self.fam_mono(self._chern_e_on_hj(j, t), c, tail)
        return {head + m: sign * x for m, x in inner.items()}

    # ---- public Chern actions ----------------------------------------------

    def apply_chern_quot(self, j: int, t: int, c: int, x: FockElement) -> FockElement:
        self._check_layer(j)
        self._check_color(c)
        if not 1 <= t <= self.r:
            raise IndexError(f"ChernQuot degree t={t} outside 1..{self.r}")
        return FockElement(self.params, self.fam_apply(self.quot_family(j, t), c, x.raw))

    def chern_E_action(self, j: int, t: int, c: int, x: FockElement) -> FockElement:
        if not 0 <= j <= self.params.n:
            raise IndexError(f"bundle index j={j} outside 0..{self.params.n}")
        self._check_color(c)
        if not 0 <= t <= self.r:
            raise IndexError(f"Chern degree t={t} outside 0..{self.r}")
        return FockElement(self.params, self.fam_apply(("cE", j, t), c, x.raw))

    def apply_m0(self, t: int, c: int, x: FockElement) -> FockElement:
        self._check_color(c)
        if not 0 <= t <= self.r:
            raise IndexError(f"Chern degree t={t} outside 0..{self.r}")
        return FockElement(self.params, self.fam_apply(self.chern_v_family(t), c, x.raw))

    # ---- evaluation ----------------------------------------------------------

    def evaluate(self, expr: OperatorExpr, x: FockElement, strategy: str = "first") -> FockElement:
        try:
            return FockElement(self.params, self._eval(expr, x.raw, strategy))
        except DomainError as err:
            raise DomainError(f"{err} (in {_short(err.expr)})", err.expr) from None

    def _eval(self, expr, elem: dict, strategy: str) -> dict:
        try:
            if isinstance(expr, A):
                self._check_layer(expr.k)
                return self.a_raw(self.code(expr.k, expr.v, expr.c), elem)
            if isinstance(expr, B):
                self._check_layer(expr.k)
                self._check_color(expr.c)
                if expr.j < 0:
                    raise DomainError(f"negative superscript in {expr}")
                return self.b_raw(expr.k, expr.j, expr.c, elem, strategy)
            if isinstance(expr, ChernQuot):
                return self.apply_chern_quot(expr.j, expr.t, expr.c, FockElement(self.params, elem)).raw
            if isinstance(expr, ChernE):
                return self.chern_E_action(expr.j, expr.t, expr.c, FockElement(self.params, elem)).raw
            if isinstance(expr, M0):
                return self.apply_m0(expr.t, expr.c, FockElement(self.params, elem)).raw
        except DomainError as err:
            if err.expr is None:
                err.expr = expr
            raise
        except (IndexError, TruncationError) as err:
            raise DomainError(str(err), expr) from None
        if isinstance(expr, Sum):
            out: dict = {}
            for term in expr.terms:
                add_into(out, self._eval(term, elem, strategy))
            return out
        if isinstance(expr, Compose):
            cur = dict(elem)
            for f in reversed(expr.factors):
                if not cur:
                    break
                cur = self._eval(f, cur, strategy)
            return cur
        if isinstance(expr, Scale):
            x = Fraction(expr.coeff)
            if x == 0:
                return {}
            return {m: v * x for m, v in self._eval(expr.expr, elem, strategy).items()}
        raise TypeError(f"not an operator expression: {expr!r}")


def _short(expr) -> str:
    try:
        return json.dumps(expr_to_json(expr))
    except TypeError:
        return repr(expr)


@lru_cache(maxsize=64)
def calculus(params: ModelParams) -> OperatorCalculus:
    return OperatorCalculus(params)


def apply_a(k: int, v: int, c: int, x: FockElement) -> FockElement:
    return calculus(x.params).apply_a(k, v, c, x)


def apply_b(k: int, j: int, c: int, x: FockElement, strategy: str = "first") -> FockElement:
    return calculus(x.params).apply_b(k, j, c, x, strategy)


def apply_chern_quot(j: int, t: int, c: int, x: FockElement) -> FockElement:
    return calculus(x.params).apply_chern_quot(j, t, c, x)


def chern_E_action(j: int, t: int, c: int, x: FockElement) -> FockElement:
    return calculus(x.params).chern_E_action(j, t, c, x)


def evaluate(expr: OperatorExpr, x: FockElement, strategy: str = "first") -> FockElement:
    return calculus(x.params).evaluate(expr, x, strategy)


def bracket_ba(params: ModelParams, i: int, j: int, gamma: CurveClass, phi: CurveClass, k: int = 1) -> OperatorExpr:
    return calculus(params).bracket_ba(k, i, j, gamma, phi)


def in_domain(x: FockElement, k: int) -> bool:
    """True when every monomial of ``x`` lies in H_k."""
    return all(mono_level(x.params, m) <= k for m in x.raw)
