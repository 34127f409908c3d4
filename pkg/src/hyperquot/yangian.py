"""Relations of the shifted Yangian as data, and a verifier on the Fock model.

Each relation instance is a pair of noncommutative polynomials in the symbols
``e_k^(v)``, ``f_k^(v)``, ``m_k^(t)``, ``h_k^(l)`` and the central ``hbar``.
Instances render to a one-line text form and parse back to equal data.

Only some families can be checked as operator identities in the model.  For
those, the identity is checked in its geometric form, where the division by
hbar is replaced by the diagonal class and colors are contracted through
``push_diagonal``.  Everything else is reported as skipped.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .curve import basis_product, push_diagonal_basis
from .fock import FockElement, ModelParams, add_into, decode, enumerate_codes, mono_level, nondecreasing_dvecs
from .operators import A, B, Compose, calculus

# --------------------------------------------------------------------------
# noncommutative polynomials


@dataclass(frozen=True, order=True)
class Symbol:
    name: str  # e, f, m, h or hbar
    k: int = 0
    sup: int = 0

    def text(self) -> str:
        return "hbar" if self.name == "hbar" else f"{self.name}_{self.k}^({self.sup})"


HBAR = Symbol("hbar")
_SYMBOL_RE = re.compile(r"^(?:(hbar)|([efmh])_(\d+)\^\((-?\d+)\))$")


def parse_symbol(text: str) -> Symbol:
    m = _SYMBOL_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad symbol {text!r}")
    if m.group(1):
        return HBAR
    return Symbol(m.group(2), int(m.group(3)), int(m.group(4)))


def _normal_word(word: tuple) -> tuple:
    # hbar is central; collect it at the front
    nh = sum(1 for s in word if s == HBAR)
    return (HBAR,) * nh + tuple(s for s in word if s != HBAR)


@dataclass(frozen=True)
class NCPoly:
    terms: tuple = ()  # sorted ((word, coeff), ...) with nonzero coefficients

    @classmethod
    def build(cls, items) -> "NCPoly":
        acc: dict = {}
        for word, c in items:
            w = _normal_word(tuple(word))
            acc[w] = acc.get(w, Fraction(0)) + Fraction(c)
        return cls(tuple(sorted((w, c) for w, c in acc.items() if c)))

    @classmethod
    def word(cls, *symbols: Symbol, coeff=1) -> "NCPoly":
        return cls.build([(symbols, coeff)])

    @classmethod
    def one(cls) -> "NCPoly":
        return cls.build([((), 1)])

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NCPoly") -> "NCPoly":
        return NCPoly.build(self.terms + other.terms)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "NCPoly":
        return NCPoly.build((w, v * Fraction(c)) for w, v in self.terms)

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        return NCPoly.build((w1 + w2, c1 * c2) for w1, c1 in self.terms for w2, c2 in other.terms)

    def symbols(self) -> set[str]:
        return {s.name for w, _ in self.terms for s in w}

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            parts.append(f"{c}*" + ("*".join(s.text() for s in w) if w else "1"))
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "NCPoly":
        text = text.strip()
        if text == "0":
            return cls()
        items = []
        for part in text.split(" + "):
            coeff, _, rest = part.strip().partition("*")
            word = () if rest == "1" else tuple(parse_symbol(s) for s in rest.split("*"))
            items.append((word, Fraction(coeff)))
        return cls.build(items)


def comm(x: NCPoly, y: NCPoly) -> NCPoly:
    return x * y - y * x


def _s(name: str, k: int, sup: int) -> NCPoly:
    if name == "m" and sup == 0:
        return NCPoly.one()
    return NCPoly.word(Symbol(name, k, sup))


def _hbar(p: NCPoly) -> NCPoly:
    return NCPoly.word(HBAR) * p


@dataclass(frozen=True)
class Relation:
    family: str
    indices: tuple  # ((name, value), ...)
    lhs: NCPoly
    rhs: NCPoly

    @property
    def index_dict(self) -> dict:
        return dict(self.indices)

    def symbols(self) -> set[str]:
        return self.lhs.symbols() | self.rhs.symbols()

    def render(self) -> str:
        idx = ",".join(f"{k}={v}" for k, v in self.indices)
        return f"{self.family}[{idx}]: {self.lhs.render()} = {self.rhs.render()}"

    @classmethod
    def parse(cls, text: str) -> "Relation":
        m = re.match(r"^(R\d+)\[([^\]]*)\]: (.*) = (.*)$", text.strip())
        if not m:
            raise ValueError(f"bad relation text {text!r}")
        idx = tuple((k, int(v)) for k, v in (p.split("=") for p in m.group(2).split(",") if p))
        return cls(m.group(1), idx, NCPoly.parse(m.group(3)), NCPoly.parse(m.group(4)))


# --------------------------------------------------------------------------
# the twelve families


def _r1(n, r, sups):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in range(1, r + 1):
                for t in range(1, r + 1):
                    yield (("i", i), ("j", j), ("s", s), ("t", t)), comm(_s("m", i, s), _s("m", j, t)), NCPoly()


def _quadratic_same(name):
    def gen(n, r, sups):
        for i in range(1, n + 1):
            for s in sups:
                for t in sups:
                    x = lambda v: _s(name, i, v)  # noqa: E731
                    if name == "e":
                        lhs = comm(x(s + 1), x(t)) - comm(x(s), x(t + 1))
                    else:
                        lhs = comm(x(t), x(s + 1)) - comm(x(t + 1), x(s))
                    yield (("i", i), ("s", s), ("t", t)), lhs, _hbar(x(s) * x(t) + x(t) * x(s))
    return gen


def _quadratic_adjacent(name):
    def gen(n, r, sups):
        for i in range(2, n + 1):
            for s in sups:
                for t in sups:
                    x = lambda v: _s(name, i, v)  # noqa: E731
                    y = lambda v: _s(name, i - 1, v)  # noqa: E731
                    if name == "e":
                        lhs = comm(x(s), y(t + 1)) - comm(x(s + 1), y(t))
                        rhs = _hbar(x(s) * y(t))
                    else:
                        lhs = comm(x(s + 1), y(t)) - comm(x(s), y(t + 1))
                        rhs = _hbar(x(t) * y(s))
                    yield (("i", i), ("s", s), ("t", t)), lhs, rhs
    return gen


def _far(name):
    def gen(n, r, sups):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if abs(i - j) > 1:
                    for s in sups:
                        for t in sups:
                            yield (("i", i), ("j", j), ("s", s), ("t", t)), comm(_s(name, i, s), _s(name, j, t)), NCPoly()
    return gen


def _serre(name):
    def gen(n, r, sups):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if abs(i - j) == 1:
                    for s in sups:
                        for t in sups:
                            for u in sups:
                                x = lambda v: _s(name, i, v)  # noqa: E731
                                z = _s(name, j, u)
                                lhs = comm(x(s), comm(x(t), z)) + comm(x(t), comm(x(s), z))
                                yield (("i", i), ("j", j), ("s", s), ("t", t), ("u", u)), lhs, NCPoly()
    return gen


def _r6(n, r, sups):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in range(1, r + 1):
                for t in sups:
                    rhs = NCPoly()
                    if i == j:
                        for l in range(s):
                            rhs = rhs + (_s("e", j, t + l) * _s("m", i, s - l - 1)).scale((-1) ** (l + 1))
                    yield (("i", i), ("j", j), ("s", s), ("t", t)), comm(_s("m", i, s), _s("e", j, t)), _hbar(rhs).scale(-1)


def _r11(n, r, sups):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in range(1, r + 1):
                for t in sups:
                    rhs = NCPoly()
                    if i == j:
                        for l in range(s):
                            rhs = rhs + (_s("m", i, s - l - 1) * _s("f", j, t + l)).scale((-1) ** (l + 1))
                    yield (("i", i), ("j", j), ("s", s), ("t", t)), comm(_s("f", j, t), _s("m", i, s)), _hbar(rhs).scale(-1)


def h_superscript(n: int, r: int, i: int, s: int, t: int) -> int:
    """Superscript of h on the right of [e_i^(s), f_i^(t)]; the shift applies only at i = n."""
    return s + t + 1 - (r if i == n else 0)


def _r12(n, r, sups):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in sups:
                for t in sups:
                    rhs = NCPoly()
                    if i == j:
                        l = h_superscript(n, r, i, s, t)
                        if l >= 0:  # h^(l) = 0 for l < 0
                            rhs = _hbar(_s("h", i, l))
                    yield (("i", i), ("j", j), ("s", s), ("t", t)), comm(_s("e", i, s), _s("f", j, t)), rhs


FAMILIES: dict[str, Callable] = {
    "R1": _r1,
    "R2": _quadratic_same("e"),
    "R3": _quadratic_adjacent("e"),
    "R4": _far("e"),
    "R5": _serre("e"),
    "R6": _r6,
    "R7": _quadratic_same("f"),
    "R8": _quadratic_adjacent("f"),
    "R9": _far("f"),
    "R10": _serre("f"),
    "R11": _r11,
    "R12": _r12,
}
RELATION_IDS = tuple(FAMILIES)


def family(rid: str, n: int, r: int, sup_max: int = 1) -> list[Relation]:
    if rid not in FAMILIES:
        raise KeyError(f"unknown relation {rid!r}")
    if n < 1 or r < 1:
        raise ValueError("n and r must be positive")
    sups = range(sup_max + 1)
    return [Relation(rid, idx, lhs, rhs) for idx, lhs, rhs in FAMILIES[rid](n, r, sups)]


def load_presentation(n: int, r: int, sup_max: int = 1) -> list[Relation]:
    """All instances of R1..R12 with e/f superscripts up to ``sup_max``, in a fixed order."""
    out = []
    for rid in RELATION_IDS:
        out.extend(family(rid, n, r, sup_max))
    return out


# --------------------------------------------------------------------------
# verification

SKIP_E = "no realization in the Fock model: e_k not computable in model"
SKIP_F = "no realization in the Fock model: f_k is only available on H_k, not computable in model"
EXTRA_CHECKS = ("BA",)


@dataclass(frozen=True)
class Grid:
    """Where to test: basis vectors with d_n <= dn_max, f superscripts 0..sup_max."""

    dn_max: int = 2
    sup_max: int = 2
    colors: tuple | None = None  # None means every basis class
    genus_sweep: bool = True  # at g = 1 also run g = 0 and g = 2

    def __post_init__(self):
        if self.dn_max < 0 or self.sup_max < 0:
            raise ValueError(f"malformed grid: {self}")
        if self.colors is not None and (not self.colors or any(c < 0 for c in self.colors)):
            raise ValueError(f"malformed grid: {self}")

    def color_range(self, params: ModelParams) -> list[int]:
        if self.colors is None:
            return list(range(params.ncolors))
        bad = [c for c in self.colors if c >= params.ncolors]
        if bad:
            raise ValueError(f"malformed grid: colors {bad} out of range for genus {params.g}")
        return list(self.colors)

    def to_json(self) -> dict:
        return {"dn_max": self.dn_max, "sup_max": self.sup_max,
                "colors": None if self.colors is None else list(self.colors),
                "genus_sweep": self.genus_sweep}


@dataclass
class VerificationReport:
    relation: str
    status: str  # verified | skipped | failed
    params: ModelParams | None = None
    grid: Grid | None = None
    checked: int = 0
    reason: str = ""
    witness: dict | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"relation": self.relation, "status": self.status, "checked": self.checked}
        if self.params is not None:
            out["params"] = self.params.to_json()
        if self.grid is not None:
            out["grid"] = self.grid.to_json()
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _par(params: ModelParams, c: int) -> int:
    return params.ring.parity(c)


def _r1_point(params, mono, op1, op2, c1, c2) -> dict:
    """Super-commutator of two Chern multiplications; ``op`` is (kind, j, t)."""
    calc = calculus(params)

    def fam(op):
        kind, j, t = op
        return ("cE", j, t) if kind == "ChernE" else calc.quot_family(j, t)

    x = {mono: Fraction(1)}
    sign = -1 if _par(params, c1) and _par(params, c2) else 1
    out = calc.fam_apply(fam(op1), c1, calc.fam_apply(fam(op2), c2, x))
    return add_into(dict(out), calc.fam_apply(fam(op2), c2, calc.fam_apply(fam(op1), c1, x)), -sign)


def _r11_point(params, mono, i, j, s, t, cg, cf) -> dict:
    """[b_j^(t)(phi), c_s(E_i)(gamma)] minus the diagonal correction, on H_j."""
    calc = calculus(params)
    x = {mono: Fraction(1)}
    sign = -1 if _par(params, cg) and _par(params, cf) else 1
    m = lambda fam_t, c, v: calc.fam_apply(("cE", i, fam_t), c, v)  # noqa: E731
    diff = calc.b_raw(j, t, cf, m(s, cg, x))
    add_into(diff, m(s, cg, calc.b_raw(j, t, cf, x)), -sign)
    if i == j:
        prod = basis_product(params.g, cg, cf)
        if prod is not None:
            psign, idx = prod
            for l in range(s):
                for p, q, v in push_diagonal_basis(params.g, idx):
                    inner = calc.b_raw(j, t + l, q, x)
                    if inner:
                        add_into(diff, m(s - l - 1, p, inner), -v * psign * sign * (-1) ** (l + 1))
    return diff


def _ba_point(params, mono, k, i, j, cg, cf) -> dict:
    """b a x against (sign) a b x + C x, evaluated with the opposite reduction order."""
    from .curve import CurveClass

    calc = calculus(params)
    x = FockElement(params, {mono: Fraction(1)})
    lhs = calc.evaluate(Compose((B(k, j, cf), A(k, i, cg))), x, strategy="last")
    sign = -1 if _par(params, cg) and _par(params, cf) else 1
    rhs = calc.evaluate(Compose((A(k, i, cg), B(k, j, cf))), x, strategy="first").scale(sign)
    corr = calc.bracket_ba(k, i, j, CurveClass.basis(params.g, cg), CurveClass.basis(params.g, cf))
    rhs = rhs + calc.evaluate(corr, x, strategy="first")
    return (lhs - rhs).raw


POINT_CHECKS = {"R1": _r1_point, "R11": _r11_point, "BA": _ba_point}


def _basis(params: ModelParams, dn_max: int) -> list[tuple]:
    out = []
    for dvec in nondecreasing_dvecs(params.n, min(dn_max, params.bound)):
        out.extend(enumerate_codes(params, dvec))
    return out


def _points(rid: str, params: ModelParams, grid: Grid):
    colors = grid.color_range(params)
    basis = _basis(params, grid.dn_max)
    n, r = params.n, params.r
    if rid == "R1":
        ops = [("ChernE", i, s) for i in range(1, n + 1) for s in range(1, r + 1)]
        ops += [("ChernQuot", j, t) for j in range(1, n + 1) for t in range(1, r + 1)]
        for mono in basis:
            level = mono_level(params, mono)
            usable = [op for op in ops if op[0] == "ChernE" or level <= op[1]]
            for a in range(len(usable)):
                for b in range(a, len(usable)):
                    for c1 in colors:
                        for c2 in colors:
                            yield (mono, usable[a], usable[b], c1, c2)
    elif rid == "R11":
        for mono in basis:
            for j in range(max(mono_level(params, mono), 1), n + 1):
                for i in range(1, j + 1):
                    for s in range(1, r + 1):
                        for t in range(grid.sup_max + 1):
                            for cg in colors:
                                for cf in colors:
                                    yield (mono, i, j, s, t, cg, cf)
    elif rid == "BA":
        for mono in basis:
            if len(mono) >= params.bound:
                continue
            for k in range(max(mono_level(params, mono), 1), n + 1):
                for i in range(r):
                    for j in range(r):
                        for cg in colors:
                            for cf in colors:
                                yield (mono, k, i, j, cg, cf)


def make_witness(rid: str, params: ModelParams, point: tuple, diff: dict) -> dict:
    mono = point[0]
    return {
        "relation": rid,
        "params": params.to_json(),
        "basis": [list(decode(params, c)) for c in mono],
        "args": [list(a) if isinstance(a, tuple) else a for a in point[1:]],
        "difference": FockElement(params, diff).to_json()["terms"],
    }


def replay_witness(witness: dict) -> FockElement:
    """Recompute the nonzero difference recorded in a failure witness."""
    from .fock import GeneratorKey, encode, sort_codes

    params = ModelParams.from_json(witness["params"])
    _, mono = sort_codes(params, [encode(params, GeneratorKey(*g)) for g in witness["basis"]])
    args = [tuple(a) if isinstance(a, list) else a for a in witness["args"]]
    return FockElement(params, POINT_CHECKS[witness["relation"]](params, mono, *args))


def skip_reason(rid: str) -> str:
    probe = family(rid, 3, 1, 1)
    syms = set().union(*(rel.symbols() for rel in probe)) if probe else set()
    if "e" in syms or "h" in syms:
        return SKIP_E
    return SKIP_F


def _verify_one(rid: str, params: ModelParams, grid: Grid) -> VerificationReport:
    check = POINT_CHECKS[rid]
    report = VerificationReport(rid, "verified", params, grid)
    for point in _points(rid, params, grid):
        diff = check(params, *point)
        report.checked += 1
        if diff:
            report.status = "failed"
            report.witness = make_witness(rid, params, point, diff)
            return report
    return report


def verify(rid: str, params: ModelParams, grid: Grid | None = None) -> VerificationReport:
    """Check one relation family (or the extra a/b bracket check "BA") on the model."""
    grid = grid or Grid()
    if rid not in FAMILIES and rid not in EXTRA_CHECKS:
        raise KeyError(f"unknown relation {rid!r}")
    if rid not in POINT_CHECKS:
        return VerificationReport(rid, "skipped", params, grid, reason=skip_reason(rid))
    work = ModelParams(params.n, params.r, params.g, params.degV, max(params.bound, grid.dn_max + (rid == "BA")))
    runs = [work]
    if grid.genus_sweep and params.g == 1:
        runs += [ModelParams(work.n, work.r, g, work.degV, work.bound) for g in (0, 2)]
    total = VerificationReport(rid, "verified", params, grid)
    for p in runs:
        sub_grid = grid if grid.colors is None or p.g == params.g else Grid(grid.dn_max, grid.sup_max, None, False)
        rep = _verify_one(rid, p, sub_grid)
        total.checked += rep.checked
        if rep.status == "failed":
            total.status, total.witness = "failed", rep.witness
            break
        if p is not work:
            total.notes.append(f"also verified at g={p.g} ({rep.checked} points)")
    if rid == "R11":
        total.notes.append("i > j is not tested: on H_j the bundles E_i and E_j coincide")
    return total


def verify_all(params: ModelParams, grid: Grid | None = None) -> list[VerificationReport]:
    return [verify(rid, params, grid) for rid in RELATION_IDS + EXTRA_CHECKS]


def coverage_audit(reports: list[VerificationReport]) -> dict:
    """Every relation family must appear exactly once, as verified, skipped or failed."""
    seen: dict = {}
    for rep in reports:
        seen.setdefault(rep.relation, []).append(rep.status)
    missing = [rid for rid in RELATION_IDS if rid not in seen]
    duplicated = [rid for rid, st in seen.items() if len(st) > 1]
    return {
        "complete": not missing and not duplicated,
        "missing": missing,
        "duplicated": duplicated,
        "verified": sorted((r for r, st in seen.items() if st == ["verified"]), key=_rid_key),
        "skipped": sorted((r for r, st in seen.items() if st == ["skipped"]), key=_rid_key),
        "failed": sorted((r for r, st in seen.items() if "failed" in st), key=_rid_key),
    }


def _rid_key(rid: str):
    return (rid[0] != "R", int(rid[1:]) if rid[1:].isdigit() else 0, rid)
