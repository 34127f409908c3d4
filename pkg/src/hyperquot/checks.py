"""Structural checks on the Fock model, shared by the verifier, CLI and tests."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .curve import dual_basis_index
from .fock import (
    FockElement,
    GeneratorKey,
    ModelParams,
    add_into,
    code_parity,
    decode,
    encode,
    enumerate_codes,
    mono_cohdeg,
    mono_level,
    nondecreasing_dvecs,
)
from .operators import A, B, Compose, calculus, evaluate


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def summary(self) -> str:
        status = "ok" if self.ok else "FAILED"
        return f"{self.name}: {status} ({self.checked} checked, {len(self.failures)} failures)"


def all_generators(params: ModelParams) -> list[GeneratorKey]:
    return [GeneratorKey(k, v, c) for k in range(1, params.n + 1)
            for v in range(params.r) for c in range(params.ncolors)]


def basis_codes_upto(params: ModelParams, dn_max: int) -> list[tuple]:
    out = []
    for dvec in nondecreasing_dvecs(params.n, dn_max):
        out.extend(enumerate_codes(params, dvec))
    return out


def check_a_supercommutativity(params: ModelParams, dn_max: int = 3) -> CheckResult:
    """a(x) a(y) v = (-1)^{|x||y|} a(y) a(x) v for all generator pairs and basis v."""
    big = ModelParams(params.n, params.r, params.g, params.degV, dn_max + 2)
    calc = calculus(big)
    res = CheckResult("a-supercommutativity")
    gens = [encode(big, key) for key in all_generators(big)]
    for mono in basis_codes_upto(big, dn_max):
        x = {mono: Fraction(1)}
        for c1 in gens:
            once = calc.a_raw(c1, x)
            for c2 in gens:
                lhs = calc.a_raw(c2, once)
                rhs = calc.a_raw(c1, calc.a_raw(c2, x))
                sign = -1 if code_parity(big, c1) and code_parity(big, c2) else 1
                res.checked += 1
                if add_into(dict(lhs), rhs, -sign):
                    res.failures.append({"mono": mono, "pair": (c1, c2)})
    return res


def random_confluence_case(rng: random.Random, params: ModelParams, max_len: int = 4):
    """A random composition of A/B nodes at one layer, and an element it can act on."""
    k = rng.randint(1, params.n)
    length = rng.randint(1, max_len)
    factors = []
    n_create = 0
    for _ in range(length):
        if n_create >= params.bound or rng.random() < 0.6:
            factors.append(B(k, rng.randrange(2 * params.r), rng.randrange(params.ncolors)))
        else:
            factors.append(A(k, rng.randrange(params.r), rng.randrange(params.ncolors)))
            n_create += 1
    room = params.bound - n_create
    pool = [m for m in basis_codes_upto(params, max(room, 0)) if mono_level(params, m) <= k]
    terms = {}
    for _ in range(rng.randint(1, 3)):
        m = rng.choice(pool)
        terms[m] = terms.get(m, 0) + Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2))
    return Compose(tuple(factors)), FockElement(params, terms)


def check_confluence(cases: int = 1000, seed: int = 0, grid=None) -> CheckResult:
    """Evaluate random B/A compositions with two reduction strategies and compare."""
    grid = grid or [ModelParams(n, r, g, bound=3) for n in (1, 2) for r in (1, 2, 3) for g in (0, 1, 2)]
    rng = random.Random(seed)
    res = CheckResult("b-rewriting confluence")
    for _ in range(cases):
        params = rng.choice(grid)
        expr, x = random_confluence_case(rng, params)
        first = evaluate(expr, x, strategy="first")
        last = evaluate(expr, x, strategy="last")
        res.checked += 1
        if first != last:
            res.failures.append({"params": params, "expr": expr, "element": x.to_json()})
    return res


def check_annihilation(params: ModelParams, u: int, dn_max: int = 3) -> CheckResult:
    """Products of u creation and u annihilation operators at layer k+1 kill H_k.

    Every ordering, every superscript tuple in 0..r-1 with sum < u(r-1) and every
    basis coloring is tried on every basis vector of H_k with d_n <= dn_max.
    Words are built right to left so common suffixes are evaluated once.
    """
    big = ModelParams(params.n, params.r, params.g, params.degV, dn_max + u)
    calc = calculus(big)
    res = CheckResult(f"annihilation u={u}")
    limit = u * (params.r - 1)
    letters = [(kind, s, c) for kind in "ab" for s in range(params.r) for c in range(big.ncolors)]
    for k in range(0, params.n):
        layer = k + 1
        nus = [m for m in basis_codes_upto(big, dn_max) if mono_level(big, m) <= k]
        # Tag each basis vector so the whole family travels in one dict.
        start = {(i, m): Fraction(1) for i, m in enumerate(nus)}

        def apply(letter, vec):
            kind, s, c = letter
            out: dict = {}
            for (tag, mono), x in vec.items():
                if kind == "a":
                    piece = calc.a_raw(calc.code(layer, s, c), {mono: x})
                else:
                    piece = {m: x * y for m, y in calc.b_mono(layer, s, c, mono).items()}
                for m, y in piece.items():
                    key = (tag, m)
                    v = out.get(key, 0) + y
                    if v:
                        out[key] = v
                    else:
                        del out[key]
            return out

        def dfs(vec, na, nb, total, word):
            if na == 0 and nb == 0:
                res.checked += 1
                if vec:
                    tag, mono = next(iter(vec))
                    res.failures.append({"k": k, "word": word, "nu": nus[tag], "image": mono})
                return
            for letter in letters:
                kind, s, _ = letter
                if kind == "a" and na == 0 or kind == "b" and nb == 0:
                    continue
                if total + s >= limit:
                    continue
                nxt = apply(letter, vec) if vec else vec
                dfs(nxt, na - (kind == "a"), nb - (kind == "b"), total + s, (letter,) + word)

        if limit > 0:
            dfs(start, u, u, 0, ())
    return res


def dual_string(params: ModelParams, mono: tuple) -> list[tuple]:
    """Annihilators pairing nondegenerately with ``mono``, outermost layer first.

    a_k^(v)(e_c) is matched with b_k^(r-1-v)(e_c'), e_c' the Poincare dual of e_c.
    """
    out = []
    for code in mono:
        k, v, c = decode(params, code)
        out.append((k, params.r - 1 - v, dual_basis_index(params.g, c)))
    return out


def pairing(params: ModelParams, string: list[tuple], mono: tuple) -> Fraction:
    """Vacuum coefficient of the annihilator string applied to ``mono``."""
    calc = calculus(params)
    vec = {mono: Fraction(1)}
    for k, j, c in string:
        vec = calc.b_raw(k, j, c, vec)
        if not vec:
            return Fraction(0)
    return vec.get((), Fraction(0))


def pairing_rank(params: ModelParams, dvec) -> list[tuple[int, int, int]]:
    """(cohdeg, dimension, rank) of the pairing matrix on each graded piece of ``dvec``."""
    monos = enumerate_codes(params, dvec)
    by_deg: dict = {}
    for m in monos:
        by_deg.setdefault(mono_cohdeg(params, m), []).append(m)
    # a dual string lowers cohdeg by exactly the cohdeg of its monomial
    out = []
    for deg, rows in sorted(by_deg.items()):
        cols = by_deg.get(deg, [])
        strings = [dual_string(params, m) for m in cols]
        mat = [[QQ(int(x.numerator), int(x.denominator)) for x in (pairing(params, s, m) for s in strings)]
               for m in rows]
        rank = DomainMatrix(mat, (len(rows), len(cols)), QQ).rank() if rows else 0
        out.append((deg, len(rows), rank))
    return out


def check_pairing_rank(params: ModelParams, dn_max: int = 3) -> CheckResult:
    big = ModelParams(params.n, params.r, params.g, params.degV, max(params.bound, dn_max))
    res = CheckResult("dual pairing rank")
    for dvec in nondecreasing_dvecs(params.n, dn_max):
        for deg, dim, rank in pairing_rank(big, dvec):
            res.checked += 1
            if rank != dim:
                res.failures.append({"dvec": dvec, "cohdeg": deg, "dim": dim, "rank": rank})
    return res
