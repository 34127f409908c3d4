import pytest
import sympy
from hypothesis import given, strategies as st

from hyperquot.fock import ModelParams, TruncationError
from hyperquot.series import (
    TruncSeries,
    betti_rows,
    compare,
    is_palindromic,
    poincare_enumerate,
    poincare_product,
    rows_from_csv,
    rows_to_csv,
)


def test_product_examples():
    assert poincare_product(ModelParams(1, 1, 0)).coefficient((1,)) == [1, 0, 1]
    assert poincare_product(ModelParams(1, 1, 1)).coefficient((1,)) == [1, 2, 1]
    for n, r, g in [(1, 1, 0), (2, 3, 1), (3, 2, 2)]:
        assert poincare_product(ModelParams(n, r, g)).coefficient((0,) * n) == [1]


def test_enumerate_examples():
    p = ModelParams(2, 1, 0)
    assert poincare_enumerate(p, (1, 1)) == [1, 0, 1]
    assert poincare_enumerate(p, (1, 2)) == [1, 0, 2, 0, 1]
    assert poincare_enumerate(p, (0, 0)) == [1]


def test_enumerate_errors():
    p = ModelParams(2, 1, 0, bound=2)
    with pytest.raises(ValueError):
        poincare_enumerate(p, (1,))
    with pytest.raises(ValueError):
        poincare_enumerate(p, (-1, 1))
    with pytest.raises(TruncationError):
        poincare_enumerate(p, (1, 3))
    assert poincare_enumerate(p, (2, 1)) == []


@pytest.mark.parametrize("params", [ModelParams(1, 1, 0, bound=5), ModelParams(2, 2, 1, bound=3),
                                    ModelParams(3, 2, 0, bound=0)])
def test_compare(params):
    report = compare(params)
    assert report.success and not report.disagreements()
    assert report.to_json()["success"]


def test_bound_zero_single_cell():
    assert len(compare(ModelParams(2, 2, 2, bound=0)).cells) == 1


@pytest.mark.parametrize("g", range(4))
def test_symmetric_product_series(g):
    # independent expansion of (1 + z t)^(2g) / ((1 - t)(1 - z^2 t)) with sympy
    t, z = sympy.symbols("t z")
    f = (1 + z * t) ** (2 * g) / ((1 - t) * (1 - z**2 * t))
    ser = sympy.expand(sympy.series(f, t, 0, 7).removeO())
    series = poincare_product(ModelParams(1, 1, g, bound=6))
    for d in range(7):
        poly = sympy.Poly(ser.coeff(t, d), z)
        expected = [int(c) for c in reversed(poly.all_coeffs())]
        assert series.coefficient((d,)) == expected


def test_palindromic_helper():
    assert is_palindromic([1, 0, 1], 2)
    assert is_palindromic([1, 2], 2) is False
    assert is_palindromic([1, 0, 1, 0, 0], 2)
    assert not is_palindromic([1, 0, 1], 1)


@pytest.mark.parametrize("n,r,g", [(1, 2, 1), (2, 1, 2), (2, 2, 0)])
def test_palindromic(n, r, g):
    series = poincare_product(ModelParams(n, r, g, bound=3))
    for dvec in series.dvecs():
        assert is_palindromic(series.coefficient(dvec), 2 * r * dvec[-1])


def test_betti_csv_round_trip():
    p = ModelParams(2, 1, 1, bound=2)
    rows = betti_rows(p, check=True)
    assert all(r["agree"] for r in rows)
    text = rows_to_csv(rows, p.n, check=True)
    assert text.splitlines()[0] == "d_1,d_2,zdeg,betti,agree"
    assert rows_from_csv(text) == rows


def test_series_shape_mismatch():
    with pytest.raises(ValueError):
        TruncSeries.one(1, 2) + TruncSeries.one(2, 2)
    with pytest.raises(ValueError):
        TruncSeries(2, 2, {((1,), 0): 1})


def _series(n, bound):
    dvec = st.lists(st.integers(0, bound), min_size=n, max_size=n).map(lambda d: tuple(sorted(d)))
    key = st.tuples(dvec, st.integers(0, 4))
    return st.dictionaries(key, st.integers(-3, 3), max_size=5).map(lambda c: TruncSeries(n, bound, c))


triples = st.integers(1, 2).flatmap(lambda n: st.tuples(_series(n, 3), _series(n, 3), _series(n, 3)))


@given(triples)
def test_ring_axioms(xyz):
    x, y, z = xyz
    one = TruncSeries.one(x.n, x.bound)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x * one == x
    assert x - x == TruncSeries(x.n, x.bound)
