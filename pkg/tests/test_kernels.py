import pytest
from hypothesis import given, strategies as st

from hyperquot import _pykernels as py
from hyperquot import kernels

cy = pytest.importorskip("hyperquot._kernels")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@given(st.integers(0, 3).flatmap(
    lambda g: st.tuples(st.just(g), st.lists(st.integers(0, 4 * (2 * g + 2) - 1), max_size=7))))
def test_koszul_sort_parity(case):
    g, codes = case
    assert cy.koszul_sort(tuple(codes), 2 * g + 2, g) == py.koszul_sort(tuple(codes), 2 * g + 2, g)


def test_koszul_sort_signs():
    # genus 1: colors 1, 2 are odd
    assert py.koszul_sort((1, 2), 4, 1) == (-1, (2, 1))
    assert py.koszul_sort((0, 3), 4, 1) == (1, (3, 0))
    assert py.koszul_sort((5, 5), 4, 1) == (0, ())
    assert py.koszul_sort((4, 4), 4, 1) == (1, (4, 4))


@given(st.lists(st.tuples(st.integers(0, 6), st.booleans()), min_size=1, max_size=6), st.integers(0, 4))
def test_layer_cohdegs_parity(gens, size):
    degs = [d for d, _ in gens]
    odd = [int(o) for _, o in gens]
    assert sorted(cy.layer_cohdegs(degs, odd, size)) == sorted(py.layer_cohdegs(degs, odd, size))


@given(st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=5), max_size=3))
def test_product_histogram_parity(layers):
    maxdeg = 5 * len(layers)
    assert cy.product_histogram(layers, maxdeg) == py.product_histogram(layers, maxdeg)


def test_histogram_range_error():
    for mod in (cy, py):
        with pytest.raises(ValueError):
            mod.product_histogram([[3]], 2)


def test_env_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, HYPERQUOT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from hyperquot import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
