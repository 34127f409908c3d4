"""Pure-Python implementations of the hot kernels.

These mirror ``_kernels.pyx`` exactly and are used whenever the compiled
extension is unavailable (or ``HYPERQUOT_PURE_PYTHON=1`` is set).
"""
from itertools import combinations, combinations_with_replacement, product


def koszul_sort(codes, ncolors, g):
    """Sort generator codes into descending order, tracking the Koszul sign.

    A code is odd when its color ``code % ncolors`` lies in ``1..2g``.
    Returns ``(sign, sorted_codes)``; ``sign`` is 0 when an odd code repeats.
    """
    seq = list(codes)
    sign = 1
    for i in range(1, len(seq)):
        cur = seq[i]
        cur_odd = 1 <= cur % ncolors <= 2 * g
        j = i - 1
        while j >= 0 and seq[j] < cur:
            if cur_odd and 1 <= seq[j] % ncolors <= 2 * g:
                sign = -sign
            seq[j + 1] = seq[j]
            j -= 1
        seq[j + 1] = cur
    if g:
        for i in range(1, len(seq)):
            if seq[i] == seq[i - 1] and 1 <= seq[i] % ncolors <= 2 * g:
                return 0, ()
    return sign, tuple(seq)


def layer_cohdegs(degs, odd, size):
    """Cohomological degree of every canonical monomial of ``size`` factors.

    ``degs[i]`` is the degree of generator ``i``; even generators may repeat,
    odd ones may not.
    """
    even_degs = [d for d, o in zip(degs, odd) if not o]
    odd_degs = [d for d, o in zip(degs, odd) if o]
    out = []
    for n_odd in range(min(size, len(odd_degs)) + 1):
        odd_sums = [sum(c) for c in combinations(odd_degs, n_odd)]
        even_sums = [sum(c) for c in combinations_with_replacement(even_degs, size - n_odd)]
        for e in even_sums:
            for o in odd_sums:
                out.append(e + o)
    return out


def product_histogram(layers, maxdeg):
    """Histogram of total degree over the full Cartesian product of ``layers``."""
    hist = [0] * (maxdeg + 1)
    for combo in product(*layers):
        total = sum(combo)
        if total < 0 or total > maxdeg:
            raise ValueError("degree %d outside histogram range" % total)
        hist[total] += 1
    return hist
