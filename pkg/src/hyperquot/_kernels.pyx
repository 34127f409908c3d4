# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; see ``_pykernels.py`` for the reference semantics."""
from libc.stdlib cimport malloc, free


cdef inline bint _is_odd(long code, long ncolors, long g):
    cdef long c = code % ncolors
    return 1 <= c <= 2 * g


def koszul_sort(tuple codes, long ncolors, long g):
    cdef Py_ssize_t n = len(codes)
    cdef Py_ssize_t i, j
    cdef long cur
    cdef int sign = 1
    cdef bint cur_odd
    if n == 0:
        return 1, ()
    cdef long *seq = <long *> malloc(n * sizeof(long))
    if not seq:
        raise MemoryError()
    try:
        for i in range(n):
            seq[i] = codes[i]
        for i in range(1, n):
            cur = seq[i]
            cur_odd = _is_odd(cur, ncolors, g)
            j = i - 1
            while j >= 0 and seq[j] < cur:
                if cur_odd and _is_odd(seq[j], ncolors, g):
                    sign = -sign
                seq[j + 1] = seq[j]
                j -= 1
            seq[j + 1] = cur
        if g:
            for i in range(1, n):
                if seq[i] == seq[i - 1] and _is_odd(seq[i], ncolors, g):
                    return 0, ()
        return sign, tuple([seq[i] for i in range(n)])
    finally:
        free(seq)


cdef void _even_rec(long *degs, Py_ssize_t ndeg, Py_ssize_t start, long left,
                    long acc, list out):
    cdef Py_ssize_t i
    if left == 0:
        out.append(acc)
        return
    for i in range(start, ndeg):
        _even_rec(degs, ndeg, i, left - 1, acc + degs[i], out)


cdef void _odd_rec(long *degs, Py_ssize_t ndeg, Py_ssize_t start, long left,
                   long acc, list out):
    cdef Py_ssize_t i
    if left == 0:
        out.append(acc)
        return
    for i in range(start, ndeg):
        _odd_rec(degs, ndeg, i + 1, left - 1, acc + degs[i], out)


def layer_cohdegs(degs, odd, long size):
    cdef Py_ssize_t m = len(degs)
    cdef Py_ssize_t ne = 0, no = 0, i
    cdef long *even_d = <long *> malloc((m + 1) * sizeof(long))
    cdef long *odd_d = <long *> malloc((m + 1) * sizeof(long))
    cdef list out = []
    cdef list es, os_
    cdef long e, o, n_odd
    try:
        for i in range(m):
            if odd[i]:
                odd_d[no] = degs[i]
                no += 1
            else:
                even_d[ne] = degs[i]
                ne += 1
        for n_odd in range(min(size, no) + 1):
            os_ = []
            _odd_rec(odd_d, no, 0, n_odd, 0, os_)
            es = []
            _even_rec(even_d, ne, 0, size - n_odd, 0, es)
            for e in es:
                for o in os_:
                    out.append(e + o)
        return out
    finally:
        free(even_d)
        free(odd_d)


def product_histogram(list layers, long maxdeg):
    cdef Py_ssize_t nl = len(layers)
    cdef Py_ssize_t i, k
    cdef list hist_out
    if nl == 0:
        hist_out = [0] * (maxdeg + 1)
        hist_out[0] = 1
        return hist_out
    cdef long **arrs = <long **> malloc(nl * sizeof(long *))
    cdef Py_ssize_t *lens = <Py_ssize_t *> malloc(nl * sizeof(Py_ssize_t))
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc(nl * sizeof(Py_ssize_t))
    cdef long long *hist = <long long *> malloc((maxdeg + 1) * sizeof(long long))
    cdef long total
    cdef list layer
    for i in range(nl):
        arrs[i] = NULL
    try:
        for i in range(maxdeg + 1):
            hist[i] = 0
        for i in range(nl):
            layer = layers[i]
            lens[i] = len(layer)
            if lens[i] == 0:
                return [0] * (maxdeg + 1)
            arrs[i] = <long *> malloc(lens[i] * sizeof(long))
            for k in range(lens[i]):
                arrs[i][k] = layer[k]
            idx[i] = 0
        # odometer over the full product
        while True:
            total = 0
            for i in range(nl):
                total += arrs[i][idx[i]]
            if total < 0 or total > maxdeg:
                raise ValueError("degree %d outside histogram range" % total)
            hist[total] += 1
            i = nl - 1
            while i >= 0:
                idx[i] += 1
                if idx[i] < lens[i]:
                    break
                idx[i] = 0
                i -= 1
            if i < 0:
                break
        return [hist[i] for i in range(maxdeg + 1)]
    finally:
        for i in range(nl):
            if arrs[i] != NULL:
                free(arrs[i])
        free(arrs)
        free(lens)
        free(idx)
        free(hist)
