# cython: boundscheck=False, wraparound=False, cdivision=True
"""Row reduction over F_p on C-contiguous int64 buffers.

Entries must already be reduced to 0..p-1.  The matrix is transformed in
place to reduced row echelon form (unit pivots, zeros above and below);
the list of pivot columns is returned.
"""


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a != 0 mod p, p prime
    cdef long long t = 0, newt = 1
    cdef long long r = p, newr = a % p
    cdef long long q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref(long long[:, ::1] a, long long p):
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef long long inv, factor, v
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                v = a[piv, j]
                a[piv, j] = a[r, j]
                a[r, j] = v
        inv = _inv_mod(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            factor = a[i, c]
            if factor == 0:
                continue
            for j in range(c, cols):
                a[i, j] = (a[i, j] - factor * a[r, j]) % p
                if a[i, j] < 0:
                    a[i, j] += p
        pivots.append(c)
        r += 1
    return pivots
