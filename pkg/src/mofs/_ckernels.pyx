# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors :mod:`mofs._pykernels` function by function."""

import numpy as np
from libc.math cimport exp, sqrt, fabs, INFINITY
from scipy.linalg.cython_lapack cimport dpotrf, dpotrs

cdef double _STD_FLOOR = 1e-12


def zscore_stats(const double[:, :] X):
    cdef Py_ssize_t n = X.shape[0], k = X.shape[1], i, f
    mean_arr = np.zeros(k)
    std_arr = np.zeros(k)
    cdef double[::1] mean = mean_arr, std = std_arr
    cdef double acc, d
    for f in range(k):
        acc = 0.0
        for i in range(n):
            acc += X[i, f]
        mean[f] = acc / n
        acc = 0.0
        for i in range(n):
            d = X[i, f] - mean[f]
            acc += d * d
        std[f] = sqrt(acc / n)
        if std[f] <= _STD_FLOOR * (1.0 + fabs(mean[f])):
            std[f] = 1.0
    return mean_arr, std_arr


def rbf_gram(const double[:, :] A, const double[:, :] B, double gamma):
    cdef Py_ssize_t n = A.shape[0], m = B.shape[0], k = A.shape[1], i, j, f
    out_arr = np.empty((n, m))
    cdef double[:, ::1] out = out_arr
    cdef double acc, d
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for f in range(k):
                d = A[i, f] - B[j, f]
                acc += d * d
            out[i, j] = exp(-gamma * acc)
    return out_arr


def kernel_ridge_scores(const double[:, :] X_train, const double[::1] y_pm,
                        const double[:, :] X_test, features, double gamma, double ridge):
    cdef long[::1] feat = np.ascontiguousarray(features, dtype=np.int_)
    cdef Py_ssize_t n = X_train.shape[0], m = X_test.shape[0], k = feat.shape[0]
    cdef Py_ssize_t i, j, f
    cdef double acc, d, mu, sd
    cdef double[:, ::1] A = np.empty((n, k))
    cdef double[:, ::1] B = np.empty((m, k))
    for f in range(k):
        acc = 0.0
        for i in range(n):
            acc += X_train[i, feat[f]]
        mu = acc / n
        acc = 0.0
        for i in range(n):
            d = X_train[i, feat[f]] - mu
            acc += d * d
        sd = sqrt(acc / n)
        if sd <= _STD_FLOOR * (1.0 + fabs(mu)):
            sd = 1.0
        for i in range(n):
            A[i, f] = (X_train[i, feat[f]] - mu) / sd
        for i in range(m):
            B[i, f] = (X_test[i, feat[f]] - mu) / sd

    # Squared distances in C, then one vectorized exp pass over each block.
    G_arr = np.empty((n, n))
    cdef double[:, ::1] G = G_arr
    for i in range(n):
        G[i, i] = 0.0
        for j in range(i):
            acc = 0.0
            for f in range(k):
                d = A[i, f] - A[j, f]
                acc += d * d
            G[i, j] = acc
            G[j, i] = acc
    np.multiply(G_arr, -gamma, out=G_arr)
    np.exp(G_arr, out=G_arr)
    for i in range(n):
        G[i, i] = 1.0 + ridge

    alpha_arr = np.array(y_pm, dtype=np.float64)
    cdef double[::1] alpha = alpha_arr
    # Symmetric, so row-major storage is its own column-major transpose.
    cdef char uplo = b'L'
    cdef int nn = <int>n, one = 1, info = 0
    dpotrf(&uplo, &nn, &G[0, 0], &nn, &info)
    if info != 0:
        raise np.linalg.LinAlgError("kernel matrix is not positive definite")
    dpotrs(&uplo, &nn, &one, &G[0, 0], &nn, &alpha[0], &nn, &info)

    T_arr = np.empty((m, n))
    cdef double[:, ::1] T = T_arr
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for f in range(k):
                d = B[i, f] - A[j, f]
                acc += d * d
            T[i, j] = acc
    np.multiply(T_arr, -gamma, out=T_arr)
    np.exp(T_arr, out=T_arr)
    return T_arr @ alpha_arr


def front_ranks(obj):
    cdef const double[:, :] o = np.ascontiguousarray(obj, dtype=np.float64)
    cdef Py_ssize_t n = o.shape[0], m = o.shape[1], i, j, c
    cdef bint ge, gt
    dom_arr = np.zeros((n, n), dtype=np.uint8)
    count_arr = np.zeros(n, dtype=np.int64)
    ranks_arr = np.full(n, -1, dtype=np.int64)
    cdef unsigned char[:, ::1] dom = dom_arr
    cdef long long[::1] count = count_arr
    cdef long long[::1] ranks = ranks_arr
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ge = True
            gt = False
            for c in range(m):
                if o[i, c] < o[j, c]:
                    ge = False
                    break
                if o[i, c] > o[j, c]:
                    gt = True
            if ge and gt:
                dom[i, j] = 1
                count[j] += 1
    cdef list front = [i for i in range(n) if count[i] == 0]
    cdef list nxt
    cdef long long r = 0
    while front:
        nxt = []
        for i in front:
            ranks[i] = r
        for i in front:
            for j in range(n):
                if dom[i, j]:
                    count[j] -= 1
                    if count[j] == 0:
                        nxt.append(j)
        nxt.sort()
        front = nxt
        r += 1
    return ranks_arr


def crowding_distance(obj):
    cdef const double[:, :] o = np.ascontiguousarray(obj, dtype=np.float64)
    cdef Py_ssize_t n = o.shape[0], m = o.shape[1], i, j
    dist_arr = np.zeros(n)
    if n == 0:
        return dist_arr
    cdef double[::1] dist = dist_arr
    cdef long[::1] order
    cdef double span
    for j in range(m):
        order = np.argsort(np.asarray(o[:, j]), kind="stable").astype(np.int_)
        dist[order[0]] = INFINITY
        dist[order[n - 1]] = INFINITY
        span = o[order[n - 1], j] - o[order[0], j]
        if n > 2 and span > 0:
            for i in range(1, n - 1):
                dist[order[i]] += (o[order[i + 1], j] - o[order[i - 1], j]) / span
    return dist_arr


def mutation_probabilities(mask, const double[:, :] R):
    cdef const unsigned char[::1] sel = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t n = sel.shape[0], i, j
    cdef long k = 0
    for i in range(n):
        k += sel[i] != 0
    mp_arr = np.ones(n)
    if k == 0:
        return mp_arr
    cdef double[::1] mp = mp_arr
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if sel[j] and j != i:
                acc += R[i, j]
        if sel[i]:
            mp[i] = acc / k
        else:
            mp[i] = 1.0 - acc / k
    return mp_arr


def auc_mann_whitney(scores, labels):
    cdef const double[::1] s = np.ascontiguousarray(scores, dtype=np.float64)
    cdef const unsigned char[::1] lab = np.ascontiguousarray(np.asarray(labels) != 0, dtype=np.uint8)
    cdef Py_ssize_t n = s.shape[0], i, start, end
    cdef long[::1] order = np.argsort(np.asarray(s), kind="mergesort").astype(np.int_)
    cdef long long n_pos = 0, twice_sum = 0, n_in_group
    for i in range(n):
        n_pos += lab[i]
    cdef long long n_neg = n - n_pos
    start = 0
    while start < n:
        end = start + 1
        while end < n and s[order[end]] == s[order[start]]:
            end += 1
        n_in_group = 0
        for i in range(start, end):
            n_in_group += lab[order[i]]
        twice_sum += n_in_group * (start + 1 + end)
        start = end
    return (twice_sum - n_pos * (n_pos + 1)) / (2.0 * n_pos * n_neg)
