# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_pykernels`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, pow
from libc.stdint cimport uint64_t

cnp.import_array()

NAME = "cython"

cdef double _EULER = 0.5772156649015329
cdef double _SHIFT = 10.0
cdef double _C0 = 1.0 / 12.0
cdef double _C1 = -1.0 / 120.0
cdef double _C2 = 1.0 / 252.0
cdef double _C3 = -1.0 / 240.0
cdef double _C4 = 1.0 / 132.0
cdef double _C5 = -691.0 / 32760.0


cdef inline double _digamma(double x) nogil:
    cdef double acc = 0.0
    cdef double f, tail
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    f = 1.0 / (x * x)
    tail = f * (_C0 + f * (_C1 + f * (_C2 + f * (_C3 + f * (_C4 + f * _C5)))))
    return acc + (log(x) - 0.5 / x - tail)


def digamma_array(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xs)
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        out[i] = _digamma(xs[i])
    return out.reshape(np.shape(x))


def meanings_by_rank(long n_words, double gamma):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_words, dtype=np.float64)
    cdef double[::1] m = out
    cdef double total_words = <double>n_words
    cdef double val
    cdef long i
    with nogil:
        for i in range(n_words):
            val = _digamma(pow(total_words / <double>(i + 1), gamma) + 1.0) + _EULER
            m[i] = val if val > 1.0 else 1.0
    return out


def meanings_total(long n_words, double gamma):
    cdef double total_words = <double>n_words
    cdef double acc = 0.0
    cdef double val
    cdef long i
    with nogil:
        for i in range(n_words):
            val = _digamma(pow(total_words / <double>(i + 1), gamma) + 1.0) + _EULER
            acc += val if val > 1.0 else 1.0
    return acc


def spectrum_counts(m_in, long k_max):
    cdef double[::1] m = np.ascontiguousarray(m_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(k_max, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double p, ratio
    with nogil:
        for i in range(m.shape[0]):
            p = 1.0 / m[i]
            ratio = (m[i] - 1.0) / m[i]
            for k in range(k_max):
                out[k] += p
                p = p * ratio
    return out_arr


cdef inline uint64_t _splitmix64(uint64_t z) nogil:
    z = z + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def uniform_block(seeds_in, long n):
    cdef cnp.uint64_t[::1] seeds = np.ascontiguousarray(seeds_in, dtype=np.uint64)
    cdef Py_ssize_t rows = seeds.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((rows, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r, j
    cdef uint64_t state
    with nogil:
        for r in range(rows):
            state = _splitmix64(seeds[r])
            if state == 0:
                state = 0x9E3779B97F4A7C15ULL
            for j in range(n):
                state ^= state >> 12
                state ^= state << 25
                state ^= state >> 27
                out[r, j] = <double>(((state * 0x2545F4914F6CDD1DULL) >> 11) + 1) * (1.0 / 9007199254740992.0)
    return out_arr
