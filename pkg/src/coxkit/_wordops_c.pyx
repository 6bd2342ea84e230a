# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word kernels; see coxkit._wordops_py for the reference
implementation and the documentation of the conventions.  The checked
collection mode (termination-measure assertions) delegates to the pure
implementation so both modes have a single source of truth."""

from coxkit._wordops_py import CollectionOrderError
from coxkit import _wordops_py as _py

IMPL = "compiled"

DEF BUFCAP = 4096


def braid_closure(word):
    cdef bytes start = word.encode("ascii")
    cdef set seen = {start}
    cdef list stack = [start]
    cdef Py_ssize_t i, n
    cdef const unsigned char* p
    cdef bytes w, v
    while stack:
        w = stack.pop()
        n = len(w)
        p = w
        for i in range(n - 3):
            if p[i] != p[i + 1] and p[i + 2] == p[i] and p[i + 3] == p[i + 1]:
                v = w[:i] + bytes([p[i + 1], p[i], p[i + 1], p[i]]) + w[i + 4:]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return frozenset(x.decode("ascii") for x in seen)


cdef long _collect(unsigned char* buf, Py_ssize_t n, int k,
                   const unsigned char* cm) except -1:
    cdef Py_ssize_t pos, i
    cdef int a, b, cnt, t, base, m
    cdef long mask = 0
    while True:
        pos = -1
        for i in range(n - 1):
            if buf[i] >= buf[i + 1]:
                pos = i
                break
        if pos < 0:
            break
        a = buf[pos]
        b = buf[pos + 1]
        if a == b:
            for i in range(pos, n - 2):
                buf[i] = buf[i + 2]
            n -= 2
        else:
            base = (b * k + a) * 3
            cnt = cm[base]
            for t in range(cnt):
                m = cm[base + 1 + t]
                if not (b < m < a):
                    raise CollectionOrderError(
                        f"insertion {m} not strictly between {b} and {a}")
            if n + cnt >= BUFCAP:
                raise OverflowError("collection word too long")
            for i in range(n - 1, pos + 1, -1):
                buf[i + cnt] = buf[i]
            buf[pos] = b
            for t in range(cnt):
                buf[pos + 1 + t] = cm[base + 1 + t]
            buf[pos + 1 + cnt] = a
            n += cnt
    for i in range(n):
        mask |= 1 << buf[i]
    return mask


def collect_seq(seq, int k, bytes comm, bint check=False):
    if check:
        return _py.collect_seq(seq, k, comm, True)
    cdef unsigned char buf[BUFCAP]
    cdef Py_ssize_t n = 0
    for a in seq:
        if n >= BUFCAP:
            raise OverflowError("collection word too long")
        buf[n] = a
        n += 1
    return _collect(buf, n, k, comm)


def collect_mul(long x, long y, int k, bytes comm, bint check=False):
    if check:
        return _py.collect_mul(x, y, k, comm, True)
    cdef unsigned char buf[BUFCAP]
    cdef Py_ssize_t n = 0
    cdef int i
    for i in range(k):
        if x >> i & 1:
            buf[n] = i
            n += 1
    for i in range(k):
        if y >> i & 1:
            buf[n] = i
            n += 1
    return _collect(buf, n, k, comm)


def collect_inv(long x, int k, bytes comm, bint check=False):
    if check:
        return _py.collect_inv(x, k, comm, True)
    cdef unsigned char buf[BUFCAP]
    cdef Py_ssize_t n = 0
    cdef int i
    for i in range(k - 1, -1, -1):
        if x >> i & 1:
            buf[n] = i
            n += 1
    return _collect(buf, n, k, comm)
