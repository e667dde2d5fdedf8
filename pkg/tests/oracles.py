"""Brute-force reference computations, written with explicit index loops.

These deliberately avoid the package's own kernels so tests compare two
independent routes.
"""

import itertools
import math

import numpy as np


def kron_loops(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), complex)
    for i, j, k, l in itertools.product(range(ra), range(ca), range(rb), range(cb)):
        out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_trace_loops(m, dims, traced):
    """Reduce an n-partite operator by summing matching indices of one factor."""
    m = np.asarray(m, complex)
    dims = list(dims)
    keep_dims = dims[:traced] + dims[traced + 1 :]
    size = math.prod(keep_dims)
    out = np.zeros((size, size), complex)

    def flat(idx):
        v = 0
        for i, d in zip(idx, dims):
            v = v * d + i
        return v

    def flat_keep(idx):
        v = 0
        for i, d in zip(idx, keep_dims):
            v = v * d + i
        return v

    for row in itertools.product(*[range(d) for d in keep_dims]):
        for col in itertools.product(*[range(d) for d in keep_dims]):
            s = 0j
            for j in range(dims[traced]):
                r = list(row[:traced]) + [j] + list(row[traced:])
                c = list(col[:traced]) + [j] + list(col[traced:])
                s += m[flat(r), flat(c)]
            out[flat_keep(row), flat_keep(col)] = s
    return out


def partial_transpose_second_loops(m, da, db):
    m = np.asarray(m, complex)
    out = np.zeros_like(m)
    for i, j, k, l in itertools.product(range(da), range(db), range(da), range(db)):
        out[i * db + j, k * db + l] = m[i * db + l, k * db + j]
    return out


def deutsch_rail1_loops(u, rho_in, rho):
    """``Tr_2[U (rho_in ⊗ rho) U^dagger]`` by explicit sums over a d x d register."""
    d = rho_in.shape[0]
    joint = np.asarray(u) @ kron_loops(rho_in, rho) @ np.asarray(u).conj().T
    return partial_trace_loops(joint, [d, d], 1)


def deutsch_rail2_loops(u, rho_in, rho):
    d = rho_in.shape[0]
    joint = np.asarray(u) @ kron_loops(rho_in, rho) @ np.asarray(u).conj().T
    return partial_trace_loops(joint, [d, d], 0)


def contraction_loops(u, d):
    """``<b|C|a> = (1/d) sum_j <j, b|U|a, j>`` evaluated element by element."""
    u = np.asarray(u, complex)
    c = np.zeros((d, d), complex)
    for a, b, j in itertools.product(range(d), range(d), range(d)):
        c[b, a] += u[j * d + b, a * d + j]
    return c / d


def entropy_bits(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def trace_distance_eigh(a, b):
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(a) - np.asarray(b)))))
