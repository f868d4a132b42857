"""Index kernels for the truncated Fock basis.

Each kernel exists twice: a numba ``@njit`` loop and a vectorized numpy
version. ``FOCKFORGE_BACKEND=numpy`` forces the numpy path; otherwise numba is
used when it imports. Both paths produce identical arrays (same order, same
values), which the test suite checks.

Basis convention: sector ``k`` holds the tuples ``(a_1, ..., a_k)`` in base-``d``
lexicographic order, so the tuple's local index is ``sum a_i d**(k-i)`` and its
global index adds ``offsets[k] = sum_{j<k} d**j``.
"""

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is optional
    NUMBA_AVAILABLE = False

_requested = os.environ.get("FOCKFORGE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"FOCKFORGE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numba" if (_requested == "numba" and NUMBA_AVAILABLE) else "numpy"


def sector_offsets(d, N):
    """Start index of each particle-number sector, plus the total dimension."""
    sizes = np.array([d**k for k in range(N + 1)], dtype=np.int64)
    return np.concatenate(([0], np.cumsum(sizes)))


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------


def creation_coo_numpy(d, N, h, left):
    offsets = sector_offsets(d, N)
    rows, cols, vals = [], [], []
    for k in range(N):
        size = d**k
        local = np.arange(size, dtype=np.int64)
        a = np.arange(d, dtype=np.int64)
        if left:
            target = a[:, None] * size + local[None, :]
        else:
            target = local[None, :] * d + a[:, None]
        rows.append((offsets[k + 1] + target).ravel())
        cols.append(np.broadcast_to(offsets[k] + local, (d, size)).ravel())
        vals.append(np.broadcast_to(h[:, None], (d, size)).ravel())
    if not rows:
        return (np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.complex128))
    return (
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(vals).astype(np.complex128),
    )


def flip_permutation_numpy(d, N):
    offsets = sector_offsets(d, N)
    perm = np.empty(offsets[-1], dtype=np.int64)
    for k in range(N + 1):
        local = np.arange(d**k, dtype=np.int64)
        rev = np.zeros_like(local)
        rest = local.copy()
        for _ in range(k):
            rev = rev * d + rest % d
            rest //= d
        perm[offsets[k] : offsets[k + 1]] = offsets[k] + rev
    return perm


def product_diagonal_numpy(N, weights):
    """Diagonal of Gamma(diag(weights)): entry at a tuple is prod weights[a_i]."""
    blocks = [np.ones(1)]
    current = np.ones(1)
    for _ in range(N):
        current = np.kron(current, weights)
        blocks.append(current)
    return np.concatenate(blocks)


def particle_numbers_numpy(d, N):
    offsets = sector_offsets(d, N)
    return np.repeat(np.arange(N + 1), np.diff(offsets))


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=False)
    def _creation_coo_jit(d, N, h, left, offsets):
        nnz = d * (offsets[N] - offsets[0])
        rows = np.empty(nnz, np.int64)
        cols = np.empty(nnz, np.int64)
        vals = np.empty(nnz, np.complex128)
        pos = 0
        for k in range(N):
            size = offsets[k + 1] - offsets[k]
            for a in range(d):
                for i in range(size):
                    if left:
                        t = a * size + i
                    else:
                        t = i * d + a
                    rows[pos] = offsets[k + 1] + t
                    cols[pos] = offsets[k] + i
                    vals[pos] = h[a]
                    pos += 1
        return rows, cols, vals

    @njit(cache=False)
    def _flip_permutation_jit(d, N, offsets):
        perm = np.empty(offsets[N + 1], np.int64)
        for k in range(N + 1):
            size = offsets[k + 1] - offsets[k]
            for i in range(size):
                rest = i
                rev = 0
                for _ in range(k):
                    rev = rev * d + rest % d
                    rest //= d
                perm[offsets[k] + i] = offsets[k] + rev
        return perm

    @njit(cache=False)
    def _product_diagonal_jit(d, N, weights, offsets):
        out = np.empty(offsets[N + 1], np.float64)
        out[0] = 1.0
        for k in range(1, N + 1):
            prev = offsets[k - 1]
            size = offsets[k] - offsets[k - 1]
            base = offsets[k]
            # tuple (a, rest...) sits at a*size + index(rest)
            for a in range(d):
                w = weights[a]
                for i in range(size):
                    out[base + a * size + i] = w * out[prev + i]
        return out


def creation_coo(d, N, h, left, backend=None):
    """COO triplets of the truncated left (or right) creation operator."""
    backend = backend or BACKEND
    h = np.ascontiguousarray(h, dtype=np.complex128)
    if backend == "numba":
        return _creation_coo_jit(d, N, h, bool(left), sector_offsets(d, N))
    return creation_coo_numpy(d, N, h, left)


def flip_permutation(d, N, backend=None):
    """``perm[i]`` is the index of the reversed tuple of basis index ``i``."""
    backend = backend or BACKEND
    if backend == "numba":
        return _flip_permutation_jit(d, N, sector_offsets(d, N))
    return flip_permutation_numpy(d, N)


def product_diagonal(d, N, weights, backend=None):
    backend = backend or BACKEND
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if len(weights) != d:
        raise ValueError(f"expected {d} weights, got {len(weights)}")
    if backend == "numba":
        return _product_diagonal_jit(d, N, weights, sector_offsets(d, N))
    return product_diagonal_numpy(N, weights)


def particle_numbers(d, N):
    return particle_numbers_numpy(d, N)
