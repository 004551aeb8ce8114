"""Hot inner loops of the lattice engine.

Every kernel exists twice: a numba ``@njit`` loop and a pure-numpy
version.  The numba path is used when numba imports cleanly and the
environment variable ``FUZZYSUB_NUMBA`` is not set to ``0``; tests and the
benchmark flip between them with :func:`use_backend`.

Bitsets are rows of ``uint64`` words, bit ``i`` of the row being element
index ``i`` (little-endian within and across words).
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_BACKENDS = ("numba", "numpy")


def _initial_backend() -> str:
    flag = os.environ.get("FUZZYSUB_NUMBA", "1").strip().lower()
    if HAVE_NUMBA and flag not in ("0", "false", "no", "off"):
        return "numba"
    return "numpy"


_backend = _initial_backend()


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {_BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name


@contextmanager
def use_backend(name: str) -> Iterator[None]:
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def n_words(order: int) -> int:
    return (order + 63) // 64


def pack(member: np.ndarray, words: int) -> np.ndarray:
    """Boolean membership vector -> ``uint64`` word row."""
    buf = np.zeros(words * 8, dtype=np.uint8)
    packed = np.packbits(member.astype(np.bool_), bitorder="little")
    buf[: packed.size] = packed
    return buf.view(np.uint64)


def unpack(row: np.ndarray, order: int) -> np.ndarray:
    bits = np.unpackbits(row.view(np.uint8), bitorder="little")
    return bits[:order].astype(np.bool_)


# ---------------------------------------------------------------------------
# generated subgroup: orbit of the identity under right multiplication


def _generate_numpy(table, seed, gens):
    member = np.zeros(table.shape[0], dtype=np.bool_)
    member[0] = True
    member[seed] = True
    frontier = np.unique(np.concatenate(([0], seed)))
    if gens.size == 0:
        return member
    while frontier.size:
        prods = table[np.ix_(frontier, gens)].ravel()
        fresh = np.unique(prods[~member[prods]])
        member[fresh] = True
        frontier = fresh
    return member


def _generate_numba_py(table, seed, gens):
    n = table.shape[0]
    member = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    member[0] = True
    queue[0] = 0
    tail = 1
    for s in seed:
        if not member[s]:
            member[s] = True
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        a = queue[head]
        head += 1
        for g in gens:
            b = table[a, g]
            if not member[b]:
                member[b] = True
                queue[tail] = b
                tail += 1
    return member


# ---------------------------------------------------------------------------
# proper containment K < H between canonically sorted subgroups (CSR)


def _containment_numpy(words, sizes):
    n = words.shape[0]
    rows = []
    for j in range(n):
        cand = np.nonzero((sizes[:j] < sizes[j]) & (sizes[j] % sizes[:j] == 0))[0]
        if cand.size:
            inside = ~np.any(words[cand] & ~words[j], axis=1)
            rows.append(cand[inside])
        else:
            rows.append(cand)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([r.size for r in rows])
    indices = np.concatenate(rows).astype(np.int64) if rows else np.zeros(0, np.int64)
    return indptr, indices


def _containment_numba_py(words, sizes):
    n, w = words.shape
    counts = np.zeros(n + 1, dtype=np.int64)
    for j in range(n):
        c = 0
        for i in range(j):
            if sizes[i] < sizes[j] and sizes[j] % sizes[i] == 0:
                ok = True
                for k in range(w):
                    if words[i, k] & ~words[j, k]:
                        ok = False
                        break
                if ok:
                    c += 1
        counts[j + 1] = counts[j] + c
    indices = np.empty(counts[n], dtype=np.int64)
    for j in range(n):
        pos = counts[j]
        for i in range(j):
            if sizes[i] < sizes[j] and sizes[j] % sizes[i] == 0:
                ok = True
                for k in range(w):
                    if words[i, k] & ~words[j, k]:
                        ok = False
                        break
                if ok:
                    indices[pos] = i
                    pos += 1
    return counts, indices


# ---------------------------------------------------------------------------
# Hasse covers: maximal members of each containment row


def _covers_numpy(words, indptr, indices):
    n = words.shape[0]
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    out = []
    for j in range(n):
        below = indices[indptr[j] : indptr[j + 1]][::-1]
        maxima: list[int] = []
        for k in below:
            if maxima:
                hits = ~np.any(words[k] & ~words[maxima], axis=1)
                if hits.any():
                    continue
            maxima.append(int(k))
        maxima.sort()
        out.extend(maxima)
        out_ptr[j + 1] = len(out)
    return out_ptr, np.asarray(out, dtype=np.int64)


def _covers_numba_py(words, indptr, indices):
    n, w = words.shape
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    out = np.empty(indices.size, dtype=np.int64)
    total = 0
    for j in range(n):
        start = total
        lo = indptr[j]
        hi = indptr[j + 1]
        # larger subgroups sit later in the row; scan them first
        for t in range(hi - 1, lo - 1, -1):
            k = indices[t]
            covered = False
            for m in range(start, total):
                other = out[m]
                inside = True
                for q in range(w):
                    if words[k, q] & ~words[other, q]:
                        inside = False
                        break
                if inside:
                    covered = True
                    break
            if not covered:
                out[total] = k
                total += 1
        out[start:total] = np.sort(out[start:total])
        out_ptr[j + 1] = total
    return out_ptr, out[:total].copy()


if HAVE_NUMBA:
    _generate_numba = numba.njit(cache=True)(_generate_numba_py)
    _containment_numba = numba.njit(cache=True)(_containment_numba_py)
    _covers_numba = numba.njit(cache=True)(_covers_numba_py)
else:  # pragma: no cover
    _generate_numba = _generate_numba_py
    _containment_numba = _containment_numba_py
    _covers_numba = _covers_numba_py


def generate(table: np.ndarray, seed: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Membership mask of the subgroup generated by ``gens``.

    ``seed`` must already lie inside that subgroup; it only saves work.
    """
    seed = np.ascontiguousarray(seed, dtype=np.int64)
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    if _backend == "numba":
        return _generate_numba(table, seed, gens)
    return _generate_numpy(table, seed, gens)


def containment(words: np.ndarray, sizes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """CSR rows: row ``j`` lists every ``i`` whose subgroup is a proper subset of ``j``'s."""
    if _backend == "numba":
        return _containment_numba(words, sizes)
    return _containment_numpy(words, sizes)


def covers(
    words: np.ndarray, indptr: np.ndarray, indices: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Transitive reduction of a containment CSR (rows sorted by size)."""
    if _backend == "numba":
        return _covers_numba(words, indptr, indices)
    return _covers_numpy(words, indptr, indices)
