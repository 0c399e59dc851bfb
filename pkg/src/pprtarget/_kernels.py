"""Compiled reverse-push loops.

Scratch arrays are sized to the graph but only touched entries are read or
reset, so a query costs time proportional to the explored neighbourhood.
The update order matches ``push.propagate`` exactly, so both engines return
bit-identical scores.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _above(a, b, p):
    return p[a] > p[b] or (p[a] == p[b] and a < b)


@njit(cache=True, nogil=True)
def _sift_up(i, heap, pos, p):
    node = heap[i]
    while i > 0:
        parent = (i - 1) >> 1
        other = heap[parent]
        if _above(node, other, p):
            heap[i] = other
            pos[other] = i
            i = parent
        else:
            break
    heap[i] = node
    pos[node] = i


@njit(cache=True, nogil=True)
def _sift_down(i, size, heap, pos, p):
    node = heap[i]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        right = child + 1
        if right < size and _above(heap[right], heap[child], p):
            child = right
        if _above(heap[child], node, p):
            heap[i] = heap[child]
            pos[heap[i]] = i
            i = child
        else:
            break
    heap[i] = node
    pos[node] = i


@njit(cache=True, nogil=True)
def push_heap(in_ptr, in_idx, in_coef, target, alpha, threshold, s, p, pos, seen, heap, touched):
    """Priority-queue push. ``pos`` must be all -1 on entry and is left that way."""
    n_touched = 0
    s[target] = alpha
    p[target] = alpha
    seen[target] = True
    touched[n_touched] = target
    n_touched += 1
    heap[0] = target
    pos[target] = 0
    size = 1
    pops = 0
    steps = 0
    keep = 1.0 - alpha
    while size > 0 and p[heap[0]] > threshold:
        w = heap[0]
        size -= 1
        pos[w] = -1
        if size > 0:
            heap[0] = heap[size]
            pos[heap[0]] = 0
            _sift_down(0, size, heap, pos, p)
        pops += 1
        pw = p[w]
        p[w] = 0.0
        scale = keep * pw
        a = in_ptr[w]
        b = in_ptr[w + 1]
        for k in range(a, b):
            coef = in_coef[k]
            if coef == 0.0:
                continue
            u = in_idx[k]
            ds = scale * coef
            if not seen[u]:
                seen[u] = True
                touched[n_touched] = u
                n_touched += 1
            s[u] += ds
            p[u] += ds
            if pos[u] < 0:
                heap[size] = u
                pos[u] = size
                size += 1
            _sift_up(pos[u], heap, pos, p)
        steps += b - a
    for i in range(size):
        pos[heap[i]] = -1
    return n_touched, pops, steps


@njit(cache=True, nogil=True)
def push_fifo(in_ptr, in_idx, in_coef, target, alpha, threshold, s, p, pos, seen, ring, touched):
    """Work-set push with a FIFO ring buffer; ``pos`` doubles as a membership flag."""
    cap = ring.shape[0]
    n_touched = 0
    s[target] = alpha
    p[target] = alpha
    seen[target] = True
    touched[n_touched] = target
    n_touched += 1
    head = 0
    count = 0
    if alpha > threshold:
        ring[0] = target
        pos[target] = 0
        count = 1
    pops = 0
    steps = 0
    keep = 1.0 - alpha
    while count > 0:
        w = ring[head]
        head = (head + 1) % cap
        count -= 1
        pos[w] = -1
        pops += 1
        pw = p[w]
        p[w] = 0.0
        scale = keep * pw
        a = in_ptr[w]
        b = in_ptr[w + 1]
        for k in range(a, b):
            coef = in_coef[k]
            if coef == 0.0:
                continue
            u = in_idx[k]
            ds = scale * coef
            if not seen[u]:
                seen[u] = True
                touched[n_touched] = u
                n_touched += 1
            s[u] += ds
            p[u] += ds
            if pos[u] < 0 and p[u] > threshold:
                ring[(head + count) % cap] = u
                pos[u] = 0
                count += 1
        steps += b - a
    return n_touched, pops, steps
