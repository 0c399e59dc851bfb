"""Work queues for reverse push.

``IndexedMaxHeap`` is an array-backed binary max-heap with a position map so
priorities can be raised in place. Equal priorities pop the lowest node id
first. ``FifoWorkSet`` is the queue-free alternative: a FIFO over nodes whose
priority exceeds a fixed threshold.
"""
from __future__ import annotations

from collections import deque


class IndexedMaxHeap:
    def __init__(self):
        self._heap: list[int] = []
        self._prio: dict[int, float] = {}
        self._pos: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def __contains__(self, node: int) -> bool:
        return node in self._pos

    def priority(self, node: int) -> float:
        return self._prio[node]

    def max_priority(self) -> float:
        if not self._heap:
            raise IndexError("max_priority of empty heap")
        return self._prio[self._heap[0]]

    def peek(self) -> int:
        if not self._heap:
            raise IndexError("peek of empty heap")
        return self._heap[0]

    def items(self) -> dict[int, float]:
        return dict(self._prio)

    def _above(self, a: int, b: int) -> bool:
        pa, pb = self._prio[a], self._prio[b]
        return pa > pb or (pa == pb and a < b)

    def increase(self, node: int, priority: float) -> None:
        """Insert ``node`` or raise its priority. Lowering is not supported."""
        pos = self._pos.get(node)
        if pos is None:
            pos = len(self._heap)
            self._heap.append(node)
            self._pos[node] = pos
        elif priority < self._prio[node]:
            raise ValueError(f"priority of {node} would decrease")
        self._prio[node] = priority
        self._sift_up(pos)

    def pop(self) -> tuple[int, float]:
        heap = self._heap
        if not heap:
            raise IndexError("pop from empty heap")
        top = heap[0]
        last = heap.pop()
        if heap:
            heap[0] = last
            self._pos[last] = 0
            self._sift_down(0)
        del self._pos[top]
        return top, self._prio.pop(top)

    def _sift_up(self, pos: int) -> None:
        heap, prio, where = self._heap, self._prio, self._pos
        node = heap[pos]
        p = prio[node]
        while pos > 0:
            parent = (pos - 1) >> 1
            other = heap[parent]
            q = prio[other]
            if p > q or (p == q and node < other):
                heap[pos] = other
                where[other] = pos
                pos = parent
            else:
                break
        heap[pos] = node
        where[node] = pos

    def _sift_down(self, pos: int) -> None:
        heap, where = self._heap, self._pos
        size = len(heap)
        node = heap[pos]
        while True:
            child = 2 * pos + 1
            if child >= size:
                break
            right = child + 1
            if right < size and self._above(heap[right], heap[child]):
                child = right
            if self._above(heap[child], node):
                heap[pos] = heap[child]
                where[heap[pos]] = pos
                pos = child
            else:
                break
        heap[pos] = node
        where[node] = pos

    def check(self) -> None:
        """Assert the heap property and the position map. For tests."""
        for i, node in enumerate(self._heap):
            assert self._pos[node] == i
            if i:
                assert not self._above(node, self._heap[(i - 1) >> 1])
        assert len(self._pos) == len(self._heap) == len(self._prio)


class FifoWorkSet:
    """FIFO over nodes with priority strictly above ``threshold``."""

    def __init__(self, threshold: float):
        self.threshold = threshold
        self._queue: deque[int] = deque()
        self._prio: dict[int, float] = {}

    def __len__(self) -> int:
        return len(self._queue)

    def __bool__(self) -> bool:
        return bool(self._queue)

    def __contains__(self, node: int) -> bool:
        return node in self._prio

    def items(self) -> dict[int, float]:
        return dict(self._prio)

    def max_priority(self) -> float:
        if not self._prio:
            raise IndexError("max_priority of empty work set")
        return max(self._prio.values())

    def increase(self, node: int, priority: float) -> None:
        if node in self._prio:
            self._prio[node] = priority
        elif priority > self.threshold:
            self._prio[node] = priority
            self._queue.append(node)

    def pop(self) -> tuple[int, float]:
        node = self._queue.popleft()
        return node, self._prio.pop(node)
