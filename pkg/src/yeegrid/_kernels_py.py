"""Pure-Python kernels; reference for the compiled ``_kernels`` extension.

Both implementations must perform the same floating-point operations in the
same order so that their outputs are bitwise identical.
"""

import heapq

import numpy as np

# relative slack for threshold decisions, well below the audit tolerance
EPS = 1e-12


def merge_close(positions, min_cell):
    """Agglomerate sorted coordinates until all gaps are >= ``min_cell``.

    Repeatedly merges the adjacent pair of clusters with the smallest gap
    (leftmost on ties); a cluster sits at the mean of its original members.
    Returns ``(labels, centroids)``: cluster index per input, cluster positions.
    """
    pos = [float(p) for p in positions]
    n = len(pos)
    labels = np.zeros(n, dtype=np.int64)
    if n == 0:
        return labels, np.zeros(0)
    thr = min_cell * (1.0 - EPS)
    total = pos[:]
    count = [1] * n
    right = list(range(1, n)) + [-1]
    left = list(range(-1, n - 1))
    alive = [True] * n

    heap = []
    for i in range(n - 1):
        gap = pos[i + 1] - pos[i]
        if gap < thr:
            heap.append((gap, i))
    heapq.heapify(heap)

    while heap:
        gap, i = heapq.heappop(heap)
        if not alive[i]:
            continue
        j = right[i]
        if j < 0 or (total[j] / count[j]) - (total[i] / count[i]) != gap:
            continue
        total[i] = total[i] + total[j]
        count[i] += count[j]
        alive[j] = False
        k = right[j]
        right[i] = k
        if k >= 0:
            left[k] = i
        ci = total[i] / count[i]
        h = left[i]
        if h >= 0:
            g = ci - total[h] / count[h]
            if g < thr:
                heapq.heappush(heap, (g, h))
        if k >= 0:
            g = total[k] / count[k] - ci
            if g < thr:
                heapq.heappush(heap, (g, i))

    centroids = []
    c = -1
    for idx in range(n):
        if alive[idx]:
            c += 1
            centroids.append(total[idx] / count[idx])
        labels[idx] = c
    return labels, np.asarray(centroids, dtype=np.float64)


def grading_levels(sizes, r_max, min_cell, frozen):
    """Bisection depth per interval so adjacent sizes differ by at most ``r_max``.

    Interval ``i`` ends up split into ``2**levels[i]`` equal parts. An interval
    is only split while it is larger than ``r_max`` times a neighbour, is not
    frozen, and its halves stay >= ``min_cell``. The result is the least
    such fixpoint, so it does not depend on sweep order.
    """
    n = len(sizes)
    d = [float(s) for s in sizes]
    lev = [0] * n
    fz = [bool(f) for f in frozen]
    floor = min_cell * (1.0 - EPS)
    r = r_max * (1.0 + EPS)
    changed = True
    while changed:
        changed = False
        for i in range(1, n):
            while not fz[i] and d[i] > r * d[i - 1] and d[i] * 0.5 >= floor:
                d[i] *= 0.5
                lev[i] += 1
                changed = True
        for i in range(n - 2, -1, -1):
            while not fz[i] and d[i] > r * d[i + 1] and d[i] * 0.5 >= floor:
                d[i] *= 0.5
                lev[i] += 1
                changed = True
    return np.asarray(lev, dtype=np.int64)


BACKEND = "python"
