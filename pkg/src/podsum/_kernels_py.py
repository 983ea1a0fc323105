"""Pure-Python scoring kernels.

Same contract as the compiled ``podsum._kernels`` extension; used as the
fallback when the extension was not built (or when PODSUM_PURE_PYTHON=1).
"""

from __future__ import annotations

BACKEND = "python"


def _as_list(seq):
    tolist = getattr(seq, "tolist", None)
    return tolist() if tolist is not None else list(seq)


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two id sequences."""
    a, b = _as_list(a), _as_list(b)
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return 0
    prev = [0] * (m + 1)
    for i in range(n):
        cur = [0] * (m + 1)
        ai = a[i]
        for j in range(m):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            else:
                pj = prev[j + 1]
                cj = cur[j]
                cur[j + 1] = pj if pj >= cj else cj
        prev = cur
    return prev[m]


def sorted_overlap(a, b) -> int:
    """Multiset intersection size of two sorted id sequences."""
    a, b = _as_list(a), _as_list(b)
    i = j = count = 0
    n, m = len(a), len(b)
    while i < n and j < m:
        if a[i] == b[j]:
            count += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return count
