"""Wilcoxon signed-rank test for paired scenario comparisons.

Implemented from first principles: zero differences are dropped, absolute
differences get average ranks on ties, and the two-sided p-value comes from
the exact sign-flip distribution for small samples (n <= 20) or from a
tie-corrected normal approximation with continuity correction otherwise.

Two independent routes compute the exact tail: a generating-function count
used by `wilcoxon_signed_rank`, and the literal 2**n enumeration
`exact_signed_rank_p` kept as an oracle for tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EXACT_LIMIT = 20

METHOD_EXACT = "exact"
METHOD_NORMAL = "normal_approx"


@dataclass(frozen=True)
class WilcoxonResult:
    w_plus: float
    n_effective: int
    p_two_sided: float
    method: str


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ascending ranks 1..n with tied values sharing their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j < len(values) and values[order[j]] == values[order[i]]:
            j += 1
        ranks[order[i:j]] = (i + j + 1) / 2.0  # mean of positions i+1 .. j
        i = j
    return ranks


def _two_sided_from_counts(n_ge: float, n_le: float, n: int) -> float:
    return min(1.0, 2.0 * min(n_ge, n_le) / 2.0 ** n)


def _exact_p_counts(ranks: np.ndarray, w_observed: float) -> float:
    """Exact two-sided tail via sign-pattern counts (generating function).

    Average ranks are half-integers, so doubling makes the W+ support an
    integer lattice and the per-sum pattern counts exact integers.
    """
    doubled = np.rint(2.0 * np.asarray(ranks, dtype=np.float64)).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:len(counts) - r]
        counts = counts + shifted
    w2 = int(np.rint(2.0 * w_observed))
    n_ge = float(counts[w2:].sum())
    n_le = float(counts[:w2 + 1].sum())
    return _two_sided_from_counts(n_ge, n_le, len(ranks))


def exact_signed_rank_p(ranks, w_observed: float) -> float:
    """Two-sided tail by literal enumeration of all 2**n sign assignments."""
    ranks = np.asarray(ranks, dtype=np.float64)
    n = len(ranks)
    if n > EXACT_LIMIT:
        raise ValueError(f"exact enumeration limited to n <= {EXACT_LIMIT}")
    sums = np.zeros(1)
    for r in ranks:
        sums = np.concatenate([sums, sums + r])
    n_ge = float(np.count_nonzero(sums >= w_observed))
    n_le = float(np.count_nonzero(sums <= w_observed))
    return _two_sided_from_counts(n_ge, n_le, n)


def _normal_approx_p(abs_d: np.ndarray, w_plus: float, n: int) -> float:
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_sizes = np.unique(abs_d, return_counts=True)
    var -= float((tie_sizes.astype(np.float64) ** 3 - tie_sizes).sum()) / 48.0
    sigma = math.sqrt(var)
    if w_plus > mean:
        z = (w_plus - mean - 0.5) / sigma
        tail = 0.5 * math.erfc(z / math.sqrt(2.0))       # P(Z >= z)
    elif w_plus < mean:
        z = (w_plus - mean + 0.5) / sigma
        tail = 0.5 * math.erfc(-z / math.sqrt(2.0))      # P(Z <= z)
    else:
        tail = 0.5
    return 2.0 * min(tail, 0.5)


def wilcoxon_signed_rank(differences) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on paired differences."""
    d = np.asarray(differences, dtype=np.float64)
    d = d[d != 0.0]
    if d.size == 0:
        raise ValueError("all differences are zero: no information")
    abs_d = np.abs(d)
    ranks = _average_ranks(abs_d)
    w_plus = float(ranks[d > 0].sum())
    n = int(d.size)
    if n <= EXACT_LIMIT:
        p = _exact_p_counts(ranks, w_plus)
        method = METHOD_EXACT
    else:
        p = _normal_approx_p(abs_d, w_plus, n)
        method = METHOD_NORMAL
    return WilcoxonResult(w_plus=w_plus, n_effective=n, p_two_sided=p, method=method)
