"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the package's numerical code.
"""

import math


def pearson_ref(x, y):
    """Textbook Pearson in plain Python; None when either input is constant."""
    n = len(x)
    if len(set(x)) == 1 or len(set(y)) == 1:
        return None
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def _term(vectors):
    # (sum_i sum_j |r_ij| - n) / (n^2 - n), diagonal |r_ii| = 1 by definition
    n = len(vectors)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                total += 1.0
                continue
            r = pearson_ref(vectors[i], vectors[j])
            total += 0.0 if r is None else abs(r)
    return (total - n) / (n * n - n)


def acv_ref(block):
    """ACV of a list-of-rows block by explicit double loops over rows and columns."""
    rows = [list(map(float, r)) for r in block]
    cols = [list(c) for c in zip(*rows)]
    return max(_term(rows), _term(cols))


def page_weight_ref(block_column):
    """Mean of one column over the bicluster's users, summed left to right."""
    total = 0.0
    for v in block_column:
        total += v
    return total / len(block_column)


def smallest_k_below(t0, alpha, t_min):
    """Smallest k with t0 / (1 + alpha)**k < t_min, by closed form."""
    return math.floor(math.log(t0 / t_min) / math.log(1 + alpha)) + 1
