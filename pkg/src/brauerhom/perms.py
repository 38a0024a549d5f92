"""Permutations of {1..n} as 1-indexed image tuples."""

from __future__ import annotations


def identity(n):
    return tuple(range(1, n + 1))


def is_permutation(p):
    return sorted(p) == list(range(1, len(p) + 1))


def compose(p, q):
    """(p o q)(x) = p(q(x))."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def inverse(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v - 1] = i + 1
    return tuple(out)


def sign(p):
    seen = [False] * len(p)
    s = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j] - 1
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def transposition(n, i, j):
    p = list(range(1, n + 1))
    p[i - 1], p[j - 1] = j, i
    return tuple(p)


def adjacent_word(p):
    """Indices w with p = s_{w[0]} o ... o s_{w[-1]}, s_k = (k k+1), 1-indexed k."""
    p = list(p)
    n = len(p)
    word = []
    # bubble p down to the identity by right multiplications p <- p o s_k
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if p[k] > p[k + 1]:
                p[k], p[k + 1] = p[k + 1], p[k]
                word.append(k + 1)
                changed = True
    word.reverse()
    return tuple(word)


def restriction_std(p, subset):
    """Standardisation of p restricted to subset: the induced permutation of {1..k}.

    subset is an increasing tuple of points; p must map it to some set,
    and the result sends the rank of x in subset to the rank of p(x) in
    the image set.
    """
    image = sorted(p[x - 1] for x in subset)
    pos = {v: i + 1 for i, v in enumerate(image)}
    return tuple(pos[p[x - 1]] for x in subset)


def block_perm(left, right):
    """Permutation of {1..m+n} acting as left on the first m and right (shifted) on the rest."""
    m = len(left)
    return tuple(list(left) + [m + v for v in right])


def moving_perm(n, sources, targets):
    """Permutation of {1..n} sending sources[k] -> targets[k], order-preserving elsewhere.

    sources and targets are tuples of distinct points; the complement of
    sources maps to the complement of targets order-preservingly.
    """
    rest_src = [x for x in range(1, n + 1) if x not in set(sources)]
    rest_tgt = [x for x in range(1, n + 1) if x not in set(targets)]
    img = [0] * n
    for s, t in zip(sources, targets):
        img[s - 1] = t
    for s, t in zip(rest_src, rest_tgt):
        img[s - 1] = t
    return tuple(img)


def sort_perm(values):
    """Permutation p of {1..k} with p(i) = rank of values[i-1] among values."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    img = [0] * len(values)
    for rank_, idx in enumerate(order):
        img[idx] = rank_ + 1
    return tuple(img)
