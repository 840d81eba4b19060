"""Naive from-scratch recomputation of synset attributes.

This is the independent test oracle: plain Python lists and math, full
subset enumeration, every block mean recomputed from its members.  It must
not import anything from the package under test.
"""

import math

DEFAULT_EPS = 1e-9


def dot(a, b):
    assert len(a) == len(b)
    return sum(x * y for x, y in zip(a, b))


def norm(v):
    return math.sqrt(sum(x * x for x in v))


def mean_direction(rows):
    """Unit vector along the component-wise sum; rows must not cancel."""
    total = [sum(col) for col in zip(*rows)]
    n = norm(total)
    if n <= 1e-12:
        raise ZeroDivisionError("degenerate: block sum has zero norm")
    return [x / n for x in total]


def sim_sets(a_rows, b_rows):
    s = dot(mean_direction(a_rows), mean_direction(b_rows))
    return max(-1.0, min(1.0, s))


def sgn(x, eps):
    if abs(x) <= eps:
        return 0
    return 1 if x > 0 else -1


def two_block_partitions(items):
    """All unordered two-block splits, by checking every subset.

    Keeps exactly the proper nonempty subsets that contain items[0], so each
    unordered split appears once.  Returns (mask, block1, block2) triples
    with masks in increasing order.
    """
    m = len(items)
    out = []
    for mask in range(1, (1 << m) - 1):
        if not mask & 1:
            continue
        block1 = [items[j] for j in range(m) if mask >> j & 1]
        block2 = [items[j] for j in range(m) if not mask >> j & 1]
        out.append((mask, block1, block2))
    return out


def partition_outcome(vectors, focus, mask, eps=DEFAULT_EPS):
    """sim, sim1, sim2, doubled rank contribution and centrality delta for
    one split (mask over the remaining words, bit 0 = lowest index)."""
    rest = [row for i, row in enumerate(vectors) if i != focus]
    v = vectors[focus]
    block1 = [rest[j] for j in range(len(rest)) if mask >> j & 1]
    block2 = [rest[j] for j in range(len(rest)) if not mask >> j & 1]
    assert block1 and block2
    sim = sim_sets(block1, block2)
    sim1 = sim_sets(block1 + [v], block2)
    sim2 = sim_sets(block1, block2 + [v])
    r_doubled = sgn(sim1 - sim, eps) + sgn(sim2 - sim, eps)
    return sim, sim1, sim2, r_doubled, (sim1 - sim) + (sim2 - sim)


def word_attributes(vectors, focus, eps=DEFAULT_EPS):
    """(rank_doubled, centrality, in_interior, partition_count) for one word.

    Membership is checked against the definition (strict improvement on both
    sides of every split), not derived from the rank total.
    """
    rest = [row for i, row in enumerate(vectors) if i != focus]
    splits = two_block_partitions(rest)
    rank_doubled = 0
    centrality = 0.0
    member = True
    for mask, _, _ in splits:
        sim, sim1, sim2, r_doubled, delta = partition_outcome(vectors, focus, mask, eps)
        rank_doubled += r_doubled
        centrality += delta
        if not (sim1 - sim > eps and sim2 - sim > eps):
            member = False
    return rank_doubled, centrality, member, len(splits)


def analyze(tokens, vectors, eps=DEFAULT_EPS):
    """Rows of (token, rank_doubled, centrality, in_interior), in report
    order: rank desc, centrality desc, token asc."""
    rows = []
    for focus, token in enumerate(tokens):
        rank_doubled, centrality, member, _ = word_attributes(vectors, focus, eps)
        rows.append((token, rank_doubled, centrality, member))
    rows.sort(key=lambda r: (-r[1], -r[2], r[0]))
    return rows
