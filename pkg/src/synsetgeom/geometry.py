"""Core synset geometry: two-block partitions of the synset minus a focus
word, per-partition outcomes, and their aggregation into rank, centrality,
and interior membership.

Conventions
-----------
A partition of the m remaining words (the synset minus the focus word) is a
bitmask over those words in synset order: bit j set places remaining word j
in block 1, bit j clear places it in block 2.  Canonical masks always have
bit 0 set (the lowest-indexed remaining word sits in block 1), so each
unordered split is enumerated exactly once; there are 2**(m-1) - 1 of them.

Per-partition rank contributions are half-integers in {-1, -1/2, 0, 1/2, 1}
(a zero sign appears when a similarity delta falls inside the eps band) and
are stored exactly as doubled integers in {-2..2}; word rank accordingly as
``rank_doubled``.  This keeps the interior/rank equivalence an exact integer
comparison instead of a float one.

Everything here is a pure function of its inputs; distinct synsets can be
analyzed concurrently against a shared model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .embeddings import DEGENERATE_NORM, WordVector, set_similarity
from .errors import DegenerateGeometryError, SynsetSizeError

DEFAULT_EPS = 1e-9
DEFAULT_MAX_SYNSET_SIZE = 16


@dataclass(frozen=True)
class ResolvedSynset:
    """A synset whose words all map to model vectors.

    ``words`` pairs each surface token with the vector it resolved to; the
    vector's own token is the model key that matched (it may differ from the
    surface token, e.g. a POS-tagged lemma).  ``source_size`` is the word
    count before any out-of-vocabulary filtering.
    """

    id: str
    words: tuple[tuple[str, WordVector], ...]
    source_size: int

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        if not self.words:
            raise ValueError(f"synset {self.id!r} has no words")
        seen = set()
        dims = set()
        for token, wv in self.words:
            if token in seen:
                raise ValueError(f"synset {self.id!r}: duplicate word {token!r}")
            seen.add(token)
            dims.add(wv.dimension)
        if len(dims) != 1:
            raise ValueError(f"synset {self.id!r}: mixed vector dimensions {dims}")

    @classmethod
    def from_arrays(cls, synset_id, tokens, rows, source_size=None):
        """Build a synset from raw rows, normalizing each to unit length."""
        rows = np.asarray(rows, dtype=np.float64)
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        if np.any(norms <= DEGENERATE_NORM):
            raise ValueError(f"synset {synset_id!r}: zero-norm row")
        unit = (rows / norms).astype(np.float32)
        words = tuple(
            (tok, WordVector(tok, row)) for tok, row in zip(tokens, unit, strict=True)
        )
        if source_size is None:
            source_size = len(words)
        return cls(synset_id, words, source_size)

    @property
    def n(self) -> int:
        return len(self.words)

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(token for token, _ in self.words)

    def matrix(self) -> np.ndarray:
        """The word vectors stacked as a float64 (n, dim) matrix."""
        return np.stack([wv.components for _, wv in self.words]).astype(np.float64)


@dataclass(frozen=True)
class Partition:
    """One canonical two-block split of the words around ``focus_index``.

    The mask ranges over the remaining words in synset order.  Bit 0 must be
    set (canonical form); ops additionally reject the all-ones mask, which
    would leave block 2 empty.
    """

    focus_index: int
    mask: int

    def __post_init__(self):
        if self.focus_index < 0:
            raise ValueError(f"negative focus index {self.focus_index}")
        if self.mask < 1 or not (self.mask & 1):
            raise ValueError(
                f"mask {self.mask:#b} is not canonical (lowest remaining word "
                "must be in block 1)"
            )

    def split_indices(self, remaining_count: int):
        """Index pairs (block1, block2) into the remaining-word list."""
        if self.mask >= (1 << remaining_count) - 1:
            raise ValueError(
                f"mask {self.mask:#b} leaves block 2 empty for "
                f"{remaining_count} remaining words"
            )
        s1 = tuple(j for j in range(remaining_count) if self.mask >> j & 1)
        s2 = tuple(j for j in range(remaining_count) if not self.mask >> j & 1)
        return s1, s2


@dataclass(frozen=True)
class PartitionOutcome:
    """Similarities and contributions of the focus word for one partition.

    ``sim`` is the block-1/block-2 similarity without the focus word; sim1
    and sim2 are the similarities with the focus word joined to block 1
    resp. block 2.  ``r_doubled`` is twice the per-partition rank
    contribution, exact in {-2..2}.
    """

    partition: Partition
    sim: float
    sim1: float
    sim2: float
    r_doubled: int
    centrality_delta: float


@dataclass(frozen=True)
class WordAttributes:
    token: str
    rank_doubled: int
    centrality: float
    in_interior: bool
    partition_count: int

    @property
    def rank(self) -> float:
        return self.rank_doubled / 2


@dataclass(frozen=True)
class SynsetReport:
    """Per-word attributes for a whole synset, in the report sort order:
    rank descending, then centrality descending, then token ascending."""

    synset_id: str
    n: int
    words: tuple[WordAttributes, ...]
    interior: frozenset[str]


def enumerate_partitions(m: int):
    """Yield the canonical masks of all two-block partitions of m words.

    Exactly 2**(m-1) - 1 masks (the Stirling number of the second kind for
    two blocks): bit 0 always set, the all-ones mask excluded.
    """
    if m < 2:
        raise SynsetSizeError(f"need at least 2 words to partition, got {m}")
    for k in range((1 << (m - 1)) - 1):
        yield (k << 1) | 1


def sgn_eps(x: float, eps: float) -> int:
    """Sign of x, flattened to 0 inside the closed band |x| <= eps."""
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    if abs(x) <= eps:
        return 0
    return 1 if x > 0 else -1


class _PartitionTable(NamedTuple):
    """Vectorized per-partition results for one focus word, in canonical
    enumeration order."""

    masks: np.ndarray
    sim: np.ndarray
    sim1: np.ndarray
    sim2: np.ndarray
    r_doubled: np.ndarray
    centrality_delta: np.ndarray


def _check_size(synset: ResolvedSynset, max_size: int) -> None:
    if synset.n < 3:
        raise SynsetSizeError(
            f"synset {synset.id!r} has {synset.n} words; rank and interior "
            "need at least 3"
        )
    if synset.n > max_size:
        raise SynsetSizeError(
            f"synset {synset.id!r} has {synset.n} words, above the size cap "
            f"{max_size} (2**(n-2)-1 partitions per word; raise the cap "
            "explicitly if you mean it)"
        )


def _check_focus(synset: ResolvedSynset, focus: int) -> None:
    if not 0 <= focus < synset.n:
        raise IndexError(
            f"focus index {focus} out of range for synset {synset.id!r} "
            f"of size {synset.n}"
        )


def _sgn_band(deltas: np.ndarray, eps: float) -> np.ndarray:
    return np.where(np.abs(deltas) <= eps, 0, np.sign(deltas)).astype(np.int64)


def _partition_table(synset: ResolvedSynset, focus: int, eps: float) -> _PartitionTable:
    """All canonical-partition outcomes for one focus word.

    Block sums are built once via an incremental subset-sum table over the
    non-anchor remaining words, so the whole table costs O(2**n * dim)
    instead of O(n * 2**n * dim).
    """
    vecs = synset.matrix()
    n, dim = vecs.shape
    v = vecs[focus]
    rest = np.delete(vecs, focus, axis=0)
    m = n - 1
    count = (1 << (m - 1)) - 1

    # sums[k] = sum of rest[j+1] over the set bits j of k
    sums = np.zeros((1 << (m - 1), dim))
    for j in range(m - 1):
        lo = 1 << j
        sums[lo : 2 * lo] = sums[:lo] + rest[j + 1]

    # canonical block 1 always contains rest[0]; k == count would empty block 2
    s1 = rest[0] + sums[:count]
    del sums
    s2 = rest.sum(axis=0) - s1
    s1v = s1 + v
    s2v = s2 + v
    masks = (np.arange(count, dtype=np.int64) << 1) | 1

    def _normalize(block, label):
        # in place: all four sum arrays are fully formed above this point
        nrm = np.linalg.norm(block, axis=1)
        bad = np.nonzero(nrm <= DEGENERATE_NORM)[0]
        if bad.size:
            raise DegenerateGeometryError(
                f"synset {synset.id!r}, focus {synset.tokens[focus]!r}, "
                f"partition mask {int(masks[bad[0]]):#b}: block {label} sums "
                "to zero, normalized mean undefined"
            )
        block /= nrm[:, None]
        return block

    m1 = _normalize(s1, "S1")
    m2 = _normalize(s2, "S2")
    m1v = _normalize(s1v, "S1+v")
    m2v = _normalize(s2v, "S2+v")

    def _chordal_sim(a, b):
        # cosine of the means via their distance: saturates at exactly 1.0
        # when the directions coincide (see embeddings.set_similarity)
        d = a - b
        return np.clip(1.0 - 0.5 * np.einsum("ij,ij->i", d, d), -1.0, 1.0)

    sim = _chordal_sim(m1, m2)
    sim1 = _chordal_sim(m1v, m2)
    sim2 = _chordal_sim(m1, m2v)
    d1 = sim1 - sim
    d2 = sim2 - sim
    r_doubled = _sgn_band(d1, eps) + _sgn_band(d2, eps)
    return _PartitionTable(masks, sim, sim1, sim2, r_doubled, d1 + d2)


def _table_membership(table: _PartitionTable, eps: float) -> bool:
    d1 = table.sim1 - table.sim
    d2 = table.sim2 - table.sim
    return bool(np.all((d1 > eps) & (d2 > eps)))


def partition_outcome(
    synset: ResolvedSynset,
    focus: int,
    partition: Partition,
    eps: float = DEFAULT_EPS,
) -> PartitionOutcome:
    """Outcome of a single partition, computed directly from block means."""
    _check_focus(synset, focus)
    if synset.n < 3:
        raise SynsetSizeError(
            f"synset {synset.id!r} has {synset.n} words; need at least 3"
        )
    if partition.focus_index != focus:
        raise ValueError(
            f"partition is for focus {partition.focus_index}, not {focus}"
        )
    remaining = [wv for i, (_, wv) in enumerate(synset.words) if i != focus]
    i1, i2 = partition.split_indices(len(remaining))
    v = synset.words[focus][1]
    block1 = [remaining[j] for j in i1]
    block2 = [remaining[j] for j in i2]
    try:
        sim = set_similarity(block1, block2)
        sim1 = set_similarity(block1 + [v], block2)
        sim2 = set_similarity(block1, block2 + [v])
    except DegenerateGeometryError as exc:
        raise DegenerateGeometryError(
            f"synset {synset.id!r}, focus {synset.tokens[focus]!r}, "
            f"partition mask {partition.mask:#b}: {exc}"
        ) from exc
    r_doubled = sgn_eps(sim1 - sim, eps) + sgn_eps(sim2 - sim, eps)
    return PartitionOutcome(
        partition, sim, sim1, sim2, r_doubled, (sim1 - sim) + (sim2 - sim)
    )


def partition_outcomes(
    synset: ResolvedSynset,
    focus: int,
    eps: float = DEFAULT_EPS,
    max_size: int = DEFAULT_MAX_SYNSET_SIZE,
) -> tuple[PartitionOutcome, ...]:
    """Outcomes for every canonical partition, in enumeration order."""
    _check_size(synset, max_size)
    _check_focus(synset, focus)
    t = _partition_table(synset, focus, eps)
    return tuple(
        PartitionOutcome(
            Partition(focus, int(mask)),
            float(t.sim[i]),
            float(t.sim1[i]),
            float(t.sim2[i]),
            int(t.r_doubled[i]),
            float(t.centrality_delta[i]),
        )
        for i, mask in enumerate(t.masks)
    )


def rank_and_centrality(
    synset: ResolvedSynset,
    focus: int,
    eps: float = DEFAULT_EPS,
    max_size: int = DEFAULT_MAX_SYNSET_SIZE,
) -> WordAttributes:
    """Sum per-partition contributions into the focus word's attributes."""
    _check_size(synset, max_size)
    _check_focus(synset, focus)
    t = _partition_table(synset, focus, eps)
    return WordAttributes(
        token=synset.tokens[focus],
        rank_doubled=int(t.r_doubled.sum()),
        centrality=float(t.centrality_delta.sum()),
        in_interior=_table_membership(t, eps),
        partition_count=int(t.masks.size),
    )


def interior_membership(
    synset: ResolvedSynset,
    focus: int,
    eps: float = DEFAULT_EPS,
    max_size: int = DEFAULT_MAX_SYNSET_SIZE,
) -> bool:
    """Whether adding the focus word to either block strictly increases the
    block similarity, for every canonical partition."""
    _check_size(synset, max_size)
    _check_focus(synset, focus)
    return _table_membership(_partition_table(synset, focus, eps), eps)


def analyze_synset(
    synset: ResolvedSynset,
    eps: float = DEFAULT_EPS,
    max_size: int = DEFAULT_MAX_SYNSET_SIZE,
) -> SynsetReport:
    """Attributes for every word, sorted into the report order."""
    _check_size(synset, max_size)
    attrs = [
        rank_and_centrality(synset, focus, eps=eps, max_size=max_size)
        for focus in range(synset.n)
    ]
    attrs.sort(key=lambda w: (-w.rank_doubled, -w.centrality, w.token))
    interior = frozenset(w.token for w in attrs if w.in_interior)
    return SynsetReport(synset.id, synset.n, tuple(attrs), interior)
