"""Gloss similarity measures: word overlaps and word vectors."""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

from .indexer import (
    CorpusStats,
    DefinitionIndex,
    NoGlossesError,
    build_index,
    merged_synonym_index,
)
from .lexicon import DefinitionalDictionary, Usage, VerbEntry

Weight = Union[int, Fraction]

DEFAULT_TFIDF_CUTOFF = 1.0


class Measure(str, enum.Enum):
    OVER1 = 'over1'  # simple word overlap
    OVER2 = 'over2'  # phrasal overlap, n words score n**2
    OVER3 = 'over3'  # phrasal overlap over the index lengths
    WV1 = 'wv1'      # first order vectors
    WV2 = 'wv2'      # second order vectors
    WV3 = 'wv3'      # second order vectors, tf.idf-trimmed dimensions

    @property
    def label(self) -> str:
        return {'over1': 'Over 1', 'over2': 'Over 2', 'over3': 'Over 3',
                'wv1': 'WV 1', 'wv2': 'WV 2', 'wv3': 'WV 3'}[self.value]

    def __str__(self) -> str:
        return self.value


# -- overlaps ------------------------------------------------------------

def over1(a: DefinitionIndex, b: DefinitionIndex) -> int:
    """Size of the multiset intersection of the two lemma lists."""
    ca, cb = a.counts(), b.counts()
    return sum(min(n, cb[w]) for w, n in ca.items() if w in cb)


def _longest_common_run(x: list, y: list) -> tuple[int, int, int]:
    """Longest run of equal, non-``None`` items shared by *x* and *y*.

    Returns ``(length, start_x, start_y)``; ties go to the smallest start in
    *x*, then in *y*. Length 0 means nothing is shared.
    """
    best = (0, 0, 0)
    prev = [0] * (len(y) + 1)
    for i, xi in enumerate(x):
        cur = [0] * (len(y) + 1)
        if xi is not None:
            for j, yj in enumerate(y):
                if yj == xi:
                    n = prev[j] + 1
                    cur[j + 1] = n
                    # runs ending at a smaller i start earlier for a fixed length
                    if n > best[0]:
                        best = (n, i - n + 1, j - n + 1)
        prev = cur
    return best


def phrase_overlaps(a: DefinitionIndex, b: DefinitionIndex) -> list[tuple[str, ...]]:
    """Common phrases extracted longest first.

    Each extracted phrase is blanked out of both lists, so later phrases
    cannot run across the gap it leaves.
    """
    x, y = a.with_seams(), b.with_seams()
    phrases = []
    while True:
        n, i, j = _longest_common_run(x, y)
        if n == 0:
            return phrases
        phrases.append(tuple(x[i:i + n]))
        x[i:i + n] = [None] * n
        y[j:j + n] = [None] * n


def over2(a: DefinitionIndex, b: DefinitionIndex) -> int:
    return sum(len(p) ** 2 for p in phrase_overlaps(a, b))


def over3(a: DefinitionIndex, b: DefinitionIndex) -> Fraction:
    total = len(a) + len(b)
    if total == 0:
        raise ValueError('cannot normalise the overlap of two empty indexes')
    return Fraction(over2(a, b), total)


# -- vectors ---------------------------------------------------------------

@dataclass(frozen=True)
class SparseVector:
    dims: frozenset[str]
    weights: Mapping[str, Weight]

    def __post_init__(self):
        for w, v in self.weights.items():
            if w not in self.dims:
                raise ValueError(f'{w!r} is not a dimension of this vector')
            if v < 0:
                raise ValueError(f'negative weight for {w!r}')

    def __getitem__(self, lemma: str) -> Weight:
        return self.weights.get(lemma, 0)

    def dot(self, other: 'SparseVector') -> Weight:
        small, big = sorted((self.weights, other.weights), key=len)
        return sum((v * big[w] for w, v in small.items() if w in big), 0)

    def scaled(self, c: Weight) -> 'SparseVector':
        return SparseVector(self.dims, {w: v * c for w, v in self.weights.items()})

    def is_zero(self) -> bool:
        return not any(self.weights.values())


@dataclass(frozen=True)
class VerbVectorSpace:
    headword: str
    usage: Optional[Usage]
    dims: frozenset[str]
    def_vectors: tuple[SparseVector, ...]
    syn_vectors: Mapping[str, SparseVector]

    def scaled(self, c: Weight) -> 'VerbVectorSpace':
        return VerbVectorSpace(
            self.headword, self.usage, self.dims,
            tuple(v.scaled(c) for v in self.def_vectors),
            {s: v.scaled(c) for s, v in self.syn_vectors.items()},
        )


def build_verb_space(verb: VerbEntry, syns: Iterable[str], defs: DefinitionalDictionary,
                     stats: CorpusStats, usage: Optional[Usage] = None,
                     syn_indexes: Optional[Mapping[str, DefinitionIndex]] = None) -> VerbVectorSpace:
    """First order vectors for the definitions and synonyms of one verb.

    Each weight is an occurrence count divided by the count of the same
    lemma over all of the verb's definitions. *usage* restricts which of a
    synonym's definitions are merged; synonyms without definitions get a
    zero vector.
    """
    def_counts = [build_index(d).counts() for d in verb.definitions]
    verb_totals: Counter = Counter()
    for c in def_counts:
        verb_totals.update(c)
    dims = frozenset(w for w in verb_totals if stats.tfidf_score.get(w, 0.0) != 0.0)

    def weigh(counts: Counter) -> SparseVector:
        return SparseVector(dims, {w: Fraction(n, verb_totals[w])
                                   for w, n in counts.items() if w in dims})

    syn_vectors = {}
    for syn in syns:
        if syn_indexes is not None and syn in syn_indexes:
            index = syn_indexes[syn]
        else:
            try:
                index = merged_synonym_index(syn, defs, usage)
            except NoGlossesError:
                index = DefinitionIndex()
        syn_vectors[syn] = weigh(index.counts())
    return VerbVectorSpace(verb.headword, usage, dims,
                           tuple(weigh(c) for c in def_counts), syn_vectors)


def wv1(space: VerbVectorSpace, i: int, syn: str) -> Weight:
    return space.def_vectors[i].dot(space.syn_vectors[syn])


@dataclass(frozen=True)
class GlobalVectorSpace:
    """Corpus-wide first order co-occurrence vectors.

    ``word_vectors[w][u]`` is the number of definitions whose index holds
    both *w* and *u*; columns outside ``dims`` are dropped.
    """

    dims: frozenset[str]
    word_vectors: Mapping[str, Mapping[str, int]]
    cutoff: Optional[float] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def second_order(self, index: DefinitionIndex) -> dict[str, int]:
        key = index.segments
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        total: Counter = Counter()
        for lemma in index.lemmas:
            total.update(self.word_vectors.get(lemma, {}))
        out = dict(total)
        self._cache[key] = out
        return out

    def scaled(self, c: int) -> 'GlobalVectorSpace':
        return GlobalVectorSpace(
            self.dims,
            {w: {u: n * c for u, n in row.items()} for w, row in self.word_vectors.items()},
            self.cutoff,
        )


def build_global_space(defs: DefinitionalDictionary, stats: CorpusStats,
                       cutoff: Optional[float] = None) -> GlobalVectorSpace:
    if cutoff is None:
        dims = stats.vocabulary
    else:
        dims = frozenset(w for w, s in stats.tfidf_score.items() if s >= cutoff)
    rows: dict[str, Counter] = defaultdict(Counter)
    for _, d in defs.definitions():
        present = set(build_index(d).lemmas)
        kept = [u for u in present if u in dims]
        for w in present:
            rows[w].update(kept)
    return GlobalVectorSpace(dims, {w: dict(row) for w, row in rows.items()}, cutoff)


def dot(u: Mapping[str, Weight], v: Mapping[str, Weight]) -> Weight:
    if len(u) > len(v):
        u, v = v, u
    return sum((x * v[w] for w, x in u.items() if w in v), 0)


def wv2(space: GlobalVectorSpace, a: DefinitionIndex, b: DefinitionIndex) -> int:
    """Dot product of the two indexes' second order vectors (each the sum of
    its lemmas' first order vectors, once per occurrence)."""
    return dot(space.second_order(a), space.second_order(b))


wv3 = wv2


def overlap_score(measure: Measure, a: DefinitionIndex, b: DefinitionIndex) -> Rational:
    if measure is Measure.OVER1:
        return over1(a, b)
    if measure is Measure.OVER2:
        return over2(a, b)
    if measure is Measure.OVER3:
        return over3(a, b)
    raise ValueError(f'{measure} is not an overlap measure')
