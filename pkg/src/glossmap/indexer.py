"""Definition indexes and corpus-wide statistics."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Optional

from .lexicon import (
    Definition,
    DefinitionalDictionary,
    Usage,
    base_lemma,
)


class NoGlossesError(LookupError):
    """A synonym has no definitional entry to build an index from."""

    def __init__(self, synonym: str, usage: Optional[Usage] = None):
        self.synonym = synonym
        self.usage = usage
        suffix = f' with usage {usage}' if usage is not None else ''
        super().__init__(f'synonym {synonym!r} has no definitions{suffix}')


@dataclass(frozen=True)
class DefinitionIndex:
    """Ordered lemma list of one or more definitions.

    Lemmas are grouped in segments (gloss lemmas, embedded synonyms, domain
    labels, and one such triple per definition in a merged index). Phrasal
    matching never crosses a segment boundary.
    """

    segments: tuple[tuple[str, ...], ...] = ()

    @classmethod
    def of(cls, *lemmas: str) -> 'DefinitionIndex':
        return cls((tuple(lemmas),) if lemmas else ())

    @property
    def lemmas(self) -> tuple[str, ...]:
        return tuple(w for seg in self.segments for w in seg)

    def __len__(self) -> int:
        return sum(len(seg) for seg in self.segments)

    def __iter__(self) -> Iterator[str]:
        return iter(self.lemmas)

    def counts(self) -> Counter:
        return Counter(self.lemmas)

    def with_seams(self) -> list[Optional[str]]:
        """Flattened lemmas with ``None`` between segments."""
        out: list[Optional[str]] = []
        for seg in self.segments:
            if out:
                out.append(None)
            out.extend(seg)
        return out

    def __add__(self, other: 'DefinitionIndex') -> 'DefinitionIndex':
        return DefinitionIndex(self.segments + other.segments)


def concat(indexes: Iterable[DefinitionIndex]) -> DefinitionIndex:
    return DefinitionIndex(tuple(seg for ix in indexes for seg in ix.segments))


def build_index(d: Definition) -> DefinitionIndex:
    gloss = tuple(t.lemma for t in d.tokens if t.open_class)
    return DefinitionIndex(tuple(seg for seg in (gloss, d.synonyms, d.domains) if seg))


def synonym_definitions(syn: str, defs: DefinitionalDictionary,
                        usage: Optional[Usage] = None) -> list[Definition]:
    """Definitions filed under *syn*; restricted to one usage when given."""
    out = []
    for entry in defs.by_headword(base_lemma(syn)):
        for d in entry.definitions:
            if usage is None or entry.usage_of(d) == usage:
                out.append(d)
    return out


def merged_synonym_index(syn: str, defs: DefinitionalDictionary,
                         usage: Optional[Usage] = None) -> DefinitionIndex:
    found = synonym_definitions(syn, defs, usage)
    if not found:
        raise NoGlossesError(syn, usage)
    return concat(build_index(d) for d in found)


@dataclass(frozen=True)
class CorpusStats:
    """Document statistics where each definition is one document.

    ``tfidf_score(w) = total_tf(w) * ln(doc_count / doc_freq(w))``.
    """

    doc_count: int
    doc_freq: dict[str, int]
    total_tf: dict[str, int]
    tfidf_score: dict[str, float]

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.doc_freq)

    def to_json(self) -> dict:
        return {
            'doc_count': self.doc_count,
            'vocabulary': [
                {'lemma': w, 'doc_freq': self.doc_freq[w], 'total_tf': self.total_tf[w],
                 'tfidf': self.tfidf_score[w]}
                for w in sorted(self.doc_freq)
            ],
        }


def build_stats(defs: DefinitionalDictionary) -> CorpusStats:
    n = 0
    df: Counter = Counter()
    tf: Counter = Counter()
    for _, d in defs.definitions():
        lemmas = build_index(d).lemmas
        n += 1
        tf.update(lemmas)
        df.update(set(lemmas))
    if n == 0:
        raise ValueError('cannot compute statistics over an empty dictionary')
    tfidf = {
        w: 0.0 if df[w] == n else tf[w] * math.log(n / df[w])
        for w in df
    }
    return CorpusStats(n, dict(df), dict(tf), tfidf)
