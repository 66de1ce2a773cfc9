"""Assign each synonym of a verb to the definition(s) it matches best."""

from __future__ import annotations

import csv
import enum
import io
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .indexer import (
    CorpusStats,
    DefinitionIndex,
    NoGlossesError,
    build_index,
    build_stats,
    merged_synonym_index,
)
from .lexicon import (
    AnyPath,
    Assignment,
    Definition,
    DefinitionalDictionary,
    ParseError,
    SynonymDictionary,
    Usage,
    VerbEntry,
    normalize,
)
from .similarity import (
    DEFAULT_TFIDF_CUTOFF,
    GlobalVectorSpace,
    Measure,
    build_global_space,
    build_verb_space,
    overlap_score,
    wv1,
    wv2,
)

TRIPLE_COLUMNS = ('headword', 'usage', 'synonym', 'definition_id', 'score', 'measure')


class TiePolicy(str, enum.Enum):
    ALL_TIED = 'all'
    FIRST_BY_ID = 'first'


class UnmappedPolicy(str, enum.Enum):
    DROP = 'drop'
    REPORT = 'report'


@dataclass(frozen=True)
class MappingConfig:
    measure: Measure = Measure.OVER1
    split_reflexive: bool = False
    tie_policy: TiePolicy = TiePolicy.ALL_TIED
    tfidf_cutoff: Optional[float] = None
    unmapped_policy: UnmappedPolicy = UnmappedPolicy.DROP

    @property
    def cutoff(self) -> Optional[float]:
        """The tf.idf threshold actually applied (WV3 only)."""
        if self.measure is not Measure.WV3:
            return None
        return DEFAULT_TFIDF_CUTOFF if self.tfidf_cutoff is None else self.tfidf_cutoff

    def to_json(self) -> dict:
        return {
            'measure': self.measure.value,
            'split_reflexive': self.split_reflexive,
            'tie_policy': self.tie_policy.value,
            'tfidf_cutoff': self.cutoff,
            'unmapped_policy': self.unmapped_policy.value,
        }


@dataclass(frozen=True)
class MappingTriple:
    headword: str
    usage: Usage
    synonym: str
    definition_id: str
    score: Fraction
    measure: Measure

    def __post_init__(self):
        if self.score <= 0:
            raise ValueError('a mapping triple needs a positive score')

    @property
    def key(self) -> Assignment:
        return Assignment(self.headword, self.usage, self.synonym, self.definition_id)

    def sort_key(self):
        return (self.headword, self.usage.value, self.synonym, self.definition_id)


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # 'no-glosses' | 'no-entry' | 'unmapped'
    headword: str
    usage: Optional[Usage]
    synonym: Optional[str]
    message: str

    def to_json(self) -> dict:
        return {'kind': self.kind, 'headword': self.headword,
                'usage': self.usage.value if self.usage else None,
                'synonym': self.synonym, 'message': self.message}


@dataclass
class MappingResult:
    triples: list[MappingTriple] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def extend(self, other: 'MappingResult') -> None:
        self.triples.extend(other.triples)
        self.diagnostics.extend(other.diagnostics)

    def sort(self) -> 'MappingResult':
        self.triples.sort(key=MappingTriple.sort_key)
        self.diagnostics.sort(key=lambda d: (d.headword, d.usage.value if d.usage else '',
                                             d.synonym or '', d.kind))
        return self


# -- usage handling --------------------------------------------------------

def split_usages(defs: DefinitionalDictionary,
                 syns: SynonymDictionary) -> tuple[DefinitionalDictionary, SynonymDictionary]:
    """Regroup definitions so every (headword, usage) entry holds exactly the
    definitions of that usage. Synonym records are already keyed by usage."""
    grouped: dict[tuple[str, Usage], list[Definition]] = defaultdict(list)
    for entry in defs:
        for d in entry.definitions:
            grouped[(entry.headword, entry.usage_of(d))].append(replace(d, usage=None))
    entries = {k: VerbEntry(k[0], k[1], tuple(v)) for k, v in grouped.items()}
    return DefinitionalDictionary(defs.name, entries, defs.warnings), syns


def join_usages(defs: DefinitionalDictionary) -> dict[str, VerbEntry]:
    """One entry per headword holding the definitions of every usage, each
    definition tagged with its own usage."""
    grouped: dict[str, list[Definition]] = defaultdict(list)
    for entry in defs:
        for d in entry.definitions:
            grouped[entry.headword].append(replace(d, usage=entry.usage_of(d)))
    return {h: VerbEntry(h, Usage.NONREFLEXIVE, tuple(ds)) for h, ds in grouped.items()}


@dataclass(frozen=True)
class MappingUnit:
    """A verb entry with the synonyms to place on its definitions.

    ``gloss_usage`` restricts which definitions of a synonym are merged
    into its index; ``None`` merges them all.
    """

    entry: VerbEntry
    synonyms: tuple[str, ...]
    gloss_usage: Optional[Usage]


def mapping_units(defs: DefinitionalDictionary, syns: SynonymDictionary,
                  split_reflexive: bool) -> tuple[list[MappingUnit], list[Diagnostic]]:
    units, diagnostics = [], []
    if split_reflexive:
        split_defs, _ = split_usages(defs, syns)
        for rec in syns:
            entry = split_defs.get(rec.headword, rec.usage)
            if entry is None:
                diagnostics.append(Diagnostic(
                    'no-entry', rec.headword, rec.usage, None,
                    f'no {rec.usage} definitions for {rec.headword!r}'))
                continue
            units.append(MappingUnit(entry, tuple(sorted(rec.synonyms)), rec.usage))
    else:
        joined = join_usages(defs)
        for headword in sorted({rec.headword for rec in syns}):
            entry = joined.get(headword)
            if entry is None:
                diagnostics.append(Diagnostic(
                    'no-entry', headword, None, None, f'no definitions for {headword!r}'))
                continue
            units.append(MappingUnit(entry, tuple(sorted(syns.synonyms_of(headword))), None))
    return units, diagnostics


# -- scoring ---------------------------------------------------------------

class UnitScorer:
    """Scores every definition of one unit against its synonyms."""

    def __init__(self, unit: MappingUnit, defs: DefinitionalDictionary,
                 config: MappingConfig, stats: Optional[CorpusStats] = None,
                 global_space: Optional[GlobalVectorSpace] = None):
        self.unit = unit
        self.defs = defs
        self.config = config
        self.def_indexes = [build_index(d) for d in unit.entry.definitions]
        self.syn_indexes: dict[str, DefinitionIndex] = {}
        self.missing: set[str] = set()
        for syn in unit.synonyms:
            try:
                self.syn_indexes[syn] = merged_synonym_index(syn, defs, unit.gloss_usage)
            except NoGlossesError:
                self.missing.add(syn)
        measure = config.measure
        if measure in (Measure.WV1, Measure.WV2, Measure.WV3) and stats is None:
            stats = build_stats(defs)
        self.space = None
        if measure is Measure.WV1:
            self.space = build_verb_space(unit.entry, unit.synonyms, defs, stats,
                                          unit.gloss_usage, self.syn_indexes)
        elif measure in (Measure.WV2, Measure.WV3):
            if global_space is None:
                global_space = build_global_space(defs, stats, config.cutoff)
            self.space = global_space

    def scores(self, syn: str) -> Optional[list[Fraction]]:
        """One score per definition, or ``None`` if *syn* has no glosses."""
        if syn in self.missing:
            return None
        measure = self.config.measure
        if measure is Measure.WV1:
            return [Fraction(wv1(self.space, i, syn)) for i in range(len(self.def_indexes))]
        index = self.syn_indexes[syn]
        if measure in (Measure.WV2, Measure.WV3):
            return [Fraction(wv2(self.space, d, index)) for d in self.def_indexes]
        return [Fraction(overlap_score(measure, d, index)) for d in self.def_indexes]

    def map(self, syn: str) -> MappingResult:
        entry, config = self.unit.entry, self.config
        scores = self.scores(syn)
        if scores is None:
            return MappingResult(diagnostics=[Diagnostic(
                'no-glosses', entry.headword, self.unit.gloss_usage, syn,
                f'synonym {syn!r} has no definitions'
                + (f' with usage {self.unit.gloss_usage}' if self.unit.gloss_usage else ''))])
        best = max(scores, default=0)
        if best <= 0:
            diags = []
            if config.unmapped_policy is UnmappedPolicy.REPORT:
                diags.append(Diagnostic('unmapped', entry.headword, self.unit.gloss_usage, syn,
                                        f'synonym {syn!r} scores 0 on every definition'))
            return MappingResult(diagnostics=diags)
        winners = [d for d, s in zip(entry.definitions, scores) if s == best]
        if config.tie_policy is TiePolicy.FIRST_BY_ID:
            winners = [min(winners, key=lambda d: (d.path, entry.usage_of(d).value))]
        return MappingResult(triples=[
            MappingTriple(entry.headword, entry.usage_of(d), syn, d.id, best, config.measure)
            for d in winners
        ])

    def map_all(self) -> MappingResult:
        result = MappingResult()
        for syn in self.unit.synonyms:
            result.extend(self.map(syn))
        return result


def map_synonym(verb: VerbEntry, syn: str, defs: DefinitionalDictionary,
                config: MappingConfig, stats: Optional[CorpusStats] = None) -> MappingResult:
    """Map one synonym of *verb* onto the definition(s) with the highest
    non-zero score. With ``split_reflexive`` only the synonym's definitions
    of the verb's own usage are compared."""
    syn = normalize(syn)
    unit = MappingUnit(verb, (syn,), verb.usage if config.split_reflexive else None)
    return UnitScorer(unit, defs, config, stats).map(syn)


def map_all(defs: DefinitionalDictionary, syns: SynonymDictionary,
            config: MappingConfig, jobs: int = 1,
            stats: Optional[CorpusStats] = None) -> MappingResult:
    units, diagnostics = mapping_units(defs, syns, config.split_reflexive)
    result = MappingResult(diagnostics=list(diagnostics))
    if not units:
        return result.sort()
    global_space = None
    if config.measure in (Measure.WV1, Measure.WV2, Measure.WV3) and stats is None:
        stats = build_stats(defs)
    if config.measure in (Measure.WV2, Measure.WV3):
        global_space = build_global_space(defs, stats, config.cutoff)

    def run(unit: MappingUnit) -> MappingResult:
        return UnitScorer(unit, defs, config, stats, global_space).map_all()

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, units))
    else:
        parts = [run(u) for u in units]
    for part in parts:
        result.extend(part)
    return result.sort()


# -- triple files ------------------------------------------------------------

def format_score(score: Fraction) -> str:
    """Exact decimal rendering with 6 fractional digits (half-even)."""
    scaled = round(Fraction(score) * 10 ** 6)
    sign = '-' if scaled < 0 else ''
    whole, frac = divmod(abs(scaled), 10 ** 6)
    return f'{sign}{whole}.{frac:06d}'


def format_triples(triples: Iterable[MappingTriple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter='\t', lineterminator='\n')
    writer.writerow(TRIPLE_COLUMNS)
    for t in sorted(triples, key=MappingTriple.sort_key):
        writer.writerow([t.headword, t.usage.value, t.synonym, t.definition_id,
                         format_score(t.score), t.measure.value])
    return buf.getvalue()


def read_triples(path: AnyPath) -> list[MappingTriple]:
    path = Path(path)
    lines = path.read_text(encoding='utf-8').splitlines()
    if not lines or lines[0].split('\t') != list(TRIPLE_COLUMNS):
        raise ParseError(f'expected header {"/".join(TRIPLE_COLUMNS)}', path, 1)
    out = []
    for n, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split('\t')
        if len(cols) != len(TRIPLE_COLUMNS):
            raise ParseError(f'expected {len(TRIPLE_COLUMNS)} columns, got {len(cols)}', path, n)
        try:
            out.append(MappingTriple(cols[0], Usage.parse(cols[1]), cols[2], cols[3],
                                     Fraction(cols[4]), Measure(cols[5])))
        except ValueError as exc:
            raise ParseError(str(exc), path, n) from exc
    return out


def cross_usage(triples: Sequence[MappingTriple], syns: SynonymDictionary) -> list[MappingTriple]:
    """Triples placing a synonym on a definition of a usage whose own record
    does not list that synonym."""
    return [t for t in triples if t.synonym not in syns.synonyms_of(t.headword, t.usage)]
