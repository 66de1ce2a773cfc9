"""Merge several synonym dictionaries into one definition-grouped lexicon."""

from __future__ import annotations

import io
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .lexicon import (
    Definition,
    DefinitionalDictionary,
    SynonymDictionary,
    SynonymRecord,
    Usage,
    dump_definition,
    filter_against,
)
from .mapper import (
    Diagnostic,
    MappingConfig,
    MappingTriple,
    format_score,
    map_all,
    split_usages,
)


def union_synonyms(dicts: Sequence[SynonymDictionary], name: str = 'ALL') -> SynonymDictionary:
    """Per (headword, usage), the union of every source's synonyms.

    Source sense groupings survive only as provenance; the merged record
    is flat.
    """
    if not dicts:
        raise ValueError('union_synonyms needs at least one dictionary')
    flat: dict[tuple[str, Usage], set[str]] = defaultdict(set)
    provenance: dict[tuple[str, Usage, str], set[str]] = defaultdict(set)
    for source in dicts:
        for rec in source:
            flat[rec.key] |= rec.synonyms
            for syn in rec.synonyms:
                provenance[(rec.headword, rec.usage, syn)] |= source.sources_of(
                    rec.headword, rec.usage, syn)
    records = {k: SynonymRecord(k[0], k[1], frozenset(v)) for k, v in flat.items()}
    return SynonymDictionary(name, records,
                             {k: frozenset(v) for k, v in provenance.items()})


@dataclass(frozen=True)
class MappedSynonym:
    synonym: str
    score: Fraction
    sources: frozenset[str]


@dataclass
class MergedLexicon:
    # (headword, usage) -> [(definition, mapped synonyms)]
    entries: dict[tuple[str, Usage], list[tuple[Definition, list[MappedSynonym]]]]
    provenance: dict[tuple[str, Usage, str], frozenset[str]]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def synonym_count(self) -> int:
        return sum(len(s) for senses in self.entries.values() for _, s in senses)

    def to_json(self, name: str = 'merged') -> dict:
        entries = []
        for (headword, usage) in sorted(self.entries, key=lambda k: (k[0], k[1].value)):
            definitions = []
            for d, mapped in self.entries[(headword, usage)]:
                out = dump_definition(d)
                out['synonyms_mapped'] = [
                    {'synonym': m.synonym, 'score': format_score(m.score),
                     'sources': sorted(m.sources)}
                    for m in mapped
                ]
                definitions.append(out)
            entries.append({'headword': headword, 'usage': usage.value,
                            'definitions': definitions})
        return {'name': name, 'entries': entries}


def _sources(syns: SynonymDictionary, t: MappingTriple) -> frozenset[str]:
    out: set[str] = set()
    for (h, _u, s), names in syns.provenance.items():
        if h == t.headword and s == t.synonym:
            out |= names
    return frozenset(out)


def build_merged(defs: DefinitionalDictionary, dicts: Sequence[SynonymDictionary],
                 config: MappingConfig, jobs: int = 1, prune: bool = False) -> MergedLexicon:
    """Map the union of *dicts* onto *defs* and group the result by definition.

    Definitions no synonym was mapped to stay in the lexicon unless *prune*.
    """
    split_defs, _ = split_usages(defs, None)
    if dicts:
        merged = union_synonyms([filter_against(d, defs) for d in dicts])
        result = map_all(defs, merged, config, jobs=jobs)
    else:
        merged, result = None, None
    by_def: dict[tuple[str, Usage, str], list[MappedSynonym]] = defaultdict(list)
    if result is not None:
        for t in result.triples:
            by_def[(t.headword, t.usage, t.definition_id)].append(
                MappedSynonym(t.synonym, t.score, _sources(merged, t)))
    entries = {}
    for entry in split_defs:
        senses = []
        for d in entry.definitions:
            mapped = by_def.get((entry.headword, entry.usage, d.id), [])
            if mapped or not prune:
                senses.append((d, sorted(mapped, key=lambda m: m.synonym)))
        if senses:
            entries[entry.key] = senses
    return MergedLexicon(entries, dict(merged.provenance) if merged else {},
                         list(result.diagnostics) if result else [])


@dataclass(frozen=True)
class CoverageRow:
    name: str
    verbs: int
    nonreflexive: int
    reflexive: int
    synonyms_per_verb: Fraction


@dataclass(frozen=True)
class CoverageStats:
    rows: tuple[CoverageRow, ...]
    merged: CoverageRow

    def to_tsv(self) -> str:
        buf = io.StringIO()
        buf.write('dictionary\tVerbs\t-Refl\t+Refl\tSyn/verb\n')
        for row in (*self.rows, self.merged):
            buf.write(f'{row.name}\t{row.verbs}\t{row.nonreflexive}\t{row.reflexive}\t'
                      f'{float(row.synonyms_per_verb):.2f}\n')
        return buf.getvalue()


def _coverage_row(name: str, syns: Optional[SynonymDictionary]) -> CoverageRow:
    if syns is None or not len(syns):
        return CoverageRow(name, 0, 0, 0, Fraction(0))
    records = list(syns)
    refl = sum(r.usage is Usage.REFLEXIVE for r in records)
    total = sum(len(r.synonyms) for r in records)
    return CoverageRow(name, len(records), len(records) - refl, refl,
                       Fraction(total, len(records)))


def coverage(defs: DefinitionalDictionary, dicts: Sequence[SynonymDictionary],
             merged_name: str = 'ALL') -> CoverageStats:
    """Verb entries (headword + usage) shared by *defs* and each source,
    split by usage, and mean synonyms per entry after filtering."""
    filtered = [filter_against(d, defs) for d in dicts]
    rows = tuple(_coverage_row(d.name, d) for d in filtered)
    merged = union_synonyms(filtered, merged_name) if filtered else None
    return CoverageStats(rows, _coverage_row(merged_name, merged))
