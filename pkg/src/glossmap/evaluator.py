"""Precision/recall evaluation, random baseline and annotator agreement."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .lexicon import (
    Assignment,
    DefinitionalDictionary,
    ReferenceAnnotation,
    SynonymDictionary,
    ValidationError,
    validate_triples,
)
from .mapper import MappingTriple, join_usages, mapping_units

Count = Union[int, Fraction]


def _ratio(num: Count, den: Count) -> Fraction:
    return Fraction(num) / Fraction(den) if den else Fraction(0)


@dataclass(frozen=True)
class EvalReport:
    true_positives: Count
    system_total: Count
    reference_total: Count
    precision: Fraction
    recall: Fraction
    f1: Fraction

    @classmethod
    def from_counts(cls, tp: Count, system_total: Count, reference_total: Count) -> 'EvalReport':
        p = _ratio(tp, system_total)
        r = _ratio(tp, reference_total)
        f = _ratio(2 * p * r, p + r)
        return cls(tp, system_total, reference_total, p, r, f)

    def to_json(self) -> dict:
        return {
            'true_positives': float(self.true_positives),
            'system_total': float(self.system_total),
            'reference_total': float(self.reference_total),
            'precision': float(self.precision),
            'recall': float(self.recall),
            'f1': float(self.f1),
        }

    def row(self, label: str) -> str:
        return f'{label:<10} R={float(self.recall):.2f} P={float(self.precision):.2f} F={float(self.f1):.2f}'


def _keys(triples: Iterable) -> frozenset[Assignment]:
    return frozenset(t.key if isinstance(t, MappingTriple) else Assignment(*t) for t in triples)


def evaluate(system: Iterable, reference: ReferenceAnnotation,
             defs: Optional[DefinitionalDictionary] = None,
             syns: Optional[SynonymDictionary] = None) -> EvalReport:
    """Score system triples against the reference.

    When the companion dictionaries are supplied both sides are checked
    against them first.
    """
    sys_keys = _keys(system)
    if defs is not None and syns is not None:
        validate_triples(sys_keys, defs, syns)
        validate_triples(reference.triples, defs, syns)
    tp = len(sys_keys & reference.triples)
    return EvalReport.from_counts(tp, len(sys_keys), len(reference.triples))


def _baseline_slots(defs: DefinitionalDictionary, syns: SynonymDictionary,
                    split_reflexive: bool):
    """(synonym slot, candidate definition keys) pairs the baseline draws over."""
    units, _ = mapping_units(defs, syns, split_reflexive)
    slots = []
    for unit in units:
        entry = unit.entry
        candidates = [Assignment(entry.headword, entry.usage_of(d), '', d.id)
                      for d in entry.definitions]
        for syn in unit.synonyms:
            slots.append([c._replace(synonym=syn) for c in candidates])
    return slots


def random_baseline(defs: DefinitionalDictionary, syns: SynonymDictionary,
                    reference: ReferenceAnnotation, trials: int = 1000, seed: int = 0,
                    split_reflexive: bool = False) -> EvalReport:
    """Mean scores of assigning each synonym to one uniformly drawn
    definition of its verb.

    Every trial draws from its own generator spawned off *seed*, so the
    result depends only on *seed* and *trials*. The means are exact: system
    and reference sizes are the same in every trial.
    """
    if trials < 1:
        raise ValueError('trials must be at least 1')
    slots = _baseline_slots(defs, syns, split_reflexive)
    n_slots, ref_total = len(slots), len(reference.triples)
    if n_slots == 0:
        return EvalReport.from_counts(0, 0, ref_total)
    width = max(len(s) for s in slots)
    sizes = np.array([len(s) for s in slots], dtype=np.int64)
    gold = np.zeros((n_slots, width), dtype=bool)
    for i, cands in enumerate(slots):
        for j, c in enumerate(cands):
            gold[i, j] = c in reference.triples
    rows = np.arange(n_slots)
    hits = 0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        draws = rng.integers(0, sizes)
        hits += int(gold[rows, draws].sum())
    tp = Fraction(hits, trials)
    p = _ratio(tp, n_slots)
    r = _ratio(tp, ref_total)
    # per-trial F is 2tp/(S+R) with S, R fixed, so its mean is exact too
    f = _ratio(2 * tp, n_slots + ref_total)
    return EvalReport(tp, n_slots, ref_total, p, r, f)


@dataclass(frozen=True)
class AgreementReport:
    universe_size: int
    pairwise: dict[tuple[str, str], Fraction]
    unanimous: Fraction

    def to_json(self) -> dict:
        return {
            'universe_size': self.universe_size,
            'pairwise': [{'a': a, 'b': b, 'agreement': float(v)}
                         for (a, b), v in sorted(self.pairwise.items())],
            'unanimous': float(self.unanimous),
        }


def candidate_universe(defs: DefinitionalDictionary,
                       syns: SynonymDictionary) -> frozenset[Assignment]:
    """Every (headword, usage, synonym, definition) an annotator could pick:
    each synonym of a headword crossed with each of its definitions."""
    out = set()
    for headword, entry in join_usages(defs).items():
        for syn in syns.synonyms_of(headword):
            for d in entry.definitions:
                out.add(Assignment(headword, entry.usage_of(d), syn, d.id))
    return frozenset(out)


def agreement(annotations: Sequence[ReferenceAnnotation], defs: DefinitionalDictionary,
              syns: SynonymDictionary) -> AgreementReport:
    if len(annotations) < 2:
        raise ValueError('agreement needs at least two annotations')
    universe = candidate_universe(defs, syns)
    for ann in annotations:
        outside = ann.triples - universe
        if outside:
            raise ValidationError(
                f'annotation {ann.annotator!r} lies outside the shared candidate universe',
                sorted(f'{t.headword}/{t.usage}/{t.synonym}/{t.definition_id}' for t in outside))
    size = len(universe)
    pairwise = {}
    for a, b in itertools.combinations(annotations, 2):
        disagree = len(a.triples ^ b.triples)
        pairwise[(a.annotator, b.annotator)] = _ratio(size - disagree, size)
    included_by_any = frozenset().union(*(a.triples for a in annotations))
    included_by_all = frozenset.intersection(*(a.triples for a in annotations))
    split = len(included_by_any - included_by_all)
    return AgreementReport(size, pairwise, _ratio(size - split, size))
