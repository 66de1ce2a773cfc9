"""Acceptance criteria, one test each; the summary prints PASS/FAIL per label."""

import json
import random
import shutil
import time
from collections import Counter
from fractions import Fraction

import pytest

from glossmap.cli import main
from glossmap.evaluator import evaluate, random_baseline
from glossmap.fixtures import data_dir, data_path
from glossmap.indexer import DefinitionIndex, build_stats
from glossmap.lexicon import (
    Assignment,
    ReferenceAnnotation,
    Usage,
    filter_against,
    ingest_definitional,
    ingest_synonyms,
)
from glossmap.mapper import MappingConfig, cross_usage, map_all
from glossmap.merger import coverage
from glossmap.similarity import (
    Measure,
    build_global_space,
    build_verb_space,
    over1,
    over2,
    wv1,
    wv2,
)

import oracles
from conftest import make_defs, make_syns

N = Usage.NONREFLEXIVE
ALPHABET = 'abcde'


def _random_segments(rnd: random.Random) -> list[list[str]]:
    words = [rnd.choice(ALPHABET) for _ in range(rnd.randint(0, 8))]
    if rnd.random() < 0.5 or len(words) < 2:
        return [words] if words else []
    cut = rnd.randint(1, len(words) - 1)
    return [words[:cut], words[cut:]]


def _index(segments) -> DefinitionIndex:
    return DefinitionIndex(tuple(tuple(s) for s in segments))


def test_c01_measure_oracle_equivalence(criterion):
    criterion('C01 over1/over2 equal brute-force oracles on 10000 random pairs')
    rnd = random.Random(101)
    mismatches = 0
    start = time.perf_counter()
    for _ in range(10_000):
        sa, sb = _random_segments(rnd), _random_segments(rnd)
        a, b = _index(sa), _index(sb)
        flat_a = [w for s in sa for w in s]
        flat_b = [w for s in sb for w in s]
        if over1(a, b) != oracles.multiset_overlap(flat_a, flat_b):
            mismatches += 1
        if over2(a, b) != oracles.greedy_score(sa, sb):
            mismatches += 1
    elapsed = time.perf_counter() - start
    assert mismatches == 0
    assert elapsed < 10, f'{elapsed:.1f}s'


def test_c02_phrasal_dominates_bag(criterion):
    criterion('C02 over2 >= over1, equal iff no phrase of length >= 2')
    rnd = random.Random(202)
    violations = 0
    for _ in range(10_000):
        sa, sb = _random_segments(rnd), _random_segments(rnd)
        a, b = _index(sa), _index(sb)
        o1, o2 = over1(a, b), over2(a, b)
        long_phrase = any(len(p) >= 2 for p in oracles.greedy_phrases(sa, sb))
        if o2 < o1 or (o2 == o1) == long_phrase:
            violations += 1
    assert violations == 0


def test_c03_vector_degeneracy(criterion):
    criterion('C03 wv2 on one-token definitions equals sum count_a*count_b*df^2')
    rnd = random.Random(303)
    words = [f'w{k}' for k in range(6)]
    for case in range(1000):
        senses = [[rnd.choice(words)] for _ in range(rnd.randint(1, 10))]
        defs = make_defs({(f'v{case}', 'nonrefl'): senses})
        stats = build_stats(defs)
        space = build_global_space(defs, stats)
        a = [rnd.choice(words) for _ in range(rnd.randint(0, 6))]
        b = [rnd.choice(words) for _ in range(rnd.randint(0, 6))]
        ca, cb = Counter(a), Counter(b)
        expected = sum(ca[w] * cb[w] * stats.doc_freq.get(w, 0) ** 2 for w in ca)
        got = wv2(space, DefinitionIndex.of(*a), DefinitionIndex.of(*b))
        assert isinstance(got, int)
        assert got == expected


def _three_verbs():
    # "chose" occurs in every definition: zero tf.idf, never a dimension
    return make_defs({
        ('tirer', 'nonrefl'): [['corde', 'main', 'corde', 'chose'], ['arme', 'main', 'chose']],
        ('lancer', 'nonrefl'): [['balle', 'main', 'chose'], ['arme', 'projectile', 'chose']],
        ('jeter', 'nonrefl'): [['balle', 'loin', 'chose'], ['corde', 'arme', 'loin', 'chose']],
    })


F = Fraction
WV1_EXPECTED = {
    'tirer': {
        'defs': [{'corde': F(2, 2), 'main': F(1, 2)}, {'arme': F(1, 1), 'main': F(1, 2)}],
        'syns': {'lancer': {'main': F(1, 2), 'arme': F(1, 1)},
                 'jeter': {'corde': F(1, 2), 'arme': F(1, 1)}},
        'scores': {'lancer': [F(1, 4), F(5, 4)], 'jeter': [F(1, 2), F(1, 1)]},
    },
    'lancer': {
        'defs': [{'balle': F(1), 'main': F(1)}, {'arme': F(1), 'projectile': F(1)}],
        'syns': {'jeter': {'balle': F(1), 'arme': F(1)},
                 'tirer': {'main': F(2), 'arme': F(1)}},
        'scores': {'jeter': [F(1), F(1)], 'tirer': [F(2), F(1)]},
    },
    'jeter': {
        'defs': [{'balle': F(1), 'loin': F(1, 2)},
                 {'corde': F(1), 'arme': F(1), 'loin': F(1, 2)}],
        'syns': {'lancer': {'balle': F(1), 'arme': F(1)}},
        'scores': {'lancer': [F(1), F(1)]},
    },
}


def test_c04_wv1_weights(criterion):
    criterion('C04 WV1 weights equal hand-evaluated rationals on a 3-verb fixture')
    defs = _three_verbs()
    stats = build_stats(defs)
    assert stats.tfidf_score['chose'] == 0.0
    for verb, expected in WV1_EXPECTED.items():
        space = build_verb_space(defs.get(verb, N), expected['syns'], defs, stats)
        assert 'chose' not in space.dims
        assert [dict(v.weights) for v in space.def_vectors] == expected['defs']
        for syn, weights in expected['syns'].items():
            assert dict(space.syn_vectors[syn].weights) == weights
            scores = [wv1(space, i, syn) for i in range(len(space.def_vectors))]
            assert scores == expected['scores'][syn]


def _random_corpus(rnd: random.Random, disjoint: bool):
    heads = [f'h{k}' for k in range(rnd.randint(2, 5))]
    shared = [f'x{k}' for k in range(rnd.randint(3, 10))]
    senses, syns = {}, {}
    for h in heads:
        vocab = [f'{h}_{k}' for k in range(6)] if disjoint else shared
        senses[(h, 'nonrefl')] = [[rnd.choice(vocab) for _ in range(rnd.randint(1, 5))]
                                  for _ in range(rnd.randint(1, 4))]
    for h in heads:
        others = [o for o in heads if o != h]
        picked = set(rnd.sample(others, rnd.randint(1, len(others))))
        syns[(h, 'nonrefl')] = picked
    return make_defs(senses), make_syns(syns)


def _lemmas(definitions) -> list[str]:
    return [t.lemma for d in definitions for t in d.tokens]


def test_c05_mapping_gate(criterion):
    criterion('C05 no zero-score triple; disjoint corpora map nothing')
    rnd = random.Random(505)
    disjoint_seen = 0
    for case in range(1000):
        disjoint = case % 4 == 0
        disjoint_seen += disjoint
        defs, syns = _random_corpus(rnd, disjoint)
        for measure in Measure:
            triples = map_all(defs, syns, MappingConfig(measure=measure)).triples
            assert all(t.score > 0 for t in triples)
            if disjoint:
                assert triples == []
        # bag overlap: a synonym is mapped exactly when it shares a lemma
        # with at least one definition of the verb
        mapped = {(t.headword, t.synonym)
                  for t in map_all(defs, syns, MappingConfig(measure=Measure.OVER1)).triples}
        for rec in syns:
            for s in rec.synonyms:
                theirs = _lemmas(defs.get(s, N).definitions)
                shares = any(oracles.multiset_overlap(_lemmas([d]), theirs)
                             for d in defs.get(rec.headword, N).definitions)
                assert ((rec.headword, s) in mapped) == shares
    assert disjoint_seen == 250


def _baseline_corpus(n: int, verbs: int = 10, synonyms: int = 5):
    senses, spec, gold = {}, {}, []
    for v in range(verbs):
        head = f'v{v}'
        senses[(head, 'nonrefl')] = [[f'w{v}_{k}'] for k in range(n)]
        spec[(head, 'nonrefl')] = {f's{k}' for k in range(synonyms)}
        gold += [Assignment(head, N, f's{k}', str(1 + (k + v) % n)) for k in range(synonyms)]
    for k in range(synonyms):
        senses[(f's{k}', 'nonrefl')] = [['x']]
    return make_defs(senses), make_syns(spec), ReferenceAnnotation('gold', frozenset(gold))


def test_c06_baseline_convergence(criterion):
    criterion('C06 baseline recall within 0.02 of 1/n, seeded reruns identical')
    start = time.perf_counter()
    for n in (2, 3, 4, 5):
        defs, syns, gold = _baseline_corpus(n)
        first = random_baseline(defs, syns, gold, trials=10_000, seed=n)
        again = random_baseline(defs, syns, gold, trials=10_000, seed=n)
        assert abs(float(first.recall) - 1 / n) <= 0.02, (n, float(first.recall))
        assert json.dumps(first.to_json()).encode() == json.dumps(again.to_json()).encode()
    elapsed = time.perf_counter() - start
    assert elapsed < 30, f'{elapsed:.1f}s'


def test_c07_evaluation_algebra(criterion):
    criterion('C07 self-evaluation P=R=F=1; worked example P=1 R=1/2 F=2/3')
    t1 = Assignment('v', N, 's', '1')
    t2 = Assignment('v', N, 't', '2')
    gold = ReferenceAnnotation('gold', frozenset({t1, t2}))
    own = evaluate(gold.triples, gold)
    assert (own.precision, own.recall, own.f1) == (1, 1, 1)
    worked = evaluate({t1}, gold)
    assert worked.precision == 1
    assert worked.recall == Fraction(1, 2)
    assert worked.f1 == Fraction(2, 3)


def test_c08_reflexive_separation(criterion):
    criterion('C08 split mode has no cross-usage triple; unsplit mode differs')
    defs = ingest_definitional(data_path('abandonner_defs.json'))
    syns = filter_against(ingest_synonyms(data_path('abandonner_syns.json')), defs)
    split = map_all(defs, syns, MappingConfig(Measure.OVER3, split_reflexive=True)).triples
    joined = map_all(defs, syns, MappingConfig(Measure.OVER3, split_reflexive=False)).triples
    assert split
    assert cross_usage(split, syns) == []
    crossing = cross_usage(joined, syns)
    split_scores = {t.key: t.score for t in split}
    changed = [t for t in joined if t.key in split_scores and split_scores[t.key] != t.score]
    assert crossing and changed


COVERAGE_SOURCES = ['rey', 'benac', 'chazaud', 'larousse', 'bailly']


def test_c09_merge_coverage(criterion, tmp_path, monkeypatch, capsys):
    criterion('C09 coverage reports single-source mean 6 and merged mean 11')
    root = tmp_path / 'data'
    shutil.copytree(data_dir(), root)
    monkeypatch.chdir(root)
    paths = [f'sources/coverage-{n}.json' for n in COVERAGE_SOURCES]
    assert main(['coverage', '--defs', 'coverage_defs.json', '--syns', *paths]) == 0
    rows = {line.split('\t')[0]: line.split('\t')[1:]
            for line in capsys.readouterr().out.splitlines()[1:]}
    assert rows['Rey'][-1] == '6.00'
    assert rows['ALL'][-1] == '11.00'
    assert max(float(r[-1]) for name, r in rows.items() if name != 'ALL') == 6.0
    stats = coverage(ingest_definitional('coverage_defs.json'),
                     [ingest_synonyms(p) for p in paths])
    assert stats.rows[0].synonyms_per_verb == 6
    assert stats.merged.synonyms_per_verb == 11


def test_c10_end_to_end_determinism(criterion, tmp_path, monkeypatch, capsys):
    criterion('C10 map output byte-identical across runs and --jobs, all measures')
    root = tmp_path / 'data'
    shutil.copytree(data_dir(), root)
    monkeypatch.chdir(root)
    corpus = ['--defs', 'defs.json', '--syns', 'syns.json']
    start = time.perf_counter()
    for measure in Measure:
        outputs = []
        for run, jobs in enumerate((1, 1, 4)):
            out = f'{measure.value}-{run}.tsv'
            assert main(['map', *corpus, '--measure', measure.value,
                         '--jobs', str(jobs), '--out', out]) == 0
            outputs.append((root / out).read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
        assert outputs[0].count(b'\n') > 1
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert elapsed < 60, f'{elapsed:.1f}s'
