import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glossmap.fixtures import data_path
from glossmap.indexer import (
    DefinitionIndex,
    NoGlossesError,
    build_index,
    build_stats,
    merged_synonym_index,
)
from glossmap.lexicon import Definition, Token, Usage, ingest_definitional

from conftest import make_defs


def _projeter():
    defs = ingest_definitional(data_path('projeter_defs.json'))
    return defs.get('projeter', Usage.NONREFLEXIVE).definitions


def test_open_class_lemmas_in_gloss_order():
    assert build_index(_projeter()[0]).lemmas == ('jeter', 'loin', 'avant', 'force')


def test_domains_join_the_index():
    ix = build_index(_projeter()[1])
    # same lemmas as the printed index; domains form their own trailing segment
    assert sorted(ix.lemmas) == sorted(['cinéma', 'audiovisuel', 'passer', 'projecteur'])
    assert ix.segments == (('passer', 'projecteur'), ('cinéma', 'audiovisuel'))


def test_synonym_only_definition():
    d = Definition('1', 'Eclaircir.', (), ('éclaircir',), ())
    assert build_index(d).lemmas == ('éclaircir',)


def test_closed_class_tokens_are_skipped():
    toks = (Token('le', 'le', 'DET'), Token('chat', 'chat', 'NOUN'), Token('de', 'de', 'PREP'),
            Token('vite', 'vite', 'ADV'), Token('il', 'il', 'PRON'), Token('et', 'et', 'CONJ'),
            Token('!', '!', 'OTHER'), Token('court', 'courir', 'VERB'), Token('gris', 'gris', 'ADJ'))
    assert build_index(Definition('1', '', toks)).lemmas == ('chat', 'vite', 'courir', 'gris')


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(['a', 'b', 'c']),
                          st.sampled_from(['NOUN', 'VERB', 'ADJ', 'ADV', 'DET', 'PREP'])),
                max_size=8),
       st.lists(st.sampled_from(['s', 't']), max_size=3),
       st.lists(st.sampled_from(['dom']), max_size=2))
def test_index_length(tokens, synonyms, domains):
    d = Definition('1', '', tuple(Token(w, w, p) for w, p in tokens), tuple(synonyms), tuple(domains))
    open_class = sum(p in ('NOUN', 'VERB', 'ADJ', 'ADV') for _, p in tokens)
    assert len(build_index(d)) == open_class + len(synonyms) + len(domains)


def test_merged_index_concatenates():
    defs = make_defs({('s', 'nonrefl'): [['a', 'b'], ['b', 'c']]})
    assert merged_synonym_index('s', defs).lemmas == ('a', 'b', 'b', 'c')


def test_merged_index_single_definition():
    defs = make_defs({('s', 'nonrefl'): [['a', 'b']]})
    only = defs.get('s', Usage.NONREFLEXIVE).definitions[0]
    assert merged_synonym_index('s', defs) == build_index(only)


def test_merged_index_length_is_sum_of_parts():
    defs = ingest_definitional(data_path('defs.json'))
    entry = next(e for e in defs if len(e.definitions) >= 3 and e.usage is Usage.NONREFLEXIVE)
    parts = [build_index(d) for d in entry.definitions if entry.usage_of(d) is Usage.NONREFLEXIVE]
    merged = merged_synonym_index(entry.headword, defs, Usage.NONREFLEXIVE)
    assert len(merged) == sum(len(p) for p in parts)


def test_merged_index_respects_usage():
    defs = make_defs({('s', 'nonrefl'): [['a']], ('s', 'refl'): [['b']]})
    assert merged_synonym_index('se s', defs, Usage.REFLEXIVE).lemmas == ('b',)
    assert merged_synonym_index('s', defs).lemmas == ('a', 'b')


def test_missing_synonym_signals():
    defs = make_defs({('s', 'nonrefl'): [['a']]})
    with pytest.raises(NoGlossesError):
        merged_synonym_index('t', defs)
    with pytest.raises(NoGlossesError):
        merged_synonym_index('s', defs, Usage.REFLEXIVE)


def test_stats_hand_count():
    stats = build_stats(make_defs({('v', 'nonrefl'): [['a', 'b'], ['a']]}))
    assert stats.doc_count == 2
    assert stats.doc_freq == {'a': 2, 'b': 1}
    assert stats.tfidf_score['a'] == 0.0
    assert stats.tfidf_score['b'] == pytest.approx(1 * math.log(2))


def test_single_definition_corpus_has_zero_tfidf():
    stats = build_stats(make_defs({('v', 'nonrefl'): [['a', 'b', 'b']]}))
    assert set(stats.tfidf_score.values()) == {0.0}


def test_empty_dictionary_has_no_stats():
    with pytest.raises(ValueError):
        build_stats(make_defs({}))


_corpus = st.lists(st.lists(st.sampled_from('abcdef'), min_size=1, max_size=5),
                   min_size=1, max_size=8)


@settings(max_examples=150, deadline=None)
@given(_corpus)
def test_stats_invariants(senses):
    defs = make_defs({('v', 'nonrefl'): senses})
    stats = build_stats(defs)
    n = stats.doc_count
    assert n == len(senses)
    assert sum(stats.total_tf.values()) == sum(len(s) for s in senses)
    for w in stats.vocabulary:
        assert 1 <= stats.doc_freq[w] <= n
        assert stats.tfidf_score[w] >= 0
        assert (stats.tfidf_score[w] == 0) == (stats.doc_freq[w] == n)


@settings(max_examples=50, deadline=None)
@given(_corpus, st.randoms(use_true_random=False))
def test_stats_ignore_entry_order(senses, rnd):
    spec = {(f'v{i}', 'nonrefl'): [s] for i, s in enumerate(senses)}
    items = list(spec.items())
    rnd.shuffle(items)
    a, b = build_stats(make_defs(spec)), build_stats(make_defs(dict(items)))
    assert a == b


def test_seams_separate_segments():
    ix = DefinitionIndex((('a', 'b'), ('c',)))
    assert ix.with_seams() == ['a', 'b', None, 'c']
    assert ix.counts() == Counter({'a': 1, 'b': 1, 'c': 1})
