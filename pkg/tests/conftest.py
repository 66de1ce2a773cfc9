from __future__ import annotations

import pytest

from glossmap.lexicon import (
    Definition,
    DefinitionalDictionary,
    SynonymDictionary,
    SynonymRecord,
    Token,
    Usage,
    VerbEntry,
)


def make_definition(ident: str, lemmas, synonyms=(), domains=(), usage=None) -> Definition:
    """A definition whose gloss tokens are all nouns with the given lemmas."""
    toks = tuple(Token(w, w, 'NOUN') for w in lemmas)
    return Definition(ident, ' '.join(lemmas), toks, tuple(synonyms), tuple(domains), usage)


def make_defs(spec: dict, name: str = 'test') -> DefinitionalDictionary:
    """``{('v', 'nonrefl'): [['a', 'b'], ['c']]}`` -> dictionary with ids 1, 2, ..."""
    entries = {}
    for (headword, usage), senses in spec.items():
        usage = Usage.parse(usage)
        defs = []
        for k, sense in enumerate(senses, start=1):
            if isinstance(sense, Definition):
                defs.append(sense)
            else:
                defs.append(make_definition(str(k), sense))
        entries[(headword, usage)] = VerbEntry(headword, usage, tuple(defs))
    return DefinitionalDictionary(name, entries)


def make_syns(spec: dict, name: str = 'syn') -> SynonymDictionary:
    records = {}
    provenance = {}
    for (headword, usage), synonyms in spec.items():
        usage = Usage.parse(usage)
        records[(headword, usage)] = SynonymRecord(headword, usage, frozenset(synonyms))
        for s in synonyms:
            provenance[(headword, usage, s)] = frozenset({name})
    return SynonymDictionary(name, records, provenance)


# -- acceptance summary ------------------------------------------------------

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line('markers', 'criterion(label): acceptance criterion label')


def pytest_runtest_logreport(report):
    if report.when != 'call' and not (report.when == 'setup' and report.outcome != 'passed'):
        return
    if 'test_acceptance.py' not in report.nodeid:
        return
    label = dict(report.user_properties).get('criterion')
    if label:
        _CRITERIA[report.nodeid] = (label, 'PASS' if report.passed else 'FAIL')


@pytest.fixture
def criterion(request, record_property):
    def mark(label: str):
        record_property('criterion', label)
    return mark


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section('acceptance criteria')
    for _, (label, outcome) in sorted(_CRITERIA.items(), key=lambda kv: kv[1][0]):
        terminalreporter.write_line(f'{outcome}  {label}')
