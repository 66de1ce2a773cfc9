"""
Data model and interchange formats for definitional dictionaries,
synonym dictionaries and reference annotations.

All three formats are read by ``ingest_*`` functions and written back by
the matching ``dump_*``/``write_*`` helpers, so a dictionary that was
ingested, serialized and re-ingested compares equal to the original.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import unicodedata
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Union

log = logging.getLogger(__name__)

AnyPath = Union[str, Path]

POS_TAGS = frozenset(
    {'NOUN', 'VERB', 'ADJ', 'ADV', 'PREP', 'DET', 'PRON', 'CONJ', 'OTHER'}
)
OPEN_CLASS = frozenset({'NOUN', 'VERB', 'ADJ', 'ADV'})

_REFLEXIVE_PREFIXES = ("se ", "s'", "s’")

REFERENCE_COLUMNS = ('headword', 'usage', 'synonym', 'definition_id')


class LexiconError(Exception):
    """Base class for ingestion and validation failures."""


class ParseError(LexiconError):
    """Raised when an input file is not well formed."""

    def __init__(self, message: str, path: Optional[AnyPath] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.path = str(path) if path is not None else None
        self.line = line
        self.column = column
        where = self.path or '<input>'
        if line is not None:
            where += f':{line}'
            if column is not None:
                where += f':{column}'
        super().__init__(f'{where}: {message}')


class ValidationError(LexiconError):
    """Raised when well-formed input violates a data-model invariant."""

    def __init__(self, message: str, offenders: Iterable[str] = ()):
        self.offenders = list(offenders)
        text = message
        if self.offenders:
            text += ': ' + ', '.join(self.offenders)
        super().__init__(text)


def normalize(text: str) -> str:
    """Canonical form used for every lemma comparison (NFC, lowercased)."""
    return unicodedata.normalize('NFC', text).strip().lower()


def strip_reflexive(form: str) -> tuple[str, bool]:
    """Split a reflexive pronoun off *form*.

    >>> strip_reflexive("s'abandonner")
    ('abandonner', True)
    >>> strip_reflexive('abandonner')
    ('abandonner', False)
    """
    form = normalize(form)
    for prefix in _REFLEXIVE_PREFIXES:
        if form.startswith(prefix) and len(form) > len(prefix):
            return form[len(prefix):].strip(), True
    return form, False


def base_lemma(synonym: str) -> str:
    """The headword under which a synonym's own definitions are filed."""
    return strip_reflexive(synonym)[0]


class Usage(str, enum.Enum):
    NONREFLEXIVE = 'nonrefl'
    REFLEXIVE = 'refl'

    @classmethod
    def parse(cls, value) -> 'Usage':
        if isinstance(value, Usage):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f'unknown usage {value!r}; expected "nonrefl" or "refl"'
            ) from None

    def __str__(self) -> str:
        return self.value


def parse_definition_id(value: str) -> tuple[int, ...]:
    """Parse a dot-path identifier such as ``"2.1.3"``."""
    parts = str(value).split('.')
    try:
        path = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f'invalid definition id {value!r}') from None
    if not path or any(p < 1 for p in path) or any(p != p.strip() for p in parts):
        raise ValueError(f'invalid definition id {value!r}')
    return path


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str

    def __post_init__(self):
        if not self.lemma:
            raise ValueError(f'token {self.surface!r} has an empty lemma')
        if self.pos not in POS_TAGS:
            raise ValueError(f'token {self.surface!r} has unknown POS {self.pos!r}')

    @property
    def open_class(self) -> bool:
        return self.pos in OPEN_CLASS


@dataclass(frozen=True)
class Definition:
    """One sense of a headword.

    ``usage`` overrides the owning entry's usage for single definitions
    (a reflexive sub-sense filed under a non-reflexive entry); ``None``
    means the definition inherits the entry's usage.
    """

    id: str
    gloss: str = ''
    tokens: tuple[Token, ...] = ()
    synonyms: tuple[str, ...] = ()
    domains: tuple[str, ...] = ()
    usage: Optional[Usage] = None

    def __post_init__(self):
        parse_definition_id(self.id)

    @property
    def path(self) -> tuple[int, ...]:
        return parse_definition_id(self.id)

    @property
    def contentful(self) -> bool:
        return bool(self.tokens or self.synonyms or self.domains)


@dataclass(frozen=True)
class VerbEntry:
    headword: str
    usage: Usage
    definitions: tuple[Definition, ...]

    def __post_init__(self):
        seen = Counter((self.usage_of(d), d.id) for d in self.definitions)
        dupes = sorted(f'{i} ({u})' for (u, i), n in seen.items() if n > 1)
        if dupes:
            raise ValidationError(
                f'duplicate definition ids in entry {self.headword!r}', dupes
            )

    @property
    def key(self) -> tuple[str, Usage]:
        return (self.headword, self.usage)

    def usage_of(self, definition: Definition) -> Usage:
        return definition.usage or self.usage

    def find(self, definition_id: str, usage: Optional[Usage] = None) -> Optional[Definition]:
        usage = usage or self.usage
        for d in self.definitions:
            if d.id == definition_id and self.usage_of(d) == usage:
                return d
        return None


EntryKey = tuple[str, Usage]


def _sorted_keys(keys: Iterable[EntryKey]) -> list[EntryKey]:
    return sorted(keys, key=lambda k: (k[0], k[1].value))


@dataclass(frozen=True)
class DefinitionalDictionary:
    name: str
    entries: Mapping[EntryKey, VerbEntry]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[VerbEntry]:
        for key in _sorted_keys(self.entries):
            yield self.entries[key]

    def __contains__(self, key) -> bool:
        return key in self.entries

    def get(self, headword: str, usage: Usage) -> Optional[VerbEntry]:
        return self.entries.get((headword, usage))

    def by_headword(self, headword: str) -> list[VerbEntry]:
        return [e for e in self if e.headword == headword]

    @property
    def headwords(self) -> frozenset[str]:
        return frozenset(h for h, _ in self.entries)

    def definitions(self) -> Iterator[tuple[VerbEntry, Definition]]:
        for entry in self:
            for d in entry.definitions:
                yield entry, d

    @property
    def definition_count(self) -> int:
        return sum(len(e.definitions) for e in self.entries.values())

    def find_definition(self, headword: str, usage: Usage,
                        definition_id: str) -> Optional[Definition]:
        """Look a definition up by its effective usage across all entries of
        *headword* (a reflexive sub-sense may live in a non-reflexive entry)."""
        for entry in self.by_headword(headword):
            found = entry.find(definition_id, usage)
            if found is not None:
                return found
        return None


@dataclass(frozen=True)
class SynonymRecord:
    headword: str
    usage: Usage
    synonyms: frozenset[str]
    senses: Optional[tuple[frozenset[str], ...]] = None

    def __post_init__(self):
        if not self.synonyms:
            raise ValidationError(f'record {self.headword!r} has no synonyms')
        if self.headword in self.synonyms or any(
                base_lemma(s) == self.headword and strip_reflexive(s)[1] == (
                    self.usage is Usage.REFLEXIVE) for s in self.synonyms):
            raise ValidationError(
                'headword listed among its own synonyms', [self.headword]
            )
        if self.senses is not None and frozenset().union(*self.senses) != self.synonyms:
            raise ValidationError(
                f'record {self.headword!r}: synonyms differ from the union of its senses'
            )

    @property
    def key(self) -> EntryKey:
        return (self.headword, self.usage)


@dataclass(frozen=True)
class SynonymDictionary:
    name: str
    records: Mapping[EntryKey, SynonymRecord]
    # (headword, usage, synonym) -> names of the source dictionaries
    provenance: Mapping[tuple[str, Usage, str], frozenset[str]] = field(
        default_factory=dict, compare=False)
    discarded: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[SynonymRecord]:
        for key in _sorted_keys(self.records):
            yield self.records[key]

    def get(self, headword: str, usage: Usage) -> Optional[SynonymRecord]:
        return self.records.get((headword, usage))

    def synonyms_of(self, headword: str, usage: Optional[Usage] = None) -> frozenset[str]:
        """Synonyms of one usage, or of every usage of *headword* when
        *usage* is ``None``."""
        if usage is not None:
            rec = self.records.get((headword, usage))
            return rec.synonyms if rec else frozenset()
        out: set[str] = set()
        for (h, _), rec in self.records.items():
            if h == headword:
                out |= rec.synonyms
        return frozenset(out)

    def sources_of(self, headword: str, usage: Usage, synonym: str) -> frozenset[str]:
        return self.provenance.get((headword, usage, synonym), frozenset({self.name}))


class Assignment(NamedTuple):
    """A (headword, usage, synonym, definition id) tuple."""
    headword: str
    usage: Usage
    synonym: str
    definition_id: str

    def sort_key(self):
        return (self.headword, self.usage.value, self.synonym, self.definition_id)


@dataclass(frozen=True)
class ReferenceAnnotation:
    annotator: str
    triples: frozenset[Assignment]

    def __len__(self) -> int:
        return len(self.triples)


# -- reading -------------------------------------------------------------

def _load_json(path: AnyPath):
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except UnicodeDecodeError as exc:
        raise ParseError(f'not valid UTF-8 ({exc.reason})', path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from exc


def _require(obj, key: str, kind, where: str, path):
    if not isinstance(obj, dict):
        raise ParseError(f'{where}: expected an object', path)
    if key not in obj:
        raise ParseError(f'{where}: missing {key!r}', path)
    value = obj[key]
    if not isinstance(value, kind):
        raise ParseError(f'{where}.{key}: expected {getattr(kind, "__name__", kind)}', path)
    return value


def _headword_and_usage(raw_headword: str, raw_usage) -> tuple[str, Usage]:
    headword, marked = strip_reflexive(raw_headword)
    if raw_usage is None:
        return headword, Usage.REFLEXIVE if marked else Usage.NONREFLEXIVE
    return headword, Usage.parse(raw_usage)


def _parse_definition(raw, where: str, path) -> Definition:
    ident = _require(raw, 'id', str, where, path)
    tokens = []
    for k, tok in enumerate(raw.get('tokens', []) or []):
        twhere = f'{where}.tokens[{k}]'
        try:
            tokens.append(Token(
                surface=_require(tok, 'surface', str, twhere, path),
                lemma=normalize(_require(tok, 'lemma', str, twhere, path)),
                pos=_require(tok, 'pos', str, twhere, path).upper(),
            ))
        except ValueError as exc:
            raise ValidationError(f'{twhere}: {exc}') from exc
    usage = raw.get('usage')
    try:
        return Definition(
            id=ident,
            gloss=raw.get('gloss', '') or '',
            tokens=tuple(tokens),
            synonyms=tuple(normalize(s) for s in raw.get('synonyms', []) or [] if normalize(s)),
            domains=tuple(normalize(s) for s in raw.get('domains', []) or [] if normalize(s)),
            usage=Usage.parse(usage) if usage is not None else None,
        )
    except ValueError as exc:
        raise ValidationError(f'{where}: {exc}') from exc


def ingest_definitional(path: AnyPath) -> DefinitionalDictionary:
    """Read a definitional dictionary; empty definitions and entries are
    dropped, each drop leaving a line in ``warnings``."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError('top level must be an object', path)
    raw_entries = _require(data, 'entries', list, '$', path)
    entries: dict[EntryKey, VerbEntry] = {}
    warnings: list[str] = []
    for n, raw in enumerate(raw_entries):
        where = f'entries[{n}]'
        raw_head = _require(raw, 'headword', str, where, path)
        try:
            headword, usage = _headword_and_usage(raw_head, raw.get('usage'))
        except ValueError as exc:
            raise ValidationError(f'{where}: {exc}') from exc
        defs = []
        for k, rd in enumerate(_require(raw, 'definitions', list, where, path)):
            d = _parse_definition(rd, f'{where}.definitions[{k}]', path)
            if d.contentful:
                defs.append(d)
            else:
                warnings.append(f'{headword} ({usage}): definition {d.id} has no content; dropped')
        if (headword, usage) in entries:
            raise ValidationError('duplicate entry', [f'{headword} ({usage})'])
        if not defs:
            warnings.append(f'{headword} ({usage}): no contentful definitions; entry dropped')
            # keep the key reserved so a later duplicate is still caught
            entries[(headword, usage)] = None  # type: ignore[assignment]
            continue
        entries[(headword, usage)] = VerbEntry(headword, usage, tuple(defs))
    for w in warnings:
        log.warning('%s: %s', path, w)
    return DefinitionalDictionary(
        name=str(data.get('name', Path(path).stem)),
        entries={k: v for k, v in entries.items() if v is not None},
        warnings=tuple(warnings),
    )


def _make_record(headword: str, usage: Usage, senses: list[list[str]],
                 where: str) -> Optional[SynonymRecord]:
    groups = tuple(frozenset(normalize(s) for s in group if normalize(s)) for group in senses)
    groups = tuple(g for g in groups if g)
    if not groups:
        return None
    flat = frozenset().union(*groups)
    try:
        return SynonymRecord(headword, usage, flat, groups)
    except ValidationError as exc:
        raise ValidationError(f'{where}: {exc}', exc.offenders) from exc


def ingest_synonyms(path: AnyPath) -> SynonymDictionary:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError('top level must be an object', path)
    name = str(data.get('name', Path(path).stem))
    records: dict[EntryKey, SynonymRecord] = {}
    for n, raw in enumerate(_require(data, 'records', list, '$', path)):
        where = f'records[{n}]'
        try:
            headword, usage = _headword_and_usage(
                _require(raw, 'headword', str, where, path), raw.get('usage'))
        except ValueError as exc:
            raise ValidationError(f'{where}: {exc}') from exc
        senses = _require(raw, 'senses', list, where, path)
        if not all(isinstance(g, list) and all(isinstance(s, str) for s in g) for g in senses):
            raise ParseError(f'{where}.senses: expected a list of string lists', path)
        if (headword, usage) in records:
            raise ValidationError('duplicate record', [f'{headword} ({usage})'])
        rec = _make_record(headword, usage, senses, where)
        if rec is not None:
            records[rec.key] = rec
    return SynonymDictionary(
        name=name, records=records,
        provenance={(h, u, s): frozenset({name})
                    for (h, u), r in records.items() for s in r.synonyms},
    )


def filter_against(syns: SynonymDictionary, defs: DefinitionalDictionary) -> SynonymDictionary:
    """Drop headwords and synonyms that have no entry in *defs*.

    Counts of what was dropped end up in the result's ``discarded``.
    """
    known = defs.headwords
    records = {}
    dropped = Counter(records=0, synonyms=0)
    for rec in syns:
        if rec.headword not in known:
            dropped['records'] += 1
            dropped['synonyms'] += len(rec.synonyms)
            continue
        keep = frozenset(s for s in rec.synonyms if base_lemma(s) in known)
        dropped['synonyms'] += len(rec.synonyms) - len(keep)
        if not keep:
            dropped['records'] += 1
            continue
        senses = None
        if rec.senses is not None:
            senses = tuple(g & keep for g in rec.senses if g & keep)
        records[rec.key] = SynonymRecord(rec.headword, rec.usage, keep, senses)
    provenance = {k: v for k, v in syns.provenance.items()
                  if (k[0], k[1]) in records and k[2] in records[(k[0], k[1])].synonyms}
    return SynonymDictionary(syns.name, records, provenance, dict(dropped))


def read_reference_rows(path: AnyPath) -> list[Assignment]:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except UnicodeDecodeError as exc:
        raise ParseError(f'not valid UTF-8 ({exc.reason})', path) from exc
    reader = csv.reader(io.StringIO(text), delimiter='\t')
    rows = []
    header = None
    for line_no, row in enumerate(reader, start=1):
        if not row or not ''.join(row).strip():
            continue
        if header is None:
            header = [c.strip() for c in row]
            if header != list(REFERENCE_COLUMNS):
                raise ParseError(
                    f'expected header {"/".join(REFERENCE_COLUMNS)}, got {"/".join(header)}',
                    path, line_no)
            continue
        if len(row) != len(REFERENCE_COLUMNS):
            raise ParseError(f'expected {len(REFERENCE_COLUMNS)} columns, got {len(row)}',
                             path, line_no)
        headword, usage, synonym, def_id = (c.strip() for c in row)
        try:
            rows.append(Assignment(normalize(headword), Usage.parse(usage),
                                   normalize(synonym), def_id))
        except ValueError as exc:
            raise ParseError(str(exc), path, line_no) from exc
    if header is None:
        raise ParseError('missing header', path, 1)
    return rows


def validate_triples(triples: Iterable[Assignment], defs: DefinitionalDictionary,
                     syns: SynonymDictionary) -> None:
    """Raise :class:`ValidationError` listing every dangling triple.

    A synonym is accepted when any usage record of the headword lists it,
    since an annotator (or an unsplit mapping) may attach a synonym of one
    usage to a definition of the other.
    """
    offenders = []
    for t in sorted(triples, key=Assignment.sort_key):
        if defs.find_definition(t.headword, t.usage, t.definition_id) is None:
            offenders.append(f'{t.headword} ({t.usage}) definition {t.definition_id}')
        if t.synonym not in syns.synonyms_of(t.headword):
            offenders.append(f'{t.headword} synonym {t.synonym!r}')
    if offenders:
        raise ValidationError('dangling references', offenders)


def ingest_reference(path: AnyPath, defs: DefinitionalDictionary,
                     syns: SynonymDictionary, annotator: Optional[str] = None) -> ReferenceAnnotation:
    rows = read_reference_rows(path)
    validate_triples(rows, defs, syns)
    return ReferenceAnnotation(annotator or Path(path).stem, frozenset(rows))


# -- writing -------------------------------------------------------------

def dump_definition(d: Definition) -> dict:
    out = {
        'id': d.id,
        'gloss': d.gloss,
        'tokens': [{'surface': t.surface, 'lemma': t.lemma, 'pos': t.pos} for t in d.tokens],
        'synonyms': list(d.synonyms),
        'domains': list(d.domains),
    }
    if d.usage is not None:
        out['usage'] = d.usage.value
    return out


def dump_definitional(defs: DefinitionalDictionary) -> dict:
    return {
        'name': defs.name,
        'entries': [
            {'headword': e.headword, 'usage': e.usage.value,
             'definitions': [dump_definition(d) for d in e.definitions]}
            for e in defs
        ],
    }


def dump_synonyms(syns: SynonymDictionary) -> dict:
    records = []
    for rec in syns:
        groups = rec.senses if rec.senses is not None else (rec.synonyms,)
        records.append({'headword': rec.headword, 'usage': rec.usage.value,
                        'senses': [sorted(g) for g in groups]})
    return {'name': syns.name, 'records': records}


def to_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2) + '\n'


def format_reference(triples: Iterable[Assignment]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter='\t', lineterminator='\n')
    writer.writerow(REFERENCE_COLUMNS)
    for t in sorted(triples, key=Assignment.sort_key):
        writer.writerow([t.headword, t.usage.value, t.synonym, t.definition_id])
    return buf.getvalue()
