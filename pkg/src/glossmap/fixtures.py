"""
Synthetic fixtures in the interchange formats.

``generate_corpus`` builds the bundled ~50-verb corpus from a seed: every
sense draws its gloss words from one "topic", synonyms are verbs sharing
a topic, and the reference assigns a synonym to the senses whose topic it
shares. ``write_bundle`` writes everything under ``glossmap/data``.
"""

from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from .lexicon import REFERENCE_COLUMNS, to_json

CORPUS_SEED = 2009

VERBS = [
    'abattre', 'accorder', 'achever', 'agiter', 'allumer', 'apaiser', 'appeler',
    'arracher', 'attacher', 'baisser', 'battre', 'briser', 'brûler', 'cacher',
    'casser', 'chasser', 'chercher', 'couper', 'couvrir', 'creuser', 'crier',
    'défendre', 'dresser', 'écarter', 'éclairer', 'élever', 'enfermer',
    'entraîner', 'épuiser', 'étendre', 'fermer', 'filer', 'frapper', 'glisser',
    'jeter', 'lancer', 'lever', 'monter', 'mouvoir', 'ouvrir', 'pencher',
    'percer', 'plier', 'porter', 'pousser', 'quitter', 'rompre', 'serrer',
    'tirer', 'tourner',
]

_SYLLABLES = ['ba', 'lo', 'ri', 'ten', 'mar', 'sil', 'vou', 'cha', 'pé', 'dor', 'lu',
              'mi', 'gra', 'fon', 'neu', 'ti', 'sa', 'ber', 'col', 'dra', 'qui', 'vel']
_CLOSED = [('de', 'de', 'PREP'), ('la', 'le', 'DET'), ('un', 'un', 'DET'),
           ('avec', 'avec', 'PREP'), ('en', 'en', 'PREP'), ('qui', 'qui', 'PRON'),
           ('et', 'et', 'CONJ'), ('dans', 'dans', 'PREP')]
_COMMON = [('faire', 'faire', 'VERB'), ('chose', 'chose', 'NOUN'), ('action', 'action', 'NOUN')]


def tokens(spec: str) -> list[dict]:
    """``"Jeter/jeter/VERB en/en/PREP"`` -> token objects; the lemma may be
    omitted when it equals the lowercased surface (``"loin/ADV"``)."""
    out = []
    for item in spec.split():
        parts = item.split('/')
        surface, pos = parts[0], parts[-1]
        lemma = parts[1] if len(parts) == 3 else surface.lower()
        out.append({'surface': surface.replace('_', ' '), 'lemma': lemma.replace('_', ' '),
                    'pos': pos})
    return out


def definition(ident: str, gloss: str, toks: str, synonyms=(), domains=(), usage=None) -> dict:
    d = {'id': ident, 'gloss': gloss, 'tokens': tokens(toks),
         'synonyms': list(synonyms), 'domains': list(domains)}
    if usage:
        d['usage'] = usage
    return d


def projeter_definitions() -> dict:
    """The three sample senses of *projeter*."""
    return {'name': 'projeter-sample', 'entries': [{
        'headword': 'projeter', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Jeter loin en avant avec force.',
                       'Jeter/jeter/VERB loin/ADV en/PREP avant/ADV avec/PREP force/NOUN'),
            definition('2', 'Passer dans un projecteur.',
                       'Passer/passer/VERB dans/PREP un/DET projecteur/NOUN',
                       domains=['cinéma', 'audiovisuel']),
            definition('3', 'Eclaircir.', '', synonyms=['éclaircir', 'jeter quelque lumière']),
            definition('4', '', ''),
        ]}]}


def abandonner_definitions() -> dict:
    """A dictionary where *abandonner* mixes non-reflexive senses and
    reflexive sub-senses in one entry, plus entries for its synonyms."""
    return {'name': 'abandonner-defs', 'entries': [
        {'headword': 'abandonner', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Renoncer à un bien, le céder à quelqu\'un.',
                       "Renoncer/renoncer/VERB à/PREP un/DET bien/NOUN le/PRON céder/VERB "
                       "à/PREP quelqu'un/PRON"),
            definition('2', 'Laisser, quitter définitivement une personne ou un lieu.',
                       'Laisser/laisser/VERB quitter/VERB définitivement/ADV une/un/DET '
                       'personne/NOUN ou/CONJ un/DET lieu/NOUN'),
            definition('2.1', 'Cesser de soutenir, laisser sans aide.',
                       'Cesser/cesser/VERB de/PREP soutenir/VERB laisser/VERB sans/PREP aide/NOUN'),
            definition('3', 'Se livrer à un sentiment, s\'y laisser aller.',
                       "Se/se/PRON livrer/VERB à/PREP un/DET sentiment/NOUN s'/se/PRON "
                       "y/PRON laisser/VERB aller/VERB", usage='refl'),
            definition('4', 'Se confier, se fier entièrement à quelqu\'un.',
                       "Se/se/PRON confier/VERB se/PRON fier/VERB entièrement/ADV à/PREP "
                       "quelqu'un/PRON", usage='refl'),
        ]},
        {'headword': 'céder', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Renoncer à un bien, le laisser à quelqu\'un.',
                       "Renoncer/renoncer/VERB à/PREP un/DET bien/NOUN le/PRON laisser/VERB "
                       "à/PREP quelqu'un/PRON"),
            definition('2', 'Ne plus résister, se laisser aller.',
                       'Ne/ne/ADV plus/ADV résister/VERB se/PRON laisser/VERB aller/VERB'),
        ]},
        {'headword': 'renoncer', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Cesser de posséder un bien, abandonner un droit.',
                       'Cesser/cesser/VERB de/PREP posséder/VERB un/DET bien/NOUN '
                       'abandonner/VERB un/DET droit/NOUN'),
        ]},
        {'headword': 'quitter', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Laisser une personne ou un lieu.',
                       'Laisser/laisser/VERB une/un/DET personne/NOUN ou/CONJ un/DET lieu/NOUN'),
        ]},
        {'headword': 'délaisser', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Laisser sans aide, cesser de soutenir.',
                       'Laisser/laisser/VERB sans/PREP aide/NOUN cesser/VERB de/PREP '
                       'soutenir/VERB'),
        ]},
        {'headword': 'lâcher', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Cesser de tenir.', 'Cesser/cesser/VERB de/PREP tenir/VERB'),
        ]},
        {'headword': 'donner', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Remettre un bien à quelqu\'un sans contrepartie.',
                       "Remettre/remettre/VERB un/DET bien/NOUN à/PREP quelqu'un/PRON "
                       'sans/PREP contrepartie/NOUN'),
        ]},
        {'headword': 'livrer', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Remettre une marchandise à quelqu\'un.',
                       "Remettre/remettre/VERB une/un/DET marchandise/NOUN à/PREP "
                       "quelqu'un/PRON"),
        ]},
        {'headword': 'livrer', 'usage': 'refl', 'definitions': [
            definition('1', 'Se laisser aller à un sentiment.',
                       'Se/se/PRON laisser/VERB aller/VERB à/PREP un/DET sentiment/NOUN'),
        ]},
        {'headword': 'succomber', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Ne plus résister à un sentiment.',
                       'Ne/ne/ADV plus/ADV résister/VERB à/PREP un/DET sentiment/NOUN'),
        ]},
        {'headword': 'confier', 'usage': 'nonrefl', 'definitions': [
            definition('1', 'Remettre un bien à une personne sûre.',
                       'Remettre/remettre/VERB un/DET bien/NOUN à/PREP une/un/DET '
                       'personne/NOUN sûre/sûr/ADJ'),
        ]},
        {'headword': 'confier', 'usage': 'refl', 'definitions': [
            definition('1', 'Se fier entièrement à une personne.',
                       'Se/se/PRON fier/VERB entièrement/ADV à/PREP une/un/DET personne/NOUN'),
        ]},
        {'headword': 'fier', 'usage': 'refl', 'definitions': [
            definition('1', 'Mettre sa confiance entièrement en quelqu\'un.',
                       "Mettre/mettre/VERB sa/son/DET confiance/NOUN entièrement/ADV "
                       "en/PREP quelqu'un/PRON"),
        ]},
    ]}


def abandonner_synonyms() -> dict:
    return {'name': 'rey-sample', 'records': [
        {'headword': 'abandonner',
         'senses': [['se dessaisir', 'renoncer', 'céder', 'confier', 'donner'],
                    ['délaisser', 'lâcher', 'quitter']]},
        {'headword': "s'abandonner",
         'senses': [['se livrer', 'succomber', 'céder', 'se donner', 'se fier', 'se confier']]},
    ]}


def abandonner_reference_rows() -> list[tuple[str, str, str, str]]:
    return [
        ('abandonner', 'nonrefl', 'renoncer', '1'),
        ('abandonner', 'nonrefl', 'céder', '1'),
        ('abandonner', 'nonrefl', 'donner', '1'),
        ('abandonner', 'nonrefl', 'confier', '1'),
        ('abandonner', 'nonrefl', 'quitter', '2'),
        ('abandonner', 'nonrefl', 'délaisser', '2.1'),
        ('abandonner', 'nonrefl', 'lâcher', '2.1'),
        ('abandonner', 'refl', 'se livrer', '3'),
        ('abandonner', 'refl', 'succomber', '3'),
        ('abandonner', 'refl', 'céder', '3'),
        ('abandonner', 'refl', 'se fier', '4'),
        ('abandonner', 'refl', 'se confier', '4'),
    ]


# -- generated corpus ---------------------------------------------------------

def _pseudo_words(rng: random.Random, count: int) -> list[str]:
    seen: set[str] = set()
    out = []
    while len(out) < count:
        word = ''.join(rng.choice(_SYLLABLES) for _ in range(rng.choice((2, 3))))
        if word not in seen:
            seen.add(word)
            out.append(word)
    return out


def _topic_vocabulary(rng: random.Random, n_topics: int, size: int):
    stems = _pseudo_words(rng, n_topics * size)
    topics = []
    for t in range(n_topics):
        words = []
        for k, stem in enumerate(stems[t * size:(t + 1) * size]):
            kind = k % 4
            if kind == 0 or kind == 2:
                words.append((stem, stem, 'NOUN'))
            elif kind == 1:
                words.append((stem + 'eux', stem + 'eux', 'ADJ'))
            else:
                words.append((stem + 'er', stem + 'er', 'VERB'))
        topics.append(words)
    return topics


def _gloss(rng: random.Random, topic_words, noise_words) -> tuple[str, list[dict]]:
    width = rng.randint(2, 4)
    start = rng.randint(0, len(topic_words) - width)
    content = list(topic_words[start:start + width])
    if rng.random() < 0.3:
        content.insert(rng.randint(0, len(content)), rng.choice(noise_words))
    if rng.random() < 0.4:
        content.insert(0, rng.choice(_COMMON))
    toks = []
    for i, word in enumerate(content):
        if i and rng.random() < 0.35:
            toks.append(rng.choice(_CLOSED))
        toks.append(word)
    if rng.random() < 0.5:
        toks.insert(rng.randint(0, len(toks)), rng.choice(_CLOSED))
    surfaces = [t[0] for t in toks]
    surfaces[0] = surfaces[0].capitalize()
    return ' '.join(surfaces) + '.', [
        {'surface': s, 'lemma': t[1], 'pos': t[2]} for s, t in zip(surfaces, toks)]


def generate_corpus(seed: int = CORPUS_SEED, n_topics: int = 40) -> dict:
    """Return the payloads of the bundled corpus.

    Keys: ``defs``, ``syns``, ``sources`` (list), ``reference_a`` and
    ``reference_b`` (row lists).
    """
    rng = random.Random(seed)
    topics = _topic_vocabulary(rng, n_topics, 6)
    noise = [w for ws in topics for w in ws]
    domains = [f'dom{t:02d}' for t in range(n_topics)]

    # senses[(verb, usage)] = [(definition id, topic)]
    senses: dict[tuple[str, str], list[tuple[str, int]]] = {}
    filed_under_nonrefl: set[tuple[str, str]] = set()
    for v in VERBS:
        ids = []
        for top in range(1, rng.randint(4, 6) + 1):
            ids.append(str(top))
            if rng.random() < 0.2:
                ids.append(f'{top}.1')
        senses[(v, 'nonrefl')] = [(i, rng.randrange(n_topics)) for i in ids]
    for v in rng.sample(VERBS, 16):
        refl = [(str(k), rng.randrange(n_topics)) for k in range(1, rng.randint(1, 2) + 1)]
        if rng.random() < 0.5:
            # reflexive sub-senses inside the plain entry, numbered after it
            offset = len([i for i, _ in senses[(v, 'nonrefl')] if '.' not in i])
            refl = [(str(offset + int(i)), t) for i, t in refl]
            filed_under_nonrefl.add((v, 'refl'))
        senses[(v, 'refl')] = refl

    by_topic: dict[tuple[int, str], set[str]] = {}
    for (v, u), ss in senses.items():
        for _, t in ss:
            by_topic.setdefault((t, u), set()).add(v)

    def synonym_form(verb: str, usage: str) -> str:
        if usage == 'nonrefl':
            return verb
        return ("s'" if verb[0] in 'aeiouéèêh' else 'se ') + verb

    entries = {}
    for (v, u), ss in sorted(senses.items()):
        defs_out = []
        for ident, topic in ss:
            gloss, toks = _gloss(rng, topics[topic], noise)
            extra_syn = []
            if rng.random() < 0.12:
                mates = sorted(by_topic[(topic, u)] - {v})
                if mates:
                    extra_syn = [rng.choice(mates)]
            extra_dom = [domains[topic]] if rng.random() < 0.12 else []
            d = {'id': ident, 'gloss': gloss, 'tokens': toks,
                 'synonyms': extra_syn, 'domains': extra_dom}
            if (v, u) in filed_under_nonrefl:
                d['usage'] = 'refl'
            defs_out.append(d)
        home = (v, 'nonrefl') if (v, u) in filed_under_nonrefl else (v, u)
        entries.setdefault(home, []).extend(defs_out)
    defs_payload = {'name': 'synthetic-tlf', 'entries': [
        {'headword': v, 'usage': u, 'definitions': ds} for (v, u), ds in sorted(entries.items())]}

    # synonyms: verbs sharing a topic with one of the record's senses
    records = []
    truth: dict[tuple[str, str], dict[str, set[str]]] = {}
    for (v, u), ss in sorted(senses.items()):
        chosen: dict[str, set[str]] = {}
        for ident, topic in ss:
            for mate in sorted(by_topic[(topic, u)] - {v}):
                if rng.random() < 0.7:
                    chosen.setdefault(synonym_form(mate, u), set())
        for form in list(chosen):
            mate = form.split(' ')[-1].split("'")[-1]
            mate_topics = {t for _, t in senses[(mate, u)]}
            chosen[form] = {i for i, t in ss if t in mate_topics}
        forms = sorted(chosen)
        if len(forms) > 8:
            forms = sorted(rng.sample(forms, 8))
        if rng.random() < 0.3:
            forms.append(rng.choice([w for w in VERBS if w != v]))
        if rng.random() < 0.2:
            forms.append('vzzqer')  # absent from the definitional side
        forms = sorted(set(forms))
        if not forms:
            continue
        groups = [forms[:len(forms) // 2], forms[len(forms) // 2:]]
        groups = [g for g in groups if g]
        head = v if u == 'nonrefl' else synonym_form(v, 'refl')
        records.append({'headword': head, 'usage': u, 'senses': groups})
        truth[(v, u)] = {f: chosen.get(f, set()) for f in forms}
    syns_payload = {'name': 'synthetic-syn', 'records': records}

    reference_a = sorted(
        (v, u, f, ident)
        for (v, u), forms in truth.items() for f, ids in forms.items() for ident in ids)
    reference_b = [row for row in reference_a if rng.random() >= 0.12]
    for (v, u), forms in sorted(truth.items()):
        for f in sorted(forms):
            if f == 'vzzqer' or rng.random() >= 0.05:
                continue
            reference_b.append((v, u, f, rng.choice(senses[(v, u)])[0]))
    reference_b = sorted(set(reference_b))

    sources = []
    for name, keep in (('source-a', 0.6), ('source-b', 0.5), ('source-c', 0.4)):
        recs = []
        for rec in records:
            groups = [[s for s in g if rng.random() < keep] for g in rec['senses']]
            groups = [g for g in groups if g]
            if groups:
                recs.append({'headword': rec['headword'], 'usage': rec['usage'],
                             'senses': groups})
        sources.append({'name': name, 'records': recs})

    return {'defs': defs_payload, 'syns': syns_payload, 'sources': sources,
            'reference_a': reference_a, 'reference_b': reference_b}


def coverage_fixture() -> tuple[dict, list[dict]]:
    """Five synonym dictionaries over four verb entries where the largest
    source alone gives 6 synonyms per verb and their union gives 11."""
    pool = ['abattre', 'briser', 'casser', 'couper', 'fendre', 'percer', 'rompre',
            'tailler', 'trancher', 'entamer', 'scier', 'fracasser']
    defs = {'name': 'coverage-defs', 'entries': [
        {'headword': w, 'usage': 'nonrefl', 'definitions': [
            definition('1', f'Action de {w}.', f'Action/action/NOUN de/PREP {w}/VERB')]}
        for w in pool
    ] + [{'headword': 'briser', 'usage': 'refl', 'definitions': [
        definition('1', 'Se rompre.', 'Se/se/PRON rompre/VERB')]}]}
    verbs = [('abattre', 'nonrefl'), ('briser', 'nonrefl'), ('casser', 'nonrefl'),
             ('briser', 'refl')]
    # slices of each verb's 11 candidate synonyms; the union covers all 11
    layout = {'Rey': range(0, 6), 'Benac': range(6, 8), 'Chazaud': range(8, 10),
              'Larousse': (10, 0), 'Bailly': (1,)}
    sources = []
    for name, picks in layout.items():
        recs = []
        for v, u in verbs:
            cands = [w for w in pool if w != v]
            if u == 'refl':
                cands = [f"se {w}" if w[0] not in 'aeiou' else f"s'{w}" for w in cands]
            recs.append({'headword': v, 'usage': u, 'senses': [[cands[i] for i in picks]]})
        sources.append({'name': name, 'records': recs})
    return defs, sources


# -- bundle -------------------------------------------------------------------

def data_dir() -> Path:
    return Path(str(resources.files('glossmap') / 'data'))


def data_path(name: str) -> Path:
    return data_dir() / name


def format_rows(rows) -> str:
    lines = ['\t'.join(REFERENCE_COLUMNS)]
    lines += ['\t'.join(r) for r in rows]
    return '\n'.join(lines) + '\n'


def bundle_files(seed: int = CORPUS_SEED) -> dict[str, str]:
    corpus = generate_corpus(seed)
    cov_defs, cov_sources = coverage_fixture()
    files = {
        'defs.json': to_json(corpus['defs']),
        'syns.json': to_json(corpus['syns']),
        'reference_a.tsv': format_rows(corpus['reference_a']),
        'reference_b.tsv': format_rows(corpus['reference_b']),
        'abandonner_defs.json': to_json(abandonner_definitions()),
        'abandonner_syns.json': to_json(abandonner_synonyms()),
        'abandonner_reference.tsv': format_rows(abandonner_reference_rows()),
        'projeter_defs.json': to_json(projeter_definitions()),
        'coverage_defs.json': to_json(cov_defs),
    }
    for src in corpus['sources']:
        files[f'sources/{src["name"]}.json'] = to_json(src)
    for src in cov_sources:
        files[f'sources/coverage-{src["name"].lower()}.json'] = to_json(src)
    return files


def write_bundle(directory=None) -> list[Path]:
    directory = Path(directory) if directory else data_dir()
    written = []
    for name, text in bundle_files().items():
        path = directory / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        written.append(path)
    return written


if __name__ == '__main__':
    for p in write_bundle():
        print(p)
