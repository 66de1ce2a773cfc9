"""
Command line entry point.

    glossmap ingest   --defs D [--syns S ...] [--reference R ...] [--out DIR]
    glossmap map      --defs D --syns S [--measure M] [--split-reflexive] --out FILE
    glossmap eval     --defs D --syns S --system FILE --reference R
    glossmap baseline --defs D --syns S --reference R [--trials N] [--seed N]
    glossmap agree    --defs D --syns S R1 R2 [R3 ...]
    glossmap merge    --defs D --syns S1 [S2 ...] --out FILE
    glossmap coverage --defs D --syns S1 [S2 ...]
    glossmap stats    --defs D
    glossmap replay   MANIFEST

Exit codes: 0 success, 1 validation error, 2 parse error, 64 usage error.
Every command that writes ``--out`` also writes ``<out>.manifest.json``
recording its arguments and input/output digests; ``replay`` re-runs it
and checks the output is byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional

from . import __version__
from .evaluator import agreement, evaluate, random_baseline
from .indexer import build_stats
from .lexicon import (
    REFERENCE_COLUMNS,
    LexiconError,
    ParseError,
    ValidationError,
    dump_definitional,
    dump_synonyms,
    filter_against,
    format_reference,
    ingest_definitional,
    ingest_reference,
    ingest_synonyms,
    read_reference_rows,
    to_json,
)
from .mapper import (
    MappingConfig,
    TiePolicy,
    UnmappedPolicy,
    format_triples,
    map_all,
    read_triples,
)
from .merger import build_merged, coverage
from .similarity import Measure

log = logging.getLogger('glossmap')

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(args, text: str, inputs: list, config: dict) -> None:
    """Write *text* to ``--out`` (plus its manifest) or to stdout."""
    if not args.out:
        sys.stdout.write(text)
        return
    write_atomic(args.out, text)
    write_manifest(args, inputs, config, [args.out])


def write_manifest(args, inputs: list, config: dict, outputs: list) -> None:
    manifest = {
        'command': args.command,
        'argv': args.argv,
        'cwd': os.getcwd(),
        'inputs': [{'path': str(p), 'sha256': sha256(p)} for p in inputs],
        'config': config,
        'outputs': [{'path': str(p), 'sha256': sha256(p)} for p in outputs],
        'version': __version__,
    }
    write_atomic(f'{outputs[0]}.manifest.json', json.dumps(manifest, indent=2) + '\n')


def _read_path(value: str) -> Path:
    path = Path(value)
    if not path.is_file():
        raise UsageError(f'no such file: {value}')
    return path


def _load_defs(args):
    return ingest_definitional(_read_path(args.defs))


def _load_syns(args, defs):
    return [filter_against(ingest_synonyms(_read_path(p)), defs) for p in args.syns]


def _single_syns(args, defs):
    dicts = _load_syns(args, defs)
    if len(dicts) != 1:
        raise UsageError('exactly one --syns file is expected here')
    return dicts[0]


def _mapping_config(args) -> MappingConfig:
    return MappingConfig(
        measure=Measure(args.measure),
        split_reflexive=args.split_reflexive,
        tie_policy=TiePolicy(args.tie_policy),
        tfidf_cutoff=args.tfidf_cutoff,
        unmapped_policy=UnmappedPolicy(args.unmapped_policy),
    )


# -- commands ---------------------------------------------------------------

def cmd_ingest(args) -> int:
    defs = _load_defs(args)
    report = {'definitional': {'path': args.defs, 'entries': len(defs),
                               'definitions': defs.definition_count,
                               'warnings': list(defs.warnings)},
              'synonyms': [], 'references': []}
    syns_list = []
    for path in args.syns or []:
        raw = ingest_synonyms(_read_path(path))
        kept = filter_against(raw, defs)
        syns_list.append(kept)
        report['synonyms'].append({'path': path, 'records': len(kept),
                                   'discarded': dict(kept.discarded)})
    refs = []
    for path in args.reference or []:
        if len(syns_list) != 1:
            raise UsageError('--reference needs exactly one --syns file')
        ref = ingest_reference(_read_path(path), defs, syns_list[0])
        refs.append(ref)
        report['references'].append({'path': path, 'annotator': ref.annotator,
                                     'triples': len(ref)})
    warning_count = len(defs.warnings)
    report['warning_count'] = warning_count
    if args.out:
        out = Path(args.out)
        write_atomic(out / 'defs.json', to_json(dump_definitional(defs)))
        for i, s in enumerate(syns_list):
            write_atomic(out / f'syns_{i}.json', to_json(dump_synonyms(s)))
        for i, r in enumerate(refs):
            write_atomic(out / f'reference_{i}.tsv', format_reference(r.triples))
        write_atomic(out / 'report.json', json.dumps(report, indent=2, ensure_ascii=False) + '\n')
    print(f'ingested {len(defs)} entries, {defs.definition_count} definitions; '
          f'warnings: {warning_count}')
    for w in defs.warnings:
        print(f'warning: {w}')
    return EXIT_OK


def cmd_map(args) -> int:
    defs = _load_defs(args)
    syns = _single_syns(args, defs)
    config = _mapping_config(args)
    result = map_all(defs, syns, config, jobs=args.jobs)
    _emit(args, format_triples(result.triples), [args.defs, *args.syns], config.to_json())
    if args.diagnostics:
        write_atomic(args.diagnostics, json.dumps(
            [d.to_json() for d in result.diagnostics], indent=2, ensure_ascii=False) + '\n')
    log.info('%d triples, %d diagnostics', len(result.triples), len(result.diagnostics))
    return EXIT_OK


def _report_table(label: str, report) -> str:
    return f'{"Meas.":<10} R    P    F\n{label:<10} {float(report.recall):.2f} ' \
           f'{float(report.precision):.2f} {float(report.f1):.2f}\n'


def cmd_eval(args) -> int:
    defs = _load_defs(args)
    syns = _single_syns(args, defs)
    ref = ingest_reference(_read_path(args.reference), defs, syns)
    system_path = _read_path(args.system)
    header = system_path.read_text(encoding='utf-8').split('\n', 1)[0].rstrip('\r')
    if header.split('\t') == list(REFERENCE_COLUMNS):
        # a second annotation scored as if it were system output
        system, label = read_reference_rows(system_path), 'reference'
    else:
        system = read_triples(system_path)
        label = system[0].measure.label if system else 'system'
    report = evaluate(system, ref, defs, syns)
    print(_report_table(label, report), end='')
    if args.out:
        write_atomic(args.out, json.dumps(report.to_json(), indent=2) + '\n')
        write_manifest(args, [args.defs, *args.syns, args.reference, args.system], {}, [args.out])
    return EXIT_OK


def cmd_baseline(args) -> int:
    if args.trials < 1:
        raise UsageError('--trials must be at least 1')
    defs = _load_defs(args)
    syns = _single_syns(args, defs)
    ref = ingest_reference(_read_path(args.reference), defs, syns)
    report = random_baseline(defs, syns, ref, trials=args.trials, seed=args.seed,
                             split_reflexive=args.split_reflexive)
    text = json.dumps(report.to_json(), indent=2) + '\n'
    config = {'seed': args.seed, 'trials': args.trials, 'split_reflexive': args.split_reflexive}
    if args.out:
        print(_report_table('baseline', report), end='')
    _emit(args, text, [args.defs, *args.syns, args.reference], config)
    return EXIT_OK


def cmd_agree(args) -> int:
    defs = _load_defs(args)
    syns = _single_syns(args, defs)
    refs = [ingest_reference(_read_path(p), defs, syns) for p in args.references]
    if len(refs) < 2:
        raise UsageError('agree needs at least two reference files')
    report = agreement(refs, defs, syns)
    for (a, b), rate in sorted(report.pairwise.items()):
        print(f'{a} / {b}\t{float(rate):.2f}')
    print(f'all\t{float(report.unanimous):.2f}')
    if args.out:
        write_atomic(args.out, json.dumps(report.to_json(), indent=2) + '\n')
        write_manifest(args, [args.defs, *args.syns, *args.references], {}, [args.out])
    return EXIT_OK


def cmd_merge(args) -> int:
    defs = _load_defs(args)
    dicts = _load_syns(args, defs)
    config = _mapping_config(args)
    lexicon = build_merged(defs, dicts, config, jobs=args.jobs, prune=args.prune)
    text = json.dumps(lexicon.to_json(args.name), indent=2, ensure_ascii=False) + '\n'
    _emit(args, text, [args.defs, *args.syns], {**config.to_json(), 'prune': args.prune})
    return EXIT_OK


def cmd_coverage(args) -> int:
    defs = _load_defs(args)
    dicts = [ingest_synonyms(_read_path(p)) for p in args.syns]
    stats = coverage(defs, dicts)
    _emit(args, stats.to_tsv(), [args.defs, *args.syns], {})
    return EXIT_OK


def cmd_stats(args) -> int:
    defs = _load_defs(args)
    text = json.dumps(build_stats(defs).to_json(), indent=2, ensure_ascii=False) + '\n'
    _emit(args, text, [args.defs], {})
    return EXIT_OK


def cmd_replay(args) -> int:
    manifest = json.loads(_read_path(args.manifest).read_text(encoding='utf-8'))
    base = Path(manifest.get('cwd', '.'))
    stale = [i['path'] for i in manifest['inputs']
             if not (base / i['path']).is_file() or sha256(base / i['path']) != i['sha256']]
    if stale:
        raise ValidationError('inputs changed since the manifest was written', stale)
    here = os.getcwd()
    with tempfile.TemporaryDirectory() as tmp:
        argv = list(manifest['argv'])
        out_paths = [o['path'] for o in manifest['outputs']]
        replaced = []
        for k, path in enumerate(out_paths):
            new = str(Path(tmp) / f'out{k}{Path(path).suffix}')
            argv = [new if a == path else a for a in argv]
            replaced.append(new)
        os.chdir(manifest.get('cwd', here))
        try:
            code = main(argv)
        finally:
            os.chdir(here)
        if code != EXIT_OK:
            return code
        changed = [o['path'] for o, new in zip(manifest['outputs'], replaced)
                   if sha256(new) != o['sha256']]
    if changed:
        raise ValidationError('replay produced different output', changed)
    print('replay: outputs identical')
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _add_inputs(p, many_syns=False, syns=True):
    p.add_argument('--defs', required=True, help='definitional dictionary (JSON)')
    if syns:
        p.add_argument('--syns', required=True, nargs='+' if many_syns else 1,
                       help='synonym dictionary file(s) (JSON)')


def _add_mapping(p):
    p.add_argument('--measure', default='over1', choices=[m.value for m in Measure])
    p.add_argument('--split-reflexive', action='store_true',
                   help='compare only definitions of the same (non)reflexive usage')
    p.add_argument('--tie-policy', default='all', choices=[t.value for t in TiePolicy])
    p.add_argument('--tfidf-cutoff', type=float, default=None,
                   help='tf.idf threshold for wv3 dimensions (default: 1.0)')
    p.add_argument('--unmapped-policy', default='drop', choices=[u.value for u in UnmappedPolicy])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='glossmap', description=__doc__.split('\n\n')[0].strip())
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('-v', '--verbose', action='store_true')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('ingest', help='validate and normalise input files')
    p.add_argument('--defs', required=True)
    p.add_argument('--syns', nargs='*', default=[])
    p.add_argument('--reference', nargs='*', default=[])
    p.add_argument('--out', help='directory for the normalised files and report.json')
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser('map', help='map synonyms onto definitions')
    _add_inputs(p)
    _add_mapping(p)
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--out')
    p.add_argument('--diagnostics', help='write mapping diagnostics (JSON) here')
    p.set_defaults(func=cmd_map)

    p = sub.add_parser('eval', help='precision/recall against a reference')
    _add_inputs(p)
    p.add_argument('--system', required=True, help='triples TSV written by map')
    p.add_argument('--reference', required=True)
    p.add_argument('--out')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser('baseline', help='random assignment baseline')
    _add_inputs(p)
    p.add_argument('--reference', required=True)
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--split-reflexive', action='store_true')
    p.add_argument('--jobs', type=int, default=1, help='accepted for symmetry; results do not depend on it')
    p.add_argument('--out')
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser('agree', help='inter-annotator agreement')
    _add_inputs(p)
    p.add_argument('references', nargs='+')
    p.add_argument('--out')
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser('merge', help='merge synonym dictionaries by definition')
    _add_inputs(p, many_syns=True)
    _add_mapping(p)
    p.add_argument('--prune', action='store_true', help='drop definitions without synonyms')
    p.add_argument('--name', default='merged')
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--out')
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser('coverage', help='coverage table of synonym dictionaries')
    _add_inputs(p, many_syns=True)
    p.add_argument('--out')
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser('stats', help='dump corpus statistics (JSON)')
    _add_inputs(p, syns=False)
    p.add_argument('--out')
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser('replay', help='re-run a command from its manifest')
    p.add_argument('manifest')
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format='%(levelname)s %(name)s: %(message)s')
    if getattr(args, 'jobs', 1) < 1:
        print('glossmap: error: --jobs must be at least 1', file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f'glossmap: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f'glossmap: parse error: {exc}', file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f'glossmap: validation error: {exc}', file=sys.stderr)
        return EXIT_VALIDATION
    except LexiconError as exc:
        print(f'glossmap: error: {exc}', file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == '__main__':
    sys.exit(main())
