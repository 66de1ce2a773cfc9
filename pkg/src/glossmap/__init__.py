"""Group the synonyms of a headword by the dictionary definitions they match."""

__version__ = '0.1.0'

from .lexicon import (  # noqa: E402
    Assignment,
    Definition,
    DefinitionalDictionary,
    ReferenceAnnotation,
    SynonymDictionary,
    SynonymRecord,
    Token,
    Usage,
    VerbEntry,
    filter_against,
    ingest_definitional,
    ingest_reference,
    ingest_synonyms,
)
from .indexer import DefinitionIndex, build_index, build_stats, merged_synonym_index  # noqa: E402
from .similarity import Measure, over1, over2, over3, wv1, wv2, wv3  # noqa: E402
from .mapper import MappingConfig, MappingTriple, TiePolicy, map_all, map_synonym  # noqa: E402
from .evaluator import agreement, evaluate, random_baseline  # noqa: E402
from .merger import build_merged, coverage, union_synonyms  # noqa: E402
