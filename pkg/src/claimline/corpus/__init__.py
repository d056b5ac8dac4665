from .io import (
    FACTCHECK_FIELDS,
    POST_FIELDS,
    CorpusFormatError,
    LoadError,
    LoadReport,
    load_factchecks,
    load_posts,
    open_corpus,
    save_corpus,
)
from .ratings import DEFAULT_RATING_TABLE, normalize_rating
from .types import (
    Corpus,
    FactCheck,
    Post,
    ReferentialIntegrityError,
    VeracityLabel,
)

__all__ = [
    "Corpus",
    "CorpusFormatError",
    "DEFAULT_RATING_TABLE",
    "FACTCHECK_FIELDS",
    "FactCheck",
    "LoadError",
    "LoadReport",
    "POST_FIELDS",
    "Post",
    "ReferentialIntegrityError",
    "VeracityLabel",
    "load_factchecks",
    "load_posts",
    "normalize_rating",
    "open_corpus",
    "save_corpus",
]
