"""Knowledge retrieval: bigram TF-IDF indexing, metadata query construction,
cosine ranking, and R@k evaluation."""

from artdesc.retriever.index import (
    KnowledgeArticle,
    TfIdfIndex,
    read_articles_dir,
    read_articles_jsonl,
    terms_of,
)
from artdesc.retriever.normalize import default_stopwords, load_stopwords, normalize_text
from artdesc.retriever.porter import stem
from artdesc.retriever.query import build_query, default_blocklist, load_blocklist
from artdesc.retriever.recall import (
    POSITIVE_LABELS,
    RetrievalAnnotation,
    RetrievalLabel,
    eval_recall,
    load_annotations,
    save_annotations,
)

__all__ = [
    "KnowledgeArticle",
    "POSITIVE_LABELS",
    "RetrievalAnnotation",
    "RetrievalLabel",
    "TfIdfIndex",
    "build_query",
    "default_blocklist",
    "default_stopwords",
    "eval_recall",
    "load_annotations",
    "load_blocklist",
    "load_stopwords",
    "normalize_text",
    "read_articles_dir",
    "read_articles_jsonl",
    "stem",
    "terms_of",
]
