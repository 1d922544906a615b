"""Unigram+bigram TF-IDF inverted index with cosine ranking.

Weights are tf * idf with idf = ln((1+N)/(1+df)) + 1 (smoothed, never
negative); document vectors are L2-normalized, so the ranking score is the
cosine similarity between the normalized query vector and each document.

Index file layout (little-endian):
    magic    4 bytes  b"TFIX"
    version  u32      currently 1
    n_terms  u32, n_docs u32, nnz u64
    terms    per term: u32 length + UTF-8 (term-id order)
    df       n_terms x u64
    doc ids  per doc: u32 length + UTF-8 (row order)
    indptr   (n_docs+1) x u64   CSR row pointers
    indices  nnz x u32          term ids
    data     nnz x f64          normalized weights
"""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from artdesc.errors import DataError, FormatError
from artdesc.retriever.normalize import normalize_text

logger = logging.getLogger(__name__)

MAGIC = b"TFIX"
VERSION = 1


@dataclass
class KnowledgeArticle:
    id: str
    title: str
    body: str


def terms_of(tokens: list[str]) -> list[str]:
    """Unigrams plus adjacent bigrams (joined with one space)."""
    bigrams = [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]
    return tokens + bigrams


class TfIdfIndex:
    def __init__(
        self,
        terms: list[str],
        df: np.ndarray,
        doc_ids: list[str],
        indptr: np.ndarray,
        indices: np.ndarray,
        data: np.ndarray,
        idf_table: np.ndarray | None = None,
    ):
        self.terms = terms
        self.term_ids = {t: i for i, t in enumerate(terms)}
        self.df = np.asarray(df, dtype=np.int64)
        self.doc_ids = doc_ids
        self.indptr = np.asarray(indptr, dtype=np.uint64)
        self.indices = np.asarray(indices, dtype=np.uint32)
        self.data = np.asarray(data, dtype=np.float64)
        # idf_table lets a caller carry a frozen idf across corpus extensions;
        # by default it is derived from (n_docs, df)
        if idf_table is None:
            idf_table = np.log((1.0 + self.n_docs) / (1.0 + self.df)) + 1.0
        self.idf_table = np.asarray(idf_table, dtype=np.float64)
        self._postings: dict[int, tuple[np.ndarray, np.ndarray]] | None = None

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def idf(self, term_id: int) -> float:
        return float(self.idf_table[term_id])

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def build(cls, articles: list[KnowledgeArticle],
              stopwords: frozenset[str] | None = None) -> "TfIdfIndex":
        """Articles are processed in sorted-id order so term ids are
        deterministic; articles empty after normalization are dropped."""
        if not articles:
            raise DataError("cannot build an index from zero articles")
        seen: set[str] = set()
        for a in articles:
            if a.id in seen:
                raise DataError(f"duplicate article id '{a.id}'")
            seen.add(a.id)

        usable: list[tuple[str, dict[str, int]]] = []
        term_ids: dict[str, int] = {}
        for article in sorted(articles, key=lambda a: a.id):
            tokens = normalize_text(article.body, stopwords)
            if not tokens:
                logger.warning("dropping article '%s': empty after normalization", article.id)
                continue
            counts: dict[str, int] = {}
            for term in terms_of(tokens):
                counts[term] = counts.get(term, 0) + 1
                if term not in term_ids:
                    term_ids[term] = len(term_ids)
            usable.append((article.id, counts))
        if not usable:
            raise DataError("no usable articles: all were empty after normalization")

        n_docs = len(usable)
        df = np.zeros(len(term_ids), dtype=np.int64)
        for _, counts in usable:
            for term in counts:
                df[term_ids[term]] += 1
        idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0

        doc_ids = []
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for doc_id, counts in usable:
            doc_ids.append(doc_id)
            row = sorted((term_ids[t], c) for t, c in counts.items())
            weights = np.array([c * idf[tid] for tid, c in row])
            norm = float(np.sqrt((weights**2).sum()))
            weights /= norm
            indices.extend(tid for tid, _ in row)
            data.extend(weights.tolist())
            indptr.append(len(indices))

        terms = [None] * len(term_ids)
        for term, tid in term_ids.items():
            terms[tid] = term
        return cls(terms, df, doc_ids,
                   np.array(indptr, dtype=np.uint64),
                   np.array(indices, dtype=np.uint32),
                   np.array(data, dtype=np.float64))

    # ------------------------------------------------------------------
    # Query
    # ------------------------------------------------------------------

    def vectorize_query(self, query: str,
                        stopwords: frozenset[str] | None = None) -> dict[int, float]:
        """Sparse normalized query vector using the index's idf table; terms
        unknown to the index are dropped."""
        tokens = normalize_text(query, stopwords)
        counts: dict[int, int] = {}
        for term in terms_of(tokens):
            tid = self.term_ids.get(term)
            if tid is not None:
                counts[tid] = counts.get(tid, 0) + 1
        if not counts:
            return {}
        vec = {tid: c * self.idf(tid) for tid, c in counts.items()}
        norm = float(np.sqrt(sum(w * w for w in vec.values())))
        return {tid: w / norm for tid, w in vec.items()}

    def _posting(self, term_id: int) -> tuple[np.ndarray, np.ndarray]:
        if self._postings is None:
            postings: dict[int, tuple[list[int], list[float]]] = {}
            for row in range(self.n_docs):
                lo, hi = int(self.indptr[row]), int(self.indptr[row + 1])
                for tid, w in zip(self.indices[lo:hi], self.data[lo:hi]):
                    postings.setdefault(int(tid), ([], []))
                    postings[int(tid)][0].append(row)
                    postings[int(tid)][1].append(float(w))
            self._postings = {
                tid: (np.array(rows, dtype=np.int64), np.array(ws))
                for tid, (rows, ws) in postings.items()
            }
        return self._postings.get(term_id, (np.empty(0, dtype=np.int64), np.empty(0)))

    def rank(self, query: str, k: int = 5,
             stopwords: frozenset[str] | None = None) -> list[tuple[str, float]]:
        """Top-k (article id, cosine score), descending score, ties broken by
        article id. An empty-after-normalization query returns no results."""
        if k < 1:
            raise DataError(f"k must be >= 1, got {k}")
        qvec = self.vectorize_query(query, stopwords)
        if not qvec:
            logger.warning("query is empty after normalization; returning no results")
            return []
        scores = np.zeros(self.n_docs)
        for tid, w in qvec.items():
            rows, weights = self._posting(tid)
            scores[rows] += w * weights
        order = sorted(range(self.n_docs), key=lambda r: (-scores[r], self.doc_ids[r]))
        return [(self.doc_ids[r], min(float(scores[r]), 1.0)) for r in order[:k]]

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def save(self, path: str | Path) -> None:
        with open(path, "wb") as f:
            f.write(MAGIC)
            f.write(struct.pack("<I", VERSION))
            f.write(struct.pack("<IIQ", len(self.terms), self.n_docs, len(self.data)))
            for term in self.terms:
                blob = term.encode("utf-8")
                f.write(struct.pack("<I", len(blob)))
                f.write(blob)
            f.write(self.df.astype("<i8").tobytes())
            for doc_id in self.doc_ids:
                blob = doc_id.encode("utf-8")
                f.write(struct.pack("<I", len(blob)))
                f.write(blob)
            f.write(self.indptr.astype("<u8").tobytes())
            f.write(self.indices.astype("<u4").tobytes())
            f.write(self.data.astype("<f8").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "TfIdfIndex":
        raw = Path(path).read_bytes()
        pos = 0

        def take(n: int, what: str) -> bytes:
            nonlocal pos
            if pos + n > len(raw):
                raise FormatError(f"truncated index while reading {what}", pos)
            chunk = raw[pos : pos + n]
            pos += n
            return chunk

        if take(4, "magic") != MAGIC:
            raise FormatError("bad index magic", 0)
        (version,) = struct.unpack("<I", take(4, "version"))
        if version != VERSION:
            raise FormatError(f"unsupported index version {version}", pos - 4)
        n_terms, n_docs, nnz = struct.unpack("<IIQ", take(16, "table sizes"))
        terms = [take(struct.unpack("<I", take(4, "term length"))[0], "term").decode("utf-8")
                 for _ in range(n_terms)]
        df = np.frombuffer(take(8 * n_terms, "df table"), dtype="<i8").astype(np.int64)
        doc_ids = [take(struct.unpack("<I", take(4, "doc id length"))[0], "doc id").decode("utf-8")
                   for _ in range(n_docs)]
        indptr = np.frombuffer(take(8 * (n_docs + 1), "indptr"), dtype="<u8").astype(np.uint64)
        indices = np.frombuffer(take(4 * nnz, "indices"), dtype="<u4").astype(np.uint32)
        data = np.frombuffer(take(8 * nnz, "weights"), dtype="<f8").astype(np.float64)
        if pos != len(raw):
            raise FormatError("trailing bytes after index payload", pos)
        return cls(terms, df, doc_ids, indptr, indices, data)


# ----------------------------------------------------------------------
# Article readers
# ----------------------------------------------------------------------


def read_articles_dir(directory: str | Path) -> list[KnowledgeArticle]:
    """Directory of plain-text files; the file stem is the article id and the
    first line is treated as the title."""
    directory = Path(directory)
    articles = []
    for path in sorted(directory.glob("*.txt")):
        text = path.read_text(encoding="utf-8")
        first = text.splitlines()[0].strip() if text.splitlines() else path.stem
        articles.append(KnowledgeArticle(id=path.stem, title=first, body=text))
    return articles


def read_articles_jsonl(path: str | Path) -> list[KnowledgeArticle]:
    """Line-delimited export: {"id": ..., "title": ..., "body"/"text": ...}."""
    articles = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{lineno}: invalid JSON ({exc})") from None
        body = obj.get("body", obj.get("text", ""))
        articles.append(
            KnowledgeArticle(id=str(obj["id"]), title=obj.get("title", str(obj["id"])), body=body)
        )
    return articles
