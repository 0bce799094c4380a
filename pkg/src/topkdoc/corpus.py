"""Document collection ingestion.

Documents are byte strings.  They are concatenated into one text with a
terminator byte 0x00 appended after each document; 0x00 is reserved and
compares below every document symbol, so it may not appear in the input.
"""

from dataclasses import dataclass, field

from .bitrank import RankBitVector
from .errors import EmptyDocumentError, OutOfRangeError, SentinelInDocumentError

SENTINEL = 0


@dataclass(frozen=True)
class Corpus:
    docs: tuple          # original documents, ids 1..d by position
    d: int               # number of documents
    sigma: int           # distinct non-terminator symbols
    text: bytes          # concatenation, one terminator after each document
    n: int               # len(text)
    boundaries: RankBitVector = field(repr=False)  # ones at terminator positions

    def doc_of_position(self, pos):
        """Document id owning 1-based text position pos.

        A terminator belongs to the document it ends, so the id is one more
        than the number of terminators strictly before pos.
        """
        if not 1 <= pos <= self.n:
            raise OutOfRangeError(f"position {pos} outside 1..{self.n}")
        return 1 + self.boundaries.rank1(pos - 1)

    def document(self, doc_id):
        """Original bytes of document doc_id (1-based)."""
        if not 1 <= doc_id <= self.d:
            raise OutOfRangeError(f"document {doc_id} outside 1..{self.d}")
        return self.docs[doc_id - 1]


def ingest(documents):
    """Build a Corpus from an iterable of non-empty byte strings.

    str inputs are encoded as UTF-8.  Rejects empty documents and documents
    containing the reserved terminator byte.
    """
    docs = []
    for raw in documents:
        data = raw.encode("utf-8") if isinstance(raw, str) else bytes(raw)
        if not data:
            raise EmptyDocumentError("documents must contain at least one symbol")
        if SENTINEL in data:
            raise SentinelInDocumentError("documents may not contain byte 0x00")
        docs.append(data)
    if not docs:
        raise EmptyDocumentError("at least one document is required")
    text = b"".join(d + bytes([SENTINEL]) for d in docs)
    n = len(text)
    ends = []
    pos = 0
    for d in docs:
        pos += len(d) + 1
        ends.append(pos)
    boundaries = RankBitVector.from_ones(ends, n)
    alphabet = set()
    for d in docs:
        alphabet.update(d)
    return Corpus(
        docs=tuple(docs),
        d=len(docs),
        sigma=len(alphabet),
        text=text,
        n=n,
        boundaries=boundaries,
    )
