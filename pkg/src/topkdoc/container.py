"""Binary on-disk container for a built index.

Layout, all integers little-endian:

    magic   "TKDI"
    version u16
    header  7 x u64: n, d, sigma, g_prime, k_max, variant tag, rank step
    then sections until end of file, each:
            section id u64, payload length in bytes u64, payload

Sections: 1 corpus (text plus boundary bit vector), 2 wavelet bitmaps,
3 sampled tree, 4 suffix array (optional, rebuilt from the text when
absent).  Unknown section ids are skipped so the format can grow; a
version mismatch is an error, as is any declared length that does not
match its payload.
"""

import io
import struct

import numpy as np

from .bitrank import RankBitVector
from .corpus import ingest
from .engine import Index
from .errors import ContainerFormatError, VersionMismatchError
from .louds import LoudsTree
from .sgst import SGST
from .suffixes import SuffixIndex, build_suffix_array
from .wavelet import WaveletTree, _Node as _WNode

MAGIC = b"TKDI"
VERSION = 1

SECTION_CORPUS = 1
SECTION_WAVELET = 2
SECTION_SGST = 3
SECTION_SUFFIX_ARRAY = 4

_U16 = struct.Struct("<H")
_U64 = struct.Struct("<Q")
_VARIANT_TAGS = {"light": 0, "xlight": 1}
_TAG_VARIANTS = {v: k for k, v in _VARIANT_TAGS.items()}


def save_index(index: Index, path, include_suffix_array=None):
    """Serialize index to path.

    include_suffix_array defaults to whatever the index was loaded with
    (False for freshly built ones), so rewrite round-trips are
    bit-identical.
    """
    if include_suffix_array is None:
        include_suffix_array = index.store_suffix_array
    data = serialize_index(index, include_suffix_array)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load_index(path) -> Index:
    with open(path, "rb") as fh:
        return deserialize_index(fh.read())


def serialize_index(index: Index, include_suffix_array=False) -> bytes:
    corpus = index.corpus
    x = index.sgst
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(_U16.pack(VERSION))
    for value in (corpus.n, corpus.d, corpus.sigma, x.g_prime, x.k_max,
                  _VARIANT_TAGS[x.variant], index.rank_step):
        out.write(_U64.pack(value))

    _write_section(out, SECTION_CORPUS, _corpus_payload(corpus))
    _write_section(out, SECTION_WAVELET, _wavelet_payload(index.wavelet))
    _write_section(out, SECTION_SGST, _sgst_payload(x))
    if include_suffix_array:
        _write_section(out, SECTION_SUFFIX_ARRAY,
                       np.asarray(index.suffixes.sa, dtype="<u8").tobytes())
    return out.getvalue()


def deserialize_index(data: bytes) -> Index:
    if len(data) < 6 + 7 * 8:
        raise ContainerFormatError("file shorter than the fixed header")
    if data[:4] != MAGIC:
        raise ContainerFormatError("bad magic; not an index container")
    (version,) = _U16.unpack_from(data, 4)
    if version != VERSION:
        raise VersionMismatchError(f"format version {version}, expected {VERSION}")
    header = struct.unpack_from("<7Q", data, 6)
    n, d, sigma, g_prime, k_max, variant_tag, rank_step = header
    if variant_tag not in _TAG_VARIANTS:
        raise ContainerFormatError(f"unknown variant tag {variant_tag}")
    variant = _TAG_VARIANTS[variant_tag]

    sections = {}
    offset = 6 + 7 * 8
    while offset < len(data):
        if offset + 16 > len(data):
            raise ContainerFormatError("truncated section header")
        (sec_id,) = _U64.unpack_from(data, offset)
        (length,) = _U64.unpack_from(data, offset + 8)
        offset += 16
        if offset + length > len(data):
            raise ContainerFormatError(f"section {sec_id} declares {length} bytes "
                                       f"but only {len(data) - offset} remain")
        if sec_id in (SECTION_CORPUS, SECTION_WAVELET, SECTION_SGST,
                      SECTION_SUFFIX_ARRAY):
            sections[sec_id] = data[offset:offset + length]
        offset += length  # unknown ids are skipped

    for required in (SECTION_CORPUS, SECTION_WAVELET, SECTION_SGST):
        if required not in sections:
            raise ContainerFormatError(f"missing required section {required}")

    corpus = _read_corpus(sections[SECTION_CORPUS], n, rank_step)
    if corpus.d != d or corpus.sigma != sigma:
        raise ContainerFormatError("header does not match the stored corpus")

    if SECTION_SUFFIX_ARRAY in sections:
        payload = sections[SECTION_SUFFIX_ARRAY]
        if len(payload) != 8 * n:
            raise ContainerFormatError("suffix array section has the wrong length")
        sa = np.frombuffer(payload, dtype="<u8").astype(np.int64)
        ends = np.cumsum([len(doc) + 1 for doc in corpus.docs])
        doc_ids = (np.searchsorted(ends, sa, side="left") + 1).astype(np.int32)
        suffixes = SuffixIndex(sa=sa, doc_ids=doc_ids)
        store_sa = True
    else:
        suffixes = build_suffix_array(corpus)
        store_sa = False

    wavelet = _read_wavelet(sections[SECTION_WAVELET], d, n, rank_step)
    sgst = _read_sgst(sections[SECTION_SGST], g_prime, k_max, variant, rank_step)
    return Index(corpus=corpus, suffixes=suffixes, wavelet=wavelet, sgst=sgst,
                 rank_step=rank_step, store_suffix_array=store_sa)


def _write_section(out, sec_id, payload):
    out.write(_U64.pack(sec_id))
    out.write(_U64.pack(len(payload)))
    out.write(payload)


def _bitvector_blob(bits: RankBitVector) -> bytes:
    words = np.asarray(bits.words, dtype="<u8")
    return _U64.pack(len(bits)) + words.tobytes()


class _Reader:
    def __init__(self, payload):
        self.data = payload
        self.pos = 0

    def u64(self):
        if self.pos + 8 > len(self.data):
            raise ContainerFormatError("payload ended inside an integer")
        (value,) = _U64.unpack_from(self.data, self.pos)
        self.pos += 8
        return value

    def raw(self, length):
        if self.pos + length > len(self.data):
            raise ContainerFormatError("payload ended inside a field")
        chunk = self.data[self.pos:self.pos + length]
        self.pos += length
        return chunk

    def u64_array(self, count):
        return np.frombuffer(self.raw(8 * count), dtype="<u8").tolist()

    def bitvector(self, rank_step):
        nbits = self.u64()
        words = self.u64_array((nbits + 63) // 64)
        return RankBitVector.from_words(words, nbits, rank_step)

    def done(self):
        if self.pos != len(self.data):
            raise ContainerFormatError("payload longer than its contents")


def _corpus_payload(corpus) -> bytes:
    return (_U64.pack(corpus.n) + corpus.text
            + _bitvector_blob(corpus.boundaries))


def _read_corpus(payload, n, rank_step):
    r = _Reader(payload)
    text_len = r.u64()
    if text_len != n:
        raise ContainerFormatError("stored text length disagrees with the header")
    text = r.raw(text_len)
    boundaries = r.bitvector(rank_step)
    r.done()
    docs = text.split(b"\x00")
    if docs[-1] != b"":
        raise ContainerFormatError("stored text does not end with a terminator")
    corpus = ingest(docs[:-1])
    if corpus.text != text or corpus.boundaries.words != boundaries.words:
        raise ContainerFormatError("stored boundaries disagree with the text")
    return corpus


def _wavelet_payload(w: WaveletTree) -> bytes:
    parts = [_U64.pack(w.d)]
    internal = w.internal_nodes()
    parts.append(_U64.pack(len(internal)))
    for node in internal:
        parts.append(_bitvector_blob(node.bits))
    return b"".join(parts)


def _read_wavelet(payload, d, n, rank_step):
    r = _Reader(payload)
    stored_d = r.u64()
    if stored_d != d:
        raise ContainerFormatError("wavelet alphabet disagrees with the header")
    count = r.u64()
    w = WaveletTree.__new__(WaveletTree)
    w.d = d
    w.n = n
    w._step = rank_step
    w.height = (d - 1).bit_length()
    w.root = _rebuild_wavelet_shape(1, d)
    internal = w.internal_nodes()
    if len(internal) != count:
        raise ContainerFormatError("wavelet section has the wrong node count")
    for node in internal:
        node.bits = r.bitvector(rank_step)
    r.done()
    return w


def _rebuild_wavelet_shape(lo, hi):
    node = _WNode(lo, hi)
    if lo < hi:
        node.left = _rebuild_wavelet_shape(lo, node.mid)
        node.right = _rebuild_wavelet_shape(node.mid + 1, hi)
    return node


def _sgst_payload(x: SGST) -> bytes:
    parts = [_U64.pack(x.node_count)]
    if x.node_count:
        parts.append(_bitvector_blob(x.tau.bits))
        for arr in (x.sp_arr, x.ep_arr, x.cls_arr):
            parts.append(np.asarray(arr, dtype="<u8").tobytes())
        parts.append(np.asarray(x.cand_off, dtype="<u8").tobytes())
        parts.append(_U64.pack(len(x.cand_docs)))
        parts.append(np.asarray(x.cand_docs, dtype="<u8").tobytes())
        if x.cand_freqs is not None:
            parts.append(np.asarray(x.cand_freqs, dtype="<u8").tobytes())
        parts.append(_U64.pack(len(x.skeletons)))
        for k in sorted(x.skeletons):
            louds, refs = x.skeletons[k]
            parts.append(_U64.pack(k))
            parts.append(_bitvector_blob(louds.bits))
            parts.append(_U64.pack(len(refs)))
            parts.append(np.asarray(refs, dtype="<u8").tobytes())
    return b"".join(parts)


def _read_sgst(payload, g_prime, k_max, variant, rank_step):
    r = _Reader(payload)
    node_count = r.u64()
    if node_count == 0:
        r.done()
        return SGST(g_prime, k_max, variant, None, [], [], [], [0], [],
                    None if variant == "xlight" else [], {})
    tau = LoudsTree.from_bits(r.bitvector(rank_step))
    if tau.node_count != node_count:
        raise ContainerFormatError("tree bits disagree with the stored node count")
    sp_arr = r.u64_array(node_count)
    ep_arr = r.u64_array(node_count)
    cls_arr = r.u64_array(node_count)
    cand_off = r.u64_array(node_count + 1)
    total = r.u64()
    if cand_off[-1] != total:
        raise ContainerFormatError("candidate offsets disagree with the store size")
    cand_docs = r.u64_array(total)
    cand_freqs = None if variant == "xlight" else r.u64_array(total)
    skeletons = {}
    for _ in range(r.u64()):
        k = r.u64()
        louds = LoudsTree.from_bits(r.bitvector(rank_step))
        refs = tuple(r.u64_array(r.u64()))
        if louds.node_count != len(refs):
            raise ContainerFormatError("skeleton bits disagree with its reference list")
        skeletons[k] = (louds, refs)
    r.done()
    return SGST(g_prime, k_max, variant, tau, sp_arr, ep_arr, cls_arr,
                cand_off, cand_docs, cand_freqs, skeletons)
