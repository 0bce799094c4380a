"""Sampled suffix-tree node index with precomputed top-document candidates.

For each candidate level k in {1, 2, 4, ..., K_max} the suffix array is
sampled every g = k * g_prime slots (slots 1, g+1, 2g+1, ...) and the
suffix-tree ancestor spanning each consecutive sample pair is marked.  A
marked node is identified with its suffix-array interval; the marked sets
nest as k doubles, so a single containment tree `tau` holds every marked
node while the sparser levels keep only LOUDS skeletons of references into
it.  Each node stores its interval, its deepest level c (the largest k
that marked it), and the c most frequent documents of its interval; the
"light" layout keeps their frequencies next to the ids, "xlight" drops
them and recounts through the wavelet tree on demand.

Ancestor intervals are computed without materializing a suffix tree: the
node spanning sample slots p < q is the maximal interval around [p, q]
whose internal lcp values all reach min(lcp[p+1..q]), found with a sparse
table of range-minimum queries over the lcp array.
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .louds import LoudsTree
from .wavelet import WaveletTree
from .errors import KStarNotPrecomputedError

VARIANTS = ("light", "xlight")


@dataclass(frozen=True)
class MarkedNode:
    """A marked suffix-tree node: dense index in tau plus its interval."""

    rank: int
    sp: int
    ep: int
    cls: int


class SGST:
    """Built candidate structure; see build_sgst."""

    def __init__(self, g_prime, k_max, variant, tau, sp_arr, ep_arr, cls_arr,
                 cand_off, cand_docs, cand_freqs, skeletons):
        self.g_prime = g_prime
        self.k_max = k_max
        self.variant = variant
        self.tau = tau                  # LoudsTree over all marked nodes, or None
        self.sp_arr = sp_arr            # indexed by dense rank - 1
        self.ep_arr = ep_arr
        self.cls_arr = cls_arr
        self.cand_off = cand_off        # len node_count + 1, offsets into cand_docs
        self.cand_docs = cand_docs
        self.cand_freqs = cand_freqs    # None for the xlight layout
        self.skeletons = skeletons      # level k >= 2 -> (LoudsTree, refs into tau)

    @property
    def node_count(self):
        return 0 if self.tau is None else self.tau.node_count

    @property
    def is_empty(self):
        return self.tau is None

    def levels(self):
        out = []
        k = 1
        while k <= self.k_max:
            out.append(k)
            k <<= 1
        return out

    def node_at(self, rank):
        return MarkedNode(rank, self.sp_arr[rank - 1], self.ep_arr[rank - 1],
                          self.cls_arr[rank - 1])

    def level_nodes(self, k):
        """Marked nodes of level k, in level order of its skeleton."""
        if k == 1:
            return [self.node_at(r) for r in range(1, self.node_count + 1)]
        entry = self.skeletons.get(k)
        if entry is None:
            return []
        _, refs = entry
        return [self.node_at(r) for r in refs]


def build_sgst(corpus, s, w: WaveletTree, g_prime=400, k_max=16,
               variant="light", sample_step=64) -> SGST:
    """Mark, classify and precompute candidates over the suffix array of corpus.

    `s` is the corpus's SuffixIndex and `w` the wavelet tree over its
    document array.  Degenerate sampling (fewer than two sampled slots at
    some level) simply leaves that level empty; queries fall back to a full
    greedy traversal when no marked ancestor serves them.
    """
    if g_prime < 1:
        raise ValueError("g_prime must be at least 1")
    if k_max < 1 or k_max & (k_max - 1):
        raise ValueError("k_max must be a power of two")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")

    n = len(s.sa)
    lcp = _lcp_array(corpus.text, s.sa)
    rmq = _RangeMin(lcp[2:]) if n >= 2 else None

    levels = []
    k = 1
    while k <= k_max:
        levels.append(k)
        k <<= 1

    level_sets = {}
    classes = {}
    for k in levels:
        g = k * g_prime
        marked = set()
        prev = None
        for slot in range(1, n + 1, g):
            if prev is not None:
                marked.add(_ancestor_interval(lcp, rmq, n, prev, slot))
            prev = slot
        level_sets[k] = marked
        for iv in marked:
            classes[iv] = k  # levels ascend, so the last write is the max

    if not classes:
        return SGST(g_prime, k_max, variant, None, [], [], [], [0], [],
                    None if variant == "xlight" else [], {})

    children = _containment_children(classes.keys())
    tau, order = _encode_forest(children, classes.keys(), sample_step)
    tau_rank = {iv: i + 1 for i, iv in enumerate(order)}

    sp_arr = [iv[0] for iv in order]
    ep_arr = [iv[1] for iv in order]
    cls_arr = [classes[iv] for iv in order]

    cand_off = [0]
    cand_docs = []
    cand_freqs = [] if variant == "light" else None
    for iv in order:
        for doc, freq in w.greedy_topk(iv[0], iv[1], classes[iv]):
            cand_docs.append(doc)
            if cand_freqs is not None:
                cand_freqs.append(freq)
        cand_off.append(len(cand_docs))

    skeletons = {}
    for k in levels[1:]:
        subset = level_sets[k]
        if not subset:
            continue
        sub_children = _containment_children(subset)
        louds, sub_order = _encode_forest(sub_children, subset, sample_step)
        skeletons[k] = (louds, tuple(tau_rank[iv] for iv in sub_order))

    return SGST(g_prime, k_max, variant, tau, sp_arr, ep_arr, cls_arr,
                cand_off, cand_docs, cand_freqs, skeletons)


def find_locus(x: SGST, k_star, sp, ep):
    """Deepest-available marked node whose interval fits inside [sp, ep].

    Descends level k_star from the root through nodes containing [sp, ep]
    and returns the first node contained in it, or None when the descent
    dead-ends (no marked ancestor small enough), the level is empty, or
    the root does not contain [sp, ep].
    """
    if k_star < 1 or k_star & (k_star - 1) or k_star > x.k_max:
        raise KStarNotPrecomputedError(
            f"level {k_star} not precomputed (levels are powers of two up to {x.k_max})")
    if x.is_empty:
        return None
    if k_star == 1:
        louds, refs = x.tau, None
    else:
        entry = x.skeletons.get(k_star)
        if entry is None:
            return None
        louds, refs = entry

    # Children of a node occupy consecutive dense ranks, so the descent
    # reads intervals straight from the side arrays and only materializes
    # a handle when actually stepping down.
    sp_arr, ep_arr = x.sp_arr, x.ep_arr
    bits = louds.bits

    def interval_of(rank):
        r = rank if refs is None else refs[rank - 1]
        return sp_arr[r - 1], ep_arr[r - 1]

    def found(rank):
        return x.node_at(rank if refs is None else refs[rank - 1])

    v = louds.root
    nsp, nep = interval_of(1)
    if sp <= nsp and nep <= ep:
        return found(1)
    if not (nsp <= sp and ep <= nep):
        return None
    while True:
        cc = louds.child_count(v)
        if cc == 0:
            return None
        base = bits.rank1(v - 1)          # children are ranks base+1..base+cc
        # Children are disjoint and sorted; find the first reaching sp.
        lo, hi, first = 1, cc, None
        while lo <= hi:
            mid = (lo + hi) // 2
            if interval_of(base + mid)[1] >= sp:
                first = mid
                hi = mid - 1
            else:
                lo = mid + 1
        if first is None:
            return None
        t = first
        descend = None
        while t <= cc:
            nsp, nep = interval_of(base + t)
            if nsp > ep:
                break
            if sp <= nsp and nep <= ep:
                return found(base + t)
            if nsp <= sp and ep <= nep:
                descend = base + t
                break
            t += 1
        if descend is None:
            return None
        v = louds.handle_of_rank(descend)


def candidates_of(x: SGST, node: MarkedNode, w: WaveletTree):
    """Precomputed (doc, freq) list of a marked node, most frequent first.

    The light layout returns stored frequencies; xlight recounts each doc
    over the node's interval through the wavelet tree.
    """
    lo, hi = x.cand_off[node.rank - 1], x.cand_off[node.rank]
    docs = x.cand_docs[lo:hi]
    if x.cand_freqs is not None:
        return list(zip(docs, x.cand_freqs[lo:hi]))
    return [(doc, w.doc_freq(doc, node.sp, node.ep)) for doc in docs]


def _lcp_array(text, sa):
    """lcp[i] = longest common prefix of the suffixes at slots i-1 and i.

    1-based; entries 2..n are meaningful.  Kasai's construction, linear
    total work.
    """
    n = len(sa)
    lcp = np.zeros(n + 1, dtype=np.int64)
    if n < 2:
        return lcp
    pos = (np.asarray(sa, dtype=np.int64) - 1).tolist()  # 0-based starts
    inv = [0] * n
    for i, p in enumerate(pos):
        inv[p] = i
    h = 0
    for p in range(n):
        i = inv[p]
        if i > 0:
            q = pos[i - 1]
            while p + h < n and q + h < n and text[p + h] == text[q + h]:
                h += 1
            lcp[i + 1] = h  # slot i (0-based) vs predecessor -> 1-based i+1
            if h:
                h -= 1
        else:
            h = 0
    return lcp


class _RangeMin:
    """Sparse table of range minima over a fixed integer array."""

    def __init__(self, values):
        values = np.asarray(values, dtype=np.int64)
        self._rows = [values]
        span = 1
        while 2 * span <= len(values):
            prev = self._rows[-1]
            self._rows.append(np.minimum(prev[:len(prev) - span], prev[span:]))
            span *= 2

    def min(self, i, j):
        """Minimum of values[i..j], 0-based inclusive."""
        level = (j - i + 1).bit_length() - 1
        row = self._rows[level]
        return int(min(row[i], row[j - (1 << level) + 1]))


def _ancestor_interval(lcp, rmq, n, p, q):
    """Suffix-array interval of the lowest suffix-tree node spanning slots p..q.

    That node's interval is the maximal [L, R] containing [p, q] whose
    internal lcp values all reach h = min(lcp[p+1..q]); the boundaries are
    the nearest smaller lcp values, located by binary search over range
    minima.
    """
    h = rmq.min(p + 1 - 2, q - 2)
    if h == 0:
        return (1, n)
    # Largest t <= p with lcp[t] < h starts the interval.
    lo, hi, left = 2, p, None
    while lo <= hi:
        mid = (lo + hi) // 2
        if rmq.min(mid - 2, p - 2) < h:
            left = mid
            lo = mid + 1
        else:
            hi = mid - 1
    # Smallest t > q with lcp[t] < h ends it just before t.
    lo, hi, right = q + 1, n, None
    while lo <= hi:
        mid = (lo + hi) // 2
        if rmq.min(q + 1 - 2, mid - 2) < h:
            right = mid
            hi = mid - 1
        else:
            lo = mid + 1
    return (left or 1, n if right is None else right - 1)


def _containment_children(intervals):
    """Child lists of the containment tree of a laminar interval family."""
    order = sorted(intervals, key=lambda iv: (iv[0], -iv[1]))
    children = defaultdict(list)
    stack = []
    roots = []
    for iv in order:
        while stack and not (stack[-1][0] <= iv[0] and iv[1] <= stack[-1][1]):
            stack.pop()
        if stack:
            children[stack[-1]].append(iv)
        else:
            roots.append(iv)
        stack.append(iv)
    if len(roots) != 1:
        raise AssertionError(f"marked intervals split into {len(roots)} unrelated groups")
    children["__root__"] = roots
    return children


def _encode_forest(children, intervals, sample_step):
    root = children["__root__"][0]
    return LoudsTree.encode(root, children=lambda iv: children.get(iv, ()),
                            sample_step=sample_step)
