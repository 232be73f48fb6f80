# cython: language_level=3
"""Hot computational kernels, compiled implementation.

Behaviour-identical twin of _kernel_py (same conventions, same results bit
for bit); see that module for the data-layout contract. The speedup comes
from compiled loop bookkeeping; coefficients stay exact Python rationals.
"""

IMPL_NAME = "c"


def word_degree(word, degs):
    cdef long d = 0
    for g in word:
        d += <long> degs[g]
    return d


def cyclic_canonical(word, degs):
    """Canonical representative of a cyclic word with Koszul signs.

    Returns (canonical_word, sign); sign 0 means the necklace vanishes.
    """
    cdef Py_ssize_t k = len(word)
    cdef long total, dg, sign
    cdef Py_ssize_t i
    if k <= 1:
        return word, 1
    total = 0
    for g in word:
        total += <long> degs[g]
    seen = {word: 1}
    best = word
    w = word
    sign = 1
    for i in range(k - 1):
        g = w[0]
        dg = <long> degs[g]
        if (dg & 1) and ((total - dg) & 1):
            sign = -sign
        w = w[1:] + (g,)
        prev = seen.get(w)
        if prev is None:
            seen[w] = sign
            if w < best:
                best = w
        elif prev != sign:
            return best, 0
    return best, seen[best]


def cyclic_reduce(poly, degs):
    """Project an envelope polynomial to the span of canonical necklaces."""
    out = {}
    for w, c in poly.items():
        cw, s = cyclic_canonical(w, degs)
        if s == 0:
            continue
        acc = out.get(cw)
        acc = s * c if acc is None else acc + s * c
        if acc:
            out[cw] = acc
        elif cw in out:
            del out[cw]
    return out


def poly_add_scaled(dst, src, factor):
    """dst += factor * src, dropping cancelled words. Mutates and returns dst."""
    if not factor:
        return dst
    for w, c in src.items():
        acc = dst.get(w)
        acc = factor * c if acc is None else acc + factor * c
        if acc:
            dst[w] = acc
        elif w in dst:
            del dst[w]
    return dst


def poly_mul(p, q, nmax):
    """Concatenation product of envelope polynomials, truncated at nmax letters."""
    cdef Py_ssize_t room, cap = nmax
    out = {}
    for w1, c1 in p.items():
        room = cap - len(<tuple> w1)
        if room < 0:
            continue
        for w2, c2 in q.items():
            if len(<tuple> w2) > room:
                continue
            w = w1 + w2
            c = c1 * c2
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
    return out


def poly_bracket(p, q, degs, nmax):
    """Super bracket [p,q] = pq - (-1)**(|p||q|) qp, word by word."""
    cdef Py_ssize_t l1, cap = nmax
    cdef long d1
    cdef bint odd1
    out = {}
    for w1, c1 in p.items():
        l1 = len(<tuple> w1)
        d1 = word_degree(w1, degs)
        odd1 = d1 & 1
        for w2, c2 in q.items():
            if l1 + len(<tuple> w2) > cap:
                continue
            c = c1 * c2
            w = w1 + w2
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
            if odd1 and (<long> word_degree(w2, degs) & 1):
                cc = c
            else:
                cc = -c
            w = w2 + w1
            acc = out.get(w)
            acc = cc if acc is None else acc + cc
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
    return out


def derivation_apply(poly, images, degs, odd, nmax):
    """Apply a super-derivation given generator images (index -> polynomial).

    Generators absent from images map to zero; odd operators insert
    (-1)**(prefix degree) per the Leibniz rule.
    """
    cdef Py_ssize_t lw, pos, room, cap = nmax
    cdef long prefix_deg
    cdef bint is_odd = bool(odd)
    out = {}
    for w, c in poly.items():
        lw = len(<tuple> w)
        prefix_deg = 0
        for pos in range(lw):
            g = w[pos]
            img = images.get(g)
            if img:
                head = w[:pos]
                tail = w[pos + 1:]
                if is_odd and (prefix_deg & 1):
                    base = -c
                else:
                    base = c
                room = cap - (lw - 1)
                for iw, ic in img.items():
                    if len(<tuple> iw) > room:
                        continue
                    nw = head + iw + tail
                    cc = base * ic
                    acc = out.get(nw)
                    acc = cc if acc is None else acc + cc
                    if acc:
                        out[nw] = acc
                    elif nw in out:
                        del out[nw]
            prefix_deg += <long> degs[g]
    return out


def hom_apply(poly, images, nmax):
    """Apply the algebra map sending generator i to images[i] (a polynomial).

    Every generator occurring in poly must have an image; partial products
    are pruned by the minimum letters each remaining position contributes.
    """
    cdef Py_ssize_t lw, i, m, bound, room, cap = nmax
    min_len = {}
    out = {}
    for w, c in poly.items():
        lw = len(<tuple> w)
        if lw == 0:
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
            continue
        suffix_min = [0] * (lw + 1)
        for i in range(lw - 1, -1, -1):
            g = w[i]
            cached = min_len.get(g)
            if cached is None:
                img = images[g]
                if img:
                    m = min(len(<tuple> iw) for iw in img)
                else:
                    m = cap + 1  # zero image: kills the word
                min_len[g] = m
            else:
                m = cached
            suffix_min[i] = <Py_ssize_t> suffix_min[i + 1] + m
        if <Py_ssize_t> suffix_min[0] > cap:
            continue
        partial = {(): c}
        for i in range(lw):
            img = images[w[i]]
            bound = cap - <Py_ssize_t> suffix_min[i + 1]
            nxt = {}
            for pw, pc in partial.items():
                room = bound - len(<tuple> pw)
                if room < 0:
                    continue
                for iw, ic in img.items():
                    if len(<tuple> iw) > room:
                        continue
                    nw = pw + iw
                    cc = pc * ic
                    acc = nxt.get(nw)
                    acc = cc if acc is None else acc + cc
                    if acc:
                        nxt[nw] = acc
                    elif nw in nxt:
                        del nxt[nw]
            partial = nxt
            if not partial:
                break
        for nw, cc in partial.items():
            acc = out.get(nw)
            acc = cc if acc is None else acc + cc
            if acc:
                out[nw] = acc
            elif nw in out:
                del out[nw]
    return out


def column_echelon(columns):
    """Greedy left-to-right echelon over sparse columns (dict row -> value).

    Same contract and pivot rule as the pure-Python twin: returns
    (pivot_rows, reduced, exprs) with -1 marking dependent columns.
    """
    cdef Py_ssize_t j = 0
    pivots = []  # list of (pivot_row, column, expr)
    pivot_rows = []
    reduced = []
    exprs = []
    for col in columns:
        cur = dict(col)
        expr = {j: 1}
        for prow, pcol, pexpr in pivots:
            f = cur.get(prow)
            if f:
                poly_add_scaled(cur, pcol, -f)
                poly_add_scaled(expr, pexpr, -f)
        if cur:
            prow = min(cur)
            piv = cur[prow]
            if piv != 1:
                inv = 1 / piv
                cur = {r: v * inv for r, v in cur.items()}
                expr = {r: v * inv for r, v in expr.items()}
            pivots.append((prow, cur, expr))
            pivot_rows.append(prow)
        else:
            pivot_rows.append(-1)
        reduced.append(cur)
        exprs.append(expr)
        j += 1
    return pivot_rows, reduced, exprs
