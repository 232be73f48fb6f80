"""Hot computational kernels, pure-Python implementation.

The compiled twin (_kernel_c.pyx) must stay behaviour-identical; both are
driven through _kernels.py, exercised by the same tests and compared by
benchmarks/bench_kernels.py.

Conventions shared by both implementations:
  * a word is a tuple of generator indices (ints); the empty tuple is the
    envelope unit,
  * a polynomial is a dict mapping words to nonzero exact rationals,
  * degs is a tuple giving the Koszul degree of each generator index,
  * nmax truncates by letter count (len of the word).

Koszul sign rules: transposing homogeneous blocks of degrees p, q costs
(-1)**(p*q); an odd operator passing a prefix of degree p costs (-1)**p.
"""

IMPL_NAME = "python"


def word_degree(word, degs):
    d = 0
    for g in word:
        d += degs[g]
    return d


def cyclic_canonical(word, degs):
    """Canonical representative of a cyclic word with Koszul signs.

    Returns (canonical_word, sign). Moving the first letter g to the end
    multiplies the class by (-1)**(|g| * (total - |g|)). The canonical
    representative is the lexicographically smallest rotation; sign 0 means
    the necklace vanishes because some rotation reproduces the same word
    with opposite sign.
    """
    k = len(word)
    if k <= 1:
        return word, 1
    total = 0
    for g in word:
        total += degs[g]
    seen = {word: 1}
    best = word
    w = word
    sign = 1
    for _ in range(k - 1):
        g = w[0]
        dg = degs[g]
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
    out = {}
    for w1, c1 in p.items():
        room = nmax - len(w1)
        if room < 0:
            continue
        for w2, c2 in q.items():
            if len(w2) > room:
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
    """Super bracket [p,q] = pq - (-1)**(|p||q|) qp, word by word.

    Words are Koszul-homogeneous, so the bilinear extension over the
    envelope expansions applies the sign per word pair.
    """
    out = {}
    for w1, c1 in p.items():
        l1 = len(w1)
        d1 = word_degree(w1, degs)
        for w2, c2 in q.items():
            if l1 + len(w2) > nmax:
                continue
            c = c1 * c2
            w = w1 + w2
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
            if (d1 & 1) and (word_degree(w2, degs) & 1):
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

    Generators absent from images map to zero. For an odd operator the
    Leibniz rule inserts (-1)**(degree of the prefix) at each position;
    even operators insert no signs.
    """
    out = {}
    for w, c in poly.items():
        lw = len(w)
        prefix_deg = 0
        for pos in range(lw):
            g = w[pos]
            img = images.get(g)
            if img:
                head = w[:pos]
                tail = w[pos + 1 :]
                if odd and (prefix_deg & 1):
                    base = -c
                else:
                    base = c
                room = nmax - (lw - 1)
                for iw, ic in img.items():
                    if len(iw) > room:
                        continue
                    nw = head + iw + tail
                    cc = base * ic
                    acc = out.get(nw)
                    acc = cc if acc is None else acc + cc
                    if acc:
                        out[nw] = acc
                    elif nw in out:
                        del out[nw]
            prefix_deg += degs[g]
    return out


def hom_apply(poly, images, nmax):
    """Apply the algebra map sending generator i to images[i] (a polynomial).

    Every generator occurring in poly must have an image. Images must be
    Koszul-degree preserving for the result to make sense downstream; that
    is the caller's contract. Partial products are pruned using the minimum
    letter count contributed by each remaining position.
    """
    min_len = {}
    out = {}
    for w, c in poly.items():
        lw = len(w)
        if lw == 0:
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc:
                out[w] = acc
            elif w in out:
                del out[w]
            continue
        # Minimal letters the suffix starting at position i will contribute.
        suffix_min = [0] * (lw + 1)
        for i in range(lw - 1, -1, -1):
            g = w[i]
            m = min_len.get(g)
            if m is None:
                img = images[g]
                if img:
                    m = min(len(iw) for iw in img)
                else:
                    m = nmax + 1  # zero image: kills the word
                min_len[g] = m
            suffix_min[i] = suffix_min[i + 1] + m
        if suffix_min[0] > nmax:
            continue
        partial = {(): c}
        for i in range(lw):
            img = images[w[i]]
            bound = nmax - suffix_min[i + 1]
            nxt = {}
            for pw, pc in partial.items():
                room = bound - len(pw)
                if room < 0:
                    continue
                for iw, ic in img.items():
                    if len(iw) > room:
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

    Returns (pivot_rows, reduced, exprs):
      * pivot_rows[j] is the pivot row of the j-th accepted column, or the
        sentinel -1 when column j reduced to zero,
      * reduced[j] is column j after full reduction against the pivots
        accepted so far (pivot entry normalized to 1; zero dict if
        dependent),
      * exprs[j] expresses reduced[j] over the original columns
        (dict original-column-index -> coefficient, including j itself).

    Pivot rule: columns are processed in the given (ascending) order; the
    pivot of an independent column is its first nonzero row. Combined with
    ascending row indices this realizes the deterministic first-nonzero
    row-major pivot rule.
    """
    pivots = []  # list of (pivot_row, column, expr)
    pivot_rows = []
    reduced = []
    exprs = []
    for j, col in enumerate(columns):
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
    return pivot_rows, reduced, exprs
