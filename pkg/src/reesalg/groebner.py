"""Buchberger's algorithm for ideals and submodules of free modules.

Internally a vector is a dict ``{(pos, exp): coeff}``; an ideal element is a
vector supported in position 0.  Module orders:

``top``    term over position,
``pot``    position over term,
``block``  positions ``< split`` dominate all others (module elimination),
           term-over-position inside each block.

Everything returned is a *reduced* basis: monic, interreduced, sorted by
leading term (largest first).
"""
from __future__ import annotations

import heapq
from functools import lru_cache
from math import gcd, isqrt
from operator import le

from gmpy2 import mpq, next_prime

from .poly import DEGREVLEX, Poly, block_order

__all__ = [
    "ModuleOrder",
    "groebner_vectors",
    "reduce_vector",
    "buchberger",
    "normal_form",
    "eliminate",
    "is_groebner",
    "syzygies",
    "lift",
    "in_span",
    "span_basis",
    "standard_monomials",
]


class ModuleOrder:
    __slots__ = ("order", "kind", "split", "_cache")

    def __init__(self, order=DEGREVLEX, kind="top", split=0):
        self.order = order
        self.kind = kind
        self.split = split
        self._cache = {}

    def key(self, t):
        k = self._cache.get(t)
        if k is None:
            pos, e = t
            ok = self.order.key(e)
            if self.kind == "top":
                k = ok + (pos,)
            elif self.kind == "pot":
                k = (pos,) + ok
            else:
                k = (0 if pos < self.split else 1,) + ok + (pos,)
            self._cache[t] = k
        return k


_IDEAL_ORDERS = {}


def _ideal_morder(order):
    mo = _IDEAL_ORDERS.get(order)
    if mo is None:
        mo = _IDEAL_ORDERS[order] = ModuleOrder(order, "top")
    return mo


def _divides(a, b):
    return all(map(le, a, b))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _monic(v, key, p):
    t = min(v, key=key)
    c = v[t]
    if (p and c == 1) or (not p and c == 1):
        return v
    inv = pow(c, -1, p) if p else 1 / c
    if p:
        return {u: (a * inv) % p for u, a in v.items()}
    return {u: a * inv for u, a in v.items()}


class _Reducer:
    """Leading-term lookup table over a list of monic vectors."""

    def __init__(self, key):
        self.key = key
        self.by_pos = {}

    def add(self, t, vec):
        self.by_pos.setdefault(t[0], []).append((t[1], vec))

    def find(self, t):
        cands = self.by_pos.get(t[0])
        if cands:
            e = t[1]
            for le_, vec in cands:
                if _divides(le_, e):
                    return le_, vec
        return None


def _reduce(f, reducer, key, p, full=True):
    """Reduce vector ``f`` (a dict, consumed) by the monic vectors in ``reducer``.

    With ``full=False`` only the leading term is reduced repeatedly (top
    reduction); the returned vector then has an irreducible leading term.
    """
    heap = [(key(t), t) for t in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = f.get(t)
        if c is None:
            continue
        hit = reducer.find(t)
        del f[t]
        if hit is None:
            rem[t] = c
            if not full:
                rem.update(f)
                return rem
            continue
        le_, vec = hit
        shift = tuple(a - b for a, b in zip(t[1], le_))
        lead_t = (t[0], le_)
        for (pos, e), cg in vec.items():
            if pos == t[0] and e == le_:
                continue
            nt = (pos, tuple(a + b for a, b in zip(e, shift)))
            v = f.get(nt)
            d = c * cg
            if v is None:
                v = (-d) % p if p else -d
                if v:
                    f[nt] = v
                    heapq.heappush(heap, (key(nt), nt))
            else:
                v = (v - d) % p if p else v - d
                if v:
                    f[nt] = v
                else:
                    del f[nt]
        del lead_t
    return rem


def _s_vector(f, ef, g, eg, l, p):
    """S-vector of two monic vectors with leading exponents ef, eg and lcm l."""
    out = {}
    for vec, lead, sign in ((f, ef, 1), (g, eg, -1)):
        shift = tuple(a - b for a, b in zip(l, lead))
        for (q, e), c in vec.items():
            t = (q, tuple(a + b for a, b in zip(e, shift)))
            c = c if sign > 0 else (-c) % p if p else -c
            v = out.get(t)
            if v is None:
                out[t] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[t] = v
                else:
                    del out[t]
    return out


def _sugar(v):
    return max(sum(e) for (_, e) in v)


def groebner_vectors(vectors, morder, p, ideal_mode=False):
    """Reduced Groebner basis (list of monic dict-vectors) of the span of ``vectors``."""
    key = morder.key
    polys = []
    leads = []
    sugars = []
    active = []
    pairs = []
    reducer = _Reducer(key)

    def rebuild_reducer():
        r = _Reducer(key)
        for i in active:
            r.add(leads[i], polys[i])
        return r

    def update(h):
        nonlocal pairs, active
        pos_h, eh = leads[h]
        cand = []
        for g in active:
            pg, eg = leads[g]
            if pg == pos_h:
                cand.append((g, _lcm(eh, eg)))
        kept = []
        while cand:
            g1, l1 = cand.pop()
            coprime = ideal_mode and all(a == 0 or b == 0 for a, b in zip(eh, leads[g1][1]))
            if coprime or not any(_divides(l2, l1) for _, l2 in cand) and not any(
                _divides(l2, l1) for _, l2 in kept
            ):
                kept.append((g1, l1))
        new_pairs = []
        for i, j, lij, s in pairs:
            if leads[i][0] == pos_h and _divides(eh, lij):
                if _lcm(leads[i][1], eh) != lij and _lcm(leads[j][1], eh) != lij:
                    continue
            new_pairs.append((i, j, lij, s))
        for g, l in kept:
            if ideal_mode and all(a == 0 or b == 0 for a, b in zip(eh, leads[g][1])):
                continue
            dl = sum(l)
            s = max(sugars[g] + dl - sum(leads[g][1]), sugars[h] + dl - sum(eh))
            new_pairs.append((g, h, l, s))
        pairs = new_pairs
        active = [g for g in active if not (leads[g][0] == pos_h and _divides(eh, leads[g][1]))]
        active.append(h)

    def add(v, s):
        v = _monic(v, key, p)
        polys.append(v)
        leads.append(min(v, key=key))
        sugars.append(s)
        update(len(polys) - 1)

    inputs = [dict(v) for v in vectors if v]
    inputs.sort(key=lambda v: (_sugar(v), key(min(v, key=key))))
    for v in inputs:
        reducer = rebuild_reducer()
        s = _sugar(v)
        r = _reduce(v, reducer, key, p, full=False)
        if r:
            add(r, s)
    reducer = rebuild_reducer()
    while pairs:
        # lowest sugar first, then the smallest lcm (keys sort leading terms first)
        low = min(pr[3] for pr in pairs)
        best = max((k for k in range(len(pairs)) if pairs[k][3] == low), key=lambda k: key((leads[pairs[k][0]][0], pairs[k][2])))
        i, j, l, s = pairs.pop(best)
        spoly = _s_vector(polys[i], leads[i][1], polys[j], leads[j][1], l, p)
        if not spoly:
            continue
        r = _reduce(spoly, reducer, key, p, full=False)
        if r:
            add(r, s)
            reducer = rebuild_reducer()

    basis = [polys[i] for i in active]
    final = []
    for idx, v in enumerate(basis):
        others = _Reducer(key)
        for jdx, w in enumerate(basis):
            if jdx != idx:
                others.add(min(w, key=key), w)
        t = min(v, key=key)
        tail = {u: c for u, c in v.items() if u != t}
        red = _reduce(tail, others, key, p, full=True)
        red[t] = v[t]
        final.append(red)
    final.sort(key=lambda v: key(min(v, key=key)))
    return final


def reduce_vector(v, basis, morder, p):
    """Fully reduce ``v`` modulo a Groebner basis (list of monic vectors)."""
    r = _Reducer(morder.key)
    for g in basis:
        r.add(min(g, key=morder.key), g)
    return _reduce(dict(v), r, morder.key, p, full=True)


# -- ideal interface ---------------------------------------------------------


def _to_vec(poly):
    return {(0, e): c for e, c in poly.terms.items()}


def _from_vec(ring, vec):
    return Poly(ring, {e: c for (_, e), c in vec.items()})


def _check_rings(polys):
    rings = {q.ring for q in polys}
    if len(rings) > 1:
        raise ValueError(f"polynomials from different rings: {sorted(map(repr, rings))}")
    return rings.pop() if rings else None


def buchberger(gens, order=DEGREVLEX):
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    ring = _check_rings(gens)
    if ring is None:
        return []
    return _buchberger_cached(ring, frozenset(g for g in gens if g), order)


@lru_cache(maxsize=8192)
def _buchberger_cached(ring, gens, order):
    gens = sorted(gens, key=lambda g: (g.degree(), sorted(g.terms.items(), key=lambda t: order.key(t[0]))[0][0]))
    vecs = groebner_vectors([_to_vec(g) for g in gens], _ideal_morder(order), ring.field.p, ideal_mode=True)
    return tuple(_from_vec(ring, v) for v in vecs)


def normal_form(p, basis, order=DEGREVLEX):
    """Fully reduced remainder of ``p`` modulo the Groebner basis ``basis``."""
    if basis and basis[0].ring != p.ring:
        raise ValueError(f"ring mismatch: {p.ring!r} vs {basis[0].ring!r}")
    if not p or not basis:
        return p
    mo = _ideal_morder(order)
    return _from_vec(p.ring, reduce_vector(_to_vec(p), [_to_vec(g) for g in basis], mo, p.ring.field.p))


def is_groebner(basis, order=DEGREVLEX):
    """Check Buchberger's criterion: every S-polynomial reduces to zero."""
    basis = [g for g in basis if g]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            ei, ci = basis[i].lead(order)
            ej, cj = basis[j].lead(order)
            l = _lcm(ei, ej)
            ring = basis[i].ring
            si = ring.monomial(tuple(a - b for a, b in zip(l, ei)), ring.field.inv(ci))
            sj = ring.monomial(tuple(a - b for a, b in zip(l, ej)), ring.field.inv(cj))
            if normal_form(si * basis[i] - sj * basis[j], basis, order):
                return False
    return True


def eliminate(gens, drop):
    """Reduced Groebner basis of ``<gens>`` intersected with k[remaining variables].

    ``drop`` lists variable names or indices; the result lives in the same
    ring and is reduced with respect to degrevlex on the remaining variables.
    """
    ring = _check_rings(gens)
    if ring is None:
        return []
    drop_idx = sorted({ring.index(d) if isinstance(d, str) else d for d in drop})
    if not drop_idx:
        return list(buchberger(gens))
    keep_idx = [i for i in range(ring.nvars) if i not in drop_idx]
    perm = drop_idx + keep_idx
    from .poly import PolyRing

    tmp = PolyRing(ring.field, [ring.names[i] for i in perm])
    fwd = {old: new for new, old in enumerate(perm)}
    moved = [g.change_ring(tmp, fwd) for g in gens]
    gb = buchberger(moved, block_order(len(drop_idx)))
    back = {new: old for new, old in enumerate(perm)}
    out = [g.change_ring(ring, back) for g in gb if all(not any(e[: len(drop_idx)]) for e in g.terms)]
    out.sort(key=lambda g: DEGREVLEX.key(g.lead(DEGREVLEX)[0]))
    return [g.monic(DEGREVLEX) for g in out]


# -- module interface over a quotient ring ------------------------------------
#
# ``ring`` is any object with ``poly_ring`` (a PolyRing), ``ideal`` (tuple of
# Polys, a Groebner basis of the defining ideal) and ``reduce(poly)``.
# Matrices are tuples of rows of Polys.


def _columns_to_vectors(rows, ncols, offset=0):
    vecs = []
    for j in range(ncols):
        v = {}
        for i, row in enumerate(rows):
            for e, c in row[j].terms.items():
                v[(i + offset, e)] = c
        vecs.append(v)
    return vecs


def _ideal_padding(ring, positions):
    out = []
    for i in positions:
        for q in ring.ideal:
            out.append({(i, e): c for e, c in q.terms.items()})
    return out


@lru_cache(maxsize=4096)
def _augmented_gb(ring, rows, ncols):
    r = len(rows)
    n = ring.poly_ring.nvars
    zero = (0,) * n
    one = ring.poly_ring.field.one
    vecs = _columns_to_vectors(rows, ncols)
    for j, v in enumerate(vecs):
        v[(r + j, zero)] = one
    vecs += _ideal_padding(ring, range(r + ncols))
    mo = ModuleOrder(DEGREVLEX, "block", r)
    p = ring.poly_ring.field.p
    if p:
        return mo, groebner_vectors(vecs, mo, p)
    gb = _modular_gb(ring, rows, ncols, vecs, mo)
    return mo, gb if gb is not None else groebner_vectors(vecs, mo, 0)


# -- multi-modular path for rational coefficients ------------------------------
#
# Over QQ the cofactor-tracking bases suffer badly from coefficient growth.
# The reduced basis is computed modulo several large primes, lifted by CRT and
# rational reconstruction, and accepted only after an exact check over QQ.

_PRIMES = []


def _prime(i):
    while len(_PRIMES) <= i:
        _PRIMES.append(int(next_prime(_PRIMES[-1] if _PRIMES else (1 << 61) - (1 << 40))))
    return _PRIMES[i]


def _rat_recon(a, m):
    bound = isqrt(m // 2)
    r0, r1, t0, t1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, t1) != 1:
        return None
    return mpq(r1, t1)


def _mod_vectors(vecs, q):
    out = []
    for v in vecs:
        w = {}
        for t, c in v.items():
            den = int(c.denominator)
            if den % q == 0:
                return None
            c = int(c.numerator) * pow(den, -1, q) % q
            if c:
                w[t] = c
        out.append(w)
    return out


def _lift_rational(ring, rows, ncols, vecs, mo, gb):
    key = mo.key
    r = len(rows)
    reducer = _Reducer(key)
    leads = [min(g, key=key) for g in gb]
    for t, g in zip(leads, gb):
        reducer.add(t, g)
    # reduced: no lead or tail term is divisible by another lead
    for i, g in enumerate(gb):
        for t in g:
            hit = reducer.find(t)
            if hit is not None and not (t == leads[i] and hit[1] is g):
                return False
    for v in vecs:
        if _reduce(dict(v), reducer, key, 0, full=False):
            return False
    for i in range(len(gb)):
        for j in range(i):
            if leads[i][0] != leads[j][0]:
                continue
            ei, ej = leads[i][1], leads[j][1]
            sv = _s_vector(gb[i], ei, gb[j], ej, _lcm(ei, ej), 0)
            if sv and _reduce(sv, reducer, key, 0, full=False):
                return False
    # membership: the first r entries must equal rows times the cofactors, modulo the ring ideal
    pr = ring.poly_ring
    for g in gb:
        a = [dict() for _ in range(r)]
        b = [dict() for _ in range(ncols)]
        for (pos, e), c in g.items():
            (a[pos] if pos < r else b[pos - r])[e] = c
        for i in range(r):
            acc = Poly(pr, a[i])
            for j in range(ncols):
                if b[j]:
                    acc = acc - rows[i][j] * Poly(pr, b[j])
            if ring.reduce(acc):
                return False
    return True


def _modular_gb(ring, rows, ncols, vecs, mo, max_primes=48):
    key = mo.key
    groups = {}
    prev = None
    for i in range(max_primes):
        q = _prime(i)
        vq = _mod_vectors(vecs, q)
        if vq is None:
            continue
        gb = groebner_vectors(vq, mo, q)
        sig = tuple((min(g, key=key), tuple(sorted(g, key=key))) for g in gb)
        entry = groups.get(sig)
        if entry is None:
            groups[sig] = entry = [q, [dict(g) for g in gb]]
        else:
            m, acc = entry
            inv = pow(m, -1, q)
            for g_acc, g in zip(acc, gb):
                for t, a in g_acc.items():
                    g_acc[t] = a + m * ((g[t] - a) * inv % q)
            entry[0] = m * q
        if max(groups.values(), key=lambda e: e[0]) is not entry:
            continue
        m, acc = entry
        cand = []
        for g_acc in acc:
            w = {}
            for t, a in g_acc.items():
                c = _rat_recon(a, m)
                if c is None:
                    break
                if c:
                    w[t] = c
            else:
                cand.append(w)
                continue
            break
        else:
            if cand == prev and _lift_rational(ring, rows, ncols, vecs, mo, cand):
                cand.sort(key=lambda v: key(min(v, key=key)))
                return cand
            prev = cand
            continue
        prev = None
    return None


@lru_cache(maxsize=4096)
def span_basis(ring, rows, ncols):
    """Groebner basis of the column span of ``rows`` plus I times the ambient free module."""
    r = len(rows)
    vecs = _columns_to_vectors(rows, ncols) + _ideal_padding(ring, range(r))
    mo = ModuleOrder(DEGREVLEX, "top")
    return mo, groebner_vectors(vecs, mo, ring.poly_ring.field.p)


def _vec_to_column(ring, vec, length, offset=0):
    pr = ring.poly_ring
    col = [dict() for _ in range(length)]
    for (pos, e), c in vec.items():
        col[pos - offset][e] = c
    return tuple(ring.reduce(Poly(pr, d)) for d in col)


def syzygies(ring, rows, ncols):
    """Generators (as columns) of the kernel of the matrix ``rows`` acting on A^ncols.

    Returns a tuple of columns, each a tuple of ``ncols`` reduced Polys.
    """
    if ncols == 0:
        return ()
    if not rows:
        return tuple(
            tuple(ring.poly_ring.one if i == j else ring.poly_ring.zero for i in range(ncols))
            for j in range(ncols)
        )
    r = len(rows)
    mo, gb = _augmented_gb(ring, rows, ncols)
    out = []
    seen = set()
    for g in gb:
        t = min(g, key=mo.key)
        if t[0] < r:
            continue
        col = _vec_to_column(ring, g, ncols, offset=r)
        if any(col) and col not in seen:
            seen.add(col)
            out.append(col)
    return tuple(out)


def lift(ring, rows, ncols, b):
    """Coefficients c with ``rows @ c == b`` in A^r, or None when b is not in the column span."""
    r = len(rows)
    if r == 0:
        return tuple(ring.poly_ring.zero for _ in range(ncols))
    if ncols == 0:
        return () if not any(b) else None
    mo, gb = _augmented_gb(ring, rows, ncols)
    v = {}
    for i, q in enumerate(b):
        for e, c in q.terms.items():
            v[(i, e)] = c
    rem = reduce_vector(v, gb, mo, ring.poly_ring.field.p)
    if any(pos < r for (pos, _) in rem):
        return None
    p = ring.poly_ring.field.p
    neg = {t: ((-c) % p if p else -c) for t, c in rem.items()}
    return _vec_to_column(ring, neg, ncols, offset=r)


def in_span(ring, rows, ncols, b):
    """Membership of the column ``b`` in the column span of ``rows`` (over A)."""
    if not any(b):
        return True
    if ncols == 0 and not ring.ideal:
        return False
    mo, gb = span_basis(ring, rows, ncols)
    v = {}
    for i, q in enumerate(b):
        for e, c in q.terms.items():
            v[(i, e)] = c
    return not reduce_vector(v, gb, mo, ring.poly_ring.field.p)


def standard_monomials(ring, rows, ncols, limit=100000):
    """List of standard (position, exponent) pairs of A^r / span, or None if infinite."""
    r = len(rows)
    n = ring.poly_ring.nvars
    mo, gb = span_basis(ring, rows, ncols)
    leads = {}
    for g in gb:
        pos, e = min(g, key=mo.key)
        leads.setdefault(pos, []).append(e)
    out = []
    for pos in range(r):
        ls = leads.get(pos, [])
        if any(not any(e) for e in ls):
            continue
        bounds = []
        for i in range(n):
            pure = [e[i] for e in ls if e[i] and all(e[k] == 0 for k in range(n) if k != i)]
            if not pure:
                return None
            bounds.append(min(pure))
        stack = [(0,) * n]
        seen = {stack[0]}
        while stack:
            e = stack.pop()
            out.append((pos, e))
            if len(out) > limit:
                raise RuntimeError("too many standard monomials")
            for i in range(n):
                f = e[:i] + (e[i] + 1,) + e[i + 1:]
                if f[i] >= bounds[i] or f in seen:
                    continue
                if any(_divides(l, f) for l in ls):
                    continue
                seen.add(f)
                stack.append(f)
    out.sort(key=mo.key)
    return out
