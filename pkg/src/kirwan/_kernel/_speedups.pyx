# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled reduction kernel, a line-for-line mirror of pure.py.

Same contracts: KP = (lt_key, lt_mono, lt_coef, tail), zero = None,
integer-primitive with positive head; kp_normal_form returns (num, den,
terms) with value = (num/den) * terms.  Exponent and key arithmetic runs in
machine integers (cohomological exponents are tiny; a genuinely huge one
raises OverflowError on conversion rather than wrapping); coefficients stay
Python ints, so there is no precision ceiling where it matters.
"""

from fractions import Fraction
from math import gcd


def key_of(spec, mono):
    cdef Py_ssize_t i, n, front
    cdef long long s, s1, s2
    tag = spec[0]
    n = len(mono)
    if tag == "grevlex":
        w = spec[1]
        s = 0
        for i in range(n):
            s += <long long> mono[i] * <long long> w[i]
        rev = [0] * n
        for i in range(n):
            rev[i] = -<long long> mono[n - 1 - i]
        return (s,) + tuple(rev)
    if tag == "lex":
        return tuple(mono)
    front = spec[1]
    w = spec[2]
    s1 = 0
    for i in range(front):
        s1 += <long long> mono[i] * <long long> w[i]
    s2 = 0
    for i in range(front, n):
        s2 += <long long> mono[i] * <long long> w[i]
    head = [0] * front
    for i in range(front):
        head[i] = -<long long> mono[front - 1 - i]
    back = [0] * (n - front)
    for i in range(n - front):
        back[i] = -<long long> mono[n - 1 - i]
    return (s1,) + tuple(head) + (s2,) + tuple(back)


cdef bint _divides(tuple a, tuple b):
    cdef Py_ssize_t i
    for i in range(len(a)):
        if a[i] > b[i]:
            return False
    return True


cdef object _kp_from_sorted(list terms):
    if not terms:
        return None
    g = 0
    for t in terms:
        g = gcd(g, t[2])
    if terms[0][2] < 0:
        g = -g
    if g != 1:
        terms = [(t[0], t[1], t[2] // g) for t in terms]
    head = terms[0]
    return (head[0], head[1], head[2], tuple(terms[1:]))


def kp_make(iterms, spec):
    """Build a KP from (mono, int) pairs in any order; None if zero."""
    cdef dict acc = {}
    for m, c in iterms:
        c0 = acc.get(m, 0) + c
        if c0:
            acc[m] = c0
        elif m in acc:
            del acc[m]
    cdef list terms = [(key_of(spec, m), m, c) for m, c in acc.items()]
    terms.sort(reverse=True)
    return _kp_from_sorted(terms)


def kp_iterms(kp):
    if kp is None:
        return []
    return [(kp[1], kp[2])] + [(m, c) for _, m, c in kp[3]]


def kp_lt(kp):
    return kp[1], kp[2]


cdef list _merge(list a, list b):
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, na = len(a), nb = len(b)
    cdef tuple ta, tb
    while i < na and j < nb:
        ta = <tuple> a[i]
        tb = <tuple> b[j]
        ka = ta[0]
        kb = tb[0]
        if ka > kb:
            out.append(ta)
            i += 1
        elif kb > ka:
            out.append(tb)
            j += 1
        else:
            c = ta[2] + tb[2]
            if c:
                out.append((ka, ta[1], c))
            i += 1
            j += 1
    if i < na:
        out.extend(a[i:])
    if j < nb:
        out.extend(b[j:])
    return out


cdef tuple _tadd(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = a[i] + b[i]
    return tuple(out)


cdef tuple _tsub(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = a[i] - b[i]
    return tuple(out)


def kp_spoly(f, g, spec):
    """S-polynomial of two KPs, primitive; None when it cancels outright."""
    cdef Py_ssize_t i, n
    fk, fm, fc, ftail = f
    gk, gm, gc, gtail = g
    n = len(fm)
    cdef list lc = [0] * n
    for i in range(n):
        lc[i] = fm[i] if fm[i] >= gm[i] else gm[i]
    lcm = tuple(lc)
    lk = key_of(spec, lcm)
    d = gcd(fc, gc)
    cf = fc // d
    cg = gc // d
    qfk = _tsub(lk, fk)
    qfm = _tsub(lcm, fm)
    qgk = _tsub(lk, gk)
    qgm = _tsub(lcm, gm)
    cdef list a = [(_tadd(k, qfk), _tadd(m, qfm), c * cg) for k, m, c in ftail]
    cdef list b = [(_tadd(k, qgk), _tadd(m, qgm), -c * cf) for k, m, c in gtail]
    return _kp_from_sorted(_merge(a, b))


def kp_normal_form(target, reducers, spec):
    """Exact normal form of a KP modulo a list of KPs.

    Identical reduction strategy and return convention as the pure kernel:
    first dividing reducer in list order, pseudo-steps tracked in (sn, sd),
    result (num, den, terms) with num, den > 0 coprime.
    """
    cdef Py_ssize_t idx
    cdef tuple rm
    if target is None:
        return 1, 1, []
    cdef list work = [(target[0], target[1], target[2])]
    work.extend(target[3])
    sn = 1
    sd = 1
    cdef list out = []
    idx = 0
    while idx < len(work):
        k0, m0, c0 = work[idx]
        red = None
        for r in reducers:
            if r is not None and _divides(<tuple> (<tuple> r)[1], <tuple> m0):
                red = r
                break
        if red is None:
            out.append((m0, Fraction(c0 * sn, sd)))
            idx += 1
            continue
        rk, rm, rc, rtail = red
        qk = _tsub(k0, rk)
        qm = _tsub(m0, rm)
        rest = work[idx + 1:]
        if rc != 1:
            rest = [(k, m, c * rc) for k, m, c in rest]
            sd = sd * rc
        shifted = [(_tadd(k, qk), _tadd(m, qm), -c0 * c) for k, m, c in rtail]
        work = _merge(rest, shifted)
        idx = 0
        if work:
            g = 0
            for t in work:
                g = gcd(g, t[2])
            if g > 1:
                work = [(k, m, c // g) for k, m, c in work]
                sn = sn * g
        g2 = gcd(sn, sd)
        if g2 > 1:
            sn //= g2
            sd //= g2
    if not out:
        return 1, 1, []
    den = 1
    for t in out:
        d0 = t[1].denominator
        den = den * d0 // gcd(den, d0)
    cdef list ints = [int(t[1] * den) for t in out]
    num = 0
    for v in ints:
        num = gcd(num, v)
    cdef list terms = []
    for t, v in zip(out, ints):
        terms.append((t[0], v // num))
    g3 = gcd(num, den)
    return num // g3, den // g3, terms
