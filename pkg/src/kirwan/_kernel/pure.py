"""Pure-Python reduction kernel.

The compiled kernel (when built) exports the same five functions with
identical semantics; parity is enforced by tests.  Everything here works on
integer-primitive data so all arithmetic is exact machine-to-bignum int:

  kernel polynomial (KP): (lt_key, lt_mono, lt_coef, tail)
    tail: tuple of (key, mono, coef), strictly descending by key
    coefficients: Python ints, gcd 1 over the whole polynomial, lt_coef > 0
  the zero polynomial is None

  order spec: ("grevlex", weights) | ("lex", nvars) | ("block", front, weights)

Pseudo-reduction tracks the scale it introduces, so kp_normal_form returns
the exact normal form as (num, den, terms) with value = (num/den) * terms.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def key_of(spec, mono):
    tag = spec[0]
    if tag == "grevlex":
        w = spec[1]
        s = 0
        for e, wi in zip(mono, w):
            s += e * wi
        return (s,) + tuple(-e for e in reversed(mono))
    if tag == "lex":
        return tuple(mono)
    front, w = spec[1], spec[2]
    s1 = 0
    for i in range(front):
        s1 += mono[i] * w[i]
    s2 = 0
    for i in range(front, len(mono)):
        s2 += mono[i] * w[i]
    back = (
        (s2,) + tuple(-mono[i] for i in range(len(mono) - 1, front - 1, -1))
    )
    return (s1,) + tuple(-mono[i] for i in range(front - 1, -1, -1)) + back


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _kp_from_sorted(terms):
    """Normalize a descending (key, mono, coef) list into a KP."""
    if not terms:
        return None
    g = 0
    for _, _, c in terms:
        g = gcd(g, c)
    if terms[0][2] < 0:
        g = -g
    if g != 1:
        terms = [(k, m, c // g) for k, m, c in terms]
    head = terms[0]
    return (head[0], head[1], head[2], tuple(terms[1:]))


def kp_make(iterms, spec):
    """Build a KP from (mono, int) pairs in any order; None if zero."""
    acc = {}
    for m, c in iterms:
        c0 = acc.get(m, 0) + c
        if c0:
            acc[m] = c0
        elif m in acc:
            del acc[m]
    terms = [(key_of(spec, m), m, c) for m, c in acc.items()]
    terms.sort(reverse=True)
    return _kp_from_sorted(terms)


def kp_iterms(kp):
    if kp is None:
        return []
    return [(kp[1], kp[2])] + [(m, c) for _, m, c in kp[3]]


def kp_lt(kp):
    return kp[1], kp[2]


def _merge(a, b):
    """Sum of two strictly-descending term lists, zero coefficients dropped."""
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        ta, tb = a[i], b[j]
        ka, kb = ta[0], tb[0]
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


def kp_spoly(f, g, spec):
    """S-polynomial of two KPs, primitive; None when it cancels outright."""
    fk, fm, fc, ftail = f
    gk, gm, gc, gtail = g
    lcm = tuple(max(x, y) for x, y in zip(fm, gm))
    lk = key_of(spec, lcm)
    d = gcd(fc, gc)
    cf, cg = fc // d, gc // d
    qfk = tuple(x - y for x, y in zip(lk, fk))
    qfm = tuple(x - y for x, y in zip(lcm, fm))
    qgk = tuple(x - y for x, y in zip(lk, gk))
    qgm = tuple(x - y for x, y in zip(lcm, gm))
    a = [
        (tuple(x + y for x, y in zip(k, qfk)), tuple(x + y for x, y in zip(m, qfm)), c * cg)
        for k, m, c in ftail
    ]
    b = [
        (tuple(x + y for x, y in zip(k, qgk)), tuple(x + y for x, y in zip(m, qgm)), -c * cf)
        for k, m, c in gtail
    ]
    return _kp_from_sorted(_merge(a, b))


def kp_normal_form(target, reducers, spec):
    """Exact normal form of a KP modulo a list of KPs.

    Reduction picks the first reducer (list order) whose leading monomial
    divides the working head; pseudo-steps multiply the remaining work by the
    reducer's leading coefficient and the tracked scale absorbs it.  Returns
    (num, den, terms): value = (num/den) * terms, terms integer-primitive in
    descending order, num, den > 0 coprime; (1, 1, []) for zero.
    """
    if target is None:
        return 1, 1, []
    work = [(target[0], target[1], target[2]), *target[3]]
    sn, sd = 1, 1
    out = []  # (mono, Fraction) in descending key order
    idx = 0
    while idx < len(work):
        k0, m0, c0 = work[idx]
        red = None
        for r in reducers:
            if r is not None and _divides(r[1], m0):
                red = r
                break
        if red is None:
            out.append((m0, Fraction(c0 * sn, sd)))
            idx += 1
            continue
        rk, rm, rc, rtail = red
        qk = tuple(x - y for x, y in zip(k0, rk))
        qm = tuple(x - y for x, y in zip(m0, rm))
        rest = work[idx + 1 :]
        if rc != 1:
            rest = [(k, m, c * rc) for k, m, c in rest]
            sd *= rc
        shifted = [
            (tuple(x + y for x, y in zip(k, qk)), tuple(x + y for x, y in zip(m, qm)), -c0 * c)
            for k, m, c in rtail
        ]
        work = _merge(rest, shifted)
        idx = 0
        if work:
            g = 0
            for _, _, c in work:
                g = gcd(g, c)
            if g > 1:
                work = [(k, m, c // g) for k, m, c in work]
                sn *= g
        g2 = gcd(sn, sd)
        if g2 > 1:
            sn //= g2
            sd //= g2
    if not out:
        return 1, 1, []
    den = 1
    for _, c in out:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for _, c in out]
    num = 0
    for v in ints:
        num = gcd(num, v)
    terms = [(m, v // num) for (m, _), v in zip(out, ints)]
    g3 = gcd(num, den)
    return num // g3, den // g3, terms
