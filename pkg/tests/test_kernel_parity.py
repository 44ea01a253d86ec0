"""The compiled kernel must be indistinguishable from the pure one."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirwan._kernel import pure

speedups = pytest.importorskip("kirwan._kernel._speedups")

NVARS = 3

monos = st.tuples(*([st.integers(0, 5)] * NVARS))
iterms = st.lists(st.tuples(monos, st.integers(-40, 40)), max_size=8)
specs = st.sampled_from(
    [
        ("grevlex", (1, 1, 2)),
        ("grevlex", (1, 1, 1)),
        ("lex", NVARS),
        ("block", 1, (1, 1, 2)),
        ("block", 2, (2, 1, 1)),
    ]
)


@given(specs, monos)
def test_key_of(spec, m):
    assert pure.key_of(spec, m) == speedups.key_of(spec, m)


@given(specs, iterms)
def test_kp_make(spec, terms):
    assert pure.kp_make(terms, spec) == speedups.kp_make(terms, spec)


@given(specs, iterms)
def test_kp_iterms_and_lt(spec, terms):
    kp = pure.kp_make(terms, spec)
    kc = speedups.kp_make(terms, spec)
    assert speedups.kp_iterms(kc) == pure.kp_iterms(kp)
    if kp is not None:
        assert speedups.kp_lt(kc) == pure.kp_lt(kp)


@given(specs, iterms, iterms)
def test_kp_spoly(spec, t1, t2):
    f = pure.kp_make(t1, spec)
    g = pure.kp_make(t2, spec)
    if f is None or g is None:
        return
    assert pure.kp_spoly(f, g, spec) == speedups.kp_spoly(f, g, spec)


@settings(max_examples=200)
@given(specs, iterms, st.lists(iterms, max_size=4))
def test_kp_normal_form(spec, target_terms, reducer_terms):
    target = pure.kp_make(target_terms, spec)
    reducers = [pure.kp_make(t, spec) for t in reducer_terms]
    reducers = [r for r in reducers if r is not None]
    got = speedups.kp_normal_form(target, reducers, spec)
    want = pure.kp_normal_form(target, reducers, spec)
    assert got == want


@given(specs, iterms, st.lists(iterms, max_size=3))
def test_normal_form_value_is_exact(spec, target_terms, reducer_terms):
    # (num/den) * terms must equal target minus an explicit combination of
    # reducers; here we only check the weaker invariant that reducing the
    # returned remainder again is a fixed point.
    target = pure.kp_make(target_terms, spec)
    reducers = [r for r in (pure.kp_make(t, spec) for t in reducer_terms) if r]
    num, den, terms = speedups.kp_normal_form(target, reducers, spec)
    assert num >= 1 and den >= 1
    again = speedups.kp_make(terms, spec)
    n2, d2, t2 = speedups.kp_normal_form(again, reducers, spec)
    assert t2 == speedups.kp_iterms(again)


def test_kernel_selection_env(monkeypatch):
    from kirwan import _kernel

    assert _kernel.KERNEL_NAME in ("pure", "cython")
    # the active module exports exactly the public surface
    for name in ("key_of", "kp_make", "kp_iterms", "kp_lt", "kp_spoly", "kp_normal_form"):
        assert hasattr(_kernel, name)
