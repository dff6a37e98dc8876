import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wafomlab.abelian import GroupSpec
from wafomlab.errors import CapacityError, NetFormatError
from wafomlab.netfile import format_net, parse_net_file, parse_net_text, write_net_file
from wafomlab.netgen import (
    GeneratingMatrices, GeneratorSet, digital_net, dual, span, span_matrices, trivial_group, whole_group,
)

Z2 = GroupSpec.cyclic(2)


def as_set(mats):
    return {tuple(np.asarray(m).ravel()) for m in mats}


def test_span_examples():
    assert span(GeneratorSet(Z2, 1, 2, np.zeros((1, 1, 2), int))).order == 1
    pg = span(GeneratorSet(Z2, 1, 2, np.array([[[1, 1]]])))
    assert as_set(pg.elements) == {(0, 0), (1, 1)}
    pg = span(GeneratorSet(GroupSpec.cyclic(4), 1, 1, np.array([[[2]]])))
    assert as_set(pg.elements) == {(0,), (2,)}


def test_span_in_product_group_uses_integer_combinations():
    g = GroupSpec((2, 3))
    gen = np.array([[[g.encode((1, 1))]]])
    pg = span(GeneratorSet(g, 1, 1, gen))
    assert pg.order == 6


def test_span_capacity():
    with pytest.raises(CapacityError):
        span(GeneratorSet(Z2, 1, 4, np.eye(4, dtype=int)[:, None, :]), capacity=8)


def test_generator_set_rejects_empty():
    with pytest.raises(ValueError):
        GeneratorSet(Z2, 1, 2, np.zeros((0, 1, 2), int))


def test_digital_net_examples():
    assert digital_net(GeneratingMatrices(2, np.zeros((1, 2, 2), int))).order == 1
    pg = digital_net(GeneratingMatrices(2, np.eye(2, dtype=int)[None]))
    assert pg.order == 4 and pg.free
    c2 = np.array([[0, 1], [1, 0]])
    gm = GeneratingMatrices(2, np.stack([np.eye(2, dtype=int), c2]))
    x1, x2 = gm.basis()
    # row j of X_i is column i of C_j
    assert np.array_equal(x1, [[1, 0], [0, 1]]) and np.array_equal(x2, [[0, 1], [1, 0]])
    pg = digital_net(gm)
    expected = {(0, 0, 0, 0), (1, 0, 0, 1), (0, 1, 1, 0), (1, 1, 1, 1)}
    assert pg.order == 4 and as_set(pg.elements) == expected


def test_digital_net_flags_non_free():
    gm = GeneratingMatrices(2, np.array([[[1, 1], [0, 0]]]))
    pg = digital_net(gm)
    assert pg.order == 2 and not pg.free


def test_dual_examples():
    for g, s, n in [(Z2, 1, 2), (GroupSpec.cyclic(3), 1, 2), (GroupSpec((2, 2)), 1, 1)]:
        assert len(dual(trivial_group(g, s, n))) == g.order ** (s * n)
        assert as_set(dual(whole_group(g, s, n))) == {(0,) * (s * n)}
    pg = span(GeneratorSet(Z2, 1, 2, np.array([[[1, 1]]])))
    assert as_set(dual(pg)) == {(0, 0), (1, 1)}


groups = st.sampled_from([GroupSpec.cyclic(b) for b in (2, 3, 4, 6)] + [GroupSpec((2, 2)), GroupSpec((2, 3))])


@settings(max_examples=40, deadline=None)
@given(groups, st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_subgroup_invariants(g, s, n, d, seed):
    if g.order ** (s * n) > 1 << 12:
        return
    rng = np.random.default_rng(seed)
    pg = span(GeneratorSet(g, s, n, rng.integers(0, g.order, size=(d, s, n))))
    total = pg.ambient_size
    assert total % pg.order == 0
    perp = dual(pg)
    assert pg.order * len(perp) == total
    # closure under addition and negation
    idx = rng.integers(0, pg.order, size=(20, 2))
    for i, j in idx:
        assert g.add(pg.elements[i], pg.elements[j]) in pg
        assert g.neg(pg.elements[i]) in pg
    # double dual and idempotent span
    back = span_matrices(g, s, n, perp)
    assert as_set(dual(back)) == as_set(pg.elements)
    assert span_matrices(g, s, n, pg.elements).same_set(pg)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_digital_net_free_flag(b, s, n, d, seed):
    rng = np.random.default_rng(seed)
    pg = digital_net(GeneratingMatrices(b, rng.integers(0, b, size=(s, n, d))))
    assert pg.free == (pg.order == b ** d)
    assert pg.order <= b ** d


@settings(max_examples=30, deadline=None)
@given(groups, st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_net_file_roundtrip(g, s, n, d, seed):
    rng = np.random.default_rng(seed)
    gens = GeneratorSet(g, s, n, rng.integers(0, g.order, size=(d, s, n)))
    assert parse_net_text(format_net(gens)) == gens
    buf = io.StringIO()
    write_net_file(gens, buf)
    buf.seek(0)
    assert parse_net_file(buf) == gens


def test_net_file_generating_matrices_roundtrip(tmp_path):
    gm = GeneratingMatrices(3, np.random.default_rng(1).integers(0, 3, size=(2, 3, 2)))
    path = tmp_path / "net.txt"
    write_net_file(gm, path)
    back = parse_net_file(path)
    assert np.array_equal(back.to_generating_matrices().matrices, gm.matrices)


def test_product_group_entries_are_tuples():
    g = GroupSpec((2, 3))
    gens = GeneratorSet(g, 1, 2, np.array([[[g.encode((1, 2)), 0]]]))
    text = format_net(gens)
    assert "1,2 0,0" in text
    assert parse_net_text(text) == gens


@pytest.mark.parametrize("text, fragment", [
    ("wafomnet v1 2 1 2 1\n1 2\n", "row 1, column 2"),
    ("wafomnet v1 2 1 2 0\n", "empty generator list"),
    ("wafomnet v2 2 1 2 1\n1 1\n", "header"),
    ("wafomnet v1 2 2 2 1\n1 1\n", "truncated"),
    ("wafomnet v1 2 1 2 1\n1 1 1\n", "entries"),
    ("", "empty"),
])
def test_net_file_errors(text, fragment):
    with pytest.raises(NetFormatError, match=fragment):
        parse_net_text(text)


def test_net_file_comments_and_blank_lines():
    text = "# a comment\nwafomnet v1 2 1 2 2\n\n1 0  # first\n\n\n0 1\n"
    gens = parse_net_text(text)
    assert gens.d == 2 and np.array_equal(gens.generators[1], [[0, 1]])
