import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlcsync.codes import (
    DeadEnd,
    MissingChild,
    PrefixViolation,
    DuplicateCodeword,
    SourceModel,
    UnknownSymbol,
    VlcCode,
    bits_from_str,
    bits_to_str,
    branch_prior,
    build_code_tree,
    encode,
    excess_rate,
    hard_decode,
    mdl,
)
from vlcsync.tables import (
    TABLE_ENGLISH_IDS,
    TABLE_SMALL_IDS,
    get_code,
    list_code_ids,
)


def test_tree_internal_nodes_c0(c0):
    code, source = c0
    tree = build_code_tree(code, source)
    assert tree.nodes == ("", "1")
    assert tree.gamma == 2
    assert tree.is_complete()


def test_tree_internal_nodes_c5():
    code, source = get_code("C5")
    tree = build_code_tree(code, source)
    assert tree.nodes == ("", "0", "1", "10")
    assert tree.gamma == 4


def test_prefix_violation():
    with pytest.raises(PrefixViolation):
        VlcCode("bad", ("x", "y"), ("0", "01"))
    with pytest.raises(DuplicateCodeword):
        VlcCode("bad", ("x", "y"), ("01", "01"))


def test_encode_examples():
    code, _ = get_code("C5")
    assert bits_to_str(encode(code, ["a1", "a2"])) == "0100"
    assert encode(code, []).size == 0
    c7, _ = get_code("C7")
    assert bits_to_str(encode(c7, ["a5"])) == "1111"
    with pytest.raises(UnknownSymbol):
        encode(code, ["zz"])
    with pytest.raises(UnknownSymbol):
        encode(code, np.array([7]))


def test_encode_accepts_indices():
    code, _ = get_code("C5")
    assert bits_to_str(encode(code, np.array([0, 1]))) == "0100"


def test_hard_decode_examples():
    code, _ = get_code("C5")
    assert hard_decode(code, "0100") == (["a1", "a2"], "")
    assert hard_decode(code, "10") == ([], "10")
    assert hard_decode(code, "000") == (["a2"], "0")


def test_hard_decode_dead_end():
    incomplete = VlcCode("inc", ("x", "y"), ("0", "10"))
    with pytest.raises(DeadEnd) as err:
        hard_decode(incomplete, "11")
    assert err.value.position == 1


def test_mdl_and_excess_rate():
    for code_id in TABLE_SMALL_IDS:
        code, source = get_code(code_id)
        assert mdl(code, source) == pytest.approx(2.2, abs=1e-12)
        assert excess_rate(code, source) == pytest.approx(0.0781, abs=5e-5)
    for code_id in TABLE_ENGLISH_IDS:
        code, source = get_code(code_id)
        assert mdl(code, source) == pytest.approx(4.1557, abs=5e-5)


def test_branch_priors(c0):
    code, source = c0
    tree = build_code_tree(code, source)
    assert branch_prior(tree, "", 0) == pytest.approx(0.5)
    assert branch_prior(tree, "", 1) == pytest.approx(0.5)
    c5, s5 = get_code("C5")
    t5 = build_code_tree(c5, s5)
    assert branch_prior(t5, "10", 0) == pytest.approx(0.5)
    for code_id in list_code_ids():
        code, source = get_code(code_id)
        tree = build_code_tree(code, source)
        for node in tree.nodes:
            total = branch_prior(tree, node, 0) + branch_prior(tree, node, 1)
            assert total == pytest.approx(1.0, abs=1e-12)


def test_branch_prior_missing_child():
    incomplete = VlcCode("inc", ("x", "y"), ("0", "10"))
    source = SourceModel(("x", "y"), (0.5, 0.5))
    tree = build_code_tree(incomplete, source)
    with pytest.raises(MissingChild):
        branch_prior(tree, "1", 1)


def test_tree_requires_source_for_mass():
    code, _ = get_code("C5")
    tree = build_code_tree(code)
    with pytest.raises(ValueError):
        tree.mass("")
    with pytest.raises(ValueError):
        branch_prior(tree, "", 0)


def test_node_mass_consistency():
    code, source = get_code("C10")
    tree = build_code_tree(code, source)
    assert tree.mass("") == pytest.approx(1.0, abs=1e-12)
    for node in tree.nodes:
        i = tree.index[node]
        children_mass = 0.0
        for bit in (0, 1):
            kind = tree.child_kind[i, bit]
            if kind == 1:
                children_mass += source.probs[tree.child_ref[i, bit]]
            elif kind == 0:
                children_mass += tree.node_mass[tree.child_ref[i, bit]]
        assert children_mass == pytest.approx(tree.mass(node), abs=1e-12)


def test_kraft():
    for code_id in list_code_ids():
        code, _ = get_code(code_id)
        assert code.kraft_sum() == pytest.approx(1.0, abs=1e-12)
    incomplete = VlcCode("inc", ("x", "y"), ("0", "10"))
    assert incomplete.kraft_sum() <= 1.0


@given(st.sampled_from([f"C{i}" for i in range(1, 17)]),
       st.lists(st.integers(0, 4), max_size=40))
@settings(max_examples=60)
def test_round_trip(code_id, idx):
    code, _ = get_code(code_id)
    seq = [code.symbols[i] for i in idx]
    bits = encode(code, seq)
    assert code.l_m * len(seq) <= len(bits) <= code.l_M * len(seq)
    decoded, end = hard_decode(code, bits)
    assert decoded == seq
    assert end == ""


def test_source_model_validation():
    with pytest.raises(ValueError):
        SourceModel(("a", "b"), (0.5, 0.6))
    with pytest.raises(ValueError):
        SourceModel(("a", "b"), (1.0, -0.1, 0.1))
    with pytest.raises(ValueError):
        SourceModel(("a", "a"), (0.5, 0.5))
    source = SourceModel(("a", "b"), (0.5, 0.5))
    assert source.entropy() == pytest.approx(1.0)
    assert source.index("b") == 1
    with pytest.raises(UnknownSymbol):
        source.index("zz")


def test_source_model_renormalizes_table_roundoff():
    # 8-decimal tabulated probabilities that sum to 1 - 1.4e-7
    _, source = get_code("C17")
    assert math.fsum(source.probs) == pytest.approx(1.0, abs=1e-12)
    assert source.prob_strings[0] == "0.08833733"


def test_tables_complete():
    ids = list_code_ids()
    assert len(ids) == 19
    assert ids[:16] == list(TABLE_SMALL_IDS)
    assert ids[16:] == list(TABLE_ENGLISH_IDS)
    c5, s5 = get_code("C5")
    assert c5.codewords == ("01", "00", "11", "100", "101")
    assert s5.probs == (0.4, 0.2, 0.2, 0.1, 0.1)
    c17, _ = get_code("C17")
    assert len(c17) == 26
    assert c17.codeword("E") == "001"
    assert (c17.l_m, c17.l_M) == (3, 10)


def test_bits_str_helpers():
    assert bits_to_str(bits_from_str("0110")) == "0110"
    with pytest.raises(ValueError):
        bits_from_str("012")
