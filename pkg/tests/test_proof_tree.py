import pytest

from stoneproofs.formula_core import Cnf
from stoneproofs.proof_check import check_proof
from stoneproofs.proof_tree import (ClauseMismatch, NotAvailable, ProofBuilder, ProofFormatError,
                                    cpool, format_proof, is_input_derivation, learned_at,
                                    leaf_step, parse_proof, prior_learned_at, res_step)


def three_node(xyz):
    b = ProofBuilder(xyz)
    b.infer(1, b.axiom((1, 2)), b.axiom((-1, 3)))
    return b.to_proof("regRTL")


def balanced():
    # {y} from x, {~y} from z, then the empty clause
    f = Cnf([[1, 2], [-1, 2], [-2, 3], [-2, -3]], 3)
    b = ProofBuilder(f)
    a = b.infer(1, b.axiom((1, 2)), b.axiom((-1, 2)))
    c = b.infer(3, b.axiom((-2, 3)), b.axiom((-2, -3)))
    b.infer(2, a, c)
    return b.to_proof("regRTL"), f


def test_postorder_ids(xyz):
    p = three_node(xyz)
    assert p.size == 3 and p.root == 3
    assert p.clauses[3] == (2, 3)
    assert (p.lefts[3], p.rights[3]) == (1, 2)


def test_cpool(xyz):
    p = three_node(xyz)
    assert cpool(p, p.root) == p.clauses[p.root]
    assert cpool(p, 1) == (1, 2, 3)


def test_cpool_on_checked_proof_has_no_clash(get_regwrtl):
    p = get_regwrtl("ladder:3", 3)
    for v in range(1, p.size + 1):
        if p.kinds[v] != 2:
            s = set(cpool(p, v))
            assert not any(-l in s for l in s)


def test_input_derivations(xyz):
    p = three_node(xyz)
    assert is_input_derivation(p, 1)
    assert is_input_derivation(p, 3)
    q, _ = balanced()
    assert q.size == 7
    assert is_input_derivation(q, 3) and is_input_derivation(q, 6)
    assert not is_input_derivation(q, 7)


def test_learned_sets():
    p, f = balanced()
    gamma = set(f.clauses)
    assert learned_at(p, 1) == gamma
    assert learned_at(p, p.root) == gamma | {(2,), (-2,)}
    assert prior_learned_at(p, 1) == gamma
    # node 6 sits in the right subtree; {y} was learned on the left
    assert (2,) in prior_learned_at(p, 6)
    assert prior_learned_at(p, p.root) <= learned_at(p, p.root)


def test_learned_at_is_monotone(get_regwrtl):
    p = get_regwrtl("ladder:3", 3)
    prev = set()
    for v in range(1, p.size + 1, 7):
        cur = learned_at(p, v)
        assert prev <= cur
        prev = cur


def test_regrti_learns_only_input_clauses():
    p, f = balanced()
    q = p.with_system("regRTI")
    assert learned_at(q, q.root) == set(f.clauses) | {(2,), (-2,)}
    b = ProofBuilder(f, learn_mode="input")
    a = b.infer(1, b.axiom((1, 2)), b.axiom((-1, 2)))
    c = b.infer(3, b.axiom((-2, 3)), b.axiom((-2, -3)))
    b.infer(2, a, c)
    assert () not in b.learned


def test_format_roundtrip(get_regwrtl, get_stone):
    p = get_regwrtl("ladder:3", 3)
    text = format_proof(p)
    q = parse_proof(text, get_stone("ladder:3", 3).cnf)
    assert format_proof(q) == text
    assert q.clauses == p.clauses


def test_file_with_lemma(xyz):
    text = "p proof regRTL 5\na 1\na 2\nr 1 1 2 2 3 0\nl 3\nw 1 3 4 2 3 0\n"
    p = parse_proof(text, xyz)
    assert p.clauses[4] == (2, 3)


@pytest.mark.parametrize("text", [
    "a 1\n",
    "p proof regRTL 2\na 1\n",
    "p proof bogus 1\na 1\n",
    "p proof regRTL 1\nq 1\n",
    "p proof regRTL 3\na 1\na 2\nr 1 1 2 2 3\n",
    # children listed after the parent
    "p proof regRTL 3\nr 1 2 3 2 3 0\na 1\na 2\n",
])
def test_bad_files(xyz, text):
    with pytest.raises(ProofFormatError):
        parse_proof(text, xyz)


def test_height_and_histogram(xyz):
    p = three_node(xyz)
    assert p.height() == 1
    assert p.pivot_histogram() == {1: 1}


def test_emit_reuses_keyed_clauses(xyz):
    b = ProofBuilder(xyz)
    plan = res_step(1, leaf_step((1, 2)), leaf_step((-1, 3)), key=(2, 3))
    b.emit(plan)
    v = b.emit(plan)
    assert b.kinds[v] == 1 and b.refs[v] == 3


def test_emit_errors(xyz):
    b = ProofBuilder(xyz)
    with pytest.raises(NotAvailable):
        b.emit(leaf_step((5,)))
    with pytest.raises(ClauseMismatch):
        b.emit(res_step(1, leaf_step((1, 2)), leaf_step((-1, 3)), key=(2,)))


def test_checker_accepts_hand_proofs(xyz):
    assert check_proof(three_node(xyz), xyz, "regRTL").accepted
    p, f = balanced()
    assert check_proof(p, f, "regRTL").accepted
