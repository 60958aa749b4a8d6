import pytest

from stoneproofs.learn_builders import (AlreadyLearned, LearnState, PredecessorNotLearned,
                                        SideContainsTarget, build_learn, learn_fragment,
                                        step1_keys, step2_keys, target_clause)
from stoneproofs.proof_check import check_proof
from stoneproofs.stone_gen import generate_stone, ladder_family


def pivots(p):
    return {p.pivots[v] for v in range(1, p.size + 1) if p.kinds[v] == 2}


def test_first_learning_derivation(get_stone):
    inst = get_stone("ladder:3", 3)
    p = learn_fragment(inst, 1, 1)
    assert p.clauses[p.root] == (-inst.p(1, 1), inst.r(1))
    assert check_proof(p, inst.cnf, "regRTL").accepted
    allowed = {inst.r(2), inst.r(3)} | {inst.p(v, k) for v in (2, 3) for k in (1, 2, 3)}
    assert pivots(p) <= allowed


def test_staged_levels_in_input_mode(get_stone):
    inst = get_stone("ladder:3", 3)
    st = LearnState.fresh(inst, "input")
    seen = []
    for _ in range(3):
        build_learn(inst, 1, 1, st)
        seen.append(st.level(1, 1))
    assert seen == [1, 2, 3]
    assert target_clause(inst, 1, 1) in st.builder.learned
    with pytest.raises(AlreadyLearned):
        build_learn(inst, 1, 1, st)


def test_levels_track_the_builder(get_stone):
    inst = get_stone("ladder:3", 3)
    st = LearnState.fresh(inst, "input")
    build_learn(inst, 1, 2, st)
    assert all(st.builder.known(c) for c in step1_keys(inst, 1, 2))
    assert not all(st.builder.known(c) for c in step2_keys(inst, 1, 2))
    assert st.level(1, 1) == 0 and st.total_mass() == 1


def test_empty_side_matches_plain_derivation(get_stone):
    inst = get_stone("ladder:3", 3)
    a, b = learn_fragment(inst, 1, 2), learn_fragment(inst, 1, 2, side=())
    assert a.clauses == b.clauses


def test_side_literal_survives():
    inst = generate_stone(ladder_family(4), 4)
    p = learn_fragment(inst, 2, 1, side=(3,))
    assert p.clauses[p.root] == (-inst.p(2, 1), inst.r(1), -inst.r(3))
    assert inst.r(3) not in pivots(p)
    assert check_proof(p, inst.cnf, "regRTL").accepted


def test_full_side_has_no_r_pivot():
    inst = generate_stone(ladder_family(4), 4)
    p = learn_fragment(inst, 2, 1, side=(2, 3, 4))
    assert set(p.clauses[p.root]) == {-inst.p(2, 1), inst.r(1)} | {-inst.r(s) for s in (2, 3, 4)}
    assert not {x for x in pivots(p) if x > inst.N * inst.m}
    assert check_proof(p, inst.cnf, "regRTL").accepted


def test_side_cannot_contain_target(get_stone):
    with pytest.raises(SideContainsTarget):
        learn_fragment(get_stone("ladder:3", 3), 1, 1, side=(1,))


def test_predecessors_must_be_learned():
    inst = generate_stone(ladder_family(4), 3)
    with pytest.raises(PredecessorNotLearned):
        build_learn(inst, 1, 1, LearnState.fresh(inst))


def test_m_minus_one_step_two_ladders(get_stone):
    inst = get_stone("ladder:3", 4)
    p = learn_fragment(inst, 1, 1)
    a, b = inst.graph.preds[1]
    cover_a = inst.vertex_cover(a)
    uses = sum(1 for v in range(1, p.size + 1) if p.kinds[v] == 0 and p.clauses[v] == cover_a)
    assert uses == inst.m - 1


FAMILY = [(N, m, j) for N in (3, 4) for m in range(2, 8) for j in range(1, m + 1)]


def fragment_size(N, m, j):
    inst = generate_stone(ladder_family(N), m)
    return learn_fragment(inst, N - 2, j).size


@pytest.mark.parametrize("m", range(2, 10))
def test_fragment_size_formula(m):
    assert fragment_size(3, m, 1) == 6 * m * m - 10 * m + 7


def test_fragment_size_quadratic():
    c = fragment_size(4, 7, 1) / 49
    for N, m, j in FAMILY:
        assert fragment_size(N, m, j) <= c * m * m, (N, m, j)


@pytest.mark.parametrize("N, m, j", [(N, m, j) for N, m, j in FAMILY if m <= 5])
def test_every_fragment_checks(N, m, j):
    inst = generate_stone(ladder_family(N), m)
    assert check_proof(learn_fragment(inst, N - 2, j), inst.cnf, "regRTL").accepted
