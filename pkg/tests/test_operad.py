import math

import pytest

from app.errors import CompositionError, DomainError
from app.services.assoc_trees import (
    LEAF,
    Partition,
    Step,
    catalan,
    compositions,
    decode,
    encode,
    enumerate_assocs,
    graft_object,
    leaf_address,
    random_assoc,
)
from app.services.catalan_complex import ArityTriple, Move, all_moves
from app.services.operad import (
    HomCell,
    HomPath,
    arity_monotonicity,
    check_interchange,
    check_operad_associativity,
    graft_move,
    grafted_arities,
    hom_cells,
    horizontal_compose,
    horizontal_compose_paths,
    preserves_mis,
    vertical_compose,
)
from tests.conftest import PROPERTY_CASES, random_walk


def test_graft_move_identity():
    for m in all_moves(4):
        assert graft_move(m, [LEAF] * 4) == m


def test_graft_move_inflates_arity():
    m = Move(decode("(A(BC))"), ())
    grafted = graft_move(m, [decode("(AB)"), LEAF, decode("(AB)")])
    assert encode(grafted.source) == "((AB)(C(DE)))"
    assert grafted.arity == ArityTriple(2, 1, 2)
    assert grafted.target == graft_object(m.target, [decode("(AB)"), LEAF, decode("(AB)")])


def test_graft_move_arity_mismatch():
    with pytest.raises(DomainError):
        graft_move(Move(decode("(A(BC))"), ()), [LEAF, LEAF])


def _grafted_inside_site(m, gs):
    depth = len(m.site)
    return any(
        g.leaves > 1 and leaf_address(m.source, index)[:depth] == m.site
        for index, g in enumerate(gs)
    )


def test_arity_monotonicity(rng):
    moves = {n: all_moves(n) for n in range(3, 7)}
    strict = unchanged = 0
    for _ in range(PROPERTY_CASES):
        n = int(rng.integers(3, 7))
        m = moves[n][int(rng.integers(len(moves[n])))]
        gs = [random_assoc(int(rng.integers(1, 3)), rng) for _ in range(n)]
        report = arity_monotonicity(m, gs)
        assert report.monotone
        if _grafted_inside_site(m, gs):
            assert report.after != report.before
            strict += 1
        else:
            assert report.after == report.before
            unchanged += 1
    assert strict > 0 and unchanged > 0


def test_grafting_outside_the_site_keeps_the_arity():
    m = Move(decode("(A(B(CD)))"), (Step.R,))
    report = arity_monotonicity(m, [decode("(AB)"), LEAF, LEAF, LEAF])
    assert report.after == report.before == ArityTriple(1, 1, 1)
    report = arity_monotonicity(m, [LEAF, LEAF, LEAF, decode("(AB)")])
    assert report.after == ArityTriple(1, 1, 2)


def test_middle_letter_grafting_leaves_the_mis():
    m = Move(decode("(A(BC))"), ())
    assert preserves_mis(m, [decode("(AB)"), LEAF, LEAF])
    assert not preserves_mis(m, [LEAF, decode("(AB)"), LEAF])
    assert arity_monotonicity(m, [LEAF, decode("(AB)"), LEAF]).after == ArityTriple(1, 2, 1)


def test_grafted_arities():
    assert grafted_arities(ArityTriple(1, 2, 1), 4) == {ArityTriple(1, 2, 1)}
    with pytest.raises(DomainError):
        grafted_arities(ArityTriple(1, 2, 1), 3)


def test_hom_cell_counts():
    for n in range(1, 7):
        assert len(hom_cells(n, n)) == 1
        assert [c.components for c in hom_cells(n, 1)] == [(t,) for t in enumerate_assocs(n)]
        assert hom_cells(n, n + 1) == ()
    for n, k in [(5, 2), (6, 3), (7, 4)]:
        expected = sum(math.prod(catalan(m) for m in p.parts) for p in compositions(n, k))
        assert len(hom_cells(n, k)) == expected


def test_hom_cells_three_two():
    assert sorted(c.render() for c in hom_cells(3, 2)) == ["((AB), C)", "(A, (BC))"]


def test_typical_cell_of_hom_10_4():
    cell = HomCell(
        Partition((2, 4, 1, 3)),
        [decode(s, strict=False) for s in ["(AB)", "(C(DE))F", "G", "H(IJ)"]],
    )
    assert cell.render() == "((AB), ((C(DE))F), G, (H(IJ)))"
    assert cell in set(hom_cells(10, 4))


def test_hom_cell_validates_components():
    with pytest.raises(DomainError):
        HomCell(Partition((2, 1)), [LEAF, LEAF])
    with pytest.raises(DomainError):
        HomCell(Partition((2, 1)), [decode("(AB)")])


def test_horizontal_compose_example():
    f = HomCell(
        Partition((3, 1, 4, 2)),
        [decode(s, strict=False) for s in ["A(BC)", "D", "E(F(GH))", "IJ"]],
    )
    g = HomCell(Partition((2, 2)), [decode("[AB]", strict=False), decode("[CD]", strict=False)])
    composed = horizontal_compose(g, f)
    assert composed.partition == Partition((4, 6))
    assert composed.render() == "(((A(BC))D), ((E(F(GH)))(IJ)))"
    assert horizontal_compose(HomCell.identity(4), f) == f


def test_horizontal_compose_arity_mismatch():
    with pytest.raises(DomainError):
        horizontal_compose(HomCell.identity(3), HomCell.identity(2))


def test_vertical_compose():
    t = decode("(A(B(CD)))")
    step1 = ((Move(t, ()), 1),)
    middle = Move(t, ()).target
    step2 = ((Move(middle, ()), 1),)
    p1 = HomPath(Partition((4,)), [t], [step1])
    p2 = HomPath(Partition((4,)), [middle], [step2])
    both = vertical_compose(p2, p1)
    assert both.steps == (step1 + step2,)
    assert both.ends == (decode("(((AB)C)D)"),)
    identity = HomPath.identity(p1.source)
    assert vertical_compose(p1, identity) == p1
    with pytest.raises(CompositionError):
        vertical_compose(p1, p2)
    with pytest.raises(CompositionError):
        vertical_compose(HomPath.identity(HomCell.identity(4)), p1)


def test_hom_path_must_chain():
    t = decode("(A(B(CD)))")
    with pytest.raises(CompositionError):
        HomPath(Partition((4,)), [t], [((Move(t, ()), 1), (Move(t, ()), 1))])


def _random_path(partition, rng, starts=None):
    if starts is None:
        starts = [random_assoc(m, rng) for m in partition.parts]
    steps = [random_walk(s, rng, int(rng.integers(0, 3))) for s in starts]
    return HomPath(partition, starts, steps)


def test_interchange_law(rng):
    for _ in range(PROPERTY_CASES):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n + 1))
        l_ = int(rng.integers(1, k + 1))
        outer = compositions(n, k)[int(rng.integers(len(compositions(n, k))))]
        inner = compositions(k, l_)[int(rng.integers(len(compositions(k, l_))))]
        phi = _random_path(outer, rng)
        phi2 = _random_path(outer, rng, list(phi.ends))
        gamma = _random_path(inner, rng)
        gamma2 = _random_path(inner, rng, list(gamma.ends))
        assert check_interchange(phi, phi2, gamma, gamma2)


def test_interchange_with_identities():
    f = hom_cells(5, 2)[0]
    g = HomCell.identity(2)
    phi, gamma = HomPath.identity(f), HomPath.identity(g)
    assert check_interchange(phi, phi, gamma, gamma)
    assert horizontal_compose_paths(gamma, phi) == HomPath.identity(horizontal_compose(g, f))


def test_horizontal_path_with_single_move():
    t = decode("(A(BC))")
    gamma = HomPath(Partition((3,)), [t], [((Move(t, ()), 1),)])
    phi = HomPath.identity(HomCell.identity(3))
    assert horizontal_compose_paths(gamma, phi) == gamma


def test_operad_associativity(rng):
    assert check_operad_associativity(LEAF, [decode("(A(BC))")], [LEAF, LEAF, LEAF])
    for _ in range(PROPERTY_CASES):
        h = random_assoc(int(rng.integers(1, 4)), rng)
        gs = [random_assoc(int(rng.integers(1, 3)), rng) for _ in range(h.leaves)]
        total = sum(g.leaves for g in gs)
        fs = [random_assoc(int(rng.integers(1, 3)), rng) for _ in range(total)]
        assert check_operad_associativity(h, gs, fs)
    h = decode("(A(BC))")
    assert check_operad_associativity(h, [LEAF] * 3, [LEAF] * 3)
