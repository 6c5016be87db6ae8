import pytest

from app.errors import AddressError, DomainError
from app.services.assoc_trees import Step, decode, encode, enumerate_assocs
from app.services.catalan_complex import (
    FILL_ALL,
    ArityTriple,
    GeneratorName,
    Move,
    all_moves,
    apply_move,
    build_complex,
    classify_move,
    complex_stats,
    euler_h1_rank,
    incoming_moves,
    independent,
    is_mis,
    make_square,
    mis_spanning_check,
    mis_spanning_tree,
    move_graph,
    outgoing_moves,
    path_end,
    pentagons,
    signed_edge_count,
    squares,
    to_dot,
    transport,
    tree_path,
)

L, R = Step.L, Step.R


@pytest.mark.parametrize("n, expected", [(2, 0), (3, 1), (4, 5), (5, 21), (6, 84), (7, 330)])
def test_move_counts(n, expected):
    assert len(all_moves(n)) == expected


def test_apply_move():
    assert encode(apply_move(Move(decode("(A(BC))"), ()))) == "((AB)C)"
    assert encode(apply_move(Move(decode("((AB)(CD))"), ()))) == "(((AB)C)D)"
    assert encode(apply_move(Move(decode("(A(B(CD)))"), ()))) == "((AB)(CD))"


def test_move_needs_rotatable_site():
    with pytest.raises(AddressError):
        Move(decode("((AB)C)"), ())
    with pytest.raises(AddressError):
        Move(decode("(A(BC))"), (L,))


def test_incoming_moves_end_at_the_tree():
    for n in range(2, 6):
        for t in enumerate_assocs(n):
            for m in incoming_moves(t):
                assert m.target == t
    assert sum(len(incoming_moves(t)) for t in enumerate_assocs(5)) == 21


def test_classify_move():
    assert str(classify_move(Move(decode("((AB)(CD))"), ()))) == "<2,1,1>"
    assert str(classify_move(Move(decode("(A(B(CD)))"), (R,)))) == "λ<1,1,1>"
    assert str(classify_move(Move(decode("((A(BC))D)"), (L,)))) == "ρ<1,1,1>"
    name = classify_move(Move(decode("((AB)(C(D(EF))))"), (R, R)))
    assert str(name) == "λ^2λ<1,1,1>"
    assert name.weight == 6


def test_generator_name_parse():
    name = GeneratorName.parse("λλ^2<1,2,1>")
    assert name.label == "λλ^2<1,2,1>"
    assert GeneratorName.parse("lr^3<4,2,1>") == GeneratorName.parse("λρ^3<4,2,1>")
    assert name.weight == 7
    with pytest.raises(DomainError):
        GeneratorName.parse("x<1,1,1>")
    with pytest.raises(DomainError):
        GeneratorName.parse("λ<1,1>")


def test_arity_triple():
    assert ArityTriple(2, 2, 1).dominates(ArityTriple(1, 2, 1))
    assert not ArityTriple(2, 1, 2).dominates(ArityTriple(1, 2, 1))
    with pytest.raises(DomainError):
        ArityTriple(0, 1, 1)


def test_is_mis():
    assert is_mis(Move(decode("(A(B(CD)))"), ()))
    assert not is_mis(Move(decode("(A((BC)D))"), ()))
    assert is_mis(Move(decode("(A(B(CD)))"), (R,)))
    for n in range(3, 8):
        for m in all_moves(n):
            assert is_mis(m) == (m.arity.j == 1)


def test_independent():
    t = decode("(A(B(CD)))")
    assert not independent(Move(t, ()), Move(t, (R,)))
    u = decode("((A(BC))(D(EF)))")
    assert independent(Move(u, (L,)), Move(u, (R,)))
    with pytest.raises(DomainError):
        independent(Move(t, ()), Move(t, ()))


def test_transport():
    assert transport((L,), ()) == (L, L)
    assert transport((R, L), ()) == (L, R)
    assert transport((R, R, L), ()) == (R, L)
    assert transport((L, R), (R,)) == (L, R)
    with pytest.raises(AddressError):
        transport((), ())
    with pytest.raises(AddressError):
        transport((R,), ())


@pytest.mark.parametrize("n, expected", [(3, 0), (4, 0), (5, 3)])
def test_square_counts(n, expected):
    assert len(squares(n)) == expected


@pytest.mark.parametrize("n, expected", [(3, 0), (4, 1), (5, 6)])
def test_pentagon_counts(n, expected):
    assert len(pentagons(n)) == expected


def test_square_boundaries_close():
    for n in range(4, 8):
        for square in squares(n):
            assert path_end(square.base, square.boundary) == square.base
            assert signed_edge_count(square.boundary) == 0
            assert len(set(square.corners)) == 4


def test_pentagon_face():
    (face,) = pentagons(4)
    assert len(set(face.vertices)) == 5
    assert path_end(face.top, face.boundary) == face.top
    assert signed_edge_count(face.boundary) == 1
    for n in range(5, 7):
        for face in pentagons(n):
            assert len(set(face.vertices)) == 5


def test_make_square_rejects_overlap():
    t = decode("(A(B(CD)))")
    with pytest.raises(DomainError):
        make_square(Move(t, ()), Move(t, (R,)))


def test_parallel_edges_share_names():
    for n in range(4, 8):
        for square in squares(n):
            for m, m_parallel in ((square.m1, square.m1_prime), (square.m2, square.m2_prime)):
                assert m.arity == m_parallel.arity
            s1, s2 = square.m1.site, square.m2.site
            nested = s1 == s2[:len(s1)] or s2 == s1[:len(s2)]
            if not nested:
                assert classify_move(square.m1) == classify_move(square.m1_prime)
                assert classify_move(square.m2) == classify_move(square.m2_prime)


def test_complex_stats():
    assert complex_stats(4).model_dump(exclude={"schema_version"}) == {
        "n": 4, "vertices": 5, "edges": 5, "squares": 0, "pentagons": 1, "mis_edges": 4,
    }
    assert complex_stats(3).model_dump(exclude={"schema_version"}) == {
        "n": 3, "vertices": 2, "edges": 1, "squares": 0, "pentagons": 0, "mis_edges": 1,
    }
    assert complex_stats(5).mis_edges == 15
    assert complex_stats(6).vertices == 42


@pytest.mark.parametrize("n", range(1, 9))
def test_mis_spans_without_homology(n):
    report = mis_spanning_check(n)
    assert report.connected
    assert report.touches_all
    assert report.h1_rank == 0


def test_mis_spanning_tree_paths():
    complex_ = build_complex(5)
    tree = mis_spanning_tree(complex_)
    assert tree.number_of_edges() == len(complex_.vertices) - 1
    root = complex_.vertices[0]
    for t in complex_.vertices:
        path = tree_path(tree, root, t)
        assert all(is_mis(m) for m, _ in path)
        assert path_end(root, path) == t


@pytest.mark.parametrize("n, expected", [(3, 0), (4, 1), (5, 5), (6, 15)])
def test_euler_rank(n, expected):
    assert euler_h1_rank(n) == expected


@pytest.mark.parametrize("n", range(4, 8))
def test_filled_pentagons_kill_homology(n):
    assert euler_h1_rank(n, FILL_ALL) == 0


def test_move_graph_and_dot():
    graph = move_graph(5)
    assert graph.number_of_nodes() == 14
    assert graph.number_of_edges() == 21
    assert "digraph" in to_dot(4)


@pytest.mark.parametrize("n", range(1, 11))
def test_tamari_graph_connected(n):
    vertices = enumerate_assocs(n)
    reached = {vertices[0]}
    frontier = list(reached)
    while frontier:
        t = frontier.pop()
        for m in outgoing_moves(t) + incoming_moves(t):
            for u in (m.source, m.target):
                if u not in reached:
                    reached.add(u)
                    frontier.append(u)
    assert len(reached) == len(vertices)


def test_unknown_fill():
    with pytest.raises(DomainError):
        build_complex(4, "pentagons")
