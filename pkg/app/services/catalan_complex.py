"""The Catalan groupoid A_n as a combinatorial 2-complex.

Vertices are associations, edges are forward reassociations
f(gh) -> (fg)h at one node, and 2-cells are the squares of two
independent moves plus (optionally filled) pentagons.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, Iterator, Sequence, Tuple

import networkx as nx

from app.errors import AddressError, CompositionError, DomainError, InvariantViolation
from app.models.schemas import ComplexStats, MisReport
from app.services.assoc_trees import (
    ROOT,
    Address,
    Assoc,
    Step,
    encode,
    enumerate_assocs,
    format_address,
    internal_sites,
    replace_at,
    subtree_at,
)
from app.services.integer_matrix import IntMatrix, integer_rank

logger = logging.getLogger(__name__)

FILL_SQUARES = "squares"
FILL_ALL = "all"


@dataclass(frozen=True, order=True)
class ArityTriple:
    i: int
    j: int
    k: int

    def __post_init__(self):
        if min(self.i, self.j, self.k) < 1:
            raise DomainError(f"arity entries must be positive, got {tuple(self)}")

    def __iter__(self):
        return iter((self.i, self.j, self.k))

    @property
    def total(self) -> int:
        return self.i + self.j + self.k

    def dominates(self, other: "ArityTriple") -> bool:
        return self.i >= other.i and self.j >= other.j and self.k >= other.k

    def __str__(self):
        return f"<{self.i},{self.j},{self.k}>"


class Side(str, Enum):
    LAMBDA = "λ"  # skip letters on the left
    RHO = "ρ"  # skip letters on the right


@dataclass(frozen=True)
class PrefixSymbol:
    side: Side
    count: int

    def __str__(self):
        return self.side.value + (f"^{self.count}" if self.count > 1 else "")


PrefixWord = Tuple[PrefixSymbol, ...]

_SYMBOL = re.compile(r"([λlρr])(?:\^(\d+))?")
_ARITY = re.compile(r"[<⟨](\d+),(\d+),(\d+)[>⟩]$")


def lam(count: int = 1) -> PrefixSymbol:
    return PrefixSymbol(Side.LAMBDA, count)


def rho(count: int = 1) -> PrefixSymbol:
    return PrefixSymbol(Side.RHO, count)


@dataclass(frozen=True)
class GeneratorName:
    """Naturality class X<i,j,k> of a move; the prefix is kept raw."""

    prefix: PrefixWord
    arity: ArityTriple

    @property
    def weight(self) -> int:
        return sum(s.count for s in self.prefix) + self.arity.total

    @property
    def label(self) -> str:
        return "".join(str(s) for s in self.prefix) + str(self.arity)

    @property
    def sort_key(self):
        # shorter prefixes win when two names are identified
        return (len(self.prefix), self.label)

    def prefixed(self, *symbols: PrefixSymbol) -> "GeneratorName":
        return GeneratorName(tuple(symbols) + self.prefix, self.arity)

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str) -> "GeneratorName":
        """Read 'λρ^2<1,2,1>'; 'l'/'r' are accepted for λ/ρ."""
        text = text.replace(" ", "")
        prefix, pos = [], 0
        while pos < len(text) and text[pos] not in "<⟨":
            match = _SYMBOL.match(text, pos)
            if not match:
                raise DomainError(f"bad generator name {text!r} at position {pos}")
            side = Side.LAMBDA if match.group(1) in "λl" else Side.RHO
            prefix.append(PrefixSymbol(side, int(match.group(2) or 1)))
            pos = match.end()
        arity = _ARITY.match(text[pos:])
        if not arity:
            raise DomainError(f"bad arity in generator name {text!r}")
        return cls(tuple(prefix), ArityTriple(*(int(g) for g in arity.groups())))


@dataclass(frozen=True)
class Move:
    """Forward reassociation f(gh) -> (fg)h at `site` of `source`."""

    source: Assoc
    site: Address

    def __post_init__(self):
        object.__setattr__(self, "site", tuple(Step(s) for s in self.site))
        node = subtree_at(self.source, self.site)
        if node.is_leaf or node.right.is_leaf:
            raise AddressError(
                f"no reassociation at {format_address(self.site)} of {encode(self.source)}"
            )

    @cached_property
    def target(self) -> Assoc:
        return apply_move(self)

    @property
    def arity(self) -> ArityTriple:
        node = subtree_at(self.source, self.site)
        return ArityTriple(node.left.leaves, node.right.left.leaves, node.right.right.leaves)

    def describe(self) -> str:
        return f"{encode(self.source)}@{format_address(self.site)}"


SignedMove = Tuple[Move, int]
EdgePath = Tuple[SignedMove, ...]


def apply_move(m: Move) -> Assoc:
    node = subtree_at(m.source, m.site)
    f, g, h = node.left, node.right.left, node.right.right
    return replace_at(m.source, m.site, Assoc(Assoc(f, g), h))


def rotation_sites(t: Assoc) -> Iterator[Address]:
    for site in internal_sites(t):
        if not subtree_at(t, site).right.is_leaf:
            yield site


def outgoing_moves(t: Assoc) -> Tuple[Move, ...]:
    return tuple(Move(t, site) for site in rotation_sites(t))


def incoming_moves(t: Assoc) -> Tuple[Move, ...]:
    """Moves whose target is t."""
    moves = []
    for site in internal_sites(t):
        node = subtree_at(t, site)
        if not node.left.is_leaf:
            f, g, h = node.left.left, node.left.right, node.right
            moves.append(Move(replace_at(t, site, Assoc(f, Assoc(g, h))), site))
    return tuple(moves)


@lru_cache(maxsize=None)
def all_moves(n: int) -> Tuple[Move, ...]:
    return tuple(m for t in enumerate_assocs(n) for m in outgoing_moves(t))


def classify_move(m: Move) -> GeneratorName:
    """λ_a for every right turn past a-letter left sibling, ρ_b for left turns."""
    prefix = []
    node = m.source
    for step in m.site:
        if step == Step.R:
            prefix.append(lam(node.left.leaves))
            node = node.right
        else:
            prefix.append(rho(node.right.leaves))
            node = node.left
    return GeneratorName(tuple(prefix), m.arity)


def is_mis(m: Move) -> bool:
    return m.arity.j == 1


def independent(m1: Move, m2: Move) -> bool:
    """True when the two rotations use disjoint internal nodes."""
    if m1.source != m2.source:
        raise DomainError("independence is defined for moves out of the same tree")
    if m1.site == m2.site:
        raise DomainError("a move is not independent of itself")
    used1 = {m1.site, m1.site + (Step.R,)}
    used2 = {m2.site, m2.site + (Step.R,)}
    return not used1 & used2


def transport(site: Address, rotated_at: Address) -> Address:
    """Where the node at `site` sits after a rotation at `rotated_at`."""
    depth = len(rotated_at)
    if site[:depth] != rotated_at:
        return site
    rest = site[depth:]
    if rest[:1] == (Step.L,):
        return rotated_at + (Step.L, Step.L) + rest[1:]
    if rest[:2] == (Step.R, Step.L):
        return rotated_at + (Step.L, Step.R) + rest[2:]
    if rest[:2] == (Step.R, Step.R):
        return rotated_at + (Step.R,) + rest[2:]
    raise AddressError(f"node {format_address(site)} is rebuilt by the rotation")


@dataclass(frozen=True)
class Square:
    """Two independent moves out of `base`, with m1.site < m2.site."""

    base: Assoc
    m1: Move
    m2: Move

    @cached_property
    def m2_prime(self) -> Move:
        return Move(self.m1.target, transport(self.m2.site, self.m1.site))

    @cached_property
    def m1_prime(self) -> Move:
        return Move(self.m2.target, transport(self.m1.site, self.m2.site))

    @property
    def top(self) -> Assoc:
        return self.m2_prime.target

    @property
    def corners(self) -> Tuple[Assoc, ...]:
        return (self.base, self.m1.target, self.top, self.m2.target)

    @property
    def boundary(self) -> EdgePath:
        return ((self.m1, 1), (self.m2_prime, 1), (self.m1_prime, -1), (self.m2, -1))

    @property
    def edge_set(self) -> frozenset:
        return frozenset((self.m1, self.m2, self.m1_prime, self.m2_prime))


def make_square(m1: Move, m2: Move) -> Square:
    if not independent(m1, m2):
        raise DomainError(f"moves {m1.describe()} and {m2.describe()} overlap")
    if m2.site < m1.site:
        m1, m2 = m2, m1
    square = Square(m1.source, m1, m2)
    if square.m2_prime.target != square.m1_prime.target:
        raise InvariantViolation(
            f"square at {encode(m1.source)} does not close: "
            f"{encode(square.m2_prime.target)} != {encode(square.m1_prime.target)}"
        )
    return square


@lru_cache(maxsize=None)
def squares(n: int) -> Tuple[Square, ...]:
    faces: Dict[frozenset, Square] = {}
    for t in enumerate_assocs(n):
        for m1, m2 in combinations(outgoing_moves(t), 2):
            if independent(m1, m2):
                square = make_square(m1, m2)
                faces.setdefault(square.edge_set, square)
    return tuple(faces.values())


@dataclass(frozen=True)
class PentagonFace:
    """Pentagon on a(b(cd)) sitting at `site` of `top`."""

    top: Assoc
    site: Address

    def __post_init__(self):
        node = subtree_at(self.top, self.site)
        if node.is_leaf or node.right.is_leaf or node.right.right.is_leaf:
            raise AddressError(f"no a(b(cd)) at {format_address(self.site)} of {encode(self.top)}")

    @cached_property
    def moves(self) -> Tuple[Move, ...]:
        s = self.site
        m01 = Move(self.top, s + (Step.R,))
        m12 = Move(m01.target, s)
        m23 = Move(m12.target, s + (Step.L,))
        m04 = Move(self.top, s)
        m43 = Move(m04.target, s)
        if m23.target != m43.target:
            raise InvariantViolation(f"pentagon at {encode(self.top)} does not close")
        return (m01, m12, m23, m04, m43)

    @property
    def vertices(self) -> Tuple[Assoc, ...]:
        m01, m12, m23, m04, _ = self.moves
        return (self.top, m01.target, m12.target, m23.target, m04.target)

    @property
    def boundary(self) -> EdgePath:
        m01, m12, m23, m04, m43 = self.moves
        return ((m01, 1), (m12, 1), (m23, 1), (m43, -1), (m04, -1))


@lru_cache(maxsize=None)
def pentagons(n: int) -> Tuple[PentagonFace, ...]:
    faces: Dict[frozenset, PentagonFace] = {}
    for t in enumerate_assocs(n):
        for site in internal_sites(t):
            node = subtree_at(t, site)
            if not node.right.is_leaf and not node.right.right.is_leaf:
                face = PentagonFace(t, site)
                faces.setdefault(frozenset(face.vertices), face)
    return tuple(faces.values())


def path_end(start: Assoc, path: Sequence[SignedMove]) -> Assoc:
    """Walk a signed edge path from `start`; raises if it does not chain."""
    current = start
    for position, (m, sign) in enumerate(path):
        tail, head = (m.source, m.target) if sign > 0 else (m.target, m.source)
        if tail != current:
            raise CompositionError(
                f"step {position} leaves {encode(tail)} but the path is at {encode(current)}"
            )
        current = head
    return current


def path_start(path: Sequence[SignedMove]) -> Assoc:
    m, sign = path[0]
    return m.source if sign > 0 else m.target


def invert_path(path: Sequence[SignedMove]) -> EdgePath:
    return tuple((m, -sign) for m, sign in reversed(path))


def signed_edge_count(path: Sequence[SignedMove]) -> int:
    return sum(sign for _, sign in path)


@dataclass(frozen=True)
class TwoComplex:
    n: int
    fill: str
    vertices: Tuple[Assoc, ...]
    edges: Tuple[Move, ...]
    squares: Tuple[Square, ...]
    pentagons: Tuple[PentagonFace, ...]
    vertex_index: Dict[Assoc, int] = field(repr=False, compare=False)
    edge_index: Dict[Move, int] = field(repr=False, compare=False)

    @property
    def cells(self) -> tuple:
        if self.fill == FILL_ALL:
            return self.squares + self.pentagons
        return self.squares


@lru_cache(maxsize=None)
def build_complex(n: int, fill: str = FILL_SQUARES) -> TwoComplex:
    if fill not in (FILL_SQUARES, FILL_ALL):
        raise DomainError(f"unknown fill policy {fill!r}")
    vertices = enumerate_assocs(n)
    edges = all_moves(n)
    complex_ = TwoComplex(
        n=n,
        fill=fill,
        vertices=vertices,
        edges=edges,
        squares=squares(n),
        pentagons=pentagons(n),
        vertex_index={t: i for i, t in enumerate(vertices)},
        edge_index={m: i for i, m in enumerate(edges)},
    )
    logger.info(
        "built A%d: %d vertices, %d edges, %d squares, %d pentagons (fill=%s)",
        n, len(vertices), len(edges), len(complex_.squares), len(complex_.pentagons), fill,
    )
    return complex_


def boundary_matrix(complex_: TwoComplex, cells: Sequence = None) -> IntMatrix:
    """Cell-by-edge incidence matrix of the filled 2-cells."""
    cells = complex_.cells if cells is None else cells
    rows = []
    for cell in cells:
        row: Dict[int, int] = {}
        for m, sign in cell.boundary:
            index = complex_.edge_index[m]
            row[index] = row.get(index, 0) + sign
        rows.append(row)
    return IntMatrix(len(rows), len(complex_.edges), rows)


def euler_h1_rank(n: int, fill: str = FILL_SQUARES) -> int:
    """(E - V + 1) - rank of the cell boundary matrix."""
    complex_ = build_complex(n, fill)
    cycle_rank = len(complex_.edges) - len(complex_.vertices) + 1
    return cycle_rank - integer_rank(boundary_matrix(complex_))


def mis_spanning_tree(complex_: TwoComplex) -> nx.Graph:
    """BFS tree over MIS edges from the left comb, edges tagged with their move."""
    graph = nx.Graph()
    graph.add_nodes_from(complex_.vertices)
    graph.add_edges_from((m.source, m.target, {"move": m}) for m in complex_.edges if is_mis(m))
    tree = nx.Graph()
    root = complex_.vertices[0]
    tree.add_node(root)
    for u, v in nx.bfs_edges(graph, root):
        tree.add_edge(u, v, move=graph.edges[u, v]["move"])
    if tree.number_of_nodes() != len(complex_.vertices):
        raise InvariantViolation(f"MIS edges of A{complex_.n} do not span its vertices")
    return tree


def tree_path(tree: nx.Graph, start: Assoc, end: Assoc) -> EdgePath:
    vertex_path = nx.shortest_path(tree, start, end)
    steps = []
    for u, v in zip(vertex_path, vertex_path[1:]):
        m = tree.edges[u, v]["move"]
        steps.append((m, 1 if m.source == u else -1))
    return tuple(steps)


def mis_spanning_check(n: int) -> MisReport:
    complex_ = build_complex(n)
    mis_edges = [m for m in complex_.edges if is_mis(m)]
    graph = nx.Graph()
    graph.add_nodes_from(complex_.vertices)
    graph.add_edges_from((m.source, m.target) for m in mis_edges)
    components = nx.number_connected_components(graph)
    touches_all = len(complex_.vertices) == 1 or all(graph.degree(v) > 0 for v in complex_.vertices)

    index = {m: i for i, m in enumerate(mis_edges)}
    rows = []
    for square in complex_.squares:
        if all(is_mis(m) for m, _ in square.boundary):
            rows.append({index[m]: sign for m, sign in square.boundary})
    relations = IntMatrix(len(rows), len(mis_edges), rows)
    h1_rank = len(mis_edges) - len(complex_.vertices) + components - integer_rank(relations)
    return MisReport(
        n=n,
        vertices=len(complex_.vertices),
        mis_edges=len(mis_edges),
        mis_squares=len(rows),
        connected=components == 1,
        touches_all=touches_all,
        h1_rank=h1_rank,
    )


def complex_stats(n: int) -> ComplexStats:
    complex_ = build_complex(n)
    return ComplexStats(
        n=n,
        vertices=len(complex_.vertices),
        edges=len(complex_.edges),
        squares=len(complex_.squares),
        pentagons=len(complex_.pentagons),
        mis_edges=sum(1 for m in complex_.edges if is_mis(m)),
    )


def move_graph(n: int) -> nx.DiGraph:
    """1-skeleton keyed by vertex index, with encodings and generator names."""
    complex_ = build_complex(n)
    graph = nx.DiGraph(name=f"A{n}")
    for i, t in enumerate(complex_.vertices):
        graph.add_node(f"t{i}", label=f'"{encode(t)}"')
    for m in complex_.edges:
        mis = is_mis(m)
        graph.add_edge(
            f"t{complex_.vertex_index[m.source]}",
            f"t{complex_.vertex_index[m.target]}",
            label=f'"{classify_move(m)}"',
            style="bold" if mis else "solid",
            color="blue" if mis else "black",
        )
    return graph


def to_dot(n: int) -> str:
    return nx.nx_pydot.to_pydot(move_graph(n)).to_string()
