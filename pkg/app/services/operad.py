"""Operadic grafting of moves, the hom-categories Hom(n, k), and their compositions.

A HomCell is a partial association: the letters of an n-letter word cut
into k consecutive blocks, each block bracketed by its own tree. A HomPath
moves every component independently while the partition stays fixed.
Horizontal composition grafts; vertical composition concatenates.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import FrozenSet, Sequence, Tuple

from app.errors import CompositionError, DomainError
from app.services.assoc_trees import (
    LEAF,
    Assoc,
    Partition,
    compositions,
    encode,
    enumerate_assocs,
    graft_object,
    leaf_address,
    left_comb,
    replace_at,
)
from app.services.catalan_complex import (
    ArityTriple,
    EdgePath,
    Move,
    is_mis,
    outgoing_moves,
    path_end,
    signed_edge_count,
)

logger = logging.getLogger(__name__)


def graft_move(m: Move, gs: Sequence[Assoc]) -> Move:
    """The same rotation inside graft_object(m.source, gs).

    Grafting only replaces leaves, so the site address is unchanged.
    """
    gs = tuple(gs)
    if len(gs) != m.source.leaves:
        raise DomainError(f"grafting a move of A{m.source.leaves} needs {m.source.leaves} trees, got {len(gs)}")
    return Move(graft_object(m.source, gs), m.site)


@dataclass(frozen=True)
class MonotonicityReport:
    before: ArityTriple
    after: ArityTriple

    @property
    def monotone(self) -> bool:
        return self.after.dominates(self.before)


def arity_monotonicity(m: Move, gs: Sequence[Assoc]) -> MonotonicityReport:
    return MonotonicityReport(before=m.arity, after=graft_move(m, gs).arity)


def preserves_mis(m: Move, gs: Sequence[Assoc]) -> bool:
    """False when an MIS move stops being MIS after grafting."""
    return not is_mis(m) or is_mis(graft_move(m, gs))


def grafted_arities(bracket: ArityTriple, n_prime: int) -> FrozenSet[ArityTriple]:
    """Every arity a root <i,j,k> move takes when grafted up to n' letters."""
    i, j, k = bracket
    base = Move(Assoc(left_comb(i), Assoc(left_comb(j), left_comb(k))), ())
    n = bracket.total
    if n_prime < n:
        raise DomainError(f"cannot graft A{n} down to A{n_prime}")
    return frozenset(
        graft_move(base, [left_comb(m) for m in partition.parts]).arity
        for partition in compositions(n_prime, n)
    )


@dataclass(frozen=True)
class HomCell:
    partition: Partition
    components: Tuple[Assoc, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.partition.k:
            raise DomainError(f"partition {self.partition} needs {self.partition.k} components")
        for m, c in zip(self.partition.parts, self.components):
            if c.leaves != m:
                raise DomainError(f"component {encode(c)} does not have {m} leaves")

    @property
    def n(self) -> int:
        return self.partition.total

    @property
    def k(self) -> int:
        return self.partition.k

    def render(self) -> str:
        """Letters run on across components: ((AB), (C(DE)), ...)."""
        out, start = [], 0
        for c in self.components:
            out.append(encode(c, start))
            start += c.leaves
        return "(" + ", ".join(out) + ")"

    @classmethod
    def identity(cls, k: int) -> "HomCell":
        return cls(Partition((1,) * k), (LEAF,) * k)


def hom_cells(n: int, k: int) -> Tuple[HomCell, ...]:
    if k > n:
        return ()
    return tuple(
        HomCell(partition, components)
        for partition in compositions(n, k)
        for components in product(*(enumerate_assocs(m) for m in partition.parts))
    )


def horizontal_compose(g: HomCell, f: HomCell) -> HomCell:
    """Graft the components of f (n -> k) into those of g (k -> l)."""
    if g.n != f.k:
        raise DomainError(f"cannot compose a cell on {g.n} letters after one with {f.k} components")
    blocks = g.partition.split(f.components)
    parts = g.partition.split(f.partition.parts)
    return HomCell(
        Partition(tuple(sum(p) for p in parts)),
        tuple(graft_object(gi, block) for gi, block in zip(g.components, blocks)),
    )


@dataclass(frozen=True)
class HomPath:
    """Componentwise edge paths over a fixed partition."""

    partition: Partition
    starts: Tuple[Assoc, ...]
    steps: Tuple[EdgePath, ...]

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(self.starts))
        object.__setattr__(self, "steps", tuple(tuple(s) for s in self.steps))
        if len(self.steps) != len(self.starts):
            raise DomainError("one edge path per component is required")
        HomCell(self.partition, self.starts)
        for start, steps in zip(self.starts, self.steps):
            path_end(start, steps)

    @property
    def ends(self) -> Tuple[Assoc, ...]:
        return tuple(path_end(start, steps) for start, steps in zip(self.starts, self.steps))

    @property
    def source(self) -> HomCell:
        return HomCell(self.partition, self.starts)

    @property
    def target(self) -> HomCell:
        return HomCell(self.partition, self.ends)

    @property
    def signed_counts(self) -> Tuple[int, ...]:
        return tuple(signed_edge_count(steps) for steps in self.steps)

    @classmethod
    def identity(cls, cell: HomCell) -> "HomPath":
        return cls(cell.partition, cell.components, ((),) * cell.k)


def vertical_compose(p2: HomPath, p1: HomPath) -> HomPath:
    """p1 followed by p2."""
    if p1.partition != p2.partition:
        raise CompositionError(f"partitions {p1.partition} and {p2.partition} differ")
    if p1.ends != p2.starts:
        raise CompositionError("paths do not meet: " + HomCell(p1.partition, p1.ends).render()
                               + " vs " + p2.source.render())
    return HomPath(p1.partition, p1.starts, tuple(a + b for a, b in zip(p1.steps, p2.steps)))


def horizontal_compose_paths(gamma: HomPath, phi: HomPath) -> HomPath:
    """gamma's moves grafted over phi's sources, then phi's moves in context."""
    if gamma.partition.total != phi.partition.k:
        raise CompositionError(f"cannot compose a path on {gamma.partition.total} letters "
                               f"after one with {phi.partition.k} components")
    start_blocks = gamma.partition.split(phi.starts)
    step_blocks = gamma.partition.split(phi.steps)
    start = horizontal_compose(gamma.source, phi.source)
    steps = []
    for g_start, g_steps, f_starts, f_steps in zip(gamma.starts, gamma.steps, start_blocks, step_blocks):
        path = [(graft_move(m, f_starts), sign) for m, sign in g_steps]
        top = path_end(g_start, g_steps)
        current = graft_object(top, f_starts)
        for offset, component in enumerate(f_steps):
            at = leaf_address(top, offset)
            for m, sign in component:
                if sign > 0:
                    move = Move(current, at + m.site)
                    current = move.target
                else:
                    current = replace_at(current, at, m.source)
                    move = Move(current, at + m.site)
                path.append((move, sign))
        steps.append(tuple(path))
    return HomPath(start.partition, start.components, tuple(steps))


def check_interchange(phi: HomPath, phi2: HomPath, gamma: HomPath, gamma2: HomPath) -> bool:
    """(γ' ∘H φ') ∘V (γ ∘H φ) against (γ' ∘V γ) ∘H (φ' ∘V φ).

    The two sides must share endpoints and have equal signed edge counts per
    component, so their difference loop is trivial in every scalar model.
    """
    lhs = vertical_compose(horizontal_compose_paths(gamma2, phi2), horizontal_compose_paths(gamma, phi))
    rhs = horizontal_compose_paths(vertical_compose(gamma2, gamma), vertical_compose(phi2, phi))
    return (
        lhs.partition == rhs.partition
        and lhs.starts == rhs.starts
        and lhs.ends == rhs.ends
        and lhs.signed_counts == rhs.signed_counts
    )


def check_operad_associativity(h: Assoc, gs: Sequence[Assoc], fs: Sequence[Assoc]) -> bool:
    gs, fs = tuple(gs), tuple(fs)
    blocks = Partition(tuple(g.leaves for g in gs)).split(fs)
    inner = tuple(graft_object(g, block) for g, block in zip(gs, blocks))
    if graft_object(h, inner) != graft_object(graft_object(h, gs), fs):
        return False
    return all(graft_move(m, inner) == graft_move(graft_move(m, gs), fs) for m in outgoing_moves(h))
