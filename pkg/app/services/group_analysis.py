"""Abelian invariants and freeness verdicts for presentations."""
import logging
from dataclasses import dataclass
from typing import Tuple, Union

from app.services.integer_matrix import IntMatrix, smith_normal_form
from app.services.presentation import Presentation, commutator_pair, render_word, simplify

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] + [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts)


@dataclass(frozen=True)
class Free:
    rank: int

    def __str__(self):
        return f"free of rank {self.rank}"


@dataclass(frozen=True)
class NonFree:
    # isolated commutator relators, each rendered as a word
    witnesses: Tuple[str, ...]

    def __str__(self):
        return "not free: " + "; ".join(self.witnesses)


@dataclass(frozen=True)
class Unknown:
    def __str__(self):
        return "unknown"


FreenessVerdict = Union[Free, NonFree, Unknown]


def abelianize(p: Presentation) -> IntMatrix:
    """Exponent sums: one row per relator, one column per generator."""
    column = {g: c for c, g in enumerate(p.generators)}
    rows = []
    for relator in p.relators:
        row = {}
        for g, e in relator:
            row[column[g]] = row.get(column[g], 0) + e
        rows.append(row)
    return IntMatrix(len(rows), len(p.generators), rows)


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    form = smith_normal_form(abelianize(p))
    invariants = AbelianInvariants(
        free_rank=len(p.generators) - form.rank,
        torsion=tuple(d for d in form.invariants if d > 1),
    )
    logger.debug("abelianization of %s A%d: %s", p.provenance, p.n, invariants)
    return invariants


def freeness_verdict(p: Presentation) -> FreenessVerdict:
    """Free(k) with no relators left; NonFree on an isolated commutator [x, y].

    An isolated commutator splits off a Z x Z free factor, and Z x Z is not
    a subgroup of any free group. Anything else is Unknown.
    """
    p = simplify(p, tietze=True)
    if not p.relators:
        return Free(len(p.generators))
    occurrences = {}
    for index, relator in enumerate(p.relators):
        for g, _ in relator:
            occurrences.setdefault(g, set()).add(index)
    witnesses = []
    for index, relator in enumerate(p.relators):
        pair = commutator_pair(relator)
        if pair and all(occurrences[g] == {index} for g in pair):
            witnesses.append(render_word(relator))
    if witnesses:
        return NonFree(tuple(witnesses))
    return Unknown()


def equivalent_abelianization(p1: Presentation, p2: Presentation) -> bool:
    return abelian_invariants(p1) == abelian_invariants(p2)
