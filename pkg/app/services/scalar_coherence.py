"""Scalar models of A_n: every reassociation acts by the same central unit ζ.

A loop of reassociations then acts by ζ^d, d being its signed edge count,
so coherence at level n reduces to the subgroup generated by the
exponents of the generator loops of pi(A_n).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from app.errors import DomainError
from app.models.schemas import CoherenceReport, Theorem1Report
from app.services.assoc_trees import encode
from app.services.catalan_complex import (
    FILL_ALL,
    FILL_SQUARES,
    ArityTriple,
    EdgePath,
    SignedMove,
    build_complex,
    mis_spanning_tree,
    path_end,
    path_start,
    pentagons,
    signed_edge_count,
    tree_path,
)
from app.services.group_analysis import AbelianInvariants, abelian_invariants
from app.services.operad import grafted_arities
from app.services.presentation import EdgeGenerator, presentation_from_complex, quotient_presentation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalarModel:
    """ζ generating a cyclic group of `order`; 0 stands for infinite cyclic."""

    order: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise DomainError(f"zeta order must be >= 0, got {self.order}")

    @property
    def infinite(self) -> bool:
        return self.order == 0

    def element_order(self, d: int) -> Optional[int]:
        """Order of ζ^d; None when infinite."""
        if self.infinite:
            return 1 if d == 0 else None
        return self.order // math.gcd(self.order, d % self.order)

    def is_identity(self, d: int) -> bool:
        return self.element_order(d) == 1


@dataclass(frozen=True)
class LoopValue:
    exponent: int

    def order(self, model: ScalarModel) -> Optional[int]:
        return model.element_order(self.exponent)

    def __str__(self):
        return f"ζ^{self.exponent}"


def loop_value(path: Sequence[SignedMove], model: ScalarModel = ScalarModel()) -> LoopValue:
    """Forward edges contribute ζ, backward edges ζ^-1."""
    path = tuple(path)
    if path:
        start = path_start(path)
        end = path_end(start, path)
        if end != start:
            raise DomainError(f"path from {encode(start)} ends at {encode(end)}, not a loop")
    return LoopValue(signed_edge_count(path))


def generator_loop(n: int, edge_index: int) -> EdgePath:
    """MIS tree path to the edge source, the edge, MIS tree path back."""
    complex_ = build_complex(n)
    tree = mis_spanning_tree(complex_)
    root = complex_.vertices[0]
    m = complex_.edges[edge_index]
    return tree_path(tree, root, m.source) + ((m, 1),) + tree_path(tree, m.target, root)


def generator_image(n: int, model: ScalarModel = ScalarModel()) -> Dict[EdgeGenerator, LoopValue]:
    """Loop value of every surviving generator of the oracle presentation."""
    if n < 3:
        raise DomainError(f"generator images need n >= 3, got {n}")
    p = presentation_from_complex(n, FILL_SQUARES)
    return {g: loop_value(generator_loop(n, g.index), model) for g in p.generators}


@dataclass(frozen=True)
class ImageSubgroup:
    """<ζ^gcd> inside the model; gcd 0 means the trivial subgroup."""

    gcd: int
    order: Optional[int]

    @property
    def trivial(self) -> bool:
        return self.order == 1


def image_subgroup(n: int, model: ScalarModel = ScalarModel()) -> ImageSubgroup:
    g = 0
    for value in generator_image(n, model).values():
        g = math.gcd(g, value.exponent)
    return ImageSubgroup(gcd=g, order=model.element_order(g))


def pentagon_order(model: ScalarModel) -> Optional[int]:
    """Obstruction order: the order of the value of the A_4 pentagon."""
    (face,) = pentagons(4)
    return loop_value(face.boundary, model).order(model)


def maclane_h1(n: int) -> AbelianInvariants:
    """Abelian invariants of pi(A_n) with pentagons filled; trivial by coherence."""
    if not 4 <= n <= 8:
        raise DomainError(f"the filled-pentagon check runs for 4 <= n <= 8, got {n}")
    return abelian_invariants(presentation_from_complex(n, FILL_ALL))


def _expected_arities(bracket: ArityTriple, n_prime: int):
    return frozenset(
        ArityTriple(i, j, n_prime - i - j)
        for i in range(bracket.i, n_prime)
        for j in range(bracket.j, n_prime - i)
        if n_prime - i - j >= bracket.k
    )


def _theorem1_inputs(n_prime: int, bracket: ArityTriple):
    if bracket.j < 2:
        raise DomainError(f"bracket {bracket} lies in the MIS and is already trivial")
    if not bracket.total <= n_prime <= 8:
        raise DomainError(f"need {bracket.total} <= n' <= 8, got {n_prime}")
    return grafted_arities(bracket, n_prime), _expected_arities(bracket, n_prime)


def theorem1_check(n: int, n_prime: int, bracket: ArityTriple) -> bool:
    """Every componentwise larger bracket of weight n' is a grafting of `bracket`."""
    if bracket.total != n:
        raise DomainError(f"bracket {bracket} does not have weight {n}")
    reached, expected = _theorem1_inputs(n_prime, bracket)
    return expected <= reached


def theorem1_report(n_prime: int, bracket: ArityTriple) -> Theorem1Report:
    reached, expected = _theorem1_inputs(n_prime, bracket)
    quotient = abelian_invariants(quotient_presentation(n_prime, bracket))
    return Theorem1Report(
        n=bracket.total,
        n_prime=n_prime,
        bracket=tuple(bracket),
        reached=sorted(tuple(t) for t in reached),
        expected=sorted(tuple(t) for t in expected),
        monotone=all(t.dominates(bracket) for t in reached),
        covered=expected <= reached,
        quotient_free_rank=quotient.free_rank,
        quotient_torsion=list(quotient.torsion),
    )


def coherence_report(n: int, zeta_order: int = 0) -> CoherenceReport:
    model = ScalarModel(zeta_order)
    images = generator_image(n, model)
    subgroup = image_subgroup(n, model)
    logger.info("A%d in Z/%s: image gcd %d", n, zeta_order or "inf", subgroup.gcd)
    return CoherenceReport(
        n=n,
        zeta_order=zeta_order,
        generator_exponents={g.label: value.exponent for g, value in images.items()},
        image_gcd=subgroup.gcd,
        image_order=subgroup.order,
        pentagon_order=pentagon_order(model),
        coherent=subgroup.trivial,
    )
