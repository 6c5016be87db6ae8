"""Group presentations of pi(A_n).

Two independent constructions are provided:

* the inductive scheme, where the generators of A_n are the generators of
  smaller groupoids placed on the left (λ) or right (ρ) of a product, plus
  the new brackets <i,j,k>; relations come from naturality squares, from
  brackets lying in the MIS, from smaller groupoids, and from products;
* the complex oracle, which reads a presentation straight off the 2-complex
  relative to a spanning tree of MIS edges.

Both feed `simplify`, which kills and merges generators, reduces words,
and optionally eliminates generators that occur exactly once.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import chain
from typing import Dict, Hashable, List, Mapping, Sequence, Set, Tuple

from app.errors import DomainError, InvariantViolation
from app.services.catalan_complex import (
    FILL_SQUARES,
    ArityTriple,
    GeneratorName,
    Move,
    PrefixSymbol,
    build_complex,
    classify_move,
    lam,
    mis_spanning_tree,
    rho,
)

logger = logging.getLogger(__name__)

Letter = Tuple[Hashable, int]
Word = Tuple[Letter, ...]

LISTING_TABULATED = "tabulated"
LISTING_FULL = "full"


def invert(word: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def free_reduce(word: Sequence[Letter]) -> Word:
    out: List[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word: Sequence[Letter]) -> Word:
    word = free_reduce(word)
    start, stop = 0, len(word)
    while stop - start >= 2 and word[start][0] == word[stop - 1][0] and word[start][1] == -word[stop - 1][1]:
        start += 1
        stop -= 1
    return word[start:stop]


def word_key(word: Sequence[Letter]) -> tuple:
    return tuple((g.sort_key, -e) for g, e in word)


def normalize_relator(word: Sequence[Letter]) -> Word:
    """Least cyclic rotation of the relator or of its inverse."""
    word = cyclic_reduce(word)
    if not word:
        return ()
    rotations = [w[i:] + w[:i] for w in (word, invert(word)) for i in range(len(w))]
    return min(rotations, key=word_key)


def commutator(x: Hashable, y: Hashable) -> Word:
    return ((x, 1), (y, 1), (x, -1), (y, -1))


def commutator_pair(word: Sequence[Letter]):
    """(x, y) when the word is x^a y^b x^-a y^-b with x != y, else None."""
    if len(word) != 4:
        return None
    (x, a), (y, b), (x2, a2), (y2, b2) = word
    if x != y and x == x2 and y == y2 and a2 == -a and b2 == -b:
        return x, y
    return None


def render_letter(letter: Letter) -> str:
    g, e = letter
    label = g.label
    return label if e > 0 else f"{label}^-1"


def render_word(word: Sequence[Letter]) -> str:
    return " * ".join(render_letter(letter) for letter in word) if word else "e"


def _substitute(word: Sequence[Letter], mapping: Mapping) -> Word:
    out: List[Letter] = []
    for g, e in word:
        image = mapping.get(g)
        if image is None:
            out.append((g, e))
        else:
            out.extend(image if e > 0 else invert(image))
    return free_reduce(out)


@dataclass(frozen=True)
class EdgeGenerator:
    """Oracle generator: one edge of the complex."""

    index: int
    move: Move = field(compare=False, repr=False)

    @property
    def name(self) -> GeneratorName:
        return classify_move(self.move)

    @property
    def label(self) -> str:
        return f"e{self.index}[{self.name}]"

    @property
    def sort_key(self):
        return (self.index,)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Presentation:
    n: int
    provenance: str  # "scheme" or "oracle"
    generators: Tuple[Hashable, ...]
    relators: Tuple[Word, ...]
    # removed generator -> word over `generators`
    substitution: Mapping = field(default_factory=dict, repr=False, compare=False)
    killed: Tuple = ()
    merged: Tuple = ()
    eliminated: Tuple = ()

    def __post_init__(self):
        live = set(self.generators)
        for relator in self.relators:
            for g, _ in relator:
                if g not in live:
                    raise InvariantViolation(f"relator {render_word(relator)} uses unknown generator {g}")

    def rewrite(self, word: Sequence[Letter]) -> Word:
        """Express a word in the original generators over the live ones."""
        return _substitute(word, self.substitution)


@dataclass(frozen=True)
class PresentationCounts:
    generators: int
    relators: int
    killed: int
    merged: int
    eliminated: int

    def as_dict(self) -> Dict[str, int]:
        return {
            "generators": self.generators,
            "relators": self.relators,
            "killed": self.killed,
            "merged": self.merged,
            "eliminated": self.eliminated,
        }


def counts(p: Presentation) -> PresentationCounts:
    return PresentationCounts(
        generators=len(p.generators),
        relators=len(p.relators),
        killed=len(p.killed),
        merged=len(p.merged),
        eliminated=len(p.eliminated),
    )


class _Reducer:
    """Substitution bookkeeping; values are always words over live generators."""

    def __init__(self, p: Presentation):
        self.subst: Dict[Hashable, Word] = dict(p.substitution)
        self.users: Dict[Hashable, Set[Hashable]] = defaultdict(set)
        for g, image in self.subst.items():
            for h, _ in image:
                self.users[h].add(g)
        self.killed = list(p.killed)
        self.merged = list(p.merged)
        self.eliminated = list(p.eliminated)

    def resolve(self, word: Sequence[Letter]) -> Word:
        return _substitute(word, self.subst)

    def remove(self, g: Hashable, image: Word):
        update = {g: image}
        for key in self.users.pop(g, ()):
            self.subst[key] = _substitute(self.subst[key], update)
            for h, _ in self.subst[key]:
                self.users[h].add(key)
        self.subst[g] = image
        for h, _ in image:
            self.users[h].add(g)

    def kill(self, g: Hashable):
        self.remove(g, ())
        self.killed.append(g)

    def merge(self, relator: Word):
        (g, a), (h, b) = relator
        if h.sort_key < g.sort_key:
            (g, a), (h, b) = (h, b), (g, a)
        # g^a h^b = e, keep g
        self.remove(h, ((g, -a * b),))
        self.merged.append(h)


def simplify(p: Presentation, tietze: bool = True) -> Presentation:
    """Kill g = e, merge g = h^±1, reduce, drop empty relators; then Tietze.

    The kill/merge loop runs to a fixpoint. With `tietze`, any generator
    occurring exactly once in exactly one relator is solved for and removed
    together with that relator, until none is left.
    """
    reducer = _Reducer(p)
    relators = {normalize_relator(reducer.resolve(r)) for r in p.relators}
    relators.discard(())
    changed = True
    while changed:
        changed = False
        kept = set()
        for relator in sorted(relators, key=word_key):
            relator = normalize_relator(reducer.resolve(relator))
            if not relator:
                continue
            if len(relator) == 1:
                reducer.kill(relator[0][0])
                changed = True
            elif len(relator) == 2 and relator[0][0] != relator[1][0]:
                reducer.merge(relator)
                changed = True
            else:
                kept.add(relator)
        relators = kept

    if tietze:
        while True:
            occurrences = Counter(g for relator in relators for g, _ in relator)
            pick = None
            for relator in sorted(relators, key=word_key):
                singles = [g for g, _ in relator if occurrences[g] == 1]
                if singles:
                    pick = relator, max(singles, key=lambda g: g.sort_key)
                    break
            if pick is None:
                break
            relator, g = pick
            at = next(i for i, (h, _) in enumerate(relator) if h == g)
            exponent = relator[at][1]
            rest = relator[at + 1:] + relator[:at]
            reducer.remove(g, free_reduce(invert(rest) if exponent > 0 else rest))
            reducer.eliminated.append(g)
            relators.discard(relator)

    live = tuple(g for g in p.generators if g not in reducer.subst)
    result = Presentation(
        n=p.n,
        provenance=p.provenance,
        generators=live,
        relators=tuple(sorted(relators, key=word_key)),
        substitution=reducer.subst,
        killed=tuple(reducer.killed),
        merged=tuple(reducer.merged),
        eliminated=tuple(reducer.eliminated),
    )
    logger.debug(
        "simplified %s presentation of A%d: %d -> %d generators, %d relators",
        p.provenance, p.n, len(p.generators), len(live), len(result.relators),
    )
    return result


@lru_cache(maxsize=None)
def presentation_from_complex(n: int, fill: str = FILL_SQUARES, simplified: bool = True) -> Presentation:
    """Edges as generators; MIS tree edges and filled cell boundaries as relators."""
    complex_ = build_complex(n, fill)
    generators = tuple(EdgeGenerator(i, m) for i, m in enumerate(complex_.edges))
    tree = mis_spanning_tree(complex_)
    tree_edges = sorted(complex_.edge_index[m] for _, _, m in tree.edges(data="move"))
    relators = [((generators[i], 1),) for i in tree_edges]
    for cell in complex_.cells:
        relators.append(tuple((generators[complex_.edge_index[m]], sign) for m, sign in cell.boundary))
    raw = Presentation(n, "oracle", generators, tuple(relators))
    if not simplified:
        return raw
    result = simplify(raw)
    logger.info("oracle presentation of A%d (%s): %d generators, %d relators",
                n, fill, len(result.generators), len(result.relators))
    return result


def quotient_presentation(n: int, bracket: ArityTriple, fill: str = FILL_SQUARES) -> Presentation:
    """Oracle presentation with every edge whose arity dominates `bracket` set to e."""
    raw = presentation_from_complex(n, fill, simplified=False)
    extra = tuple(((g, 1),) for g in raw.generators if g.move.arity.dominates(bracket))
    return simplify(replace(raw, relators=raw.relators + extra))


def new_brackets(n: int) -> Tuple[ArityTriple, ...]:
    """<i,j,k> with i+j+k = n, rows of decreasing j, i increasing in a row."""
    return tuple(
        ArityTriple(i, j, n - i - j)
        for j in range(n - 2, 0, -1)
        for i in range(1, n - j)
    )


@dataclass(frozen=True)
class SchemeRelation:
    """lhs = rhs, tagged with the square or rule it comes from."""

    kind: str
    lhs: Word
    rhs: Word

    @property
    def relator(self) -> Word:
        return free_reduce(self.lhs + invert(self.rhs))

    def prefixed(self, symbol: PrefixSymbol) -> "SchemeRelation":
        return SchemeRelation(self.kind, prefix_word(self.lhs, symbol), prefix_word(self.rhs, symbol))

    def render(self) -> str:
        return f"{render_word(self.lhs)} = {render_word(self.rhs)}"


def prefix_word(word: Sequence[Letter], symbol: PrefixSymbol) -> Word:
    return tuple((g.prefixed(symbol), e) for g, e in word)


def _one(name: GeneratorName) -> Word:
    return ((name, 1),)


def _conjugation(kind: str, bracket: Word, before: Word, after: Word) -> SchemeRelation:
    return SchemeRelation(kind, free_reduce(bracket + before + invert(bracket)), after)


def _product(x: GeneratorName, y: GeneratorName) -> SchemeRelation:
    return SchemeRelation("product", ((x, 1), (y, 1)), ((y, 1), (x, 1)))


def _unique_relators(relations: Sequence[SchemeRelation]) -> Tuple[Word, ...]:
    seen, out = set(), []
    for relation in relations:
        relator = relation.relator
        key = normalize_relator(relator)
        if key and key not in seen:
            seen.add(key)
            out.append(relator)
    return tuple(out)


def _bracket_relations(n: int, generators_of, rename) -> List[SchemeRelation]:
    """Naturality squares around each new bracket, and MIS brackets = e.

    `generators_of(m)` lists the generators of A_m to transport; `rename`
    turns a prefixed name into a word over the generators of A_n.
    """
    relations = []
    for t in new_brackets(n):
        i, j, k = t
        bracket = _one(GeneratorName((), t))
        for x in generators_of(i):
            relations.append(_conjugation(
                "conjugate-left", bracket, rename(x.prefixed(rho(k), rho(j))), rename(x.prefixed(rho(j + k)))))
        for y in generators_of(j):
            relations.append(_conjugation(
                "conjugate-middle", bracket, rename(y.prefixed(rho(k), lam(i))), rename(y.prefixed(lam(i), rho(k)))))
        for z in generators_of(k):
            relations.append(_conjugation(
                "conjugate-right", bracket, rename(z.prefixed(lam(i + j))), rename(z.prefixed(lam(i), lam(j)))))
        if j == 1:
            relations.append(SchemeRelation("mis", bracket, ()))
    return relations


def _product_relations(n: int, generators_of) -> List[SchemeRelation]:
    return [
        _product(x.prefixed(rho(n - a)), y.prefixed(lam(a)))
        for a in range(1, n)
        for x in generators_of(a)
        for y in generators_of(n - a)
    ]


@lru_cache(maxsize=None)
def scheme_generators(n: int) -> Tuple[GeneratorName, ...]:
    """Raw recursive generator set, deduplicated by name, in table order."""
    if n < 1:
        raise DomainError(f"scheme needs n >= 1, got {n}")
    names = []
    for a in range(1, n):
        names.extend(g.prefixed(lam(a)) for g in scheme_generators(n - a))
        names.extend(g.prefixed(rho(n - a)) for g in scheme_generators(a))
    names.extend(GeneratorName((), t) for t in new_brackets(n))
    return tuple(dict.fromkeys(names))


@lru_cache(maxsize=None)
def _full_relations(n: int) -> Tuple[SchemeRelation, ...]:
    relations = _bracket_relations(n, scheme_generators, _one)
    for a in range(1, n):
        relations.extend(r.prefixed(lam(a)) for r in _full_relations(n - a))
        relations.extend(r.prefixed(rho(n - a)) for r in _full_relations(a))
    relations.extend(_product_relations(n, scheme_generators))
    return tuple(relations)


def scheme_relations(n: int) -> Tuple[Word, ...]:
    """Raw recursive relators, deduplicated up to cyclic rotation and inversion."""
    if n < 1:
        raise DomainError(f"scheme needs n >= 1, got {n}")
    return _unique_relators(_full_relations(n))


@dataclass(frozen=True)
class SchemeLevel:
    """One level of the scheme as it is tabulated.

    Lower levels enter only through their surviving generators and their
    reduced relators, so names killed or merged below never reappear.
    """

    n: int
    columns: Tuple[Tuple[Tuple[int, int], Tuple[GeneratorName, ...]], ...]
    new: Tuple[GeneratorName, ...]
    relations: Tuple[SchemeRelation, ...]
    raw: Presentation
    reduced: Presentation  # kills and merges only
    survivors: Tuple[GeneratorName, ...]  # reduced generators in table order

    @property
    def old_count(self) -> int:
        return len(self.raw.generators) - len(self.new)

    @property
    def surviving_new(self) -> int:
        return sum(1 for g in self.survivors if not g.prefix)


def lift(name: GeneratorName) -> Word:
    """Word over the tabulated generators of A_w, w = name.weight."""
    if not name.prefix:
        return _one(name)
    head = name.prefix[0]
    inner = normalize(GeneratorName(name.prefix[1:], name.arity))
    return prefix_word(inner, head)


def normalize(name: GeneratorName) -> Word:
    """Word over the surviving generators of A_w, w = name.weight."""
    return scheme_level(name.weight).reduced.rewrite(lift(name))


def _survivors(level: int) -> Tuple[GeneratorName, ...]:
    return scheme_level(level).survivors


@lru_cache(maxsize=None)
def scheme_level(n: int) -> SchemeLevel:
    if n < 1:
        raise DomainError(f"scheme needs n >= 1, got {n}")
    columns = []
    for a in range(1, n):
        b = n - a
        names = tuple(s.prefixed(lam(a)) for s in _survivors(b)) + tuple(s.prefixed(rho(b)) for s in _survivors(a))
        columns.append(((a, b), names))
    new = tuple(GeneratorName((), t) for t in new_brackets(n))
    generators = tuple(dict.fromkeys(chain(chain.from_iterable(names for _, names in columns), new)))

    relations = _bracket_relations(n, _survivors, lift)
    for a in range(1, n):
        relations.extend(
            SchemeRelation("inherited", prefix_word(r, lam(a)), ()) for r in scheme_level(n - a).reduced.relators
        )
        relations.extend(
            SchemeRelation("inherited", prefix_word(r, rho(n - a)), ()) for r in scheme_level(a).reduced.relators
        )
    relations.extend(_product_relations(n, _survivors))

    raw = Presentation(n, "scheme", generators, _unique_relators(relations))
    reduced = simplify(raw, tietze=False)
    position = {}
    for index, g in enumerate(raw.generators):
        image = reduced.rewrite(_one(g))
        if len(image) == 1:
            position.setdefault(image[0][0], index)
    survivors = tuple(sorted(reduced.generators, key=lambda g: position[g]))
    logger.debug("scheme level %d: %d listed, %d surviving", n, len(generators), len(survivors))
    return SchemeLevel(
        n=n,
        columns=tuple(columns),
        new=new,
        relations=tuple(r for r in relations if r.relator),
        raw=raw,
        reduced=reduced,
        survivors=survivors,
    )


def scheme_presentation(
    n: int, listing: str = LISTING_TABULATED, simplified: bool = True, tietze: bool = True
) -> Presentation:
    if listing == LISTING_TABULATED:
        level = scheme_level(n)
        if not simplified:
            return level.raw
        return simplify(level.reduced) if tietze else level.reduced
    if listing == LISTING_FULL:
        raw = Presentation(n, "scheme", scheme_generators(n), scheme_relations(n))
        return simplify(raw, tietze=tietze) if simplified else raw
    raise DomainError(f"unknown listing {listing!r}")
