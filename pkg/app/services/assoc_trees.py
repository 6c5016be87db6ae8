"""Binary associations of n letters: enumeration, canonical strings, surgery, grafting."""
import logging
import math
import string
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional, Sequence, Tuple

from app.errors import AddressError, DomainError, ParseError

logger = logging.getLogger(__name__)

LETTERS = string.ascii_uppercase + string.ascii_lowercase

_CLOSERS = {"(": ")", "[": "]"}


class Step(str, Enum):
    L = "L"
    R = "R"


Address = Tuple[Step, ...]
ROOT: Address = ()


@dataclass(frozen=True, eq=False)
class Assoc:
    """Full binary tree with positional leaves; a leaf has no children.

    Trees compare and hash by `shape`, the encoding with every letter
    replaced by "*". Ordering on shapes equals ordering on canonical
    encodings, since letters at equal positions of equal prefixes agree.
    """

    left: Optional["Assoc"] = None
    right: Optional["Assoc"] = None
    shape: str = field(init=False, repr=False)
    leaves: int = field(init=False, repr=False)

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise DomainError("an internal node needs exactly two children")
        if self.left is None:
            shape, leaves = "*", 1
        else:
            shape = f"({self.left.shape}{self.right.shape})"
            leaves = self.left.leaves + self.right.leaves
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "leaves", leaves)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __eq__(self, other):
        return isinstance(other, Assoc) and self.shape == other.shape

    def __hash__(self):
        return hash(self.shape)

    def __lt__(self, other: "Assoc") -> bool:
        return self.shape < other.shape

    def __repr__(self):
        return f"Assoc({encode(self)!r})"


LEAF = Assoc()


def catalan(n: int) -> int:
    """Number of associations of n letters."""
    if n < 1:
        raise DomainError(f"catalan needs n >= 1, got {n}")
    return math.comb(2 * n - 2, n - 1) // n


@lru_cache(maxsize=None)
def enumerate_assocs(n: int) -> Tuple[Assoc, ...]:
    """All trees with n leaves, sorted by canonical encoding."""
    if n < 1:
        raise DomainError(f"associations need n >= 1, got {n}")
    if n == 1:
        return (LEAF,)
    trees = [
        Assoc(left, right)
        for a in range(1, n)
        for left in enumerate_assocs(a)
        for right in enumerate_assocs(n - a)
    ]
    trees.sort(key=lambda t: t.shape)
    logger.debug("enumerated %d associations of %d letters", len(trees), n)
    return tuple(trees)


def encode(t: Assoc, start: int = 0) -> str:
    """Canonical string; letters start at LETTERS[start]."""
    if start + t.leaves > len(LETTERS):
        raise DomainError(f"cannot letter {start + t.leaves} leaves")
    letters = iter(LETTERS[start:])
    return "".join(next(letters) if ch == "*" else ch for ch in t.shape)


class _Reader:
    def __init__(self, text: str, strict: bool):
        self.text = text
        self.strict = strict
        self.pos = 0
        self.letters = 0

    def peek(self) -> str:
        if not self.strict:
            while self.pos < len(self.text) and self.text[self.pos].isspace():
                self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def item(self) -> Assoc:
        ch = self.peek()
        if ch == "(" or (ch == "[" and not self.strict):
            self.pos += 1
            left = self.item()
            right = self.item()
            closer = _CLOSERS[ch]
            if self.peek() != closer:
                raise ParseError(f"expected {closer!r}", self.pos)
            self.pos += 1
            return Assoc(left, right)
        if ch.isalpha():
            if self.strict:
                expected = LETTERS[self.letters] if self.letters < len(LETTERS) else None
                if ch != expected:
                    raise ParseError(f"expected letter {expected!r}, found {ch!r}", self.pos)
            self.letters += 1
            self.pos += 1
            return LEAF
        if not ch:
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected character {ch!r}", self.pos)


def decode(s: str, strict: bool = True) -> Assoc:
    """Parse a tree string.

    Strict mode accepts only canonical encodings. Relaxed mode also takes
    square brackets, any letters, whitespace, and a missing outer pair
    around exactly two top-level items ("A[[BC]D]").
    """
    reader = _Reader(s, strict)
    tree = reader.item()
    if reader.peek() and not strict:
        tree = Assoc(tree, reader.item())
    if reader.peek():
        raise ParseError("trailing input", reader.pos)
    return tree


def parse_address(text: str) -> Address:
    """'' or 'root' is the root; otherwise a string over L/R."""
    text = text.strip().upper()
    if text in ("", "ROOT"):
        return ROOT
    try:
        return tuple(Step(ch) for ch in text)
    except ValueError:
        raise DomainError(f"address must be a word over L and R, got {text!r}")


def format_address(address: Address) -> str:
    return "".join(step.value for step in address) or "root"


def subtree_at(t: Assoc, address: Sequence[Step]) -> Assoc:
    node = t
    for depth, step in enumerate(address):
        if node.is_leaf:
            raise AddressError(
                f"address {format_address(tuple(address))} leaves {encode(t)} at depth {depth}"
            )
        node = node.left if step == Step.L else node.right
    return node


def replace_at(t: Assoc, address: Sequence[Step], s: Assoc) -> Assoc:
    if not address:
        return s
    if t.is_leaf:
        raise AddressError(f"address {format_address(tuple(address))} leaves the tree")
    head, rest = address[0], address[1:]
    if head == Step.L:
        return Assoc(replace_at(t.left, rest, s), t.right)
    return Assoc(t.left, replace_at(t.right, rest, s))


def leaf_address(t: Assoc, index: int) -> Address:
    """Address of the index-th leaf, counted from 0."""
    if not 0 <= index < t.leaves:
        raise AddressError(f"leaf {index} out of range for {t.leaves} leaves")
    path = []
    node = t
    while not node.is_leaf:
        if index < node.left.leaves:
            path.append(Step.L)
            node = node.left
        else:
            index -= node.left.leaves
            path.append(Step.R)
            node = node.right
    return tuple(path)


def internal_sites(t: Assoc, prefix: Address = ROOT) -> Iterator[Address]:
    """Addresses of internal nodes in preorder."""
    if t.is_leaf:
        return
    yield prefix
    yield from internal_sites(t.left, prefix + (Step.L,))
    yield from internal_sites(t.right, prefix + (Step.R,))


def graft_object(f: Assoc, gs: Sequence[Assoc]) -> Assoc:
    """Substitute gs[i] for the i-th leaf of f."""
    gs = tuple(gs)
    if len(gs) != f.leaves:
        raise DomainError(f"grafting needs {f.leaves} trees, got {len(gs)}")
    return _graft(f, gs)


def _graft(f: Assoc, gs: Tuple[Assoc, ...]) -> Assoc:
    if f.is_leaf:
        return gs[0]
    a = f.left.leaves
    return Assoc(_graft(f.left, gs[:a]), _graft(f.right, gs[a:]))


def left_comb(n: int) -> Assoc:
    """(((AB)C)...)"""
    if n < 1:
        raise DomainError(f"comb needs n >= 1, got {n}")
    tree = LEAF
    for _ in range(n - 1):
        tree = Assoc(tree, LEAF)
    return tree


def right_comb(n: int) -> Assoc:
    if n < 1:
        raise DomainError(f"comb needs n >= 1, got {n}")
    tree = LEAF
    for _ in range(n - 1):
        tree = Assoc(LEAF, tree)
    return tree


def random_assoc(n: int, rng) -> Assoc:
    """Random tree; every top split is equally likely at each node."""
    if n < 1:
        raise DomainError(f"random tree needs n >= 1, got {n}")
    if n == 1:
        return LEAF
    a = int(rng.integers(1, n))
    return Assoc(random_assoc(a, rng), random_assoc(n - a, rng))


@dataclass(frozen=True)
class Partition:
    """Ordered partition m_1 + ... + m_k of its total into positive parts."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(m) for m in self.parts)
        if not parts or any(m < 1 for m in parts):
            raise DomainError(f"partition parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def blocks(self) -> Tuple[range, ...]:
        """Index ranges pi^-1(i) of the underlying surjection."""
        out, start = [], 0
        for m in self.parts:
            out.append(range(start, start + m))
            start += m
        return tuple(out)

    def split(self, items: Sequence) -> Tuple[tuple, ...]:
        items = tuple(items)
        if len(items) != self.total:
            raise DomainError(f"partition of {self.total} cannot split {len(items)} items")
        return tuple(items[block.start:block.stop] for block in self.blocks())

    def __str__(self):
        return "+".join(str(m) for m in self.parts)


def compositions(n: int, k: int) -> Tuple[Partition, ...]:
    """All ordered partitions of n into k positive parts; empty when k > n."""
    if n < 1 or k < 1:
        raise DomainError(f"compositions need n, k >= 1, got n={n}, k={k}")
    out = []
    for cuts in combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        out.append(Partition(tuple(b - a for a, b in zip(bounds, bounds[1:]))))
    return tuple(out)
