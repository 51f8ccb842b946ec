"""Taxa, unordered taxon pairs and binary relations on the pair set of a taxon universe.

A relation is stored as one adjacency bitset per pair index: bit ``j`` of
``rows[i]`` is set iff the constraint ``(pairs[i], pairs[j])`` is present.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Union

NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True, order=True)
class TaxonPair:
    """Unordered pair ``{lo, hi}``; ``lo == hi`` encodes a singleton."""

    lo: str
    hi: str

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            lo, hi = self.hi, self.lo
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def __iter__(self) -> Iterator[str]:
        yield self.lo
        yield self.hi

    def __str__(self) -> str:
        if len(self.lo) == 1 and len(self.hi) == 1:
            return self.lo + self.hi
        return f"{self.lo}-{self.hi}"


PairLike = Union[TaxonPair, Sequence[str], str]


def as_pair(value: PairLike) -> TaxonPair:
    """Coerce ``("a", "b")``, ``"a b"``, ``"ab"`` (one-letter taxa) or a pair."""
    if isinstance(value, TaxonPair):
        return value
    if isinstance(value, str):
        parts = value.split()
        if len(parts) == 1:
            token = parts[0]
            if "-" in token:
                parts = token.split("-")
            elif len(token) == 2:
                parts = [token[0], token[1]]
            elif len(token) == 1:
                parts = [token, token]
        if len(parts) != 2:
            raise ValueError(f"cannot read a taxon pair from {value!r}")
        return TaxonPair(parts[0], parts[1])
    a, b = value
    return TaxonPair(a, b)


@dataclass(frozen=True)
class Constraint:
    """Ordered pair of taxon pairs: ``lca(lower)`` sits below ``lca(upper)``."""

    lower: TaxonPair
    upper: TaxonPair

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", as_pair(self.lower))
        object.__setattr__(self, "upper", as_pair(self.upper))

    def reversed(self) -> Constraint:
        return Constraint(self.upper, self.lower)

    def __iter__(self) -> Iterator[TaxonPair]:
        yield self.lower
        yield self.upper

    def __str__(self) -> str:
        return f"({self.lower},{self.upper})"


class Universe:
    """The taxon set X together with a dense indexing of P2(X).

    Taxa are sorted by label. Pairs are numbered lexicographically by the
    indices of their endpoints, so ``aa < ab < ... < bb < bc < ...``.
    """

    __slots__ = ("taxa", "index", "pairs", "pair_index", "pair_taxa", "_pid",
                 "singleton_mask", "taxon_mask", "full_mask")

    def __init__(self, taxa: Iterable[str]):
        labels = sorted(set(taxa))
        if not labels:
            raise ValueError("the taxon set must be non-empty")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"invalid taxon label {label!r}")
        self.taxa: tuple[str, ...] = tuple(labels)
        self.index = {t: i for i, t in enumerate(labels)}
        n = len(labels)
        pairs = []
        pair_taxa = []
        pid = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                pid[i][j] = pid[j][i] = len(pairs)
                pairs.append(TaxonPair(labels[i], labels[j]))
                pair_taxa.append((i, j))
        self.pairs: tuple[TaxonPair, ...] = tuple(pairs)
        self.pair_index = {p: k for k, p in enumerate(pairs)}
        self.pair_taxa: tuple[tuple[int, int], ...] = tuple(pair_taxa)
        self._pid = pid
        self.singleton_mask = sum(1 << pid[i][i] for i in range(n))
        # taxon_mask[t]: pairs that contain taxon t
        self.taxon_mask = tuple(sum(1 << pid[t][s] for s in range(n)) for t in range(n))
        self.full_mask = (1 << len(pairs)) - 1

    def __len__(self) -> int:
        return len(self.taxa)

    def __contains__(self, taxon: object) -> bool:
        return taxon in self.index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self.taxa == other.taxa

    def __hash__(self) -> int:
        return hash(self.taxa)

    def __repr__(self) -> str:
        return f"Universe({list(self.taxa)!r})"

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    def pair_id(self, a: int, b: int) -> int:
        """Pair index from two taxon indices."""
        return self._pid[a][b]

    def pair(self, value: PairLike) -> TaxonPair:
        p = as_pair(value)
        if p.lo not in self.index or p.hi not in self.index:
            missing = p.lo if p.lo not in self.index else p.hi
            raise KeyError(f"taxon {missing!r} is not in the universe")
        return p

    def pid(self, value: PairLike) -> int:
        return self.pair_index[self.pair(value)]

    def singleton_id(self, taxon: str) -> int:
        i = self.index[taxon]
        return self._pid[i][i]

    def mask_of(self, pairs: Iterable[PairLike]) -> int:
        mask = 0
        for p in pairs:
            mask |= 1 << self.pid(p)
        return mask

    def pairs_of(self, mask: int) -> list[TaxonPair]:
        return [self.pairs[k] for k in iter_bits(mask)]

    def format_pair(self, k: int) -> str:
        return str(self.pairs[k])


class Relation:
    """Immutable finite relation on P2(X).

    Construct with :meth:`from_constraints` or :meth:`empty`; the raw
    constructor takes one bitset row per pair index.
    """

    __slots__ = ("universe", "rows", "_hash")

    def __init__(self, universe: Universe, rows: Sequence[int]):
        if len(rows) != universe.n_pairs:
            raise ValueError("row count does not match the universe")
        self.universe = universe
        self.rows: tuple[int, ...] = tuple(rows)
        self._hash: int | None = None

    @classmethod
    def empty(cls, universe: Universe) -> Relation:
        return cls(universe, [0] * universe.n_pairs)

    @classmethod
    def from_constraints(cls, universe: Universe, constraints: Iterable) -> Relation:
        rows = [0] * universe.n_pairs
        for c in constraints:
            lower, upper = c
            rows[universe.pid(lower)] |= 1 << universe.pid(upper)
        return cls(universe, rows)

    @classmethod
    def from_index_pairs(cls, universe: Universe, items: Iterable[tuple[int, int]]) -> Relation:
        rows = [0] * universe.n_pairs
        for i, j in items:
            rows[i] |= 1 << j
        return cls(universe, rows)

    def index_pairs(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                yield i, j

    def __iter__(self) -> Iterator[Constraint]:
        pairs = self.universe.pairs
        for i, j in self.index_pairs():
            yield Constraint(pairs[i], pairs[j])

    def has(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def __contains__(self, item: object) -> bool:
        try:
            lower, upper = item  # type: ignore[misc]
            i = self.universe.pid(lower)
            j = self.universe.pid(upper)
        except (TypeError, ValueError, KeyError):
            return False
        return self.has(i, j)

    def __len__(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def __bool__(self) -> bool:
        return any(self.rows)

    def _check(self, other: Relation) -> None:
        if not isinstance(other, Relation):
            raise TypeError("expected a Relation")
        if other.universe != self.universe:
            raise ValueError("relations live on different universes")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self.universe == other.universe and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.universe, self.rows))
        return self._hash

    def __le__(self, other: Relation) -> bool:
        self._check(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __ge__(self, other: Relation) -> bool:
        return other <= self

    def __or__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.universe, [a | b for a, b in zip(self.rows, other.rows)])

    def __and__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.universe, [a & b for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.universe, [a & ~b for a, b in zip(self.rows, other.rows)])

    def columns(self) -> list[int]:
        """Transposed bitsets: bit ``i`` of ``columns()[j]`` iff ``(i, j)`` present."""
        cols = [0] * self.universe.n_pairs
        for i, row in enumerate(self.rows):
            bit = 1 << i
            for j in iter_bits(row):
                cols[j] |= bit
        return cols

    def transpose(self) -> Relation:
        return Relation(self.universe, self.columns())

    def restrict(self, mask: int) -> Relation:
        """Keep only constraints with both pairs inside ``mask``."""
        return Relation(
            self.universe,
            [row & mask if mask >> i & 1 else 0 for i, row in enumerate(self.rows)],
        )

    def sorted_constraints(self) -> list[Constraint]:
        return list(self)

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self)
        return f"Relation({{{body}}})"


def relation(universe: Universe, *constraints) -> Relation:
    """Shorthand: ``relation(U, ("xy", "ab"), ("ay", "ay"))``."""
    return Relation.from_constraints(universe, constraints)


def support_mask(rel: Relation) -> int:
    mask = 0
    for i, row in enumerate(rel.rows):
        if row:
            mask |= row | (1 << i)
    return mask


def support_plus_mask(rel: Relation) -> int:
    return support_mask(rel) | rel.universe.singleton_mask


def support(rel: Relation) -> frozenset[TaxonPair]:
    """Pairs occurring on either side of some constraint."""
    return frozenset(rel.universe.pairs_of(support_mask(rel)))


def support_plus(rel: Relation) -> frozenset[TaxonPair]:
    """Support together with every singleton ``xx`` of the universe."""
    return frozenset(rel.universe.pairs_of(support_plus_mask(rel)))


def transitive_closure_rows(rows: Sequence[int]) -> list[int]:
    """Warshall's algorithm on bitset rows."""
    rows = list(rows)
    active = [i for i, r in enumerate(rows) if r]
    for k in range(len(rows)):
        rk = rows[k]
        if not rk:
            continue
        bit = 1 << k
        for i in active:
            if rows[i] & bit:
                rows[i] |= rk
    return rows


def transitive_closure(rel: Relation) -> Relation:
    return Relation(rel.universe, transitive_closure_rows(rel.rows))


def is_transitive(rel: Relation) -> bool:
    rows = rel.rows
    for i, row in enumerate(rows):
        for j in iter_bits(row):
            if rows[j] & ~row:
                return False
    return True


def is_asymmetric(rel: Relation) -> bool:
    """No ``(p, q)`` together with ``(q, p)``; a reflexive ``(p, p)`` also fails."""
    return first_symmetric_pair(rel) is None


def first_symmetric_pair(rel: Relation) -> tuple[int, int] | None:
    rows = rel.rows
    for i, row in enumerate(rows):
        for j in iter_bits(row):
            if rows[j] >> i & 1:
                return i, j
    return None


def cross_consistency_gaps(rel: Relation) -> Iterator[tuple[int, int]]:
    """Constraints that one application of cross-consistency would add."""
    u = rel.universe
    supp = support_mask(rel)
    cols = rel.columns()
    for q, col in enumerate(cols):
        if not col:
            continue
        taxa = set()
        for p in iter_bits(col):
            taxa.update(u.pair_taxa[p])
        inner = 0
        for a in taxa:
            for b in taxa:
                inner |= 1 << u.pair_id(a, b)
        for p in iter_bits(inner & supp & ~col):
            yield p, q


def is_cross_consistent(rel: Relation) -> bool:
    return next(cross_consistency_gaps(rel), None) is None


def is_f_csym(rel: Relation, f: Relation) -> bool:
    """Every ``(p, q)`` in both ``f`` and ``rel`` has its reverse in ``rel``."""
    rel._check(f)
    rows = rel.rows
    for i, (frow, row) in enumerate(zip(f.rows, rows)):
        for j in iter_bits(frow & row):
            if not rows[j] >> i & 1:
                return False
    return True


def is_reflexive_on(rel: Relation, mask: int) -> bool:
    return all(rel.rows[k] >> k & 1 for k in iter_bits(mask))
