"""Free-group words, reduction, and peripheral (cyclic) subgroup structure.

A letter is a nonzero signed int: ``+k`` is the k-th generator, ``-k`` its
inverse (1-based).  A word is a tuple of letters in freely reduced form.
String encoding: lowercase ASCII letters are generators (a=1, b=2, ...),
uppercase their inverses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import PresentationError, UnsupportedPeripheralError

Word = tuple[int, ...]

EPSILON: Word = ()


def letter_from_char(ch: str) -> int:
    if len(ch) == 1 and "a" <= ch <= "z":
        return ord(ch) - ord("a") + 1
    if len(ch) == 1 and "A" <= ch <= "Z":
        return -(ord(ch) - ord("A") + 1)
    raise PresentationError(f"invalid letter {ch!r}")


def char_from_letter(letter: int) -> str:
    if letter > 0:
        return chr(ord("a") + letter - 1)
    return chr(ord("A") - letter - 1)


def parse_word(s: str) -> Word:
    return reduce(letter_from_char(c) for c in s)


def word_str(w: Word) -> str:
    return "".join(char_from_letter(x) for x in w)


def reduce(letters) -> Word:
    """Freely reduce a letter sequence; idempotent on already-reduced input."""
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise PresentationError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def multiply(u: Word, v: Word) -> Word:
    """Product of two reduced words; cancellation happens only at the seam."""
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def invert(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def _letter_key(x: int) -> tuple[int, int]:
    # fixed generator order a < a^-1 < b < b^-1 < ...
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(_letter_key(x) for x in w))


def common_prefix_len(u: Word, v: Word) -> int:
    n = 0
    for x, y in zip(u, v):
        if x != y:
            break
        n += 1
    return n


def cyclically_reduced(w: Word) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def check_word(w: Word, rank: int) -> None:
    for x in w:
        if x == 0 or abs(x) > rank:
            raise PresentationError(f"letter {x} out of range for rank {rank}")


@dataclass(frozen=True)
class Presentation:
    """Free group of the given rank with a list of peripheral subgroups.

    Each peripheral subgroup is given by a nonempty list of generator words;
    only single-generator (cyclic) peripherals support membership and coset
    operations.  Peripheral generators must be cyclically reduced so that
    powers have additive length, which the coset enumeration relies on.
    """

    rank: int
    peripherals: tuple[tuple[Word, ...], ...] = field(default=())

    def __post_init__(self):
        if self.rank < 1 or self.rank > 26:
            raise PresentationError(f"rank must be in 1..26, got {self.rank}")
        for gens in self.peripherals:
            if not gens:
                raise PresentationError("peripheral subgroup with no generators")
            for g in gens:
                if not g:
                    raise PresentationError("peripheral generator is the empty word")
                check_word(g, self.rank)
                if tuple(reduce(g)) != tuple(g):
                    raise PresentationError("peripheral generator not reduced")
                if not cyclically_reduced(g):
                    raise PresentationError(
                        "peripheral generator must be cyclically reduced"
                    )

    def cyclic_generator(self, peripheral_index: int) -> Word:
        gens = self.peripherals[peripheral_index]
        if len(gens) != 1:
            raise UnsupportedPeripheralError(
                f"peripheral {peripheral_index} has {len(gens)} generators; "
                "only cyclic peripherals are supported"
            )
        return gens[0]

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "peripherals": [[word_str(g) for g in gens] for gens in self.peripherals],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Presentation":
        try:
            rank = int(obj["rank"])
            raw = obj.get("peripherals", [])
        except (KeyError, TypeError, ValueError) as e:
            raise PresentationError(f"malformed presentation object: {e}") from e
        peripherals = tuple(tuple(parse_word(s) for s in gens) for gens in raw)
        p = cls(rank=rank, peripherals=peripherals)
        for gens in peripherals:
            for g in gens:
                check_word(g, rank)
        return p

    @classmethod
    def load(cls, path) -> "Presentation":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def free_group(rank: int) -> Presentation:
    return Presentation(rank=rank)


def once_punctured_torus_group() -> Presentation:
    """F(a,b) with peripheral subgroup generated by the commutator [a,b]."""
    return Presentation(rank=2, peripherals=((parse_word("abAB"),),))


def cyclic_member_exponent(g: Word, h: Word) -> int | None:
    """Exponent k with g = h^k, or None if g is not in <h>.

    Works by repeated cancellation against h: for g = h^k the product with
    h^(-sign k) is strictly shorter, so greedy descent reaches the identity
    exactly on members.
    """
    if not h:
        raise PresentationError("cyclic generator is the empty word")
    hinv = invert(h)
    k = 0
    cur = g
    while cur:
        down = multiply(hinv, cur)
        if len(down) < len(cur):
            cur = down
            k += 1
            continue
        up = multiply(h, cur)
        if len(up) < len(cur):
            cur = up
            k -= 1
            continue
        return None
    return k


@dataclass(frozen=True, order=True)
class CosetId:
    """Identity of a left coset g<h> of a cyclic peripheral subgroup.

    The representative is the shortlex-least element of the coset among the
    supplied ball vertices, which makes the id stable across runs.
    """

    peripheral_index: int
    representative: Word


def coset_id(g: Word, peripheral_index: int, presentation: Presentation, ball_words) -> CosetId:
    """Identify the coset of g among ball vertices.

    ``ball_words`` must support membership tests for words.  The coset orbit
    g*h^k is enumerated in both directions; because h is cyclically reduced
    the set of exponents whose element stays in a ball is an interval, so
    enumeration stops at the first exit on each side.
    """
    h = presentation.cyclic_generator(peripheral_index)
    if g not in ball_words:
        raise PresentationError("element lies outside the ball")
    best = g
    for step in (h, invert(h)):
        cur = g
        while True:
            cur = multiply(cur, step)
            if cur not in ball_words:
                break
            if shortlex_key(cur) < shortlex_key(best):
                best = cur
    return CosetId(peripheral_index, best)


def same_coset(g1: Word, g2: Word, h: Word) -> bool:
    return cyclic_member_exponent(multiply(invert(g1), g2), h) is not None
