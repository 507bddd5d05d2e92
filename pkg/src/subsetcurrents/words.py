"""Free-group word algebra over a ranked basis.

Letters are signed integers: +i is the i-th generator, -i its inverse,
with 1 <= i <= rank.  Words are always kept freely reduced.  The text
syntax maps letters to the alphabet x, y, z, a, b, c, d, f, ... (lowercase
for a generator, uppercase for its inverse); the letter 'e' is reserved
for the identity.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import BasisMismatchError, LetterRangeError

# 'e' is excluded so that it can denote the empty word unambiguously.
ALPHABET = "xyzabcdfghijklmnopqrstuvw"

MAX_RANK = len(ALPHABET)


def _check_letters(letters: Iterable[int], rank: int) -> tuple[int, ...]:
    out = tuple(letters)
    for m in out:
        if m == 0 or abs(m) > rank:
            raise LetterRangeError(f"letter {m} out of range for rank {rank}")
    return out


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for m in letters:
        if stack and stack[-1] == -m:
            stack.pop()
        else:
            stack.append(m)
    return tuple(stack)


class Word:
    """A freely reduced word over a basis of the given rank.

    Instances are immutable and hashable; `*` concatenates (with free
    reduction), `~` inverts, and `**` raises to an integer power.
    """

    __slots__ = ("rank", "letters", "_hash")

    def __init__(self, rank: int, letters: Iterable[int] = ()):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        if rank > MAX_RANK:
            raise ValueError(f"rank must be <= {MAX_RANK}")
        letters = _check_letters(letters, rank)
        if free_reduce(letters) != letters:
            raise ValueError(f"letters {letters} are not freely reduced")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", hash((rank, letters)))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.rank == other.rank
            and self.letters == other.letters
        )

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return invert(self) ** (-n)
        out = Word(self.rank)
        for _ in range(n):
            out = concat(out, self)
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def __repr__(self) -> str:
        return f"Word({self.rank}, {format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


def reduce(letters: Iterable[int], rank: int) -> Word:
    """Freely reduce a raw signed-index sequence into a Word."""
    return Word(rank, free_reduce(_check_letters(letters, rank)))


def concat(w1: Word, w2: Word) -> Word:
    """Freely reduced product w1 * w2; the bases must agree."""
    if w1.rank != w2.rank:
        raise BasisMismatchError(f"rank {w1.rank} vs rank {w2.rank}")
    # Only the junction can cancel: peel matching inverse pairs.
    a, b = list(w1.letters), list(w2.letters)
    i = 0
    while a and i < len(b) and a[-1] == -b[i]:
        a.pop()
        i += 1
    return Word(w1.rank, tuple(a) + tuple(b[i:]))


def invert(w: Word) -> Word:
    """Reversed sequence with negated signs."""
    return Word(w.rank, tuple(-m for m in reversed(w.letters)))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split w as conjugator * core * conjugator^-1 with core cyclically reduced."""
    letters = list(w.letters)
    prefix: list[int] = []
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        prefix.append(letters[0])
        letters = letters[1:-1]
    return Word(w.rank, letters), Word(w.rank, prefix)


class Basis:
    """A free basis of the given rank; builds and parses words over it."""

    __slots__ = ("rank",)

    def __init__(self, rank: int):
        if rank < 1 or rank > MAX_RANK:
            raise ValueError(f"rank must be between 1 and {MAX_RANK}")
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("Basis is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Basis) and self.rank == other.rank

    def __hash__(self) -> int:
        return hash(("Basis", self.rank))

    def __repr__(self) -> str:
        return f"Basis(rank={self.rank})"

    def identity(self) -> Word:
        return Word(self.rank)

    def generator(self, i: int) -> Word:
        if not 1 <= i <= self.rank:
            raise LetterRangeError(f"generator index {i} out of range")
        return Word(self.rank, (i,))

    def generators(self) -> list[Word]:
        return [self.generator(i) for i in range(1, self.rank + 1)]

    def word(self, text: str) -> Word:
        return parse_word(text, self.rank)


def letter_to_char(m: int) -> str:
    ch = ALPHABET[abs(m) - 1]
    return ch if m > 0 else ch.upper()


def char_to_letter(ch: str, rank: int) -> int:
    low = ch.lower()
    idx = ALPHABET.find(low)
    if idx < 0 or idx >= rank:
        raise LetterRangeError(f"letter {ch!r} is not a generator at rank {rank}")
    return idx + 1 if ch.islower() else -(idx + 1)


def format_word(w: Word) -> str:
    """Compact letter form; the empty word prints as 'e'."""
    if not w.letters:
        return "e"
    return "".join(letter_to_char(m) for m in w.letters)


def parse_word(text: str, rank: int) -> Word:
    """Parse either compact ("xyX") or spaced ("x y x^-1") word syntax.

    Exponents apply to the single preceding letter; "e" alone is the
    identity.  The result is freely reduced.
    """
    letters: list[int] = []
    for token in text.split():
        i = 0
        while i < len(token):
            ch = token[i]
            if ch == "e" or ch == "1":
                i += 1
                continue
            if not ch.isalpha():
                raise LetterRangeError(f"unexpected character {ch!r} in {text!r}")
            m = char_to_letter(ch, rank)
            i += 1
            power = 1
            if i < len(token) and token[i] == "^":
                i += 1
                sign = 1
                if i < len(token) and token[i] == "-":
                    sign = -1
                    i += 1
                start = i
                while i < len(token) and token[i].isdigit():
                    i += 1
                if start == i:
                    raise LetterRangeError(f"missing exponent in {text!r}")
                power = sign * int(token[start:i])
            if power < 0:
                m, power = -m, -power
            letters.extend([m] * power)
    return reduce(letters, rank)


def enumerate_reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    """All freely reduced words of length <= max_len, shortest first."""
    basis = Basis(rank)
    yield basis.identity()
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(max_len):
        nxt: list[tuple[int, ...]] = []
        for prefix in frontier:
            last = prefix[-1] if prefix else 0
            for m in _signed_letters(rank):
                if m != -last:
                    w = prefix + (m,)
                    nxt.append(w)
                    yield Word(rank, w)
        frontier = nxt


def _signed_letters(rank: int) -> Sequence[int]:
    # Fixed canonical order: +1, -1, +2, -2, ...
    out = []
    for i in range(1, rank + 1):
        out.extend((i, -i))
    return out
