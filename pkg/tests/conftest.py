import itertools

import pytest
from hypothesis import strategies as st

from tracekernel.words import Syllable, Word, reduce

LETTERS = "aAbB"


def rotation_oracle(u: Word, v: Word) -> bool:
    """Conjugacy by brute force: cyclically reduce letter by letter, then try every rotation."""

    def creduce(s: str) -> str:
        inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
        while len(s) >= 2 and s[0] == inv[s[-1]]:
            s = s[1:-1]
        return s

    su, sv = creduce(u.letters()), creduce(v.letters())
    if len(su) != len(sv):
        return False
    if not su:
        return True
    return any(su[i:] + su[:i] == sv for i in range(len(su)))


def inversion_sign(p) -> int:
    inv = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1 if inv % 2 else 1


raw_syllables = st.lists(
    st.tuples(st.sampled_from("ab"), st.integers(-3, 3)), max_size=8
)
words = raw_syllables.map(reduce)
letter_strings = st.text(alphabet=LETTERS, max_size=10)


@pytest.fixture
def w_id_n1():
    return Word.from_string("ababba")


__all__ = ["Syllable", "rotation_oracle", "inversion_sign", "words", "raw_syllables"]
