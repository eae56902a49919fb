"""Shared test machinery: strategies, licensed relation moves, exact solvers."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from cable_order.words import Word, abelianize


def word_strategy(alphabet=("a", "b", "t"), max_syllables=8, max_exp=6):
    syl = st.tuples(
        st.sampled_from(alphabet),
        st.integers(min_value=-max_exp, max_value=max_exp).filter(bool),
    )
    return st.lists(syl, max_size=max_syllables).map(Word.from_pairs)


def random_word(rng: random.Random, alphabet=("a", "b"), max_syllables=8, max_exp=6) -> Word:
    pairs = []
    for _ in range(rng.randint(0, max_syllables)):
        exp = 0
        while exp == 0:
            exp = rng.randint(-max_exp, max_exp)
        pairs.append((rng.choice(alphabet), exp))
    return Word.from_pairs(pairs)


# -- relation moves on words over {a, b}; both preserve the group element ----

def insert_relator_move(word: Word, x: int, y: int, rng: random.Random) -> Word:
    """Insert a^x b^-y or its inverse at a random position, splitting syllables."""
    syls = list(word.syllables)
    rel = [("a", x), ("b", -y)] if rng.random() < 0.5 else [("b", y), ("a", -x)]
    k = rng.randint(0, len(syls))
    if k < len(syls) and abs(syls[k][1]) > 1 and rng.random() < 0.5:
        g, e = syls[k]
        cut = rng.randint(1, abs(e) - 1) * (1 if e > 0 else -1)
        new = syls[:k] + [(g, cut)] + rel + [(g, e - cut)] + syls[k + 1 :]
    else:
        new = syls[:k] + rel + syls[k:]
    return Word.from_pairs(new)


def licensed_swap_move(word: Word, x: int, y: int, rng: random.Random) -> Word | None:
    """Swap one whitelisted adjacent pair (a^kx with b^m, or a^k with b^my)."""
    syls = list(word.syllables)
    candidates = []
    for idx in range(len(syls) - 1):
        (g1, e1), (g2, e2) = syls[idx], syls[idx + 1]
        if {g1, g2} == {"a", "b"}:
            ea = e1 if g1 == "a" else e2
            eb = e1 if g1 == "b" else e2
            if ea % x == 0 or eb % y == 0:
                candidates.append(idx)
    if not candidates:
        return None
    idx = rng.choice(candidates)
    syls[idx], syls[idx + 1] = syls[idx + 1], syls[idx]
    return Word.from_pairs(syls)


def random_licensed_move(word: Word, x: int, y: int, rng: random.Random) -> Word:
    if rng.random() < 0.4:
        swapped = licensed_swap_move(word, x, y, rng)
        if swapped is not None:
            return swapped
    return insert_relator_move(word, x, y, rng)


# -- exact integer solvers for abelianization lattice membership -------------

def ab_vector(word_or_dict) -> tuple[int, int, int]:
    d = word_or_dict if isinstance(word_or_dict, dict) else abelianize(word_or_dict)
    return (d.get("a", 0), d.get("b", 0), d.get("t", 0))


def _det3(c0, c1, c2) -> int:
    return (
        c0[0] * (c1[1] * c2[2] - c1[2] * c2[1])
        - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1])
        + c2[0] * (c0[1] * c1[2] - c0[2] * c1[1])
    )


def in_integer_span(columns: list[tuple[int, int, int]], target: tuple[int, int, int]) -> bool:
    """Membership of target in the Z-span of 2 or 3 independent columns."""
    if len(columns) == 2:
        v1, v2 = columns
        for r1 in range(3):
            for r2 in range(r1 + 1, 3):
                det = v1[r1] * v2[r2] - v1[r2] * v2[r1]
                if det == 0:
                    continue
                z1n = target[r1] * v2[r2] - target[r2] * v2[r1]
                z2n = v1[r1] * target[r2] - v1[r2] * target[r1]
                if z1n % det or z2n % det:
                    return False
                z1, z2 = z1n // det, z2n // det
                return all(z1 * v1[r] + z2 * v2[r] == target[r] for r in range(3))
        raise ValueError("columns are not independent")
    if len(columns) == 3:
        det = _det3(*columns)
        if det == 0:
            raise ValueError("columns are not independent")
        zs = []
        for idx in range(3):
            cols = list(columns)
            cols[idx] = target
            num = _det3(*cols)
            if num % det:
                return False
            zs.append(num // det)
        return all(
            sum(z * col[r] for z, col in zip(zs, columns)) == target[r] for r in range(3)
        )
    raise ValueError("need 2 or 3 columns")


# -- certificate tampering ----------------------------------------------------

SIGN_VALUES = ("pos", "neg", "zero")


def enumerate_mutation_sites(doc) -> list[tuple[list, str]]:
    """Paths of semantically meaningful scalar fields in a certificate doc."""
    sites: list[tuple[list, str]] = []

    def walk(node, path):
        if isinstance(node, dict):
            for key, val in node.items():
                walk(val, path + [key])
        elif isinstance(node, list):
            for idx, val in enumerate(node):
                walk(val, path + [idx])
        elif isinstance(node, bool):
            pass
        elif isinstance(node, int):
            sites.append((path, "int"))
        elif isinstance(node, str):
            key = path[-1] if path else None
            if node in SIGN_VALUES and key in ("a", "b", "t", "lhs_sign", "rhs_sign"):
                sites.append((path, "sign"))
            elif key in ("lhs", "rhs", "word") and node:
                sites.append((path, "word"))
            elif key in ("equation", "id"):
                sites.append((path, "ref"))

    walk(doc, [])
    return sites


def apply_mutation(doc, site, rng: random.Random):
    """Return a deep copy of doc with one field changed to a different value."""
    import copy

    doc = copy.deepcopy(doc)
    path, kind = site
    parent = doc
    for key in path[:-1]:
        parent = parent[key]
    old = parent[path[-1]]
    if kind == "int":
        parent[path[-1]] = old + rng.choice((1, -1))
    elif kind == "sign":
        choices = [s for s in SIGN_VALUES if s != old]
        parent[path[-1]] = rng.choice(choices)
    elif kind == "word":
        word = Word.parse(old)
        syls = list(word.syllables)
        if not syls:
            syls = [("a", 1)]
        else:
            idx = rng.randrange(len(syls))
            g, e = syls[idx]
            e2 = e + 1 if e + 1 != 0 else e + 2
            syls[idx] = (g, e2)
        parent[path[-1]] = str(Word(tuple(syls)))
    elif kind == "ref":
        parent[path[-1]] = old + "_x"
    else:
        raise ValueError(kind)
    assert parent[path[-1]] != old
    return doc
