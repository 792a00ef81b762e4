"""Lexicalised grammar: words to categories and lambda semantics.

Lexicon file format (line based, `#` comments):

    word : CATEGORY = LF-TEXT

Categories are built from the atoms s, np, n, pp with forward (/) and
backward (\\) slashes; the type homomorphism is s=t, np=e, n=e->t, pp=e
and typeof(A/B) = typeof(A\\B) = typeof(B) -> typeof(A).
"""

from __future__ import annotations

from dataclasses import dataclass

from incsem.lf import (
    E, T, SemType, Signature, Term, TypeClashError, check_type, fn, parse_lf,
)


class LexiconError(Exception):
    pass


class UnknownWordError(LexiconError):
    def __init__(self, word: str, suggestions: list[str]):
        hint = f" (did you mean: {', '.join(suggestions)}?)" if suggestions else ""
        super().__init__(f"unknown word '{word}'{hint}")
        self.word = word
        self.suggestions = suggestions


ATOM_TYPES = {"s": T, "np": E, "n": fn(E, T), "pp": E}


@dataclass(frozen=True)
class Category:
    """Either an atom (s/np/n/pp) or a slash category.

    X/Y seeks its argument Y to the right; X\\Y is written argument
    first (X is sought to the left, yielding Y), so np\\s is a verb
    phrase of type e->t.  Both map to typeof(arg) -> typeof(result).
    """

    atom: str | None = None
    result: "Category | None" = None
    slash: str | None = None  # "/" forward, "\\" backward
    arg: "Category | None" = None

    def sem_type(self) -> SemType:
        if self.atom is not None:
            return ATOM_TYPES[self.atom]
        return fn(self.arg.sem_type(), self.result.sem_type())

    def __str__(self) -> str:
        if self.atom is not None:
            return self.atom

        def wrap(c: Category) -> str:
            return str(c) if c.atom is not None else f"({c})"

        if self.slash == "/":
            return f"{wrap(self.result)}/{wrap(self.arg)}"
        return f"{wrap(self.arg)}\\{wrap(self.result)}"


def parse_category(text: str) -> Category:
    pos = 0

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def atom_or_group() -> Category:
        nonlocal pos
        skip()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            c = cat()
            skip()
            if pos >= len(text) or text[pos] != ")":
                raise LexiconError(f"unbalanced parens in category '{text}'")
            pos += 1
            return c
        for name in ("np", "pp", "s", "n"):
            if text.startswith(name, pos):
                end = pos + len(name)
                if end < len(text) and (text[end].isalnum() or text[end] == "_"):
                    continue
                pos = end
                return Category(atom=name)
        raise LexiconError(f"bad category atom at '{text[pos:]}' in '{text}'")

    def cat() -> Category:
        nonlocal pos
        left = atom_or_group()
        while True:
            skip()
            if pos < len(text) and text[pos] in "/\\":
                slash = text[pos]
                pos += 1
                right = atom_or_group()
                if slash == "/":
                    left = Category(result=left, slash=slash, arg=right)
                else:
                    left = Category(result=right, slash=slash, arg=left)
            else:
                return left

    c = cat()
    skip()
    if pos != len(text):
        raise LexiconError(f"trailing input in category '{text}'")
    return c


@dataclass(frozen=True)
class LexEntry:
    word: str
    cat: Category
    sem: Term

    @property
    def sem_type(self) -> SemType:
        return self.cat.sem_type()


class Lexicon:
    """Immutable after load; lookups keep file order."""

    def __init__(self, entries: list[LexEntry], signature: Signature):
        self._entries = entries
        self._by_word: dict[str, list[LexEntry]] = {}
        for e in entries:
            self._by_word.setdefault(e.word, []).append(e)
        self.signature = signature

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def words(self) -> list[str]:
        return list(self._by_word)

    def lookup(self, word: str) -> list[LexEntry]:
        entries = self._by_word.get(word)
        if not entries:
            raise UnknownWordError(word, nearest_words(word, self.words))
        return list(entries)

    def __contains__(self, word: str) -> bool:
        return word in self._by_word


def edit_distance(a: str, b: str, cap: int = 3) -> int:
    if abs(len(a) - len(b)) > cap:
        return cap + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def nearest_words(word: str, known: list[str], max_dist: int = 2) -> list[str]:
    scored = [(edit_distance(word, w), w) for w in known]
    return [w for d, w in sorted(scored) if d <= max_dist][:5]


def load_lexicon(source: str) -> Lexicon:
    """Parse and type-validate a lexicon. Duplicate (word, cat) pairs are
    allowed and preserved in file order (lexical ambiguity)."""
    entries: list[LexEntry] = []
    sig = Signature()
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line or "=" not in line:
            raise LexiconError(f"line {lineno}: expected 'word : CATEGORY = LF-TEXT'")
        word_part, rest = line.split(":", 1)
        cat_part, sem_part = rest.split("=", 1)
        word = word_part.strip()
        if not word:
            raise LexiconError(f"line {lineno}: empty word")
        try:
            cat = parse_category(cat_part.strip())
        except LexiconError as e:
            raise LexiconError(f"line {lineno}: {e}") from e
        try:
            sem = parse_lf(sem_part.strip())
        except Exception as e:
            raise LexiconError(f"line {lineno}: bad LF: {e}") from e
        try:
            check_type(sem, cat.sem_type(), sig)
        except TypeClashError as e:
            raise LexiconError(
                f"line {lineno}: entry '{word} : {cat}' fails type validation: {e}"
            ) from e
        entries.append(LexEntry(word, cat, sem))
    return Lexicon(entries, sig)


def lookup(lex: Lexicon, word: str) -> list[LexEntry]:
    return lex.lookup(word)


def load_lexicon_file(path: str) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        return load_lexicon(f.read())
