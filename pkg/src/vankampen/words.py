"""Words in the free group on {a, b}, Magnus expansions and linking invariants.

Letters are pairs ``(generator, sign)`` with generator ``"a"`` or ``"b"`` and
sign ``+1`` or ``-1``.  In text, uppercase letters denote inverses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

GENERATORS = ("a", "b")
# Magnus variable index of each generator: a -> X1, b -> X2.
VARIABLE = {"a": 1, "b": 2}

Letter = tuple[str, int]
Monomial = tuple[int, ...]


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def free_reduce(letters: Iterable[Letter]) -> "Word":
    stack: list[Letter] = []
    for gen, sign in letters:
        if gen not in GENERATORS or sign not in (1, -1):
            raise ValueError(f"bad letter {(gen, sign)!r}")
        if stack and stack[-1] == (gen, -sign):
            stack.pop()
        else:
            stack.append((gen, sign))
    return Word(tuple(stack), _reduced=True)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; the empty word is the identity."""

    letters: tuple[Letter, ...] = ()
    _reduced: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not self._reduced:
            reduced = free_reduce(self.letters).letters
            object.__setattr__(self, "letters", reduced)
            object.__setattr__(self, "_reduced", True)

    @classmethod
    def identity(cls) -> "Word":
        return cls((), _reduced=True)

    @classmethod
    def generator(cls, gen: str) -> "Word":
        return cls(((gen, 1),))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)), _reduced=True)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return free_reduce(base.letters * abs(n))

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return "".join(g if s > 0 else g.upper() for g, s in self.letters)


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^-1 y^-1``."""
    return x * y * x.inverse() * y.inverse()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek()
            raise WordSyntaxError(
                f"expected {ch!r}, found {'end of input' if found is None else repr(found)}",
                self.pos,
            )
        self.pos += 1

    def expr(self) -> Word:
        result = Word.identity()
        count = 0
        while self.peek() is not None and self.peek() in "abAB[(":
            result = result * self.term()
            count += 1
        if count == 0:
            found = self.peek()
            raise WordSyntaxError(
                "expected a word" if found is None else f"unexpected {found!r}", self.pos
            )
        return result

    def term(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return base ** self.signed_int()
        return base

    def signed_int(self) -> int:
        self.peek()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_start:
            raise WordSyntaxError("expected an integer exponent", self.pos)
        return int(self.text[start:self.pos])

    def atom(self) -> Word:
        ch = self.peek()
        if ch in ("a", "b"):
            self.pos += 1
            return Word(((ch, 1),), _reduced=True)
        if ch in ("A", "B"):
            self.pos += 1
            return Word(((ch.lower(), -1),), _reduced=True)
        if ch == "[":
            self.pos += 1
            x = self.expr()
            self.expect(",")
            y = self.expr()
            self.expect("]")
            return commutator(x, y)
        if ch == "(":
            self.pos += 1
            x = self.expr()
            self.expect(")")
            return x
        raise WordSyntaxError(
            "unexpected end of input" if ch is None else f"unexpected {ch!r}", self.pos
        )


def parse_word(text: str) -> Word:
    """Parse word syntax such as ``"[a,[a,b]]"``, ``"a^3 B"`` or ``"(ab)^-2"``.

    Raises :class:`WordSyntaxError` carrying the offending position.
    """
    parser = _Parser(text)
    word = parser.expr()
    if parser.peek() is not None:
        raise WordSyntaxError(f"unexpected {parser.peek()!r}", parser.pos)
    return word


def exponent_sums(w: Word) -> tuple[int, int]:
    ea = sum(s for g, s in w.letters if g == "a")
    eb = sum(s for g, s in w.letters if g == "b")
    return ea, eb


# --------------------------------------------------------------------------
# Magnus expansion


@dataclass(frozen=True)
class MagnusSeries:
    """Truncated power series in non-commuting X1, X2 with integer coefficients.

    ``terms`` maps monomials (tuples over {1, 2}, empty tuple = constant) to
    nonzero coefficients of degree at most ``max_degree``.
    """

    max_degree: int
    terms: Mapping[Monomial, int]

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be positive")
        clean = {m: c for m, c in self.terms.items() if c and len(m) <= self.max_degree}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def one(cls, max_degree: int) -> "MagnusSeries":
        return cls(max_degree, {(): 1})

    def coefficient(self, monomial: Iterable[int]) -> int:
        return self.terms.get(tuple(monomial), 0)

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        d = min(self.max_degree, other.max_degree)
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            if len(m1) > d:
                continue
            for m2, c2 in other.terms.items():
                if len(m1) + len(m2) <= d:
                    m = m1 + m2
                    out[m] = out.get(m, 0) + c1 * c2
        return MagnusSeries(d, out)

    def homogeneous(self, degree: int) -> dict[Monomial, int]:
        return {m: c for m, c in self.terms.items() if len(m) == degree}

    def __str__(self) -> str:
        # length-lexicographic, 1 < 2
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            mono = "".join(f"X{i}" for i in m)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])


def letter_series(letter: Letter, max_degree: int) -> MagnusSeries:
    """Image of a single letter: ``1 + X`` or the truncated ``1 - X + X^2 - ...``."""
    gen, sign = letter
    x = VARIABLE[gen]
    if sign > 0:
        return MagnusSeries(max_degree, {(): 1, (x,): 1})
    return MagnusSeries(max_degree, {(x,) * k: (-1) ** k for k in range(max_degree + 1)})


def magnus_expansion(w: Word, max_degree: int) -> MagnusSeries:
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    terms: dict[Monomial, int] = {(): 1}
    for gen, sign in w.letters:
        x = VARIABLE[gen]
        out: dict[Monomial, int] = {}
        for m, c in terms.items():
            # right-multiply by the letter series, dropping terms past max_degree
            out[m] = out.get(m, 0) + c
            tail: Monomial = m
            k = 1
            while len(m) + k <= max_degree:
                tail = tail + (x,)
                coeff = c if sign > 0 else c * (-1) ** k
                out[tail] = out.get(tail, 0) + coeff
                if sign > 0:
                    break
                k += 1
        terms = {m: c for m, c in out.items() if c}
    return MagnusSeries(max_degree, terms)


def lcs_depth(w: Word, probe_degree: int) -> int | None:
    """Smallest degree ``d <= probe_degree`` carrying a nonzero non-constant term.

    ``w`` then lies in the d-th lower central subgroup and not in the (d+1)-st.
    Returns ``None`` when every term of degree ``1..probe_degree`` vanishes,
    which for the identity happens at every probe.
    """
    if probe_degree < 1:
        raise ValueError("probe_degree must be positive")
    series = magnus_expansion(w, probe_degree)
    degrees = [len(m) for m in series.terms if m]
    return min(degrees) if degrees else None


def exact_lcs_depth(w: Word) -> int | None:
    """Lower central series depth, probing degrees until a nonzero term shows up.

    The Magnus map is injective, so this terminates for every nontrivial word.
    ``None`` means the identity (infinite depth).
    """
    if w.is_identity():
        return None
    d = 1
    while True:
        depth = lcs_depth(w, d)
        if depth is not None:
            return depth
        d += 1


@dataclass(frozen=True)
class WordInvariants:
    exp_a: int
    exp_b: int
    lcs_depth: int | None  # None: identity word
    mu12: int | None  # None: undefined (nonzero abelianization)

    def to_dict(self) -> dict:
        return {
            "exp": [self.exp_a, self.exp_b],
            "lcs_depth": "infinite" if self.lcs_depth is None else self.lcs_depth,
            "mu12": "undefined" if self.mu12 is None else self.mu12,
        }


def milnor_invariants(w: Word) -> WordInvariants:
    """Exponent sums (the linking numbers of the third curve with the first two)
    and the triple invariant, read as the X1X2 coefficient of the Magnus series."""
    ea, eb = exponent_sums(w)
    mu = None
    if ea == 0 and eb == 0:
        mu = magnus_expansion(w, 2).coefficient((1, 2))
    return WordInvariants(ea, eb, exact_lcs_depth(w), mu)


@dataclass(frozen=True)
class Decision:
    passed: bool
    reasons: tuple[str, ...]


def unlink_criterion(w: Word) -> Decision:
    """Whether the three curves are link-homotopically trivial.

    Needs both exponent sums and the triple invariant to vanish; the linking
    number of the first two curves is zero by construction since they sit in
    disjoint balls.
    """
    inv = milnor_invariants(w)
    reasons = ["lk(g1,g2) = 0 (disjoint balls)"]
    ok = True
    for name, value in (("lk(g3,g1) = exp_a", inv.exp_a), ("lk(g3,g2) = exp_b", inv.exp_b)):
        reasons.append(f"{name} = {value}" + ("" if value == 0 else " (nonzero)"))
        ok = ok and value == 0
    if inv.mu12 is None:
        reasons.append("mu123 undefined (nonzero exponent sums)")
        ok = False
    else:
        reasons.append(f"mu123 = {inv.mu12}" + ("" if inv.mu12 == 0 else " (nonzero)"))
        ok = ok and inv.mu12 == 0
    return Decision(ok, tuple(reasons))
