"""Prefix-exchange transformations of the binary Cantor space.

A map is given by a finite list of rules (w, z): every sequence starting
with w is sent to the same sequence with w replaced by z.  When the w's
and the z's each form a complete prefix code this defines a homeomorphism
of {0,1}^N.  Evaluation is exact on eventually periodic sequences.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

GERM_FIXES = "fixes_neighbourhood"
GERM_ISOLATED = "isolated_fixed_point"
GERM_MOVES = "moves_x"


class NeedsRefinement(ValueError):
    """Raised when a cylinder is too coarse to land inside a single rule."""


def _check_word(w: str) -> str:
    if not isinstance(w, str) or any(ch not in "01" for ch in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def is_prefix(p: str, w: str) -> bool:
    return w.startswith(p)


def sibling_path(w: str) -> list[str]:
    """The cylinders C_{w_1..w_{i-1} (1-w_i)} partitioning the complement of C_w."""
    return [w[:i] + ("1" if w[i] == "0" else "0") for i in range(len(w))]


def _complete_code(words: Iterable[str]) -> bool:
    ws = sorted(words)
    for i in range(len(ws) - 1):
        if ws[i + 1].startswith(ws[i]):
            return False
    return sum(Fraction(1, 2 ** len(w)) for w in ws) == 1


class EventuallyPeriodic:
    """A binary sequence u p p p ...; stored in a canonical form.

    The period is primitive and the preperiod does not end with the last
    letter of the (suitably rotated) period, so equal sequences compare
    equal structurally.
    """

    __slots__ = ("preperiod", "period")

    def __init__(self, preperiod: str, period: str):
        u = _check_word(preperiod)
        p = _check_word(period)
        if not p:
            raise ValueError("period must be nonempty")
        for d in range(1, len(p)):
            if len(p) % d == 0 and p == p[:d] * (len(p) // d):
                p = p[:d]
                break
        while u and u[-1] == p[-1]:
            u = u[:-1]
            p = p[-1] + p[:-1]
        object.__setattr__(self, "preperiod", u)
        object.__setattr__(self, "period", p)

    def __setattr__(self, name, value):
        raise AttributeError("EventuallyPeriodic is immutable")

    @staticmethod
    def parse(text: str) -> "EventuallyPeriodic":
        """Parse the u(p) notation, e.g. "01(10)" for 0 1 1 0 1 0 ..."""
        text = text.strip()
        if "(" in text:
            u, rest = text.split("(", 1)
            if not rest.endswith(")"):
                raise ValueError(f"malformed point: {text!r}")
            return EventuallyPeriodic(u, rest[:-1])
        raise ValueError(f"malformed point: {text!r}")

    def digits(self, n: int) -> str:
        u, p = self.preperiod, self.period
        if n <= len(u):
            return u[:n]
        reps = (n - len(u) + len(p) - 1) // len(p)
        return (u + p * reps)[:n]

    def shift(self, k: int) -> "EventuallyPeriodic":
        """Drop the first k digits."""
        u, p = self.preperiod, self.period
        if k <= len(u):
            return EventuallyPeriodic(u[k:], p)
        k = (k - len(u)) % len(p)
        return EventuallyPeriodic("", p[k:] + p[:k])

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventuallyPeriodic):
            return NotImplemented
        return self.preperiod == other.preperiod and self.period == other.period

    def __hash__(self):
        return hash((self.preperiod, self.period))

    def __repr__(self):
        return f"EventuallyPeriodic({self.preperiod!r}, {self.period!r})"

    def __str__(self):
        return f"{self.preperiod}({self.period})"


ZERO_SEQ = EventuallyPeriodic("", "0")
ONE_SEQ = EventuallyPeriodic("", "1")


class Cylinders:
    """A clopen subset of the Cantor space: a reduced antichain of words."""

    __slots__ = ("words",)

    def __init__(self, words: Iterable[str]):
        ws = sorted(set(_check_word(w) for w in words))
        for i in range(len(ws) - 1):
            if ws[i + 1].startswith(ws[i]):
                raise ValueError(f"nested cylinders: {ws[i]} covers {ws[i + 1]}")
        changed = True
        while changed:
            changed = False
            have = set(ws)
            for w in ws:
                if w.endswith("0") and w[:-1] + "1" in have:
                    have.discard(w)
                    have.discard(w[:-1] + "1")
                    have.add(w[:-1])
                    ws = sorted(have)
                    changed = True
                    break
        object.__setattr__(self, "words", tuple(ws))

    def __setattr__(self, name, value):
        raise AttributeError("Cylinders is immutable")

    @staticmethod
    def of(*words: str) -> "Cylinders":
        return Cylinders(words)

    @staticmethod
    def full() -> "Cylinders":
        return Cylinders([""])

    @staticmethod
    def empty() -> "Cylinders":
        return Cylinders([])

    def is_empty(self) -> bool:
        return not self.words

    def is_full(self) -> bool:
        return self.words == ("",)

    def contains_word(self, w: str) -> bool:
        """Whole cylinder C_w inside this set."""
        return any(is_prefix(v, w) for v in self.words)

    def meets_word(self, w: str) -> bool:
        return any(is_prefix(v, w) or is_prefix(w, v) for v in self.words)

    def contains_point(self, x: EventuallyPeriodic) -> bool:
        if self.is_empty():
            return False
        n = max(len(v) for v in self.words)
        d = x.digits(n)
        return any(is_prefix(v, d) for v in self.words)

    def subset_of(self, other: "Cylinders") -> bool:
        return all(other.contains_word(w) for w in self.words)

    def disjoint_from(self, other: "Cylinders") -> bool:
        return not any(other.meets_word(w) for w in self.words)

    def union(self, other: "Cylinders") -> "Cylinders":
        merged = []
        for w in self.words + other.words:
            if not any(is_prefix(v, w) for v in merged):
                merged = [v for v in merged if not is_prefix(w, v)]
                merged.append(w)
        return Cylinders(merged)

    def complement(self) -> "Cylinders":
        out: list[str] = []
        stack = [""]
        while stack:
            w = stack.pop()
            if self.contains_word(w):
                continue
            if not self.meets_word(w):
                out.append(w)
                continue
            stack.append(w + "0")
            stack.append(w + "1")
        return Cylinders(out)

    def image(self, f: "PrefixMap") -> "Cylinders":
        pieces: list[str] = []
        for w in self.words:
            pieces.extend(f.image_words(w))
        return Cylinders(pieces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cylinders):
            return NotImplemented
        return self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __repr__(self):
        return "Cylinders(" + ", ".join(repr(w) for w in self.words) + ")"


class PrefixMap:
    """A homeomorphism of the Cantor space given by prefix exchanges.

    rules is a tuple of (domain_word, range_word) pairs whose domain words
    and range words each form a complete prefix code.  Stored fully
    reduced: no sibling pair (u0 -> r0, u1 -> r1) is left unmerged, and
    rules are sorted by domain word, so equality is structural.
    """

    __slots__ = ("rules",)

    def __init__(self, rules: Iterable[tuple[str, str]]):
        table = {}
        for v, z in rules:
            v, z = _check_word(v), _check_word(z)
            if v in table:
                raise ValueError(f"duplicate domain word {v!r}")
            table[v] = z
        if not table:
            raise ValueError("a map needs at least one rule")
        if not _complete_code(table.keys()):
            raise ValueError("domain words do not form a complete prefix code")
        if len(set(table.values())) != len(table) or not _complete_code(table.values()):
            raise ValueError("range words do not form a complete prefix code")
        changed = True
        while changed:
            changed = False
            for v, z in list(table.items()):
                if v.endswith("0") and z.endswith("0"):
                    v1, z1 = v[:-1] + "1", z[:-1] + "1"
                    if table.get(v1) == z1:
                        del table[v], table[v1]
                        table[v[:-1]] = z[:-1]
                        changed = True
                        break
        object.__setattr__(self, "rules", tuple(sorted(table.items())))

    def __setattr__(self, name, value):
        raise AttributeError("PrefixMap is immutable")

    @staticmethod
    def identity() -> "PrefixMap":
        return PrefixMap([("", "")])

    # -- group structure ----------------------------------------------------

    def __mul__(self, other: "PrefixMap") -> "PrefixMap":
        """Composition self o other (apply other first)."""
        if not isinstance(other, PrefixMap):
            return NotImplemented
        out = []
        for v, w in other.rules:
            for p, q in self.rules:
                if is_prefix(p, w):
                    out.append((v, q + w[len(p):]))
                elif is_prefix(w, p) and len(p) > len(w):
                    out.append((v + p[len(w):], q))
        return PrefixMap(out)

    def inverse(self) -> "PrefixMap":
        return PrefixMap([(z, v) for v, z in self.rules])

    def __invert__(self) -> "PrefixMap":
        return self.inverse()

    def __pow__(self, n: int) -> "PrefixMap":
        if n < 0:
            return self.inverse() ** (-n)
        result = PrefixMap.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrefixMap):
            return NotImplemented
        return self.rules == other.rules

    def __hash__(self):
        return hash(self.rules)

    def canonical_key(self) -> tuple:
        return self.rules

    def is_identity(self) -> bool:
        return self.rules == (("", ""),)

    def __repr__(self):
        bits = ", ".join(f"{v or 'e'}->{z or 'e'}" for v, z in self.rules)
        return f"PrefixMap({bits})"

    # -- action -------------------------------------------------------------

    def rule_at(self, x: EventuallyPeriodic) -> tuple[str, str]:
        depth = max(len(v) for v, _ in self.rules)
        d = x.digits(depth)
        for v, z in self.rules:
            if is_prefix(v, d):
                return v, z
        raise AssertionError("complete code must cover every sequence")

    def __call__(self, x: EventuallyPeriodic) -> EventuallyPeriodic:
        v, z = self.rule_at(x)
        tail = x.shift(len(v))
        return EventuallyPeriodic(z + tail.preperiod, tail.period)

    def evaluate_on(self, c: str) -> str:
        """Image word of the cylinder C_c when c refines a single rule."""
        c = _check_word(c)
        for v, z in self.rules:
            if is_prefix(v, c):
                return z + c[len(v):]
        raise NeedsRefinement(f"cylinder {c!r} spans several rules")

    def image_words(self, w: str) -> list[str]:
        """The image of C_w as a list of cylinder words (any coarseness)."""
        w = _check_word(w)
        out = []
        for v, z in self.rules:
            if is_prefix(v, w):
                return [z + w[len(v):]]
            if is_prefix(w, v):
                out.append(z)
        return out

    def to_json(self) -> dict:
        return {"rules": [[v, z] for v, z in self.rules]}

    @staticmethod
    def from_json(data: dict) -> "PrefixMap":
        return PrefixMap([(v, z) for v, z in data["rules"]])


# -- fixed points and germs ---------------------------------------------

def rule_fixed_point(v: str, z: str) -> Optional[EventuallyPeriodic]:
    """The unique fixed sequence of the exchange v -> z inside C_v, if any.

    For v == z the whole cylinder is fixed and the point v 0^inf is
    returned as a representative.  For comparable v != z the fixed point
    is v m^inf where m is the suffix by which the words differ.
    Incomparable words give a fixed-point-free exchange.
    """
    if v == z:
        return EventuallyPeriodic(v, "0")
    if is_prefix(v, z):
        return EventuallyPeriodic(v, z[len(v):])
    if is_prefix(z, v):
        return EventuallyPeriodic(v, v[len(z):])
    return None


def germ_class(g: PrefixMap, x: EventuallyPeriodic) -> str:
    """Trichotomy at x: identity near x, isolated fixed point, or moved.

    At a fixed point the applicable rule (v, z) decides: v == z means g is
    the identity on all of C_v; otherwise the rule pins down its unique
    fixed sequence in C_v, so x is isolated in fix(g).
    """
    if g(x) != x:
        return GERM_MOVES
    v, z = g.rule_at(x)
    if v == z:
        return GERM_FIXES
    assert len(v) != len(z), "same-length exchange cannot fix a sequence"
    return GERM_ISOLATED


def is_identity_on(g: PrefixMap, region: Cylinders) -> bool:
    """Exact identity on every cylinder of the region."""
    for w in region.words:
        for v, z in g.rules:
            if (is_prefix(v, w) or is_prefix(w, v)) and v != z:
                return False
    return True


# -- standard generators --------------------------------------------------

SWAP = PrefixMap([("0", "1"), ("1", "0")])
GEN_VA = PrefixMap([("00", "0"), ("01", "10"), ("1", "11")])
GEN_VB = PrefixMap([("0", "0"), ("100", "10"), ("101", "110"), ("11", "111")])
GEN_VC = PrefixMap([("0", "10"), ("10", "11"), ("11", "0")])
GEN_PI0 = PrefixMap([("00", "01"), ("01", "00"), ("1", "1")])

# GEN_VA and GEN_VB act like the two standard slope maps and GEN_VC like the
# rotation; GEN_PI0 is the cylinder transposition that leaves the order
# topology, so the four together reach the full prefix-exchange group.
STANDARD_GENERATORS = (GEN_VA, GEN_VB, GEN_VC, GEN_PI0)


def prefix_translate(g: PrefixMap, w: str) -> PrefixMap:
    """Conjugate g into C_w by the canonical bijection x -> wx.

    The result applies g inside C_w and fixes everything else, rule by
    rule on the sibling cylinders of w.
    """
    w = _check_word(w)
    rules = [(w + v, w + z) for v, z in g.rules]
    rules.extend((s, s) for s in sibling_path(w))
    return PrefixMap(rules)


def rigid_stabilizer_v(w: str) -> tuple[PrefixMap, ...]:
    """Generators of the copy of the whole group supported in C_w."""
    return tuple(prefix_translate(g, w) for g in STANDARD_GENERATORS)


def compress_v(w: str, target: str) -> PrefixMap:
    """A prefix exchange squeezing the complement of C_w into C_target.

    The complement of C_w is the disjoint union of the |w| sibling
    cylinders D_1, ..., D_k along w; these are sent to the disjoint
    subcylinders target 1^(i-1) 0 of the target.  C_w is spread over the
    rest of the space: its pieces w 1^(j-1) 0 cover the complement of the
    target and w 1^m fills the leftover corner target 1^k.
    """
    w = _check_word(w)
    target = _check_word(target)
    if not w:
        raise ValueError("the complement of the whole space is empty")
    if not target:
        return PrefixMap.identity()
    k, m = len(w), len(target)
    rules = []
    for i, d in enumerate(sibling_path(w)):
        rules.append((d, target + "1" * i + "0"))
    for j, e in enumerate(sibling_path(target)):
        rules.append((w + "1" * j + "0", e))
    rules.append((w + "1" * m, target + "1" * k))
    g = PrefixMap(rules)
    tgt = Cylinders.of(target)
    assert all(
        Cylinders(g.image_words(d)).subset_of(tgt) for d in sibling_path(w)
    ), "compression must land inside the target"
    return g
