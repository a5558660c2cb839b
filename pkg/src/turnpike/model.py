"""Exact-rational game model: types, validation, bit-length accounting, file format.

States are 1..n with state 1 initial and state n terminal-absorbing; actions are
1..m.  Every reward and transition probability is a dyadic rational (denominator
a power of two), which makes the fractional bit-length L of a game well defined.
All arithmetic in this package is exact; nothing here ever rounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple


class GameFormatError(ValueError):
    """Raised when a game document is syntactically or structurally invalid."""


def parse_rational(text: str, where: str = "") -> Fraction:
    """Parse "p" or "p/q" into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise GameFormatError(f"bad rational {text!r}{' at ' + where if where else ''}: {e}")


def format_rational(x: Fraction) -> str:
    """Render a Fraction as "p" or "p/q" (always lossless)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_dyadic(x: Fraction) -> bool:
    """True iff the reduced denominator of x is a power of two."""
    d = x.denominator
    return d & (d - 1) == 0


def dyadic_bits(x: Fraction) -> int:
    """Least k with x * 2**k integral.  Requires a dyadic x."""
    if not is_dyadic(x):
        raise ValueError(f"{x} is not a dyadic rational")
    return x.denominator.bit_length() - 1


class Point(NamedTuple):
    """A pair of onward utilities (player 1, player 2)."""

    x: Fraction
    y: Fraction

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, w: Fraction) -> "Point":
        return Point(self.x * w, self.y * w)

    def coord(self, k: int) -> Fraction:
        """1-indexed coordinate access: coord(1) = x, coord(2) = y."""
        return self.x if k == 1 else self.y


class Direction(NamedTuple):
    """A nonnegative direction with d1 + d2 = 1 exactly (canonical 1-norm)."""

    d1: Fraction
    d2: Fraction

    def dot(self, p: Point) -> Fraction:
        return self.d1 * p.x + self.d2 * p.y


def direction(d1, d2) -> Direction:
    d1, d2 = Fraction(d1), Fraction(d2)
    if d1 < 0 or d2 < 0 or d1 + d2 != 1:
        raise ValueError(f"not a unit 1-norm nonnegative direction: ({d1}, {d2})")
    return Direction(d1, d2)


DIR_X = Direction(Fraction(1), Fraction(0))
DIR_Y = Direction(Fraction(0), Fraction(1))


def midpoint(a: Direction, b: Direction) -> Direction:
    return Direction((a.d1 + b.d1) / 2, (a.d2 + b.d2) / 2)


def gap(a: Direction, b: Direction) -> Fraction:
    """1-norm distance between two directions."""
    return abs(a.d1 - b.d1) + abs(a.d2 - b.d2)


def point(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


def better_point(alpha: Direction, p: Point, q: Point) -> bool:
    """Strict "p beats q" order used by every argmax in this package.

    Primary key: the alpha-score.  Secondary key: the complementary
    coordinate (x for alpha = (0,1), otherwise y), so evaluations along an
    axis return the Pareto-optimal extreme point and interior ties resolve
    the same way in the solver and in the polyline oracle.
    """
    sp, sq = alpha.dot(p), alpha.dot(q)
    if sp != sq:
        return sp > sq
    if alpha == DIR_Y:
        return p.x > q.x
    return p.y > q.y


@dataclass(frozen=True)
class StochasticGame:
    """A two-player finite-horizon turn-taking stochastic game.

    ``ap[s]`` is the acting player in state s; ``r1[s][a]`` / ``r2[s][a]``
    immediate rewards; ``p[s][a]`` the next-state distribution as a dict
    {s': probability} holding only nonzero entries.  All mappings are
    1-indexed; index 0 is unused padding.
    """

    n: int
    m: int
    ap: tuple[int, ...]
    r1: tuple[tuple[Fraction, ...], ...]
    r2: tuple[tuple[Fraction, ...], ...]
    p: tuple[tuple[dict, ...], ...]

    def acting(self, s: int) -> int:
        return self.ap[s]

    def reward(self, s: int, a: int) -> Point:
        return Point(self.r1[s][a], self.r2[s][a])

    def successors(self, s: int, a: int) -> list[tuple[int, Fraction]]:
        """Positive-probability successors of (s, a), ascending by state."""
        return sorted(self.p[s][a].items())

    def states(self) -> range:
        return range(1, self.n + 1)

    def actions(self) -> range:
        return range(1, self.m + 1)


def make_game(n: int, m: int, ap, r1, r2, p) -> StochasticGame:
    """Build a game from 1-indexed dict-style inputs.

    ``ap``: {s: player}; ``r1``/``r2``: {(s, a): Fraction}; ``p``:
    {(s, a): {s': Fraction}}.  Missing rewards default to 0; missing
    transition rows default to {n: 1}.  No validity checking here.
    """
    ap_t = tuple([0] + [int(ap.get(s, 1)) for s in range(1, n + 1)])
    r1_t = tuple(
        tuple([Fraction(0)] + [Fraction(r1.get((s, a), 0)) for a in range(1, m + 1)])
        for s in range(0, n + 1)
    )
    r2_t = tuple(
        tuple([Fraction(0)] + [Fraction(r2.get((s, a), 0)) for a in range(1, m + 1)])
        for s in range(0, n + 1)
    )
    rows = []
    for s in range(0, n + 1):
        row = [dict()]
        for a in range(1, m + 1):
            dist = p.get((s, a))
            if s == 0:
                dist = {}
            elif dist is None:
                dist = {n: Fraction(1)}
            else:
                dist = {int(k): Fraction(v) for k, v in dist.items() if Fraction(v) != 0}
            row.append(dist)
        rows.append(tuple(row))
    return StochasticGame(n=n, m=m, ap=ap_t, r1=r1_t, r2=r2_t, p=tuple(rows))


def validate_game(g: StochasticGame) -> list[str]:
    """Check every model invariant; return the list of violations (empty = ok).

    Violations are data, not failures: each entry names the rule and the
    offending 1-indexed coordinates.
    """
    problems: list[str] = []
    if g.n < 2:
        problems.append(f"state count n={g.n} must be at least 2")
    if g.m < 1:
        problems.append(f"action count m={g.m} must be at least 1")
    for s in g.states():
        if g.ap[s] not in (1, 2):
            problems.append(f"acting player at {s} is {g.ap[s]}, not in {{1,2}}")
        for a in g.actions():
            for name, r in (("r1", g.r1[s][a]), ("r2", g.r2[s][a])):
                if not (0 <= r <= 1):
                    problems.append(f"reward range at ({s},{a}): {name}={format_rational(r)}")
            dist = g.p[s][a]
            total = sum(dist.values(), Fraction(0))
            if total != 1:
                problems.append(f"distribution sum at ({s},{a}): {format_rational(total)}")
            for s2, prob in dist.items():
                if prob < 0:
                    problems.append(f"negative probability at ({s},{a},{s2})")
                if not (1 <= s2 <= g.n):
                    problems.append(f"transition target out of range at ({s},{a}): {s2}")
                elif prob > 0 and not (s2 > s or s == s2 == g.n):
                    problems.append(f"acyclicity at ({s},{a}): goes to {s2}")
            if s == g.n:
                if g.r1[s][a] != 0 or g.r2[s][a] != 0:
                    problems.append(f"terminal reward at ({s},{a}) is nonzero")
                if dist != {g.n: Fraction(1)}:
                    problems.append(f"terminal absorption at ({s},{a})")
    return problems


def bit_length(g: StochasticGame) -> int:
    """Least L such that every reward and probability times 2**L is integral."""
    L = 0
    for s in g.states():
        for a in g.actions():
            L = max(L, dyadic_bits(g.r1[s][a]), dyadic_bits(g.r2[s][a]))
            for prob in g.p[s][a].values():
                L = max(L, dyadic_bits(prob))
    return L


def _parse_pair_key(key: str, g_n: int, g_m: int, where: str) -> tuple[int, int]:
    try:
        s_txt, a_txt = key.split(",")
        s, a = int(s_txt), int(a_txt)
    except ValueError:
        raise GameFormatError(f"bad (state,action) key {key!r} in {where}")
    if not (1 <= s <= g_n and 1 <= a <= g_m):
        raise GameFormatError(f"(state,action) key {key!r} out of range in {where}")
    return s, a


def _require_dyadic(x: Fraction, where: str) -> Fraction:
    if not is_dyadic(x):
        raise GameFormatError(f"non-dyadic rational {format_rational(x)} at {where}")
    return x


def parse_game(text: str) -> StochasticGame:
    """Parse the JSON game format; rejects non-dyadic entries and bad P sums."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"not valid JSON: line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise GameFormatError("top-level document must be an object")
    for field in ("n", "m", "ap"):
        if field not in doc:
            raise GameFormatError(f"missing field {field!r}")
    n, m = doc["n"], doc["m"]
    if not (isinstance(n, int) and isinstance(m, int) and n >= 2 and m >= 1):
        raise GameFormatError(f"bad dimensions n={n!r}, m={m!r}")
    ap_list = doc["ap"]
    if not (isinstance(ap_list, list) and len(ap_list) == n):
        raise GameFormatError(f"ap must list exactly n={n} entries, got {len(ap_list)}")
    for i, v in enumerate(ap_list):
        if v not in (1, 2):
            raise GameFormatError(f"ap[{i + 1}] = {v!r} not in {{1,2}}")

    rewards: dict[str, dict] = {"r1": {}, "r2": {}}
    for name in ("r1", "r2"):
        for key, val in doc.get(name, {}).items():
            s, a = _parse_pair_key(key, n, m, name)
            rewards[name][(s, a)] = _require_dyadic(
                parse_rational(val, f"{name}[{key}]"), f"{name}[{key}]"
            )

    p: dict[tuple[int, int], dict] = {}
    for key, row in doc.get("P", {}).items():
        s, a = _parse_pair_key(key, n, m, "P")
        if not isinstance(row, dict):
            raise GameFormatError(f"P[{key}] must be an object")
        dist = {}
        for s2_txt, val in row.items():
            try:
                s2 = int(s2_txt)
            except ValueError:
                raise GameFormatError(f"bad state key {s2_txt!r} in P[{key}]")
            if not (1 <= s2 <= n):
                raise GameFormatError(f"state {s2} out of range in P[{key}]")
            dist[s2] = _require_dyadic(parse_rational(val, f"P[{key}]"), f"P[{key}][{s2}]")
        total = sum(dist.values(), Fraction(0))
        if total != 1:
            raise GameFormatError(
                f"distribution sum at P[{key}] is {format_rational(total)}, expected 1"
            )
        p[(s, a)] = dist

    ap = {s: ap_list[s - 1] for s in range(1, n + 1)}
    return make_game(n, m, ap, rewards["r1"], rewards["r2"], p)


def serialize_game(g: StochasticGame) -> str:
    """Render a game in the JSON file format (sparse; terminal rows omitted)."""
    doc: dict = {"n": g.n, "m": g.m, "ap": [g.ap[s] for s in g.states()]}
    r1, r2, p = {}, {}, {}
    for s in range(1, g.n):
        for a in g.actions():
            key = f"{s},{a}"
            if g.r1[s][a] != 0:
                r1[key] = format_rational(g.r1[s][a])
            if g.r2[s][a] != 0:
                r2[key] = format_rational(g.r2[s][a])
            dist = g.p[s][a]
            if dist != {g.n: Fraction(1)}:
                p[key] = {str(s2): format_rational(pr) for s2, pr in sorted(dist.items())}
    doc["r1"], doc["r2"], doc["P"] = r1, r2, p
    return json.dumps(doc, indent=2, sort_keys=True)


#: Fixture game used throughout the test suite: state 1 is the follower's,
#: state 2 the leader's, state 3 terminal.
G1_TEXT = """\
{ "n": 3, "m": 2, "ap": [2, 1, 1],
  "r1": {"1,1": "1", "1,2": "0", "2,1": "1", "2,2": "0"},
  "r2": {"1,1": "1/2", "1,2": "1", "2,1": "0", "2,2": "1"},
  "P":  {"1,1": {"2": "1"}, "1,2": {"3": "1"},
         "2,1": {"3": "1"}, "2,2": {"3": "1"}} }
"""


def g1() -> StochasticGame:
    return parse_game(G1_TEXT)
