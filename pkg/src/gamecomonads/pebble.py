"""The pebbling comonad: bounded truncations and the existential k-pebble game.

Plays are finite non-empty sequences of moves (pebble index, element) of
arbitrary length, so the full play structure is infinite and is never built.
Decisions run over pebble positions: what matters about a play is the current
placement of the pebbles, and the game is solved as a greatest fixpoint over
those positions.
"""

from __future__ import annotations

import json
from itertools import combinations_with_replacement, product
from typing import Callable, Mapping, Optional, Sequence

from .structures import (CapExceeded, Structure, is_partial_homomorphism,
                         require_same_signature, validate_structure)

Move = tuple[int, str]
PebblePlay = tuple[Move, ...]

DEFAULT_CAP = 200_000

# A position of the existential game is the multiset of (source, target)
# pebble pairs currently on the board, canonically sorted.  Pebble indices
# are interchangeable, so the multiset determines the game value.
Position = tuple[tuple[str, str], ...]


def pebble_play_id(s: PebblePlay) -> str:
    return json.dumps([[p, a] for p, a in s], separators=(",", ":"))


def pebble_play_of_id(pid: str) -> PebblePlay:
    return tuple((int(p), a) for p, a in json.loads(pid))


def pebble_relation_holds(rel: str, plays: Sequence[PebblePlay], A: Structure) -> bool:
    """The lifted relation on plays.

    Holds iff (1) the plays are pairwise prefix-comparable, (2) the pebble
    placed last in each play is not moved again within any longer play of the
    tuple, and (3) the relation holds of the last elements in A.
    """
    for s in plays:
        if not s:
            return False
    for s, t in product(plays, plays):
        if s[:len(t)] != t and t[:len(s)] != s:
            return False
    for s in plays:
        last_pebble = s[-1][0]
        for t in plays:
            if len(t) >= len(s) and t[:len(s)] == s:
                if any(p == last_pebble for p, _ in t[len(s):]):
                    return False
    return tuple(s[-1][1] for s in plays) in A.relations[rel]


def pebble_plays(A: Structure, k: int, n: int) -> list[PebblePlay]:
    """All plays of length 1..n over k pebbles, in breadth-first order."""
    moves = [(p, a) for p in range(1, k + 1) for a in A.universe]
    out: list[PebblePlay] = []
    frontier: list[PebblePlay] = [()]
    for _ in range(n):
        frontier = [s + (m,) for s in frontier for m in moves]
        out.extend(frontier)
    return out


def pebble_truncate(A: Structure, k: int, n: int, cap: int = DEFAULT_CAP) -> Structure:
    """Induced substructure of the play structure on plays of length <= n."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    size = sum((k * len(A.universe)) ** i for i in range(1, n + 1))
    if size > cap:
        raise CapExceeded(size, cap)
    plays = pebble_plays(A, k, n)
    interp: dict[str, list[list[str]]] = {}
    for name in A.sig.relations:
        ar = A.sig.arity(name)
        rows = []
        for s in plays:
            prefixes = [s[:i] for i in range(1, len(s) + 1)]
            for combo in product(prefixes, repeat=ar):
                if s not in combo:
                    continue
                if pebble_relation_holds(name, combo, A):
                    rows.append([pebble_play_id(c) for c in combo])
        interp[name] = rows
    return validate_structure(dict(A.sig.relations),
                              [pebble_play_id(s) for s in plays], interp)


def pebble_coextension_on_play(f: Callable[[PebblePlay], str], s: PebblePlay) -> PebblePlay:
    """Replay f on the prefixes of s, keeping the pebble indices."""
    out = []
    for i in range(1, len(s) + 1):
        try:
            b = f(s[:i])
        except KeyError:
            raise ValueError(f"strategy undefined on prefix {s[:i]}") from None
        out.append((s[i - 1][0], b))
    return tuple(out)


def _canon(pairs: Sequence[tuple[str, str]]) -> Position:
    return tuple(sorted(pairs))


def _all_positions(A: Structure, B: Structure, k: int) -> list[Position]:
    pairs = [(a, b) for a in A.universe for b in B.universe]
    out: list[Position] = []
    for size in range(k + 1):
        out.extend(combinations_with_replacement(sorted(pairs), size))
    return out


def _survivors(A: Structure, B: Structure, k: int,
               winning: Callable[[Position], bool],
               moves: Callable[[Position], list],
               responses: Callable[[Position, object], list[Position]]) -> set[Position]:
    """Greatest fixpoint: drop positions from which some move has no response."""
    surviving = {p for p in _all_positions(A, B, k) if winning(p)}
    changed = True
    while changed:
        changed = False
        for pos in sorted(surviving):
            ok = all(any(nxt in surviving for nxt in responses(pos, mv))
                     for mv in moves(pos))
            if not ok:
                surviving.discard(pos)
                changed = True
    return surviving


def pebble_game_exists(A: Structure, B: Structure, k: int,
                       build_strategy: bool = True) -> tuple[bool, Optional[dict]]:
    """Decide the existential k-pebble game from A to B.

    A position survives iff its pairs form a partial homomorphism and every
    Spoiler move (place or re-place a pebble on a source element) has a
    response keeping the successor alive.  There is no round bound; the set
    of winning positions is the greatest fixpoint of one removal sweep.
    """
    require_same_signature(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")

    def winning(pos: Position) -> bool:
        return is_partial_homomorphism(pos, A, B)

    def moves(pos: Position) -> list:
        opts = []
        bases = {pos[:i] + pos[i + 1:] for i in range(len(pos))}
        if len(pos) < k:
            bases.add(pos)
        for base in sorted(bases):
            for a in A.universe:
                opts.append((base, a))
        return opts

    def responses(pos: Position, mv) -> list[Position]:
        base, a = mv
        return [_canon(base + ((a, b),)) for b in B.universe]

    surviving = _survivors(A, B, k, winning, moves, responses)
    exists = () in surviving
    if not exists or not build_strategy:
        return exists, None

    # strategy: reachable closure from the empty board, least response first
    entries = []
    seen = {(): True}
    queue: list[Position] = [()]
    while queue:
        pos = queue.pop(0)
        bases = {pos[:i] + pos[i + 1:] for i in range(len(pos))}
        if len(pos) < k:
            bases.add(pos)
        for base in sorted(bases):
            for a in A.universe:
                response = next(b for b in B.universe
                                if _canon(base + ((a, b),)) in surviving)
                nxt = _canon(base + ((a, response),))
                entries.append({
                    "position": [list(pr) for pr in pos],
                    "keep": [list(pr) for pr in base],
                    "element": a,
                    "response": response,
                })
                if nxt not in seen:
                    seen[nxt] = True
                    queue.append(nxt)
    cert = {"comonad": "pebble", "game": "existential", "k": k, "strategy": entries}
    return True, cert


def verify_pebble_strategy(cert: Mapping, A: Structure, B: Structure) -> tuple[bool, Optional[str]]:
    """Check closure and the partial-homomorphism condition of a strategy table."""
    k = int(cert["k"])
    table: dict[tuple[Position, Position, str], str] = {}
    positions = {()}
    for entry in cert["strategy"]:
        pos = _canon(tuple((a, b) for a, b in entry["position"]))
        base = _canon(tuple((a, b) for a, b in entry["keep"]))
        table[(pos, base, entry["element"])] = entry["response"]
        positions.add(pos)
    for pos in sorted(positions):
        if not is_partial_homomorphism(pos, A, B):
            return False, f"position {list(pos)} is not a partial homomorphism"
        bases = {pos[:i] + pos[i + 1:] for i in range(len(pos))}
        if len(pos) < k:
            bases.add(pos)
        for base in sorted(bases):
            for a in A.universe:
                key = (pos, base, a)
                if key not in table:
                    return False, f"no response recorded for move {a!r} from {list(pos)}"
                nxt = _canon(base + ((a, table[key]),))
                if not is_partial_homomorphism(nxt, A, B):
                    return False, f"response {table[key]!r} to {a!r} breaks the winning condition"
                if nxt not in positions:
                    return False, f"strategy not closed: position {list(nxt)} missing"
    return True, None
