"""The Ehrenfeucht-Fraisse comonad on finite structures.

A play of rank k over a structure is a non-empty sequence of at most k
elements.  The comonad sends a structure to the structure of all such plays;
a coKleisli map (plays -> target elements) is exactly a Duplicator strategy
for the k-round existential comparison game, and its coextension replays the
strategy prefix by prefix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Optional

from .structures import (CapExceeded, Structure, is_partial_homomorphism,
                         require_same_signature, validate_structure)

EfPlay = tuple[str, ...]

DEFAULT_CAP = 200_000


def play_id(s: EfPlay) -> str:
    """Stable string id for a play, used as an element of a materialized structure."""
    return json.dumps(list(s), separators=(",", ":"))


def play_of_id(pid: str) -> EfPlay:
    return tuple(json.loads(pid))


def ef_universe_size(n: int, k: int) -> int:
    return sum(n ** i for i in range(1, k + 1))


def ef_plays(A: Structure, k: int) -> list[EfPlay]:
    """All plays of length 1..k, ordered by length then componentwise universe order."""
    out: list[EfPlay] = []
    frontier: list[EfPlay] = [()]
    for _ in range(k):
        frontier = [s + (a,) for s in frontier for a in A.universe]
        out.extend(frontier)
    return out


def prefix_comparable(s: EfPlay, t: EfPlay) -> bool:
    return s[:len(t)] == t or t[:len(s)] == s


def ef_counit(s: EfPlay) -> str:
    if not s:
        raise ValueError("plays are non-empty")
    return s[-1]


def ef_materialize(A: Structure, k: int, cap: int = DEFAULT_CAP) -> Structure:
    """Build the play structure explicitly.

    Plays become elements (see play_id); a relation holds of a tuple of plays
    iff they are pairwise prefix-comparable and the relation holds of their
    last elements in A.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    size = ef_universe_size(len(A.universe), k)
    if size > cap:
        raise CapExceeded(size, cap)
    plays = ef_plays(A, k)
    interp: dict[str, list[list[str]]] = {}
    for name, tups in A.relations.items():
        ar = A.sig.arity(name)
        rows = []
        # every pairwise-comparable tuple has a unique longest member, so
        # enumerate tuples of prefixes of each play that actually use it
        for s in plays:
            prefixes = [s[:i] for i in range(1, len(s) + 1)]
            for combo in product(prefixes, repeat=ar):
                if s not in combo:
                    continue
                if tuple(c[-1] for c in combo) in tups:
                    rows.append([play_id(c) for c in combo])
        interp[name] = rows
    return validate_structure(dict(A.sig.relations), [play_id(s) for s in plays], interp)


@dataclass
class EfCoKleisli:
    """A total map from plays over `source` to elements of `target`."""

    source: Structure
    target: Structure
    k: int
    table: dict[EfPlay, str]

    def __call__(self, s: EfPlay) -> str:
        return self.table[s]


def coextend_play(f: Callable[[EfPlay], str], s: EfPlay) -> EfPlay:
    """Replay f along the prefixes of s; output has the same length as s."""
    return tuple(f(s[:i]) for i in range(1, len(s) + 1))


def ef_coextension(f: EfCoKleisli) -> dict[EfPlay, EfPlay]:
    return {s: coextend_play(f, s) for s in ef_plays(f.source, f.k)}


def induced_pairs(s: EfPlay, t: EfPlay) -> frozenset[tuple[str, str]]:
    if len(s) != len(t):
        raise ValueError("positions must have equal length")
    return frozenset(zip(s, t))


def ef_game_exists(A: Structure, B: Structure, k: int,
                   build_strategy: bool = True,
                   strategy_cap: int = DEFAULT_CAP) -> tuple[bool, Optional[EfCoKleisli]]:
    """Decide the k-round existential comparison game from A to B.

    Positions are memoized on the induced partial map plus the number of
    rounds left; Duplicator survives iff the map stays a partial homomorphism.
    On a win, the full strategy table (one response per play) is returned as a
    coKleisli map unless it would exceed strategy_cap entries.
    """
    require_same_signature(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")

    @lru_cache(maxsize=None)
    def win(pairs: frozenset, rounds_left: int) -> bool:
        if rounds_left == 0:
            return True
        for a in A.universe:
            if not any(win(pairs | {(a, b)}, rounds_left - 1)
                       for b in B.universe
                       if is_partial_homomorphism(pairs | {(a, b)}, A, B)):
                return False
        return True

    exists = win(frozenset(), k)
    if not exists or not build_strategy:
        return exists, None
    if ef_universe_size(len(A.universe), k) > strategy_cap:
        return True, None

    table: dict[EfPlay, str] = {}

    def extend(s: EfPlay, pairs: frozenset, rounds_left: int) -> None:
        if rounds_left == 0:
            return
        for a in A.universe:
            for b in B.universe:
                nxt = pairs | {(a, b)}
                if is_partial_homomorphism(nxt, A, B) and win(nxt, rounds_left - 1):
                    table[s + (a,)] = b
                    extend(s + (a,), nxt, rounds_left - 1)
                    break

    extend((), frozenset(), k)
    return True, EfCoKleisli(A, B, k, table)


def verify_ef_strategy(f: EfCoKleisli) -> tuple[bool, Optional[str]]:
    """Replay a strategy table against the winning condition.

    The table must cover every play up to rank k, and for each play the
    induced pairs of moves and responses must form a partial homomorphism.
    """
    A, B, k = f.source, f.target, f.k
    for s in ef_plays(A, k):
        if s not in f.table:
            return False, f"strategy undefined on play {list(s)}"
        if f.table[s] not in B.universe:
            return False, f"response to {list(s)} is not a target element"
        pairs = induced_pairs(s, coextend_play(f, s))
        if not is_partial_homomorphism(pairs, A, B):
            return False, f"position after play {list(s)} is not a partial homomorphism"
    return True, None


def i_morphism_normalize(f: EfCoKleisli) -> EfCoKleisli:
    """Collapse responses on plays whose last element already occurred.

    The value at such a play is copied from the prefix ending at the first
    occurrence, making the result invariant under repeated moves while
    remaining a homomorphism.
    """
    table: dict[EfPlay, str] = {}
    for s, value in f.table.items():
        first = s.index(s[-1])
        if first == len(s) - 1:
            table[s] = value
        else:
            table[s] = f.table[s[:first + 1]]
    return EfCoKleisli(f.source, f.target, f.k, table)


def is_i_morphism(f: EfCoKleisli) -> bool:
    for s in f.table:
        first = s.index(s[-1])
        if f.table[s] != f.table[s[:first + 1]]:
            return False
    return True


def strategy_to_json(f: EfCoKleisli) -> dict:
    return {
        "comonad": "ef",
        "game": "existential",
        "k": f.k,
        "strategy": [{"play": list(s), "response": f.table[s]}
                     for s in sorted(f.table, key=lambda s: (len(s), s))],
    }


def strategy_from_json(data: Mapping, A: Structure, B: Structure) -> EfCoKleisli:
    table = {tuple(entry["play"]): entry["response"] for entry in data["strategy"]}
    return EfCoKleisli(A, B, int(data["k"]), table)
