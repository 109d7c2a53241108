"""The three equivalence tiers for each game comonad.

Tier 1 asks for winning existential strategies in both directions (the two
strategies are unrelated).  Tier 2 is the back-and-forth game over a winning
set of synchronized positions.  Tier 3 is the bijection-style game.  The
per-comonad winning sets:

  ef      induced move/response pairs form a partial isomorphism
  pebble  the current pebble placements form a partial isomorphism
  modal   labels agree and proposition profiles match along the play

Round structure follows the logics characterized: rank-bounded games (ef,
modal) stop after k rounds, pebble games are unbounded and solved as greatest
fixpoints over placement positions.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Optional

from . import modal as modal_mod
from .ef import coextend_play, ef_game_exists, ef_plays, strategy_to_json
from .matching import perfect_matching
from .pebble import Position, _all_positions, _canon, pebble_game_exists
from .structures import (BoundExceeded, CapExceeded, Structure,
                         is_partial_isomorphism, require_same_signature)

TAGS = ("ef", "pebble", "modal")


def _pairs_iso(pairs: frozenset, A: Structure, B: Structure) -> bool:
    return is_partial_isomorphism(pairs, A, B)


# Winning-position predicates, shared by the games and the certificate
# verifiers.  Positions are synchronized plays; each predicate receives the
# data the position reduces to.

def ef_winning_position(s, t, A, B) -> bool:
    """Same length and the induced move pairs form a partial isomorphism."""
    if len(s) != len(t):
        return False
    return is_partial_isomorphism(zip(s, t), A, B)


def pebble_winning_position(s, t, A, B) -> bool:
    """Same pebble indices and the current placements form a partial isomorphism."""
    if len(s) != len(t) or [p for p, _ in s] != [p for p, _ in t]:
        return False
    placed = {}
    for (p, a), (_, b) in zip(s, t):
        placed[p] = (a, b)
    return is_partial_isomorphism(placed.values(), A, B)


def modal_winning_position(s, t, P, Q) -> bool:
    """Labels agree and proposition profiles match at every step."""
    from .modal import kripke_view
    if len(s) != len(t) or s[1::2] != t[1::2]:
        return False
    KA, KB = kripke_view(P.base), kripke_view(Q.base)
    return all(KA.profile(a) == KB.profile(b) for a, b in zip(s[::2], t[::2]))


WINNING_SETS = {"ef": ef_winning_position,
                "pebble": pebble_winning_position,
                "modal": modal_winning_position}


# ---------------------------------------------------------------- tier 1

def mutual_existential(tag: str, A, B, k: int) -> tuple[bool, Optional[dict]]:
    """Existential game decisions in both directions."""
    if tag == "ef":
        fwd, cert_f = ef_game_exists(A, B, k)
        bwd, cert_b = ef_game_exists(B, A, k)
        cert = None
        if fwd and bwd:
            cert = {"forward": strategy_to_json(cert_f) if cert_f else None,
                    "backward": strategy_to_json(cert_b) if cert_b else None}
        return fwd and bwd, cert
    if tag == "pebble":
        fwd, cert_f = pebble_game_exists(A, B, k)
        bwd, cert_b = pebble_game_exists(B, A, k)
        return fwd and bwd, ({"forward": cert_f, "backward": cert_b}
                             if fwd and bwd else None)
    if tag == "modal":
        fwd = modal_mod.simulation_approx(A, B, k)
        bwd = modal_mod.simulation_approx(B, A, k)
        cert = None
        if fwd and bwd:
            try:
                cert = {"forward": _modal_table_json(modal_mod.simulation_strategy(A, B, k)),
                        "backward": _modal_table_json(modal_mod.simulation_strategy(B, A, k))}
            except CapExceeded:
                cert = None
        return fwd and bwd, cert
    raise ValueError(f"unknown comonad tag {tag!r}")


def _modal_table_json(table) -> Optional[list]:
    if table is None:
        return None
    return [{"play": list(s), "response": b} for s, b in sorted(table.items())]


# ---------------------------------------------------------------- tier 2

def ef_back_and_forth(A: Structure, B: Structure, k: int,
                      build_certificate: bool = True) -> tuple[bool, Optional[dict]]:
    """k-round back-and-forth game; positions memoized on the induced pair set."""
    require_same_signature(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")

    @lru_cache(maxsize=None)
    def win(pairs: frozenset, rounds: int) -> bool:
        if rounds == 0:
            return True
        for a in A.universe:
            if not any(win(pairs | {(a, b)}, rounds - 1) for b in B.universe
                       if _pairs_iso(pairs | {(a, b)}, A, B)):
                return False
        for b in B.universe:
            if not any(win(pairs | {(a, b)}, rounds - 1) for a in A.universe
                       if _pairs_iso(pairs | {(a, b)}, A, B)):
                return False
        return True

    exists = win(frozenset(), k)
    if not exists or not build_certificate:
        return exists, None

    entries = []
    seen = set()
    queue = [(frozenset(), k)]
    while queue:
        pairs, rounds = queue.pop(0)
        if (tuple(sorted(pairs)), rounds) in seen or rounds == 0:
            continue
        seen.add((tuple(sorted(pairs)), rounds))
        moves = []
        for a in A.universe:
            b = next(x for x in B.universe
                     if _pairs_iso(pairs | {(a, x)}, A, B) and win(pairs | {(a, x)}, rounds - 1))
            moves.append({"side": "left", "element": a, "response": b})
            queue.append((pairs | {(a, b)}, rounds - 1))
        for b in B.universe:
            a = next(x for x in A.universe
                     if _pairs_iso(pairs | {(x, b)}, A, B) and win(pairs | {(x, b)}, rounds - 1))
            moves.append({"side": "right", "element": b, "response": a})
            queue.append((pairs | {(a, b)}, rounds - 1))
        entries.append({"pairs": sorted(list(p) for p in pairs),
                        "rounds_left": rounds, "moves": moves})
    return True, {"comonad": "ef", "game": "back-and-forth", "k": k, "positions": entries}


def pebble_back_and_forth(A: Structure, B: Structure, k: int,
                          build_certificate: bool = True) -> tuple[bool, Optional[dict]]:
    """Unbounded two-sided k-pebble game as a greatest fixpoint.

    The winning set depends only on current placements, so positions are
    multisets of pebble pairs; Spoiler may re-place any pebble on either side.
    """
    require_same_signature(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")

    surviving = {p for p in _all_positions(A, B, k) if _pairs_iso(frozenset(p), A, B)}

    def bases(pos: Position):
        out = {pos[:i] + pos[i + 1:] for i in range(len(pos))}
        if len(pos) < k:
            out.add(pos)
        return sorted(out)

    changed = True
    while changed:
        changed = False
        for pos in sorted(surviving):
            ok = True
            for base in bases(pos):
                for a in A.universe:
                    if not any(_canon(base + ((a, b),)) in surviving for b in B.universe):
                        ok = False
                        break
                if not ok:
                    break
                for b in B.universe:
                    if not any(_canon(base + ((a, b),)) in surviving for a in A.universe):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                surviving.discard(pos)
                changed = True
    exists = () in surviving
    if not exists or not build_certificate:
        return exists, None

    entries = []
    seen = set()
    queue: list[Position] = [()]
    while queue:
        pos = queue.pop(0)
        if pos in seen:
            continue
        seen.add(pos)
        moves = []
        for base in bases(pos):
            for a in A.universe:
                b = next(x for x in B.universe if _canon(base + ((a, x),)) in surviving)
                moves.append({"keep": [list(p) for p in base], "side": "left",
                              "element": a, "response": b})
                queue.append(_canon(base + ((a, b),)))
            for b in B.universe:
                a = next(x for x in A.universe if _canon(base + ((x, b),)) in surviving)
                moves.append({"keep": [list(p) for p in base], "side": "right",
                              "element": b, "response": a})
                queue.append(_canon(base + ((a, b),)))
        entries.append({"position": [list(p) for p in pos], "moves": moves})
    return True, {"comonad": "pebble", "game": "back-and-forth", "k": k, "positions": entries}


def back_and_forth_equiv(tag: str, A, B, k: int) -> tuple[bool, Optional[dict]]:
    if tag == "ef":
        return ef_back_and_forth(A, B, k)
    if tag == "pebble":
        return pebble_back_and_forth(A, B, k)
    if tag == "modal":
        return modal_mod.modal_back_and_forth(A, B, k)
    raise ValueError(f"unknown comonad tag {tag!r}")


# ---------------------------------------------------------------- tier 3

def bijection_game_equiv(A: Structure, B: Structure, k: int,
                         build_certificate: bool = True) -> tuple[bool, Optional[dict]]:
    """k-round bijection game.

    Spoiler wins outright on a cardinality mismatch.  Each round Duplicator
    commits to a bijection and Spoiler picks a source element; the chosen
    pairs must stay a partial isomorphism.  A usable bijection exists iff the
    bipartite graph of recursively safe pairs has a perfect matching.
    """
    require_same_signature(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(A.universe) != len(B.universe):
        return False, None

    @lru_cache(maxsize=None)
    def matching_at(pairs: frozenset, rounds: int) -> Optional[tuple]:
        psi = perfect_matching(A.universe, B.universe,
                               lambda a, b: _pairs_iso(pairs | {(a, b)}, A, B)
                               and win(pairs | {(a, b)}, rounds - 1))
        return tuple(sorted(psi.items())) if psi is not None else None

    @lru_cache(maxsize=None)
    def win(pairs: frozenset, rounds: int) -> bool:
        if rounds == 0:
            return True
        return matching_at(pairs, rounds) is not None

    exists = win(frozenset(), k)
    if not exists or not build_certificate:
        return exists, None

    entries = []
    seen = set()
    queue = [(frozenset(), k)]
    while queue:
        pairs, rounds = queue.pop(0)
        if (tuple(sorted(pairs)), rounds) in seen or rounds == 0:
            continue
        seen.add((tuple(sorted(pairs)), rounds))
        psi = dict(matching_at(pairs, rounds))
        entries.append({"pairs": sorted(list(p) for p in pairs),
                        "rounds_left": rounds,
                        "bijection": sorted([a, b] for a, b in psi.items())})
        for a, b in psi.items():
            queue.append((pairs | {(a, b)}, rounds - 1))
    return True, {"comonad": "ef", "game": "bijection", "k": k, "positions": entries}


def pebble_bijection_equiv(A: Structure, B: Structure, k: int,
                           build_certificate: bool = True) -> tuple[bool, Optional[dict]]:
    """k-pebble bijection game, unbounded rounds, greatest fixpoint."""
    require_same_signature(A, B)
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(A.universe) != len(B.universe):
        return False, None

    surviving = {p for p in _all_positions(A, B, k) if _pairs_iso(frozenset(p), A, B)}

    def bases(pos: Position):
        out = {pos[:i] + pos[i + 1:] for i in range(len(pos))}
        if len(pos) < k:
            out.add(pos)
        return sorted(out)

    def matching_for(base: Position) -> Optional[dict]:
        return perfect_matching(A.universe, B.universe,
                                lambda a, b: _canon(base + ((a, b),)) in surviving)

    changed = True
    while changed:
        changed = False
        for pos in sorted(surviving):
            if not all(matching_for(base) is not None for base in bases(pos)):
                surviving.discard(pos)
                changed = True
    exists = () in surviving
    if not exists or not build_certificate:
        return exists, None

    entries = []
    seen = set()
    queue: list[Position] = [()]
    while queue:
        pos = queue.pop(0)
        if pos in seen:
            continue
        seen.add(pos)
        moves = []
        for base in bases(pos):
            psi = matching_for(base)
            moves.append({"keep": [list(p) for p in base],
                          "bijection": sorted([a, b] for a, b in psi.items())})
            for a, b in psi.items():
                queue.append(_canon(base + ((a, b),)))
        entries.append({"position": [list(p) for p in pos], "moves": moves})
    return True, {"comonad": "pebble", "game": "bijection", "k": k, "positions": entries}


# ------------------------------------------------------- fixpoint oracle

def build_theta(A: Structure, B: Structure, k: int,
                max_functions: int = 10 ** 6):
    """Materialize the strategy-set operator for the back-and-forth game.

    Enumerates every function from plays over A to elements of B whose
    coextension stays inside the winning set (and symmetrically), and returns
    (theta, S_ab, S_ba) where theta maps a set of forward strategy functions
    to the set of those locally inverted by some backward one, twice over.
    """
    require_same_signature(A, B)
    plays_a = ef_plays(A, k)
    plays_b = ef_plays(B, k)
    if len(B.universe) ** len(plays_a) > max_functions:
        raise BoundExceeded(
            f"{len(B.universe)}^{len(plays_a)} strategy candidates exceed {max_functions}")
    if len(A.universe) ** len(plays_b) > max_functions:
        raise BoundExceeded(
            f"{len(A.universe)}^{len(plays_b)} strategy candidates exceed {max_functions}")

    def strategy_set(plays, src, dst):
        out = []
        for values in product(dst.universe, repeat=len(plays)):
            f = dict(zip(plays, values))
            star = {s: coextend_play(f.__getitem__, s) for s in plays}
            if all(_pairs_iso(frozenset(zip(s, star[s])), src, dst) for s in plays):
                out.append(star)
        return out

    S_ab = strategy_set(plays_a, A, B)
    S_ba = strategy_set(plays_b, B, A)

    # ok_back[g][t] = indices of forward strategies with f*(g*(t)) == t
    ok_back = [[frozenset(i for i, f in enumerate(S_ab) if f[g[t]] == t)
                for t in plays_b] for g in S_ba]
    ok_fwd = [[frozenset(j for j, g in enumerate(S_ba) if g[f[s]] == s)
               for s in plays_a] for f in S_ab]

    def gamma(F: frozenset) -> frozenset:
        return frozenset(j for j in range(len(S_ba))
                         if all(ok_back[j][t] & F for t in range(len(plays_b))))

    def delta(G: frozenset) -> frozenset:
        return frozenset(i for i in range(len(S_ab))
                         if all(ok_fwd[i][s] & G for s in range(len(plays_a))))

    def theta(F: frozenset) -> frozenset:
        return delta(gamma(F))

    return theta, S_ab, S_ba


def theta_fixpoint_oracle(A: Structure, B: Structure, k: int,
                          max_functions: int = 10 ** 6) -> bool:
    """Decide the back-and-forth equivalence by the descending fixpoint.

    Starting from the full strategy set, iterate the operator until stable;
    the greatest fixpoint is non-empty iff the equivalence holds.  Usable only
    on tiny instances (the strategy sets are enumerated outright).
    """
    theta, S_ab, _ = build_theta(A, B, k, max_functions)
    F = frozenset(range(len(S_ab)))
    while True:
        nxt = theta(F)
        if nxt == F:
            return bool(F)
        F = nxt


# ----------------------------------------------------- certificate checks

def _iso_pos(pairs, A, B) -> bool:
    return is_partial_isomorphism(pairs, A, B)


def verify_ef_back_and_forth_certificate(cert, A: Structure, B: Structure
                                         ) -> tuple[bool, Optional[str]]:
    """Closure and winning-set membership of a recorded two-sided strategy."""
    k = int(cert["k"])
    table = {}
    for entry in cert["positions"]:
        pairs = frozenset((a, b) for a, b in entry["pairs"])
        moves = {(m["side"], m["element"]): m["response"] for m in entry["moves"]}
        table[(tuple(sorted(pairs)), int(entry["rounds_left"]))] = (pairs, moves)
    if ((), k) not in table:
        return False, "initial position missing"
    for (key, rounds), (pairs, moves) in sorted(table.items()):
        if not _iso_pos(pairs, A, B):
            return False, f"position {sorted(pairs)} is not a partial isomorphism"
        for side, universe in (("left", A.universe), ("right", B.universe)):
            for x in universe:
                if (side, x) not in moves:
                    return False, f"no response to {side} move {x!r} at {sorted(pairs)}"
                y = moves[(side, x)]
                new = pairs | ({(x, y)} if side == "left" else {(y, x)})
                if not _iso_pos(new, A, B):
                    return False, f"response {y!r} to {x!r} leaves the winning set"
                if rounds - 1 >= 1 and (tuple(sorted(new)), rounds - 1) not in table:
                    return False, f"strategy not closed at {sorted(new)}"
    return True, None


def verify_ef_bijection_certificate(cert, A: Structure, B: Structure
                                    ) -> tuple[bool, Optional[str]]:
    k = int(cert["k"])
    if len(A.universe) != len(B.universe):
        return False, "cardinality mismatch"
    table = {}
    for entry in cert["positions"]:
        pairs = frozenset((a, b) for a, b in entry["pairs"])
        table[(tuple(sorted(pairs)), int(entry["rounds_left"]))] = \
            (pairs, {a: b for a, b in entry["bijection"]})
    if ((), k) not in table:
        return False, "initial position missing"
    for (key, rounds), (pairs, psi) in sorted(table.items()):
        if sorted(psi) != sorted(A.universe) or sorted(psi.values()) != sorted(B.universe):
            return False, f"map at {sorted(pairs)} is not a bijection"
        for a in A.universe:
            new = pairs | {(a, psi[a])}
            if not _iso_pos(new, A, B):
                return False, f"pair ({a!r}, {psi[a]!r}) breaks the position"
            if rounds - 1 >= 1 and (tuple(sorted(new)), rounds - 1) not in table:
                return False, f"strategy not closed at {sorted(new)}"
    return True, None


def _pebble_bases(pos: Position, k: int):
    out = {pos[:i] + pos[i + 1:] for i in range(len(pos))}
    if len(pos) < k:
        out.add(pos)
    return sorted(out)


def verify_pebble_back_and_forth_certificate(cert, A: Structure, B: Structure
                                             ) -> tuple[bool, Optional[str]]:
    k = int(cert["k"])
    table = {}
    for entry in cert["positions"]:
        pos = _canon(tuple((a, b) for a, b in entry["position"]))
        moves = {(_canon(tuple((a, b) for a, b in m["keep"])), m["side"], m["element"]):
                 m["response"] for m in entry["moves"]}
        table[pos] = moves
    if () not in table:
        return False, "initial position missing"
    for pos in sorted(table):
        if not _iso_pos(frozenset(pos), A, B):
            return False, f"position {list(pos)} is not a partial isomorphism"
        for base in _pebble_bases(pos, k):
            for side, universe in (("left", A.universe), ("right", B.universe)):
                for x in universe:
                    key = (base, side, x)
                    if key not in table[pos]:
                        return False, f"no response to {side} move {x!r} from {list(pos)}"
                    y = table[pos][key]
                    new = _canon(base + (((x, y),) if side == "left" else ((y, x),)))
                    if not _iso_pos(frozenset(new), A, B):
                        return False, f"response {y!r} leaves the winning set"
                    if new not in table:
                        return False, f"strategy not closed at {list(new)}"
    return True, None


def verify_pebble_bijection_certificate(cert, A: Structure, B: Structure
                                        ) -> tuple[bool, Optional[str]]:
    k = int(cert["k"])
    if len(A.universe) != len(B.universe):
        return False, "cardinality mismatch"
    table = {}
    for entry in cert["positions"]:
        pos = _canon(tuple((a, b) for a, b in entry["position"]))
        table[pos] = {_canon(tuple((a, b) for a, b in m["keep"])):
                      {a: b for a, b in m["bijection"]} for m in entry["moves"]}
    if () not in table:
        return False, "initial position missing"
    for pos in sorted(table):
        if not _iso_pos(frozenset(pos), A, B):
            return False, f"position {list(pos)} is not a partial isomorphism"
        for base in _pebble_bases(pos, k):
            if base not in table[pos]:
                return False, f"no bijection recorded for keep {list(base)} at {list(pos)}"
            psi = table[pos][base]
            if sorted(psi) != sorted(A.universe) or sorted(psi.values()) != sorted(B.universe):
                return False, f"map at {list(pos)} is not a bijection"
            for a in A.universe:
                new = _canon(base + ((a, psi[a]),))
                if not _iso_pos(frozenset(new), A, B):
                    return False, f"pair ({a!r}, {psi[a]!r}) breaks the position"
                if new not in table:
                    return False, f"strategy not closed at {list(new)}"
    return True, None


def verify_certificate(cert, A, B) -> tuple[bool, Optional[str]]:
    """Dispatch on the certificate's (comonad, game) stamp."""
    from .ef import strategy_from_json, verify_ef_strategy
    from .modal import verify_graded_certificate, verify_modal_bf_certificate
    from .pebble import verify_pebble_strategy
    kind = (cert.get("comonad"), cert.get("game"))
    if kind == ("ef", "existential"):
        return verify_ef_strategy(strategy_from_json(cert, A, B))
    if kind == ("ef", "back-and-forth"):
        return verify_ef_back_and_forth_certificate(cert, A, B)
    if kind == ("ef", "bijection"):
        return verify_ef_bijection_certificate(cert, A, B)
    if kind == ("pebble", "existential"):
        return verify_pebble_strategy(cert, A, B)
    if kind == ("pebble", "back-and-forth"):
        return verify_pebble_back_and_forth_certificate(cert, A, B)
    if kind == ("pebble", "bijection"):
        return verify_pebble_bijection_certificate(cert, A, B)
    if kind == ("modal", "back-and-forth"):
        return verify_modal_bf_certificate(cert, A, B)
    if kind == ("modal", "graded-bisimulation"):
        return verify_graded_certificate(cert, A, B)
    return False, f"unknown certificate kind {kind}"


# ---------------------------------------------------------------- driver

def decide(tag: str, tier: int, A, B, k: int) -> dict:
    """Run one equivalence decision and package the verdict."""
    if tag not in TAGS:
        raise ValueError(f"unknown comonad tag {tag!r}")
    if tier == 1:
        equiv, cert = mutual_existential(tag, A, B, k)
    elif tier == 2:
        equiv, cert = back_and_forth_equiv(tag, A, B, k)
    elif tier == 3:
        if tag == "ef":
            equiv, cert = bijection_game_equiv(A, B, k)
        elif tag == "pebble":
            equiv, cert = pebble_bijection_equiv(A, B, k)
        else:
            equiv, cert = modal_mod.graded_bisim_game(A, B, k)
    else:
        raise ValueError(f"tier must be 1, 2 or 3, got {tier}")
    return {"equiv": equiv, "tier": tier, "comonad": tag, "k": k, "certificate": cert}
