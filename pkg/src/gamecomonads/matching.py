"""Bipartite perfect matching (Kuhn's augmenting paths), used by bijection games."""

from __future__ import annotations

from typing import Callable, Optional, Sequence


def perfect_matching(left: Sequence, right: Sequence,
                     edge: Callable) -> Optional[dict]:
    """Return a perfect matching {left -> right} or None if none exists."""
    if len(left) != len(right):
        return None
    match_right: dict = {}

    def augment(u, visited: set) -> bool:
        for v in right:
            if v in visited or not edge(u, v):
                continue
            visited.add(v)
            if v not in match_right or augment(match_right[v], visited):
                match_right[v] = u
                return True
        return False

    for u in left:
        if not augment(u, set()):
            return None
    return {u: v for v, u in match_right.items()}
