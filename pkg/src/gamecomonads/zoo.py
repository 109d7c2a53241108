"""Small named structures used in tests, demos and documentation."""

from __future__ import annotations

from .structures import PointedStructure, Structure, validate_structure


def loop() -> Structure:
    """One element with a self-loop."""
    return validate_structure({"R": 2}, ["a"], {"R": [["a", "a"]]})


def edge() -> Structure:
    """Two elements, one directed edge."""
    return validate_structure({"R": 2}, ["a", "b"], {"R": [["a", "b"]]})


def edge2() -> Structure:
    """Two elements, symmetric edge (the complete graph K2)."""
    return validate_structure({"R": 2}, ["a", "b"], {"R": [["a", "b"], ["b", "a"]]})


def lin(n: int) -> Structure:
    """Strict linear order on n elements e0 < e1 < ... < e(n-1)."""
    u = [f"e{i}" for i in range(n)]
    tups = [[u[i], u[j]] for i in range(n) for j in range(n) if i < j]
    return validate_structure({"R": 2}, u, {"R": tups})


def clique(n: int) -> Structure:
    """Symmetric irreflexive complete graph on n elements."""
    u = [f"v{i}" for i in range(n)]
    tups = [[x, y] for x in u for y in u if x != y]
    return validate_structure({"R": 2}, u, {"R": tups})


def cycle(n: int) -> Structure:
    """Symmetric cycle on n elements."""
    u = [f"v{i}" for i in range(n)]
    tups = []
    for i in range(n):
        j = (i + 1) % n
        tups.append([u[i], u[j]])
        tups.append([u[j], u[i]])
    return validate_structure({"R": 2}, u, {"R": tups})


def path(n: int) -> Structure:
    """Symmetric path on n elements."""
    u = [f"v{i}" for i in range(n)]
    tups = []
    for i in range(n - 1):
        tups.append([u[i], u[i + 1]])
        tups.append([u[i + 1], u[i]])
    return validate_structure({"R": 2}, u, {"R": tups})


def kripke(worlds, point, transitions, props=None) -> PointedStructure:
    """Build a pointed Kripke structure.

    transitions: mapping label -> list of (source, target) pairs
    props: mapping prop-name -> list of worlds where it holds
    """
    props = props or {}
    sig = {name: 1 for name in props}
    sig.update({label: 2 for label in transitions})
    rels = {name: [[w] for w in ws] for name, ws in props.items()}
    rels.update({label: [[u, v] for (u, v) in prs] for label, prs in transitions.items()})
    A = validate_structure(sig, list(worlds), rels)
    out = structure_point(A, point)
    return out


def structure_point(A: Structure, point: str) -> PointedStructure:
    if point not in A.universe:
        raise ValueError(f"point {point!r} not in universe")
    return PointedStructure(A, point)


def kripke_loop() -> PointedStructure:
    """Single world with a self transition."""
    return kripke(["a"], "a", {"t": [("a", "a")]})


def kripke_two_cycle() -> PointedStructure:
    return kripke(["a", "b"], "a", {"t": [("a", "b"), ("b", "a")]})


def kripke_chain(n: int) -> PointedStructure:
    """Chain w0 -> w1 -> ... -> w(n) of length n."""
    worlds = [f"w{i}" for i in range(n + 1)]
    return kripke(worlds, "w0", {"t": [(worlds[i], worlds[i + 1]) for i in range(n)]})
