"""Hypothesis strategies for small structures."""

from __future__ import annotations

import hypothesis.strategies as st

from gamecomonads.structures import validate_structure
from gamecomonads.zoo import kripke


@st.composite
def structures(draw, max_size=3, max_arity=2, signature=None):
    if signature is None:
        arity = draw(st.integers(1, max_arity))
        signature = {"R": arity}
    size = draw(st.integers(1, max_size))
    universe = [f"x{i}" for i in range(size)]
    relations = {}
    for name, ar in signature.items():
        cells = [[]]
        for _ in range(ar):
            cells = [t + [x] for t in cells for x in universe]
        chosen = draw(st.lists(st.sampled_from(range(len(cells))),
                               unique=True, max_size=len(cells)))
        relations[name] = [cells[i] for i in sorted(chosen)]
    return validate_structure(signature, universe, relations)


@st.composite
def structure_pairs(draw, max_size=3, max_arity=2):
    arity = draw(st.integers(1, max_arity))
    sig = {"R": arity}
    return (draw(structures(max_size=max_size, signature=sig)),
            draw(structures(max_size=max_size, signature=sig)))


@st.composite
def pointed_kripkes(draw, max_worlds=3, labels=("s", "t"), props=("p",)):
    size = draw(st.integers(1, max_worlds))
    worlds = [f"w{i}" for i in range(size)]
    transitions = {}
    for lab in labels:
        cells = [(u, v) for u in worlds for v in worlds]
        chosen = draw(st.lists(st.sampled_from(range(len(cells))),
                               unique=True, max_size=len(cells)))
        transitions[lab] = [cells[i] for i in sorted(chosen)]
    prop_map = {}
    for p in props:
        chosen = draw(st.lists(st.sampled_from(range(size)), unique=True, max_size=size))
        prop_map[p] = [worlds[i] for i in sorted(chosen)]
    point = worlds[draw(st.integers(0, size - 1))]
    return kripke(worlds, point, transitions, prop_map)


@st.composite
def pointed_kripke_pairs(draw, max_worlds=3):
    return (draw(pointed_kripkes(max_worlds=max_worlds)),
            draw(pointed_kripkes(max_worlds=max_worlds)))
