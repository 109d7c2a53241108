#!/usr/bin/env python3
"""Write the named example structures as JSON files for CLI experiments.

Usage: python scripts/make_fixtures.py [outdir]   (default: fixtures/)
"""

import json
import pathlib
import sys

from gamecomonads import structure_to_dict, zoo

FIXTURES = {
    "loop": zoo.loop(),
    "edge": zoo.edge(),
    "edge2": zoo.edge2(),
    "lin2": zoo.lin(2),
    "lin3": zoo.lin(3),
    "lin7": zoo.lin(7),
    "lin8": zoo.lin(8),
    "k3": zoo.clique(3),
    "k4": zoo.clique(4),
    "c5": zoo.cycle(5),
    "path3": zoo.path(3),
    "kripke-loop": zoo.kripke_loop(),
    "kripke-2cycle": zoo.kripke_two_cycle(),
    "kripke-chain2": zoo.kripke_chain(2),
}


def main() -> None:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, A in FIXTURES.items():
        path = outdir / f"{name}.json"
        path.write_text(json.dumps(structure_to_dict(A), indent=2, sort_keys=True),
                        encoding="utf-8")
        print(path)


if __name__ == "__main__":
    main()
