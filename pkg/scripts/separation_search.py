"""How many candidate quotients it takes to separate non-conjugate pairs.

Draws random pairs over a graph, keeps those that are not conjugate, and
records the number of candidate homomorphisms tried and the permutation
degree of the separating quotient.

    python scripts/separation_search.py --graph path3 --pairs 100
"""

import argparse
import collections
import random
import time
from dataclasses import dataclass

from raagkit.conjugacy import conjugate_g
from raagkit.config import BudgetExceeded
from raagkit.graph import Graph, cycle_graph, path_graph
from raagkit.quotient import separate_conjugacy, verify_separation
from raagkit.word import Word

GRAPHS = {
    "f2": lambda: Graph(["x", "y"]),
    "path3": lambda: path_graph("abc"),
    "c4": lambda: cycle_graph("abcd"),
}


@dataclass
class Config:
    graph: str = "path3"
    pairs: int = 100
    max_len: int = 6
    seed: int = 0
    # keep only pairs that the abelianization cannot tell apart
    same_ab: bool = True


def rand_word(rng, g, n):
    return Word(g, [rng.randrange(2 * len(g)) for _ in range(n)])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", choices=sorted(GRAPHS), default=Config.graph)
    ap.add_argument("--pairs", type=int, default=Config.pairs)
    ap.add_argument("--max-len", type=int, default=Config.max_len)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--all-pairs", dest="same_ab", action="store_false")
    cfg = Config(**vars(ap.parse_args()))
    g = GRAPHS[cfg.graph]()
    rng = random.Random(cfg.seed)
    tried = collections.Counter()
    degrees = collections.Counter()
    fails = 0
    t = time.perf_counter()
    done = 0
    while done < cfg.pairs:
        x = rand_word(rng, g, rng.randint(1, cfg.max_len))
        y = rand_word(rng, g, rng.randint(1, cfg.max_len))
        if cfg.same_ab and x.exponent_sums() != y.exponent_sums():
            continue
        if conjugate_g(x, y).conjugate:
            continue
        done += 1
        try:
            w = separate_conjugacy(x, y)
        except BudgetExceeded:
            fails += 1
            continue
        assert verify_separation(w.hom, x, y)
        tried[w.report["tried"]] += 1
        degrees[w.hom.degree] += 1
    print(f"{cfg.graph}: {done} non-conjugate pairs, {fails} out of budget, {time.perf_counter() - t:.1f}s")
    print("candidates tried:", dict(sorted(tried.items())))
    print("witness degree:  ", dict(sorted(degrees.items())))


if __name__ == "__main__":
    main()
