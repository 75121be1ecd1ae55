import os
from dataclasses import dataclass, replace


class BudgetExceeded(RuntimeError):
    """A search cap was hit; the answer is unknown rather than negative."""

    def __init__(self, what, spent=None):
        super().__init__(f"budget exceeded: {what}")
        self.what = what
        self.spent = spent


@dataclass(frozen=True)
class Budget:
    # BFS over reduced representatives / prefixes
    nodes: int = 200_000
    # depth of the special-subgroup recursion
    depth: int = 64
    # candidate homomorphisms tried by witness searches
    homs: int = 400
    # largest permutation degree tried by random hom search
    max_degree: int = 8
    # hard cap on the order of any finite group we close up
    group_order: int = 1_000_000
    # steps per worker in the dual race
    race_steps: int = 20_000
    seed: int = 0

    def scaled(self, factor):
        return replace(self, homs=int(self.homs * factor),
                       race_steps=int(self.race_steps * factor))


DEFAULT = Budget()


def budget_from_env(base=DEFAULT):
    """RAAGKIT_BUDGET=N sets the witness-search budget (homs and race steps)."""
    raw = os.environ.get("RAAGKIT_BUDGET")
    if not raw:
        return base
    n = int(raw)
    return replace(base, homs=n, race_steps=max(n, 1) * 50)
