"""Exception types shared across the pipeline (mapped to CLI exit codes)."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured evaluation budget."""


class DegenerateError(RuntimeError):
    """The input pair is degenerate with respect to its Newton polyhedron."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


DEFAULT_MAX_EVALS = 10**8


def check_budget(cost: int, budget: int | None, what: str) -> None:
    budget = DEFAULT_MAX_EVALS if budget is None else budget
    if cost > budget:
        raise BudgetExceeded(f"{what} needs {cost} evaluations, budget is {budget}")
