from __future__ import annotations


class BudgetExceeded(RuntimeError):
    """A computation hit one of its configured budgets before finishing.

    ``what`` names the budget (``"nilpotency"``, ``"nodes"``, ...), so callers
    can turn the failure into an ``unknown`` verdict with a useful note.
    """

    def __init__(self, what: str, budget: int, note: str = ""):
        self.what = what
        self.budget = budget
        self.note = note
        msg = f"{what} budget {budget} exceeded"
        super().__init__(f"{msg}: {note}" if note else msg)


class FieldSensitivity(UserWarning):
    """Raised as a warning when a result depends on the base field not being closed."""
