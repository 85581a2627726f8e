"""
Error types shared across the damage model

Pure functions raise plain ValueError; scenario handling collects located
issues into a single ScenarioError so every problem is reported at once.
"""

from dataclasses import dataclass
from typing import List, Optional


@dataclass(frozen=True)
class ScenarioIssue:
    """One located problem in a scenario document"""

    path: str
    message: str
    line: Optional[int] = None

    def __str__(self) -> str:
        location = f"line {self.line}: " if self.line is not None else ""
        if self.path:
            return f"{location}{self.path}: {self.message}"
        return f"{location}{self.message}"


class ScenarioError(ValueError):
    """Scenario could not be parsed or failed validation"""

    def __init__(self, issues: List[ScenarioIssue]):
        self.issues = list(issues)
        super().__init__("\n".join(str(issue) for issue in self.issues))
