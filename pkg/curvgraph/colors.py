"""Colorama foreground names of the bound verdicts in table output."""

VERDICT_FORE = {
    "HOLDS": "GREEN",
    "SHARP": "CYAN",
    "VIOLATED": "RED",
    "NOT-APPLICABLE": "YELLOW",
    True: "GREEN",
    False: "RED",
}

VERDICT_COLUMNS = ("verdict", "holds", "tight", "converged")
