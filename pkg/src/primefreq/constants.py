"""Reference constants used by the engines and the audit."""

from dataclasses import dataclass

# Euler-Mascheroni constant, 20 decimals.
GAMMA_DECIMAL = "0.57721566490153286061"
GAMMA = float(GAMMA_DECIMAL)


@dataclass(frozen=True)
class Constants:
    gamma: float = GAMMA
    s_ref: float = 0.662834
    limit_b: float = 1.24005
    limit_gap: float = 2.24005
    # decimals printed for each reference value
    s_ref_digits: int = 6
    limit_digits: int = 5


REFERENCE = Constants()
