"""Built-in cost presets (c = 1.0 throughout).

Case 1: delivery is the expensive channel (c_e > c_b > c_s).
Case 2: BOPS is the expensive channel (c_b > c_e > c_s).
Case 3: every channel is nearly as costly as shipping.
"""

from .core import ModelParams

COST_CASES = {
    1: ModelParams(c=1.0, c_e=0.5, c_b=0.4, c_s=0.1),
    2: ModelParams(c=1.0, c_e=0.5, c_b=0.6, c_s=0.1),
    3: ModelParams(c=1.0, c_e=0.9, c_b=0.8, c_s=0.7),
}
