"""Risk-adaptive DSRC broadcast backoff toolkit.

Closed-form engine (backoff-chain fixed point, collision and delivery
metrics) plus a slot-level Monte Carlo simulator over a Poisson vehicle
field. The heavy lifting lives in the compiled extension ``_core``.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
