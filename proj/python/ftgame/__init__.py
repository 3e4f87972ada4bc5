"""Zero-sum controller-stopper stochastic game toolkit."""

from ._ftgame import *  # noqa: F401,F403
from ._ftgame import __doc__  # noqa: F401
