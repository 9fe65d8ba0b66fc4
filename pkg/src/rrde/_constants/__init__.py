from .tolerances import *  # noqa: F403
