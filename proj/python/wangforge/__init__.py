"""Wang tiles read as letter-to-letter transducers."""

from ._core import *  # noqa: F401,F403
from ._core import WangError, Transducer, named_tileset

__all__ = ["WangError", "Transducer", "named_tileset"]
