"""Multi-view diffusion maps: kernel fusion, coupled embeddings and
diffusion distances over row-aligned views of one dataset."""

from mvdm._core import *  # noqa: F401,F403
from mvdm._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
