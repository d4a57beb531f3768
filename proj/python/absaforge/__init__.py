"""ABSA augmentation and contrastive-training toolkit (native core)."""

from absaforge._core import *  # noqa: F401,F403
from absaforge._core import __doc__  # noqa: F401
