"""
atomkit: approximative atomic systems and local atoms in finite dimensions.
"""
from .config import settings

__version__ = settings.APP_RELEASE

__all__ = ["__version__", "settings"]
