"""
Exception hierarchy for cstarnet
"""


class CStarNetError(Exception):
    """Base class for every error raised by cstarnet"""


class StructureError(CStarNetError, ValueError):
    """Mismatched algebras, modules or operator shapes"""


class DomainError(CStarNetError, ValueError):
    """An operation was called outside its domain (non-positive input, zero element, bad index)"""


class ConfigurationError(CStarNetError, ValueError):
    """Invalid scenario or axiom configuration"""


class InconsistentGeneratorError(CStarNetError):
    """An operator generator disagrees with itself across truncation lengths"""


class ReplayMismatchError(CStarNetError):
    """A report was replayed against a config with a different hash"""
