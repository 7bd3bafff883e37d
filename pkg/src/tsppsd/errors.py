"""Error types shared across the package.

Invalid arguments raise plain ValueError; blowing a configurable cap raises
ResourceLimitError so callers (and the CLI exit-code contract) can tell the
two apart.
"""


class ResourceLimitError(RuntimeError):
    """A computation exceeded a configured resource cap."""
