"""Flux-saturated Keller-Segel solver in mass coordinates."""

try:
    from ._satflux import *  # noqa: F401,F403
    from ._satflux import __version__
except ImportError:  # in-tree build: the extension sits next to the package, not inside it
    from _satflux import *  # noqa: F401,F403
    from _satflux import __version__
