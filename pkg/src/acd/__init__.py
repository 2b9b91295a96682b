"""Audited credential delegation (ACD) gateway.

A username/password authentication service plus a certificate and proxy
credential repository, driven by a per-connection session protocol, with
every credential use attributed to a user through a hash-chained audit
trail.  The package is organised as a functional core (value-semantics
state, pure operations) wrapped by a gateway engine that serialises
mutations, persists state, and serves two network faces: a line-delimited
TCP wire protocol and a FastAPI HTTP service.
"""

__version__ = "0.1.0"

from .core import Report, Role

__all__ = ["Report", "Role", "__version__"]
