"""Exception types shared across the package."""


class InvalidFSpec(ValueError):
    """An f-sequence spec has bad parameters or cannot produce the requested terms."""


class InvalidQ(ValueError):
    """A supplied q-sequence violates q(1) = 1 or 1 <= q(n) <= n."""


class CapExceeded(ValueError):
    """An exhaustive-enumeration request is beyond the configured cap."""
