"""Exception hierarchy shared by every module."""


class MilefError(Exception):
    """Base class for all library errors."""


class ContractError(MilefError, ValueError):
    """An input violates a documented precondition (dimension, shape, domain)."""


class ResourceCapError(MilefError, RuntimeError):
    """A desk-scale limit would be exceeded; the caller may raise the cap."""


class EmptyHullError(MilefError, ValueError):
    """Convex hull of an empty set was requested."""


class EmptySetError(MilefError, ValueError):
    """An operation needs a non-empty set but got an empty one."""


class UnboundedError(MilefError, ValueError):
    """An operation needs a bounded set but got an unbounded one."""


class VerificationError(MilefError):
    """A computed object failed its exact self-check."""
