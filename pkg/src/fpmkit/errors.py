"""Exception hierarchy shared by the library and the CLI."""


class FpmError(Exception):
    """Base class for all fpmkit errors."""


class InputError(FpmError, ValueError):
    """An argument violates an operation's precondition."""


class ParseError(InputError):
    """A JSON document could not be decoded into a domain object."""


class CapacityError(FpmError):
    """An input exceeds a configured enumeration or search limit."""

    def __init__(self, what, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: size {size} exceeds limit {limit}")


class DomainError(FpmError):
    """The input is well formed but outside an operation's domain."""


class ConsistencyError(FpmError):
    """Two computed artefacts disagree (wrong radius, corrupted table, ...)."""


class NotStabilized(FpmError):
    """No stabilization radius was found within the search budget."""


class NoInterior(InputError):
    """A window is too small to contain a vertex with a complete ball."""


class TilingError(DomainError):
    """A proposed tiling or tile isomorphism is invalid."""

    def __init__(self, message, tile=None):
        self.tile = tile
        super().__init__(message)


class NotTransitive(DomainError):
    """A tile template has more than one half-edge orbit."""

    def __init__(self, orbits):
        self.orbits = orbits
        super().__init__(f"template is not half-edge transitive; orbits: {orbits}")
