# Base exception shared by every magdiv subsystem


def _restore(cls: type, state: dict) -> Exception:
    error = cls.__new__(cls)
    Exception.__init__(error, state["message"])
    error.__dict__.update(state)
    return error


class MagDivException(Exception):
    """Base class for errors raised while reading inputs or computing results."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

    def __reduce__(self):
        # Subclasses take their own constructor arguments; rebuild from attributes when crossing process boundaries.
        return _restore, (self.__class__, dict(self.__dict__))
