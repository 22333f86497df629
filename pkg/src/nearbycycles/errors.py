"""Exception types shared across the package."""


class NearbyCyclesError(Exception):
    """Base class for library errors."""


class NonCommuting(NearbyCyclesError):
    def __init__(self, i: int, j: int):
        super().__init__(f"residues {i} and {j} do not commute")
        self.pair = (i, j)


class IrrationalSpectrum(NearbyCyclesError):
    pass


class NotNilpotent(NearbyCyclesError):
    pass


class WindowTooSmall(NearbyCyclesError):
    def __init__(self, message: str, window: int | None = None):
        super().__init__(message)
        self.window = window


class IncompatibleFiltrations(NearbyCyclesError):
    pass


class InvalidHypercomplex(NearbyCyclesError):
    pass


class NotAChainMap(NearbyCyclesError):
    pass


class DirectionOutOfRange(NearbyCyclesError):
    pass


class NonCommutingSquare(NearbyCyclesError):
    pass
