"""Exception types raised across the climatlas package.

Every error carries enough context (file name, line number, station id) to
point a user at the offending input.
"""


class ClimatlasError(Exception):
    """Base class for all climatlas domain errors."""


class MalformedRowError(ClimatlasError):
    """A CSV row that cannot be parsed into the documented schema."""

    def __init__(self, source: str, line_no: int, column: str, message: str):
        self.source = source
        self.line_no = line_no
        self.column = column
        super().__init__(f"{source}:{line_no}: column '{column}': {message}")


class DuplicateStationIdError(ClimatlasError):
    def __init__(self, station_id: str, source: str = "", line_no: int = 0):
        self.station_id = station_id
        where = f" ({source}:{line_no})" if source else ""
        super().__init__(f"duplicate station_id '{station_id}'{where}")


class CoordinateBoundsError(ClimatlasError):
    """Latitude outside [-90, 90] or longitude outside [-180, 180]."""

    def __init__(self, station_id: str, message: str):
        self.station_id = station_id
        super().__init__(f"station '{station_id}': {message}")


class UnknownMonthDayError(ClimatlasError):
    """A (month, day) pair that does not exist in the 365-day calendar."""

    def __init__(self, source: str, line_no: int, month: int, day: int):
        self.month = month
        self.day = day
        super().__init__(f"{source}:{line_no}: no such calendar day {month}-{day}")


class EmptySamplesError(ClimatlasError):
    pass


class EmptyStationListError(ClimatlasError):
    pass


class GridTooSmallError(ClimatlasError):
    pass


class NonMonotoneLevelsError(ClimatlasError):
    pass


class NonContiguousStateError(ClimatlasError):
    def __init__(self, state: str):
        self.state = state
        super().__init__(f"'{state}' is not one of the 48 contiguous states")


class UnjoinableStationError(ClimatlasError):
    def __init__(self, station_id: str):
        self.station_id = station_id
        super().__init__(f"attribute row for station '{station_id}' has no station record")


class DegenerateGroupError(ClimatlasError):
    pass


class ZeroWithinVarianceError(ClimatlasError):
    pass


class EmptyValuesError(ClimatlasError):
    pass


class RasterFormatError(ClimatlasError):
    pass


class MaskFormatError(ClimatlasError):
    pass


class ConfigError(ClimatlasError):
    pass
