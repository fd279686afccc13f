class ArithEntanglementException(Exception):
    pass

class DimensionMismatchException(ArithEntanglementException, ValueError):
    pass

class InvalidArgumentException(ArithEntanglementException, ValueError):
    pass

class ResourceCapException(ArithEntanglementException):
    pass

class InstanceValidationException(ArithEntanglementException):
    pass

class InstanceParseException(ArithEntanglementException):

    def __init__(self, message: str, location: str = '$'):
        super().__init__(f"{message} (at {location})")
        self._location = location

    def location(self):
        return self._location

class UnsupportedComputationException(ArithEntanglementException):
    pass

class NumericException(ArithEntanglementException):
    pass

class GenerationException(ArithEntanglementException):
    pass

class InvariantViolationException(ArithEntanglementException):
    pass
