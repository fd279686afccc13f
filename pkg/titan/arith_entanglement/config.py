import os
import logging
from titan.arith_entanglement.exceptions import InvalidArgumentException


logger = logging.getLogger(__name__)


class ComputationSettings:
    """
    Caps and tolerances shared by every computation route.

    Resolution order is CLI flag > environment (`ARITH_ENTANGLEMENT_<NAME>`) > default.
    """

    ENV_PREFIX = 'ARITH_ENTANGLEMENT_'

    DEFAULTS = {
        'enumeration_digits': 20,
        'max_global_vectors': 3 ** 10,
        'max_dense_dim': 2 ** 14,
        'eigen_threshold': 1e-12,
        'agreement_tol': 1e-8,
        'spectrum_tol': 1e-9,
        'workers': 1,
    }

    def __init__(self,
                 enumeration_digits: int = DEFAULTS['enumeration_digits'],
                 max_global_vectors: int = DEFAULTS['max_global_vectors'],
                 max_dense_dim: int = DEFAULTS['max_dense_dim'],
                 eigen_threshold: float = DEFAULTS['eigen_threshold'],
                 agreement_tol: float = DEFAULTS['agreement_tol'],
                 spectrum_tol: float = DEFAULTS['spectrum_tol'],
                 workers: int = DEFAULTS['workers']):
        if enumeration_digits < 0 or max_global_vectors < 1 or max_dense_dim < 1:
            raise InvalidArgumentException("Caps must be positive")
        if min(eigen_threshold, agreement_tol, spectrum_tol) <= 0:
            raise InvalidArgumentException("Tolerances must be positive")
        if workers < 1:
            raise InvalidArgumentException(f"Invalid worker count `{workers}`")
        self._enumeration_digits = int(enumeration_digits)
        self._max_global_vectors = int(max_global_vectors)
        self._max_dense_dim = int(max_dense_dim)
        self._eigen_threshold = float(eigen_threshold)
        self._agreement_tol = float(agreement_tol)
        self._spectrum_tol = float(spectrum_tol)
        self._workers = int(workers)

    def enumeration_digits(self):
        return self._enumeration_digits

    def max_global_vectors(self):
        return self._max_global_vectors

    def max_dense_dim(self):
        return self._max_dense_dim

    def eigen_threshold(self):
        return self._eigen_threshold

    def agreement_tol(self):
        return self._agreement_tol

    def spectrum_tol(self):
        return self._spectrum_tol

    def workers(self):
        return self._workers

    def to_dict(self):
        return {name: getattr(self, name)() for name in self.DEFAULTS}

    def with_overrides(self, **overrides):
        values = self.to_dict()
        for name, value in overrides.items():
            if name not in values:
                raise InvalidArgumentException(f"Unknown setting `{name}`")
            if value is not None:
                values[name] = value
        return self.__class__(**values)

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        values = {}
        for name, default in cls.DEFAULTS.items():
            raw = environ.get(f"{cls.ENV_PREFIX}{name.upper()}")
            if raw is None:
                continue
            try:
                values[name] = type(default)(raw)
            except ValueError:
                raise InvalidArgumentException(f"Invalid value `{raw}` for {cls.ENV_PREFIX}{name.upper()}")
            logger.debug(f"Setting `{name}` taken from environment: {values[name]}")
        return cls(**values)

    def __repr__(self):
        return f"ComputationSettings({self.to_dict()})"


DEFAULT_SETTINGS = ComputationSettings()
