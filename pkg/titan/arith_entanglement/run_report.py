import json
import time
import typing
import logging
import contextlib
from titan.arith_entanglement.instance import DerivedStats
from titan.arith_entanglement.entropy import (
    EntropyResult,
    SchmidtSpectrum
)


logger = logging.getLogger(__name__)


class RunReport:

    REPORT_VERSION = 1

    def __init__(self, command: str, label: str, stats: typing.Optional[DerivedStats] = None):
        self._command = command
        self._label = label
        self._stats = stats
        self._entropies = {}
        self._spectrum = None
        self._agreement = {}
        self._fields = {}
        self._timings = {}

    def command(self):
        return self._command

    def label(self):
        return self._label

    def stats(self):
        return self._stats

    def entropies(self) -> typing.Dict[str, EntropyResult]:
        return dict(self._entropies)

    def spectrum(self) -> typing.Optional[SchmidtSpectrum]:
        return self._spectrum

    def agreement(self) -> typing.Dict[str, bool]:
        return dict(self._agreement)

    def fields(self):
        return dict(self._fields)

    def timings(self):
        return dict(self._timings)

    def set_stats(self, stats: DerivedStats):
        self._stats = stats

    def add_entropy(self, result: EntropyResult):
        self._entropies[result.method().value] = result

    def set_spectrum(self, spectrum: SchmidtSpectrum):
        self._spectrum = spectrum

    def add_agreement(self, name: str, agreed: bool):
        self._agreement[name] = bool(agreed)
        if not agreed:
            logger.error(f"Cross-check `{name}` failed for `{self._label}`")

    def add_field(self, name: str, value):
        self._fields[name] = value

    def all_agree(self):
        return all(self._agreement.values())

    @contextlib.contextmanager
    def timed(self, phase: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self._timings[phase] = self._timings.get(phase, 0.0) + time.perf_counter() - start

    def to_dict(self, include_timings: bool = False):
        report = {
            'version': self.REPORT_VERSION,
            'command': self._command,
            'label': self._label,
            'stats': None if self._stats is None else self._stats.to_dict(),
            'entropy': {name: result.to_dict() for name, result in self._entropies.items()},
            'spectrum': None if self._spectrum is None else self._spectrum.summary(),
            'agreement': dict(self._agreement),
            'fields': dict(self._fields),
        }
        if include_timings:
            report['timings'] = {phase: round(seconds, 6) for phase, seconds in self._timings.items()}
        return report

    def to_json(self, include_timings: bool = False):
        return json.dumps(self.to_dict(include_timings), indent=4) + "\n"

    def save(self, path: str):
        with open(path, 'w') as f:
            f.write(self.to_json(include_timings=True))

    def format_text(self):
        text = f"{self._command}: {self._label}\n"
        if self._stats is not None:
            text += ' '.join(f"{name}={value}" for name, value in self._stats.to_dict().items()) + '\n'
        if self._entropies:
            text += 'METHOD'.ljust(12) + 'NATS'.ljust(22) + 'K'.ljust(5) + '\n' + ('-' * 39) + '\n'
            for name, result in self._entropies.items():
                k = '-' if result.exact_k() is None else str(result.exact_k())
                text += f"{name.ljust(12)}{result.nats():<22.15f}{k.ljust(5)}\n"
        if self._spectrum is not None:
            summary = self._spectrum.summary()
            text += f"spectrum: rank={summary['rank']} min={summary['min_nonzero']:.12g} max={summary['max']:.12g}\n"
        for name, value in self._fields.items():
            text += f"{name}: {value}\n"
        for name, agreed in self._agreement.items():
            text += f"{name}: {'ok' if agreed else 'DISAGREE'}\n"
        return text
