"""JSON documents for instances, with row-major integer matrices."""
import json
import typing
import logging
import numpy as np
from titan.arith_entanglement.fp_linalg import (
    FpMatrix,
    Subspace,
    ensure_prime
)
from titan.arith_entanglement.symplectic import (
    LocalFactor,
    SymplecticSpace
)
from titan.arith_entanglement.instance import (
    Instance,
    PhaseKind,
    PhaseSpec
)
from titan.arith_entanglement.exceptions import InstanceParseException


logger = logging.getLogger(__name__)


def _require(document: dict, key: str, location: str):
    if not isinstance(document, dict):
        raise InstanceParseException("Expected an object", location)
    if key not in document:
        raise InstanceParseException(f"Missing field `{key}`", location)
    return document[key]


def _integer(value, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceParseException(f"Expected an integer, got `{value!r}`", location)
    return value


def parse_matrix(value, p: int, location: str, cols: typing.Optional[int] = None) -> FpMatrix:
    if not isinstance(value, list) or any(not isinstance(row, list) for row in value):
        raise InstanceParseException("Expected a list of rows", location)
    for i, row in enumerate(value):
        for j, entry in enumerate(row):
            _integer(entry, f"{location}[{i}][{j}]")
    try:
        return FpMatrix(value, p, cols=cols)
    except ValueError as e:
        raise InstanceParseException(str(e), location)


class InstanceFile:

    SCHEMA_VERSION = 1

    @classmethod
    def _factor_document(cls, factor: LocalFactor):
        document = {
            'dim': factor.dim(),
            'gram': factor.space().gram().to_list(),
        }
        if factor.unramified_line() is not None:
            document['unramified_line'] = factor.unramified_line().basis().to_list()
        return document

    @classmethod
    def _phase_document(cls, phase: PhaseSpec):
        document = {'kind': phase.kind().value}
        if phase.kind() == PhaseKind.TABLE:
            document['table'] = [int(v) for v in phase.table()]
        elif phase.kind() == PhaseKind.QUADRATIC:
            document['q_matrix'] = phase.q_matrix().to_list()
            document['linear'] = [int(v) for v in phase.linear()]
        return document

    @classmethod
    def to_document(cls, instance: Instance) -> dict:
        return {
            'version': cls.SCHEMA_VERSION,
            'label': instance.label(),
            'p': instance.p(),
            'd': instance.d(),
            'lagrangian': instance.lagrangian_required(),
            'sides': [
                {'factors': [cls._factor_document(f) for f in instance.side1()]},
                {'factors': [cls._factor_document(f) for f in instance.side2()]},
            ],
            'loc1': instance.loc1().to_list(),
            'loc2': instance.loc2().to_list(),
            'phase': cls._phase_document(instance.phase()),
        }

    @classmethod
    def _parse_factor(cls, document, p: int, location: str) -> LocalFactor:
        dim = _integer(_require(document, 'dim', location), f"{location}.dim")
        gram = parse_matrix(_require(document, 'gram', location), p, f"{location}.gram")
        if gram.shape() != (dim, dim):
            raise InstanceParseException(f"Gram matrix has shape {gram.shape()}, expected ({dim}, {dim})", f"{location}.gram")
        try:
            space = SymplecticSpace(gram)
        except ValueError as e:
            raise InstanceParseException(str(e), f"{location}.gram")
        line = None
        if 'unramified_line' in document:
            basis = parse_matrix(document['unramified_line'], p, f"{location}.unramified_line", cols=dim)
            line = Subspace(basis)
        try:
            return LocalFactor(space, line)
        except ValueError as e:
            raise InstanceParseException(str(e), f"{location}.unramified_line")

    @classmethod
    def _parse_phase(cls, document, p: int, d: int, location: str) -> PhaseSpec:
        raw_kind = _require(document, 'kind', location)
        try:
            kind = PhaseKind(raw_kind)
        except ValueError:
            raise InstanceParseException(f"Unknown phase kind `{raw_kind}`", f"{location}.kind")
        if kind == PhaseKind.ZERO:
            return PhaseSpec.zero()
        if kind == PhaseKind.TABLE:
            table = _require(document, 'table', location)
            if not isinstance(table, list):
                raise InstanceParseException("Expected a list", f"{location}.table")
            return PhaseSpec.from_table([_integer(v, f"{location}.table[{i}]") for i, v in enumerate(table)])
        q_matrix = parse_matrix(_require(document, 'q_matrix', location), p, f"{location}.q_matrix", cols=d)
        linear = _require(document, 'linear', location)
        if not isinstance(linear, list):
            raise InstanceParseException("Expected a list", f"{location}.linear")
        linear = [_integer(v, f"{location}.linear[{i}]") for i, v in enumerate(linear)]
        try:
            return PhaseSpec.quadratic(q_matrix, np.mod(np.asarray(linear, dtype=np.int64), p))
        except ValueError as e:
            raise InstanceParseException(str(e), location)

    @classmethod
    def from_document(cls, document) -> Instance:
        version = _require(document, 'version', '$')
        if version != cls.SCHEMA_VERSION:
            raise InstanceParseException(f"Unsupported schema version `{version}` (expected {cls.SCHEMA_VERSION})", '$.version')
        p = _integer(_require(document, 'p', '$'), '$.p')
        d = _integer(_require(document, 'd', '$'), '$.d')
        label = _require(document, 'label', '$')
        if not isinstance(label, str):
            raise InstanceParseException("Expected a string", '$.label')
        lagrangian = document.get('lagrangian', True)
        if not isinstance(lagrangian, bool):
            raise InstanceParseException("Expected a boolean", '$.lagrangian')
        sides = _require(document, 'sides', '$')
        if not isinstance(sides, list) or len(sides) != 2:
            raise InstanceParseException("Expected exactly two sides", '$.sides')
        try:
            ensure_prime(p)
        except ValueError as e:
            raise InstanceParseException(str(e), '$.p')
        factors = []
        for s, side in enumerate(sides):
            raw = _require(side, 'factors', f"$.sides[{s}]")
            if not isinstance(raw, list):
                raise InstanceParseException("Expected a list", f"$.sides[{s}].factors")
            factors.append([cls._parse_factor(f, p, f"$.sides[{s}].factors[{i}]") for i, f in enumerate(raw)])
        loc1 = parse_matrix(_require(document, 'loc1', '$'), p, '$.loc1', cols=d)
        loc2 = parse_matrix(_require(document, 'loc2', '$'), p, '$.loc2', cols=d)
        phase = cls._parse_phase(document.get('phase', {'kind': 'zero'}), p, d, '$.phase')
        return Instance(p=p,
                        side1=factors[0],
                        side2=factors[1],
                        d=d,
                        loc1=loc1,
                        loc2=loc2,
                        phase=phase,
                        label=label,
                        lagrangian_required=lagrangian)

    @classmethod
    def dumps(cls, instance: Instance) -> str:
        return json.dumps(cls.to_document(instance), indent=4) + "\n"

    @classmethod
    def loads(cls, text: str) -> Instance:
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise InstanceParseException(f"Malformed JSON: {e.msg}", f"line {e.lineno} column {e.colno}")
        return cls.from_document(document)

    @classmethod
    def save(cls, instance: Instance, path: str):
        with open(path, 'w') as f:
            f.write(cls.dumps(instance))
        logger.info(f"Saved instance `{instance.label()}` to {path}")

    @classmethod
    def load(cls, path: str) -> Instance:
        try:
            with open(path) as f:
                text = f.read()
        except OSError as e:
            raise InstanceParseException(f"Failed to read {path}: {e.strerror}")
        return cls.loads(text)
