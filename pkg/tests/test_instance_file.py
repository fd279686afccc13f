import json
import pytest
from titan.arith_entanglement import (
    InstanceFactory,
    InstanceFile,
    InstanceValidator,
    LocalFactor,
    PhaseKind
)
from titan.arith_entanglement.exceptions import (
    InstanceParseException,
    InstanceValidationException
)


MINIMAL_INSTANCE = """
{
    "version": 1,
    "label": "minimal",
    "p": 2,
    "d": 2,
    "lagrangian": true,
    "sides": [
        {"factors": [{"dim": 2, "gram": [[0, 1], [1, 0]]}]},
        {"factors": [{"dim": 2, "gram": [[0, 1], [1, 0]]}]}
    ],
    "loc1": [[1, 0], [0, 0]],
    "loc2": [[0, 1], [0, 0]],
    "phase": {"kind": "zero"}
}
"""


@pytest.mark.parametrize("case_id", [1, 2, 3, 4, 5])
def test_canonical_round_trip_is_byte_identical(case_id):
    instance = InstanceFactory.canonical_case(case_id, 3)
    text = InstanceFile.dumps(instance)
    loaded = InstanceFile.loads(text)
    assert loaded == instance
    assert InstanceFile.dumps(loaded) == text


def test_phase_and_flag_survive_round_trip():
    base = InstanceFactory.generate_random(3, [1], [1, 1], nu=1, seed=9)
    for kind in (PhaseKind.QUADRATIC, PhaseKind.TABLE):
        instance = InstanceFactory.with_random_phase(base, kind, seed=2)
        assert InstanceFile.loads(InstanceFile.dumps(instance)) == instance
    waived = InstanceFactory.canonical_case(4, 2)
    assert json.loads(InstanceFile.dumps(waived))['lagrangian'] is False
    assert InstanceFile.loads(InstanceFile.dumps(waived)).lagrangian_required() is False


def test_auxiliary_factor_keeps_unramified_line():
    document = json.loads(InstanceFile.dumps(InstanceFactory.canonical_case(1, 3)))
    document['sides'][1]['factors'][0]['unramified_line'] = [[1, 0]]
    instance = InstanceFile.from_document(document)
    assert instance.side2()[0] == LocalFactor.auxiliary(3)


def test_minimal_document_loads_and_validates():
    instance = InstanceFile.loads(MINIMAL_INSTANCE)
    stats = InstanceValidator.validate(instance)
    assert stats.entropy_exponent() == 0
    assert instance.label() == 'minimal'


def test_save_and_load(tmp_path):
    instance = InstanceFactory.canonical_case(1, 2)
    path = tmp_path / 'case1.json'
    InstanceFile.save(instance, str(path))
    assert InstanceFile.load(str(path)) == instance
    with pytest.raises(InstanceParseException):
        InstanceFile.load(str(tmp_path / 'missing.json'))


def test_truncated_document():
    text = InstanceFile.dumps(InstanceFactory.canonical_case(1, 2))
    with pytest.raises(InstanceParseException) as info:
        InstanceFile.loads(text[:len(text) // 2])
    assert info.value.location().startswith('line ')


@pytest.mark.parametrize("mutate,location", [
    (lambda doc: doc.update(version=2), '$.version'),
    (lambda doc: doc.pop('loc1'), '$'),
    (lambda doc: doc.update(p=4), '$.p'),
    (lambda doc: doc.update(p='3'), '$.p'),
    (lambda doc: doc['sides'].pop(), '$.sides'),
    (lambda doc: doc['sides'][0]['factors'][0].update(gram=[[0, 1], [1, 0], [0, 0]]), '$.sides[0].factors[0].gram'),
    (lambda doc: doc['loc2'][0].__setitem__(0, 'x'), '$.loc2[0][0]'),
    (lambda doc: doc.update(phase={'kind': 'cubic'}), '$.phase.kind'),
    (lambda doc: doc.update(lagrangian='yes'), '$.lagrangian'),
])
def test_malformed_documents_report_location(mutate, location):
    document = json.loads(InstanceFile.dumps(InstanceFactory.canonical_case(1, 3)))
    mutate(document)
    with pytest.raises(InstanceParseException) as info:
        InstanceFile.from_document(document)
    assert info.value.location() == location


def test_inconsistent_shapes_fail_validation():
    document = json.loads(InstanceFile.dumps(InstanceFactory.canonical_case(1, 3)))
    document['loc2'].append([0, 0, 0])
    with pytest.raises(InstanceValidationException):
        InstanceFile.from_document(document)
