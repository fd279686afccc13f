import json
import logging
from titan.arith_entanglement import (
    EntropyMethod,
    EntropyResult,
    InstanceFactory,
    InstanceValidator,
    RunReport,
    SchmidtSpectrum
)


def make_report():
    instance = InstanceFactory.canonical_case(1, 2)
    report = RunReport('entropy', instance.label(), InstanceValidator.validate(instance))
    report.add_entropy(EntropyResult.exact(2, 2, EntropyMethod.FORMULA))
    report.set_spectrum(SchmidtSpectrum([0.25] * 4))
    report.add_field('enlarged_d', 4)
    return report


def test_agreement_and_logging(caplog):
    report = make_report()
    report.add_agreement('formula_vs_rank', True)
    assert report.all_agree()
    with caplog.at_level(logging.ERROR):
        report.add_agreement('spectral_vs_exact', False)
    assert not report.all_agree()
    assert "spectral_vs_exact" in caplog.text
    assert 'spectral_vs_exact: DISAGREE' in report.format_text()


def test_json_layout(tmp_path):
    report = make_report()
    with report.timed('formula'):
        pass
    document = json.loads(report.to_json())
    assert document['version'] == RunReport.REPORT_VERSION
    assert document['entropy']['formula']['exact_k'] == 2
    assert document['spectrum']['rank'] == 4
    assert document['fields'] == {'enlarged_d': 4}
    assert 'timings' not in document
    path = tmp_path / 'report.json'
    report.save(str(path))
    assert 'formula' in json.loads(path.read_text())['timings']


def test_text_table():
    lines = make_report().format_text().splitlines()
    assert lines[0].startswith('entropy: canonical-1')
    assert lines[2].startswith('METHOD')
    assert lines[4].startswith('formula')
    assert lines[-1] == 'enlarged_d: 4'
