import json

import pytest

from report_generator import ReportGenerator


@pytest.fixture
def generator(tmp_path):
    return ReportGenerator(str(tmp_path / 'reports'))


@pytest.fixture
def reports(generator):
    failure = {'input': {'i': 2}, 'expected': 3, 'got': 4}
    return [generator.emit_report('slopes', {'n': 2}, 12, [failure], seed=7, elapsed_ms=5),
            generator.emit_report('index', {'n': 2}, 3, seed=7, elapsed_ms=2)]


def test_report_schema(generator):
    report = generator.emit_report('orbits', {'p': 3}, 18, seed=1)
    assert set(report) == {'suite', 'params', 'checked', 'failures', 'seed', 'elapsed_ms'}
    assert report['failures'] == []
    assert ReportGenerator.passed(report)


def test_aggregate(generator, reports):
    total = generator.aggregate(reports, seed=7)
    assert total['suite'] == 'all'
    assert total['checked'] == 15
    assert [r['suite'] for r in total['suites']] == ['index', 'slopes']
    assert total['failures'] == [{'input': {'i': 2}, 'expected': 3, 'got': 4, 'suite': 'slopes'}]
    assert total['elapsed_ms'] == 7
    assert not ReportGenerator.passed(total)


def test_json_is_deterministic(generator, reports):
    text = ReportGenerator.to_json(generator.aggregate(reports, seed=7))
    assert text == ReportGenerator.to_json(generator.aggregate(list(reversed(reports)), seed=7))
    assert json.loads(text)['checked'] == 15


def test_summary_frame(generator, reports):
    frame = generator.summary_frame(generator.aggregate(reports))
    assert list(frame.columns) == ['suite', 'checked', 'failures', 'passed', 'elapsed_ms']
    assert frame['failures'].tolist() == [0, 1]
    assert frame['passed'].tolist() == [True, False]


@pytest.mark.parametrize('format_type, suffix', [('json', '.json'), ('csv', '.csv'), ('html', '.html')])
def test_save_report(generator, reports, format_type, suffix):
    path = generator.save_report(generator.aggregate(reports, seed=7), format_type)
    assert path.endswith(suffix)
    with open(path, encoding='utf-8') as f:
        content = f.read()
    assert 'slopes' in content


def test_unknown_format(generator, reports):
    with pytest.raises(ValueError):
        generator.save_report(reports[0], 'pdf')
