import json
import os

import pytest

from loopforge import io_utils
from loopforge.io_utils import ParseError


def test_parse_error_message():
    e = ParseError('Unknown arc id', location='atlas.side_A[3]', token='w9')
    assert isinstance(e, ValueError)
    assert e.location == 'atlas.side_A[3]'
    assert e.token == 'w9'
    assert '`w9`' in str(e)
    assert 'atlas.side_A[3]' in str(e)


def test_check_mode():
    assert io_utils.check_mode('a', ('a', 'b')) == 'a'
    with pytest.raises(ValueError) as info:
        io_utils.check_mode('c', ('a', 'b'), 'kind')
    assert '`kind`' in str(info.value)


def test_check_kwargs():
    io_utils.check_kwargs({'bound': 2}, ['bound', 'kind'])
    with pytest.raises(TypeError):
        io_utils.check_kwargs({'bonud': 2}, ['bound', 'kind'])


def test_require():
    assert io_utils.require({'steps': []}, 'steps', 'scenario') == []
    with pytest.raises(ParseError) as info:
        io_utils.require({}, 'steps', 'scenario')
    assert info.value.location == 'scenario'
    with pytest.raises(ParseError):
        io_utils.require([], 'steps', 'scenario')


def test_cache_dir_from_environment(tmpdir, monkeypatch):
    target = os.path.join(str(tmpdir), 'cache')
    monkeypatch.setenv(io_utils.CACHE_DIR_ENV, target)
    assert io_utils.get_cache_dir() == target
    assert os.path.isdir(target)


def test_dumps_is_deterministic():
    a = io_utils.dumps({'b': 1, 'a': [1, 2]})
    b = io_utils.dumps(dict([('a', [1, 2]), ('b', 1)]))
    assert a == b
    assert a.index('"a"') < a.index('"b"')


def test_load_json_errors(tmpdir):
    path = str(tmpdir.join('bad.json'))
    with open(path, 'w') as f:
        f.write('{"genus": ')
    with pytest.raises(ParseError) as info:
        io_utils.load_json(path)
    assert info.value.location == path
    with pytest.raises(ParseError):
        io_utils.load_json(str(tmpdir.join('missing.json')))


def test_dump_and_load(tmpdir):
    path = str(tmpdir.join('report.json'))
    io_utils.dump_json({'status': 'pass'}, path)
    assert io_utils.load_json(path) == {'status': 'pass'}
    with open(path) as f:
        assert json.load(f)['status'] == 'pass'


def test_provenance():
    entry = io_utils.provenance(3, io_utils.GOLDEN, matches=True)
    assert entry == {'value': 3, 'provenance': 'golden', 'matches': True}
    assert io_utils.provenance(1.5)['provenance'] == io_utils.COMPUTED


if __name__ == '__main__':
    pytest.main([__file__])
