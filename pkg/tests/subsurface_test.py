import pytest

from loopforge import catalog
from loopforge import curves
from loopforge import dynamics
from loopforge import equator
from loopforge import graphs
from loopforge import subsurface
from loopforge.io_utils import ParseError


SOURCE = catalog.atlas('sphere-5')
TARGET = catalog.atlas('sphere-6')
TORUS = catalog.atlas('torus-5')
SHORT_LOOPS = ['R0 | w1+ | loop(R1)',
               'R0 | w2+ | loop(R1)',
               'R0 | w3+ | loop(R1)']


def embedding():
    return catalog.embedding('sphere-5-in-6', SOURCE, TARGET)


def source_word(text):
    return curves.parse_word(text, SOURCE)


def target_word(text):
    return curves.parse_word(text, TARGET)


def test_sphere_embedding_tables():
    e = embedding()
    assert e.opened_arcs == set(['w4'])
    assert e.arc_translation['w3'] == (('w3', 1),)
    assert e.arc_translation['w4'] == (('w5', 1),)
    label = SOURCE.corner_vertex(('A', 4))
    assert e.puncture_map[label] is None
    assert e.gamma[label] == (('w3', 1), ('w5', -1))
    assert e.disk_corners[('A', 5)] == ('A', 4)
    with pytest.raises(ValueError):
        subsurface.sphere_embedding(SOURCE, TARGET, 5)
    with pytest.raises(ValueError):
        subsurface.sphere_embedding(SOURCE, SOURCE, 2)


def test_check_embedding():
    e = embedding()
    assert subsurface.check_embedding(e)['passed']
    broken = subsurface.corrupt_gamma(e)
    assert broken.name == 'sphere-5-in-6-corrupted'
    certificate = subsurface.check_embedding(broken)
    assert not certificate['passed']
    assert certificate['witness']['check'] == 'gamma-essential'
    # The original is left alone.
    assert subsurface.check_embedding(e)['passed']


def test_push_forward():
    e = embedding()
    for text in SHORT_LOOPS:
        assert subsurface.push_forward(e, source_word(text)) == \
            target_word(text)
    w = source_word('R0 | w1+ w3- | loop(R0)')
    assert subsurface.push_forward(e, w) == target_word(
        'R0 | w1+ w3- | loop(R0)')


def test_push_forward_of_rays():
    e = embedding()
    assert subsurface.push_forward(e, source_word('R0 | ray(A:2)')) == \
        target_word('R0 | ray(A:2)')
    with pytest.raises(ValueError):
        subsurface.push_forward(e, source_word('R0 | ray(A:4)'))


def test_projection_retracts_pushed_words():
    e = embedding()
    words = [source_word(text) for text in SHORT_LOOPS]
    words.append(source_word('R0 | w1+ w3- | loop(R0)'))
    for w in words:
        assert subsurface.project(e, subsurface.push_forward(e, w)) == w


def test_projection_through_the_disk():
    e = embedding()
    # Surrounds four punctures of the target, cutting the opened disk.
    w = target_word('R0 | w4+ | loop(R1)')
    assert subsurface.project(e, w) == source_word('R0 | w3+ | loop(R1)')
    with pytest.raises(ValueError):
        subsurface.project(e, target_word('R0 | ray(A:1)'))


def test_identity_embedding():
    e = subsurface.identity_embedding(SOURCE)
    assert subsurface.check_embedding(e)['passed']
    assert not e.opened_arcs
    w = source_word('R0 | w1+ w3- | loop(R0)')
    assert subsurface.push_forward(e, w) == w
    assert subsurface.project(e, w) == w


def test_verify_qi():
    e = embedding()
    source_slice = graphs.build_slice(SOURCE, graphs.LOOPS, 1)
    target_slice = graphs.build_slice(TARGET, graphs.LOOPS, 1)
    report = subsurface.verify_qi(e, source_slice, target_slice)
    assert report['passed'], report['counterexamples']
    assert report['pairs'] == 3
    assert report['caveat'] == subsurface.SLICE_CAVEAT


def test_verify_qi_identity_at_bound_two():
    e = subsurface.identity_embedding(SOURCE)
    graph_slice = graphs.build_slice(SOURCE, graphs.LOOPS, 2)
    report = subsurface.verify_qi(e, graph_slice, graph_slice)
    assert report['passed'], report['counterexamples']
    assert report['pairs'] >= 3
    assert report['max_ratio'] == 1.
    assert report['lipschitz_pairs'] == report['pairs']


def test_verify_qi_bound_two_source():
    e = embedding()
    source_slice = graphs.build_slice(SOURCE, graphs.LOOPS, 2)
    target_slice = graphs.build_slice(TARGET, graphs.LOOPS, 1)
    report = subsurface.verify_qi(e, source_slice, target_slice)
    assert report['passed'], report['counterexamples']
    assert report['pairs'] >= 3
    # Longer source loops push outside the bound-1 target slice.
    assert report['skipped'] > 0
    assert report['max_ratio'] == 1.


def test_verify_qi_reports_corrupted_gamma():
    e = subsurface.corrupt_gamma(embedding())
    source_slice = graphs.build_slice(SOURCE, graphs.LOOPS, 1)
    target_slice = graphs.build_slice(TARGET, graphs.LOOPS, 1)
    report = subsurface.verify_qi(e, source_slice, target_slice)
    assert not report['passed']
    checks = [c['check'] for c in report['counterexamples']]
    assert 'gamma-essential' in checks


def test_transport_commutes_with_push_forward():
    e = embedding()
    t1 = dynamics.half_twist(SOURCE, 1)
    extended = subsurface.transport_dynamics(e, t1)
    assert extended.name == 't1@sphere-5-in-6'
    assert extended.inverse is not None
    for text in SHORT_LOOPS:
        w = source_word(text)
        assert dynamics.act(extended, subsurface.push_forward(e, w)) == \
            subsurface.push_forward(e, dynamics.act(t1, w))


def test_transport_of_identity():
    e = embedding()
    extended = subsurface.transport_dynamics(
        e, dynamics.identity_rep(SOURCE))
    w = target_word('R0 | w4+ | loop(R1)')
    assert dynamics.act(extended, w) == w


def test_transport_needs_fixed_boundary():
    e = embedding()
    with pytest.raises(ValueError):
        subsurface.transport_dynamics(e, dynamics.half_twist(SOURCE, 3))
    with pytest.raises(ValueError):
        subsurface.transport_dynamics(e, dynamics.half_twist(TARGET, 1))


def test_transport_penner():
    e = embedding()
    rep = catalog.rep('penner', SOURCE)
    extended = subsurface.transport_dynamics(e, rep)
    certificate = dynamics.validate_rep(
        extended, [target_word(text) for text in SHORT_LOOPS])
    assert certificate['passed'], certificate['witness']


def test_embedding_config():
    e = embedding()
    config = subsurface.embedding_to_config(e)
    rebuilt = subsurface.embedding_from_config(config)
    assert rebuilt.arc_translation == e.arc_translation
    assert rebuilt.corner_translation == e.corner_translation
    assert rebuilt.gamma == e.gamma
    assert rebuilt.disk_corners == e.disk_corners
    assert rebuilt.opened_arcs == e.opened_arcs
    config['arc_translation']['w3'] = 'w9+'
    with pytest.raises(ParseError) as info:
        subsurface.embedding_from_config(config)
    assert info.value.token == 'w9'


def handle_embedding():
    return catalog.embedding('sphere-5-in-torus-5', SOURCE, TORUS)


def test_handle_embedding_tables():
    e = handle_embedding()
    assert e.name == 'sphere-5-in-torus-5'
    assert len(e.opened_arcs) == 2
    for arc_id in e.opened_arcs:
        assert TORUS.arcs[arc_id].kind != equator.SEAM
    assert e.arc_translation == dict(('w%d' % j, (('w%d' % j, 1),))
                                     for j in range(5))
    opened = [label for label, image in e.puncture_map.items()
              if image is None]
    assert len(opened) == 1
    assert len(e.gamma[opened[0]]) == 2
    base = TORUS.arcs[sorted(e.opened_arcs)[0]].tail
    # The puncture carrying the handle keeps three corners in each face.
    assert sorted(e.disk_corners) == sorted(TORUS.corners_at(base))
    assert len(e.disk_corners) == 6
    assert subsurface.check_embedding(e)['passed']
    with pytest.raises(ValueError):
        subsurface.handle_embedding(SOURCE, TARGET)


def test_handle_embedding_push_and_project():
    e = handle_embedding()
    for text in SHORT_LOOPS:
        w = source_word(text)
        image = subsurface.push_forward(e, w)
        assert curves.format_word(image) == text
        assert subsurface.project(e, image) == w


def test_projection_across_the_handle():
    e = handle_embedding()
    tokens = [t for t in TORUS.side_A if t[0] in e.opened_arcs]
    assert len(tokens) == 2
    for token in tokens:
        projected = subsurface.project(e, curves.loop(0, (token,), 1))
        assert projected.end.kind == curves.LOOP
        assert curves.is_simple(SOURCE, projected)
        assert all(t[0] in SOURCE.arcs for t in projected.crossings)


def test_verify_qi_into_genus_one():
    e = handle_embedding()
    source_slice = graphs.build_slice(SOURCE, graphs.LOOPS, 1)
    target_slice = graphs.build_slice(TORUS, graphs.LOOPS, 1)
    report = subsurface.verify_qi(e, source_slice, target_slice)
    assert report['passed'], report['counterexamples']
    assert report['pairs'] == 3
    assert report['lipschitz_pairs'] >= 3


if __name__ == '__main__':
    pytest.main([__file__])
