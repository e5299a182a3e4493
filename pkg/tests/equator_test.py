import copy

import pytest

from loopforge import catalog
from loopforge import equator
from loopforge import surface_model
from loopforge.io_utils import ParseError


def sphere_atlas():
    return catalog.atlas('sphere-5')


def test_sphere_outline():
    atlas = sphere_atlas()
    assert atlas.side_A == tuple(('w%d' % k, 1) for k in range(5))
    assert atlas.side_B == (('w0', -1), ('w4', -1), ('w3', -1),
                            ('w2', -1), ('w1', -1))
    assert [r.corner for r in atlas.corner_fan] == [('A', 0), ('B', 1)]
    assert atlas.corner_fan[0].incoming == ('w4', 1)
    assert atlas.corner_fan[0].outgoing == ('w0', 1)
    assert atlas.corner_fan[1].incoming == ('w0', -1)
    assert atlas.corner_fan[1].outgoing == ('w4', -1)


def test_corner_rotation():
    atlas = sphere_atlas()
    assert atlas.next_ccw(('A', 0)) == ('B', 1)
    assert atlas.next_ccw(('B', 1)) == ('A', 0)
    assert atlas.prev_ccw(('A', 0)) == ('B', 1)
    # Both corners at the second puncture.
    label = atlas.corner_vertex(('A', 2))
    assert atlas.corner_vertex(('B', 4)) == label
    assert sorted(atlas.corners_at(label)) == [('A', 2), ('B', 4)]


@pytest.mark.parametrize('name', sorted(catalog.FINITE_SPECS))
def test_finite_two_disks(name):
    genus, punctures = catalog.FINITE_TYPES[name]
    certificate = equator.verify_two_disks(catalog.atlas(name))
    assert certificate['passed'], certificate['witness']
    assert len(certificate['faces']) == 2
    assert len(certificate['vertices']) == punctures
    assert certificate['euler_characteristic'] == 2 - 2 * genus


@pytest.mark.parametrize('name', sorted(catalog.INFINITE_SPECS))
def test_infinite_two_disks(name):
    certificate = equator.verify_two_disks(catalog.atlas(name, depth=3))
    assert certificate['passed'], certificate['witness']


def test_handles_add_arcs():
    atlas = catalog.atlas('genus-2-1')
    kinds = [a.kind for a in atlas.arcs.values()]
    assert kinds.count(equator.ALPHA2) == 2
    assert kinds.count(equator.ALPHA3) == 2
    assert atlas.genus == 2


def test_closed_surface_has_no_equator():
    from loopforge import surface_model
    spec = surface_model.end_spec_from_config({'genus': 2})
    with pytest.raises(ValueError):
        equator.atlas_from_spec(spec)


def test_atlas_config():
    atlas = catalog.atlas('torus-3')
    config = equator.atlas_to_config(atlas)
    assert equator.atlas_from_config(config) == atlas


def test_atlas_config_unknown_arc():
    config = equator.atlas_to_config(sphere_atlas())
    config['side_A'][2] = 'w9+'
    with pytest.raises(ParseError) as info:
        equator.atlas_from_config(config)
    assert info.value.token == 'w9'
    assert info.value.location == 'atlas.side_A[2]'


def test_atlas_config_not_two_disks():
    config = copy.deepcopy(equator.atlas_to_config(sphere_atlas()))
    # Swapping two sides of `A` breaks boundary continuity.
    config['side_A'][1], config['side_A'][2] = \
        config['side_A'][2], config['side_A'][1]
    with pytest.raises(ParseError):
        equator.atlas_from_config(config)


def test_verify_detects_missing_pair():
    atlas = sphere_atlas()
    broken = equator.PolygonAtlas(
        atlas.arcs.values(), atlas.side_A, atlas.side_B[:-1],
        atlas.vertex_labels)
    certificate = equator.verify_two_disks(broken)
    assert not certificate['passed']
    assert certificate['witness']['check'] == 'arc-pairing'
    assert certificate['witness']['arc'] == 'w1'


def test_tokens():
    assert equator.parse_token("a2.3+") == ('a2.3', 1)
    assert equator.format_token(('w4', -1)) == 'w4-'
    assert equator.inv(('w4', -1)) == ('w4', 1)
    with pytest.raises(ParseError):
        equator.parse_token('w4')


def test_build_equator_from_pants():
    tree = surface_model.build_core_tree(catalog.end_spec('torus-3'),
                                         surface_model.DEFAULT_DEPTH)
    atlas = equator.build_equator(surface_model.expand_to_pants(tree),
                                  name='torus-3')
    assert atlas == catalog.atlas('torus-3')
    assert atlas.genus == 1
    assert equator.verify_two_disks(atlas)['passed']


if __name__ == '__main__':
    pytest.main([__file__])
