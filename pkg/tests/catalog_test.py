import pytest

from loopforge import catalog
from loopforge import cli
from loopforge import dynamics
from loopforge import subsurface


def test_surface_names():
    names = catalog.surface_names()
    assert 'sphere-5' in names
    assert 'loch-ness' in names
    assert catalog.surface_names(finite=True) == sorted(catalog.FINITE_TYPES)
    assert catalog.surface_names(finite=False) == ['cantor-genus-mixed',
                                                   'cantor-tree',
                                                   'loch-ness']
    with pytest.raises(ValueError):
        catalog.end_spec('sphere-4')


def test_reps_share_an_atlas():
    atlas = catalog.atlas(catalog.REP_SURFACE)
    for name in catalog.rep_names():
        rep = catalog.rep(name, atlas)
        assert rep.name == name
        assert rep.atlas is atlas
        assert rep.inverse is not None
    assert catalog.rep('identity').arc_images == {}
    with pytest.raises(ValueError):
        catalog.rep('anosov')


def test_reps_on_larger_spheres():
    assert catalog.rep_names('sphere-6') == ['chain-penner-6']
    rep = catalog.rep('chain-penner-7')
    assert rep.atlas.name == 'sphere-7'
    assert len(rep.atlas.vertex_labels) == 7
    names = set(catalog.rep_names())
    for surface in set(catalog.REP_SURFACES.values()):
        names.update(catalog.rep_names(surface))
    assert names == set(catalog.REPS)


def test_sphere_atlas_outside_the_catalog():
    atlas = catalog.sphere_atlas(9)
    assert atlas.name == 'sphere-9'
    assert len(atlas.vertex_labels) == 9
    assert catalog.sphere_atlas(5).name == 'sphere-5'


def test_weight_example():
    assert catalog.weight_example(1).name == 'north-south'
    rep = catalog.weight_example(3)
    assert rep.name == 'chain-penner-6'
    assert rep.arc_images == catalog.rep('chain-penner-6').arc_images
    with pytest.raises(ValueError):
        catalog.weight_example(0)


def test_loxodromic_reps_are_listed():
    for name in catalog.LOXODROMIC_REPS:
        assert name in catalog.REPS
    for name in catalog.PRONGS:
        assert name in catalog.LOXODROMIC_REPS


def test_catalog_embedding():
    e = catalog.embedding('sphere-5-in-6')
    assert e.name == 'sphere-5-in-6'
    assert dynamics.outline_size(e.source) == 5
    assert dynamics.outline_size(e.target) == 6
    assert subsurface.check_embedding(e)['passed']


@pytest.mark.parametrize('name', sorted(catalog.SCENARIOS))
def test_catalog_scenarios_parse(name):
    scenario = cli.load_scenario(catalog.SCENARIOS[name], name)
    assert scenario.name == name
    assert scenario.seed == 0
    assert len(scenario.steps) == len(catalog.SCENARIOS[name]['steps'])


if __name__ == '__main__':
    pytest.main([__file__])
