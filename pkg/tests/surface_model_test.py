import warnings

import pytest

from loopforge import catalog
from loopforge import surface_model
from loopforge.io_utils import ParseError


FINITE_NAMES = sorted(catalog.FINITE_SPECS)
INFINITE_NAMES = sorted(catalog.INFINITE_SPECS)

INVALID_SPECS = [
    # Missing genus.
    {'ends': {'type': 'isolated'}},
    # Once and twice punctured spheres.
    {'genus': 0, 'ends': {'type': 'isolated'}},
    {'genus': 0, 'ends': [{'type': 'isolated'}, {'type': 'isolated'}]},
    # Euler characteristic -2.
    {'genus': 0, 'ends': [{'type': 'isolated'},
                          [{'type': 'isolated'},
                           [{'type': 'isolated'}, {'type': 'isolated'}]]]},
    # Closed torus.
    {'genus': 1},
    # Infinite genus without an end accumulated by genus.
    {'genus': 'inf', 'ends': [{'type': 'isolated'}, {'type': 'cantor'}]},
    # Finite genus with an end accumulated by genus.
    {'genus': 2, 'ends': [{'type': 'isolated'},
                          {'type': 'isolated', 'genus_accumulated': True}]},
    # Two marked ends.
    {'genus': 1, 'ends': [{'type': 'isolated', 'marked': True},
                          [{'type': 'isolated', 'marked': True},
                           {'type': 'isolated'}]]},
    # Marked Cantor end.
    {'genus': 0, 'ends': [{'type': 'cantor', 'marked': True},
                          {'type': 'isolated'}]},
    # Branch with three children.
    {'genus': 1, 'ends': [{'type': 'isolated'}, {'type': 'isolated'},
                          {'type': 'isolated'}]},
    {'genus': 1, 'ends': {'type': 'wild'}},
    {'genus': -1, 'ends': {'type': 'isolated'}},
]


@pytest.mark.parametrize('name', FINITE_NAMES)
def test_finite_summary(name):
    genus, punctures = catalog.FINITE_TYPES[name]
    tree = surface_model.build_core_tree(catalog.end_spec(name))
    surface_model.check_core_tree(tree)
    summary = surface_model.surface_summary(tree)
    assert summary['genus'] == genus
    assert summary['punctures'] == punctures
    assert summary['frontier'] == 0
    assert summary['euler_characteristic'] == 2 - 2 * genus - punctures


def test_check_core_tree_rejects_broken_trees():
    tree = surface_model.build_core_tree(catalog.end_spec('sphere-5'))
    root = tree.vertices[tree.root]
    with pytest.raises(ValueError, match='edges'):
        surface_model.check_core_tree(tree._replace(edges=tree.edges[1:]))

    vertices = list(tree.vertices)
    vertices[tree.root] = root._replace(children=())
    with pytest.raises(ValueError, match='not connected'):
        surface_model.check_core_tree(tree._replace(vertices=vertices))

    deep = next(v for v in tree.vertices
                if v.parent not in (None, tree.root))
    vertices = list(tree.vertices)
    vertices[tree.root] = root._replace(children=root.children +
                                        (deep.index,))
    with pytest.raises(ValueError, match='cycle'):
        surface_model.check_core_tree(tree._replace(vertices=vertices))


def test_template_path():
    template = surface_model._Template()
    a, b, c, d = [template.add('branch') for _ in range(4)]
    template.connect(a, b)
    template.connect(b, c)
    template.connect(b, d)
    assert template.path(a, c) == [a, b, c]
    assert template.path(d, d) == [d]
    template.replace_edge(a, b, [template.add('handle')])
    assert template.path(a, d) == [a, 4, b, d]


def test_finite_summary_ignores_depth():
    spec = catalog.end_spec('genus-2-3')
    summaries = surface_model.depth_sensitivity(spec, [1, 3, 6])
    assert summaries[1] == summaries[3] == summaries[6]


@pytest.mark.parametrize('name', INFINITE_NAMES)
def test_infinite_truncation(name):
    tree = surface_model.build_core_tree(catalog.end_spec(name), depth=3)
    surface_model.check_core_tree(tree)
    summary = surface_model.surface_summary(tree)
    assert summary['frontier'] > 0
    with pytest.warns(UserWarning):
        surface_model.euler_characteristic(tree)


def test_infinite_genus_grows_with_depth():
    spec = catalog.end_spec('loch-ness')
    summaries = surface_model.depth_sensitivity(spec, [2, 5])
    assert summaries[5]['genus'] > summaries[2]['genus']


def test_marked_vertices_match_genus():
    tree = surface_model.build_core_tree(catalog.end_spec('genus-3-1'))
    marked = [v for v in tree.vertices if v.marked]
    assert len(marked) == 3
    for v in tree.vertices:
        if not v.marked:
            assert v.valence in (1, 3)


def test_closed_surface():
    spec = surface_model.end_spec_from_config({'genus': 2})
    tree = surface_model.build_core_tree(spec)
    summary = surface_model.surface_summary(tree)
    assert summary['genus'] == 2
    assert summary['punctures'] == 0
    assert summary['euler_characteristic'] == -2


@pytest.mark.parametrize('config', INVALID_SPECS)
def test_invalid_specs(config):
    with pytest.raises(ParseError):
        surface_model.end_spec_from_config(config)


def test_invalid_depth():
    spec = catalog.end_spec('sphere-5')
    with pytest.raises(ValueError):
        surface_model.build_core_tree(spec, depth=0)


def test_leaf_names():
    spec = surface_model.end_spec_from_config(
        {'genus': 0, 'ends': [{'type': 'isolated', 'name': 'x'},
                              [{'type': 'isolated', 'marked': True},
                               [{'type': 'cantor'}, {'type': 'isolated'}]]]})
    assert surface_model.leaf_names(spec) == ['x', 'p', 'c2', 'e3']


def test_unmarked_spec_picks_an_isolated_puncture():
    spec = surface_model.end_spec_from_config(
        {'genus': 0, 'ends': [{'type': 'cantor'}, {'type': 'isolated'}]})
    assert surface_model.leaf_names(spec) == ['c0', 'p']


def test_end_spec_config():
    config = catalog.SURFACES['cantor-genus-mixed']
    spec = surface_model.end_spec_from_config(config)
    dumped = surface_model.end_spec_to_config(spec)
    assert surface_model.end_spec_from_config(dumped) == spec
    assert dumped['genus'] == surface_model.INFINITE_GENUS


def test_tree_config():
    tree = surface_model.build_core_tree(catalog.end_spec('torus-4'))
    config = surface_model.tree_to_config(tree)
    rebuilt = surface_model.tree_from_config(config)
    assert surface_model.tree_to_config(rebuilt) == config
    # Detaching the children of the root disconnects the tree.
    config['vertices'][0]['children'] = []
    with pytest.raises(ParseError):
        surface_model.tree_from_config(config)


def test_pants_gluing_is_an_involution():
    tree = surface_model.build_core_tree(catalog.end_spec('genus-2-2'))
    pc = surface_model.expand_to_pants(tree)
    for p in pc.pants:
        for slot, cuff in enumerate(p.cuffs):
            if cuff.kind == surface_model.GLUED:
                index, other = cuff.partner
                assert pc.pants[index].cuffs[other].partner == (p.index,
                                                                slot)


def test_summary_does_not_warn():
    tree = surface_model.build_core_tree(catalog.end_spec('cantor-tree'), 2)
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        surface_model.surface_summary(tree)


if __name__ == '__main__':
    pytest.main([__file__])
