"""Built-in surfaces, mapping classes and embeddings.

Surfaces are stored as JSON-style configs and parsed on demand, so the
same tables feed the library, the command line and scenario files.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from . import dynamics
from . import equator
from . import subsurface
from . import surface_model
from .io_utils import check_mode


def _isolated(name=None, marked=False):
    entry = {'type': surface_model.ISOLATED}
    if name is not None:
        entry['name'] = name
    if marked:
        entry['marked'] = True
    return entry


def _chain(leaves):
    """Nests leaves into a caterpillar tree, first leaf outermost."""
    node = leaves[-1]
    for l in reversed(leaves[:-1]):
        node = [l, node]
    return node


def _punctures(n):
    return _chain([_isolated(marked=True)] +
                  [_isolated() for _ in range(n - 1)])


FINITE_SPECS = {
    'sphere-5': {'genus': 0, 'ends': _punctures(5)},
    'sphere-6': {'genus': 0, 'ends': _punctures(6)},
    'sphere-7': {'genus': 0, 'ends': _punctures(7)},
    'sphere-8': {'genus': 0, 'ends': _punctures(8)},
    'sphere-6-balanced': {'genus': 0, 'ends': [
        [_isolated(marked=True), [_isolated(), _isolated()]],
        [_isolated(), [_isolated(), _isolated()]]]},
    'torus-3': {'genus': 1, 'ends': _punctures(3)},
    'torus-4': {'genus': 1, 'ends': _punctures(4)},
    'torus-5': {'genus': 1, 'ends': _punctures(5)},
    'genus-2-1': {'genus': 2, 'ends': _isolated(marked=True)},
    'genus-2-2': {'genus': 2, 'ends': _punctures(2)},
    'genus-2-3': {'genus': 2, 'ends': _punctures(3)},
    'genus-3-1': {'genus': 3, 'ends': _isolated(marked=True)},
}

CANTOR_LEAF = {'type': surface_model.CANTOR}
GENUS_CANTOR_LEAF = {'type': surface_model.CANTOR,
                     'genus_accumulated': True}

INFINITE_SPECS = {
    # Sphere minus a Cantor set and p.
    'cantor-tree': {'genus': 0,
                    'ends': [_isolated(marked=True), CANTOR_LEAF]},
    # One end accumulated by genus.
    'loch-ness': {'genus': surface_model.INFINITE_GENUS,
                  'ends': [_isolated(marked=True),
                           {'type': surface_model.ISOLATED,
                            'genus_accumulated': True}]},
    # Infinite genus; ends a Cantor set and p; genus accumulates on a
    # sub-Cantor set and on one more end of the Cantor set.
    'cantor-genus-mixed': {'genus': surface_model.INFINITE_GENUS,
                           'ends': [_isolated(marked=True),
                                    [GENUS_CANTOR_LEAF,
                                     [{'type': surface_model.ISOLATED,
                                       'genus_accumulated': True},
                                      CANTOR_LEAF]]]},
}

SURFACES = dict(FINITE_SPECS, **INFINITE_SPECS)

# Expected (genus, punctures) of the finite catalog surfaces.
FINITE_TYPES = {
    'sphere-5': (0, 5),
    'sphere-6': (0, 6),
    'sphere-7': (0, 7),
    'sphere-8': (0, 8),
    'sphere-6-balanced': (0, 6),
    'torus-3': (1, 3),
    'torus-4': (1, 4),
    'torus-5': (1, 5),
    'genus-2-1': (2, 1),
    'genus-2-2': (2, 2),
    'genus-2-3': (2, 3),
    'genus-3-1': (3, 1),
}

# Half-twist words; the last letter acts first.
REPS = {
    'identity': [],
    't1': [1],
    't2': [2],
    't3': [3],
    'rotation': [1, 2, 3],
    # Periodic of order 3: three punctures turn around the fourth.
    'rotation-third': [1, 2, 3, 1],
    'penner': dynamics.chain_penner_letters(5),
    'penner-conjugate': [2] + dynamics.chain_penner_letters(5) + [-2],
    # Curves around punctures 1-3 against 2-4 and 3-4; `p` sits in a
    # bigon of their union.
    'north-south': dynamics.penner_letters([(1, 3)], [(2, 4), (3, 4)]),
    'chain-penner-6': dynamics.chain_penner_letters(6),
    'chain-penner-7': dynamics.chain_penner_letters(7),
}
REP_SURFACE = 'sphere-5'
REP_SURFACES = {
    'chain-penner-6': 'sphere-6',
    'chain-penner-7': 'sphere-7',
}
LOXODROMIC_REPS = ('penner', 'penner-conjugate', 'north-south',
                   'chain-penner-6', 'chain-penner-7')

# Prongs at `p` of the invariant foliations, read off the region of the
# curve system that contains `p`.
PRONGS = {
    'north-south': 1,
    'penner': 2,
    'penner-conjugate': 2,
    'chain-penner-6': 3,
    'chain-penner-7': 4,
}

# Source, target and opened puncture; None opens the puncture carrying
# the handle of a genus one target.
EMBEDDINGS = {
    'sphere-5-in-6': ('sphere-5', 'sphere-6', 4),
    'sphere-5-in-torus-5': ('sphere-5', 'torus-5', None),
}


def surface_names(finite=None):
    if finite is None:
        return sorted(SURFACES)
    return sorted(FINITE_SPECS if finite else INFINITE_SPECS)


def end_spec(name):
    """Parsed `EndSpec` of a catalog surface."""
    check_mode(name, sorted(SURFACES), 'name')
    return surface_model.end_spec_from_config(SURFACES[name])


def atlas(name, depth=surface_model.DEFAULT_DEPTH):
    """Polygon atlas of a catalog surface."""
    return equator.atlas_from_spec(end_spec(name), depth, name=name)


def rep_surface(name):
    """Catalog surface a built-in mapping class lives on."""
    return REP_SURFACES.get(name, REP_SURFACE)


def rep_names(surface=REP_SURFACE):
    return sorted(name for name in REPS if rep_surface(name) == surface)


def sphere_atlas(n, depth=surface_model.DEFAULT_DEPTH):
    """Outline atlas of the `n`-punctured sphere, catalog or not."""
    name = 'sphere-%d' % n
    if name in SURFACES:
        return atlas(name, depth)
    spec = surface_model.end_spec_from_config({'genus': 0,
                                               'ends': _punctures(n)})
    return equator.atlas_from_spec(spec, depth, name=name)


def rep(name, surface=None):
    """Built-in mapping class.

    # Arguments
        name: One of `REPS`.
        surface: Optional `PolygonAtlas` of the rep's sphere, to share
            with other reps.

    # Returns
        A `RewritingRep` with its inverse attached.
    """
    check_mode(name, sorted(REPS), 'name')
    if surface is None:
        surface = atlas(rep_surface(name))
    if not REPS[name]:
        result = dynamics.identity_rep(surface)
    else:
        result = dynamics.word_product(surface, REPS[name])
    result.name = name
    return result


def weight_example(n):
    """Loxodromic rep of weight `n`.

    Weight 1 is the north-south rep on the 5-punctured sphere; larger
    weights come from the Penner chain on the `(n + 3)`-punctured sphere.
    """
    if n < 1:
        raise ValueError('Weights are positive, got %d' % n)
    if n == 1:
        return rep('north-south')
    return dynamics.chain_penner(sphere_atlas(n + 3))


def embedding(name, source=None, target=None):
    check_mode(name, sorted(EMBEDDINGS), 'name')
    source_name, target_name, k = EMBEDDINGS[name]
    source = source if source is not None else atlas(source_name)
    target = target if target is not None else atlas(target_name)
    if k is None:
        return subsurface.handle_embedding(source, target, name=name)
    return subsurface.sphere_embedding(source, target, k, name=name)


def _step(name, op, **args):
    return {'name': name, 'op': op, 'args': args}


SMOKE_SCENARIO = {
    'name': 'smoke',
    'seed': 0,
    'caps': {'vertex_cap': 2000, 'max_iter': 10},
    'steps': [
        _step('classification', 'classify', surfaces=sorted(FINITE_SPECS)),
        _step('sphere-5', 'atlas', surface='sphere-5'),
        _step('confluence', 'confluence', atlas='$sphere-5', length=3),
        _step('loops-2', 'slice', atlas='$sphere-5', kind='loops', bound=2),
        _step('obstruction', 'obstruction', max_weight=3),
    ],
}

ACCEPTANCE_SCENARIO = {
    'name': 'acceptance',
    'seed': 0,
    'caps': {'vertex_cap': 20000, 'max_iter': 10},
    'steps': [
        _step('classification', 'classify'),
        _step('two-disks', 'two_disks', depth=6),
        _step('sphere-5', 'atlas', surface='sphere-5'),
        _step('confluence', 'confluence', atlas='$sphere-5', length=8),
        _step('oracle', 'oracle', atlas='$sphere-5', length=6),
        _step('loops-8', 'slice', atlas='$sphere-5', kind='loops', bound=8),
        _step('unicorn', 'unicorn', slice='$loops-8', max_distance=4),
        _step('delta', 'delta', slice='$loops-8', samples=1000),
        _step('completed-6', 'slice', atlas='$sphere-5', kind='completed',
              bound=6),
        _step('short-6', 'slice', atlas='$sphere-5', kind='rays_and_loops',
              bound=6),
        _step('short-loops', 'short_loops', completed='$completed-6',
              short='$short-6'),
        _step('filling', 'filling', slice='$completed-6'),
        _step('translation-penner', 'translation', rep='penner',
              expect=dynamics.LOXODROMIC_EVIDENCE),
        _step('weight-penner', 'weight', rep='penner'),
        _step('weight-penner-conjugate', 'weight', rep='penner-conjugate'),
        _step('weight-north-south', 'weight', rep='north-south'),
        _step('weight-chain-penner-6', 'weight', rep='chain-penner-6'),
        _step('obstruction', 'obstruction', max_weight=5),
        _step('distinct-weights', 'distinct_weights', rep='north-south',
              against='penner'),
        _step('subsurface', 'verify_qi', embedding='sphere-5-in-6',
              bounds=[6, 8]),
        _step('subsurface-genus-one', 'verify_qi',
              embedding='sphere-5-in-torus-5', bounds=[4, 4]),
        _step('subsurface-corrupted', 'verify_qi',
              embedding='sphere-5-in-6', bounds=[2, 3], corrupt=True),
        _step('transport', 'transport', embedding='sphere-5-in-6',
              rep='penner'),
    ],
}

SCENARIOS = {
    'smoke': SMOKE_SCENARIO,
    'acceptance': ACCEPTANCE_SCENARIO,
}
