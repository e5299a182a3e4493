"""Command line interface and scenario runner.

```
loopforge surface build --spec sphere-5 --out tree.json
loopforge equator build --tree tree.json --out atlas.json --check
loopforge curve normalize 'R0 | w1+ w1- | loop(R0)' --atlas sphere-5
loopforge graph build --atlas atlas.json --bound 3 --format dot
loopforge graph distance 'R0 | w1+ | loop(R1)' 'R0 | w3+ | loop(R1)'
loopforge dyn weight penner
loopforge dyn obstruct north-south --against penner
loopforge sub verify-qi sphere-5-in-6 --bounds 2 3
loopforge run acceptance --update-goldens
```

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 input error.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import argparse
import collections
import fractions
import json
import logging
import os
import sys
import time

from . import __version__
from . import catalog
from . import curves
from . import dynamics
from . import equator
from . import graphs
from . import subsurface
from . import surface_model
from .io_utils import COMPUTED
from .io_utils import GOLDEN
from .io_utils import PUBLISHED_CONSTANT
from .io_utils import ParseError
from .io_utils import check_kwargs
from .io_utils import check_mode
from .io_utils import dump_json
from .io_utils import dumps
from .io_utils import get_cache_dir
from .io_utils import load_json
from .io_utils import provenance
from .io_utils import require

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = dynamics.INCONCLUSIVE
EXIT_CODES = {PASS: EXIT_PASS, FAIL: EXIT_FAIL,
              INCONCLUSIVE: EXIT_INCONCLUSIVE}

FORMATS = ('json', 'dot', 'text')
DEFAULT_CAPS = {'vertex_cap': graphs.DEFAULT_VERTEX_CAP,
                'max_iter': dynamics.DEFAULT_MAX_ITER,
                'wall_clock': None}
MAX_LISTED_FAILURES = 10

Scenario = collections.namedtuple('Scenario',
                                  ['name', 'seed', 'caps', 'steps'])
Step = collections.namedtuple('Step', ['name', 'op', 'args'])


def _worst(statuses):
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def _tag(value):
    """Wraps every number of a result with a computed provenance tag."""
    if isinstance(value, dict):
        if 'provenance' in value and 'value' in value:
            return value
        return dict((k, _tag(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_tag(v) for v in value]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, float)):
        return provenance(value, COMPUTED)
    return value


# Inputs


def load_atlas(value, depth=surface_model.DEFAULT_DEPTH):
    """Atlas from a catalog name, a JSON file or an inline config.

    A config with `side_A` is an atlas dump; one with `genus` is a
    surface description.
    """
    if isinstance(value, equator.PolygonAtlas):
        return value
    if not isinstance(value, dict):
        if value in catalog.SURFACES:
            return catalog.atlas(value, depth)
        if not os.path.exists(str(value)):
            raise ParseError('Unknown surface; expected a catalog name or '
                             'a JSON file', location='surface', token=value)
        value = load_json(value)
    if 'side_A' in value:
        return equator.atlas_from_config(value)
    spec = surface_model.end_spec_from_config(value)
    return equator.atlas_from_spec(spec, depth)


def load_rep(value, atlas=None):
    if isinstance(value, dynamics.RewritingRep):
        return value
    if not isinstance(value, dict):
        if value in catalog.REPS:
            if atlas is None:
                return catalog.rep(value)
            return catalog.rep(value, atlas)
        if not os.path.exists(str(value)):
            raise ParseError('Unknown mapping class', location='rep',
                             token=value)
        value = load_json(value)
    if atlas is None:
        atlas = load_atlas(value.get('atlas', catalog.REP_SURFACE))
    return dynamics.rep_from_config(value, atlas)


def load_embedding(value):
    if isinstance(value, subsurface.EssentialEmbedding):
        return value
    if not isinstance(value, dict):
        if value in catalog.EMBEDDINGS:
            return catalog.embedding(value)
        if not os.path.exists(str(value)):
            raise ParseError('Unknown embedding', location='embedding',
                             token=value)
        value = load_json(value)
    return subsurface.embedding_from_config(value)


def _word(atlas, text):
    return curves.normalize(atlas, curves.parse_word(text, atlas))


def load_scenario(config, name=None):
    """Parses a scenario `{seed, caps, steps: [{name, op, args}]}`.

    Arguments of a step refer to earlier steps as `'$name'`.

    # Raises
        ParseError: on unknown operations or arguments, duplicate names
            and references to steps that do not come earlier.
    """
    if not isinstance(config, dict):
        config = load_json(config)
    caps = dict(DEFAULT_CAPS)
    for key, value in config.get('caps', {}).items():
        if key not in DEFAULT_CAPS:
            raise ParseError('Unknown cap', location='caps', token=key)
        caps[key] = value
    steps = []
    names = set()
    for i, entry in enumerate(require(config, 'steps', 'scenario')):
        location = 'steps[%d]' % i
        step_name = require(entry, 'name', location)
        op = require(entry, 'op', location)
        if op not in OPERATIONS:
            raise ParseError('Unknown operation', location=location + '.op',
                             token=op)
        if step_name in names:
            raise ParseError('Duplicate step name',
                             location=location + '.name', token=step_name)
        args = entry.get('args', {})
        try:
            check_kwargs(args, OP_ARGUMENTS[op])
        except TypeError as e:
            raise ParseError(str(e), location=location + '.args')
        for key, value in args.items():
            for ref in _references(value):
                if ref not in names:
                    raise ParseError(
                        'Reference to a step that does not come earlier',
                        location='%s.args.%s' % (location, key),
                        token='$' + ref)
        names.add(step_name)
        steps.append(Step(step_name, op, args))
    return Scenario(config.get('name', name or 'scenario'),
                    config.get('seed', 0), caps, tuple(steps))


def _references(value):
    if isinstance(value, str) and value.startswith('$'):
        return [value[1:]]
    if isinstance(value, list):
        return [r for v in value for r in _references(v)]
    return []


def _resolve(value, artifacts):
    if isinstance(value, str) and value.startswith('$'):
        return artifacts[value[1:]]
    if isinstance(value, list):
        return [_resolve(v, artifacts) for v in value]
    return value


# Scenario operations. Each returns `(artifact, result, status, goldens)`.


def _op_atlas(args, context):
    atlas = load_atlas(args['surface'],
                       args.get('depth', surface_model.DEFAULT_DEPTH))
    result = {'arcs': len(atlas.arcs), 'fan_regions': len(atlas.corner_fan),
              'genus': atlas.genus, 'punctures': len(atlas.vertex_labels)}
    return atlas, result, PASS, {}


def _op_classify(args, context):
    names = args.get('surfaces') or catalog.surface_names()
    depth = args.get('depth', surface_model.DEFAULT_DEPTH)
    result, statuses = {}, []
    for name in names:
        tree = surface_model.build_core_tree(catalog.end_spec(name), depth)
        summary = surface_model.surface_summary(tree)
        entry = dict(summary)
        if name in catalog.FINITE_TYPES:
            genus, punctures = catalog.FINITE_TYPES[name]
            chi = 2 - 2 * genus - punctures
            entry['expected'] = {'genus': genus, 'punctures': punctures,
                                 'euler_characteristic': chi}
            ok = (summary['genus'], summary['punctures'],
                  summary['euler_characteristic']) == \
                (genus, punctures, chi)
            statuses.append(PASS if ok else FAIL)
        result[name] = entry
    return None, result, _worst(statuses), {}


def _op_two_disks(args, context):
    names = args.get('surfaces') or catalog.surface_names()
    depth = args.get('depth', surface_model.DEFAULT_DEPTH)
    result = {}
    for name in names:
        certificate = equator.verify_two_disks(catalog.atlas(name, depth))
        result[name] = {'passed': certificate['passed'],
                        'witness': certificate['witness'],
                        'euler_characteristic':
                            certificate['euler_characteristic']}
    status = _worst(PASS if r['passed'] else FAIL for r in result.values())
    return None, result, status, {}


def _op_confluence(args, context):
    atlas = load_atlas(args['atlas'])
    checked, failures = 0, []
    for w in curves.all_loop_words(atlas, args.get('length', 8)):
        checked += 1
        forms = curves.normal_forms(atlas, w)
        normal = curves.normalize(atlas, w)
        if len(forms) != 1 or forms[0] != normal or \
                curves.normalize(atlas, normal) != normal:
            failures.append({'word': curves.format_word(w),
                             'normal_forms': [curves.format_word(x)
                                              for x in forms]})
    result = {'checked': checked, 'failures': failures[:MAX_LISTED_FAILURES],
              'failure_count': len(failures)}
    return None, result, PASS if not failures else FAIL, {}


def _op_oracle(args, context):
    atlas = load_atlas(args['atlas'])
    words = set()
    for w in curves.all_loop_words(atlas, args.get('length', 6)):
        w = curves.normalize(atlas, w)
        if not curves.is_trivial(w):
            words.add(curves.canonical_loop(atlas, w))
    words = sorted(words, key=lambda x: (curves.length(x),
                                         curves.format_word(x)))
    failures = []
    simple = []
    for w in words:
        fast = curves.is_simple(atlas, w)
        if fast != curves.oracle_is_simple(atlas, w):
            failures.append({'check': 'is_simple',
                             'word': curves.format_word(w)})
        if fast:
            simple.append(w)
    pairs = 0
    for i in range(len(simple)):
        for j in range(i + 1, len(simple)):
            a, b = simple[i], simple[j]
            pairs += 1
            count = curves.intersection_number(atlas, a, b)
            if count != curves.oracle_intersection_number(atlas, a, b) or \
                    curves.disjoint(atlas, a, b) != (count == 0):
                failures.append({'check': 'intersection_number',
                                 'words': [curves.format_word(a),
                                           curves.format_word(b)]})
    result = {'words': len(words), 'simple': len(simple), 'pairs': pairs,
              'failures': failures[:MAX_LISTED_FAILURES],
              'failure_count': len(failures)}
    return None, result, PASS if not failures else FAIL, {}


def _op_slice(args, context):
    atlas = load_atlas(args['atlas'])
    kind = check_mode(args.get('kind', graphs.LOOPS), graphs.KINDS, 'kind')
    bound = args.get('bound', 4)
    graph_slice = graphs.build_slice(atlas, kind, bound,
                                     context['caps']['vertex_cap'],
                                     context['verbose'])
    result = {'kind': kind, 'bound': bound, 'vertices': len(graph_slice),
              'edges': sum(1 for _ in graph_slice.edges())}
    return graph_slice, result, PASS, {'vertices': len(graph_slice),
                                       'edges': result['edges']}


def _op_delta(args, context):
    graph_slice = args['slice']
    result = graphs.delta_estimate(graph_slice,
                                   args.get('samples', graphs.DEFAULT_SAMPLES),
                                   seed=context['seed'])
    return None, result, PASS, {'max': result['max'],
                                'mean': result['mean']}


def _op_unicorn(args, context):
    graph_slice = args['slice']
    atlas = graph_slice.atlas
    limit = args.get('max_distance', 4)
    loops = graph_slice.loop_indices()
    checked, failures = 0, []
    for x in range(len(loops)):
        for y in range(x + 1, len(loops)):
            i, j = loops[x], loops[y]
            d = graphs.certified_distance(graph_slice, i, j)
            if d is None or d > limit:
                continue
            checked += 1
            a, b = graph_slice.vertices[i], graph_slice.vertices[j]
            path = graphs.unicorn_path(atlas, a, b).vertices
            consecutive = all(curves.disjoint(atlas, u, v)
                              for u, v in zip(path, path[1:]))
            if not consecutive or len(path) - 1 < d:
                failures.append({'words': [curves.format_word(a),
                                           curves.format_word(b)],
                                 'distance': d, 'path_length': len(path) - 1,
                                 'consecutive_disjoint': consecutive})
    result = {'checked': checked, 'failures': failures[:MAX_LISTED_FAILURES],
              'failure_count': len(failures)}
    return None, result, PASS if not failures else FAIL, {}


def _op_short_loops(args, context):
    result = graphs.compare_loop_distances(args['completed'], args['short'],
                                           args.get('target', 3))
    result['mismatches'] = [list(m) for m in result['mismatches']]
    status = PASS if not result['mismatches'] else FAIL
    return None, result, status, {'checked': result['checked']}


def _op_filling(args, context):
    graph_slice = args['slice']
    levels = {}
    for i, w in enumerate(graph_slice.vertices):
        if w.end.kind == curves.LOOP:
            continue
        levels[curves.format_word(w)] = graphs.filling_level(graph_slice, i)
    above = sorted([word, level] for word, level in levels.items()
                   if level != graphs.DISCONNECTED and
                   level > graphs.MAX_FILLING_LEVEL)
    counts = collections.Counter(str(level) for level in levels.values())
    result = {'rays': len(levels), 'levels': dict(counts),
              'above_clamp': above[:MAX_LISTED_FAILURES],
              'clamp': provenance(graphs.MAX_FILLING_LEVEL,
                                  PUBLISHED_CONSTANT)}
    return None, result, FAIL if above else PASS, {}


def _seeds(atlas, bound=2):
    return [w for w in graphs.enumerate_vertices(atlas, graphs.LOOPS, bound)]


def _op_translation(args, context):
    rep = load_rep(args['rep'])
    atlas = rep.atlas
    base = args.get('base')
    base = _word(atlas, base) if base else _seeds(atlas)[0]
    result = dynamics.translation_estimate(rep, base, args.get('n', 4))
    status = {dynamics.LOXODROMIC_EVIDENCE: PASS,
              dynamics.BOUNDED_EVIDENCE: PASS}.get(result['verdict'],
                                                   INCONCLUSIVE)
    if args.get('expect') and result['verdict'] != args['expect']:
        status = FAIL
    return None, result, status, {'slope': result['slope']}


def _op_weight(args, context):
    rep = load_rep(args['rep'])
    atlas = rep.atlas
    seeds = _seeds(atlas, args.get('seed_bound', 2))
    max_iter = context['caps']['max_iter']
    k = args.get('k', dynamics.DEFAULT_STABILIZATION_DEPTH)
    attractive, repulsive = dynamics.clique_prefixes(rep, seeds, k,
                                                     max_iter)
    result = {'attractive': len(attractive.prefixes),
              'repulsive': len(repulsive.prefixes)}
    if INCONCLUSIVE in (attractive.verdict, repulsive.verdict):
        return None, result, INCONCLUSIVE, {}
    if len(attractive.prefixes) != len(repulsive.prefixes):
        return None, result, FAIL, {}
    w, certificate = dynamics.weight(rep, seeds, k, max_iter)
    rotation = dynamics.rotation_number(rep, [], cliques=attractive)
    divides = rotation['estimate'] is not None and \
        attractive.power % fractions.Fraction(
            rotation['estimate']).denominator == 0
    converged = all(f['ambiguous'] or f['to_endpoint']
                    for f in certificate['flows'])
    result.update({'weight': w, 'alternating': certificate['alternating'],
                   'power': certificate['power'],
                   'weight_bound': certificate['weight_bound'],
                   'rotation_number': rotation['estimate'],
                   'denominator_divides_power': divides,
                   'orbits_converge': converged})
    ok = certificate['alternating'] and divides and converged
    return None, result, PASS if ok else FAIL, {'weight': w}


def _op_obstruction(args, context):
    top = args.get('max_weight', 5)
    result, statuses = {}, []
    for w_g in range(1, top + 1):
        for w_h in range(1, w_g + 1):
            report = dynamics.alternation_obstruction(
                dynamics.alternating_labels(2 * w_g),
                dynamics.alternating_labels(2 * w_h))
            expected = w_h < w_g
            result['%d/%d' % (w_g, w_h)] = report['obstructed']
            statuses.append(PASS if report['obstructed'] == expected
                            else FAIL)
    return None, result, _worst(statuses), {}


def _op_distinct_weights(args, context):
    g, h = load_rep(args['rep']), load_rep(args['against'])
    bound = args.get('seed_bound', 2)
    result = dynamics.distinct_weights_certificate(
        g, h, _seeds(g.atlas, bound), _seeds(h.atlas, bound),
        max_iter=context['caps']['max_iter'])
    status = PASS if result['passed'] else FAIL
    return None, result, status, {'weights': result['weights']}


def _op_verify_qi(args, context):
    e = load_embedding(args['embedding'])
    if args.get('corrupt'):
        e = subsurface.corrupt_gamma(e)
    cap = context['caps']['vertex_cap']
    source_bound, target_bound = args.get('bounds', [6, 8])
    source_slice = graphs.build_slice(e.source, graphs.LOOPS, source_bound,
                                      cap, context['verbose'])
    target_slice = graphs.build_slice(e.target, graphs.LOOPS, target_bound,
                                      cap, context['verbose'])
    report = subsurface.verify_qi(e, source_slice, target_slice)
    report['counterexamples'] = report['counterexamples'][
        :MAX_LISTED_FAILURES]
    report['lipschitz_constant'] = provenance(subsurface.LIPSCHITZ_CONSTANT,
                                              PUBLISHED_CONSTANT)
    expect = not args.get('corrupt')
    status = PASS if report['passed'] == expect else FAIL
    return None, report, status, {'pairs': report['pairs']}


def _op_transport(args, context):
    e = load_embedding(args['embedding'])
    rep = load_rep(args['rep'], e.source)
    extended = subsurface.transport_dynamics(e, rep)
    seeds = _seeds(e.source, args.get('seed_bound', 2))
    max_iter = context['caps']['max_iter']
    k = args.get('k', dynamics.DEFAULT_STABILIZATION_DEPTH)
    source = dynamics.clique_prefixes(rep, seeds, k, max_iter)
    target = dynamics.clique_prefixes(
        extended, [subsurface.push_forward(e, s) for s in seeds], k,
        max_iter)
    counts = [len(side.prefixes) for side in source + target]
    result = {'source': counts[:2], 'target': counts[2:]}
    if INCONCLUSIVE in [side.verdict for side in source + target]:
        return extended, result, INCONCLUSIVE, {}
    status = PASS if counts[:2] == counts[2:] else FAIL
    return extended, result, status, {'counts': counts[:2]}


OPERATIONS = {
    'atlas': _op_atlas,
    'classify': _op_classify,
    'two_disks': _op_two_disks,
    'confluence': _op_confluence,
    'oracle': _op_oracle,
    'slice': _op_slice,
    'delta': _op_delta,
    'unicorn': _op_unicorn,
    'short_loops': _op_short_loops,
    'filling': _op_filling,
    'translation': _op_translation,
    'weight': _op_weight,
    'obstruction': _op_obstruction,
    'distinct_weights': _op_distinct_weights,
    'verify_qi': _op_verify_qi,
    'transport': _op_transport,
}

OP_ARGUMENTS = {
    'atlas': ('surface', 'depth'),
    'classify': ('surfaces', 'depth'),
    'two_disks': ('surfaces', 'depth'),
    'confluence': ('atlas', 'length'),
    'oracle': ('atlas', 'length'),
    'slice': ('atlas', 'kind', 'bound'),
    'delta': ('slice', 'samples'),
    'unicorn': ('slice', 'max_distance'),
    'short_loops': ('completed', 'short', 'target'),
    'filling': ('slice',),
    'translation': ('rep', 'base', 'n', 'expect'),
    'weight': ('rep', 'seed_bound', 'k'),
    'obstruction': ('max_weight',),
    'distinct_weights': ('rep', 'against', 'seed_bound'),
    'verify_qi': ('embedding', 'bounds', 'corrupt'),
    'transport': ('embedding', 'rep', 'seed_bound', 'k'),
}


# Goldens


def golden_path(scenario):
    directory = os.path.join(get_cache_dir(), 'goldens')
    if not os.path.exists(directory):
        os.makedirs(directory)
    return os.path.join(directory, scenario.name + '.json')


def _compare_goldens(report, tracked, stored):
    """Marks golden values and fails steps whose values moved."""
    for name, values in stored.get('values', {}).items():
        step = report['steps'].get(name)
        if step is None:
            continue
        checked = {}
        for key, expected in values.items():
            found = tracked.get(name, {}).get(key)
            checked[key] = provenance(expected, GOLDEN,
                                      matches=found == expected)
            if found != expected:
                step['status'] = FAIL
        step['golden'] = checked


def _needed(scenario, first):
    """Indices of earlier steps whose artifacts later steps refer to."""
    index = dict((s.name, i) for i, s in enumerate(scenario.steps))
    needed = set()
    stack = list(range(first, len(scenario.steps)))
    while stack:
        step = scenario.steps[stack.pop()]
        for value in step.args.values():
            for ref in _references(value):
                i = index[ref]
                if i < first and i not in needed:
                    needed.add(i)
                    stack.append(i)
    return needed


def run_scenario(scenario, resume_from=0, update_goldens=False,
                 command=None, verbose=0):
    """Runs the steps of a scenario in order.

    # Arguments
        scenario: A `Scenario`.
        resume_from: Index of the first step to report; earlier steps are
            rerun only when later steps need their artifacts.
        update_goldens: Whether to overwrite the stored golden values.
        command: Command line recorded with new goldens.
        verbose: Verbosity mode.

    # Returns
        The report dictionary. `status` is `'pass'`, `'fail'` or
        `'inconclusive'`; a run stopped by a cap carries the index of the
        first step left to run in `resume_from`.
    """
    context = {'seed': scenario.seed, 'caps': scenario.caps,
               'verbose': verbose}
    report = {'scenario': scenario.name, 'seed': scenario.seed,
              'caps': scenario.caps, 'steps': {}, 'order': [],
              'resume_from': None}
    artifacts, tracked = {}, {}
    needed = _needed(scenario, resume_from)
    started = time.time()
    wall_clock = scenario.caps.get('wall_clock')
    for i, step in enumerate(scenario.steps):
        if i < resume_from and i not in needed:
            continue
        if wall_clock is not None and time.time() - started > wall_clock:
            logger.warning('wall clock cap of %ss reached before step %s',
                           wall_clock, step.name)
            report['resume_from'] = i
            break
        args = dict((k, _resolve(v, artifacts))
                    for k, v in step.args.items())
        logger.info('step %d: %s (%s)', i, step.name, step.op)
        try:
            artifact, result, status, goldens = OPERATIONS[step.op](
                args, context)
        except graphs.CapExceededError as e:
            logger.warning('step %s stopped: %s', step.name, e)
            report['resume_from'] = i
            report['steps'][step.name] = {
                'op': step.op, 'status': INCONCLUSIVE,
                'result': {'message': str(e),
                           'vertices': provenance(len(e.vertices))}}
            report['order'].append(step.name)
            break
        except KeyError as e:
            raise ParseError('Missing argument ' + str(e),
                             location='steps[%d].args' % i)
        artifacts[step.name] = artifact
        if i < resume_from:
            continue
        report['steps'][step.name] = {'op': step.op, 'status': status,
                                      'result': _tag(result)}
        tracked[step.name] = goldens
        report['order'].append(step.name)
    statuses = [s['status'] for s in report['steps'].values()]
    if report['resume_from'] is not None:
        statuses.append(INCONCLUSIVE)
    # Stored values are compared after a JSON round trip, so a run that
    # writes the goldens reports them exactly as a later run reads them.
    tracked = json.loads(dumps(tracked))
    path = golden_path(scenario)
    complete = report['resume_from'] is None and resume_from == 0
    stored = None
    if os.path.exists(path) and not update_goldens:
        stored = load_json(path)
    elif complete and (update_goldens or _worst(statuses) == PASS):
        stored = {'command': command, 'seed': scenario.seed,
                  'values': tracked}
        dump_json(stored, path)
        logger.info('goldens written to %s', path)
    if stored is not None:
        _compare_goldens(report, tracked, stored)
        statuses = [s['status'] for s in report['steps'].values()] + \
            ([INCONCLUSIVE] if report['resume_from'] is not None else [])
    report['status'] = _worst(statuses)
    return report


# Command line


def _format_text(value, indent=0):
    pad = ' ' * indent
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append('%s%s:' % (pad, key))
                lines.append(_format_text(item, indent + 2))
            else:
                lines.append('%s%s: %s' % (pad, key, item))
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(_format_text(item, indent + 2))
            else:
                lines.append('%s- %s' % (pad, item))
    else:
        lines.append(pad + str(value))
    return '\n'.join(lines)


def _emit(value, fmt, out, dot=None):
    if fmt == 'dot':
        if dot is None:
            raise ValueError('DOT output is only available for graph '
                             'slices.')
        out.write(dot)
        return
    if fmt == 'text':
        out.write(_format_text(value) + '\n')
    else:
        out.write(dumps(value) + '\n')


def _write(config, path):
    if path:
        dump_json(config, path)
        logger.info('wrote %s', path)


def _load_spec(value):
    if value in catalog.SURFACES:
        return catalog.end_spec(value)
    return surface_model.end_spec_from_config(load_json(value))


def _cmd_surface(args):
    tree = surface_model.build_core_tree(_load_spec(args.spec), args.depth)
    result = surface_model.surface_summary(tree)
    if args.tree:
        result['tree'] = surface_model.tree_to_config(tree)
    _write(surface_model.tree_to_config(tree), args.out)
    return result, PASS, None


def _cmd_equator(args):
    if (args.spec is None) == (args.tree is None):
        raise ValueError('`equator build` needs exactly one of `--spec` '
                         'and `--tree`.')
    if args.tree is not None:
        tree = surface_model.tree_from_config(load_json(args.tree))
        name = os.path.splitext(os.path.basename(args.tree))[0]
        atlas = equator.build_equator(surface_model.expand_to_pants(tree),
                                      name=name)
    else:
        atlas = load_atlas(args.spec, args.depth)
    config = equator.atlas_to_config(atlas)
    _write(config, args.out)
    result = {'atlas': config}
    status = PASS
    if args.check:
        certificate = equator.verify_two_disks(atlas)
        result['two_disks'] = certificate
        status = PASS if certificate['passed'] else FAIL
    return result, status, None


def _cmd_curve(args):
    atlas = load_atlas(args.atlas, args.depth)
    words = [_word(atlas, text) for text in args.words]
    action = args.action
    if action == 'normalize':
        result = {'normal_form': [curves.format_word(w) for w in words]}
    elif action == 'simple':
        result = dict((curves.format_word(w), curves.is_simple(atlas, w))
                      for w in words)
    elif action == 'compare':
        if len(words) != 3:
            raise ValueError('`compare` needs exactly three words.')
        result = {'orientation': curves.boundary_compare(atlas, *words),
                  'keys': [list(curves.boundary_key(atlas, w))
                           for w in words]}
    else:
        if len(words) != 2:
            raise ValueError('`%s` needs exactly two words.' % action)
        count = curves.intersection_number(atlas, *words)
        result = {'intersection_number': count,
                  'disjoint': curves.disjoint(atlas, *words)}
    return result, PASS, None


def _two_words(args, atlas):
    if len(args.words) != 2:
        raise ValueError('`graph %s` needs exactly two words, got %d.'
                         % (args.action, len(args.words)))
    return [_word(atlas, text) for text in args.words]


def _cmd_graph(args):
    atlas = load_atlas(args.atlas, args.depth)
    if args.action == 'unicorn':
        a, b = _two_words(args, atlas)
        path = graphs.unicorn_path(atlas, a, b)
        result = {'unicorn_path': [curves.format_word(w)
                                   for w in path.vertices],
                  'provenance': list(path.provenance)}
        return result, PASS, None
    graph_slice = graphs.build_slice(atlas, args.kind, args.bound,
                                     args.vertex_cap, args.verbose)
    result = {'kind': args.kind, 'bound': args.bound,
              'vertices': len(graph_slice)}
    status = PASS
    if args.action == 'distance':
        a, b = _two_words(args, atlas)
        result['distance'] = graphs.distance(graph_slice, a, b)
        result['certified'] = graphs.certified_distance(graph_slice, a, b)
        if result['certified'] is None:
            status = INCONCLUSIVE
    elif args.action == 'delta':
        result['delta'] = graphs.delta_estimate(graph_slice, args.samples,
                                                seed=args.seed,
                                                verbose=args.verbose)
    if args.format == 'json' and args.export:
        result['graph'] = graphs.to_json(graph_slice)
    if args.save:
        result['saved'] = graphs.save_distances(graph_slice)
    return result, status, graphs.to_dot(graph_slice)


def _attractive(rep, max_iter):
    attractive, _ = dynamics.clique_prefixes(rep, _seeds(rep.atlas),
                                             max_iter=max_iter)
    return attractive


def _cmd_dyn(args):
    rep = load_rep(args.rep)
    atlas = rep.atlas
    words = [_word(atlas, text) for text in args.words]
    action = args.action
    context = {'seed': args.seed, 'verbose': args.verbose,
               'caps': dict(DEFAULT_CAPS, max_iter=args.max_iter)}
    status = PASS
    if action == 'act':
        result = {'images': [curves.format_word(dynamics.act(rep, w))
                             for w in words]}
    elif action == 'orbit':
        if len(words) != 1:
            raise ValueError('`dyn orbit` needs exactly one word.')
        result = {'orbit': [curves.format_word(w) for w in dynamics.orbit(
            rep, words[0], args.iterates,
            max_length=dynamics.MAX_ORBIT_LENGTH)]}
    elif action == 'alevel':
        attractive = _attractive(rep, args.max_iter)
        if attractive.verdict == INCONCLUSIVE:
            return {'verdict': attractive.verdict}, INCONCLUSIVE, None
        result = {'depth': attractive.depth,
                  'attractive': [curves.format_word(p)
                                 for p in attractive.prefixes],
                  'levels': [[curves.format_word(w),
                              dynamics.a_level(w, attractive)]
                             for w in words]}
    elif action == 'obstruct':
        if args.against is None:
            raise ValueError('`dyn obstruct` needs `--against`.')
        other = load_rep(args.against)
        result = dynamics.distinct_weights_certificate(
            rep, other, _seeds(atlas), _seeds(other.atlas),
            max_iter=args.max_iter)
        status = PASS if result['passed'] else FAIL
    elif action == 'translation':
        _, result, status, _ = _op_translation(
            {'rep': rep, 'base': args.base, 'n': args.iterates}, context)
    elif action == 'weight':
        _, result, status, _ = _op_weight({'rep': rep}, context)
    elif action == 'validate':
        result = dynamics.validate_rep(rep, _seeds(atlas))
        status = PASS if result['passed'] else FAIL
    else:
        sample = words or _seeds(atlas)
        result = dynamics.rotation_number(rep, sample, args.iterates)
        status = PASS if result['converged'] else INCONCLUSIVE
    return result, status, None


def _cmd_sub(args):
    e = load_embedding(args.embedding)
    action = args.action
    if action == 'push':
        w = _word(e.source, args.word)
        result = {'image': curves.format_word(subsurface.push_forward(e, w))}
    elif action == 'project':
        w = _word(e.target, args.word)
        result = {'projection': curves.format_word(subsurface.project(e, w))}
    elif action == 'verify-qi':
        context = {'seed': args.seed, 'verbose': args.verbose,
                   'caps': dict(DEFAULT_CAPS, vertex_cap=args.vertex_cap)}
        _, result, status, _ = _op_verify_qi(
            {'embedding': e, 'bounds': args.bounds}, context)
        return result, status, None
    else:
        rep = load_rep(args.rep, e.source)
        extended = subsurface.transport_dynamics(e, rep)
        result = dynamics.rep_to_config(extended)
    return result, PASS, None


def _cmd_run(args):
    if args.scenario in catalog.SCENARIOS:
        config = catalog.SCENARIOS[args.scenario]
        scenario = load_scenario(config, args.scenario)
    else:
        scenario = load_scenario(load_json(args.scenario),
                                 os.path.splitext(
                                     os.path.basename(args.scenario))[0])
    if args.seed is not None:
        scenario = scenario._replace(seed=args.seed)
    report = run_scenario(scenario, args.resume_from, args.update_goldens,
                          command=' '.join(['loopforge'] + args.argv),
                          verbose=args.verbose)
    if args.output:
        dump_json(report, args.output)
    return report, report['status'], None


def build_parser():
    parser = argparse.ArgumentParser(
        prog='loopforge',
        description='Loop graphs, rays and dynamics of mapping classes on '
                    'marked surfaces.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('--format', choices=FORMATS, default='json')
    parser.add_argument('--verbose', '-v', action='count', default=0)
    parser.add_argument('--depth', type=int,
                        default=surface_model.DEFAULT_DEPTH)
    # Lets `--format` follow the verb as well; the top-level value stays
    # the default.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS,
                        default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('surface', parents=[common],
                       help='core tree of a surface')
    p.add_argument('action', choices=('build',))
    p.add_argument('--spec', required=True,
                   help='catalog name or JSON surface description')
    p.add_argument('--out', help='write the core tree to this file')
    p.add_argument('--tree', action='store_true',
                   help='include the core tree in the output')
    p.set_defaults(handler=_cmd_surface)

    p = sub.add_parser('equator', parents=[common],
                       help='build and check the polygon atlas')
    p.add_argument('action', choices=('build',))
    p.add_argument('--spec', help='catalog name or JSON surface '
                                  'description')
    p.add_argument('--tree', help='core tree written by `surface build`')
    p.add_argument('--out', help='write the atlas to this file')
    p.add_argument('--check', action='store_true',
                   help='verify that the boundary words glue to the '
                        'surface')
    p.set_defaults(handler=_cmd_equator)

    p = sub.add_parser('curve', parents=[common],
                       help='normal forms and intersections')
    p.add_argument('action',
                   choices=('normalize', 'simple', 'intersect', 'compare'))
    p.add_argument('words', nargs='+')
    p.add_argument('--atlas', default=catalog.REP_SURFACE)
    p.set_defaults(handler=_cmd_curve)

    p = sub.add_parser('graph', parents=[common],
                       help='finite slices of loop and ray graphs')
    p.add_argument('action', choices=('build', 'distance', 'unicorn',
                                      'delta'))
    p.add_argument('words', nargs='*')
    p.add_argument('--atlas', default=catalog.REP_SURFACE,
                   help='catalog name or JSON atlas')
    p.add_argument('--kind', choices=graphs.KINDS, default=graphs.LOOPS)
    p.add_argument('--bound', type=int, default=4)
    p.add_argument('--vertex-cap', type=int,
                   default=graphs.DEFAULT_VERTEX_CAP)
    p.add_argument('--samples', type=int, default=graphs.DEFAULT_SAMPLES)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--export', action='store_true',
                   help='include node-link data in JSON output')
    p.add_argument('--save', action='store_true',
                   help='cache the distance matrix')
    p.set_defaults(handler=_cmd_graph)

    p = sub.add_parser('dyn', parents=[common],
                       help='dynamics of a mapping class')
    p.add_argument('action',
                   choices=('act', 'orbit', 'weight', 'rotation', 'alevel',
                            'obstruct', 'translation', 'validate'))
    p.add_argument('rep', help='catalog name or JSON file')
    p.add_argument('words', nargs='*')
    p.add_argument('--against', help='second rep for `obstruct`')
    p.add_argument('--base')
    p.add_argument('--iterates', type=int, default=4)
    p.add_argument('--max-iter', type=int, default=dynamics.DEFAULT_MAX_ITER)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(handler=_cmd_dyn)

    p = sub.add_parser('sub', parents=[common], help='essential embeddings')
    p.add_argument('action',
                   choices=('push', 'project', 'verify-qi', 'extend'))
    p.add_argument('embedding', help='catalog name or JSON file')
    p.add_argument('word', nargs='?')
    p.add_argument('--rep')
    p.add_argument('--bounds', type=int, nargs=2, default=[6, 8])
    p.add_argument('--vertex-cap', type=int,
                   default=graphs.DEFAULT_VERTEX_CAP)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(handler=_cmd_sub)

    p = sub.add_parser('run', parents=[common], help='run a scenario')
    p.add_argument('scenario', help='catalog scenario or JSON file')
    p.add_argument('--seed', type=int)
    p.add_argument('--resume-from', type=int, default=0)
    p.add_argument('--update-goldens', action='store_true')
    p.add_argument('--output', '-o')
    p.set_defaults(handler=_cmd_run)
    return parser


def main(argv=None, out=None):
    """Entry point of the `loopforge` command.

    # Returns
        The exit code.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # Bad usage is an input error, not exit code 2.
        if e.code:
            return EXIT_INPUT_ERROR
        raise
    if getattr(args, 'handler', None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT_ERROR
    args.argv = argv
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        result, status, dot = args.handler(args)
        _emit(result, args.format, out, dot)
    except ValueError as e:
        # ParseError included.
        sys.stderr.write('loopforge: error: %s\n' % e)
        return EXIT_INPUT_ERROR
    except graphs.CapExceededError as e:
        sys.stderr.write('loopforge: %s\n' % e)
        return EXIT_INCONCLUSIVE
    return EXIT_CODES[status]


if __name__ == '__main__':
    sys.exit(main())
