"""Mapping classes acting on crossing words, and their circle dynamics.

A mapping class fixing the marked puncture is given by a rewriting
table: the crossing sequence swept by a short transversal of each equator
arc, and for each corner the corner its region is carried to together
with a tail of crossings leading back. A word is acted on by rewriting
every crossing and adjusting both ends:

    start' + tail(start) + images + inverse(tail(end)) -> end'

Loxodromic behaviour is detected from evidence only: orbits are placed in
a finite slice, and attractive and repulsive fixed points on the circle of
rays are approximated by stabilized `k`-beginnings of long orbit words.

# Reference
- Penner. A construction of pseudo-Anosov homeomorphisms.
- Handel, Thurston. New proofs of some results of Nielsen.
- Bestvina, Fujiwara. Bounded cohomology of subgroups of mapping class
  groups.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import fractions
import itertools
import logging
import warnings

import networkx as nx
import numpy as np

from . import curves
from . import graphs
from .equator import SEAM
from .equator import format_token
from .equator import inv
from .equator import parse_token
from .io_utils import ParseError
from .io_utils import require

logger = logging.getLogger(__name__)

LOXODROMIC_EVIDENCE = 'loxodromic-evidence'
BOUNDED_EVIDENCE = 'bounded-orbit-evidence'
INCONCLUSIVE = 'inconclusive'

ATTRACTIVE = 'attractive'
REPULSIVE = 'repulsive'

LOXODROMIC_SLOPE = 0.5
BOUNDED_RADIUS = 2
DEFAULT_STABILIZATION_DEPTH = 8
MAX_STABILIZATION_DEPTH = 64
DEFAULT_MAX_ITER = 10
MAX_ORBIT_LENGTH = 5000
SHORTCUT_LENGTH = 40
MAX_DENOMINATOR = 12

CliquePrefixSet = collections.namedtuple(
    'CliquePrefixSet', ['side', 'prefixes', 'depth', 'power', 'cycles',
                        'verdict'])


class RewritingRep(object):
    """A mapping class as an arc-rewriting table.

    # Arguments
        atlas: The `PolygonAtlas` the table refers to.
        arc_images: Dictionary from arc id to the tuple of signed sides
            crossed by the image of a transversal of the arc, read in the
            direction of `(arc, +1)`. Missing arcs are fixed.
        corner_map: Dictionary from corner `(face, i)` to
            `(image_corner, tail)`. Missing corners are fixed with an
            empty tail.
        inverse: Optional companion `RewritingRep`.
        name: Optional label.
    """

    def __init__(self, atlas, arc_images=None, corner_map=None,
                 inverse=None, name=None):
        self.atlas = atlas
        self.arc_images = dict((k, tuple(v)) for k, v in
                               (arc_images or {}).items())
        self.corner_map = dict(
            (atlas.normal_corner(c), (atlas.normal_corner(image),
                                      tuple(tail)))
            for c, (image, tail) in (corner_map or {}).items())
        self.inverse = inverse
        self.name = name

    def image(self, token):
        segment = self.arc_images.get(token[0], ((token[0], 1),))
        if token[1] > 0:
            return segment
        return tuple(inv(t) for t in reversed(segment))

    def corner_image(self, corner):
        corner = self.atlas.normal_corner(corner)
        return self.corner_map.get(corner, (corner, ()))

    @property
    def fan_map(self):
        """Image of every fan region index."""
        atlas = self.atlas
        return [atlas.fan_index(self.corner_image(region.corner)[0])
                for region in atlas.corner_fan]

    def __repr__(self):
        return '<RewritingRep %s>' % (self.name or '')


def identity_rep(atlas):
    rep = RewritingRep(atlas, name='identity')
    rep.inverse = rep
    return rep


def _images(rep, tokens):
    out = []
    for t in tokens:
        out.extend(rep.image(t))
    return out


def act(rep, w, check_simple=True):
    """Image of a word under a mapping class.

    # Arguments
        rep: A `RewritingRep`.
        w: A `CrossingWord`.
        check_simple: Whether to reject non-simple images of simple
            finite words.

    # Returns
        The normalized image word.

    # Raises
        ValueError: if a simple finite word is sent to a non-simple one,
            which means the table does not describe a homeomorphism.
    """
    atlas = rep.atlas
    start, start_tail = rep.corner_image(atlas.fan_corner(w.start))
    start_index = atlas.fan_index(start)
    if start_index is None:
        raise ValueError('Fan region R%d is not sent to the marked puncture '
                         'by `%s`' % (w.start, rep.name))
    tokens = list(start_tail) + _images(rep, w.crossings)
    kind = w.end.kind
    if kind in (curves.LOOP, curves.RAY):
        if kind == curves.LOOP:
            corner = atlas.fan_corner(w.end.value)
        else:
            corner = atlas.normal_corner(w.end.value)
        end, end_tail = rep.corner_image(corner)
        tokens += [inv(t) for t in reversed(end_tail)]
        if kind == curves.LOOP:
            image = curves.loop(start_index, curves.free_reduce(tokens),
                                atlas.fan_index(end))
        else:
            image = curves.ray(start_index, curves.free_reduce(tokens), end)
    elif kind == curves.PERIODIC:
        image = curves.periodic(start_index, tokens,
                                _images(rep, w.end.value))
    else:
        image = curves.prefix(start_index, curves.free_reduce(tokens))
    image = curves.normalize(atlas, image)
    if (check_simple and curves.is_finite(w) and
            curves.is_simple(atlas, w) and
            not curves.is_simple(atlas, image)):
        raise ValueError('`%s` sends the simple word `%s` to the non-simple '
                         '`%s`; the rewriting table is invalid.'
                         % (rep.name, curves.format_word(w),
                            curves.format_word(image)))
    return image


def _compose_tables(f, g):
    atlas = f.atlas
    arc_images = dict(
        (arc_id, tuple(curves.free_reduce(
            _images(f, g.image((arc_id, 1))))))
        for arc_id in atlas.arcs)
    corner_map = {}
    for face in atlas.faces:
        for i in range(len(atlas.faces[face])):
            c1, tail_g = g.corner_image((face, i))
            c2, tail_f = f.corner_image(c1)
            corner_map[(face, i)] = (c2, tuple(curves.free_reduce(
                list(tail_f) + _images(f, tail_g))))
    return arc_images, corner_map


def compose(f, g, name=None):
    """The mapping class `f o g` (apply `g` first).

    The inverse table is composed too when both factors carry one.
    """
    if f.atlas is not g.atlas and f.atlas != g.atlas:
        raise ValueError('Cannot compose reps on different atlases.')
    name = name or '%s*%s' % (f.name, g.name)
    rep = RewritingRep(f.atlas, *_compose_tables(f, g), name=name)
    if f.inverse is not None and g.inverse is not None:
        rep.inverse = RewritingRep(
            f.atlas, *_compose_tables(g.inverse, f.inverse),
            inverse=rep, name='(%s)^-1' % name)
    return rep


def inverse(rep):
    if rep.inverse is None:
        raise ValueError('`%s` carries no inverse table.' % rep.name)
    return rep.inverse


def power(rep, n):
    if n < 0:
        return power(inverse(rep), -n)
    result = identity_rep(rep.atlas)
    for _ in range(n):
        result = compose(rep, result, name=None)
    result.name = '%s^%d' % (rep.name, n)
    return result


def conjugate(rep, g):
    """`g o rep o g^-1`."""
    return compose(g, compose(rep, inverse(g)),
                   name='%s.%s.%s^-1' % (g.name, rep.name, g.name))


def orbit(rep, w, n, check_simple=False, max_length=None):
    """`[w, rep(w), ..., rep^n(w)]`, stopping early past `max_length`."""
    words = [curves.normalize(rep.atlas, w)]
    for _ in range(n):
        if max_length is not None and \
                curves.length(words[-1]) > max_length:
            break
        words.append(act(rep, words[-1], check_simple=check_simple))
    return words


def _canonical(atlas, w):
    return curves.canonical_loop(atlas, w)


def validate_rep(rep, corpus=()):
    """Checks a rewriting table.

    Image segments and tails must be face-consistent, the fan must be
    rotated, and on `corpus` the action must keep words simple, keep
    disjoint pairs disjoint and be undone by the inverse table.

    # Returns
        A certificate dictionary with `passed` and, on failure, `witness`.
    """
    atlas = rep.atlas
    certificate = {'passed': False, 'rep': rep.name, 'witness': None,
                   'corpus': len(corpus)}

    def fail(check, **detail):
        detail['check'] = check
        certificate['witness'] = detail
        return certificate

    for arc_id, segment in rep.arc_images.items():
        if arc_id not in atlas.arcs:
            return fail('unknown-arc', arc=arc_id)
        face = atlas.face_of((arc_id, 1))
        for t in segment:
            if t not in atlas.position or atlas.face_of(t) != face:
                return fail('arc-image', arc=arc_id,
                            token=format_token(t))
            face = atlas.face_of(inv(t))
        if face != atlas.face_of((arc_id, -1)):
            return fail('arc-image', arc=arc_id)
    for corner, (image, tail) in rep.corner_map.items():
        face = image[0]
        for t in tail:
            if t not in atlas.position or atlas.face_of(t) != face:
                return fail('corner-tail', corner=list(corner))
            face = atlas.face_of(inv(t))
        if face != corner[0]:
            return fail('corner-tail', corner=list(corner))
        if ((atlas.corner_vertex(corner) == atlas.marked) !=
                (atlas.corner_vertex(image) == atlas.marked)):
            return fail('marked-puncture', corner=list(corner))
    fan = rep.fan_map
    size = len(fan)
    if None in fan or any((fan[i] - fan[0]) % size != i
                          for i in range(size)):
        return fail('fan-order', fan_map=fan)
    images = []
    for w in corpus:
        try:
            image = act(rep, w)
        except ValueError as e:
            return fail('simplicity', word=curves.format_word(w),
                        message=str(e))
        images.append(image)
        if rep.inverse is not None:
            back = act(rep.inverse, image, check_simple=False)
            if _canonical(atlas, back) != _canonical(atlas, w):
                return fail('inverse', word=curves.format_word(w),
                            back=curves.format_word(back))
    for x, y in itertools.combinations(range(len(corpus)), 2):
        if curves.disjoint(atlas, corpus[x], corpus[y]) and \
                not curves.disjoint(atlas, images[x], images[y]):
            return fail('disjointness', words=[
                curves.format_word(corpus[x]),
                curves.format_word(corpus[y])])
    certificate['passed'] = True
    return certificate


def _orbit_graph(rep, base, n, graph_slice, shortcut_length):
    """Slice vertices plus the orbit of a unicorn path from `base` to
    `rep(base)`.

    Consecutive vertices of the pushed-forward unicorn paths are disjoint,
    so the orbit stays connected; shortcuts through slice vertices are
    tested only for words up to `shortcut_length` crossings.
    """
    atlas = rep.atlas
    graph = nx.Graph()
    keys = {}

    def node(w):
        key = _canonical(atlas, w)
        if key in graph_slice.index:
            return graph_slice.index[key]
        if key not in keys:
            keys[key] = ('orbit', len(keys))
            graph.add_node(keys[key], word=key)
        return keys[key]

    graph.add_nodes_from(range(len(graph_slice)))
    graph.add_edges_from(graph_slice.edges())
    base = curves.normalize(atlas, base)
    path = list(graphs.unicorn_path(atlas, base,
                                    act(rep, base, False)).vertices)
    orbit_nodes = [node(base)]
    for step in range(n):
        nodes = [node(w) for w in path]
        graph.add_edges_from(zip(nodes[:-1], nodes[1:]))
        orbit_nodes.append(nodes[-1])
        if step < n - 1:
            path = [act(rep, w, False) for w in path]
    for key, label in keys.items():
        if curves.length(key) > shortcut_length:
            continue
        for i, w in enumerate(graph_slice.vertices):
            if curves.disjoint(atlas, key, w):
                graph.add_edge(label, i)
        for other, other_label in keys.items():
            if other_label <= label or \
                    curves.length(other) > shortcut_length:
                continue
            if curves.disjoint(atlas, key, other):
                graph.add_edge(label, other_label)
    return graph, orbit_nodes


def translation_estimate(rep, base, n=4, graph_slice=None,
                         slope_threshold=LOXODROMIC_SLOPE,
                         shortcut_length=SHORTCUT_LENGTH):
    """Estimates the translation length of `rep` on the loop graph.

    `d_k = d(base, rep^k(base))` is measured in the slice enlarged by the
    orbit of a unicorn path from `base` to `rep(base)`; these are upper
    bounds. The slope `d_n / n` and the growth of `d_k` decide the
    verdict.

    # Arguments
        rep: A `RewritingRep`.
        base: A simple loop.
        n: Number of iterates.
        graph_slice: Loop `GraphSlice`; a bound-2 loop slice by default.
        slope_threshold: Minimal slope for loxodromic evidence.
        shortcut_length: Longest orbit word tested for shortcuts.

    # Returns
        A dictionary with `slope` (a `'p/q'` string), `verdict`,
        `distances`, `lengths`, `escape_index` and `assumptions`.
    """
    atlas = rep.atlas
    if graph_slice is None:
        graph_slice = graphs.build_slice(atlas, graphs.LOOPS, 2)
    words = orbit(rep, base, n)
    keys = [_canonical(atlas, w) for w in words]
    report = {'rep': rep.name, 'base': curves.format_word(words[0]),
              'iterates': n, 'lengths': [curves.length(w) for w in words],
              'slice_bound': graph_slice.bound, 'escape_index': None,
              'assumptions': ['slice distances are upper bounds',
                              'unicorn path edges assume disjointness of '
                              'consecutive surgeries']}
    if keys[0] in keys[1:]:
        period = keys[1:].index(keys[0]) + 1
        report.update({'slope': '0', 'verdict': BOUNDED_EVIDENCE,
                       'period': period,
                       'distances': [0] * (n + 1)})
        return report
    graph, orbit_nodes = _orbit_graph(rep, base, n, graph_slice,
                                      shortcut_length)
    lengths = nx.single_source_shortest_path_length(graph, orbit_nodes[0])
    distances = []
    for k, label in enumerate(orbit_nodes):
        if label not in lengths:
            report['escape_index'] = k
            break
        distances.append(lengths[label])
    report['distances'] = distances
    if report['escape_index'] is not None:
        report.update({'slope': None, 'verdict': INCONCLUSIVE})
        return report
    slope = fractions.Fraction(distances[-1], n)
    report['slope'] = str(slope)
    if slope >= slope_threshold and distances[-1] > BOUNDED_RADIUS:
        report['verdict'] = LOXODROMIC_EVIDENCE
    elif max(distances) <= BOUNDED_RADIUS:
        report['verdict'] = BOUNDED_EVIDENCE
    else:
        report['verdict'] = INCONCLUSIVE
    logger.info('translation estimate for %s: slope %s (%s)', rep.name,
                report['slope'], report['verdict'])
    return report


def _prefix_of(w, k):
    if curves.length(w) < k:
        return None
    return curves.prefix(w.start, curves.crossing_prefix(w, k))


def _eventual_cycle(prefixes):
    """The cycle a sequence of prefixes settles into, or None.

    A cycle of length `q` counts once it has been seen twice in a row at
    the end of the sequence.
    """
    n = len(prefixes)
    for q in range(1, n // 2 + 1):
        tail = prefixes[n - 2 * q:]
        if None in tail:
            continue
        if tail[:q] == tail[q:]:
            return tail[q:]
    return None


def _orbit_cycles(seeds, k, orbits):
    cycles = []
    for seed in seeds:
        cycle = _eventual_cycle([_prefix_of(w, k) for w in orbits[seed]])
        if cycle is None:
            return None
        cycles.append(cycle)
    return cycles


def _side(rep, seeds, side, depth, max_iter, max_length):
    atlas = rep.atlas
    orbits = {}
    for seed in seeds:
        words = orbit(rep, seed, max_iter, max_length=max_length)
        keys = [_canonical(atlas, w) for w in words]
        if keys[0] in keys[1:]:
            raise ValueError('The orbit of `%s` is periodic: `%s` is not '
                             'loxodromic.' % (curves.format_word(seed),
                                              rep.name))
        orbits[seed] = words
    k = depth
    previous = None
    while k <= MAX_STABILIZATION_DEPTH:
        cycles = _orbit_cycles(seeds, k, orbits)
        if cycles is None:
            break
        found = sorted(set(p for cycle in cycles for p in cycle),
                       key=lambda p: curves.format_word(p))
        if previous is not None:
            truncated = set(_prefix_of(p, previous[0]) for p in found)
            if len(found) == len(previous[1]) and \
                    truncated == set(previous[1]):
                power = int(np.lcm.reduce(
                    [len(set(c)) for c in previous[2]] or [1]))
                return CliquePrefixSet(side, tuple(previous[1]),
                                       previous[0], power,
                                       tuple(tuple(c) for c in previous[2]),
                                       LOXODROMIC_EVIDENCE)
        previous = (k, found, cycles)
        k *= 2
    return CliquePrefixSet(side, (), k, None, (), INCONCLUSIVE)


def clique_prefixes(rep, seeds, k=DEFAULT_STABILIZATION_DEPTH,
                    max_iter=DEFAULT_MAX_ITER, max_length=MAX_ORBIT_LENGTH):
    """Approximates the attractive and repulsive cliques of `rep`.

    Each seed is iterated forwards (and backwards with the inverse) until
    the `k`-beginnings of its orbit settle into a cycle. The depth starts
    at `k` and doubles until two consecutive depths give the same set.

    # Arguments
        rep: A `RewritingRep` with an inverse table.
        seeds: Iterable of simple loops.
        k: Initial stabilization depth.
        max_iter: Maximal number of iterates per seed.
        max_length: Iteration stops once a word gets longer than this.

    # Returns
        A pair of `CliquePrefixSet`s (attractive, repulsive); a side whose
        orbits do not stabilize has verdict `'inconclusive'`. `power` is
        the least `m` such that `rep^m` fixes every prefix of the side.

    # Raises
        ValueError: if a seed has a periodic orbit.
    """
    seeds = [curves.normalize(rep.atlas, s) for s in seeds]
    attractive = _side(rep, seeds, ATTRACTIVE, k, max_iter, max_length)
    repulsive = _side(inverse(rep), seeds, REPULSIVE, k, max_iter,
                      max_length)
    logger.info('%s: %d attractive, %d repulsive prefixes', rep.name,
                len(attractive.prefixes), len(repulsive.prefixes))
    return attractive, repulsive


def circular_order(atlas, words):
    """Words sorted along the circle by their boundary keys."""
    return sorted(words, key=lambda w: curves.boundary_key(atlas, w))


def alternation_witness(atlas, attractive, repulsive):
    """Labels of both prefix sets in circular order, or None on ties."""
    labelled = [(curves.boundary_key(atlas, p), ATTRACTIVE, p)
                for p in attractive.prefixes]
    labelled += [(curves.boundary_key(atlas, p), REPULSIVE, p)
                 for p in repulsive.prefixes]
    labelled.sort(key=lambda x: x[0])
    for (k1, _, _), (k2, _, _) in zip(labelled, labelled[1:]):
        if curves.compare_keys(k1, k2) == 0:
            return None
    return [(label, curves.format_word(p)) for _, label, p in labelled]


def _alternates(labels):
    return all(labels[i] != labels[(i + 1) % len(labels)]
               for i in range(len(labels)))


def _interval_flows(rep, attractive, repulsive, seeds, max_iter,
                    max_length):
    """Where each seed's orbit under `rep^m` ends up."""
    atlas = rep.atlas
    points = [(curves.boundary_key(atlas, p), p)
              for p in attractive.prefixes + repulsive.prefixes]
    points.sort(key=lambda x: x[0])
    k = attractive.depth
    m = attractive.power
    flows = []
    for seed in seeds:
        key = curves.boundary_key(atlas, seed)
        if any(curves.compare_keys(key, pk) == 0 for pk, _ in points):
            flows.append({'seed': curves.format_word(seed),
                          'ambiguous': True})
            continue
        after = 0
        while after < len(points) and \
                curves.compare_keys(points[after][0], key) < 0:
            after += 1
        ends = (points[(after - 1) % len(points)][1],
                points[after % len(points)][1])
        words = orbit(rep, seed, max_iter, max_length=max_length)
        limits = [_prefix_of(w, k) for i, w in enumerate(words)
                  if i % m == 0]
        limit = limits[-1] if limits else None
        flows.append({'seed': curves.format_word(seed), 'ambiguous': False,
                      'interval': [curves.format_word(p) for p in ends],
                      'limit': (curves.format_word(limit)
                                if limit is not None else None),
                      'to_endpoint': limit in ends and
                      limit in attractive.prefixes})
    return flows


def weight_bound(atlas):
    """Most prongs a pseudo-Anosov can have at `p` on a finite-type
    surface, or None for surfaces with frontier punctures.
    """
    labels = atlas.vertex_labels
    if any(entry.get('frontier') for entry in labels.values()):
        return None
    return 4 * atlas.genus + len(labels) - 3


def weight(rep, seeds, k=DEFAULT_STABILIZATION_DEPTH,
           max_iter=DEFAULT_MAX_ITER, max_length=MAX_ORBIT_LENGTH):
    """Weight of a loxodromic mapping class with a certificate.

    # Returns
        `(weight, certificate)`; the certificate holds the circular
        alternation witness, the power `m` fixing every prefix and the
        interval flows of the seeds under `rep^m`.

    # Raises
        ValueError: when the orbits do not stabilize, when attractive and
            repulsive counts differ, or for non-loxodromic reps.
    """
    attractive, repulsive = clique_prefixes(rep, seeds, k, max_iter,
                                            max_length)
    if INCONCLUSIVE in (attractive.verdict, repulsive.verdict):
        raise ValueError('Orbits of `%s` did not stabilize within %d '
                         'iterates; the depth is insufficient.'
                         % (rep.name, max_iter))
    if len(attractive.prefixes) != len(repulsive.prefixes):
        raise ValueError('`%s` has %d attractive but %d repulsive prefixes; '
                         'invalid rep or insufficient depth.'
                         % (rep.name, len(attractive.prefixes),
                            len(repulsive.prefixes)))
    w = len(attractive.prefixes)
    witness = alternation_witness(rep.atlas, attractive, repulsive)
    alternating = witness is not None and \
        _alternates([label for label, _ in witness])
    seeds = [curves.normalize(rep.atlas, s) for s in seeds]
    flows = _interval_flows(rep, attractive, repulsive, seeds, max_iter,
                            max_length)
    bound = weight_bound(rep.atlas)
    if bound is not None and w > bound:
        warnings.warn('Weight %d of `%s` exceeds the prong bound %d of a '
                      'finite-type surface.' % (w, rep.name, bound))
    certificate = {
        'weight': w,
        'depth': attractive.depth,
        'power': attractive.power,
        'attractive': [curves.format_word(p) for p in attractive.prefixes],
        'repulsive': [curves.format_word(p) for p in repulsive.prefixes],
        'alternation': witness,
        'alternating': alternating,
        'flows': flows,
        'morse_smale': all(f['ambiguous'] or f['to_endpoint']
                           for f in flows),
        'weight_bound': bound,
    }
    return w, certificate


def _wraps(atlas, words):
    """How often an orbit passes its starting point along the circle."""
    keys = [curves.boundary_key(atlas, w) for w in words]
    origin = keys[0]
    count = 0
    for lo, hi in zip(keys, keys[1:]):
        order = curves.compare_keys(lo, hi)
        if order == 0:
            continue
        above = curves.compare_keys(origin, lo) > 0
        below = curves.compare_keys(origin, hi) <= 0
        if (order < 0 and above and below) or \
                (order > 0 and (above or below)):
            count += 1
    return count


def rotation_number(rep, sample, iterations=8, cliques=None,
                    max_length=MAX_ORBIT_LENGTH,
                    max_denominator=MAX_DENOMINATOR):
    """Rotation number of the action on the circle of rays.

    Without cliques, each sampled word's orbit is followed and the number
    of times it passes its starting point is divided by the number of
    steps. With the attractive `CliquePrefixSet`, the exact value `s/w`
    is read off the cyclic shift of the `w` attractive prefixes.

    # Returns
        A dictionary with `estimate` (a `'p/q'` string), `exact`,
        `converged` and `per_sample`.
    """
    atlas = rep.atlas
    if cliques is not None and cliques.prefixes:
        ordered = circular_order(atlas, cliques.prefixes)
        position = dict((p, i) for i, p in enumerate(ordered))
        w = len(ordered)
        shifts = set()
        for cycle in cliques.cycles:
            for i in range(len(cycle)):
                a, b = cycle[i], cycle[(i + 1) % len(cycle)]
                shifts.add((position[b] - position[a]) % w)
        if len(shifts) != 1:
            return {'estimate': None, 'exact': False, 'converged': False,
                    'per_sample': [], 'shifts': sorted(shifts)}
        value = fractions.Fraction(shifts.pop(), w)
        return {'estimate': str(value), 'exact': True, 'converged': True,
                'per_sample': [], 'cycle_length': w}
    per_sample = []
    for w in sample:
        words = orbit(rep, w, iterations, max_length=max_length)
        steps = len(words) - 1
        if steps == 0:
            continue
        value = fractions.Fraction(_wraps(atlas, words), steps)
        per_sample.append(str(value.limit_denominator(max_denominator)))
    converged = len(set(per_sample)) == 1
    if not converged:
        warnings.warn('Rotation estimates of `%s` disagree across samples: '
                      '%s' % (rep.name, ', '.join(per_sample)))
    return {'estimate': per_sample[0] if converged else None,
            'exact': False, 'converged': converged,
            'per_sample': per_sample}


def a_level(w, cliques):
    """Largest `k` such that `w` `k`-begins like an attractive prefix."""
    best = 0
    for p in cliques.prefixes:
        if p.start != w.start:
            continue
        ours = curves.crossing_prefix(w, cliques.depth)
        k = 0
        while k < min(len(ours), len(p.crossings)) and \
                ours[k] == p.crossings[k]:
            k += 1
        best = max(best, k)
    return best


def alternating_labels(n):
    """`n` alternating labels `'+', '-', '+', ...`."""
    return ['+-'[i % 2] for i in range(n)]


def _check_alternating(labels, name):
    if len(labels) < 2 or len(labels) % 2 or len(set(labels)) != 2 or \
            not _alternates(labels):
        raise ValueError('`' + name + '` must alternate between two classes '
                         'in circular order, got ' + repr(list(labels)))


def alternation_obstruction(points, intervals):
    """Certifies that alternating points cannot land in fewer intervals.

    A circularly order-preserving map from `2 w_g` points alternating
    between two classes to `2 w_h` intervals alternating between the same
    classes needs `2 w_g` class changes while going around at most once,
    which is impossible when `w_g > w_h`. Besides that count, every weakly
    monotone assignment is searched.

    # Arguments
        points: Class labels of the points in circular order.
        intervals: Class labels of the intervals in circular order.

    # Returns
        A dictionary with `obstructed`, the counting bound and the number
        of class-respecting assignments found by the search.

    # Raises
        ValueError: on non-alternating input.
    """
    _check_alternating(points, 'points')
    _check_alternating(intervals, 'intervals')
    n, m = len(points), len(intervals)
    found = 0
    example = None
    for start in range(m):
        for offsets in itertools.combinations_with_replacement(range(m), n):
            if offsets[0] != 0:
                break
            targets = [(start + o) % m for o in offsets]
            if all(points[i] == intervals[targets[i]] for i in range(n)):
                found += 1
                if example is None:
                    example = targets
    return {'obstructed': found == 0, 'w_g': n // 2, 'w_h': m // 2,
            'changes_needed': n, 'changes_available': m,
            'counting': n > m, 'assignments': found,
            'example': example}


def _tokens_from_text(text, location):
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = text.split()
    return tuple(parse_token(t, '%s[%d]' % (location, i))
                 for i, t in enumerate(items))


def rep_to_config(rep):
    config = {'name': rep.name,
              'arc_images': dict((k, ' '.join(format_token(t) for t in v))
                                 for k, v in sorted(rep.arc_images.items())),
              'corner_map': [{'corner': list(c), 'image': list(image),
                              'tail': ' '.join(format_token(t)
                                               for t in tail)}
                             for c, (image, tail)
                             in sorted(rep.corner_map.items())],
              'fan_map': rep.fan_map}
    if rep.inverse is not None and rep.inverse is not rep:
        config['inverse'] = rep_to_config(RewritingRep(
            rep.atlas, rep.inverse.arc_images, rep.inverse.corner_map,
            name=rep.inverse.name))
    return config


def rep_from_config(config, atlas):
    """Reads a rep from its JSON form.

    # Raises
        ParseError: naming the offending arc id or corner.
    """
    arc_images = {}
    for arc_id, text in require(config, 'arc_images', 'rep').items():
        if arc_id not in atlas.arcs:
            raise ParseError('Unknown arc id', location='rep.arc_images',
                             token=arc_id)
        arc_images[arc_id] = _tokens_from_text(text,
                                               'rep.arc_images.' + arc_id)
    corner_map = {}
    for i, entry in enumerate(config.get('corner_map', [])):
        location = 'rep.corner_map[%d]' % i
        corner = tuple(require(entry, 'corner', location))
        image = tuple(require(entry, 'image', location))
        corner_map[corner] = (image, _tokens_from_text(
            entry.get('tail', ''), location + '.tail'))
    rep = RewritingRep(atlas, arc_images, corner_map,
                       name=config.get('name'))
    if 'inverse' in config:
        rep.inverse = rep_from_config(config['inverse'], atlas)
        rep.inverse.inverse = rep
    return rep


def outline_size(atlas):
    """Number of punctures of an outline sphere atlas.

    # Raises
        ValueError: if the atlas is not the outline atlas of a punctured
            sphere (`A = w0+ ... w<n-1>+`, `B = w0- w<n-1>- ... w1-`).
    """
    n = sum(1 for a in atlas.arcs.values() if a.kind == SEAM)
    expected_A = tuple(('w%d' % k, 1) for k in range(n))
    expected_B = (('w0', -1),) + tuple(('w%d' % k, -1)
                                       for k in range(n - 1, 0, -1))
    if n != len(atlas.arcs) or atlas.side_A != expected_A or \
            atlas.side_B != expected_B:
        raise ValueError('Half twists are built on the outline atlas of a '
                         'punctured sphere.')
    return n


def _half_twist_tables(n, i, sign):
    w = lambda k: 'w%d' % k
    B = lambda j: ('B', (1 - j) % n)
    if sign > 0:
        image = ((w(i - 1), 1), (w(i), -1), (w(i + 1), 1))
        tail_A, tail_B = ((w(i - 1), -1),), ((w(i + 1), 1),)
    else:
        image = ((w(i + 1), 1), (w(i), -1), (w(i - 1), 1))
        tail_A, tail_B = ((w(i + 1), -1),), ((w(i - 1), 1),)
    corner_map = {('A', i): (B(i + 1), tail_A),
                  ('A', i + 1): (B(i), tail_A),
                  B(i): (('A', i + 1), tail_B),
                  B(i + 1): (('A', i), tail_B)}
    return {w(i): image}, corner_map


def half_twist(atlas, i):
    """Half twist exchanging the punctures at both ends of arc `w<i>`.

    Defined on the outline atlas of a punctured sphere, where arc `w<k>`
    joins the `k`-th and `(k + 1)`-th puncture counted from `p`.

    # Arguments
        atlas: Outline atlas of a sphere with `n` punctures.
        i: Arc index, between 1 and `n - 2`.

    # Returns
        A `RewritingRep` with its inverse attached.
    """
    n = outline_size(atlas)
    if not 1 <= i <= n - 2:
        raise ValueError('`i` must lie between 1 and %d, got %d'
                         % (n - 2, i))
    forward = RewritingRep(atlas, *_half_twist_tables(n, i, 1),
                           name='t%d' % i)
    backward = RewritingRep(atlas, *_half_twist_tables(n, i, -1),
                            name='t%d^-1' % i)
    forward.inverse, backward.inverse = backward, forward
    return forward


def word_product(atlas, letters, name=None):
    """Composition of half twists given as signed indices.

    `[1, 1, -2]` is `t1 o t1 o t2^-1`: the last letter acts first.
    """
    result = identity_rep(atlas)
    for letter in reversed(letters):
        twist = half_twist(atlas, abs(letter))
        result = compose(twist if letter > 0 else twist.inverse, result)
    result.name = name or ' '.join(
        ('t%d' % x) if x > 0 else ('t%d^-1' % -x) for x in letters)
    return result


def twist_letters(first, last):
    """Half-twist word of the Dehn twist about the curve enclosing the
    punctures `first` to `last` (counted from `p`).

    The full twist of the consecutive punctures is
    `(t<first> ... t<last-1>)^(last - first + 1)`.
    """
    if last <= first:
        raise ValueError('The curve must enclose at least two punctures, '
                         'got %d to %d' % (first, last))
    return list(range(first, last)) * (last - first + 1)


def _inverse_letters(letters):
    return [-x for x in reversed(letters)]


def penner_letters(positive, negative):
    """Penner word `T_A o T_B^-1` for two multicurves of puncture ranges.

    # Arguments
        positive: `(first, last)` ranges of the curves twisted positively.
        negative: `(first, last)` ranges of the curves twisted negatively.
            Curves of one multicurve must be pairwise disjoint and the two
            multicurves must fill.
    """
    letters = []
    for first, last in positive:
        letters += twist_letters(first, last)
    for first, last in negative:
        letters += _inverse_letters(twist_letters(first, last))
    return letters


def chain_penner_letters(n):
    """Penner word of the chain of curves around punctures `i, i + 1` on
    the `n`-punctured sphere, odd links positive and even links negative.

    Every puncture but `p` sits in a bigon of the chain and `p` in a
    `2 (n - 3)`-gon, so the invariant foliations have `n - 3` prongs at
    `p`.
    """
    if n < 5:
        raise ValueError('The chain needs at least 5 punctures, got %d' % n)
    links = [(i, i + 1) for i in range(1, n - 1)]
    return penner_letters(links[0::2], links[1::2])


def chain_penner(atlas, name=None):
    """Loxodromic rep whose weight is the prong bound of the sphere."""
    n = outline_size(atlas)
    return word_product(atlas, chain_penner_letters(n),
                        name=name or 'chain-penner-%d' % n)


def _circular_signs(certificate):
    witness = certificate['alternation']
    if witness is None or not certificate['alternating']:
        raise ValueError('The prefixes of weight %d do not alternate in '
                         'circular order.' % certificate['weight'])
    return ['+' if label == ATTRACTIVE else '-' for label, _ in witness]


def distinct_weights_certificate(g, h, g_seeds, h_seeds,
                                 k=DEFAULT_STABILIZATION_DEPTH,
                                 max_iter=DEFAULT_MAX_ITER):
    """Certifies that two loxodromic reps have different weights.

    Both weights are computed with their alternation witnesses; the
    circular labels of the heavier rep are then shown not to fit into the
    alternating intervals of the lighter one.

    # Arguments
        g, h: `RewritingRep`s, possibly on different atlases.
        g_seeds, h_seeds: Seed loops for each rep.
        k: Initial stabilization depth.
        max_iter: Maximal number of iterates per seed.

    # Returns
        A dictionary with both weight certificates, the `obstruction`
        report and `passed`, set when the weights differ and the
        obstruction holds.

    # Raises
        ValueError: as `weight` does, or when prefixes do not alternate.
    """
    w_g, g_certificate = weight(g, g_seeds, k, max_iter)
    w_h, h_certificate = weight(h, h_seeds, k, max_iter)
    ordered = sorted([(w_g, g.name, g_certificate),
                      (w_h, h.name, h_certificate)],
                     key=lambda x: -x[0])
    points = _circular_signs(ordered[0][2])
    intervals = _circular_signs(ordered[1][2])
    obstruction = alternation_obstruction(points, intervals)
    passed = w_g != w_h and obstruction['obstructed']
    logger.info('weights %s=%d, %s=%d: %s', g.name, w_g, h.name, w_h,
                'obstructed' if passed else 'no certificate')
    return {'reps': [g.name, h.name], 'weights': [w_g, w_h],
            'heavier': ordered[0][1] if w_g != w_h else None,
            'certificates': [g_certificate, h_certificate],
            'obstruction': obstruction, 'passed': passed}
