"""Essential embeddings between marked surfaces.

An embedding opens some punctures of the source into boundary curves
that bound disks with several punctures in the target. Words are pushed
forward by translating every crossing; a target word is projected back
by following it up to its first meeting with a boundary curve, going once
around that curve and returning along the same way.

# Reference
- Masur, Minsky. Geometry of the complex of curves II: hierarchical
  structure (subsurface projections).
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import copy
import logging

from . import curves
from . import dynamics
from . import graphs
from .equator import FACES
from .equator import SEAM
from .equator import atlas_from_config
from .equator import atlas_to_config
from .equator import format_token
from .equator import inv
from .equator import parse_token
from .io_utils import ParseError
from .io_utils import require

logger = logging.getLogger(__name__)

LIPSCHITZ_CONSTANT = 3
SLICE_CAVEAT = ('distances are slice distances; a violation between '
                'uncertified distances may be an artifact of the bounds')


class EssentialEmbedding(object):
    """An embedding of a marked surface into another one.

    # Arguments
        source: Source `PolygonAtlas`.
        target: Target `PolygonAtlas`.
        arc_translation: Dictionary from source arc id to the tuple of
            target signed sides it becomes.
        corner_translation: Dictionary from source corner to target corner.
        puncture_map: Dictionary from source puncture label to target
            label, or None for opened punctures.
        gamma: Dictionary from opened source label to the cyclic tuple of
            target signed sides crossed by its boundary curve.
        disk_corners: Dictionary from every target corner inside an opened
            disk to the source corner of the opened puncture in that face.
        name: Optional label.
    """

    def __init__(self, source, target, arc_translation, corner_translation,
                 puncture_map, gamma=None, disk_corners=None, name=None):
        self.source = source
        self.target = target
        self.arc_translation = dict((k, tuple(v)) for k, v in
                                    arc_translation.items())
        self.corner_translation = dict(corner_translation)
        self.puncture_map = dict(puncture_map)
        self.gamma = dict((k, tuple(v)) for k, v in (gamma or {}).items())
        self.disk_corners = dict(disk_corners or {})
        self.name = name
        self._back = {}
        for arc_id, segment in self.arc_translation.items():
            self._back[segment] = (arc_id, 1)
            self._back[tuple(inv(t) for t in reversed(segment))] = \
                (arc_id, -1)
        self._target_corners = dict((v, k) for k, v in
                                    self.corner_translation.items())
        used = set(t[0] for segment in self.arc_translation.values()
                   for t in segment)
        self.opened_arcs = set(a for a in target.arcs if a not in used)

    def __repr__(self):
        return '<EssentialEmbedding %s>' % (self.name or '')


def identity_embedding(atlas):
    arcs = dict((a, ((a, 1),)) for a in atlas.arcs)
    corners = dict(((face, i), (face, i)) for face in atlas.faces
                   for i in range(len(atlas.faces[face])))
    punctures = dict((label, label) for label in atlas.vertex_labels)
    return EssentialEmbedding(atlas, atlas, arcs, corners, punctures,
                              name='identity')


def sphere_embedding(source, target, k, name=None):
    """Opens puncture number `k` of an outline sphere atlas into a disk
    holding two punctures of a sphere with one more puncture.

    # Arguments
        source: Outline atlas of a sphere with `n` punctures.
        target: Outline atlas of a sphere with `n + 1` punctures.
        k: Index of the opened puncture (1 to `n - 1`, counted from `p`).
    """
    n = dynamics.outline_size(source)
    if dynamics.outline_size(target) != n + 1:
        raise ValueError('The target needs exactly one more puncture than '
                         'the source.')
    if not 1 <= k <= n - 1:
        raise ValueError('`k` must lie between 1 and %d, got %d'
                         % (n - 1, k))

    def shift(j):
        return j if j < k else j + 1

    def b_corner(j, size):
        return ('B', (1 - j) % size)

    arcs = dict(('w%d' % j, (('w%d' % shift(j), 1),)) for j in range(n))
    corners, disk = {}, {}
    labels = dict((source.corner_vertex(('A', j)), j) for j in range(n))
    punctures = {}
    for label, j in labels.items():
        if j == k:
            punctures[label] = None
            for inside in (k, k + 1):
                disk[('A', inside)] = ('A', k)
                disk[b_corner(inside, n + 1)] = b_corner(k, n)
            continue
        punctures[label] = target.corner_vertex(('A', shift(j)))
        corners[('A', j)] = ('A', shift(j))
        corners[b_corner(j, n)] = b_corner(shift(j), n + 1)
    opened = source.corner_vertex(('A', k))
    gamma = {opened: (('w%d' % (k - 1), 1), ('w%d' % (k + 1), -1))}
    return EssentialEmbedding(source, target, arcs, corners, punctures,
                              gamma, disk, name=name)


def handle_embedding(source, target, name=None):
    """Opens the puncture carrying the handle of a genus one target with
    as many punctures as the source.

    The boundary curve of the opened puncture crosses the two outline
    arcs next to it and cuts off a one-holed torus around the puncture
    where both handle arcs are based.

    # Arguments
        source: Outline atlas of a sphere with `n` punctures.
        target: Atlas of a torus with `n` punctures.
    """
    n = dynamics.outline_size(source)
    seams = [a for a in target.arcs.values() if a.kind == SEAM]
    handle = [a for a in target.arcs.values() if a.kind != SEAM]
    if target.genus != 1 or len(seams) != n or not handle:
        raise ValueError('The target must be a torus with %d punctures.'
                         % n)
    outline = [target.start_of(('w%d' % j, 1)) for j in range(n)]
    k = outline.index(handle[0].tail)
    if k == 0:
        raise ValueError('The handle of `%s` is based at the marked '
                         'puncture.' % target.name)
    opened = source.corner_vertex(('A', k))
    arcs = dict(('w%d' % j, (('w%d' % j, 1),)) for j in range(n))
    corners = {}
    for face in FACES:
        for i, token in enumerate(source.faces[face]):
            if source.corner_vertex((face, i)) != opened:
                corners[(face, i)] = target.position[token]
    inner = {'A': source.position[('w%d' % k, 1)],
             'B': source.position[('w%d' % (k - 1), -1)]}
    disk = dict((corner, inner[corner[0]])
                for corner in target.corners_at(outline[k]))
    punctures = dict((source.corner_vertex(('A', j)),
                      None if j == k else outline[j]) for j in range(n))
    gamma = {opened: (('w%d' % (k - 1), 1), ('w%d' % k, -1))}
    return EssentialEmbedding(source, target, arcs, corners, punctures,
                              gamma, disk, name=name)


def corrupt_gamma(e):
    """A copy of `e` whose first boundary curve circles a single target
    puncture inside the opened disk instead of the whole disk.
    """
    broken = copy.copy(e)
    broken.gamma = dict(e.gamma)
    label = sorted(broken.gamma)[0]
    first = broken.gamma[label][0]
    inside = sorted(e.opened_arcs)[0]
    broken.gamma[label] = (first, (inside, -1))
    broken.name = '%s-corrupted' % (e.name or 'embedding')
    return broken


def _translate(e, tokens):
    out = []
    for arc_id, sign in tokens:
        segment = e.arc_translation[arc_id]
        if sign > 0:
            out.extend(segment)
        else:
            out.extend(inv(t) for t in reversed(segment))
    return out


def _translate_back(e, tokens):
    out = []
    i = 0
    longest = max([len(s) for s in e._back] or [1])
    while i < len(tokens):
        for size in range(min(longest, len(tokens) - i), 0, -1):
            piece = tuple(tokens[i:i + size])
            if piece in e._back:
                out.append(e._back[piece])
                i += size
                break
        else:
            raise ValueError('Crossing `%s` of the target word lies outside '
                             'the image of the source.'
                             % (tokens[i][0],))
    return out


def check_embedding(e):
    """Checks that every boundary curve is essential and that arcs are
    translated injectively.

    # Returns
        A certificate dictionary with `passed` and `witness`.
    """
    target = e.target
    peripheral = set()
    for face in target.faces:
        for i in range(len(target.faces[face])):
            tokens = curves.around_vertex(target, (face, i))
            for word in (tokens, [inv(t) for t in reversed(tokens)]):
                for r in range(len(word)):
                    peripheral.add(tuple(word[r:] + word[:r]))
    for label, tokens in sorted(e.gamma.items()):
        reduced = curves.free_reduce(tokens)
        if len(reduced) < 2 or tuple(reduced) in peripheral:
            return {'passed': False, 'witness': {
                'check': 'gamma-essential', 'puncture': label,
                'gamma': [format_token(t) for t in tokens]}}
    images = list(e.arc_translation.values())
    if len(set(images)) != len(images):
        return {'passed': False, 'witness': {'check': 'arc-translation'}}
    return {'passed': True, 'witness': None}


def _target_index(e, source_index):
    corner = e.corner_translation[e.source.fan_corner(source_index)]
    return e.target.fan_index(corner)


def push_forward(e, w):
    """Image of a source word in the target.

    # Raises
        ValueError: for short rays ending at an opened puncture.
    """
    source, target = e.source, e.target
    start = _target_index(e, w.start)
    tokens = _translate(e, w.crossings)
    kind = w.end.kind
    if kind == curves.LOOP:
        image = curves.loop(start, tokens, _target_index(e, w.end.value))
    elif kind == curves.RAY:
        corner = source.normal_corner(w.end.value)
        if corner not in e.corner_translation:
            raise ValueError('`%s` ends at an opened puncture.'
                             % curves.format_word(w))
        image = curves.ray(start, tokens, e.corner_translation[corner])
    elif kind == curves.PERIODIC:
        image = curves.periodic(start, tokens, _translate(e, w.end.value))
    else:
        image = curves.prefix(start, tokens)
    return curves.normalize(target, image)


def _source_index(e, target_index):
    corner = e.target.fan_corner(target_index)
    if corner not in e._target_corners:
        raise ValueError('Fan region R%d of the target has no source '
                         'counterpart.' % target_index)
    return e.source.fan_index(e._target_corners[corner])


def _gamma_loops(e, face):
    """Each boundary curve, read once around from `face`, both ways."""
    loops = []
    for label in sorted(e.gamma):
        tokens = list(e.gamma[label])
        for word in (tokens, [inv(t) for t in reversed(tokens)]):
            for r in range(len(word)):
                rotated = word[r:] + word[:r]
                if e.target.face_of(rotated[0]) == face:
                    loops.append(rotated)
    return loops


def project(e, w):
    """Projection of a target loop or long ray to the source.

    Words avoiding the opened disks are read back through the arc
    translation. Otherwise the word is followed up to its first meeting
    with a boundary curve, goes once around that curve and comes back;
    among the simple results (over both directions and the admissible
    meeting points) the shortest, then the first in text order, wins.

    # Raises
        ValueError: for short rays, or when the surgery leaves the image of
            the source.
    """
    source, target = e.source, e.target
    w = curves.normalize(target, w)
    if w.end.kind == curves.RAY:
        raise ValueError('Short rays are not projected: `%s`'
                         % curves.format_word(w))
    start = _source_index(e, w.start)
    if w.end.kind == curves.PERIODIC:
        crossings = curves.crossing_prefix(
            w, len(w.crossings) + 2 * len(w.end.value))
    else:
        crossings = w.crossings
    hits = [i for i, t in enumerate(crossings) if t[0] in e.opened_arcs]
    if not hits:
        back = _translate_back(e, w.crossings)
        kind = w.end.kind
        if kind == curves.LOOP:
            word = curves.loop(start, back, _source_index(e, w.end.value))
        elif kind == curves.PERIODIC:
            word = curves.periodic(start, back,
                                   _translate_back(e, w.end.value))
        else:
            word = curves.prefix(start, back)
        return curves.normalize(source, word)
    first = hits[0]
    boundary_arcs = set(t[0] for tokens in e.gamma.values()
                        for t in tokens)
    earliest = first
    while earliest > 0 and crossings[earliest - 1][0] in boundary_arcs:
        earliest -= 1
    candidates = []
    failure = None
    for i in range(earliest, first + 1):
        stem = list(crossings[:i])
        face = (target.face_of(inv(stem[-1])) if stem else
                target.fan_corner(w.start)[0])
        for around in _gamma_loops(e, face):
            tokens = stem + around + [inv(t) for t in reversed(stem)]
            try:
                back = _translate_back(e, tokens)
            except ValueError as error:
                failure = error
                continue
            word = curves.normalize(source, curves.loop(start, back, start))
            if curves.is_simple(source, word):
                candidates.append(word)
    if not candidates:
        raise ValueError('The projection of `%s` leaves the source%s'
                         % (curves.format_word(w),
                            ': ' + str(failure) if failure else '.'))
    return min(candidates, key=lambda x: (curves.length(x),
                                          curves.format_word(x)))


def _index(graph_slice, w):
    try:
        return graphs.locate(graph_slice, w)
    except ValueError:
        return None


def verify_qi(e, source_slice, target_slice):
    """Checks the embedding contracts on every pair of two slices.

    - `project(push_forward(a)) == a` for source vertices,
    - `d_t(a', b') <= d_s(a, b) <= 3 d_t(a', b')` for pushed pairs,
    - `d_s(project(x), project(y)) <= 3 d_t(x, y)` for target pairs.

    # Returns
        A report with the pair counts, the largest distance ratio and the
        list of `counterexamples`; `passed` is set when there is none.
    """
    atlas = e.source
    report = {'embedding': e.name, 'source_bound': source_slice.bound,
              'target_bound': target_slice.bound, 'pairs': 0,
              'lipschitz_pairs': 0, 'skipped': 0, 'max_ratio': None,
              'counterexamples': [], 'caveat': SLICE_CAVEAT}
    bad = report['counterexamples']
    certificate = check_embedding(e)
    if not certificate['passed']:
        bad.append(certificate['witness'])
    pushed = []
    for a in source_slice.vertices:
        if a.end.kind == curves.RAY:
            try:
                pushed.append(_index(target_slice, push_forward(e, a)))
            except ValueError:
                # Rays to opened punctures have no image.
                pushed.append(None)
            continue
        try:
            image = push_forward(e, a)
            back = project(e, image)
        except ValueError as error:
            bad.append({'check': 'push-forward', 'word':
                        curves.format_word(a), 'message': str(error)})
            pushed.append(None)
            continue
        if curves.canonical_loop(atlas, back) != \
                curves.canonical_loop(atlas, a):
            bad.append({'check': 'retraction',
                        'word': curves.format_word(a),
                        'back': curves.format_word(back)})
        pushed.append(_index(target_slice, image))
    ratios = []
    size = len(source_slice)
    for i in range(size):
        for j in range(i + 1, size):
            if pushed[i] is None or pushed[j] is None:
                report['skipped'] += 1
                continue
            d_s = source_slice.bfs(i).get(j)
            d_t = target_slice.bfs(pushed[i]).get(pushed[j])
            if d_s is None or d_t is None:
                report['skipped'] += 1
                continue
            report['pairs'] += 1
            if d_t > 0:
                ratios.append(d_s / d_t)
            if not d_t <= d_s <= LIPSCHITZ_CONSTANT * d_t:
                bad.append({'check': 'sandwich',
                            'words': [curves.format_word(
                                source_slice.vertices[x]) for x in (i, j)],
                            'source_distance': d_s,
                            'target_distance': d_t,
                            'certified': None not in (
                                graphs.certified_distance(source_slice,
                                                          i, j),
                                graphs.certified_distance(
                                    target_slice, pushed[i], pushed[j]))})
    projected = []
    for x in target_slice.vertices:
        if x.end.kind == curves.RAY:
            projected.append(None)
            continue
        try:
            projected.append(_index(source_slice, project(e, x)))
        except ValueError as error:
            bad.append({'check': 'projection',
                        'word': curves.format_word(x),
                        'message': str(error)})
            projected.append(None)
    size = len(target_slice)
    for x in range(size):
        for y in range(x + 1, size):
            if projected[x] is None or projected[y] is None:
                report['skipped'] += 1
                continue
            d_t = target_slice.bfs(x).get(y)
            d_s = source_slice.bfs(projected[x]).get(projected[y])
            if d_t is None or d_s is None:
                report['skipped'] += 1
                continue
            report['lipschitz_pairs'] += 1
            if d_s > LIPSCHITZ_CONSTANT * d_t:
                bad.append({'check': 'lipschitz',
                            'words': [curves.format_word(
                                target_slice.vertices[z]) for z in (x, y)],
                            'source_distance': d_s,
                            'target_distance': d_t})
    if ratios:
        report['max_ratio'] = max(ratios)
    report['passed'] = not bad
    logger.info('verify_qi %s: %d pairs, %d Lipschitz pairs, %d '
                'counterexamples', e.name, report['pairs'],
                report['lipschitz_pairs'], len(bad))
    return report


def _transport_tables(e, rep):
    arc_images = {}
    for arc_id, segment in e.arc_translation.items():
        if len(segment) != 1:
            raise ValueError('Only arcs translated to a single target arc '
                             'can be transported, got `%s`' % arc_id)
        target_arc, sign = segment[0]
        arc_images[target_arc] = tuple(_translate(
            e, rep.image((arc_id, sign))))
    corner_map = {}
    for corner, image in e.corner_translation.items():
        source_image, tail = rep.corner_image(corner)
        corner_map[image] = (e.corner_translation[source_image],
                             tuple(_translate(e, tail)))
    for inside, corner in e.disk_corners.items():
        _, tail = rep.corner_image(corner)
        corner_map[inside] = (inside, tuple(_translate(e, tail)))
    return arc_images, corner_map


def transport_dynamics(e, rep):
    """Extends a source mapping class by the identity on opened disks.

    # Raises
        ValueError: if `rep` moves a corner of an opened puncture.
    """
    if rep.atlas is not e.source and rep.atlas != e.source:
        raise ValueError('`rep` does not act on the source of `%s`'
                         % e.name)
    for corner in set(e.disk_corners.values()):
        if rep.corner_image(corner)[0] != e.source.normal_corner(corner):
            raise ValueError('`%s` does not fix the boundary data at corner '
                             '%s' % (rep.name, corner))
    name = '%s@%s' % (rep.name, e.name)
    extended = dynamics.RewritingRep(e.target, *_transport_tables(e, rep),
                                     name=name)
    if rep.inverse is not None:
        extended.inverse = dynamics.RewritingRep(
            e.target, *_transport_tables(e, rep.inverse),
            inverse=extended, name='(%s)^-1' % name)
    return extended


def _format_tokens(tokens):
    return ' '.join(format_token(t) for t in tokens)


def _parse_tokens(text, location):
    return tuple(parse_token(t, '%s[%d]' % (location, i))
                 for i, t in enumerate(text.split()))


def _corner(value, location):
    if not isinstance(value, (list, tuple)) or len(value) != 2 or \
            value[0] not in FACES or not isinstance(value[1], int):
        raise ParseError('Expected a corner `[face, index]`',
                         location=location, token=value)
    return (value[0], value[1])


def embedding_to_config(e):
    return {
        'name': e.name,
        'source': atlas_to_config(e.source),
        'target': atlas_to_config(e.target),
        'arc_translation': dict(
            (k, _format_tokens(v))
            for k, v in sorted(e.arc_translation.items())),
        'corner_translation': [
            {'corner': list(c), 'image': list(image)}
            for c, image in sorted(e.corner_translation.items())],
        'puncture_map': dict(sorted(e.puncture_map.items())),
        'gamma': dict((k, _format_tokens(v))
                      for k, v in sorted(e.gamma.items())),
        'disk_corners': [
            {'corner': list(c), 'source': list(source)}
            for c, source in sorted(e.disk_corners.items())],
    }


def embedding_from_config(config):
    """Parses the JSON form written by `embedding_to_config`.

    # Raises
        ParseError: naming the offending field or arc id.
    """
    source = atlas_from_config(require(config, 'source', 'embedding'))
    target = atlas_from_config(require(config, 'target', 'embedding'))
    arcs = {}
    for arc_id, text in require(config, 'arc_translation',
                                'embedding').items():
        location = 'embedding.arc_translation.' + arc_id
        if arc_id not in source.arcs:
            raise ParseError('Unknown source arc', location=location,
                             token=arc_id)
        tokens = _parse_tokens(text, location)
        for t in tokens:
            if t[0] not in target.arcs:
                raise ParseError('Unknown target arc', location=location,
                                 token=t[0])
        arcs[arc_id] = tokens
    corners = {}
    for i, entry in enumerate(require(config, 'corner_translation',
                                      'embedding')):
        location = 'embedding.corner_translation[%d]' % i
        corners[_corner(require(entry, 'corner', location), location)] = \
            _corner(require(entry, 'image', location), location)
    disk = {}
    for i, entry in enumerate(config.get('disk_corners', [])):
        location = 'embedding.disk_corners[%d]' % i
        disk[_corner(require(entry, 'corner', location), location)] = \
            _corner(require(entry, 'source', location), location)
    gamma = dict((label, _parse_tokens(text, 'embedding.gamma.' + label))
                 for label, text in config.get('gamma', {}).items())
    return EssentialEmbedding(source, target, arcs, corners,
                              require(config, 'puncture_map', 'embedding'),
                              gamma, disk, name=config.get('name'))
