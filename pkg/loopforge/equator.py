"""Equator arcs and the two-polygon atlas of a marked surface.

The seams of a pants complex chain up into proper arcs running between
punctures (and into closed curves, one per handle, which are set aside).
For a tree of pants those arcs follow the outline of the planar
thickening of the core tree, so they cut the surface of genus zero into
two polygons, `A` and `B`. Every handle contributes two more arcs, both
based at the end reached by combing the tree away from the root; the
resulting boundary words keep describing two disks.

Words are lists of signed sides `(arc_id, +1 | -1)`. A corner `(face, i)`
of a polygon sits at the start of side `face[i]`; its outgoing flank is
`face[i]` and its incoming flank is `face[i - 1]`.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import logging
import re

from . import surface_model
from .io_utils import ParseError
from .io_utils import require

logger = logging.getLogger(__name__)

FACES = ('A', 'B')
SEAM = 'seam'
ALPHA2 = 'alpha2'
ALPHA3 = 'alpha3'
ARC_KINDS = (SEAM, ALPHA2, ALPHA3)

_TOKEN_RE = re.compile(r'^([A-Za-z][\w.\']*)([+-])$')

Arc = collections.namedtuple(
    'Arc', ['id', 'tail', 'head', 'kind', 'provenance'])
FanRegion = collections.namedtuple(
    'FanRegion', ['index', 'face', 'corner', 'incoming', 'outgoing'])


def inv(token):
    """The same side read from the other polygon."""
    return (token[0], -token[1])


def format_token(token):
    return token[0] + ('+' if token[1] > 0 else '-')


def parse_token(text, location=None):
    match = _TOKEN_RE.match(text.strip())
    if match is None:
        raise ParseError('Malformed signed arc', location=location,
                         token=text)
    return (match.group(1), 1 if match.group(2) == '+' else -1)


class PolygonAtlas(object):
    """Equator arcs together with the boundary words of the two disks.

    # Arguments
        arcs: Iterable of `Arc` records.
        side_A: Cyclic sequence of signed sides bounding disk `A`.
        side_B: Cyclic sequence of signed sides bounding disk `B`.
        vertex_labels: Dictionary from puncture label to a dictionary with
            `frontier` (bool) and `annotation` entries.
        genus: Genus of the surface the atlas charts.
        marked: Label of the marked puncture.
        closed_curves: Seam cycles left out of the equator.
        name: Optional catalog name.
    """

    def __init__(self, arcs, side_A, side_B, vertex_labels, genus=0,
                 marked=surface_model.MARKED_PUNCTURE, closed_curves=(),
                 name=None):
        self.arcs = collections.OrderedDict((a.id, a) for a in arcs)
        self.faces = {'A': tuple(side_A), 'B': tuple(side_B)}
        self.vertex_labels = dict(vertex_labels)
        self.genus = genus
        self.marked = marked
        self.closed_curves = tuple(closed_curves)
        self.name = name
        self.position = {}
        for face in FACES:
            for i, token in enumerate(self.faces[face]):
                self.position[token] = (face, i)
        self.corner_fan = self._build_fan()
        self._fan_index = dict((region.corner, region.index)
                               for region in self.corner_fan)
        outline = [a.id for a in self.arcs.values() if a.kind == SEAM]
        self.parabolic_pairing = ((outline[0], outline[-1]) if outline
                                  else ())

    @property
    def side_A(self):
        return self.faces['A']

    @property
    def side_B(self):
        return self.faces['B']

    def token_at(self, corner):
        face, i = corner
        word = self.faces[face]
        return word[i % len(word)]

    def start_of(self, token):
        arc = self.arcs[token[0]]
        return arc.tail if token[1] > 0 else arc.head

    def end_of(self, token):
        arc = self.arcs[token[0]]
        return arc.head if token[1] > 0 else arc.tail

    def corner_vertex(self, corner):
        return self.start_of(self.token_at(corner))

    def outgoing(self, corner):
        return self.token_at(corner)

    def incoming(self, corner):
        face, i = corner
        return self.token_at((face, i - 1))

    def normal_corner(self, corner):
        face, i = corner
        return (face, i % len(self.faces[face]))

    def next_ccw(self, corner):
        """Next corner around the same puncture."""
        return self.position[inv(self.incoming(corner))]

    def prev_ccw(self, corner):
        face, j = self.position[inv(self.outgoing(corner))]
        return self.normal_corner((face, j + 1))

    def face_of(self, token):
        return self.position[token][0]

    def fan_index(self, corner):
        """Index of a corner at the marked puncture, or None."""
        return self._fan_index.get(self.normal_corner(corner))

    def fan_corner(self, index):
        return self.corner_fan[index % len(self.corner_fan)].corner

    def corners_at(self, label):
        return [(face, i) for face in FACES
                for i in range(len(self.faces[face]))
                if self.corner_vertex((face, i)) == label]

    def _build_fan(self):
        fan = []
        try:
            starts = [i for i, token in enumerate(self.faces['A'])
                      if self.start_of(token) == self.marked]
            if not starts:
                return ()
            corner = ('A', starts[0])
            seen = set()
            while corner not in seen:
                seen.add(corner)
                fan.append(FanRegion(len(fan), corner[0], corner,
                                     self.incoming(corner),
                                     self.outgoing(corner)))
                corner = self.next_ccw(corner)
        except KeyError:
            # Malformed words; `verify_two_disks` reports the details.
            return ()
        return tuple(fan)

    def __eq__(self, other):
        return (isinstance(other, PolygonAtlas) and
                atlas_to_config(self) == atlas_to_config(other))

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<PolygonAtlas %s: %d arcs, %d fan regions>' % (
            self.name or '', len(self.arcs), len(self.corner_fan))


def _trace_seam_chains(pc):
    """Splits the seams into puncture-to-puncture chains and cycles."""
    pants = pc.pants

    def successor(seam):
        index, k = seam
        cuff = pants[index].cuffs[(k + 1) % 3]
        if cuff.kind != surface_model.GLUED:
            return None
        return cuff.partner

    chains = []
    visited = set()
    for p in pants:
        for k, cuff in enumerate(p.cuffs):
            if cuff.kind == surface_model.GLUED:
                continue
            chain = [(p.index, k)]
            while True:
                visited.add(chain[-1])
                nxt = successor(chain[-1])
                if nxt is None:
                    break
                chain.append(nxt)
            index, k_last = chain[-1]
            end = pants[index].cuffs[(k_last + 1) % 3].end
            chains.append((cuff.end, end, chain))
    cycles = []
    for p in pants:
        for k in range(3):
            if (p.index, k) in visited:
                continue
            cycle = [(p.index, k)]
            visited.add(cycle[0])
            nxt = successor(cycle[0])
            while nxt != cycle[0]:
                cycle.append(nxt)
                visited.add(nxt)
                nxt = successor(nxt)
            cycles.append(tuple(cycle))
    return chains, cycles


def _combing_target(tree, vertex):
    """The cusp or stub reached from `vertex` along least-index children."""
    vertices = tree.vertices
    v = vertices[vertex]
    while v.children:
        v = vertices[v.children[0]]
    if v.end is not None:
        return v.end
    # Stuck on a marked leaf: fall back to the nearest open end.
    seen = set([vertex])
    queue = collections.deque([vertex])
    while queue:
        u = queue.popleft()
        for w in surface_model.neighbors(tree, u):
            if w in seen:
                continue
            if vertices[w].end is not None:
                return vertices[w].end
            seen.add(w)
            queue.append(w)
    raise ValueError('Marked vertex %d reaches no puncture.' % vertex)


def build_equator(pc, name=None):
    """Builds the polygon atlas of a pants complex.

    # Arguments
        pc: A `PantsComplex` from `surface_model.expand_to_pants`.
        name: Optional catalog name kept on the atlas.

    # Returns
        A `PolygonAtlas`.

    # Raises
        ValueError: for closed surfaces (no puncture to anchor arcs) or
            if the seam arcs do not close up into a single outline.
    """
    tree = pc.tree
    labels = {}
    for v in tree.vertices:
        if v.end is not None:
            labels[v.end] = {'frontier': v.frontier,
                             'annotation': v.annotation}
    if not labels:
        raise ValueError('Closed surfaces have no equator: there is no '
                         'puncture for the arcs to end at.')
    chains, cycles = _trace_seam_chains(pc)
    by_start = dict((start, (end, chain)) for start, end, chain in chains)
    marked = surface_model.MARKED_PUNCTURE
    if marked not in by_start:
        raise ValueError('The marked puncture `p` is missing from the '
                         'pants complex.')
    outline = [marked]
    arcs = []
    while True:
        end, chain = by_start[outline[-1]]
        arcs.append(Arc('w%d' % len(arcs), outline[-1], end, SEAM,
                        tuple(chain)))
        if end == marked:
            break
        if len(arcs) > len(chains):
            break
        outline.append(end)
    if len(arcs) != len(chains) or len(set(outline)) != len(outline):
        raise ValueError('Seam arcs do not form a single outline cycle; '
                         'got %d arcs for %d punctures.'
                         % (len(arcs), len(chains)))
    n = len(arcs)
    side_A = [(a.id, 1) for a in arcs]
    side_B = [('w0', -1)] + [('w%d' % k, -1) for k in range(n - 1, 0, -1)]
    for m in [v.index for v in tree.vertices if v.marked]:
        target = _combing_target(tree, m)
        k = outline.index(target)
        x, y = 'a2.%d' % m, 'a3.%d' % m
        arcs.append(Arc(x, target, target, ALPHA2, (m,)))
        arcs.append(Arc(y, target, target, ALPHA3, (m,)))
        i = side_A.index(('w%d' % k, 1))
        side_A[i:i] = [(x, 1), (y, -1)]
        i = side_B.index(('w%d' % ((k - 1) % n), -1))
        side_B[i:i] = [(x, -1), (y, 1)]
    atlas = PolygonAtlas(arcs, side_A, side_B, labels,
                         genus=sum(1 for v in tree.vertices if v.marked),
                         closed_curves=cycles, name=name)
    logger.debug('equator: %d arcs, %d closed curves set aside',
                 len(atlas.arcs), len(cycles))
    return atlas


def atlas_from_spec(spec, depth=surface_model.DEFAULT_DEPTH, name=None):
    """Shortcut: end spec to core tree to pants to atlas."""
    tree = surface_model.build_core_tree(spec, depth)
    return build_equator(surface_model.expand_to_pants(tree), name=name)


def trace_faces(atlas):
    """Face cycles of the ribbon graph given by the boundary words.

    Each side is followed by the next side of its own word; the cycles of
    that successor map are the faces.
    """
    successor = {}
    for face in FACES:
        word = atlas.faces[face]
        for i, token in enumerate(word):
            successor[token] = word[(i + 1) % len(word)]
    faces = []
    seen = set()
    for face in FACES:
        for token in atlas.faces[face]:
            if token in seen:
                continue
            cycle = []
            while token not in seen:
                seen.add(token)
                cycle.append(token)
                token = successor[token]
            faces.append(tuple(cycle))
    return faces


def verify_two_disks(atlas):
    """Checks that the boundary words glue up into the charted surface.

    # Returns
        A certificate dictionary. `passed` tells whether every check held;
        on failure `witness` names the first failing check together with
        the offending face, corner or arc.
    """
    certificate = {'passed': False, 'faces': None, 'vertices': None,
                   'euler_characteristic': None, 'genus': atlas.genus,
                   'witness': None}

    def fail(check, **detail):
        detail['check'] = check
        certificate['witness'] = detail
        return certificate

    counts = collections.Counter()
    for face in FACES:
        for token in atlas.faces[face]:
            if token[0] not in atlas.arcs:
                return fail('unknown-arc', face=face, arc=token[0])
            counts[token] += 1
    for arc_id in atlas.arcs:
        if counts[(arc_id, 1)] != 1 or counts[(arc_id, -1)] != 1:
            return fail('arc-pairing', arc=arc_id,
                        occurrences=[counts[(arc_id, 1)],
                                     counts[(arc_id, -1)]])
    faces = trace_faces(atlas)
    certificate['faces'] = [[format_token(t) for t in f] for f in faces]
    if len(faces) != 2:
        return fail('face-count', faces=len(faces))
    for face in FACES:
        word = atlas.faces[face]
        if len(word) < 3:
            return fail('polygon-sides', face=face, sides=len(word))
        for i in range(len(word)):
            if atlas.end_of(word[i - 1]) != atlas.start_of(word[i]):
                return fail('boundary-continuity', face=face, corner=i,
                            incoming=format_token(word[i - 1]),
                            outgoing=format_token(word[i]))
    links = {}
    seen = set()
    for face in FACES:
        for i in range(len(atlas.faces[face])):
            corner = (face, i)
            if corner in seen:
                continue
            orbit = []
            while corner not in seen:
                seen.add(corner)
                orbit.append(corner)
                corner = atlas.next_ccw(corner)
            label = atlas.corner_vertex(orbit[0])
            if label in links:
                return fail('vertex-link', vertex=label,
                            corner=list(orbit[0]))
            links[label] = len(orbit)
    certificate['vertices'] = links
    euler = len(links) - len(atlas.arcs) + 2
    certificate['euler_characteristic'] = euler
    if euler != 2 - 2 * atlas.genus:
        return fail('euler-characteristic', expected=2 - 2 * atlas.genus,
                    found=euler)
    if not atlas.corner_fan:
        return fail('corner-fan', vertex=atlas.marked)
    certificate['passed'] = True
    return certificate


def atlas_to_config(atlas):
    return {
        'name': atlas.name,
        'genus': atlas.genus,
        'marked': atlas.marked,
        'arcs': [{'id': a.id, 'tail': a.tail, 'head': a.head,
                  'kind': a.kind, 'provenance': [list(p) if isinstance(
                      p, tuple) else p for p in a.provenance]}
                 for a in atlas.arcs.values()],
        'side_A': [format_token(t) for t in atlas.side_A],
        'side_B': [format_token(t) for t in atlas.side_B],
        'vertex_labels': atlas.vertex_labels,
        'corner_fan': [{'index': r.index, 'face': r.face,
                        'corner': list(r.corner),
                        'incoming': format_token(r.incoming),
                        'outgoing': format_token(r.outgoing)}
                       for r in atlas.corner_fan],
        'parabolic_pairing': list(atlas.parabolic_pairing),
        'closed_curves': [[list(s) for s in c] for c in atlas.closed_curves],
    }


def atlas_from_config(config):
    """Rebuilds an atlas from its JSON dump.

    # Raises
        ParseError: naming the offending field and arc id.
    """
    arcs = []
    for i, entry in enumerate(require(config, 'arcs', 'atlas')):
        location = 'atlas.arcs[%d]' % i
        kind = entry.get('kind', SEAM)
        if kind not in ARC_KINDS:
            raise ParseError('Unknown arc kind', location=location,
                             token=kind)
        arcs.append(Arc(require(entry, 'id', location),
                        require(entry, 'tail', location),
                        require(entry, 'head', location), kind,
                        tuple(tuple(p) if isinstance(p, list) else p
                              for p in entry.get('provenance', ()))))
    known = set(a.id for a in arcs)
    sides = {}
    for face in FACES:
        key = 'side_' + face
        tokens = []
        for i, text in enumerate(require(config, key, 'atlas')):
            location = 'atlas.%s[%d]' % (key, i)
            token = parse_token(text, location)
            if token[0] not in known:
                raise ParseError('Unknown arc id', location=location,
                                 token=token[0])
            tokens.append(token)
        sides[face] = tokens
    labels = config.get('vertex_labels')
    if labels is None:
        labels = dict((label, {'frontier': False, 'annotation': None})
                      for a in arcs for label in (a.tail, a.head))
    atlas = PolygonAtlas(arcs, sides['A'], sides['B'], labels,
                         genus=config.get('genus', 0),
                         marked=config.get('marked',
                                           surface_model.MARKED_PUNCTURE),
                         closed_curves=[tuple(tuple(s) for s in c) for c in
                                        config.get('closed_curves', [])],
                         name=config.get('name'))
    certificate = verify_two_disks(atlas)
    if not certificate['passed']:
        witness = certificate['witness']
        raise ParseError('Atlas does not describe two disks (' +
                         witness['check'] + ')', location='atlas',
                         token=witness.get('arc'))
    return atlas
