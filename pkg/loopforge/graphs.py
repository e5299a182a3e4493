"""Finite slices of the loop graph and of the ray graphs.

A slice keeps every normalized simple word of one kind with at most
`bound` crossings. Two vertices are adjacent when the words are disjoint
away from the marked puncture. Adjacency is computed lazily and memoized;
distances come from breadth-first search over that implicit graph. Since
a slice misses every longer word, its distances only bound the distances
of the full graph from above.

Kinds:

- `'loops'`: the loop graph.
- `'short_rays'`: rays ending at another puncture.
- `'rays_and_loops'`: loops together with short rays.
- `'completed'`: loops, short rays and eventually periodic long rays.

# Reference
- Hensel, Przytycki, Webb. 1-slim triangles and uniform hyperbolicity
  for arc graphs and curve graphs.
- Gromov. Hyperbolic groups (four point condition).
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import logging
import os
import warnings

import h5py
import networkx as nx
import numpy as np
from networkx.readwrite import json_graph
from tqdm import tqdm

from . import curves
from .equator import inv
from .io_utils import check_mode
from .io_utils import get_cache_dir

logger = logging.getLogger(__name__)

LOOPS = 'loops'
SHORT_RAYS = 'short_rays'
RAYS_AND_LOOPS = 'rays_and_loops'
COMPLETED = 'completed'
KINDS = (LOOPS, SHORT_RAYS, RAYS_AND_LOOPS, COMPLETED)

DEFAULT_VERTEX_CAP = 20000
DEFAULT_SAMPLES = 1000
DISCONNECTED = 'disconnected-at-bound'
MAX_FILLING_LEVEL = 2

UnicornPath = collections.namedtuple('UnicornPath',
                                     ['vertices', 'provenance'])
UnicornPrefix = collections.namedtuple(
    'UnicornPrefix', ['vertices', 'provenance', 'achieved', 'exhausted'])


class CapExceededError(RuntimeError):
    """Raised when an enumeration passes its vertex cap.

    # Arguments
        message: Description.
        vertices: The vertices collected before the cap was hit.
    """

    def __init__(self, message, vertices=()):
        super(CapExceededError, self).__init__(message)
        self.vertices = tuple(vertices)


def _peripheral_periods(atlas):
    """Periods that only circle a puncture other than `p`."""
    periods = set()
    for face in atlas.faces:
        for i in range(len(atlas.faces[face])):
            corner = (face, i)
            if atlas.corner_vertex(corner) == atlas.marked:
                continue
            tokens = curves.around_vertex(atlas, corner)
            for word in (tokens, [inv(t) for t in reversed(tokens)]):
                for k in range(len(word)):
                    periods.add(tuple(word[k:] + word[:k]))
    return periods


def _candidates(atlas, kind, bound):
    """Crossing sequences without backtracks or flank crossings at `p`."""
    with_loops = kind in (LOOPS, RAYS_AND_LOOPS, COMPLETED)
    with_rays = kind != LOOPS
    for region in atlas.corner_fan:
        stack = [(region.face, ())]
        while stack:
            face, crossings = stack.pop()
            last = inv(crossings[-1]) if crossings else None
            for i in range(len(atlas.faces[face])):
                corner = (face, i)
                if last in (atlas.outgoing(corner), atlas.incoming(corner)):
                    continue
                if atlas.corner_vertex(corner) == atlas.marked:
                    if with_loops and (crossings or corner != region.corner):
                        yield curves.loop(region.index, crossings,
                                          atlas.fan_index(corner))
                elif with_rays:
                    yield curves.ray(region.index, crossings, corner)
            if kind == COMPLETED:
                for h in range(len(crossings)):
                    if atlas.face_of(crossings[h]) == face:
                        yield curves.periodic(region.index, crossings[:h],
                                              crossings[h:])
            if len(crossings) >= bound:
                continue
            for token in atlas.faces[face]:
                if token == last:
                    continue
                if not crossings and token in (region.incoming,
                                               region.outgoing):
                    continue
                stack.append((atlas.face_of(inv(token)),
                              crossings + (token,)))


def enumerate_vertices(atlas, kind=LOOPS, bound=4,
                       vertex_cap=DEFAULT_VERTEX_CAP, verbose=0):
    """Lists the normalized simple words of one kind.

    # Arguments
        atlas: A `PolygonAtlas`.
        kind: One of `'loops'`, `'short_rays'`, `'rays_and_loops'` or
            `'completed'`.
        bound: Maximal number of crossings (preperiod plus period for
            periodic rays).
        vertex_cap: Enumeration stops with `CapExceededError` once more
            vertices than this are found.
        verbose: Whether to show a progress bar.

    # Returns
        A tuple of `CrossingWord`s, sorted by length and text form. Loops
        are listed once per unoriented loop.

    # Raises
        ValueError: on an unknown `kind` or a negative `bound`.
        CapExceededError: when `vertex_cap` is exceeded.
    """
    check_mode(kind, KINDS, 'kind')
    if bound < 0:
        raise ValueError('`bound` must be non-negative, got ' + str(bound))
    peripheral = _peripheral_periods(atlas) if kind == COMPLETED else ()
    verdicts = {}
    found = []
    for w in tqdm(_candidates(atlas, kind, bound), disable=not verbose,
                  desc='enumerate %s' % kind):
        try:
            w = curves.normalize(atlas, w)
        except ValueError:
            continue
        w = curves.canonical_loop(atlas, w)
        if w in verdicts:
            continue
        if w.end.kind == curves.PERIODIC and w.end.value in peripheral:
            verdicts[w] = False
            continue
        verdicts[w] = curves.is_simple(atlas, w)
        if verdicts[w]:
            found.append(w)
            if len(found) > vertex_cap:
                raise CapExceededError(
                    'More than %d vertices at bound %d; raise `vertex_cap` '
                    'or lower `bound`.' % (vertex_cap, bound), found)
    found.sort(key=lambda w: (curves.length(w), curves.format_word(w)))
    logger.info('%s slice at bound %d: %d vertices', kind, bound,
                len(found))
    return tuple(found)


class GraphSlice(object):
    """A finite slice of a loop or ray graph.

    Adjacency and breadth-first distances are memoized on first use; the
    vertex set never changes after construction.

    # Arguments
        atlas: The `PolygonAtlas` the words live in.
        kind: Slice kind.
        bound: Crossing bound used for the enumeration.
        vertices: Normalized simple words.
    """

    def __init__(self, atlas, kind, bound, vertices):
        self.atlas = atlas
        self.kind = kind
        self.bound = bound
        self.vertices = tuple(vertices)
        self.index = dict((w, i) for i, w in enumerate(self.vertices))
        self._disjoint = {}
        self._neighbors = {}
        self._distances = {}

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return '<GraphSlice %s bound=%d: %d vertices>' % (
            self.kind, self.bound, len(self.vertices))

    def adjacent(self, i, j):
        if i == j:
            return False
        key = (min(i, j), max(i, j))
        if key not in self._disjoint:
            self._disjoint[key] = curves.disjoint(
                self.atlas, self.vertices[key[0]], self.vertices[key[1]])
        return self._disjoint[key]

    def neighbors(self, i):
        if i not in self._neighbors:
            self._neighbors[i] = tuple(
                j for j in range(len(self.vertices)) if self.adjacent(i, j))
        return self._neighbors[i]

    def edges(self):
        for i in range(len(self.vertices)):
            for j in self.neighbors(i):
                if i < j:
                    yield i, j

    def bfs(self, source):
        """Distances from `source` to every vertex it reaches."""
        if source not in self._distances:
            distances = {source: 0}
            queue = collections.deque([source])
            while queue:
                u = queue.popleft()
                for v in self.neighbors(u):
                    if v not in distances:
                        distances[v] = distances[u] + 1
                        queue.append(v)
            self._distances[source] = distances
        return self._distances[source]

    def loop_indices(self):
        return [i for i, w in enumerate(self.vertices)
                if w.end.kind == curves.LOOP]


def build_slice(atlas, kind=LOOPS, bound=4, vertex_cap=DEFAULT_VERTEX_CAP,
                verbose=0):
    """Enumerates the vertices of a slice and wraps them in a `GraphSlice`."""
    vertices = enumerate_vertices(atlas, kind, bound, vertex_cap, verbose)
    return GraphSlice(atlas, kind, bound, vertices)


def locate(graph_slice, w):
    """Index of a word (or index) in the slice.

    # Raises
        ValueError: if the normal form of `w` is not a vertex.
    """
    if isinstance(w, int):
        return w
    atlas = graph_slice.atlas
    key = curves.canonical_loop(atlas, curves.normalize(atlas, w))
    if key not in graph_slice.index:
        raise ValueError('`' + curves.format_word(key) + '` is not a vertex '
                         'of the bound-%d %s slice' % (graph_slice.bound,
                                                       graph_slice.kind))
    return graph_slice.index[key]


def distance(graph_slice, a, b):
    """Breadth-first distance inside the slice.

    This is an upper bound for the distance in the full graph.

    # Returns
        A natural number, or None (with a warning) when `b` cannot be
        reached within the slice.
    """
    i, j = locate(graph_slice, a), locate(graph_slice, b)
    d = graph_slice.bfs(i).get(j)
    if d is None:
        warnings.warn('Vertices %d and %d are not connected in the bound-%d '
                      'slice; this may be an artifact of the bound.'
                      % (i, j, graph_slice.bound))
    return d


def certified_distance(graph_slice, a, b):
    """The slice distance when the bound leaves enough headroom.

    A distance `d` counts as certified when `d <= 1`, or when the slice
    bound exceeds the longer of the two words by at least `2 * d`.
    Otherwise None is returned.
    """
    i, j = locate(graph_slice, a), locate(graph_slice, b)
    d = graph_slice.bfs(i).get(j)
    if d is None:
        return None
    if d <= 1:
        return d
    longest = max(curves.length(graph_slice.vertices[i]),
                  curves.length(graph_slice.vertices[j]))
    if graph_slice.bound - longest >= 2 * d:
        return d
    return None


def gromov_product(graph_slice, x, y, base):
    """`(d(x, base) + d(y, base) - d(x, y)) / 2`, or None if unreachable.

    Slice distances only bound the true ones, so the product is not
    expected to converge along sequences.
    """
    x, y, base = [locate(graph_slice, w) for w in (x, y, base)]
    dx = graph_slice.bfs(base).get(x)
    dy = graph_slice.bfs(base).get(y)
    dxy = graph_slice.bfs(x).get(y)
    if None in (dx, dy, dxy):
        return None
    return (dx + dy - dxy) / 2.


def filling_level(graph_slice, r):
    """Distance of a vertex from the set of loops.

    # Returns
        The distance, or `'disconnected-at-bound'`. No ray is more than
        2-filling, so a larger finite value is returned as computed with a
        warning; callers checking the clamp treat it as a failure.
    """
    target = locate(graph_slice, r)
    sources = graph_slice.loop_indices()
    if target in sources:
        return 0
    seen = dict((s, 0) for s in sources)
    queue = collections.deque(sources)
    while queue:
        u = queue.popleft()
        if u == target:
            break
        for v in graph_slice.neighbors(u):
            if v not in seen:
                seen[v] = seen[u] + 1
                queue.append(v)
    level = seen.get(target)
    if level is None:
        return DISCONNECTED
    if level > MAX_FILLING_LEVEL:
        warnings.warn('Vertex %d is at distance %d from the loops in the '
                      'bound-%d slice, above the filling clamp %d.'
                      % (target, level, graph_slice.bound,
                         MAX_FILLING_LEVEL))
    return level


def _surgery(b, run):
    """Tail of `b` from the crossing point recorded by `run`."""
    if run.reversed:
        return b.crossings[len(b.crossings) - run.j:]
    return b.crossings[run.j:]


def unicorn_path(atlas, a, b):
    """Unicorn path from `a` to `b`.

    For every point where a lift of `b` crosses the lift of `a`, the word
    that follows `a` up to that point and then `b` to its end is formed
    and normalized; the simple ones are ordered from the farthest point
    along `a` to the nearest and framed by `a` and `b`.

    # Arguments
        atlas: A `PolygonAtlas`.
        a: A loop or short ray.
        b: A loop or short ray.

    # Returns
        A `UnicornPath`; `provenance[k]` records the run that produced
        vertex `k` (None for the endpoints).
    """
    a = curves.normalize(atlas, a)
    b = curves.normalize(atlas, b)
    runs = curves.intersection_runs(atlas, a, b)
    runs.sort(key=lambda run: -run.offset)
    vertices, provenance = [a], [None]
    for run in runs:
        tokens = a.crossings[:run.i] + _surgery(b, run)
        try:
            w = curves.normalize(atlas, curves.CrossingWord(a.start, tokens,
                                                            b.end))
        except ValueError:
            continue
        if w in vertices or w == b or not curves.is_simple(atlas, w):
            continue
        vertices.append(w)
        provenance.append({'a_crossings': run.i, 'b_from': run.j,
                           'reversed': run.reversed,
                           'offset': run.offset})
    if b != a:
        vertices.append(b)
        provenance.append(None)
    return UnicornPath(tuple(vertices), tuple(provenance))


def infinite_unicorn_prefix(atlas, a, r, n, unroll=None):
    """First vertices of the unicorn path from a loop towards a ray.

    The vertices follow `r` up to a crossing with `a` and return along
    `a`, ordered by the crossing's position along `r`. With `s` the number
    of crossings of `a`, vertex `s * k + 1` (counting `a` as vertex 1)
    should `k`-begin like `r`.

    # Arguments
        atlas: A `PolygonAtlas`.
        a: A simple loop.
        r: A ray (prefix, periodic or short).
        n: Number of vertices wanted.
        unroll: Periods unrolled for periodic rays; defaults to `n`.

    # Returns
        An `UnicornPrefix` whose `achieved` field is the largest `k` for
        which every checked vertex `s * k' + 1`, `k' <= k`, begins like
        the ray. `exhausted` is set (and a warning emitted) when the ray
        prefix holds fewer than `n` vertices.
    """
    if a.end.kind != curves.LOOP:
        raise ValueError('`infinite_unicorn_prefix` starts from a loop.')
    a = curves.normalize(atlas, a)
    r = curves.normalize(atlas, r)
    runs = curves.intersection_runs(atlas, r, a,
                                    unroll=max(n, curves.DEFAULT_UNROLL)
                                    if unroll is None else unroll)
    runs.sort(key=lambda run: run.offset)
    vertices, provenance = [a], [None]
    for run in runs:
        if len(vertices) >= n:
            break
        head = curves.crossing_prefix(r, run.i)
        w = curves.CrossingWord(r.start, head + _surgery(a, run), a.end)
        try:
            w = curves.normalize(atlas, w)
        except ValueError:
            continue
        if w in vertices or not curves.is_simple(atlas, w):
            continue
        vertices.append(w)
        provenance.append({'ray_crossings': run.i, 'loop_from': run.j,
                           'reversed': run.reversed,
                           'offset': run.offset})
    if len(vertices) == 1:
        vertices.append(r)
        provenance.append(None)
    exhausted = len(vertices) < n
    s = max(1, len(a.crossings))
    achieved = 0
    k = 1
    while s * k < len(vertices):
        if not curves.k_begins_like(vertices[s * k], r, k):
            break
        achieved = k
        k += 1
    if exhausted:
        warnings.warn('The ray prefix yields %d of %d unicorn vertices; '
                      'reached k=%d.' % (len(vertices), n, achieved))
    return UnicornPrefix(tuple(vertices[:n]), tuple(provenance[:n]),
                         achieved, exhausted)


def _largest_component(graph_slice):
    graph = to_networkx(graph_slice)
    if not len(graph):
        return []
    return sorted(max(nx.connected_components(graph), key=len))


def delta_estimate(graph_slice, samples=DEFAULT_SAMPLES, seed=0, verbose=0):
    """Samples the four point condition on the largest component.

    For four vertices the three sums `d01 + d23`, `d02 + d13` and
    `d03 + d12` are sorted; half the gap between the two largest is the
    defect. The same seed gives the same statistics.

    # Returns
        A dictionary with `max`, `p95`, `mean`, `samples`, `seed` and
        `component_size`.
    """
    component = _largest_component(graph_slice)
    report = {'samples': samples, 'seed': seed,
              'component_size': len(component)}
    if len(component) < 4:
        warnings.warn('The largest component has fewer than 4 vertices.')
        report.update({'max': 0., 'p95': 0., 'mean': 0.})
        return report
    rng = np.random.RandomState(seed)
    defects = []
    for _ in tqdm(range(samples), disable=not verbose, desc='delta'):
        quad = [int(x) for x in rng.choice(component, 4, replace=False)]
        d = [[graph_slice.bfs(u)[v] for v in quad] for u in quad]
        s = sorted([d[0][1] + d[2][3], d[0][2] + d[1][3],
                    d[0][3] + d[1][2]])
        defects.append((s[-1] - s[-2]) / 2.)
    defects = np.array(defects)
    report.update({'max': float(defects.max()),
                   'p95': float(np.percentile(defects, 95)),
                   'mean': float(defects.mean())})
    logger.info('delta estimate over %d quadruples: max %.1f', samples,
                report['max'])
    return report


def compare_loop_distances(completed, short, target=3):
    """Loop pairs at certified distance `target` in the completed slice
    whose distance in the short-ray-and-loop slice differs.

    # Returns
        A dictionary with the number of `checked` pairs and the list of
        `mismatches` as `(word_a, word_b, d_completed, d_short)`.
    """
    if completed.kind != COMPLETED or short.kind != RAYS_AND_LOOPS:
        raise ValueError('Expected a completed slice and a rays_and_loops '
                         'slice, got `%s` and `%s`'
                         % (completed.kind, short.kind))
    loops = completed.loop_indices()
    checked, mismatches = 0, []
    for x in range(len(loops)):
        for y in range(x + 1, len(loops)):
            i, j = loops[x], loops[y]
            if certified_distance(completed, i, j) != target:
                continue
            a, b = completed.vertices[i], completed.vertices[j]
            checked += 1
            d = short.bfs(locate(short, a)).get(locate(short, b))
            if d != target:
                mismatches.append((curves.format_word(a),
                                   curves.format_word(b), target, d))
    return {'checked': checked, 'mismatches': mismatches}


def distance_matrix(graph_slice):
    """All slice distances as an int32 array, -1 where unreachable."""
    size = len(graph_slice)
    matrix = -np.ones((size, size), dtype='int32')
    for i in range(size):
        for j, d in graph_slice.bfs(i).items():
            matrix[i, j] = d
    return matrix


def to_networkx(graph_slice):
    graph = nx.Graph(kind=graph_slice.kind, bound=graph_slice.bound,
                     atlas=graph_slice.atlas.name)
    for i, w in enumerate(graph_slice.vertices):
        graph.add_node(i, word=curves.format_word(w), end=w.end.kind,
                       length=curves.length(w))
    graph.add_edges_from(graph_slice.edges())
    return graph


def to_json(graph_slice):
    """Node-link dictionary of the slice."""
    return json_graph.node_link_data(to_networkx(graph_slice))


def to_dot(graph_slice):
    lines = ['graph "%s_%d" {' % (graph_slice.kind, graph_slice.bound)]
    for i, w in enumerate(graph_slice.vertices):
        lines.append('  %d [label="%s"];' % (i, curves.format_word(w)))
    for i, j in graph_slice.edges():
        lines.append('  %d -- %d;' % (i, j))
    lines.append('}')
    return '\n'.join(lines) + '\n'


def _default_path(graph_slice):
    return os.path.join(get_cache_dir(), 'slice_%s_%s_%d.h5' % (
        graph_slice.atlas.name or 'atlas', graph_slice.kind,
        graph_slice.bound))


def save_distances(graph_slice, path=None):
    """Stores the distance matrix of a slice in an HDF5 file.

    # Returns
        The file path (a file in the cache directory by default).
    """
    path = path or _default_path(graph_slice)
    with h5py.File(path, 'w') as f:
        f.create_dataset('distances', data=distance_matrix(graph_slice))
        f.create_dataset('vertices', data=np.array(
            [curves.format_word(w).encode('utf8')
             for w in graph_slice.vertices]))
        f.attrs['kind'] = graph_slice.kind
        f.attrs['bound'] = graph_slice.bound
    return path


def load_distances(path, graph_slice=None):
    """Reads a stored distance matrix.

    When `graph_slice` is given, its vertex list must match the stored one
    and its distance cache is filled from the file.

    # Returns
        `(words, matrix)`: the vertex texts and the distance array.
    """
    with h5py.File(path, 'r') as f:
        matrix = np.array(f['distances'])
        words = [w.decode('utf8') if isinstance(w, bytes) else str(w)
                 for w in f['vertices']]
    if graph_slice is not None:
        expected = [curves.format_word(w) for w in graph_slice.vertices]
        if expected != words:
            raise ValueError('Stored vertices at ' + path + ' do not match '
                             'the slice.')
        for i in range(len(words)):
            graph_slice._distances[i] = dict(
                (j, int(d)) for j, d in enumerate(matrix[i]) if d >= 0)
    return words, matrix
