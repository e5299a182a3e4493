"""End-space descriptions, rooted core trees and their pants complexes.

A tame surface with a marked isolated puncture `p` is described by its
genus and a finite binary tree whose leaves are isolated ends or Cantor
clusters, each possibly accumulated by genus. `build_core_tree` turns
that description into a rooted marked tree (truncated at a given depth
along infinite directions) and `expand_to_pants` replaces every vertex
by pairs of pants with seams.

# Reference
- Classification of infinite type surfaces by the triple of genus,
  end space and ends accumulated by genus (Kerekjarto, Richards).
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import logging
import warnings

import networkx as nx

from .io_utils import ParseError

logger = logging.getLogger(__name__)

INFINITE_GENUS = 'inf'
DEFAULT_DEPTH = 4
MARKED_PUNCTURE = 'p'

ISOLATED = 'isolated'
CANTOR = 'cantor'
LEAF_TYPES = (ISOLATED, CANTOR)

# Cuff kinds of a pants complex.
GLUED = 'glued'
PUNCTURE = 'puncture'
FRONTIER = 'frontier'

# Template node kinds used while building a core tree.
_BRANCH = 'branch'
_CUSP = 'cusp'
_HANDLE = 'handle'
_GENUS_RAY = 'genus-ray'
_CANTOR = 'cantor'
_GENUS_CANTOR = 'genus-cantor'
_INFINITE_KINDS = (_GENUS_RAY, _CANTOR, _GENUS_CANTOR)
_MARKED_KINDS = (_HANDLE, _GENUS_RAY, _GENUS_CANTOR)

EndLeaf = collections.namedtuple(
    'EndLeaf', ['type', 'genus_accumulated', 'name', 'marked'])
EndBranch = collections.namedtuple('EndBranch', ['children'])
EndSpec = collections.namedtuple('EndSpec', ['genus', 'ends'])

Vertex = collections.namedtuple(
    'Vertex', ['index', 'marked', 'valence', 'frontier', 'end',
               'annotation', 'parent', 'children', 'depth'])
CoreTree = collections.namedtuple(
    'CoreTree', ['vertices', 'edges', 'root', 'depth'])

Cuff = collections.namedtuple('Cuff', ['kind', 'partner', 'end'])
Pants = collections.namedtuple('Pants', ['index', 'vertex', 'cuffs', 'seams'])
PantsComplex = collections.namedtuple('PantsComplex', ['pants', 'tree'])


def leaf(type=ISOLATED, genus_accumulated=False, name=None, marked=False):
    return EndLeaf(type, bool(genus_accumulated), name, bool(marked))


def branch(left, right):
    return EndBranch((left, right))


def end_spec_from_config(config):
    """Parses the JSON surface description.

    # Arguments
        config: Dictionary with keys `genus` (an integer or `"inf"`) and
            `ends`: `null`, a leaf object
            `{"type": "isolated"|"cantor", "genus_accumulated": bool}`
            (optionally with `name` and `marked`), or a two element list
            (or `{"children": [...]}`) of nested ends.

    # Returns
        A validated `EndSpec`.

    # Raises
        ParseError: on malformed input, naming the offending field.
    """
    if not isinstance(config, dict) or 'genus' not in config:
        raise ParseError('Surface spec needs a `genus` field',
                         location='spec')
    genus = config['genus']
    if genus not in (INFINITE_GENUS, 'infinity'):
        if not isinstance(genus, int) or isinstance(genus, bool) or genus < 0:
            raise ParseError('`genus` must be a natural number or "inf"',
                             location='spec.genus', token=genus)
    else:
        genus = INFINITE_GENUS

    def parse(node, location):
        if isinstance(node, dict) and 'children' in node:
            node = node['children']
        if isinstance(node, (list, tuple)):
            if len(node) != 2:
                raise ParseError('Branch nodes must have exactly two '
                                 'children', location=location)
            return EndBranch(tuple(parse(child, location + '[%d]' % i)
                                   for i, child in enumerate(node)))
        if not isinstance(node, dict):
            raise ParseError('Expected a leaf object or a list',
                             location=location, token=node)
        type_ = node.get('type', ISOLATED)
        if type_ not in LEAF_TYPES:
            raise ParseError('Unknown end type', location=location + '.type',
                             token=type_)
        return leaf(type_, node.get('genus_accumulated', False),
                    node.get('name'), node.get('marked', False))

    ends = config.get('ends')
    if ends is not None and ends != []:
        ends = parse(ends, 'spec.ends')
    else:
        ends = None
    spec = EndSpec(genus, ends)
    try:
        validate_end_spec(spec)
    except ValueError as e:
        raise ParseError(str(e), location='spec')
    return spec


def end_spec_to_config(spec):
    def dump(node):
        if isinstance(node, EndBranch):
            return [dump(child) for child in node.children]
        entry = {'type': node.type,
                 'genus_accumulated': node.genus_accumulated}
        if node.name is not None:
            entry['name'] = node.name
        if node.marked:
            entry['marked'] = True
        return entry
    return {'genus': spec.genus,
            'ends': None if spec.ends is None else dump(spec.ends)}


def iter_leaves(node):
    """Leaves of an end tree in depth-first order."""
    if node is None:
        return
    if isinstance(node, EndBranch):
        for child in node.children:
            for item in iter_leaves(child):
                yield item
    else:
        yield node


def _is_finite_type(spec):
    return (spec.genus != INFINITE_GENUS and
            all(l.type == ISOLATED for l in iter_leaves(spec.ends)))


def _marked_leaf_index(leaves):
    for i, l in enumerate(leaves):
        if l.marked:
            return i
    for i, l in enumerate(leaves):
        if l.type == ISOLATED and not l.genus_accumulated:
            return i
    return None


def validate_end_spec(spec):
    """Raises `ValueError` unless `spec` describes a supported surface."""
    leaves = list(iter_leaves(spec.ends))
    genus = spec.genus
    accumulated = [l for l in leaves if l.genus_accumulated]
    if genus == INFINITE_GENUS:
        if not accumulated:
            raise ValueError('Infinite genus needs at least one end '
                             'accumulated by genus.')
    else:
        if accumulated:
            raise ValueError('Finite genus ' + str(genus) + ' cannot have '
                             'ends accumulated by genus.')
    if not leaves:
        if genus == INFINITE_GENUS or genus < 2:
            name = 'sphere' if genus == 0 else 'torus'
            raise ValueError('Closed surfaces need genus >= 2; got a ' +
                             name + '.')
        return
    marked = [l for l in leaves if l.marked]
    if len(marked) > 1:
        raise ValueError('At most one end can be marked as `p`.')
    if marked and (marked[0].type != ISOLATED or
                   marked[0].genus_accumulated):
        raise ValueError('The marked end `p` must be an isolated puncture.')
    if _marked_leaf_index(leaves) is None:
        raise ValueError('The surface has no isolated puncture to serve '
                         'as the marked puncture `p`.')
    if _is_finite_type(spec):
        n = len(leaves)
        chi = 2 - 2 * genus - n
        if genus == 0 and n == 1:
            raise ValueError('A once-punctured sphere is a disk.')
        if genus == 0 and n == 2:
            raise ValueError('A twice-punctured sphere is an annulus.')
        if chi >= -2:
            raise ValueError('Finite type surfaces need Euler '
                             'characteristic < -2; genus ' + str(genus) +
                             ' with ' + str(n) + ' punctures has ' +
                             str(chi) + '.')


def leaf_names(spec):
    """End names in depth-first order; the marked puncture is `p`."""
    leaves = list(iter_leaves(spec.ends))
    p_index = _marked_leaf_index(leaves)
    names = []
    for i, l in enumerate(leaves):
        if i == p_index:
            names.append(MARKED_PUNCTURE)
        elif l.name is not None:
            names.append(l.name)
        elif l.type == CANTOR:
            names.append('c%d' % i)
        else:
            names.append('e%d' % i)
    return names


class _Template(object):
    """Finite undirected skeleton with ordered adjacency."""

    def __init__(self):
        self.kinds = []
        self.ends = []
        self.adjacency = []

    def add(self, kind, end=None):
        self.kinds.append(kind)
        self.ends.append(end)
        self.adjacency.append([])
        return len(self.kinds) - 1

    def connect(self, u, v):
        self.adjacency[u].append(v)
        self.adjacency[v].append(u)

    def replace_edge(self, u, v, path):
        """Subdivides the edge `u - v` by the nodes in `path`."""
        nodes = [u] + list(path) + [v]
        self.adjacency[u][self.adjacency[u].index(v)] = nodes[1]
        self.adjacency[v][self.adjacency[v].index(u)] = nodes[-2]
        for i in range(1, len(nodes) - 1):
            self.adjacency[nodes[i]] = [nodes[i - 1], nodes[i + 1]]

    def graph(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.kinds)))
        graph.add_edges_from((u, v) for u, vs in enumerate(self.adjacency)
                             for v in vs)
        return graph

    def path(self, source, target):
        return nx.shortest_path(self.graph(), source, target)


def _leaf_kind(l):
    if l.type == ISOLATED:
        return _GENUS_RAY if l.genus_accumulated else _CUSP
    return _GENUS_CANTOR if l.genus_accumulated else _CANTOR


def _build_template(spec):
    template = _Template()
    names = iter(leaf_names(spec))
    units = []

    def convert(node):
        if isinstance(node, EndBranch):
            u = template.add(_BRANCH)
            for child in node.children:
                template.connect(u, convert(child))
            return u
        u = template.add(_leaf_kind(node), next(names))
        units.append(u)
        return u

    ends = spec.ends
    if isinstance(ends, EndBranch):
        # The description root is 2-valent: contract it.
        left = convert(ends.children[0])
        right = convert(ends.children[1])
        template.connect(left, right)
    else:
        convert(ends)
    return template, units


def _choose_root(spec, template, units):
    """Root choice by the number of ends; returns the root node."""
    kinds = template.kinds
    genus = spec.genus
    finite_genus = 0 if genus == INFINITE_GENUS else genus
    if len(units) >= 3:
        a, b, c = units[:3]
        paths = [set(template.path(a, b)), set(template.path(a, c)),
                 set(template.path(b, c))]
        root = min(paths[0] & paths[1] & paths[2])
    elif len(units) == 2:
        cantors = [u for u in units if kinds[u] in (_CANTOR, _GENUS_CANTOR)]
        rays = [u for u in units if kinds[u] == _GENUS_RAY]
        if cantors:
            root = cantors[0]
        elif rays:
            root = rays[0]
        else:
            chain = [template.add(_HANDLE) for _ in range(finite_genus)]
            template.replace_edge(units[0], units[1], chain)
            return chain[0]
    else:
        chain = [template.add(_HANDLE) for _ in range(finite_genus)]
        template.connect(units[0], chain[0])
        for u, v in zip(chain[:-1], chain[1:]):
            template.connect(u, v)
        return chain[0]
    if finite_genus:
        # Genus one on the root, the rest on a chain along its first edge.
        if kinds[root] == _BRANCH:
            kinds[root] = _HANDLE
        else:
            kinds[root] = 'marked-' + kinds[root]
        chain = [template.add(_HANDLE) for _ in range(finite_genus - 1)]
        if chain:
            template.replace_edge(root, template.adjacency[root][0], chain)
    return root


def build_core_tree(spec, depth=DEFAULT_DEPTH):
    """Builds the rooted core tree of a surface, truncated at `depth`.

    # Arguments
        spec: A valid `EndSpec`.
        depth: Positive integer; infinite directions are expanded while
            the distance to the root is at most `depth` and cut by
            frontier stubs right after.

    # Returns
        A `CoreTree` whose vertices are indexed in breadth-first order
        from the root, children in planar order.

    # Raises
        ValueError: if `spec` is invalid or `depth < 1`.
    """
    validate_end_spec(spec)
    if not isinstance(depth, int) or depth < 1:
        raise ValueError('`depth` must be a positive integer, got ' +
                         repr(depth))
    template = _Template()
    if spec.ends is None:
        chain = [template.add(_HANDLE) for _ in range(spec.genus)]
        for u, v in zip(chain[:-1], chain[1:]):
            template.connect(u, v)
        root = chain[0]
    else:
        template, units = _build_template(spec)
        root = _choose_root(spec, template, units)
    tree = _expand_template(template, root, depth)
    check_core_tree(tree)
    logger.debug('core tree: %d vertices, depth %d', len(tree.vertices),
                 depth)
    return tree


def _expand_template(template, root, depth):
    # Work items: (template node or None, kind, end, parent vertex, dist).
    records = []
    queue = collections.deque([(root, template.kinds[root], None, None, 0)])
    while queue:
        node, kind, end, parent, dist = queue.popleft()
        index = len(records)
        record = {'kind': kind, 'end': end, 'parent': parent,
                  'children': [], 'depth': dist, 'frontier': False,
                  'annotation': None}
        records.append(record)
        if parent is not None:
            records[parent]['children'].append(index)
        if kind == 'stub':
            record['frontier'] = True
            record['annotation'] = end
            record['end'] = 'stub%d' % index
            continue
        pending = []
        if node is not None:
            record['end'] = template.ends[node]
            adjacency = template.adjacency[node]
            parent_node = records[parent]['node'] if parent is not None \
                else None
            if parent_node is not None and parent_node in adjacency:
                k = adjacency.index(parent_node)
                ordered = adjacency[k + 1:] + adjacency[:k]
            else:
                ordered = list(adjacency)
            for v in ordered:
                pending.append((v, template.kinds[v], None))
        record['node'] = node
        base = kind.replace('marked-', '')
        if base == _GENUS_RAY:
            pending.append((None, _GENUS_RAY, None))
        elif base in (_CANTOR, _GENUS_CANTOR):
            child = _GENUS_CANTOR if base == _GENUS_CANTOR else _CANTOR
            pending.extend([(None, child, None), (None, child, None)])
        for v, child_kind, child_end in pending:
            if v is None and dist + 1 > depth:
                queue.append((None, 'stub', child_kind, index, dist + 1))
            else:
                queue.append((v, child_kind, child_end, index, dist + 1))
    vertices = []
    edges = []
    for index, record in enumerate(records):
        kind = record['kind']
        valence = len(record['children']) + (record['parent'] is not None)
        marked = kind in _MARKED_KINDS or kind.startswith('marked-')
        vertices.append(Vertex(index, marked, valence, record['frontier'],
                               record['end'] if kind in (_CUSP, 'stub')
                               else None,
                               record['annotation'], record['parent'],
                               tuple(record['children']), record['depth']))
        if record['parent'] is not None:
            edges.append((record['parent'], index))
    return CoreTree(tuple(vertices), tuple(edges), 0, depth)


def check_core_tree(tree):
    """Raises `ValueError` if `tree` breaks a core tree invariant."""
    n = len(tree.vertices)
    if len(tree.edges) != n - 1:
        raise ValueError('A core tree on %d vertices needs %d edges, got %d'
                         % (n, n - 1, len(tree.edges)))
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((v.index, c) for v in tree.vertices
                         for c in v.children)
    if not nx.is_connected(graph):
        raise ValueError('Core tree is not connected.')
    if not nx.is_tree(graph):
        u, v = nx.find_cycle(graph, source=tree.root)[0]
        raise ValueError('Core tree has a cycle through vertex %d' % v)
    for v in tree.vertices:
        if v.marked and v.valence not in (1, 2, 3):
            raise ValueError('Marked vertex %d has valence %d'
                             % (v.index, v.valence))
        if not v.marked and v.valence not in (1, 3) and n > 1:
            raise ValueError('Unmarked vertex %d has valence %d'
                             % (v.index, v.valence))
    root = tree.vertices[tree.root]
    if not root.marked and root.valence != 3:
        raise ValueError('The root must be marked or an unmarked '
                         '3-valent vertex.')


def neighbors(tree, index):
    """Tree neighbours of a vertex in planar order, parent first."""
    v = tree.vertices[index]
    head = () if v.parent is None else (v.parent,)
    return head + v.children


def euler_characteristic(tree):
    """Euler characteristic of the surface encoded by `tree`.

    Unmarked 3-valent vertices count -1 and marked v-valent vertices
    count -v. When frontier stubs are present the value only describes
    the truncated part and a warning is emitted.
    """
    chi = 0
    for v in tree.vertices:
        if v.marked:
            chi -= v.valence
        elif v.valence == 3:
            chi -= 1
    if any(v.frontier for v in tree.vertices):
        warnings.warn('Core tree has frontier stubs; the Euler '
                      'characteristic %d is a truncation bound.' % chi)
    return chi


def expand_to_pants(tree):
    """Replaces every core tree vertex by pairs of pants.

    Unmarked 3-valent vertices become one pair of pants whose cuffs follow
    the planar order of the neighbours. A marked v-valent vertex becomes
    a ring of v pants: pants `k` has cuffs `(edge k, next, prev)` and its
    `next` cuff is glued to the `prev` cuff of pants `k + 1`. Cuffs facing
    1-valent unmarked vertices stay open and become punctures (or frontier
    slots for truncation stubs). Seam `k` of a pants joins cuff `k` to
    cuff `k + 1`.

    # Arguments
        tree: A valid `CoreTree`.

    # Returns
        A `PantsComplex`.
    """
    slots = {}
    pants = []
    for v in tree.vertices:
        adjacent = neighbors(tree, v.index)
        if v.marked:
            ring = list(range(len(pants), len(pants) + v.valence))
            for k, u in enumerate(adjacent):
                pants.append([v.index, [None, None, None]])
                slots[(v.index, u)] = (ring[k], 0)
            for k in range(v.valence):
                nxt = ring[(k + 1) % v.valence]
                pants[ring[k]][1][1] = Cuff(GLUED, (nxt, 2), None)
                pants[nxt][1][2] = Cuff(GLUED, (ring[k], 1), None)
        elif v.valence == 3:
            index = len(pants)
            pants.append([v.index, [None, None, None]])
            for k, u in enumerate(adjacent):
                slots[(v.index, u)] = (index, k)
    for (u, w), (index, slot) in slots.items():
        other = tree.vertices[w]
        if (w, u) in slots:
            cuff = Cuff(GLUED, slots[(w, u)], None)
        elif other.frontier:
            cuff = Cuff(FRONTIER, None, other.end)
        else:
            cuff = Cuff(PUNCTURE, None, other.end)
        pants[index][1][slot] = cuff
    complex_ = PantsComplex(
        tuple(Pants(i, vertex, tuple(cuffs),
                    tuple('s%d.%d' % (i, k) for k in range(3)))
              for i, (vertex, cuffs) in enumerate(pants)),
        tree)
    check_pants_complex(complex_)
    return complex_


def check_pants_complex(pc):
    for p in pc.pants:
        for slot, cuff in enumerate(p.cuffs):
            if cuff is None:
                raise ValueError('Pants %d has an unassigned cuff %d'
                                 % (p.index, slot))
            if cuff.kind == GLUED:
                other = pc.pants[cuff.partner[0]].cuffs[cuff.partner[1]]
                if cuff.partner == (p.index, slot) or \
                        other.partner != (p.index, slot):
                    raise ValueError('Gluing is not an involution at '
                                     'pants %d cuff %d' % (p.index, slot))


def surface_summary(tree):
    """Genus, punctures, frontier slots and Euler characteristic."""
    pc = expand_to_pants(tree)
    open_cuffs = [c for p in pc.pants for c in p.cuffs if c.kind != GLUED]
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        chi = euler_characteristic(tree)
    return {'genus': sum(1 for v in tree.vertices if v.marked),
            'punctures': len(open_cuffs),
            'frontier': sum(1 for c in open_cuffs if c.kind == FRONTIER),
            'pants': len(pc.pants),
            'euler_characteristic': chi}


def depth_sensitivity(spec, depths):
    """Summaries of the truncated surface for several depths."""
    return dict((d, surface_summary(build_core_tree(spec, d)))
                for d in depths)


def tree_to_config(tree):
    return {'root': tree.root,
            'depth': tree.depth,
            'vertices': [{'index': v.index, 'marked': v.marked,
                          'valence': v.valence, 'frontier': v.frontier,
                          'end': v.end, 'annotation': v.annotation,
                          'parent': v.parent, 'children': list(v.children),
                          'depth': v.depth} for v in tree.vertices]}


def tree_from_config(config):
    try:
        vertices = tuple(
            Vertex(v['index'], v['marked'], v['valence'], v['frontier'],
                   v.get('end'), v.get('annotation'), v.get('parent'),
                   tuple(v['children']), v.get('depth', 0))
            for v in config['vertices'])
        edges = tuple((v.parent, v.index) for v in vertices
                      if v.parent is not None)
        tree = CoreTree(vertices, edges, config['root'], config['depth'])
        check_core_tree(tree)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError('Invalid core tree: ' + str(e), location='tree')
    return tree
