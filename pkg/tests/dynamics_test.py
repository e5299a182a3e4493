import itertools

import pytest

from loopforge import catalog
from loopforge import curves
from loopforge import dynamics
from loopforge import graphs
from loopforge.io_utils import ParseError


ATLAS = catalog.atlas('sphere-5')
SHORT_LOOPS = ['R0 | w1+ | loop(R1)',
               'R0 | w2+ | loop(R1)',
               'R0 | w3+ | loop(R1)']


def word(text):
    return curves.parse_word(text, ATLAS)


def twist(i):
    return dynamics.half_twist(ATLAS, i)


def test_half_twist_moves_the_first_loop():
    t1 = twist(1)
    image = dynamics.act(t1, word(SHORT_LOOPS[0]), check_simple=False)
    assert image == word('R1 | w1- w2+ | loop(R1)')
    back = dynamics.act(t1.inverse, image, check_simple=False)
    assert back == word(SHORT_LOOPS[0])


def test_half_twist_fixes_enclosing_loops():
    t1 = twist(1)
    for text in SHORT_LOOPS[1:]:
        assert dynamics.act(t1, word(text)) == word(text)


def test_half_twist_keeps_simple_loops_simple():
    image = dynamics.act(twist(1), word(SHORT_LOOPS[0]))
    assert curves.is_simple(ATLAS, image)


def test_half_twist_tables():
    t2 = twist(2)
    assert t2.image(('w2', 1)) == (('w1', 1), ('w2', -1), ('w3', 1))
    assert t2.image(('w2', -1)) == (('w3', -1), ('w2', 1), ('w1', -1))
    assert t2.image(('w0', 1)) == (('w0', 1),)
    assert t2.fan_map == [0, 1]
    with pytest.raises(ValueError):
        twist(4)
    with pytest.raises(ValueError):
        dynamics.half_twist(catalog.atlas('torus-3'), 1)


def test_compose_with_inverse_is_trivial():
    t1 = twist(1)
    identity = dynamics.compose(t1, t1.inverse)
    assert identity.arc_images['w1'] == (('w1', 1),)
    for face in ATLAS.faces:
        for i in range(len(ATLAS.faces[face])):
            assert identity.corner_image((face, i)) == ((face, i), ())
    loops = [word(text) for text in SHORT_LOOPS]
    loops.append(word('R0 | w1+ w3- | loop(R0)'))
    for w in loops:
        assert dynamics.act(identity, w) == w


def test_word_product_order():
    # The last letter acts first.
    product = dynamics.word_product(ATLAS, [2, 1])
    w = word(SHORT_LOOPS[0])
    expected = dynamics.act(twist(2), dynamics.act(twist(1), w))
    assert dynamics.act(product, w) == expected
    assert product.name == 't2 t1'
    assert dynamics.word_product(ATLAS, [1, -1]).arc_images['w1'] == \
        (('w1', 1),)


def test_power_and_conjugate():
    t1 = twist(1)
    w = word(SHORT_LOOPS[0])
    squared = dynamics.power(t1, 2)
    assert dynamics.act(squared, w) == \
        dynamics.act(t1, dynamics.act(t1, w))
    assert dynamics.act(dynamics.power(t1, -1), w) == \
        dynamics.act(t1.inverse, w)
    conjugated = dynamics.conjugate(twist(2), t1)
    assert dynamics.act(conjugated, w) == dynamics.act(
        t1, dynamics.act(twist(2), dynamics.act(t1.inverse, w)))


def test_inverse_required():
    rep = dynamics.RewritingRep(ATLAS, name='bare')
    with pytest.raises(ValueError):
        dynamics.inverse(rep)


def test_orbit():
    words = dynamics.orbit(twist(1), word(SHORT_LOOPS[0]), 2)
    assert len(words) == 3
    assert words[1] == word('R1 | w1- w2+ | loop(R1)')
    # The square is a Dehn twist about a curve the loop crosses twice.
    assert words[2] == word('R1 | w2- w1+ w0- w2+ | loop(R1)')


@pytest.mark.parametrize('name', catalog.rep_names())
def test_catalog_reps_validate(name):
    rep = catalog.rep(name, ATLAS)
    corpus = [word(text) for text in SHORT_LOOPS]
    certificate = dynamics.validate_rep(rep, corpus)
    assert certificate['passed'], certificate['witness']


def test_validate_rejects_bad_tables():
    rep = dynamics.RewritingRep(ATLAS, {'w1': (('w1', -1),)})
    certificate = dynamics.validate_rep(rep)
    assert not certificate['passed']
    assert certificate['witness']['check'] == 'arc-image'
    rep = dynamics.RewritingRep(ATLAS, corner_map={('A', 0): (('A', 1), ())})
    certificate = dynamics.validate_rep(rep)
    assert certificate['witness']['check'] == 'marked-puncture'


def test_rep_config():
    rep = catalog.rep('penner', ATLAS)
    config = dynamics.rep_to_config(rep)
    assert config['fan_map'] == [0, 1]
    assert 'inverse' in config
    rebuilt = dynamics.rep_from_config(config, ATLAS)
    assert rebuilt.arc_images == rep.arc_images
    assert rebuilt.corner_map == rep.corner_map
    assert rebuilt.inverse.inverse is rebuilt
    for text in SHORT_LOOPS:
        assert dynamics.act(rebuilt, word(text)) == \
            dynamics.act(rep, word(text))


def test_rep_config_unknown_arc():
    config = dynamics.rep_to_config(twist(1))
    config['arc_images']['w7'] = 'w1+'
    with pytest.raises(ParseError) as info:
        dynamics.rep_from_config(config, ATLAS)
    assert info.value.token == 'w7'


def test_penner_fixes_every_corner():
    rep = catalog.rep('penner', ATLAS)
    for face in ATLAS.faces:
        for i in range(len(ATLAS.faces[face])):
            assert rep.corner_image((face, i))[0] == (face, i)


def test_translation_of_fixed_loop_is_bounded():
    loops_1 = graphs.build_slice(ATLAS, graphs.LOOPS, 1)
    report = dynamics.translation_estimate(
        twist(1), word(SHORT_LOOPS[1]), n=3, graph_slice=loops_1)
    assert report['verdict'] == dynamics.BOUNDED_EVIDENCE
    assert report['slope'] == '0'
    assert report['period'] == 1


def test_clique_prefixes_need_infinite_orbits():
    with pytest.raises(ValueError):
        dynamics.clique_prefixes(twist(1), [word(SHORT_LOOPS[1])])


def test_penner_clique_prefixes():
    rep = catalog.rep('penner', ATLAS)
    seeds = graphs.enumerate_vertices(ATLAS, graphs.LOOPS, 1)
    attractive, repulsive = dynamics.clique_prefixes(rep, seeds)
    assert attractive.side == dynamics.ATTRACTIVE
    assert repulsive.side == dynamics.REPULSIVE
    for side in (attractive, repulsive):
        for p in side.prefixes:
            assert curves.length(p) == side.depth


def test_rotation_number_from_cliques():
    prefixes = (curves.prefix(0, (('w1', 1), ('w2', -1))),
                curves.prefix(0, (('w1', 1), ('w3', -1))))
    swapped = dynamics.CliquePrefixSet(dynamics.ATTRACTIVE, prefixes, 2, 2,
                                       (prefixes,),
                                       dynamics.LOXODROMIC_EVIDENCE)
    result = dynamics.rotation_number(twist(1), [], cliques=swapped)
    assert result['estimate'] == '1/2'
    assert result['exact']
    fixed = swapped._replace(cycles=((prefixes[0],), (prefixes[1],)),
                             power=1)
    result = dynamics.rotation_number(twist(1), [], cliques=fixed)
    assert result['estimate'] == '0'


def test_rotation_number_of_identity():
    rep = catalog.rep('identity', ATLAS)
    result = dynamics.rotation_number(
        rep, [word(text) for text in SHORT_LOOPS], iterations=3)
    assert result['converged']
    assert result['estimate'] == '0'
    assert result['per_sample'] == ['0', '0', '0']


def test_identity_has_no_weight():
    rep = catalog.rep('identity', ATLAS)
    with pytest.raises(ValueError):
        dynamics.weight(rep, [word(SHORT_LOOPS[0])])


def test_penner_weight():
    rep = catalog.rep('penner', ATLAS)
    seeds = graphs.enumerate_vertices(ATLAS, graphs.LOOPS, 1)
    w, certificate = dynamics.weight(rep, seeds)
    assert w == certificate['weight']
    assert len(certificate['attractive']) == len(certificate['repulsive'])
    assert 1 <= w <= dynamics.weight_bound(ATLAS)
    assert certificate['weight_bound'] == 2
    assert certificate['power'] >= 1


def loxodromic_seeds():
    return graphs.enumerate_vertices(ATLAS, graphs.LOOPS, 1)


def test_weight_of_inverse_swaps_cliques():
    rep = catalog.rep('penner', ATLAS)
    w, certificate = dynamics.weight(rep, loxodromic_seeds())
    w_inverse, inverse_certificate = dynamics.weight(
        dynamics.inverse(rep), loxodromic_seeds())
    assert w_inverse == w
    assert inverse_certificate['attractive'] == certificate['repulsive']
    assert inverse_certificate['repulsive'] == certificate['attractive']


def test_weight_is_a_conjugacy_invariant():
    w, _ = dynamics.weight(catalog.rep('penner', ATLAS), loxodromic_seeds())
    conjugated, certificate = dynamics.weight(
        catalog.rep('penner-conjugate', ATLAS), loxodromic_seeds())
    assert conjugated == w
    assert certificate['weight_bound'] == dynamics.weight_bound(ATLAS)


def test_penner_cliques_alternate_and_attract():
    rep = catalog.rep('penner', ATLAS)
    w, certificate = dynamics.weight(rep, loxodromic_seeds())
    assert certificate['alternating']
    labels = [label for label, _ in certificate['alternation']]
    assert labels.count(dynamics.ATTRACTIVE) == w
    assert labels.count(dynamics.REPULSIVE) == w
    assert certificate['morse_smale']
    for flow in certificate['flows']:
        if not flow['ambiguous']:
            assert flow['limit'] in certificate['attractive']
            assert flow['limit'] in flow['interval']


@pytest.mark.parametrize('name', ['t1', 't3', 'penner'])
def test_act_preserves_circular_order(name):
    rep = catalog.rep(name, ATLAS)
    rays = graphs.enumerate_vertices(ATLAS, graphs.SHORT_RAYS, 0)
    images = [dynamics.act(rep, r) for r in rays]
    checked = 0
    for a, b, c in itertools.combinations(range(len(rays)), 3):
        before = curves.boundary_compare(ATLAS, rays[a], rays[b], rays[c])
        if before == 0:
            continue
        after = curves.boundary_compare(ATLAS, images[a], images[b],
                                        images[c])
        assert after == before, [curves.format_word(rays[i])
                                 for i in (a, b, c)]
        checked += 1
    assert checked > 0


def test_a_level_grows_along_orbits():
    rep = catalog.rep('penner', ATLAS)
    seeds = loxodromic_seeds()
    attractive, _ = dynamics.clique_prefixes(rep, seeds)
    depth = attractive.depth
    for seed in seeds:
        words = dynamics.orbit(rep, seed, dynamics.DEFAULT_MAX_ITER,
                               max_length=dynamics.MAX_ORBIT_LENGTH)
        levels = [dynamics.a_level(w, attractive) for w in words]
        assert levels[-1] == depth
        first = levels.index(depth)
        assert levels[first:] == [depth] * (len(levels) - first)
    # Short loops stay far from the attractive prefixes.
    assert max(dynamics.a_level(s, attractive) for s in seeds) < depth


def test_weight_bound():
    assert dynamics.weight_bound(ATLAS) == 2
    assert dynamics.weight_bound(catalog.atlas('genus-2-1')) == 6
    assert dynamics.weight_bound(catalog.atlas('cantor-tree', 3)) is None


def test_alternation_obstruction():
    result = dynamics.alternation_obstruction(
        dynamics.alternating_labels(6), dynamics.alternating_labels(4))
    assert result['obstructed']
    assert result['counting']
    assert result['assignments'] == 0
    assert (result['w_g'], result['w_h']) == (3, 2)
    result = dynamics.alternation_obstruction(
        dynamics.alternating_labels(4), dynamics.alternating_labels(4))
    assert not result['obstructed']
    assert result['example'] == [0, 1, 2, 3]


def test_alternation_obstruction_input():
    assert dynamics.alternating_labels(4) == ['+', '-', '+', '-']
    with pytest.raises(ValueError):
        dynamics.alternation_obstruction(['+', '+'], ['+', '-'])
    with pytest.raises(ValueError):
        dynamics.alternation_obstruction(['+', '-', '+'], ['+', '-'])


def test_a_level():
    cliques = dynamics.CliquePrefixSet(
        dynamics.ATTRACTIVE,
        (curves.prefix(0, (('w1', 1), ('w3', -1), ('w1', 1))),), 3, 1,
        (), dynamics.LOXODROMIC_EVIDENCE)
    assert dynamics.a_level(word('R0 | w1+ w3- | loop(R0)'), cliques) == 2
    assert dynamics.a_level(word(SHORT_LOOPS[1]), cliques) == 0
    assert dynamics.a_level(word('R1 | w1- | loop(R0)'), cliques) == 0


def both_ends(seeds):
    return list(seeds) + [curves.reverse(s) for s in seeds]


def test_penner_letters():
    assert dynamics.twist_letters(1, 2) == [1, 1]
    assert dynamics.twist_letters(1, 3) == [1, 2, 1, 2, 1, 2]
    assert dynamics.chain_penner_letters(5) == [1, 1, 3, 3, -2, -2]
    assert dynamics.chain_penner_letters(5) == catalog.REPS['penner']
    assert dynamics.penner_letters([(1, 2)], [(2, 3)]) == [1, 1, -2, -2]
    with pytest.raises(ValueError):
        dynamics.twist_letters(2, 2)
    with pytest.raises(ValueError):
        dynamics.chain_penner_letters(4)


@pytest.mark.parametrize('name', sorted(catalog.PRONGS))
def test_weight_matches_prongs(name):
    rep = catalog.rep(name)
    seeds = both_ends(graphs.enumerate_vertices(rep.atlas, graphs.LOOPS, 1))
    w, certificate = dynamics.weight(rep, seeds)
    assert w == catalog.PRONGS[name]
    assert w <= dynamics.weight_bound(rep.atlas)
    assert certificate['alternating']


def test_weight_one():
    rep = catalog.weight_example(1)
    seeds = both_ends(loxodromic_seeds())
    attractive, repulsive = dynamics.clique_prefixes(rep, seeds)
    assert len(attractive.prefixes) == 1
    assert len(repulsive.prefixes) == 1
    w, certificate = dynamics.weight(rep, seeds)
    assert w == 1
    labels = [label for label, _ in certificate['alternation']]
    assert sorted(labels) == [dynamics.ATTRACTIVE, dynamics.REPULSIVE]


def test_weight_three_alternates():
    rep = catalog.weight_example(3)
    seeds = both_ends(graphs.enumerate_vertices(rep.atlas, graphs.LOOPS, 1))
    w, certificate = dynamics.weight(rep, seeds)
    assert w == 3
    assert certificate['weight_bound'] == 3
    assert len(certificate['attractive']) == 3
    assert len(certificate['repulsive']) == 3
    labels = [label for label, _ in certificate['alternation']]
    assert len(labels) == 6
    for a, b in zip(labels, labels[1:] + labels[:1]):
        assert a != b


def test_chain_penner_reaches_the_bound():
    for n in (5, 6, 7):
        atlas = catalog.sphere_atlas(n)
        rep = dynamics.chain_penner(atlas)
        assert rep.name == 'chain-penner-%d' % n
        assert rep.inverse is not None
        corpus = graphs.enumerate_vertices(atlas, graphs.LOOPS, 1)
        assert dynamics.validate_rep(rep, corpus)['passed']


def test_rotation_by_a_third():
    rep = catalog.rep('rotation-third', ATLAS)
    sample = [word(text) for text in SHORT_LOOPS]
    for w in sample:
        words = dynamics.orbit(rep, w, 3)
        assert words[3] == curves.normalize(ATLAS, w)
        assert words[1] != words[0]
    result = dynamics.rotation_number(rep, sample, iterations=6)
    assert result['converged']
    assert result['estimate'] in ('1/3', '2/3')


def test_rotation_number_of_three_cycling_prefixes():
    prefixes = dynamics.circular_order(
        ATLAS, [curves.prefix(0, ((arc, 1),)) for arc in ('w1', 'w2', 'w3')])
    forward = dynamics.CliquePrefixSet(dynamics.ATTRACTIVE, tuple(prefixes),
                                       1, 3, (tuple(prefixes),),
                                       dynamics.LOXODROMIC_EVIDENCE)
    result = dynamics.rotation_number(twist(1), [], cliques=forward)
    assert result['estimate'] == '1/3'
    assert result['cycle_length'] == 3
    backward = forward._replace(
        cycles=((prefixes[0], prefixes[2], prefixes[1]),))
    result = dynamics.rotation_number(twist(1), [], cliques=backward)
    assert result['estimate'] == '2/3'


def test_distinct_weights_certificate():
    seeds = both_ends(loxodromic_seeds())
    result = dynamics.distinct_weights_certificate(
        catalog.rep('north-south', ATLAS), catalog.rep('penner', ATLAS),
        seeds, seeds)
    assert result['weights'] == [1, 2]
    assert result['heavier'] == 'penner'
    assert result['obstruction']['obstructed']
    assert result['obstruction']['w_g'] == 2
    assert result['obstruction']['w_h'] == 1
    assert result['passed']


def test_equal_weights_give_no_certificate():
    seeds = both_ends(loxodromic_seeds())
    result = dynamics.distinct_weights_certificate(
        catalog.rep('penner', ATLAS), catalog.rep('penner-conjugate', ATLAS),
        seeds, seeds)
    assert result['weights'][0] == result['weights'][1]
    assert result['heavier'] is None
    assert not result['obstruction']['obstructed']
    assert not result['passed']


if __name__ == '__main__':
    pytest.main([__file__])
