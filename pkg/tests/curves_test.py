import itertools

import pytest

from loopforge import catalog
from loopforge import curves
from loopforge.io_utils import ParseError


ATLAS = catalog.atlas('sphere-5')

# Loops of one crossing: each one surrounds the first i punctures.
SHORT_LOOPS = ['R0 | w1+ | loop(R1)',
               'R0 | w2+ | loop(R1)',
               'R0 | w3+ | loop(R1)']

WORD_TEXTS = ['R0 | w1+ w3- | loop(R0)',
              'R1 | w2- | loop(R0)',
              'R0 | ray(A:2)',
              'R0 | w1+ | prefix',
              'R0 | periodic(w1+ w3-)']


def word(text, atlas=ATLAS):
    return curves.parse_word(text, atlas)


def test_format_and_parse():
    for text in WORD_TEXTS:
        assert curves.format_word(word(text)) == text
    # An empty crossing part may be written out.
    assert word('R0 | | ray(A:2)') == word('R0 | ray(A:2)')


def test_word_config():
    w = word('R0 | | periodic(w1+ w3-)')
    config = curves.word_to_config(w)
    assert config['end'] == {'kind': 'periodic', 'value': ['w1+', 'w3-']}
    assert curves.word_from_config(config, ATLAS) == w


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        curves.parse_word('R0 | w1+ w2x | loop(R1)')
    assert info.value.location == 'word.crossings[1]'
    with pytest.raises(ParseError) as info:
        word('R0 | w9+ | loop(R1)')
    assert info.value.token == 'w9'
    with pytest.raises(ParseError):
        curves.parse_word('Q0 | w1+ | loop(R1)')
    with pytest.raises(ParseError):
        curves.parse_word('R0 | w1+ | spiral')
    # `w1-` is a side of `B` while the word starts in `A`.
    with pytest.raises(ParseError):
        word('R0 | w1- | loop(R1)')
    # Loops end at the marked puncture; rays must not.
    with pytest.raises(ParseError):
        word('R0 | | ray(A:0)')


def test_backtracks_cancel():
    w = word('R0 | w1+ w2- w2+ | loop(R1)')
    assert curves.normalize(ATLAS, w) == word('R0 | w1+ | loop(R1)')


def test_flank_crossings_slide():
    # Crossing the first flank of R0 and coming back is trivial.
    w = curves.normalize(ATLAS, word('R0 | w0+ | loop(R1)'))
    assert curves.is_trivial(w)
    assert w == curves.loop(0, (), 0)
    w, moves = curves.normalize(ATLAS, word('R0 | w1+ w4- | loop(R0)'),
                                return_moves=True)
    assert w == word('R0 | w1+ | loop(R1)')
    assert [m.kind for m in moves] == [curves.SLIDE_END]


def test_short_ray_slides_to_A():
    w = curves.normalize(ATLAS, word('R0 | w1+ | ray(B:4)'))
    assert w == word('R0 | | ray(A:2)')


def test_trivial_loops_share_a_normal_form():
    assert curves.normalize(ATLAS, word('R1 | | loop(R1)')) == \
        curves.normalize(ATLAS, word('R0 | | loop(R0)'))


def test_periodic_normal_form():
    w = curves.normalize(ATLAS, word('R0 | w1+ w3- | periodic(w1+ w3-)'))
    assert w == word('R0 | | periodic(w1+ w3-)')
    w = curves.normalize(ATLAS,
                         word('R0 | | periodic(w1+ w3- w1+ w3-)'))
    assert w.end.value == (('w1', 1), ('w3', -1))
    with pytest.raises(ValueError):
        curves.normalize(ATLAS, word('R0 | | periodic(w1+ w1-)'))


@pytest.mark.parametrize('name,max_length', [('sphere-5', 3),
                                             ('torus-3', 2)])
def test_confluence(name, max_length):
    atlas = catalog.atlas(name)
    for w in curves.all_loop_words(atlas, max_length):
        forms = curves.normal_forms(atlas, w)
        assert len(forms) == 1, curves.format_word(w)
        assert forms[0] == curves.normalize(atlas, w)


def test_all_loop_words_are_well_formed():
    words = list(curves.all_loop_words(ATLAS, 2))
    assert len(set(words)) == len(words)
    for w in words:
        curves.check_word(ATLAS, w)
    # One word without crossings per fan region.
    assert sum(1 for w in words if not w.crossings) == 2


def test_short_loops_are_simple_and_disjoint():
    loops = [word(text) for text in SHORT_LOOPS]
    for w in loops:
        assert curves.is_simple(ATLAS, w)
        assert curves.oracle_is_simple(ATLAS, w)
    for a, b in itertools.combinations(loops, 2):
        assert curves.disjoint(ATLAS, a, b)
        assert curves.intersection_number(ATLAS, a, b) == 0
        assert curves.oracle_intersection_number(ATLAS, a, b) == 0


def test_overlapping_loops_meet():
    a = word('R0 | w1+ w3- | loop(R0)')
    b = word('R0 | w2+ | loop(R1)')
    assert curves.is_simple(ATLAS, a)
    assert not curves.disjoint(ATLAS, a, b)
    assert curves.intersection_number(ATLAS, a, b) > 0
    assert curves.oracle_intersection_number(ATLAS, a, b) > 0


def test_trivial_loop_is_not_simple():
    assert not curves.is_simple(ATLAS, curves.loop(0, (), 0))


def test_intersection_number_needs_finite_words():
    with pytest.raises(ValueError):
        curves.intersection_number(ATLAS,
                                   word('R0 | | periodic(w1+ w3-)'),
                                   word(SHORT_LOOPS[0]))


def test_reverse_and_canonical_loop():
    w = word('R0 | w1+ w3- | loop(R0)')
    r = curves.reverse(w)
    assert r == word('R0 | w3+ w1- | loop(R0)')
    assert curves.reverse(r) == w
    assert curves.canonical_loop(ATLAS, w) == curves.canonical_loop(ATLAS, r)


def test_boundary_order():
    keys = [curves.boundary_key(ATLAS, word(text)) for text in SHORT_LOOPS]
    assert len(set(keys)) == 3
    assert curves.compare_keys((0, 1), (0, 1, 5)) == 0
    assert curves.compare_keys((0, 1), (0, 2)) == -1
    assert curves.compare_keys((1,), (0, 2)) == 1


def test_boundary_compare():
    a, b, c = [word(text) for text in SHORT_LOOPS]
    orientation = curves.boundary_compare(ATLAS, a, b, c)
    assert orientation in (1, -1)
    assert curves.boundary_compare(ATLAS, b, c, a) == orientation
    assert curves.boundary_compare(ATLAS, a, c, b) == -orientation
    assert curves.boundary_compare(ATLAS, a, a, b) == 0


def test_k_begins_like():
    r = word('R0 | | periodic(w1+ w3-)')
    w = word('R0 | w1+ w3- w1+ | prefix')
    assert curves.k_begins_like(w, r, 3)
    assert not curves.k_begins_like(w, r, 4)
    assert curves.crossing_prefix(r, 3) == (('w1', 1), ('w3', -1),
                                            ('w1', 1))


def test_around_vertex():
    assert curves.around_vertex(ATLAS, ('A', 2)) == [('w1', 1), ('w2', -1)]
    assert curves.around_vertex(ATLAS, ('A', 0)) == [('w4', 1), ('w0', -1)]


def test_short_ray_certificate():
    r = word('R0 | | ray(A:2)')
    certificate = curves.ray_certificate(ATLAS, r)
    assert certificate['verdict'] == curves.NOT_HIGH_FILLING
    assert certificate['witness'] == 'R0 | w1+ w2- | loop(R0)'
    assert certificate['simple']
    assert not certificate['provisional']


def test_periodic_ray_certificate():
    r = word('R0 | | periodic(w1+ w3-)')
    certificate = curves.ray_certificate(ATLAS, r)
    assert certificate['verdict'] == curves.NOT_HIGH_FILLING
    assert certificate['witness'] == 'R0 | w1+ w3- | loop(R0)'
    assert certificate['provisional']
    prefix = curves.prefix(0, r.end.value)
    assert curves.ray_certificate(ATLAS, prefix)['verdict'] == \
        curves.INCONCLUSIVE


@pytest.mark.parametrize('side', [curves.LEFT, curves.RIGHT])
def test_approximate_with_loop(side):
    r = word('R0 | | periodic(w1+ w3-)')
    w = curves.approximate_with_loop(ATLAS, r, side, 2)
    assert w.end.kind == curves.LOOP
    assert curves.k_begins_like(w, r, 2)
    assert curves.is_simple(ATLAS, w)
    order = curves.compare_keys(curves.boundary_key(ATLAS, w),
                                curves.boundary_key(ATLAS, r))
    assert order == (-1 if side == curves.LEFT else 1)


def test_approximate_with_loop_errors():
    r = word('R0 | | periodic(w1+ w3-)')
    with pytest.raises(ValueError):
        curves.approximate_with_loop(ATLAS, r, 'up', 2)
    with pytest.raises(ValueError):
        curves.approximate_with_loop(ATLAS, word(SHORT_LOOPS[0]),
                                     curves.LEFT, 1)


if __name__ == '__main__':
    pytest.main([__file__])
