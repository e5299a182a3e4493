"""Utilities for reading and writing loopforge artifacts.

Covers keyword-argument checking, location-aware parse errors, the
artifact cache directory and deterministic JSON dumps.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import json
import os
import warnings

CACHE_DIR_ENV = 'LOOPFORGE_CACHE_DIR'
DEFAULT_CACHE_DIR = os.path.join('~', '.loopforge')

# Provenance tags attached to every reported number.
COMPUTED = 'computed'
GOLDEN = 'golden'
PUBLISHED_CONSTANT = 'published-constant'


class ParseError(ValueError):
    """Raised on malformed input, carrying where the problem was found.

    # Arguments
        message: What is wrong.
        location: Field path, file name or token index of the offending
            input, e.g. `'atlas.side_A[3]'`.
        token: The offending token itself (an arc id for atlas input).
    """

    def __init__(self, message, location=None, token=None):
        self.location = location
        self.token = token
        text = message
        if token is not None:
            text += ' (offending token: `' + str(token) + '`)'
        if location is not None:
            text += ' at ' + str(location)
        super(ParseError, self).__init__(text)


def check_kwargs(kwargs, allowed):
    """Raises `TypeError` on keyword arguments outside `allowed`.

    # Arguments
        kwargs: Dictionary of keyword arguments.
        allowed: Iterable of accepted names.
    """
    for key in kwargs.keys():
        if key not in allowed:
            raise TypeError('Invalid keyword argument: %s' % key)


def check_mode(value, allowed, name='mode'):
    """Validates a string selector argument and returns it."""
    if value not in allowed:
        raise ValueError('The `' + name + '` argument should be one of ' +
                         ', '.join('"%s"' % a for a in allowed) +
                         '. Received: ' + repr(value))
    return value


def get_cache_dir(create=True):
    """Returns the cache directory for distance matrices and goldens.

    The directory is read from the `LOOPFORGE_CACHE_DIR` environment
    variable and defaults to `~/.loopforge`. If it cannot be created, a
    warning is emitted and a directory under `/tmp` is used instead.
    """
    cache_dir = os.path.expanduser(os.environ.get(CACHE_DIR_ENV,
                                                  DEFAULT_CACHE_DIR))
    if create and not os.path.exists(cache_dir):
        try:
            os.makedirs(cache_dir)
        except OSError:
            fallback = os.path.join('/tmp', '.loopforge')
            warnings.warn('Cache directory ' + cache_dir +
                          ' is not writable, using ' + fallback)
            if not os.path.exists(fallback):
                os.makedirs(fallback)
            cache_dir = fallback
    return cache_dir


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(',', ': '))


def dump_json(obj, path):
    with open(path, 'w') as f:
        f.write(dumps(obj))
        f.write('\n')


def load_json(path):
    """Loads a JSON file, turning read and decoder failures into
    `ParseError`.
    """
    try:
        with open(path) as f:
            return json.load(f)
    except (IOError, OSError) as e:
        raise ParseError('Cannot read file: ' + str(e), location=path)
    except ValueError as e:
        raise ParseError('Invalid JSON: ' + str(e), location=path)


def require(config, key, location):
    """Returns `config[key]` or raises a `ParseError` naming the field."""
    if not isinstance(config, dict):
        raise ParseError('Expected an object', location=location)
    if key not in config:
        raise ParseError('Missing field `' + key + '`', location=location)
    return config[key]


def provenance(value, source=COMPUTED, **extra):
    """Wraps a reported number with its provenance tag."""
    entry = {'value': value, 'provenance': source}
    entry.update(extra)
    return entry
