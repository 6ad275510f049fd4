"""validation.py

JSON schemas for every document the package reads (densities, sequence specs, experiment
configs) and the helper that turns :mod:`jsonschema` failures into
:class:`~gamma_ppc.errors.ConfigValidationError` with a readable field path.
"""

import logging
from typing import Any, Dict, Iterable, Union

from jsonschema import Draft4Validator, FormatChecker
from jsonschema.exceptions import ValidationError, best_match

from .errors import ConfigValidationError

LOGGER = logging.getLogger('gamma_ppc.validation')

#: a real number given either as a JSON number or as a rational/decimal string such as "1/3"
REAL_SCHEMA = {
    'type': ['number', 'string'],
    'pattern': r'^\s*[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(\s*/\s*\d+)?\s*$'
}

SEED_SCHEMA = {'type': 'integer', 'minimum': 0, 'maximum': 2 ** 64 - 1}

DENSITY_SCHEMA = {
    'type': 'object',
    'properties': {
        'breakpoints': {'type': 'array', 'items': REAL_SCHEMA, 'minItems': 2},
        'values': {'type': 'array', 'items': REAL_SCHEMA, 'minItems': 1},
    },
    'required': ['breakpoints', 'values'],
    'additionalProperties': False
}

DENSITY_MODEL_SCHEMA = {
    'type': 'object',
    'properties': {
        'kind': {'enum': ['theorem1', 'theorem3', 'piecewise', 'uniform']},
        'gamma': REAL_SCHEMA,
        'delta': REAL_SCHEMA,
        'epsilon': REAL_SCHEMA,
        'breakpoints': DENSITY_SCHEMA['properties']['breakpoints'],
        'values': DENSITY_SCHEMA['properties']['values'],
    },
    'required': ['kind'],
    'additionalProperties': False
}

SEQUENCE_KINDS = ('vdc', 'iid_uniform', 'iid_density', 'thm3_interleaved', 'thm4_doubled', 'dilated')

SEQUENCE_SPEC_SCHEMA = {
    'type': 'object',
    'properties': {
        'kind': {'enum': list(SEQUENCE_KINDS)},
        'params': {'type': 'object'},
        'seed': SEED_SCHEMA,
    },
    'required': ['kind'],
    'additionalProperties': False
}

#: per-kind schema of the ``params`` object of a sequence spec
SEQUENCE_PARAM_SCHEMAS = {
    'vdc': {'type': 'object', 'additionalProperties': False},
    'iid_uniform': {'type': 'object', 'additionalProperties': False},
    'iid_density': {
        'type': 'object',
        'properties': {'density': DENSITY_MODEL_SCHEMA},
        'required': ['density'],
        'additionalProperties': False
    },
    'thm3_interleaved': {
        'type': 'object',
        'properties': {'gamma': REAL_SCHEMA, 'epsilon': REAL_SCHEMA},
        'required': ['gamma'],
        'additionalProperties': False
    },
    'thm4_doubled': {
        'type': 'object',
        'properties': {'base': SEQUENCE_SPEC_SCHEMA, 'gamma2': REAL_SCHEMA},
        'required': ['base', 'gamma2'],
        'additionalProperties': False
    },
    'dilated': {
        'type': 'object',
        'properties': {'multiplier': {'type': 'integer', 'minimum': 1}, 'x': REAL_SCHEMA},
        'required': ['multiplier', 'x'],
        'additionalProperties': False
    },
}

EXPERIMENT_CONFIG_SCHEMA = {
    'type': 'object',
    'properties': {
        'spec': SEQUENCE_SPEC_SCHEMA,
        'gammas': {'type': 'array', 'items': REAL_SCHEMA, 'minItems': 1},
        's_values': {'type': 'array', 'items': REAL_SCHEMA, 'minItems': 1},
        'n_schedule': {'type': 'array', 'items': {'type': 'integer', 'minimum': 2}, 'minItems': 1},
        'seeds': {'type': 'array', 'items': SEED_SCHEMA, 'minItems': 1},
        'output': {'type': ['string', 'null']},
        'format': {'enum': ['csv', 'json']},
        'workers': {'type': 'integer', 'minimum': 1},
    },
    'required': ['spec', 'gammas', 's_values', 'n_schedule'],
    'additionalProperties': False
}


def format_path(path: Iterable[Union[str, int]], prefix: str = '') -> str:
    """Render a jsonschema error path as ``spec.params.gamma`` or ``gammas[0]``"""
    rendered = prefix
    for part in path:
        if isinstance(part, int):
            rendered += f'[{part}]'
        else:
            rendered = f'{rendered}.{part}' if rendered else str(part)
    return rendered


#: validators for the module level schemas, keyed by schema identity
_VALIDATORS = {id(schema): Draft4Validator(schema, format_checker=FormatChecker()) for schema in (
    DENSITY_SCHEMA, SEQUENCE_SPEC_SCHEMA, EXPERIMENT_CONFIG_SCHEMA, *SEQUENCE_PARAM_SCHEMAS.values())}


def get_validator(schema: Dict[str, Any]) -> Draft4Validator:
    """Get the :class:`~jsonschema.Draft4Validator` for one of the schemas in this module, or build
    a fresh one for any other schema dict"""
    if id(schema) in _VALIDATORS:
        return _VALIDATORS[id(schema)]
    return Draft4Validator(schema, format_checker=FormatChecker())


def handle_json_validation_exc(error: ValidationError, prefix: str = '') -> ConfigValidationError:
    """Convert a :exc:`~jsonschema.exceptions.ValidationError` into our error type

    :param error: The exception that was raised
    :param prefix: path of the validated document inside its parent document
    :return: the error to raise, carrying the field path
    """
    path = format_path(error.absolute_path, prefix)
    LOGGER.error('document validation failed: path: %s, msg: %s, instance: %r',
                 path or '<root>', error.message, error.instance)
    return ConfigValidationError(error.message, path or prefix or None)


def validate_document(schema: Dict[str, Any], document: Any, prefix: str = '') -> None:
    """Validate `document` against `schema`

    :param schema: a JSON schema dict
    :param document: the decoded JSON document
    :param prefix: the document's own path inside its parent, prepended to error paths
    :raises ConfigValidationError: with the path of the most relevant failing field
    """
    error = best_match(get_validator(schema).iter_errors(document))
    if error is not None:
        raise handle_json_validation_exc(error, prefix)
