"""
treetransfer json validation
"""
import os
from importlib.util import find_spec
import json
import jsonschema
from treetransfer.log import vprint

json_schema_files = find_spec(
    "treetransfer.json_schema").submodule_search_locations[0]

_schema_cache = {}


def schema_path(schema_name):
    """
    Path of a bundled schema, e.g. 'tree_spec' -> .../tree_spec_schema.json
    """
    return os.path.join(json_schema_files, f'{schema_name}_schema.json')


def _load_schema(json_schema):
    if json_schema not in _schema_cache:
        with open(json_schema, 'r', encoding='utf-8') as f:
            _schema_cache[json_schema] = json.load(f)
    return _schema_cache[json_schema]


def validate_json(data, schema_name):
    """
    Validate decoded JSON data against a bundled schema. Raises
    jsonschema.ValidationError on mismatch.
    """
    json_schema = schema_path(schema_name)
    jsonschema.validate(data, _load_schema(json_schema))
    vprint(f'Validated data against {json_schema}')
    return data


def open_json(json_file, schema_name=None, validate=True):
    """
    Open a json file and return the data as a dict, validated against the
    named bundled schema.
    """
    with open(json_file, 'r', encoding='utf-8') as f:
        vprint(f'Opening {json_file}')
        data = json.load(f)
    if validate and schema_name is not None:
        validate_json(data, schema_name)
    return data


def load_json_argument(argument, schema_name):
    """
    Accept a decoded dict, an inline JSON string (starting with '{' or '[')
    or a path to a JSON file, and return the validated data.
    """
    if isinstance(argument, (dict, list)):
        return validate_json(argument, schema_name)
    if argument.lstrip().startswith(('{', '[')):
        return validate_json(json.loads(argument), schema_name)
    return open_json(argument, schema_name)
