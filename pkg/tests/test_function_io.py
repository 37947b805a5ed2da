import os
import tempfile
import unittest

import numpy as np

from kkltype.errors import FunctionFormatError
from kkltype.function_io import (
    dumps_function,
    function_document,
    load_function,
    loads_function,
    read_function_file,
    save_function,
)
from kkltype.normed import NormedSpace
from kkltype.zoo import dictator, majority, random_vector

SHORT_ENTRY = """{
  "format_version": 1,
  "n": 1,
  "d": 2,
  "values": [
    [1.0, 2.0],
    [3.0]
  ]
}
"""


class TestWriting(unittest.TestCase):

    def test_layout(self):
        """Header fields first, then one value per line; boolean values are integers."""
        text = dumps_function(dictator(1))
        lines = text.splitlines()
        self.assertEqual(lines[1], '  "format_version": 1,')
        self.assertIn('  "values": [', lines)
        self.assertEqual(lines[lines.index('  "values": [') + 1], "    1,")
        self.assertEqual(lines[lines.index('  "values": [') + 2], "    -1")

    def test_default_space_is_written(self):
        """Without an explicit space the Euclidean one is recorded."""
        document = function_document(random_vector(2, 3, seed=1))
        self.assertEqual(document["space"], {"d": 3, "q": 2.0})
        self.assertFalse(document["boolean"])

    def test_save_and_read(self):
        """Saved functions and spaces come back exactly."""
        f = random_vector(3, 2, seed=4)
        space = NormedSpace(d=2, q=4.0)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "nested", "f.json")
            save_function(f, path, space=space)
            loaded = read_function_file(path)
            np.testing.assert_array_equal(loaded.function.values, f.values)
            self.assertEqual(loaded.space, space)
            self.assertTrue(load_function(path).n == 3)

    def test_boolean_flag_survives(self):
        """Boolean functions are read back as boolean."""
        loaded = loads_function(dumps_function(majority(3)))
        self.assertTrue(loaded.function.is_boolean)


class TestReadingErrors(unittest.TestCase):

    def test_invalid_json(self):
        """Broken JSON reports the line of the problem."""
        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function('{\n  "n": 1,\n')
        self.assertIsNotNone(ctx.exception.line)

    def test_component_count(self):
        """An entry with the wrong number of components is located by line."""
        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(SHORT_ENTRY)
        self.assertEqual(ctx.exception.field, "values")
        self.assertEqual(ctx.exception.line, 7)

    def test_wrong_entry_count(self):
        """2^n entries are required."""
        text = SHORT_ENTRY.replace('"d": 2', '"d": 1').replace("[1.0, 2.0],\n    [3.0]", "1.0,\n    2.0,\n    3.0")
        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(text)
        self.assertEqual(ctx.exception.field, "values")
        self.assertEqual(ctx.exception.line, 5)

    def test_schema_errors(self):
        """Missing keys, unknown versions and non-numeric values are schema errors with a field."""
        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(SHORT_ENTRY.replace('  "d": 2,\n', ""))
        self.assertEqual(ctx.exception.field, "d")

        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(SHORT_ENTRY.replace('"format_version": 1', '"format_version": 2'))
        self.assertEqual(ctx.exception.field, "format_version")
        self.assertEqual(ctx.exception.line, 2)

        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(SHORT_ENTRY.replace("[3.0]", '"x"'))
        self.assertEqual(ctx.exception.field, "values")
        self.assertEqual(ctx.exception.line, 7)

    def test_boolean_mismatch(self):
        """A function flagged boolean must take values +-1."""
        text = dumps_function(random_vector(1, 1, seed=0)).replace('"boolean": false', '"boolean": true')
        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(text)
        self.assertEqual(ctx.exception.field, "boolean")

    def test_space_mismatch(self):
        """The recorded space must match the value dimension."""
        text = dumps_function(random_vector(1, 2, seed=0), space=NormedSpace(d=2)).replace('{"d": 2,', '{"d": 3,')
        with self.assertRaises(FunctionFormatError) as ctx:
            loads_function(text)
        self.assertEqual(ctx.exception.field, "space")


if __name__ == '__main__':
    unittest.main()
