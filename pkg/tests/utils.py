import os
import shutil
import tempfile
import unittest

import numpy as np

from qlbdirac.algebra import build_dirac_set, unitarity_residual
from qlbdirac.config.exceptions import InvalidDataException
from qlbdirac.exceptions import QLBError


class QLBTestCase(unittest.TestCase):
    maxDiff = 2000

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.addTypeEqualityFunc(InvalidDataException, 'assertInvalidDataExceptionEqual')

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.dirac = build_dirac_set()

    def assertInvalidDataExceptionEqual(self, left, right, msg=None):
        return self.assertDictEqual(
            left.invalid_fields, right.invalid_fields, msg=msg)

    def assertArrayClose(self, actual, expected, atol=1e-12, msg=None):
        """
        Max-norm comparison of two arrays.
        """
        actual = np.asarray(actual)
        expected = np.asarray(expected)
        self.assertEqual(actual.shape, expected.shape, msg=msg)
        difference = float(np.max(np.abs(actual - expected))) if actual.size else 0.0
        if not difference <= atol:
            self.fail(self._formatMessage(
                msg, "Arrays differ by {0:.3e} > {1:.1e}".format(difference, atol)))

    def assertUnitary(self, matrix, atol=1e-12, msg=None):
        residual = unitarity_residual(matrix)
        if not residual <= atol:
            self.fail(self._formatMessage(
                msg, "Unitarity residual {0:.3e} > {1:.1e}".format(residual, atol)))

    def assertQLBError(self, code, func, *args, **kwargs):
        """
        ``func(*args, **kwargs)`` raises a :exc:`QLBError` with ``code``.
        """
        with self.assertRaises(QLBError) as cm:
            func(*args, **kwargs)
        self.assertEqual(code, cm.exception.code)
        return cm.exception

    def make_tempdir(self):
        path = tempfile.mkdtemp(prefix='qlbdirac-')
        self.addCleanup(shutil.rmtree, path, ignore_errors=True)
        return path


CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'configs')


def config_path(name):
    return os.path.join(CONFIG_DIR, name)
